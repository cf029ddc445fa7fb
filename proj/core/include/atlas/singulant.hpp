#pragma once

#include <array>
#include <complex>
#include <vector>

#include "atlas/error.hpp"

namespace atlas {

using cplx = std::complex<double>;

inline constexpr int kBranches = 4;
inline constexpr cplx kZStar{3.0, 0.5};

struct PhaseParams {
    double a = 0.0;
    double b = 0.0;
};

// The parameter pair whose singulants at z* are the published reference
// values. See README for why this is (3, 1).
PhaseParams reference_params();
bool is_reference(const PhaseParams& p);

struct Rational {
    int num = 0;
    int den = 1;
    double value() const { return double(num) / double(den); }
};

struct Branch {
    int label = 0;
    cplx tau;
    cplx chi;
    cplx amp0;
    Rational alpha;
};

struct Frame {
    cplx z;
    std::array<Branch, kBranches> branches;

    const cplx& tau(int i) const { return branches[i].tau; }
    const cplx& chi(int i) const { return branches[i].chi; }
    const cplx& amp0(int i) const { return branches[i].amp0; }
    std::array<cplx, kBranches> taus() const;
};

enum class TurningKind { turning, virtual_ };

struct TurningPoint {
    cplx z;
    int i = 0;  // 0-based branch indices in the canonical labelling
    int j = 0;
    TurningKind kind = TurningKind::turning;
    int multiplicity = 1;
};

// F(t,z) = -(t^5 - a t^3 - i b t^2 + z t); integrand is exp(-F/eps).
cplx phase(cplx t, cplx z, const PhaseParams& p);
cplx phase_dt(cplx t, cplx z, const PhaseParams& p);

cplx quartic(cplx tau, cplx z, const PhaseParams& p);
cplx quartic_dtau(cplx tau, const PhaseParams& p);
cplx singulant(cplx tau, cplx z, const PhaseParams& p);
// -10 tau^3 + 3 a tau - i b; psi0 = sqrt(pi)/sqrt(D).
cplx amp_denominator(cplx tau, const PhaseParams& p);

double min_gap(const std::array<cplx, kBranches>& r);

std::array<cplx, kBranches> saddle_roots_unchecked(cplx z, const PhaseParams& p);
// Throws RootConditioning when two roots lie within 1e-9.
std::array<cplx, kBranches> saddle_roots(cplx z, const PhaseParams& p);

// Sign of the arg(eps)=0 integration direction along C_i relative to
// i/sqrt(D_i) with sqrt(D_i) principal at z*.
std::array<int, kBranches> reference_orientation(const PhaseParams& p);

Frame reference_frame(const PhaseParams& p);
// Frame with the given labelled roots; amplitudes use the principal root.
Frame make_frame(cplx z, const std::array<cplx, kBranches>& taus, const PhaseParams& p);
Frame frame_at(cplx z, const PhaseParams& p, const Frame* ref = nullptr);
Frame advance(const Frame& from, cplx z, const PhaseParams& p);
std::vector<Frame> continue_frame(const std::vector<cplx>& path, const PhaseParams& p);
std::array<int, kBranches> match_labels(const std::array<cplx, kBranches>& from,
                                        const std::array<cplx, kBranches>& to);

std::vector<TurningPoint> turning_points(const PhaseParams& p);
std::vector<TurningPoint> virtual_turning_points(const PhaseParams& p);
int coalescence_class(const PhaseParams& p);

struct PhysicalMap {
    cplx z;
    PhaseParams params;
    double eps = 1.0;
};
PhysicalMap from_physical(double x1, double x2, double x3);

}  // namespace atlas
