#pragma once

#include <array>
#include <optional>
#include <vector>

#include "atlas/transport.hpp"

namespace atlas {

inline constexpr int kValleys = 5;

// Valley k at infinity: arg t = (arg eps + pi + 2 pi k) / 5.
int valley_of(cplx t, double arg_eps);

// Steepest-descent contour through saddle t_i = -tau_i on which
// (F - chi_i)/eps is real and non-negative. forward follows i sqrt(eps)/sqrt(D_i)
// with the frame's branch of sqrt(D_i); backward is the other half.
struct DescentPath {
    int saddle = 0;
    double arg_eps = 0;
    std::vector<cplx> forward, backward;
    int from_valley = -1, to_valley = -1;
    double closest_saddle = 0;  // nearest approach to another saddle
    std::array<int, kValleys> chain() const;
};
DescentPath descent_path(int i, const Frame& f, double arg_eps, const PhaseParams& p);

struct AdjacencyRecord {
    int i = 0, j = 0;
    int A = 0;
    int gamma = 0;
    int stokes() const { return gamma ? -A : A; }
};
AdjacencyRecord adjacency(int i, int j, const Frame& f, const PhaseParams& p, double probe = 1e-3);

StokesMatrix base_stokes_constants(const Frame& f, const PhaseParams& p);
StokesMatrix base_stokes_constants(cplx z, const PhaseParams& p);

// Integer weights n_i with L = sum n_i C_i(arg) as valley chains, where L runs
// from valley 4 to valley 0.
std::array<int, kBranches> contour_weights(const Frame& f, const PhaseParams& p, double arg = 0.0);

struct Quadrature {
    cplx value;
    double rel_error = 0;
    std::array<int, kBranches> weights{};
};
// psi = (1/(i eps^{1/5})) int_L exp(-F/eps) dt. rotation tilts every descent
// contour to arg eps + rotation, giving an independent decomposition.
Quadrature integrate_swallowtail(cplx z, const PhaseParams& p, double eps, double rotation = 0.0);
Quadrature integrate_swallowtail(const Frame& f, const PhaseParams& p, double eps, double rotation = 0.0);

// Far-field leading term along arg z = -3pi/4 for a = b = 0, without the
// eps^{3/10} factor carried by the integral.
cplx far_field(cplx z, double eps);

// psi_n^(i) for n = 0..n_max from the coefficients of dt/dv on the circle
// |v| = rho, where F - chi_i = v^2 and rho^2 = 0.85 min_j |chi_j - chi_i|.
std::vector<cplx> late_terms(int n_max, int i, const Frame& f, const PhaseParams& p);
cplx late_term(int n, int i, const Frame& f, const PhaseParams& p);

double gamma_half(int n);  // Gamma(n + 1/2)
double gamma_int(int n);   // Gamma(n), n >= 1

struct LimitEstimate {
    cplx value;
    double error = 0;
    std::vector<cplx> raw;  // unaccelerated estimates for n = 1..n_max
};
// subtract: pairs (k, S_ik) whose divergent contributions are removed first.
LimitEstimate stokes_constant_limit(int i, int j, const Frame& f, const PhaseParams& p, int n_max = 40,
                                    const std::vector<std::pair<int, cplx>>& subtract = {});

// sum_i sigma_i(beta) exp(-chi_i/eps) sum_{n<=N_i} eps^n psi_n^(i); terms = 0
// keeps the leading amplitude only, terms < 0 truncates each series optimally.
cplx transseries_sum(const ConnectionState& s, const PhaseParams& p, double eps, const std::vector<double>& beta,
                     int terms = 0);

struct Calibration {
    cplx anchor;
    cplx c;
    int terms = 0;
};
Calibration calibrate(const ConnectionState& at_anchor, const PhaseParams& p, double eps,
                      const std::vector<double>& beta, int terms = 0);
cplx transseries_eval(const ConnectionState& s, const PhaseParams& p, double eps, const std::vector<double>& beta,
                      const Calibration& cal);

struct JumpEstimate {
    cplx before, after;  // subdominant coefficient on the negative and positive sides
    cplx z_before, z_after;
    int dominant = 0, subdominant = 0;
    cplx jump() const { return after - before; }
};
// Transect across l_{i>j} through a point on it, reaching arg(chi_j - chi_i) =
// -angle and +angle. Every other exponential present at the point is removed
// with its optimally truncated series and the remainder divided by the j-th.
// The pair is reordered so that i is the dominant exponential on the line.
JumpEstimate extract_subdominant_jump(const ConnectionState& on_line, int i, int j, const PhaseParams& p, double eps,
                                      const std::vector<double>& beta, const Calibration& cal, double angle = 0.8);

}  // namespace atlas
