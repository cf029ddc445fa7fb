#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "atlas/singulant.hpp"

namespace atlas {

enum class CurveKind { ordinary, higher };

struct Domain {
    double x0 = -10, x1 = 10, y0 = -10, y1 = 10;
    bool contains(cplx z) const {
        return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1;
    }
    double diameter() const;
    bool empty() const { return !(x1 > x0 && y1 > y0); }
};

struct TraceOptions {
    double initial_step = 1e-3;
    double min_step = 1e-6;
    double max_step = 1e-1;
    double sag_tol = 2.5e-7;
    int max_corrector = 8;
    size_t max_vertices = 400000;
};

// ordinary: l_{i>j}, k = -1.  higher: h_{i>k;j}.
// Labels index the curve's own per-vertex tau arrays.
struct StokesCurve {
    CurveKind kind = CurveKind::ordinary;
    int i = 0, j = 0, k = -1;
    TurningKind source_kind = TurningKind::turning;
    int source = -1;  // index into StokesGraph::turning
    std::vector<cplx> pts;
    std::vector<std::array<cplx, kBranches>> taus;
    std::vector<cplx> normals;
};

enum class CrossingKind { stokes, higher, mixed };

struct Crossing {
    cplx point;
    std::vector<int> curves;
    CrossingKind kind = CrossingKind::stokes;
};

class SegmentIndex;

struct StokesGraph {
    PhaseParams params;
    Domain domain;
    std::vector<TurningPoint> turning;  // turning first, then virtual
    std::vector<StokesCurve> curves;
    std::vector<Crossing> crossings;
    Frame reference;
    std::vector<std::string> warnings;

    std::shared_ptr<const SegmentIndex> index() const;

private:
    mutable std::shared_ptr<const SegmentIndex> index_;
};

struct CrossingEvent {
    double arclength = 0;
    int curve = -1;
    int i = 0, j = 0, k = -1;  // labels in the path's frame
    int direction = 0;
    cplx point;
};

// Value whose imaginary part vanishes on the curve, and its z-derivative.
struct Defining {
    cplx g;
    cplx dg;
};
Defining ordinary_value(const Frame& f, int i, int j);
Defining higher_value(const Frame& f, int i, int k, int j);

Domain default_domain(const PhaseParams& p);

StokesCurve trace_ordinary(int i, int j, const Frame& seed, const PhaseParams& p, const Domain& d,
                           const TraceOptions& opt = {});
StokesCurve trace_higher(int i, int k, int j, const Frame& seed, const PhaseParams& p, const Domain& d,
                         const TraceOptions& opt = {});

struct Seed {
    Frame frame;
    int i, j, k;
};
// Sign changes of the defining Im[.] on a small circle around z0.
std::vector<Seed> seeds_around(cplx z0, CurveKind kind, const PhaseParams& p, double r = 1e-3, int m = 1440);

StokesGraph build_graph(const PhaseParams& p, const Domain& d, const TraceOptions& opt = {});
StokesGraph build_graph(const PhaseParams& p);

double safe_distance(const StokesGraph& g);
std::vector<CrossingEvent> path_crossings(const std::vector<cplx>& path, const StokesGraph& g,
                                          const Frame& start);

// Distinct points where at least two ordinary curves cross transversally,
// with the number of ordinary curves through each.
struct CrossingLocation {
    cplx point;
    int lines = 0;
};
std::vector<CrossingLocation> ordinary_crossing_locations(const StokesGraph& g, double dedup = 1e-6);

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b);
// Largest curve-to-curve distance between two tracings of the same graph,
// ignoring vertices within exclude of a turning point, where the defining
// functions are singular and traces end wherever the corrector gives up.
double refinement_distance(const StokesGraph& a, const StokesGraph& b, double exclude = 1e-2);
double distance_to_polyline(cplx z, const std::vector<cplx>& poly);

}  // namespace atlas
