#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atlas/saddle.hpp"

namespace atlas::checks {

struct LoopReport {
    int loops = 0;
    int failures = 0;          // state differs after relabelling, or transport threw
    int errors = 0;            // of which transport threw
    int winding = 0;           // loops that wind around a turning point
    int winding_failures = 0;  // failures among those
    int antisymmetry_failures = 0;
    int skipped = 0;  // loops whose random polygon could not be routed
};
// Random closed polygons through the base point; each must transport to the
// base state exactly, after relabelling for loops that wind around turning
// points.
LoopReport loop_identity(const StokesGraph& g, const ConnectionState& base, std::uint64_t seed, int count);

struct CrossingReport {
    int crossings = 0;  // distinct locations
    int failures = 0;
};
// A small loop around every crossing location must compose to the identity.
CrossingReport crossing_consistency(const StokesGraph& g, const ConnectionState& base);

struct ProbeResult {
    std::string label;
    cplx z;
    double eps = 0;
    cplx numeric, series;
    double rel_error = 0;
    std::string region;  // sigma(beta) at the probe
};

// Far-field leading term against the integral at a = b = 0.
ProbeResult far_field_probe(double eps);

struct SeriesValidation {
    Calibration calibration;
    std::vector<ProbeResult> probes;
    int regions = 0;
};
// Anchored at the far field along arg z = -3pi/4 and checked at probes around
// the six-fold crossing; reference parameters only.
SeriesValidation transseries_probes(const StokesGraph& g, const ConnectionState& base, double eps,
                                    const std::vector<double>& beta);

struct JumpCheck {
    cplx at;
    JumpEstimate estimate;
    long long expected = 0;  // S_12 sigma_1 as transported
};
JumpCheck jump_across_l12(const StokesGraph& g, const ConnectionState& base, const SeriesValidation& v, double eps,
                          const std::vector<double>& beta);

struct OracleRow {
    int i = 0, j = 0;
    long long adjacency = 0;
    bool converged = false;
    cplx limit;
    double error = 0;
    std::string note;
};
std::vector<OracleRow> oracle_cross_check(const Frame& f, const PhaseParams& p, int n_max = 40);

}  // namespace atlas::checks
