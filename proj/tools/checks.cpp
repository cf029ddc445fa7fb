#include "checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace atlas::checks {

namespace {

bool same_state(const ConnectionState& a, const ConnectionState& b) {
    return a.sigma == b.sigma && a.stokes == b.stokes;
}

std::vector<cplx> closed_route(const StokesGraph& g, const std::vector<cplx>& corners) {
    std::vector<cplx> path{corners.front()};
    for (size_t q = 0; q + 1 < corners.size(); ++q) {
        auto leg = route(corners[q], corners[q + 1], g);
        path.insert(path.end(), leg.begin() + 1, leg.end());
    }
    return path;
}

std::string sigma_label(const ConnectionState& s, const std::vector<double>& beta) {
    std::string out;
    for (const auto& f : s.sigma) {
        if (!out.empty()) out += ";";
        out += std::to_string(std::llround(f.eval(beta)));
    }
    return out;
}

}  // namespace

LoopReport loop_identity(const StokesGraph& g, const ConnectionState& base, std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    const Domain& d = g.domain;
    std::uniform_real_distribution<double> ux(d.x0 + 0.05 * (d.x1 - d.x0), d.x1 - 0.05 * (d.x1 - d.x0));
    std::uniform_real_distribution<double> uy(d.y0 + 0.05 * (d.y1 - d.y0), d.y1 - 0.05 * (d.y1 - d.y0));
    std::uniform_int_distribution<int> corners(2, 5);
    LoopReport r;
    while (r.loops < count) {
        std::vector<cplx> pts{base.at};
        const int n = corners(rng);
        for (int q = 0; q < n; ++q) pts.push_back({ux(rng), uy(rng)});
        pts.push_back(base.at);
        std::vector<cplx> path;
        try {
            path = closed_route(g, pts);
        } catch (const Error&) {
            ++r.skipped;
            if (r.skipped > 10 * count) break;
            continue;
        }
        ++r.loops;
        bool winds = false;
        for (const auto& t : g.turning) {
            double w = 0;
            for (size_t q = 0; q + 1 < path.size(); ++q) w += std::arg((path[q + 1] - t.z) / (path[q] - t.z));
            winds = winds || std::abs(w) > std::numbers::pi;
        }
        r.winding += winds;
        bool ok = false;
        try {
            const ConnectionState s = relabel(transport(base, path, g), base.frame);
            ok = same_state(s, base);
            if (!s.antisymmetric || !s.stokes.antisymmetric()) ++r.antisymmetry_failures;
        } catch (const Error&) {
            ++r.errors;
        }
        if (!ok) {
            ++r.failures;
            r.winding_failures += winds;
        }
    }
    return r;
}

CrossingReport crossing_consistency(const StokesGraph& g, const ConnectionState& base) {
    // Several curve pairs can meet at one point; loop once per location.
    constexpr double same = 1e-6;
    std::vector<cplx> sites;
    for (const auto& c : g.crossings) {
        if (!g.domain.contains(c.point)) continue;
        bool seen = false;
        for (auto z : sites) seen = seen || std::abs(z - c.point) < same;
        if (!seen) sites.push_back(c.point);
    }
    CrossingReport r;
    const double dsafe = safe_distance(g);
    for (auto z : sites) {
        double room = 0.05;
        cplx nearest = z + 1.0;
        auto consider = [&](cplx o) {
            if (o == z) return;
            room = std::min(room, 0.4 * std::abs(o - z));
            if (std::abs(o - z) < std::abs(nearest - z)) nearest = o;
        };
        for (auto o : sites) consider(o);
        for (const auto& t : g.turning) consider(t.z);
        // start on the side facing away from the nearest obstacle, reached
        // radially; the tilt keeps the start off lines along symmetry axes
        const cplx away = (z - nearest) / std::abs(z - nearest) * std::polar(1.0, 0.3);
        ++r.crossings;
        if (room < 1.5 * dsafe) {
            ++r.failures;
            continue;
        }
        try {
            const cplx outer = z + 0.05 * away, start = z + room * away;
            const ConnectionState s0 = transport(base, route(base.at, outer, g), g);
            const ConnectionState s = transport(s0, {outer, start}, g);
            std::vector<cplx> circle;
            for (int q = 0; q <= 720; ++q) circle.push_back(z + room * away * std::polar(1.0, 2 * std::numbers::pi * q / 720));
            const ConnectionState after = relabel(transport(s, circle, g), s.frame);
            if (!same_state(after, s) || !after.antisymmetric) ++r.failures;
        } catch (const Error&) {
            ++r.failures;
        }
    }
    return r;
}

ProbeResult far_field_probe(double eps) {
    const PhaseParams p{0.0, 0.0};
    const cplx z = std::polar(5.0, -0.75 * std::numbers::pi);
    ProbeResult r;
    r.label = "far-field";
    r.z = z;
    r.eps = eps;
    r.numeric = integrate_swallowtail(z, p, eps).value;
    r.series = far_field(z, eps) * std::pow(eps, 0.3);
    r.rel_error = std::abs(r.numeric - r.series) / std::abs(r.numeric);
    r.region = "a=b=0";
    return r;
}

SeriesValidation transseries_probes(const StokesGraph& g, const ConnectionState& base, double eps,
                                    const std::vector<double>& beta) {
    SeriesValidation v;
    const cplx anchor = std::polar(5.0, -0.75 * std::numbers::pi);
    const ConnectionState at = transport(base, route(base.at, anchor, g), g);
    v.calibration = calibrate(at, g.params, eps, beta, -1);
    const cplx x0{5.176963403521379, 0.0};
    const double angles[] = {150.0, 90.0, 38.0, 320.0, 285.0, 210.0};
    std::vector<std::pair<std::string, cplx>> probes{{"anchor", anchor}};
    for (double a : angles)
        probes.push_back({"x0+2.5@" + std::to_string(int(a)), x0 + std::polar(2.5, a * std::numbers::pi / 180)});
    for (double a : {8.0, 352.0})
        probes.push_back({"x0+1.5@" + std::to_string(int(a)), x0 + std::polar(1.5, a * std::numbers::pi / 180)});
    probes.push_back({"far-west", {-5.0, -1.5}});
    probes.push_back({"far-north", {0.0, 6.0}});
    std::set<std::string> regions;
    for (const auto& [label, z] : probes) {
        const ConnectionState s = transport(at, route(anchor, z, g), g);
        ProbeResult r;
        r.label = label;
        r.z = z;
        r.eps = eps;
        r.numeric = integrate_swallowtail(s.frame, g.params, eps).value;
        r.series = transseries_eval(s, g.params, eps, beta, v.calibration);
        r.rel_error = std::abs(r.numeric - r.series) / std::abs(r.numeric);
        r.region = sigma_label(s, beta);
        regions.insert(r.region);
        v.probes.push_back(r);
    }
    v.regions = int(regions.size());
    return v;
}

JumpCheck jump_across_l12(const StokesGraph& g, const ConnectionState& base, const SeriesValidation& v, double eps,
                          const std::vector<double>& beta) {
    // Curve labels are local to each curve, so candidates are ranked by
    // distance to a fixed point on the line and identified after transport.
    const cplx target{5.8, -1.1};
    std::vector<std::pair<double, std::pair<int, size_t>>> cand;
    for (int c = 0; c < int(g.curves.size()); ++c) {
        const auto& C = g.curves[c];
        if (C.kind != CurveKind::ordinary) continue;
        size_t best = 0;
        for (size_t q = 0; q < C.pts.size(); ++q)
            if (std::abs(C.pts[q] - target) < std::abs(C.pts[best] - target)) best = q;
        cand.push_back({std::abs(C.pts[best] - target), {c, best}});
    }
    std::sort(cand.begin(), cand.end());
    const double dsafe = safe_distance(g);
    for (const auto& [dist, cv] : cand) {
        const auto& C = g.curves[cv.first];
        // Slide along the line to where the subdominant exponential sits about
        // e^{-15} below the dominant one, so the jump stays above roundoff.
        size_t q = cv.second;
        auto gap = [&](size_t v) {
            return std::abs(singulant(C.taus[v][C.i], C.pts[v], g.params) - singulant(C.taus[v][C.j], C.pts[v], g.params)) / eps;
        };
        for (size_t v = 0; v < C.pts.size(); ++v)
            if (g.domain.contains(C.pts[v]) && std::abs(gap(v) - 15) < std::abs(gap(q) - 15)) q = v;
        const cplx z = C.pts[q];
        const cplx off = z - 2 * dsafe * C.normals[q];
        const ConnectionState near = transport(base, route(base.at, off, g), g);
        ConnectionState s = near;
        s.frame = advance(s.frame, z, g.params);
        s.at = z;
        const auto perm = match_labels(C.taus[q], s.frame.taus());
        if (std::min(perm[C.i], perm[C.j]) != 0 || std::max(perm[C.i], perm[C.j]) != 1) continue;
        JumpCheck jc;
        jc.at = z;
        jc.estimate = extract_subdominant_jump(s, perm[C.i], perm[C.j], g.params, eps, beta, v.calibration);
        const ConnectionState before = transport(near, route(off, jc.estimate.z_before, g), g);
        const ConnectionState after = transport(before, route(jc.estimate.z_before, jc.estimate.z_after, g), g);
        const int j = jc.estimate.subdominant;
        jc.expected = std::llround(after.sigma[j].eval(beta) - before.sigma[j].eval(beta));
        return jc;
    }
    throw Error(ErrorKind::InvalidInput, "no l12 curve in the graph");
}

std::vector<OracleRow> oracle_cross_check(const Frame& f, const PhaseParams& p, int n_max) {
    const StokesMatrix S = base_stokes_constants(f, p);
    std::vector<OracleRow> rows;
    for (int i = 0; i < kBranches; ++i)
        for (int j = 0; j < kBranches; ++j) {
            if (i == j) continue;
            OracleRow r{i, j, S(i, j)};
            try {
                const auto e = stokes_constant_limit(i, j, f, p, n_max);
                r.converged = true;
                r.limit = e.value;
                r.error = e.error;
            } catch (const Error& e) {
                r.note = e.what();
            }
            rows.push_back(r);
        }
    return rows;
}

}  // namespace atlas::checks
