// One line per acceptance criterion; exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "atlas/saddle.hpp"
#include "oracle.hpp"
#include "shared.hpp"
#include "../tools/checks.hpp"

using namespace atlas;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const std::vector<cplx> kPublishedChi{{-1.0464, 0.7948}, {-1.1944, 0.0920}, {1.2212, 2.0196}, {1.0196, 0.6936}};

double chi_error(const PhaseParams& p) {
    const Frame f = frame_at(kZStar, p);
    std::vector<cplx> got;
    for (int i = 0; i < kBranches; ++i) got.push_back(f.chi(i));
    return oracle::set_distance(got, kPublishedChi);
}

Outcome singulants() {
    const double literal = chi_error({1, 3});
    const double ref = chi_error(reference_params());
    char buf[200];
    std::snprintf(buf, sizeof buf, "(a,b)=(1,3): max |chi - published| = %.3g; (3,1): %.3g", literal, ref);
    return {literal <= 5e-5, buf};
}

Outcome base_constants() {
    const StokesMatrix S = base_stokes_constants(kZStar, reference_params());
    const bool ok = S == fixture::published_base();
    return {ok, std::string("reference (3,1), twelve off-diagonal entries ") + (ok ? "equal" : "differ")};
}

Outcome stokes_table() {
    const auto rows = region_tables(fixture::reference_graph(), fixture::reference_base(),
                                    reference_probes(TableKind::stokes));
    const auto& want = fixture::published_stokes_rows();
    std::string bad;
    for (size_t q = 0; q < rows.size(); ++q)
        if (fixture::upper(rows[q].S) != want[q].s) bad += std::string(bad.empty() ? "" : ",") + want[q].label;
    return {bad.empty(), bad.empty() ? "13/13 rows" : "mismatched rows: " + bad};
}

Outcome sigma_table() {
    const auto& g = fixture::reference_graph();
    const auto& base = fixture::reference_base();
    const auto rows = region_tables(g, base, reference_probes(TableKind::sigma));
    const auto& want = fixture::published_sigma_rows();
    int match = 0;
    for (size_t q = 0; q < rows.size(); ++q) match += fixture::sigma_matches(rows[q].sigma, want[q].sigma);
    const auto cycle = reference_b_cycle();
    const ConnectionState b1 = transport(base, route(base.at, cycle.front(), g), g);
    const ConnectionState round = transport(b1, cycle, g);
    const bool closed = round.sigma == b1.sigma && round.stokes == b1.stokes;
    return {match == int(want.size()) && closed,
            std::to_string(match) + "/" + std::to_string(want.size()) + " rows, b-cycle " +
                (closed ? "closes" : "does not close")};
}

struct Counts {
    int tps = 0, vtps = 0, locations = 0, sixfold = 0;
    bool ok() const { return tps == 3 && vtps == 3 && locations == 4 && sixfold == 1; }
    std::string str() const {
        return std::to_string(tps) + " TP, " + std::to_string(vtps) + " VTP, " + std::to_string(locations) +
               " crossing locations (" + std::to_string(sixfold) + " six-fold)";
    }
};

Counts counts(const StokesGraph& g) {
    Counts c;
    for (const auto& t : g.turning) (t.kind == TurningKind::turning ? c.tps : c.vtps)++;
    for (const auto& l : ordinary_crossing_locations(g)) {
        ++c.locations;
        c.sixfold += l.lines == 6;
    }
    return c;
}

Outcome geometry() {
    const Counts literal = counts(build_graph({1, 3}));
    const Counts ref = counts(fixture::reference_graph());
    return {literal.ok(), "(1,3): " + literal.str() + "; (3,1): " + ref.str()};
}

Outcome degenerate() {
    auto has = [](const PhaseParams& p, cplx z) {
        for (const auto& t : turning_points(p))
            if (std::abs(t.z - z) < 1e-10) return true;
        return false;
    };
    auto distinct = [](const PhaseParams& p) {
        std::vector<cplx> seen;
        for (const auto& t : turning_points(p)) {
            bool dup = false;
            for (auto s : seen) dup = dup || std::abs(s - t.z) < 1e-10;
            if (!dup) seen.push_back(t.z);
        }
        return seen.size();
    };
    const PhaseParams p0{0, 0}, p1{1, 0}, p2{-1, std::sqrt(0.4)};
    bool ok = coalescence_class(p0) == 1 && coalescence_class(p1) == 2 && coalescence_class(p2) == 2;
    ok = ok && distinct(p0) == 1 && has(p0, 0.0);
    ok = ok && distinct(p1) == 2 && has(p1, 0.0) && has(p1, 0.45);
    ok = ok && distinct(p2) == 2 && has(p2, 1.2) && has(p2, -0.15);
    std::string topo;
    // one turning point: no crossings at all; two: no crossing higher-order lines
    const StokesGraph g0 = build_graph(p0);
    const bool t0 = g0.crossings.empty();
    bool t12 = true;
    for (const auto& p : {p1, p2}) {
        const StokesGraph g = build_graph(p);
        for (const auto& x : g.crossings) t12 = t12 && x.kind != CrossingKind::higher;
    }
    ok = ok && t0 && t12;
    return {ok, std::string("classes 1,2,2; coordinates; ") + (t0 ? "no crossings at (0,0)" : "crossings at (0,0)") +
                    "; " + (t12 ? "no higher-higher crossings" : "higher-higher crossings present")};
}

Outcome late_terms_oracle() {
    const PhaseParams p = reference_params();
    const Frame f = frame_at(kZStar, p);
    const LimitEstimate e = stokes_constant_limit(0, 1, f, p, 40);
    double worst = 0;
    for (int i = 0; i < kBranches; ++i) worst = std::max(worst, std::abs(late_term(0, i, f, p) - f.amp0(i)));
    const double err = std::abs(e.value - cplx(-1, 0));
    char buf[160];
    std::snprintf(buf, sizeof buf, "|S12 - (-1)| = %.2g, max |psi_0 - amp0| = %.2g", err, worst);
    return {err < 1e-2 && worst < 1e-6, buf};
}

Outcome integral_validation() {
    const double eps = 0.1;
    const std::vector<double> beta{1, 0, 0, 0};
    const auto ff = checks::far_field_probe(eps);
    const auto v = checks::transseries_probes(fixture::reference_graph(), fixture::reference_base(), eps, beta);
    int good = 0;
    double worst = 0;
    for (const auto& r : v.probes) {
        good += r.rel_error <= 5 * eps;
        worst = std::max(worst, r.rel_error);
    }
    const auto jc = checks::jump_across_l12(fixture::reference_graph(), fixture::reference_base(), v, eps, beta);
    const cplx jump = jc.estimate.jump();
    const bool jump_ok = jc.expected == -1 && std::abs(jump - double(jc.expected)) <= 0.2;
    const bool ok = ff.rel_error <= 5 * eps && good >= 6 && v.regions >= 3 && jump_ok;
    char buf[240];
    std::snprintf(buf, sizeof buf, "far field %.3g; %d/%zu probes (worst %.3g) over %d regions; jump %.4f%+.4fi vs %lld",
                  ff.rel_error, good, v.probes.size(), worst, v.regions, jump.real(), jump.imag(), jc.expected);
    return {ok, buf};
}

Outcome properties() {
    const auto& g = fixture::reference_graph();
    const auto& base = fixture::reference_base();
    const auto loops = checks::loop_identity(g, base, 1, 100);
    const auto xs = checks::crossing_consistency(g, base);
    TraceOptions fine;
    fine.initial_step /= 2;
    fine.max_step /= 2;
    fine.sag_tol /= 4;
    const double h = refinement_distance(g, build_graph(g.params, g.domain, fine));
    const bool ok = loops.failures == 0 && loops.antisymmetry_failures == 0 && loops.skipped == 0 &&
                    xs.failures == 0 && h <= 1e-6;
    char buf[240];
    std::snprintf(buf, sizeof buf,
                  "loops %d/%d failed (%d winding), antisymmetry %d, crossing sites %d/%d failed, refinement %.3g",
                  loops.failures, loops.loops, loops.winding, loops.antisymmetry_failures, xs.failures, xs.crossings, h);
    return {ok, buf};
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"singulant values", singulants},
        {"base Stokes constants", base_constants},
        {"Stokes-constant table", stokes_table},
        {"sigma table and b-cycle", sigma_table},
        {"geometry counts", geometry},
        {"degenerate panels", degenerate},
        {"late-term oracle", late_terms_oracle},
        {"integral validation", integral_validation},
        {"property suites", properties},
    };
    int failed = 0, n = 0;
    for (const auto& [name, run] : criteria) {
        ++n;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%s %d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria pass\n", n - failed, n);
    return failed ? 1 : 0;
}
