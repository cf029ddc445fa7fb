#include <doctest.h>

#include <cmath>
#include <numbers>

#include "atlas/geometry.hpp"
#include "oracle.hpp"
#include "shared.hpp"

using namespace atlas;

namespace {

int count(const StokesGraph& g, CurveKind k) {
    int n = 0;
    for (const auto& c : g.curves) n += c.kind == k;
    return n;
}

int higher_crossings(const StokesGraph& g) {
    int n = 0;
    for (const auto& x : g.crossings) n += x.kind == CrossingKind::higher;
    return n;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("reference graph: turning points and crossing locations") {
    const auto& g = fixture::reference_graph();
    int tps = 0, vtps = 0;
    for (const auto& t : g.turning) (t.kind == TurningKind::turning ? tps : vtps)++;
    CHECK(tps == 3);
    CHECK(vtps == 3);
    CHECK(g.warnings.empty());
    const auto locs = ordinary_crossing_locations(g);
    CHECK(locs.size() == 4);
    int sixfold = 0, west = 0;
    for (const auto& l : locs) {
        if (l.lines == 6) {
            ++sixfold;
            CHECK(std::abs(l.point - cplx(5.176963403521379, 0)) < 1e-6);
        }
        west += l.point.real() < 0;
    }
    CHECK(sixfold == 1);
    CHECK(west == 3);
}

TEST_CASE("ordinary curves satisfy their defining equation on independent singulants") {
    const auto& g = fixture::reference_graph();
    const PhaseParams p = g.params;
    for (const auto& c : g.curves) {
        if (c.kind != CurveKind::ordinary) continue;
        for (size_t v = 0; v < c.pts.size(); v += std::max<size_t>(1, c.pts.size() / 7)) {
            const cplx z = c.pts[v];
            // identify the curve's pair among the oracle's singulants by value
            const Frame f = make_frame(z, c.taus[v], p);
            const auto chis = oracle::singulants(z, p.a, p.b);
            auto nearest = [&](cplx w) {
                cplx best = chis[0];
                for (auto x : chis)
                    if (std::abs(x - w) < std::abs(best - w)) best = x;
                return best;
            };
            const cplx d = nearest(f.chi(c.j)) - nearest(f.chi(c.i));
            CHECK(std::abs(d.imag()) <= 1e-6 * std::max(1.0, std::abs(d)));
            CHECK(d.real() >= -1e-6);
        }
    }
}

TEST_CASE("higher-order curves satisfy their defining equation") {
    const auto& g = fixture::reference_graph();
    for (const auto& c : g.curves) {
        if (c.kind != CurveKind::higher) continue;
        for (size_t v = 0; v < c.pts.size(); v += std::max<size_t>(1, c.pts.size() / 7)) {
            const Frame f = make_frame(c.pts[v], c.taus[v], g.params);
            const cplx r = (f.chi(c.k) - f.chi(c.j)) / (f.chi(c.j) - f.chi(c.i));
            CHECK(std::abs(r.imag()) <= 1e-5 * std::max(1.0, std::abs(r)));
        }
    }
}

TEST_CASE("traced curves are stable under step refinement") {
    const PhaseParams p = reference_params();
    const Domain d = default_domain(p);
    TraceOptions fine;
    fine.initial_step /= 2;
    fine.max_step /= 2;
    fine.sag_tol /= 4;
    const StokesGraph g2 = build_graph(p, d, fine);
    CHECK(refinement_distance(fixture::reference_graph(), g2) <= 1e-6);
}

TEST_CASE("degenerate panels: topology") {
    SUBCASE("one turning point, no crossings") {
        const StokesGraph g = build_graph({0, 0});
        CHECK(g.turning.size() == 1);
        CHECK(g.crossings.empty());
        CHECK(count(g, CurveKind::higher) == 0);
        CHECK(!g.warnings.empty());
    }
    SUBCASE("two turning points, no crossing higher-order lines") {
        for (const PhaseParams p : {PhaseParams{1, 0}, PhaseParams{-1, std::sqrt(0.4)}}) {
            const StokesGraph g = build_graph(p);
            int tps = 0;
            for (const auto& t : g.turning) tps += t.kind == TurningKind::turning;
            CHECK(tps == 2);
            CHECK(higher_crossings(g) == 0);
            CHECK(count(g, CurveKind::higher) > 0);
            CHECK(!g.warnings.empty());
        }
    }
}

TEST_CASE("safe distance and crossing events") {
    const auto& g = fixture::reference_graph();
    CHECK(safe_distance(g) == doctest::Approx(1e-4 * g.domain.diameter()));
    const Frame start = frame_at(kZStar, g.params);
    // a path straight through a crossing point is rejected
    const cplx x = g.crossings.front().point;
    CHECK_THROWS_AS(path_crossings({x - cplx(0.1, 0.05), x + cplx(0.1, 0.05)}, g, frame_at(x - cplx(0.1, 0.05), g.params)),
                    Error);
    CHECK(path_crossings({kZStar}, g, start).empty());
}

TEST_CASE("a path along a vertex of a curve counts one crossing") {
    const auto& g = fixture::reference_graph();
    for (const auto& c : g.curves) {
        if (c.kind != CurveKind::ordinary || c.pts.size() < 50) continue;
        const size_t v = c.pts.size() / 2;
        const cplx n = c.normals[v];
        const cplx a = c.pts[v] - 1e-3 * n, b = c.pts[v] + 1e-3 * n;
        bool clear = true;
        for (const auto& x : g.crossings) clear = clear && std::abs(x.point - c.pts[v]) > 0.01;
        for (const auto& t : g.turning) clear = clear && std::abs(t.z - c.pts[v]) > 0.01;
        if (!clear) continue;
        int hits = 0;
        const int id = int(&c - g.curves.data());
        for (const auto& e : path_crossings({a, b}, g, frame_at(a, g.params))) hits += e.curve == id;
        CHECK(hits == 1);
        break;
    }
}

TEST_CASE("invalid domains are rejected") {
    CHECK_THROWS_AS(build_graph(reference_params(), Domain{1, 0, 0, 1}), Error);
}

TEST_CASE("polyline distances") {
    const std::vector<cplx> a{0, 1, {1, 1}};
    CHECK(distance_to_polyline({0.5, 0.2}, a) == doctest::Approx(0.2));
    CHECK(hausdorff(a, a) == 0.0);
    CHECK(hausdorff(a, {0, 1}) == doctest::Approx(1.0));
}

}  // TEST_SUITE
