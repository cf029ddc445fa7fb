#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "atlas/singulant.hpp"
#include "oracle.hpp"

using namespace atlas;

namespace {

std::vector<cplx> as_vec(const std::array<cplx, kBranches>& a) { return {a.begin(), a.end()}; }

std::vector<cplx> chis(const Frame& f) {
    std::vector<cplx> out;
    for (int i = 0; i < kBranches; ++i) out.push_back(f.chi(i));
    return out;
}

}  // namespace

TEST_SUITE("singulant") {

TEST_CASE("saddle roots agree with an independent polynomial solver") {
    for (auto [a, b] : {std::pair{3.0, 1.0}, {1.0, 3.0}, {-2.0, 0.7}, {0.5, -1.5}})
        for (cplx z : {cplx{3, 0.5}, cplx{-4, 2}, cplx{0.3, -6}}) {
            std::vector<cplx> taus;
            for (auto t : oracle::saddles(z, a, b)) taus.push_back(-t);
            CHECK(oracle::set_distance(as_vec(saddle_roots(z, {a, b})), taus) < 1e-11);
        }
}

TEST_CASE("singulants are minus the phase at each saddle") {
    for (cplx z : {cplx{3, 0.5}, cplx{-1, -1}, cplx{7, 2}}) {
        const Frame f = frame_at(z, {3, 1});
        CHECK(oracle::set_distance(chis(f), oracle::singulants(z, 3, 1)) < 1e-10);
    }
}

TEST_CASE("reference labelling reproduces the published singulants at z*") {
    const Frame f = frame_at(kZStar, reference_params());
    const cplx published[] = {{-1.0464, 0.7948}, {-1.1944, 0.0920}, {1.2212, 2.0196}, {1.0196, 0.6936}};
    for (int i = 0; i < kBranches; ++i) CHECK(std::abs(f.chi(i) - published[i]) < 5e-5);
}

TEST_CASE("the pair (1,3) does not reproduce the published singulants") {
    const std::vector<cplx> published{{-1.0464, 0.7948}, {-1.1944, 0.0920}, {1.2212, 2.0196}, {1.0196, 0.6936}};
    CHECK(oracle::set_distance(oracle::singulants(kZStar, 1, 3), published) > 0.1);
    CHECK(oracle::set_distance(oracle::singulants(kZStar, 3, 1), published) < 5e-5);
}

TEST_CASE("leading amplitude is sqrt(pi)/sqrt(D)") {
    const PhaseParams p = reference_params();
    const Frame f = frame_at({1.5, -2}, p);
    for (int i = 0; i < kBranches; ++i) {
        const cplx t = -f.tau(i);
        const cplx D = 10.0 * t * t * t - 3.0 * p.a * t - cplx(0, p.b);
        CHECK(std::abs(std::abs(f.amp0(i)) - std::sqrt(std::numbers::pi) / std::sqrt(std::abs(D))) < 1e-12);
        CHECK(std::abs(f.amp0(i) * f.amp0(i) * D - std::numbers::pi) < 1e-10);
    }
}

TEST_CASE("turning points are the critical values of z(tau)") {
    for (auto [a, b] : {std::pair{3.0, 1.0}, {1.0, 3.0}, {2.0, -1.0}}) {
        std::vector<cplx> got;
        for (const auto& t : turning_points({a, b})) got.push_back(t.z);
        REQUIRE(got.size() == 3);
        CHECK(oracle::set_distance(got, oracle::turning_points(a, b)) < 1e-10);
    }
}

TEST_CASE("three turning and three virtual turning points for the reference pair") {
    const PhaseParams p = reference_params();
    CHECK(turning_points(p).size() == 3);
    CHECK(virtual_turning_points(p).size() == 3);
    for (const auto& t : virtual_turning_points(p)) {
        const Frame f = frame_at(t.z + cplx(1e-9, 1e-9), p);
        CHECK(std::abs(f.chi(t.i) - f.chi(t.j)) < 1e-6);
    }
}

TEST_CASE("degenerate panels") {
    CHECK(coalescence_class({0, 0}) == 1);
    CHECK(coalescence_class({1, 0}) == 2);
    CHECK(coalescence_class({-1, std::sqrt(0.4)}) == 2);
    CHECK(coalescence_class({3, 1}) == 3);

    auto coords = [](const PhaseParams& p) {
        std::set<std::pair<double, double>> s;
        for (const auto& t : turning_points(p)) s.insert({std::round(t.z.real() * 1e6) / 1e6, std::round(t.z.imag() * 1e6) / 1e6});
        return s;
    };
    auto near = [](const PhaseParams& p, cplx z) {
        for (const auto& t : turning_points(p))
            if (std::abs(t.z - z) < 1e-10) return true;
        return false;
    };
    CHECK(coords({0, 0}).size() == 1);
    CHECK(near({0, 0}, 0.0));
    CHECK(coords({1, 0}).size() == 2);
    CHECK(near({1, 0}, 0.0));
    CHECK(near({1, 0}, 0.45));
    const PhaseParams edge{-1, std::sqrt(0.4)};
    CHECK(coords(edge).size() == 2);
    CHECK(near(edge, {0, 1.2}) != near(edge, 1.2));
}

TEST_CASE("continuation around a loop without turning points is the identity") {
    const PhaseParams p = reference_params();
    std::vector<cplx> loop;
    for (int q = 0; q <= 400; ++q) loop.push_back(cplx(6, -3) + std::polar(0.5, 2 * std::numbers::pi * q / 400));
    const auto frames = continue_frame(loop, p);
    const auto perm = match_labels(frames.back().taus(), frames.front().taus());
    for (int i = 0; i < kBranches; ++i) CHECK(perm[i] == i);
}

TEST_CASE("monodromy around a simple turning point swaps exactly the coalescing pair") {
    const PhaseParams p = reference_params();
    for (const auto& t : turning_points(p)) {
        std::vector<cplx> loop;
        for (int q = 0; q <= 800; ++q) loop.push_back(t.z + std::polar(0.05, 0.3 + 2 * std::numbers::pi * q / 800));
        const auto frames = continue_frame(loop, p);
        const auto perm = match_labels(frames.back().taus(), frames.front().taus());
        std::vector<int> moved;
        for (int i = 0; i < kBranches; ++i)
            if (perm[i] != i) moved.push_back(i);
        REQUIRE(moved.size() == 2);
        CHECK(perm[moved[0]] == moved[1]);
        const auto& f0 = frames.front();
        const double pair_gap = std::abs(f0.tau(moved[0]) - f0.tau(moved[1]));
        for (int i = 0; i < kBranches; ++i)
            for (int j = i + 1; j < kBranches; ++j) CHECK(std::abs(f0.tau(i) - f0.tau(j)) >= pair_gap - 1e-12);
    }
}

TEST_CASE("constant path gives a constant frame sequence") {
    const auto frames = continue_frame({cplx(1, 1), cplx(1, 1), cplx(1, 1)}, reference_params());
    for (const auto& f : frames)
        for (int i = 0; i < kBranches; ++i) CHECK(f.tau(i) == frames[0].tau(i));
}

TEST_CASE("ambiguous nearest-root matching is rejected") {
    const std::array<cplx, kBranches> from{cplx(0, 0), cplx(0.1, 0), cplx(5, 0), cplx(-5, 0)};
    const std::array<cplx, kBranches> to{cplx(0.05, 0), cplx(9, 0), cplx(5, 0), cplx(-5, 0)};
    CHECK_THROWS_AS(match_labels(from, to), Error);
}

TEST_CASE("physical variables") {
    CHECK_THROWS_AS(from_physical(0, 1, 1), Error);
    const PhysicalMap m = from_physical(2.0, 0.5, -1.0);
    CHECK(m.eps == doctest::Approx(std::pow(2.0, -1.25)));
    CHECK(m.z.real() == doctest::Approx(std::pow(m.eps, 0.8) * 2.0));
    CHECK(m.params.a == doctest::Approx(-1.0 * std::pow(m.eps, 0.4)));
    CHECK(m.params.b == doctest::Approx(0.5 * std::pow(m.eps, 0.6)));
}

}  // TEST_SUITE
