#include <doctest.h>

#include <cmath>
#include <numbers>

#include "atlas/saddle.hpp"
#include "oracle.hpp"
#include "shared.hpp"
#include "../tools/checks.hpp"

using namespace atlas;

TEST_SUITE("saddle") {

TEST_CASE("quadrature matches frozen high-precision ray integrals") {
    for (const auto& r : oracle::frozen_integrals()) {
        CAPTURE(r.z);
        const Quadrature q = integrate_swallowtail(r.z, {r.a, r.b}, r.eps);
        CHECK(std::abs(q.value - r.psi) <= 1e-8 * std::abs(r.psi));
        CHECK(q.rel_error < 1e-6);
    }
}

TEST_CASE("quadrature does not depend on the contour rotation") {
    for (cplx z : {cplx(3, 0.5), cplx(-2, 1), cplx(5.3, -0.4)}) {
        const Quadrature a = integrate_swallowtail(z, reference_params(), 0.1);
        const Quadrature b = integrate_swallowtail(z, reference_params(), 0.1, 0.2);
        CHECK(std::abs(a.value - b.value) <= 1e-9 * std::abs(a.value));
    }
}

TEST_CASE("descent contours run between valleys") {
    const Frame f = frame_at(kZStar, reference_params());
    for (int i = 0; i < kBranches; ++i) {
        const DescentPath d = descent_path(i, f, 0.0, reference_params());
        CHECK(d.from_valley >= 0);
        CHECK(d.to_valley >= 0);
        CHECK(d.from_valley != d.to_valley);
    }
    CHECK(valley_of(std::polar(100.0, std::numbers::pi / 5), 0.0) == 0);
}

TEST_CASE("contour weights decompose the valley-4-to-0 contour") {
    const auto w = contour_weights(frame_at(kZStar, reference_params()), reference_params());
    int nonzero = 0;
    for (int n : w) nonzero += n != 0;
    CHECK(nonzero >= 1);
}

TEST_CASE("zeroth late term is the leading amplitude") {
    const PhaseParams p = reference_params();
    for (cplx z : {kZStar, cplx(-1, 2)}) {
        const Frame f = frame_at(z, p);
        for (int i = 0; i < kBranches; ++i) CHECK(std::abs(late_term(0, i, f, p) - f.amp0(i)) < 1e-6);
    }
}

TEST_CASE("late terms agree with the leading-order Darboux behaviour") {
    // psi_n ~ S psi_0^(j) Gamma(n)/(2 pi i (chi_j - chi_i)^n) for the nearest singulant
    const PhaseParams p = reference_params();
    const Frame f = frame_at(kZStar, p);
    const auto t = late_terms(30, 0, f, p);
    const cplx d = f.chi(1) - f.chi(0);
    const cplx ratio = t[30] / t[29] * d / 29.0;
    CHECK(std::abs(ratio - 1.0) < 0.1);
}

TEST_CASE("late-term limit recovers S12") {
    const PhaseParams p = reference_params();
    const Frame f = frame_at(kZStar, p);
    const LimitEstimate e = stokes_constant_limit(0, 1, f, p);
    CHECK(std::abs(e.value - cplx(-1, 0)) < 1e-2);
    CHECK(e.error < 1e-2);
}

TEST_CASE("a pair hidden by a nearer singulant does not converge") {
    const PhaseParams p = reference_params();
    const Frame f = frame_at(kZStar, p);
    try {
        stokes_constant_limit(0, 2, f, p);
        FAIL("expected NonConvergence");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonConvergence);
    }
}

TEST_CASE("oracle agrees with adjacency where it converges") {
    int converged = 0;
    for (const auto& r : checks::oracle_cross_check(frame_at(kZStar, reference_params()), reference_params())) {
        if (!r.converged) continue;
        ++converged;
        CHECK(std::abs(r.limit - double(r.adjacency)) < 1e-2);
    }
    CHECK(converged >= 3);
}

TEST_CASE("gamma functions") {
    CHECK(gamma_half(0) == doctest::Approx(std::sqrt(std::numbers::pi)));
    CHECK(gamma_half(3) == doctest::Approx(std::tgamma(3.5)));
    CHECK(gamma_int(1) == 1.0);
    CHECK(gamma_int(6) == doctest::Approx(120.0));
}

TEST_CASE("far-field term") {
    const auto r = checks::far_field_probe(0.1);
    CHECK(r.rel_error <= 0.5);
    const auto r2 = checks::far_field_probe(0.05);
    CHECK(r2.rel_error < r.rel_error);
}

TEST_CASE("anchored transseries at the reference probes") {
    const std::vector<double> beta{1, 0, 0, 0};
    const auto v = checks::transseries_probes(fixture::reference_graph(), fixture::reference_base(), 0.1, beta);
    CHECK(v.probes.size() >= 6);
    CHECK(v.regions >= 3);
    for (const auto& r : v.probes) {
        CAPTURE(r.label);
        CHECK(r.rel_error <= 0.5);
    }
    const auto jc = checks::jump_across_l12(fixture::reference_graph(), fixture::reference_base(), v, 0.1, beta);
    CHECK(jc.expected == -1);
    CHECK(std::abs(jc.estimate.jump() - cplx(-1, 0)) < 0.2);
}

}  // TEST_SUITE
