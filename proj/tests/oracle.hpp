#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

// Roots of sum c[k] t^k by Durand-Kerner iteration.
inline std::vector<cplx> roots(std::vector<cplx> c) {
    const int n = int(c.size()) - 1;
    for (auto& x : c) x /= c.back();
    std::vector<cplx> r(n);
    for (int k = 0; k < n; ++k) r[k] = std::pow(cplx(0.4, 0.9), k);
    for (int it = 0; it < 2000; ++it) {
        double move = 0;
        for (int k = 0; k < n; ++k) {
            cplx num = c[n], den = 1;
            for (int q = n - 1; q >= 0; --q) num = num * r[k] + c[q];
            for (int q = 0; q < n; ++q)
                if (q != k) den *= r[k] - r[q];
            const cplx d = num / den;
            r[k] -= d;
            move = std::max(move, std::abs(d));
        }
        if (move < 1e-15) break;
    }
    return r;
}

// f(t) = t^5 - a t^3 - i b t^2 + z t; the integrand is exp(f / eps).
inline cplx f(cplx t, cplx z, double a, double b) {
    const cplx I{0, 1};
    return std::pow(t, 5) - a * std::pow(t, 3) - I * b * t * t + z * t;
}

// Saddles of f and the singulants chi = -f(t_s).
inline std::vector<cplx> saddles(cplx z, double a, double b) {
    const cplx I{0, 1};
    return roots({z, -2.0 * I * b, -3.0 * a, 0.0, 5.0});
}
inline std::vector<cplx> singulants(cplx z, double a, double b) {
    std::vector<cplx> out;
    for (auto t : saddles(z, a, b)) out.push_back(-f(t, z, a, b));
    return out;
}

// Turning points: z(tau) with z'(tau) = 0 where 5 tau^4 - 3 a tau^2 + 2 i b tau + z = 0.
inline std::vector<cplx> turning_points(double a, double b) {
    const cplx I{0, 1};
    std::vector<cplx> out;
    for (auto t : roots({-2.0 * I * b, 6.0 * a, 0.0, -20.0}))
        out.push_back(-5.0 * std::pow(t, 4) + 3.0 * a * t * t - 2.0 * I * b * t);
    return out;
}

// Smallest max-distance over assignments of a to b (sizes <= 4).
inline double set_distance(std::vector<cplx> a, const std::vector<cplx>& b) {
    std::sort(a.begin(), a.end(), [](cplx x, cplx y) { return std::arg(x) < std::arg(y); });
    std::vector<int> perm(a.size());
    for (size_t q = 0; q < perm.size(); ++q) perm[q] = int(q);
    double best = INFINITY;
    do {
        double worst = 0;
        for (size_t q = 0; q < a.size(); ++q) worst = std::max(worst, std::abs(a[q] - b[perm[q]]));
        best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Values of psi = (1/(i eps^{1/5})) int exp(f/eps) dt along the rays
// arg t = -pi/5 -> pi/5, computed with 40-digit mpmath quadrature.
struct FrozenIntegral {
    cplx z;
    double a, b, eps;
    cplx psi;
};
inline const std::array<FrozenIntegral, 4>& frozen_integrals() {
    static const std::array<FrozenIntegral, 4> v{{
        {std::polar(5.0, -0.75 * std::numbers::pi), 0, 0, 0.1, {-3.3309941494886117e-11, -5.289788608693352e-11}},
        {{3.0, 0.5}, 3, 1, 0.1, {-4254.1653153728843, -10697.383506314296}},
        {{-2.0, 1.0}, 3, 1, 0.2, {-1.844304509582301e-13, -2.7900868479510875e-14}},
        {{1.0, -2.0}, 1, 3, 0.25, {-44435.230046736901, 386112.67084766323}},
    }};
    return v;
}

}  // namespace oracle
