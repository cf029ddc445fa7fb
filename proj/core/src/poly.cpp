#include "poly.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace atlas::detail {

cplx polyval(const std::vector<cplx>& c, cplx x) {
    cplx r = 0.0;
    for (const auto& v : c) r = r * x + v;
    return r;
}

cplx polyder_val(const std::vector<cplx>& c, cplx x) {
    cplx r = 0.0;
    const int n = int(c.size()) - 1;
    for (int k = 0; k < n; ++k) r = r * x + c[k] * double(n - k);
    return r;
}

std::vector<cplx> poly_roots(const std::vector<cplx>& c) {
    const int n = int(c.size()) - 1;
    if (n < 1) return {};
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
    for (int k = 0; k < n; ++k) comp(0, k) = -c[k + 1] / c[0];
    for (int k = 1; k < n; ++k) comp(k, k - 1) = 1.0;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cplx> r(n);
    for (int k = 0; k < n; ++k) {
        cplx x = es.eigenvalues()(k);
        for (int it = 0; it < 8; ++it) {
            cplx d = polyder_val(c, x);
            if (std::abs(d) < 1e-300) break;
            cplx step = polyval(c, x) / d;
            if (!std::isfinite(std::abs(step))) break;
            cplx xn = x - step;
            if (std::abs(polyval(c, xn)) >= std::abs(polyval(c, x))) break;
            x = xn;
        }
        r[k] = x;
    }
    return r;
}

}  // namespace atlas::detail
