#pragma once

#include <complex>
#include <vector>

namespace atlas::detail {

using cplx = std::complex<double>;

// Coefficients highest degree first.
cplx polyval(const std::vector<cplx>& c, cplx x);
cplx polyder_val(const std::vector<cplx>& c, cplx x);
std::vector<cplx> poly_roots(const std::vector<cplx>& c);

}  // namespace atlas::detail
