#include "corrsim/kernels.hpp"

namespace corrsim::kernels::scalar {

void antithetic_mix(const double* u, const std::uint8_t* bits, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = bits[k] ? u[k] : 1.0 - u[k];
}

void affine(double* x, std::size_t n, double offset, double scale) {
  for (std::size_t k = 0; k < n; ++k) x[k] = offset + scale * x[k];
}

SumPair standardized_cross(const double* x, const double* y, std::size_t n, double mx, double sx, double my,
                           double sy) {
  const double ix = 1.0 / sx;
  const double iy = 1.0 / sy;
  double s = 0.0;
  double s2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double p = ((x[k] - mx) * ix) * ((y[k] - my) * iy);
    s += p;
    s2 += p * p;
  }
  return {s, s2};
}

CentralSums central_sums(const double* x, std::size_t n, double center) {
  CentralSums r{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    const double d = x[k] - center;
    const double d2 = d * d;
    r.s1 += d;
    r.s2 += d2;
    r.s4 += d2 * d2;
  }
  return r;
}

}  // namespace corrsim::kernels::scalar
