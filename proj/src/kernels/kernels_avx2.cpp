// Built with -mavx2; never called unless the dispatcher saw AVX2 in CPUID.
// No FMA: the element-wise kernels must round exactly like the scalar ones.

#include <immintrin.h>

#include <cstring>

#include "corrsim/kernels.hpp"

namespace corrsim::kernels::avx2 {

namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

}  // namespace

void antithetic_mix(const double* u, const std::uint8_t* bits, double* out, std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    std::uint32_t packed;
    std::memcpy(&packed, bits + k, 4);
    // Widen four bytes to four 64-bit lanes, then to an all-ones/zero mask.
    const __m256i wide = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(static_cast<int>(packed)));
    const __m256d keep = _mm256_castsi256_pd(_mm256_cmpgt_epi64(wide, _mm256_setzero_si256()));
    const __m256d uv = _mm256_loadu_pd(u + k);
    const __m256d flipped = _mm256_sub_pd(one, uv);
    _mm256_storeu_pd(out + k, _mm256_blendv_pd(flipped, uv, keep));
  }
  for (; k < n; ++k) out[k] = bits[k] ? u[k] : 1.0 - u[k];
}

void affine(double* x, std::size_t n, double offset, double scale) {
  const __m256d o = _mm256_set1_pd(offset);
  const __m256d s = _mm256_set1_pd(scale);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) _mm256_storeu_pd(x + k, _mm256_add_pd(o, _mm256_mul_pd(s, _mm256_loadu_pd(x + k))));
  for (; k < n; ++k) x[k] = offset + scale * x[k];
}

SumPair standardized_cross(const double* x, const double* y, std::size_t n, double mx, double sx, double my,
                           double sy) {
  const __m256d vmx = _mm256_set1_pd(mx);
  const __m256d vmy = _mm256_set1_pd(my);
  const __m256d vix = _mm256_set1_pd(1.0 / sx);
  const __m256d viy = _mm256_set1_pd(1.0 / sy);
  __m256d acc = _mm256_setzero_pd();
  __m256d acc2 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d zx = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(x + k), vmx), vix);
    const __m256d zy = _mm256_mul_pd(_mm256_sub_pd(_mm256_loadu_pd(y + k), vmy), viy);
    const __m256d p = _mm256_mul_pd(zx, zy);
    acc = _mm256_add_pd(acc, p);
    acc2 = _mm256_add_pd(acc2, _mm256_mul_pd(p, p));
  }
  SumPair r{hsum(acc), hsum(acc2)};
  const SumPair tail = scalar::standardized_cross(x + k, y + k, n - k, mx, sx, my, sy);
  r.sum += tail.sum;
  r.sum_sq += tail.sum_sq;
  return r;
}

CentralSums central_sums(const double* x, std::size_t n, double center) {
  const __m256d c = _mm256_set1_pd(center);
  __m256d a1 = _mm256_setzero_pd();
  __m256d a2 = _mm256_setzero_pd();
  __m256d a4 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + k), c);
    const __m256d d2 = _mm256_mul_pd(d, d);
    a1 = _mm256_add_pd(a1, d);
    a2 = _mm256_add_pd(a2, d2);
    a4 = _mm256_add_pd(a4, _mm256_mul_pd(d2, d2));
  }
  CentralSums r{hsum(a1), hsum(a2), hsum(a4)};
  const CentralSums tail = scalar::central_sums(x + k, n - k, center);
  r.s1 += tail.s1;
  r.s2 += tail.s2;
  r.s4 += tail.s4;
  return r;
}

}  // namespace corrsim::kernels::avx2
