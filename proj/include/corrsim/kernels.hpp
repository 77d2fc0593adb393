#pragma once

// Data-parallel inner loops of batch sampling and verification.
//
// Each kernel has a portable scalar reference and, on x86-64, an AVX2
// variant compiled in its own translation unit. The active variant is chosen
// once at startup from CPUID and can be overridden for testing. The
// element-wise kernels are bit-identical across variants; the reductions
// agree to rounding (they sum in a different order).

#include <cstddef>
#include <cstdint>
#include <span>

namespace corrsim::kernels {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa) noexcept;

/// Best variant the host CPU supports.
Isa detected_isa() noexcept;
Isa active_isa() noexcept;
/// Throws DomainError if the host cannot run `isa`.
void set_active_isa(Isa isa);

struct SumPair {
  double sum;
  double sum_sq;
};

struct CentralSums {
  double s1;  // sum (x - c)
  double s2;  // sum (x - c)^2
  double s4;  // sum (x - c)^4
};

/// out[k] = bits[k] ? u[k] : 1 - u[k]
void antithetic_mix(std::span<const double> u, std::span<const std::uint8_t> bits, std::span<double> out);

/// x[k] = offset + scale * x[k]
void affine(std::span<double> x, double offset, double scale);

/// Sums of p_k and p_k^2 with p_k = ((x_k - mx) / sx) * ((y_k - my) / sy).
SumPair standardized_cross(std::span<const double> x, std::span<const double> y, double mx, double sx, double my,
                           double sy);

/// Power sums of x - center.
CentralSums central_sums(std::span<const double> x, double center);

// Direct access to each variant, for equivalence tests and benchmarks.
namespace scalar {
void antithetic_mix(const double* u, const std::uint8_t* bits, double* out, std::size_t n);
void affine(double* x, std::size_t n, double offset, double scale);
SumPair standardized_cross(const double* x, const double* y, std::size_t n, double mx, double sx, double my,
                           double sy);
CentralSums central_sums(const double* x, std::size_t n, double center);
}  // namespace scalar

#if defined(CORRSIM_HAVE_AVX2)
namespace avx2 {
void antithetic_mix(const double* u, const std::uint8_t* bits, double* out, std::size_t n);
void affine(double* x, std::size_t n, double offset, double scale);
SumPair standardized_cross(const double* x, const double* y, std::size_t n, double mx, double sx, double my,
                           double sy);
CentralSums central_sums(const double* x, std::size_t n, double center);
}  // namespace avx2
#endif

}  // namespace corrsim::kernels
