#include <atomic>

#include "corrsim/error.hpp"
#include "corrsim/kernels.hpp"

namespace corrsim::kernels {

namespace {

Isa probe() noexcept {
#if defined(CORRSIM_HAVE_AVX2)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

std::atomic<Isa>& active() {
  static std::atomic<Isa> isa{probe()};
  return isa;
}

void require_same_size(std::size_t a, std::size_t b) {
  if (a != b) throw DomainError("kernel operands differ in length");
}

}  // namespace

const char* to_string(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() noexcept {
  static const Isa isa = probe();
  return isa;
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) throw DomainError("AVX2 kernels unavailable on this host");
  active().store(isa, std::memory_order_relaxed);
}

void antithetic_mix(std::span<const double> u, std::span<const std::uint8_t> bits, std::span<double> out) {
  require_same_size(u.size(), bits.size());
  require_same_size(u.size(), out.size());
#if defined(CORRSIM_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::antithetic_mix(u.data(), bits.data(), out.data(), u.size());
#endif
  scalar::antithetic_mix(u.data(), bits.data(), out.data(), u.size());
}

void affine(std::span<double> x, double offset, double scale) {
#if defined(CORRSIM_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::affine(x.data(), x.size(), offset, scale);
#endif
  scalar::affine(x.data(), x.size(), offset, scale);
}

SumPair standardized_cross(std::span<const double> x, std::span<const double> y, double mx, double sx, double my,
                           double sy) {
  require_same_size(x.size(), y.size());
#if defined(CORRSIM_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::standardized_cross(x.data(), y.data(), x.size(), mx, sx, my, sy);
#endif
  return scalar::standardized_cross(x.data(), y.data(), x.size(), mx, sx, my, sy);
}

CentralSums central_sums(std::span<const double> x, double center) {
#if defined(CORRSIM_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::central_sums(x.data(), x.size(), center);
#endif
  return scalar::central_sums(x.data(), x.size(), center);
}

}  // namespace corrsim::kernels
