#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace corrsim {

class Rng;

/// Atom k over n coordinates stores coordinate i (0-based) in bit n-1-i, so
/// the first coordinate is the most significant bit: atom 0b011 of a
/// trivariate law is (b1,b2,b3) = (0,1,1).
using Atom = std::uint32_t;

constexpr int atom_bit(Atom atom, std::size_t n, std::size_t i) noexcept {
  return static_cast<int>((atom >> (n - 1 - i)) & 1u);
}

std::vector<std::uint8_t> atom_to_bits(Atom atom, std::size_t n);
Atom bits_to_atom(std::span<const std::uint8_t> bits);

/// Exact probability mass function over {0,1}^n, stored as 2^n atoms.
///
/// Construction clamps entries in [-tol, 0) to zero and rejects anything more
/// negative or a total mass further than tol from 1. A cumulative table is
/// kept for inverse-cdf sampling by binary search, which costs O(n) per draw.
class JointPMF {
 public:
  static constexpr double default_tol = 1e-12;
  static constexpr std::size_t max_dim = 12;

  JointPMF() = default;
  JointPMF(std::size_t n, std::vector<double> probs, double tol = default_tol);

  std::size_t dim() const noexcept { return n_; }
  std::size_t atoms() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](Atom a) const { return probs_[a]; }

  /// P(B_i = 1).
  double marginal(std::size_t i) const;
  /// P(B_i = B_j).
  double concurrence(std::size_t i, std::size_t j) const;

  /// Largest absolute deviation of mass, marginals and concurrences from
  /// the given targets (lambda as a full row-major n x n array).
  double max_residual(std::span<const double> marginals, std::span<const double> lambda) const;

  Atom sample(Rng& rng) const;

  bool operator==(const JointPMF& o) const { return n_ == o.n_ && probs_ == o.probs_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

}  // namespace corrsim
