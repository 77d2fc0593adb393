#include "corrsim/joint_pmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "corrsim/error.hpp"
#include "corrsim/rng.hpp"

namespace corrsim {

std::vector<std::uint8_t> atom_to_bits(Atom atom, std::size_t n) {
  std::vector<std::uint8_t> bits(n);
  for (std::size_t i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>(atom_bit(atom, n, i));
  return bits;
}

Atom bits_to_atom(std::span<const std::uint8_t> bits) {
  Atom a = 0;
  for (std::uint8_t b : bits) a = (a << 1) | (b ? 1u : 0u);
  return a;
}

JointPMF::JointPMF(std::size_t n, std::vector<double> probs, double tol) : n_(n), probs_(std::move(probs)) {
  if (n == 0 || n > max_dim) throw CapacityError("joint pmf dimension must be in [1, 12]");
  if (probs_.size() != (std::size_t{1} << n)) throw DomainError("joint pmf needs 2^n atoms");
  double total = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    double& p = probs_[k];
    if (!std::isfinite(p) || p < -tol) {
      std::ostringstream os;
      os << "atom " << k << " has probability " << p << " < 0";
      throw InfeasibleError(os.str());
    }
    if (p < 0.0) p = 0.0;
    total += p;
  }
  if (std::fabs(total - 1.0) > tol) {
    std::ostringstream os;
    os << "joint pmf mass " << total << " differs from 1 by more than " << tol;
    throw InfeasibleError(os.str());
  }

  cumulative_.resize(probs_.size());
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    acc += probs_[k];
    cumulative_[k] = acc;
    if (probs_[k] > 0.0) last_positive = k;
  }
  // Rounding must never push a draw past the last atom with mass.
  std::fill(cumulative_.begin() + static_cast<std::ptrdiff_t>(last_positive), cumulative_.end(),
            std::numeric_limits<double>::infinity());
}

double JointPMF::marginal(std::size_t i) const {
  double s = 0.0;
  for (Atom a = 0; a < probs_.size(); ++a)
    if (atom_bit(a, n_, i)) s += probs_[a];
  return s;
}

double JointPMF::concurrence(std::size_t i, std::size_t j) const {
  double s = 0.0;
  for (Atom a = 0; a < probs_.size(); ++a)
    if (atom_bit(a, n_, i) == atom_bit(a, n_, j)) s += probs_[a];
  return s;
}

double JointPMF::max_residual(std::span<const double> marginals, std::span<const double> lambda) const {
  double total = 0.0;
  for (double p : probs_) total += p;
  double worst = std::fabs(total - 1.0);
  for (std::size_t i = 0; i < n_; ++i) {
    worst = std::max(worst, std::fabs(marginal(i) - marginals[i]));
    for (std::size_t j = i + 1; j < n_; ++j)
      worst = std::max(worst, std::fabs(concurrence(i, j) - lambda[i * n_ + j]));
  }
  return worst;
}

Atom JointPMF::sample(Rng& rng) const {
  const double u = rng.uniform_open();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<Atom>(it - cumulative_.begin());
}

}  // namespace corrsim
