#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corrsim/joint_pmf.hpp"
#include "corrsim/matrix.hpp"

namespace corrsim {

class Rng;

/// Absolute slack on every feasibility comparison in this module. The
/// constructions are exact in exact arithmetic; the slack only absorbs
/// rounding.
inline constexpr double feasibility_slack = 1e-12;

/// Range of the free parameter alpha = P(all ones) in the under-determined
/// three-coordinate systems. `lo_atom` / `hi_atom` name the atoms whose
/// non-negativity sets each end (e.g. "p011", "q001").
struct AlphaInterval {
  double lo;
  double hi;
  bool feasible;
  std::string lo_atom;
  std::string hi_atom;

  double midpoint() const noexcept { return 0.5 * (lo + hi); }
  bool contains(double alpha) const noexcept {
    return alpha >= lo - feasibility_slack && alpha <= hi + feasibility_slack;
  }
};

/// The eight atoms of a law on {0,1}^3 with fixed marginals and pairwise
/// concurrences, as affine functions of alpha: atom k = constant[k] + slope[k] * alpha.
struct AffineAtoms {
  std::array<double, 8> constant;
  std::array<double, 8> slope;

  std::array<double, 8> at(double alpha) const;
  AlphaInterval interval(char prefix) const;
};

/// Solution of {mass 1, P(X_i = 1) = p_i, P(X_i = X_j) = r_ij, P(X = 111) = alpha}.
AffineAtoms trivariate_atoms(double p1, double p2, double p3, double r12, double r13, double r23);

// ---- two coordinates -------------------------------------------------------

/// Unique fair-coin pair with P(B1 = B2) = lambda12.
JointPMF bivariate_pmf(double lambda12);

/// |1-(p+q)| <= r <= 2 min(p,q) + 1 - (p+q): a pair X ~ Bern(p), Y ~ Bern(q)
/// with P(X = Y) = r exists.
bool bivariate_asymmetric_feasible(double p, double q, double r);

/// The unique law of such a pair; throws InfeasibleError naming the negative atom.
JointPMF bivariate_asymmetric_pmf(double p, double q, double r);

// ---- three coordinates -----------------------------------------------------

/// 1 <= l12 + l13 + l23 <= 1 + 2 min(l12, l13, l23).
bool trivariate_feasible(double l12, double l13, double l23);

AlphaInterval trivariate_alpha_interval(double l12, double l13, double l23);

/// Fair-coin trivariate law with concurrences (l12, l13, l23) and
/// P(111) = alpha. Throws InfeasibleError naming the violated atom.
JointPMF trivariate_pmf(double l12, double l13, double l23, double alpha);

/// Interval construction: B3 is a fair coin, X1 and X2 are indicators of a
/// shared uniform falling in two overlapping intervals, and B1, B2 copy or
/// flip B3 according to X1, X2.
class TrivariateDirectSampler {
 public:
  TrivariateDirectSampler(double l12, double l13, double l23);

  /// Returns the drawn triple as an atom (B1 most significant).
  Atom draw(Rng& rng) const;

  double x1_hi() const noexcept { return x1_hi_; }
  double x2_lo() const noexcept { return x2_lo_; }
  double x2_hi() const noexcept { return x2_hi_; }

 private:
  double x1_hi_;
  double x2_lo_;
  double x2_hi_;
};

std::array<int, 3> trivariate_sample_direct(double l12, double l13, double l23, Rng& rng);

// ---- asymmetric <-> symmetric reduction ------------------------------------

/// Borders an n x n concurrence matrix with the column (p_1..p_n, 1).
ConcurrenceMatrix symmetrize(std::span<const double> p, const ConcurrenceMatrix& lambda);

/// X_i = 1(B_i == B_{n+1}).
std::vector<std::uint8_t> reduce_symmetric_draw(std::span<const std::uint8_t> b);
Atom reduce_symmetric_atom(Atom b, std::size_t n_plus_one);

/// Draws B_{n+1} from rng and sets B_i = B_{n+1} X_i + (1 - B_{n+1})(1 - X_i).
std::vector<std::uint8_t> lift_asymmetric_draw(std::span<const std::uint8_t> x, Rng& rng);
Atom lift_asymmetric_atom(Atom x, std::size_t n, int last_bit);

// ---- four coordinates ------------------------------------------------------

/// Feasible alpha for the reduced system (X1, X2, X3) with X_i ~ Bern(l_i4)
/// and concurrences l_ij (i, j <= 3), read off atom non-negativity.
AlphaInterval quadrivariate_alpha_interval(const ConcurrenceMatrix& lambda);

/// The reduced pmf over (X1, X2, X3) at the given alpha.
JointPMF quadrivariate_pmf(const ConcurrenceMatrix& lambda, double alpha);

/// Draws X from quadrivariate_pmf, a fair B4, and lifts X to (B1..B4).
class QuadrivariateSampler {
 public:
  QuadrivariateSampler(const ConcurrenceMatrix& lambda, double alpha);

  Atom draw(Rng& rng) const;
  const JointPMF& reduced_pmf() const noexcept { return reduced_; }

 private:
  JointPMF reduced_;
};

/// One draw at the midpoint alpha.
std::array<int, 4> quadrivariate_sample(const ConcurrenceMatrix& lambda, Rng& rng);

// ---- higher dimensions -----------------------------------------------------

/// First 3- or 4-coordinate principal submatrix failing its exact
/// characterization, described for humans; nullopt if all pass. These are
/// necessary (not sufficient) conditions once n >= 5.
std::optional<std::string> principal_submatrix_violation(const ConcurrenceMatrix& lambda);

}  // namespace corrsim
