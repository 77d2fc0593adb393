#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "corrsim/joint_pmf.hpp"
#include "corrsim/matrix.hpp"

namespace corrsim {

enum class OracleArithmetic { automatic, exact, floating };

struct OracleOptions {
  /// automatic: exact rational pivoting when every input is a rational with
  /// denominator <= max_denominator and n <= exact_max_dim, floating otherwise.
  OracleArithmetic arithmetic = OracleArithmetic::automatic;
  std::size_t exact_max_dim = 8;
  long max_denominator = 1L << 16;
  /// Floating path: phase-1 objective and witness residual tolerance.
  double tol = 1e-9;
};

struct FeasibilityWitness {
  bool feasible = false;
  /// Vertex of the feasible polytope when feasible.
  std::optional<JointPMF> pmf;
  /// When infeasible: the minimal total constraint violation and the Farkas
  /// multipliers (y with y^T A <= 0 on every atom and y^T b > 0).
  std::string certificate;
  /// The multipliers y, one per constraint row in the order mass,
  /// P(B_1 = 1)..P(B_n = 1), then P(B_i = B_j) for i < j row-major.
  std::vector<double> farkas;
  bool exact = false;
  double min_violation = 0.0;
  double max_residual = 0.0;
  std::size_t pivots = 0;
};

/// Decides whether some law on {0,1}^n has P(B_i = 1) = marginal_probs[i]
/// and P(B_i = B_j) = lambda(i,j), by phase-1 simplex over the 2^n atoms.
/// Throws CapacityError for n > 12.
FeasibilityWitness lp_feasible(std::span<const double> marginal_probs, const ConcurrenceMatrix& lambda,
                               const OracleOptions& opts = {});

/// Image measure of `pmf` under an atom map into {0,1}^out_dim.
JointPMF pushforward(const JointPMF& pmf, std::size_t out_dim, const std::function<Atom(Atom)>& map);

/// Best rational approximation p/q with q <= max_den, accepted only if it
/// reproduces x to within a few ulps.
std::optional<std::pair<long, long>> small_rational(double x, long max_den);

}  // namespace corrsim
