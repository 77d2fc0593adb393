#include "corrsim/oracle.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <type_traits>
#include <cmath>
#include <sstream>
#include <vector>

#include "corrsim/error.hpp"

namespace corrsim {

namespace {

constexpr double kPivotEps = 1e-11;

bool is_pos(double v) { return v > kPivotEps; }
bool is_neg(double v) { return v < -kPivotEps; }
bool is_zero(double v) { return v == 0.0; }
bool is_tiny(double v) { return std::fabs(v) <= kPivotEps; }
bool ties(double a, double b) { return std::fabs(a - b) <= kPivotEps; }
// Round-off left by elimination is flushed so degeneracy is recognized.
void flush(double& v) {
  if (std::fabs(v) <= 1e-13) v = 0.0;
}
double to_double(double v) { return v; }
std::string to_text(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool is_pos(const mpq_class& v) { return sgn(v) > 0; }
bool is_neg(const mpq_class& v) { return sgn(v) < 0; }
bool is_zero(const mpq_class& v) { return sgn(v) == 0; }
bool is_tiny(const mpq_class& v) { return sgn(v) == 0; }
bool ties(const mpq_class& a, const mpq_class& b) { return a == b; }
void flush(mpq_class&) {}
double to_double(const mpq_class& v) { return v.get_d(); }
std::string to_text(const mpq_class& v) { return v.get_str(); }

// Phase-1 simplex on a dense tableau for {A x = b, x >= 0} with b >= 0.
// Artificial columns N..N+m-1 start in the basis; their total is minimized.
// The polytope is highly degenerate (uniform marginals stall plain Dantzig
// pricing for n >= 8), so the first pass runs on a slightly raised b. The
// true b is then restored through the basis inverse held in the artificial
// columns; reduced costs do not depend on b, so dual simplex pivots repair
// any negative basic value and a final primal pass finishes. Bland's rule
// takes over after a run of degenerate pivots in either primal pass.
template <class T>
class Phase1 {
 public:
  Phase1(std::size_t rows, std::size_t cols, const std::vector<T>& a, const std::vector<T>& b)
      : m_(rows), n_(cols), w_(cols + rows), tab_(rows * w_), rhs_(b), d_(w_), basis_(rows) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) tab_[i * w_ + j] = a[i * n_ + j];
      tab_[i * w_ + n_ + i] = 1;
      basis_[i] = n_ + i;
    }
    z_rhs_ = 0;
    for (std::size_t i = 0; i < m_; ++i) z_rhs_ -= rhs_[i];
    for (std::size_t j = 0; j < n_; ++j) {
      T s = 0;
      for (std::size_t i = 0; i < m_; ++i) s -= tab_[i * w_ + j];
      d_[j] = s;
    }
  }

  void restore(const std::vector<T>& b) {
    z_rhs_ = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      T v = 0;
      for (std::size_t k = 0; k < m_; ++k)
        if (!is_zero(tab_[i * w_ + n_ + k])) v += tab_[i * w_ + n_ + k] * b[k];
      flush(v);
      rhs_[i] = v;
      if (basis_[i] >= n_) z_rhs_ -= v;
    }
  }

  void dual_repair(std::size_t max_pivots) {
    for (;;) {
      std::size_t r = m_;
      for (std::size_t i = 0; i < m_; ++i)
        if (is_neg(rhs_[i]) && (r == m_ || rhs_[i] < rhs_[r])) r = i;
      if (r == m_) break;
      std::size_t c = w_;
      T best = 0;
      for (std::size_t j = 0; j < w_; ++j) {
        const T& a = tab_[r * w_ + j];
        if (!is_neg(a)) continue;
        T ratio = d_[j] / (-a);
        if (c == w_ || ratio < best) {
          c = j;
          best = std::move(ratio);
        }
      }
      if (c == w_) throw NumericalError("dual repair found no entering column");
      pivot(r, c);
      if (++pivots_ > max_pivots) throw NumericalError("phase-1 simplex exceeded its pivot budget");
    }
    // Tiny negative basics below the pivot tolerance are round-off.
    for (T& v : rhs_)
      if (!is_pos(v) && !is_zero(v)) v = 0;
  }

  void solve(std::size_t max_pivots) {
    bool bland = false;
    std::size_t degenerate_run = 0;
    for (;;) {
      const std::size_t col = bland ? entering_bland() : entering_dantzig();
      if (col == w_) return;
      const std::size_t row = leaving(col);
      if (row == m_) throw NumericalError("phase-1 simplex reported an unbounded direction");
      if (is_tiny(rhs_[row])) {
        if (++degenerate_run > 50) bland = true;
      } else {
        degenerate_run = 0;
      }
      pivot(row, col);
      if (++pivots_ > max_pivots) throw NumericalError("phase-1 simplex exceeded its pivot budget");
    }
  }

  T objective() const { return -z_rhs_; }
  std::size_t pivots() const { return pivots_; }

  std::vector<T> primal() const {
    std::vector<T> x(n_, T(0));
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_) x[basis_[i]] = rhs_[i];
    return x;
  }

  // y_i = c_art - d_art = 1 - d_{N+i}.
  std::vector<T> duals() const {
    std::vector<T> y(m_);
    for (std::size_t i = 0; i < m_; ++i) y[i] = T(1) - d_[n_ + i];
    return y;
  }

 private:
  std::size_t entering_bland() const {
    for (std::size_t j = 0; j < w_; ++j)
      if (is_neg(d_[j])) return j;
    return w_;
  }

  std::size_t entering_dantzig() const {
    std::size_t best = w_;
    for (std::size_t j = 0; j < w_; ++j)
      if (is_neg(d_[j]) && (best == w_ || d_[j] < d_[best])) best = j;
    return best;
  }

  std::size_t leaving(std::size_t col) const {
    std::size_t best = m_;
    T best_ratio = 0;
    for (std::size_t i = 0; i < m_; ++i) {
      const T& a = tab_[i * w_ + col];
      if (!is_pos(a)) continue;
      T ratio = rhs_[i] / a;
      const bool tie = best != m_ && ties(ratio, best_ratio);
      if (best == m_ || (!tie && ratio < best_ratio) || (tie && basis_[i] < basis_[best])) {
        best = i;
        best_ratio = std::move(ratio);
      }
    }
    return best;
  }

  void pivot(std::size_t r, std::size_t c) {
    T* prow = &tab_[r * w_];
    const T piv = prow[c];
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j < w_; ++j) {
      if (is_zero(prow[j])) continue;
      prow[j] /= piv;
      nz.push_back(j);
    }
    rhs_[r] /= piv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      T* row = &tab_[i * w_];
      if (is_zero(row[c])) continue;
      const T f = row[c];
      for (std::size_t j : nz) {
        row[j] -= f * prow[j];
        flush(row[j]);
      }
      row[c] = 0;
      rhs_[i] -= f * rhs_[r];
      flush(rhs_[i]);
    }
    if (!is_zero(d_[c])) {
      const T f = d_[c];
      for (std::size_t j : nz) {
        d_[j] -= f * prow[j];
        flush(d_[j]);
      }
      d_[c] = 0;
      z_rhs_ -= f * rhs_[r];
    }
    basis_[r] = c;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t w_;
  std::vector<T> tab_;
  std::vector<T> rhs_;
  std::vector<T> d_;
  T z_rhs_;
  std::vector<std::size_t> basis_;
  std::size_t pivots_ = 0;
};

std::vector<std::string> constraint_names(std::size_t n) {
  std::vector<std::string> names{"mass"};
  for (std::size_t i = 0; i < n; ++i) names.push_back("P(X" + std::to_string(i + 1) + "=1)");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      names.push_back("P(X" + std::to_string(i + 1) + "=X" + std::to_string(j + 1) + ")");
  return names;
}

// Constraint matrix (0/1 entries) over atoms, rows ordered as constraint_names.
template <class T>
std::vector<T> constraint_matrix(std::size_t n) {
  const std::size_t atoms = std::size_t{1} << n;
  const std::size_t rows = 1 + n + n * (n - 1) / 2;
  std::vector<T> a(rows * atoms, T(0));
  for (Atom k = 0; k < atoms; ++k) {
    std::size_t r = 0;
    a[r++ * atoms + k] = 1;
    for (std::size_t i = 0; i < n; ++i) a[r++ * atoms + k] = atom_bit(k, n, i) ? 1 : 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) a[r++ * atoms + k] = atom_bit(k, n, i) == atom_bit(k, n, j) ? 1 : 0;
  }
  return a;
}

// Deterministic distinct offsets in [1, 2) * 2^-24, exact in both types.
template <class T>
T perturbation(std::uint32_t h) {
  const long num = (1L << 20) + static_cast<long>(h >> 12);
  if constexpr (std::is_same_v<T, double>) {
    return std::ldexp(static_cast<double>(num), -44);
  } else {
    mpq_class q(num, 1UL << 20);
    q.canonicalize();
    return q / (1L << 24);
  }
}

template <class T>
FeasibilityWitness solve(std::size_t n, const std::vector<T>& b, const OracleOptions& opts, bool exact) {
  const std::size_t atoms = std::size_t{1} << n;
  const std::size_t rows = b.size();
  constexpr std::size_t budget = 200000;
  std::vector<T> raised = b;
  std::uint32_t h = 2166136261u;
  for (std::size_t i = 0; i < rows; ++i) {
    h = h * 16777619u + 0x9e3779b9u;
    raised[i] += perturbation<T>(h);
  }
  Phase1<T> lp(rows, atoms, constraint_matrix<T>(n), raised);
  lp.solve(budget);
  lp.restore(b);
  lp.dual_repair(budget);
  lp.solve(budget);

  FeasibilityWitness w;
  w.exact = exact;
  w.pivots = lp.pivots();
  const T obj = lp.objective();
  w.min_violation = to_double(obj);
  const bool zero = exact ? is_zero(obj) : to_double(obj) <= opts.tol;

  std::vector<double> target_marg(n);
  std::vector<double> target_lambda(n * n, 1.0);
  {
    std::size_t r = 1;
    for (std::size_t i = 0; i < n; ++i) target_marg[i] = to_double(b[r++]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) target_lambda[i * n + j] = target_lambda[j * n + i] = to_double(b[r++]);
  }

  if (zero) {
    const std::vector<T> x = lp.primal();
    std::vector<double> probs(atoms);
    for (std::size_t k = 0; k < atoms; ++k) probs[k] = std::max(0.0, to_double(x[k]));
    if (!exact) {
      double total = 0.0;
      for (double p : probs) total += p;
      for (double& p : probs) p /= total;
    }
    JointPMF pmf(n, std::move(probs), exact ? JointPMF::default_tol : opts.tol);
    w.max_residual = pmf.max_residual(target_marg, target_lambda);
    if (w.max_residual <= (exact ? 1e-12 : opts.tol)) {
      w.feasible = true;
      w.pmf = std::move(pmf);
      return w;
    }
    std::ostringstream os;
    os << "witness failed verification: residual " << w.max_residual;
    w.certificate = os.str();
    return w;
  }

  const std::vector<T> y = lp.duals();
  const auto names = constraint_names(n);
  for (const T& v : y) w.farkas.push_back(to_double(v));
  std::ostringstream os;
  os << "minimum total constraint violation " << to_text(obj) << "; Farkas multipliers:";
  for (std::size_t i = 0; i < rows; ++i)
    if (exact ? !is_zero(y[i]) : std::fabs(to_double(y[i])) > 1e-9) os << ' ' << names[i] << '=' << to_text(y[i]);
  w.certificate = os.str();
  return w;
}

}  // namespace

std::optional<std::pair<long, long>> small_rational(double x, long max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  // Continued-fraction convergents of x.
  long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double rem = x;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(rem);
    if (std::fabs(a) > 1e15) break;
    const long ai = static_cast<long>(a);
    const long h2 = ai * h1 + h0;
    const long k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    const double approx = static_cast<double>(h1) / static_cast<double>(k1);
    if (std::fabs(approx - x) <= 1e-15 * std::max(1.0, std::fabs(x))) return std::make_pair(h1, k1);
    const double frac = rem - a;
    if (frac == 0.0) break;
    rem = 1.0 / frac;
  }
  return std::nullopt;
}

FeasibilityWitness lp_feasible(std::span<const double> marginal_probs, const ConcurrenceMatrix& lambda,
                               const OracleOptions& opts) {
  const std::size_t n = lambda.size();
  if (n == 0) throw DomainError("lp_feasible needs at least one coordinate");
  if (n > JointPMF::max_dim) {
    std::ostringstream os;
    os << "lp_feasible supports n <= " << JointPMF::max_dim << " (2^n atoms), got n = " << n;
    throw CapacityError(os.str());
  }
  if (marginal_probs.size() != n) throw DomainError("lp_feasible: marginal vector and matrix sizes differ");
  for (double p : marginal_probs)
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("lp_feasible: marginal probability outside [0,1]");

  std::vector<double> b{1.0};
  b.insert(b.end(), marginal_probs.begin(), marginal_probs.end());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) b.push_back(lambda(i, j));

  bool exact = opts.arithmetic == OracleArithmetic::exact;
  std::vector<mpq_class> bq;
  if (opts.arithmetic != OracleArithmetic::floating && (exact || n <= opts.exact_max_dim)) {
    bool all_rational = true;
    for (double v : b) {
      const auto r = small_rational(v, opts.max_denominator);
      if (!r) {
        all_rational = false;
        break;
      }
      bq.emplace_back(r->first, r->second);
      bq.back().canonicalize();
    }
    if (exact && !all_rational) {
      // Forced exact mode: take the binary values at face value.
      bq.clear();
      for (double v : b) bq.emplace_back(v);
    }
    exact = exact || all_rational;
  }
  if (exact) return solve<mpq_class>(n, bq, opts, true);
  return solve<double>(n, b, opts, false);
}

JointPMF pushforward(const JointPMF& pmf, std::size_t out_dim, const std::function<Atom(Atom)>& map) {
  std::vector<double> out(std::size_t{1} << out_dim, 0.0);
  for (Atom a = 0; a < pmf.atoms(); ++a) {
    const Atom t = map(a);
    if (t >= out.size()) throw DomainError("pushforward map produced an atom outside the target cube");
    out[t] += pmf[a];
  }
  return JointPMF(out_dim, std::move(out));
}

}  // namespace corrsim
