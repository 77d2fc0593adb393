#include "corrsim/bernoulli_joint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "corrsim/error.hpp"
#include "corrsim/rng.hpp"

namespace corrsim {

namespace {

std::string atom_name(char prefix, Atom k, std::size_t n) {
  std::string s(1, prefix);
  for (std::size_t i = 0; i < n; ++i) s += atom_bit(k, n, i) ? '1' : '0';
  return s;
}

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    std::ostringstream os;
    os << what << " = " << v << " outside [0,1]";
    throw DomainError(os.str());
  }
}

// Builds a pmf from atom values, reporting the first negative atom by name.
JointPMF checked_pmf(std::size_t n, std::vector<double> atoms, char prefix) {
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (atoms[k] < -feasibility_slack) {
      std::ostringstream os;
      os << "infeasible: atom " << atom_name(prefix, static_cast<Atom>(k), n) << " = " << atoms[k] << " < 0";
      throw InfeasibleError(os.str());
    }
  }
  return JointPMF(n, std::move(atoms));
}

void require_alpha(const AlphaInterval& iv, double alpha) {
  if (iv.contains(alpha)) return;
  std::ostringstream os;
  os << "infeasible: alpha = " << alpha;
  if (!iv.feasible) {
    os << " but the alpha interval is empty (lower end " << iv.lo << " from " << iv.lo_atom << " >= 0, upper end "
       << iv.hi << " from " << iv.hi_atom << " >= 0)";
  } else if (alpha < iv.lo) {
    os << " makes atom " << iv.lo_atom << " negative (need alpha >= " << iv.lo << ")";
  } else {
    os << " makes atom " << iv.hi_atom << " negative (need alpha <= " << iv.hi << ")";
  }
  throw InfeasibleError(os.str());
}

}  // namespace

std::array<double, 8> AffineAtoms::at(double alpha) const {
  std::array<double, 8> out{};
  for (std::size_t k = 0; k < 8; ++k) out[k] = constant[k] + slope[k] * alpha;
  return out;
}

AlphaInterval AffineAtoms::interval(char prefix) const {
  AlphaInterval iv{-1e300, 1e300, false, "", ""};
  for (Atom k = 0; k < 8; ++k) {
    // constant + slope * alpha >= 0 with slope = +-1.
    if (slope[k] > 0.0) {
      const double bound = 0.0 - constant[k];  // no -0 in reports
      if (bound > iv.lo) {
        iv.lo = bound;
        iv.lo_atom = atom_name(prefix, k, 3);
      }
    } else {
      const double bound = constant[k];
      if (bound < iv.hi) {
        iv.hi = bound;
        iv.hi_atom = atom_name(prefix, k, 3);
      }
    }
  }
  iv.feasible = iv.lo <= iv.hi + feasibility_slack;
  return iv;
}

AffineAtoms trivariate_atoms(double p1, double p2, double p3, double r12, double r13, double r23) {
  AffineAtoms a{};
  // Atom order 000, 001, 010, 011, 100, 101, 110, 111 (X1 most significant).
  a.constant[0b000] = 0.5 * (r12 + r13 + r23 - 1.0);
  a.constant[0b001] = 0.5 * (2.0 - p1 - p2 - r13 - r23);
  a.constant[0b010] = 0.5 * (2.0 - p1 - p3 - r12 - r23);
  a.constant[0b011] = 0.5 * (p2 + p3 + r23 - 1.0);
  a.constant[0b100] = 0.5 * (2.0 - p2 - p3 - r12 - r13);
  a.constant[0b101] = 0.5 * (p1 + p3 + r13 - 1.0);
  a.constant[0b110] = 0.5 * (p1 + p2 + r12 - 1.0);
  a.constant[0b111] = 0.0;
  a.slope = {-1.0, 1.0, 1.0, -1.0, 1.0, -1.0, -1.0, 1.0};
  return a;
}

JointPMF bivariate_pmf(double lambda12) {
  check_unit(lambda12, "lambda12");
  const double same = 0.5 * lambda12;
  const double diff = 0.5 * (1.0 - lambda12);
  return JointPMF(2, {same, diff, diff, same});
}

bool bivariate_asymmetric_feasible(double p, double q, double r) {
  return std::fabs(1.0 - (p + q)) <= r + feasibility_slack &&
         r <= 2.0 * std::min(p, q) + 1.0 - (p + q) + feasibility_slack;
}

JointPMF bivariate_asymmetric_pmf(double p, double q, double r) {
  check_unit(p, "p");
  check_unit(q, "q");
  check_unit(r, "r");
  const double p11 = 0.5 * (p + q + r - 1.0);
  return checked_pmf(2, {r - p11, q - p11, p - p11, p11}, 'p');
}

bool trivariate_feasible(double l12, double l13, double l23) {
  const double sum = l12 + l13 + l23;
  const double lo = std::min({l12, l13, l23});
  return sum >= 1.0 - feasibility_slack && sum <= 1.0 + 2.0 * lo + feasibility_slack;
}

AlphaInterval trivariate_alpha_interval(double l12, double l13, double l23) {
  check_unit(l12, "lambda12");
  check_unit(l13, "lambda13");
  check_unit(l23, "lambda23");
  return trivariate_atoms(0.5, 0.5, 0.5, l12, l13, l23).interval('p');
}

JointPMF trivariate_pmf(double l12, double l13, double l23, double alpha) {
  const AlphaInterval iv = trivariate_alpha_interval(l12, l13, l23);
  require_alpha(iv, alpha);
  const auto atoms = trivariate_atoms(0.5, 0.5, 0.5, l12, l13, l23).at(alpha);
  return checked_pmf(3, {atoms.begin(), atoms.end()}, 'p');
}

TrivariateDirectSampler::TrivariateDirectSampler(double l12, double l13, double l23) {
  check_unit(l12, "lambda12");
  check_unit(l13, "lambda13");
  check_unit(l23, "lambda23");
  if (!trivariate_feasible(l12, l13, l23)) {
    std::ostringstream os;
    os << "infeasible concurrence triple (" << l12 << ", " << l13 << ", " << l23
       << "): need 1 <= sum <= 1 + 2 min, sum = " << (l12 + l13 + l23);
    throw InfeasibleError(os.str());
  }
  x1_hi_ = l13;
  x2_lo_ = 0.5 * (1.0 + l13 - l23 - l12);
  x2_hi_ = 0.5 * (1.0 + l13 + l23 - l12);
}

Atom TrivariateDirectSampler::draw(Rng& rng) const {
  const int b3 = rng.bit();
  const double u = rng.uniform_open();
  const int x1 = u <= x1_hi_ ? 1 : 0;
  const int x2 = (u >= x2_lo_ && u <= x2_hi_) ? 1 : 0;
  const int b1 = b3 ? x1 : 1 - x1;
  const int b2 = b3 ? x2 : 1 - x2;
  return static_cast<Atom>((b1 << 2) | (b2 << 1) | b3);
}

std::array<int, 3> trivariate_sample_direct(double l12, double l13, double l23, Rng& rng) {
  const Atom a = TrivariateDirectSampler(l12, l13, l23).draw(rng);
  return {atom_bit(a, 3, 0), atom_bit(a, 3, 1), atom_bit(a, 3, 2)};
}

ConcurrenceMatrix symmetrize(std::span<const double> p, const ConcurrenceMatrix& lambda) {
  const std::size_t n = lambda.size();
  if (p.size() != n) throw DomainError("symmetrize: marginal vector and matrix sizes differ");
  ConcurrenceMatrix out(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) out.set(i, j, lambda(i, j));
    out.set(i, n, p[i]);
  }
  return out;
}

std::vector<std::uint8_t> reduce_symmetric_draw(std::span<const std::uint8_t> b) {
  if (b.empty()) throw DomainError("reduce_symmetric_draw needs at least one bit");
  const std::uint8_t last = b.back();
  std::vector<std::uint8_t> x(b.size() - 1);
  for (std::size_t i = 0; i + 1 < b.size(); ++i) x[i] = b[i] == last ? 1 : 0;
  return x;
}

Atom reduce_symmetric_atom(Atom b, std::size_t n_plus_one) {
  const Atom mask = (Atom{1} << (n_plus_one - 1)) - 1;
  const Atom x = (b >> 1) & mask;
  return (b & 1u) ? x : (~x & mask);
}

std::vector<std::uint8_t> lift_asymmetric_draw(std::span<const std::uint8_t> x, Rng& rng) {
  const std::uint8_t last = static_cast<std::uint8_t>(rng.bit());
  std::vector<std::uint8_t> b(x.size() + 1);
  for (std::size_t i = 0; i < x.size(); ++i) b[i] = last ? x[i] : static_cast<std::uint8_t>(1 - x[i]);
  b.back() = last;
  return b;
}

Atom lift_asymmetric_atom(Atom x, std::size_t n, int last_bit) {
  // Branch-free: last_bit is a fair coin in the samplers.
  const Atom b = last_bit ? 1u : 0u;
  const Atom flip = (b - 1) & ((Atom{1} << n) - 1);
  return ((x ^ flip) << 1) | b;
}

namespace {

AffineAtoms quadrivariate_atoms(const ConcurrenceMatrix& l) {
  if (l.size() != 4) throw DomainError("quadrivariate construction needs a 4 x 4 concurrence matrix");
  return trivariate_atoms(l(0, 3), l(1, 3), l(2, 3), l(0, 1), l(0, 2), l(1, 2));
}

}  // namespace

AlphaInterval quadrivariate_alpha_interval(const ConcurrenceMatrix& lambda) {
  return quadrivariate_atoms(lambda).interval('q');
}

JointPMF quadrivariate_pmf(const ConcurrenceMatrix& lambda, double alpha) {
  const AffineAtoms atoms = quadrivariate_atoms(lambda);
  require_alpha(atoms.interval('q'), alpha);
  const auto q = atoms.at(alpha);
  return checked_pmf(3, {q.begin(), q.end()}, 'q');
}

QuadrivariateSampler::QuadrivariateSampler(const ConcurrenceMatrix& lambda, double alpha)
    : reduced_(quadrivariate_pmf(lambda, alpha)) {}

Atom QuadrivariateSampler::draw(Rng& rng) const {
  const Atom x = reduced_.sample(rng);
  return lift_asymmetric_atom(x, 3, rng.bit());
}

std::array<int, 4> quadrivariate_sample(const ConcurrenceMatrix& lambda, Rng& rng) {
  const AlphaInterval iv = quadrivariate_alpha_interval(lambda);
  if (!iv.feasible) {
    std::ostringstream os;
    os << "infeasible 4 x 4 concurrence matrix: alpha interval [" << iv.lo << ", " << iv.hi << "] is empty";
    throw InfeasibleError(os.str());
  }
  const Atom a = QuadrivariateSampler(lambda, std::max(iv.midpoint(), 0.0)).draw(rng);
  return {atom_bit(a, 4, 0), atom_bit(a, 4, 1), atom_bit(a, 4, 2), atom_bit(a, 4, 3)};
}

std::optional<std::string> principal_submatrix_violation(const ConcurrenceMatrix& lambda) {
  const std::size_t n = lambda.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        if (!trivariate_feasible(lambda(i, j), lambda(i, k), lambda(j, k))) {
          std::ostringstream os;
          os << "coordinates {" << i + 1 << "," << j + 1 << "," << k + 1 << "}: concurrence sum "
             << lambda(i, j) + lambda(i, k) + lambda(j, k) << " outside [1, 1 + 2 min]";
          return os.str();
        }
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t m = k + 1; m < n; ++m) {
          const std::array<std::size_t, 4> idx{i, j, k, m};
          const AlphaInterval iv = quadrivariate_alpha_interval(lambda.principal_submatrix(idx));
          if (!iv.feasible) {
            std::ostringstream os;
            os << "coordinates {" << i + 1 << "," << j + 1 << "," << k + 1 << "," << m + 1
               << "}: alpha interval empty (" << iv.lo << " from " << iv.lo_atom << " > " << iv.hi << " from "
               << iv.hi_atom << ")";
            return os.str();
          }
        }
  return std::nullopt;
}

}  // namespace corrsim
