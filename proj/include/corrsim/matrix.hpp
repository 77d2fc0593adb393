#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <vector>

#include "corrsim/error.hpp"

namespace corrsim {

struct CorrelationTag {
  static constexpr double lo = -1.0;
  static constexpr double hi = 1.0;
  static constexpr const char* name = "correlation";
};

struct ConcurrenceTag {
  static constexpr double lo = 0.0;
  static constexpr double hi = 1.0;
  static constexpr const char* name = "concurrence";
};

/// Symmetric matrix with unit diagonal whose off-diagonal entries are
/// restricted to [Tag::lo, Tag::hi]. Symmetry holds by construction: only
/// one triangle is ever written.
template <class Tag>
class UnitDiagonalMatrix {
 public:
  UnitDiagonalMatrix() = default;

  explicit UnitDiagonalMatrix(std::size_t n, double off_diagonal = 0.0) : n_(n), data_(n * n, 0.0) {
    check_value(off_diagonal);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) data_[i * n + j] = i == j ? 1.0 : off_diagonal;
  }

  /// Builds from the strictly-lower triangle in row-major order:
  /// (2,1), (3,1), (3,2), (4,1), ...
  static UnitDiagonalMatrix from_lower(std::size_t n, std::span<const double> lower) {
    if (lower.size() != n * (n - 1) / 2) {
      std::ostringstream os;
      os << Tag::name << " matrix of size " << n << " needs " << n * (n - 1) / 2
         << " lower-triangular entries, got " << lower.size();
      throw DomainError(os.str());
    }
    UnitDiagonalMatrix m(n);
    std::size_t k = 0;
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) m.set(i, j, lower[k++]);
    return m;
  }

  std::size_t size() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  void set(std::size_t i, std::size_t j, double v) {
    if (i == j) {
      if (v != 1.0) throw DomainError(std::string(Tag::name) + " matrix diagonal must be 1");
      return;
    }
    check_value(v);
    data_[i * n_ + j] = v;
    data_[j * n_ + i] = v;
  }

  std::vector<double> lower() const {
    std::vector<double> out;
    out.reserve(n_ * (n_ - 1) / 2);
    for (std::size_t i = 1; i < n_; ++i)
      for (std::size_t j = 0; j < i; ++j) out.push_back((*this)(i, j));
    return out;
  }

  UnitDiagonalMatrix principal_submatrix(std::span<const std::size_t> idx) const {
    UnitDiagonalMatrix m(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < a; ++b) m.set(a, b, (*this)(idx[a], idx[b]));
    return m;
  }

  bool operator==(const UnitDiagonalMatrix&) const = default;

 private:
  static void check_value(double v) {
    if (!(v >= Tag::lo && v <= Tag::hi)) {
      std::ostringstream os;
      os << Tag::name << " entry " << v << " outside [" << Tag::lo << ", " << Tag::hi << "]";
      throw DomainError(os.str());
    }
  }

  std::size_t n_ = 0;
  std::vector<double> data_;
};

using CorrelationMatrix = UnitDiagonalMatrix<CorrelationTag>;
using ConcurrenceMatrix = UnitDiagonalMatrix<ConcurrenceTag>;
// For fair-coin marginals the convexity and concurrence matrices coincide,
// so both names share one representation.
using ConvexityMatrix = ConcurrenceMatrix;

}  // namespace corrsim
