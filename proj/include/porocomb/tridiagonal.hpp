#pragma once

#include <Eigen/Core>

#include <cmath>
#include <limits>

#include "porocomb/error.hpp"

namespace porocomb {

/// Tridiagonal matrix with sub(j) = A(j, j-1), diag(j) = A(j, j), super(j) = A(j, j+1).
/// sub(0) and super(m-1) are unused and kept at zero.
template <typename Scalar = double>
struct Tridiagonal {
  using Vector = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  Vector sub, diag, super;

  Tridiagonal() = default;
  explicit Tridiagonal(Eigen::Index m)
      : sub(Vector::Zero(m)), diag(Vector::Zero(m)), super(Vector::Zero(m)) {}

  Eigen::Index size() const { return diag.size(); }

  static Tridiagonal identity(Eigen::Index m) {
    Tridiagonal t(m);
    t.diag.setOnes();
    return t;
  }

  Tridiagonal transposed() const {
    const Eigen::Index m = size();
    Tridiagonal t(m);
    t.diag = diag;
    for (Eigen::Index j = 0; j + 1 < m; ++j) {
      t.super(j) = sub(j + 1);
      t.sub(j + 1) = super(j);
    }
    return t;
  }

  /// y = A x for any contiguous 1D expression.
  template <typename In, typename Out>
  void multiply(const In& x, Out& y) const {
    const Eigen::Index m = size();
    if (m == 1) {
      y(0) = diag(0) * x(0);
      return;
    }
    y(0) = diag(0) * x(0) + super(0) * x(1);
    for (Eigen::Index j = 1; j + 1 < m; ++j)
      y(j) = sub(j) * x(j - 1) + diag(j) * x(j) + super(j) * x(j + 1);
    y(m - 1) = sub(m - 1) * x(m - 2) + diag(m - 1) * x(m - 1);
  }

  /// min_j (|diag_j| - |sub_j| - |super_j|); positive means strictly diagonally dominant.
  Scalar dominance_margin() const {
    Scalar margin = std::numeric_limits<Scalar>::infinity();
    for (Eigen::Index j = 0; j < size(); ++j)
      margin = std::min(margin, std::abs(diag(j)) - std::abs(sub(j)) - std::abs(super(j)));
    return margin;
  }
};

/// Precomputed Thomas-algorithm elimination for repeated solves with one matrix.
template <typename Scalar = double>
class ThomasSolver {
 public:
  using Vector = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  ThomasSolver() = default;
  explicit ThomasSolver(const Tridiagonal<Scalar>& a) : sub_(a.sub) {
    const Eigen::Index m = a.size();
    c_.resize(m);
    inv_.resize(m);
    Scalar denom = a.diag(0);
    if (denom == Scalar(0) || !std::isfinite(denom))
      throw Error("ThomasSolver: singular tridiagonal system");
    inv_(0) = Scalar(1) / denom;
    c_(0) = a.super(0) * inv_(0);
    for (Eigen::Index j = 1; j < m; ++j) {
      denom = a.diag(j) - a.sub(j) * c_(j - 1);
      if (denom == Scalar(0) || !std::isfinite(denom))
        throw Error("ThomasSolver: singular tridiagonal system");
      inv_(j) = Scalar(1) / denom;
      c_(j) = (j + 1 < m) ? a.super(j) * inv_(j) : Scalar(0);
    }
  }

  /// Overwrites rhs with A^{-1} rhs.
  template <typename InOut>
  void solve_in_place(InOut& x) const {
    const Eigen::Index m = c_.size();
    x(0) = x(0) * inv_(0);
    for (Eigen::Index j = 1; j < m; ++j) x(j) = (x(j) - sub_(j) * x(j - 1)) * inv_(j);
    for (Eigen::Index j = m - 2; j >= 0; --j) x(j) -= c_(j) * x(j + 1);
  }

  Eigen::Index size() const { return c_.size(); }

 private:
  Vector sub_, c_, inv_;
};

}  // namespace porocomb
