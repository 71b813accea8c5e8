#pragma once

#include "infotrace/common.hpp"

#include <Eigen/Cholesky>

namespace infotrace {

// Max-abs asymmetry tolerated by SpdMatrix / PrecisionInverse.
inline constexpr double kSymmetryTol = 1e-12;

// Dense symmetric positive definite matrix. Positive definiteness is
// established by the jitter policy at factorization time, not on construction.
class SpdMatrix {
 public:
  explicit SpdMatrix(Matrix m);

  Index dim() const { return mat_.rows(); }
  const Matrix& mat() const { return mat_; }

  static SpdMatrix identity(Index dim);

 private:
  Matrix mat_;
};

// Maintained inverse of a precision matrix S = I + (1/sigma^2) sum phi phi^T.
class PrecisionInverse {
 public:
  explicit PrecisionInverse(Matrix m);

  Index dim() const { return mat_.rows(); }
  const Matrix& mat() const { return mat_; }

  static PrecisionInverse identity(Index dim);

 private:
  Matrix mat_;
};

// Cholesky with the jitter policy: on failure add 1e-10*trace/dim to the
// diagonal, doubling up to 6 times, then throw NotPositiveDefinite.
// `jitter_used` reports the final diagonal shift (0 when none was needed).
Eigen::LLT<Matrix> chol_factor(const Matrix& a, double* jitter_used = nullptr);

Vector chol_solve(const SpdMatrix& a, const Vector& b);
Matrix chol_solve(const SpdMatrix& a, const Matrix& b);

// (S + (1/sigma2) phi phi^T)^-1 by Sherman-Morrison; O(K^2).
PrecisionInverse precision_update(const PrecisionInverse& inv, const Vector& phi, double sigma2);

// (S - (1/sigma2) phi phi^T)^-1; phi must have been contributed before.
PrecisionInverse precision_downdate(const PrecisionInverse& inv, const Vector& phi, double sigma2);

}  // namespace infotrace
