#include "infotrace/linalg.hpp"

namespace infotrace {

namespace {

void check_symmetric(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatch(std::string(what) + ": matrix is not square");
  }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= kSymmetryTol)) {
    throw InvalidInput(std::string(what) + ": asymmetry " + format_double(asym) +
                       " exceeds " + format_double(kSymmetryTol));
  }
  if (!m.allFinite()) {
    throw NonFiniteValue(std::string(what) + ": non-finite entries");
  }
}

Matrix symmetrized(Matrix m) {
  m = 0.5 * (m + m.transpose()).eval();
  return m;
}

}  // namespace

SpdMatrix::SpdMatrix(Matrix m) : mat_(std::move(m)) {
  check_symmetric(mat_, "SpdMatrix");
}

SpdMatrix SpdMatrix::identity(Index dim) {
  return SpdMatrix(Matrix::Identity(dim, dim));
}

PrecisionInverse::PrecisionInverse(Matrix m) : mat_(std::move(m)) {
  check_symmetric(mat_, "PrecisionInverse");
}

PrecisionInverse PrecisionInverse::identity(Index dim) {
  return PrecisionInverse(Matrix::Identity(dim, dim));
}

Eigen::LLT<Matrix> chol_factor(const Matrix& a, double* jitter_used) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() == Eigen::Success) {
    if (jitter_used) *jitter_used = 0.0;
    return llt;
  }
  const Index dim = a.rows();
  double jitter = 1e-10 * a.trace() / static_cast<double>(dim);
  if (!(jitter > 0.0)) jitter = 1e-300;  // zero/negative trace: still attempt a shift
  for (int attempt = 0; attempt <= 6; ++attempt) {
    Matrix shifted = a;
    shifted.diagonal().array() += jitter;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) {
      if (jitter_used) *jitter_used = jitter;
      return llt;
    }
    jitter *= 2.0;
  }
  throw NotPositiveDefinite("Cholesky failed after max jitter (last shift " +
                            format_double(jitter / 2.0) + ")");
}

Vector chol_solve(const SpdMatrix& a, const Vector& b) {
  if (a.dim() != b.size()) {
    throw DimensionMismatch("chol_solve: dim " + std::to_string(a.dim()) + " vs rhs " +
                            std::to_string(b.size()));
  }
  return chol_factor(a.mat()).solve(b);
}

Matrix chol_solve(const SpdMatrix& a, const Matrix& b) {
  if (a.dim() != b.rows()) {
    throw DimensionMismatch("chol_solve: dim " + std::to_string(a.dim()) + " vs rhs rows " +
                            std::to_string(b.rows()));
  }
  return chol_factor(a.mat()).solve(b);
}

PrecisionInverse precision_update(const PrecisionInverse& inv, const Vector& phi, double sigma2) {
  if (phi.size() != inv.dim()) {
    throw DimensionMismatch("precision_update: phi size " + std::to_string(phi.size()) +
                            " vs dim " + std::to_string(inv.dim()));
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidInput("precision_update: sigma2 must be positive and finite");
  }
  if (phi.isZero(0.0)) return inv;
  const Vector w = inv.mat() * phi;
  const double quad = phi.dot(w);
  // denominator of Sherman-Morrison: sigma^2 * (1 + quad/sigma^2)
  const double denom = sigma2 + quad;
  if (!(denom > 0.0)) {
    throw DegenerateDenominator("precision_update: 1 + phi^T S^-1 phi / sigma2 = " +
                                format_double(denom / sigma2) + " <= 0");
  }
  Matrix out = inv.mat() - (w * w.transpose()) / denom;
  return PrecisionInverse(symmetrized(std::move(out)));
}

PrecisionInverse precision_downdate(const PrecisionInverse& inv, const Vector& phi, double sigma2) {
  if (phi.size() != inv.dim()) {
    throw DimensionMismatch("precision_downdate: phi size " + std::to_string(phi.size()) +
                            " vs dim " + std::to_string(inv.dim()));
  }
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidInput("precision_downdate: sigma2 must be positive and finite");
  }
  if (phi.isZero(0.0)) return inv;
  const Vector w = inv.mat() * phi;
  const double quad = phi.dot(w);
  const double denom = sigma2 - quad;
  if (!(denom > 1e-12 * sigma2)) {
    throw DegenerateDenominator(
        "precision_downdate: removal denominator sigma2 - phi^T S^-1 phi = " +
        format_double(denom) + " is not positive; point absent or state collapsed");
  }
  Matrix out = inv.mat() + (w * w.transpose()) / denom;
  return PrecisionInverse(symmetrized(std::move(out)));
}

}  // namespace infotrace
