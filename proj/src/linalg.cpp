#include "fermi_qfi/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "fermi_qfi/errors.hpp"

namespace fqfi {

CMatrix expm(const CMatrix& a) { return a.exp(); }

CMatrix logm(const CMatrix& a) { return a.log(); }

CMatrix logm_unitary(const CMatrix& w, double cut_tol) {
  // A unitary matrix is normal, so its complex Schur form is diagonal up to rounding.
  Eigen::ComplexSchur<CMatrix> schur(w);
  const CMatrix& q = schur.matrixU();
  const CMatrix& t = schur.matrixT();
  CVector log_diag(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    const Complex lambda = t(i, i);
    if (std::abs(lambda + 1.0) < cut_tol) {
      throw BranchCutError(
          "matrix has an eigenvalue at -1: the principal logarithm is undefined; "
          "split the transformation into two half-steps");
    }
    log_diag(i) = std::log(lambda);
  }
  return q * log_diag.asDiagonal() * q.adjoint();
}

CMatrix expm_frechet(const CMatrix& x, const CMatrix& e) {
  const Eigen::Index n = x.rows();
  CMatrix block = CMatrix::Zero(2 * n, 2 * n);
  block.topLeftCorner(n, n) = x;
  block.topRightCorner(n, n) = e;
  block.bottomRightCorner(n, n) = x;
  return expm(block).topRightCorner(n, n);
}

double max_abs(const CMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double antisymmetry_residual(const CMatrix& a) {
  return max_abs(a + a.transpose());
}

CMatrix central_derivative(const std::function<CMatrix(double)>& f, double x,
                           double step) {
  const double h = step > 0.0 ? step : 1e-5 * std::max(1.0, std::abs(x));
  auto diff = [&](double dh) { return ((f(x + dh) - f(x - dh)) / (2.0 * dh)).eval(); };
  const CMatrix coarse = diff(h);
  const CMatrix fine = diff(h / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace fqfi
