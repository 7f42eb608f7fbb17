#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace fqfi {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};

/// Matrix exponential (Padé approximant with scaling and squaring).
CMatrix expm(const CMatrix& a);

/// Principal matrix logarithm of a general (non-singular) matrix.
CMatrix logm(const CMatrix& a);

/// Principal logarithm of a unitary matrix through its Schur form.
/// Throws BranchCutError when an eigenvalue lies within `cut_tol` of -1.
CMatrix logm_unitary(const CMatrix& w, double cut_tol = 1e-8);

/// Fréchet derivative of exp at `x` in direction `e`:
/// d/dt exp(x + t e) at t = 0, read off the block-triangular exponential
/// exp([[x, e], [0, x]]).
CMatrix expm_frechet(const CMatrix& x, const CMatrix& e);

double max_abs(const CMatrix& a);

/// max |a + a^t|
double antisymmetry_residual(const CMatrix& a);

/// Central difference of a matrix-valued function with one Richardson step.
/// Default step is 1e-5 * max(1, |x|).
CMatrix central_derivative(const std::function<CMatrix(double)>& f, double x,
                           double step = 0.0);

}  // namespace fqfi
