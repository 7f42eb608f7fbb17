#include "fermi_qfi/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "fermi_qfi/errors.hpp"

namespace fqfi {
namespace {

constexpr int kMaxOrder = 1024;

// Legendre P_n and its derivative at x.
std::pair<double, double> legendre(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  if (n == 0) return {1.0, 0.0};
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double dp = n * (x * p1 - p0) / (x * x - 1.0);
  return {p1, dp};
}

QuadratureRule build_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      auto [p, d] = legendre(n, x);
      dp = d;
      const double dx = p / d;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    dp = legendre(n, x).second;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

// Orthonormal Hermite polynomials p_n and p_{n-1} at x (weight exp(-x^2)).
std::pair<double, double> hermite_orthonormal(int n, double x) {
  double prev = 0.0;
  double cur = 1.0 / std::pow(std::numbers::pi, 0.25);
  for (int j = 0; j < n; ++j) {
    const double next =
        x * std::sqrt(2.0 / (j + 1.0)) * cur - std::sqrt(j / (j + 1.0)) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, prev};
}

QuadratureRule build_hermite(int n) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    jacobi(j, j - 1) = jacobi(j - 1, j) = std::sqrt(j / 2.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi,
                                                        Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = solver.eigenvalues()(i);
    for (int it = 0; it < 5; ++it) {
      auto [p, pm1] = hermite_orthonormal(n, x);
      const double dp = std::sqrt(2.0 * n) * pm1;
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    const double dp = std::sqrt(2.0 * n) * hermite_orthonormal(n, x).second;
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / (dp * dp);
  }
  return rule;
}

const QuadratureRule& cached(std::map<int, std::unique_ptr<QuadratureRule>>& cache,
                             std::mutex& mutex, int order,
                             QuadratureRule (*build)(int)) {
  if (order < 1 || order > kMaxOrder) {
    throw DomainError("quadrature order must lie in [1, 1024]");
  }
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<QuadratureRule>(build(order));
  return *slot;
}

}  // namespace

const QuadratureRule& gauss_legendre(int order) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mutex;
  return cached(cache, mutex, order, &build_legendre);
}

const QuadratureRule& gauss_hermite(int order) {
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  static std::mutex mutex;
  return cached(cache, mutex, order, &build_hermite);
}

}  // namespace fqfi
