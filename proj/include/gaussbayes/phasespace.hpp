#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>

#include "gaussbayes/errors.hpp"

namespace gaussbayes {

/// Single-mode Gaussian state: first moments and covariance, vacuum cov = I/2.
template <typename Scalar>
struct BasicGaussianState {
  using Vector = Eigen::Matrix<Scalar, 2, 1>;
  using Matrix = Eigen::Matrix<Scalar, 2, 2>;

  Vector mean = Vector::Zero();
  Matrix cov = Matrix::Identity() / Scalar(2);

  /// Gamma = 2 sigma, the matrix used by the Wigner function and the fidelity.
  Matrix gamma() const { return Scalar(2) * cov; }
  Scalar det() const { return cov.determinant(); }
  bool is_pure(Scalar tol = Scalar(1e-9)) const {
    using std::abs;
    return abs(det() - Scalar(0.25)) <= tol;
  }
  // Throws DomainError unless cov is symmetric, positive definite and
  // satisfies det >= 1/4.
  void validate(Scalar tol = Scalar(1e-9)) const;
};

using GaussianState = BasicGaussianState<double>;

template <typename Scalar>
void BasicGaussianState<Scalar>::validate(Scalar tol) const {
  using std::abs;
  if (!mean.allFinite() || !cov.allFinite()) throw DomainError("GaussianState: non-finite moments");
  if (abs(cov(0, 1) - cov(1, 0)) > tol) throw DomainError("GaussianState: covariance not symmetric");
  if (!(cov(0, 0) > Scalar(0)) || !(det() > Scalar(0))) {
    throw DomainError("GaussianState: covariance not positive definite");
  }
  if (det() < Scalar(0.25) - tol) throw DomainError("GaussianState: violates det(cov) >= 1/4");
}

template <typename Scalar = double>
BasicGaussianState<Scalar> vacuum() {
  return {};
}

template <typename Scalar>
BasicGaussianState<Scalar> displace(const BasicGaussianState<Scalar>& st, std::complex<Scalar> alpha) {
  BasicGaussianState<Scalar> out = st;
  const Scalar root2 = std::sqrt(Scalar(2));
  out.mean(0) += root2 * alpha.real();
  out.mean(1) += root2 * alpha.imag();
  return out;
}

template <typename Scalar>
BasicGaussianState<Scalar> apply_symplectic(const BasicGaussianState<Scalar>& st,
                                            const Eigen::Matrix<Scalar, 2, 2>& m) {
  BasicGaussianState<Scalar> out;
  out.mean = m * st.mean;
  out.cov = m * st.cov * m.transpose();
  out.cov(0, 1) = out.cov(1, 0) = Scalar(0.5) * (out.cov(0, 1) + out.cov(1, 0));
  return out;
}

/// Symplectic matrix of S(r e^{i phi}); its square is 2 sigma of the squeezed vacuum.
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> squeeze_matrix(Scalar r, Scalar phi) {
  using std::cos;
  using std::cosh;
  using std::sin;
  using std::sinh;
  const Scalar c = cosh(r), s = sinh(r);
  Eigen::Matrix<Scalar, 2, 2> m;
  m << c - s * cos(phi), s * sin(phi), s * sin(phi), c + s * cos(phi);
  return m;
}

template <typename Scalar>
BasicGaussianState<Scalar> squeeze(const BasicGaussianState<Scalar>& st, Scalar r, Scalar phi) {
  return apply_symplectic(st, squeeze_matrix(r, phi));
}

/// Phase rotation e^{-i theta n}: a coherent alpha goes to sqrt2 alpha (cos, -sin).
template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> rotation_matrix(Scalar theta) {
  using std::cos;
  using std::sin;
  Eigen::Matrix<Scalar, 2, 2> m;
  m << cos(theta), sin(theta), -sin(theta), cos(theta);
  return m;
}

template <typename Scalar>
BasicGaussianState<Scalar> rotate(const BasicGaussianState<Scalar>& st, Scalar theta) {
  return apply_symplectic(st, rotation_matrix(theta));
}

template <typename Scalar>
Scalar wigner(const BasicGaussianState<Scalar>& st, const Eigen::Matrix<Scalar, 2, 1>& x) {
  using std::exp;
  using std::sqrt;
  const auto g = st.gamma();
  const Scalar d = g.determinant();
  if (!(d > Scalar(0))) throw DomainError("wigner: degenerate state (singular Gamma)");
  const auto dx = (x - st.mean).eval();
  const Scalar quad = dx.dot(g.inverse() * dx);
  return exp(-quad) / (std::numbers::pi_v<Scalar> * sqrt(d));
}

/// Uhlmann fidelity between single-mode Gaussian states.
template <typename Scalar>
Scalar fidelity(const BasicGaussianState<Scalar>& a, const BasicGaussianState<Scalar>& b) {
  using std::exp;
  using std::sqrt;
  const auto g1 = a.gamma(), g2 = b.gamma();
  const auto sum = (g1 + g2).eval();
  const Scalar delta = sum.determinant();
  Scalar lambda = (Scalar(1) - g1.determinant()) * (Scalar(1) - g2.determinant());
  if (lambda < Scalar(0)) lambda = Scalar(0);
  const auto d = (a.mean - b.mean).eval();
  const Scalar quad = d.dot(sum.inverse() * d);
  const Scalar f = Scalar(2) * exp(-quad) / (sqrt(delta + lambda) - sqrt(lambda));
  return f > Scalar(1) ? Scalar(1) : f;
}

template <typename Scalar>
Scalar mean_photon(const BasicGaussianState<Scalar>& st) {
  return st.mean.squaredNorm() / Scalar(2) + (st.cov.trace() - Scalar(1)) / Scalar(2);
}

/// Displaced squeezed probe |alpha, s e^{i psi}> = D(alpha) S(s e^{i psi}) |0>.
struct ProbeSpec {
  std::complex<double> alpha{0.0, 0.0};
  double s = 0.0;
  double psi = 0.0;

  void validate() const;
  GaussianState state() const;
  double mean_photon() const { return std::norm(alpha) + std::sinh(s) * std::sinh(s); }
};

struct QfiEstimate {
  double value = 0.0;
  bool clamped = false;  // 1 - sqrt(F) came out negative and was set to zero
};

using StateFamily = std::function<GaussianState(double)>;

/// 8 (1 - sqrt F[rho(theta), rho(theta + dtheta)]) / dtheta^2.
QfiEstimate qfi_fidelity(const StateFamily& family, double theta, double dtheta = 1e-4);

}  // namespace gaussbayes
