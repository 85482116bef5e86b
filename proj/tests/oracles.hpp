#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the code paths it is used to check.

#include "ptlab/types.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

namespace ptlab::oracle {

inline ComplexMatrix bell_projector() {
  ComplexMatrix p = ComplexMatrix::Zero(4, 4);
  p(0, 0) = p(0, 3) = p(3, 0) = p(3, 3) = 0.5;
  return p;
}

/// (1 - p) I/4 + p |phi+><phi+|
inline ComplexMatrix werner(double p) {
  return (1.0 - p) * ComplexMatrix::Identity(4, 4) / 4.0 + p * bell_projector();
}

/// The partial transpose of the Werner state has eigenvalues (1 + p)/4 (x3)
/// and (1 - 3p)/4, so the smallest one is (1 - 3p)/4.
inline double werner_pt_lambda_min(double p) { return (1.0 - 3.0 * p) / 4.0; }

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexVector qubit(double theta, double phi) {
  ComplexVector v(2);
  v << std::cos(theta / 2), std::polar(1.0, phi) * std::sin(theta / 2);
  return v;
}

/// Largest eigenvalue of a 2x2 Hermitian matrix in closed form.
inline double top_eigenvalue_2x2(const ComplexMatrix& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  return 0.5 * (a + d + std::sqrt((a - d) * (a - d) + 4.0 * std::norm(m(0, 1))));
}

/// max over product pure states a (x) b of <a b| u |a b> on C^2 (x) C^2.
/// The inner maximum over b is the closed-form top eigenvalue; the outer one
/// is a grid search over the Bloch sphere of a, refined by repeated zooming.
inline double product_max_2x2(const ComplexMatrix& u) {
  auto value_at = [&u](double theta, double phi) {
    const ComplexVector a = qubit(theta, phi);
    ComplexMatrix mb = ComplexMatrix::Zero(2, 2);
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) mb(k, l) += std::conj(a(i)) * u(2 * i + k, 2 * j + l) * a(j);
    return top_eigenvalue_2x2(mb);
  };
  const double pi = std::numbers::pi;
  double best = -1e300, bt = 0.0, bp = 0.0;
  const int coarse = 200;
  for (int i = 0; i <= coarse; ++i)
    for (int j = 0; j < 2 * coarse; ++j) {
      const double t = pi * i / coarse;
      const double p = pi * j / coarse;
      const double v = value_at(t, p);
      if (v > best) best = v, bt = t, bp = p;
    }
  double span = pi / coarse;
  for (int level = 0; level < 12; ++level) {
    const int fine = 20;
    double ct = bt, cp = bp;
    for (int i = -fine; i <= fine; ++i)
      for (int j = -fine; j <= fine; ++j) {
        const double t = std::clamp(ct + span * i / fine, 0.0, pi);
        const double p = cp + span * j / fine;
        const double v = value_at(t, p);
        if (v > best) best = v, bt = t, bp = p;
      }
    span /= 5.0;
  }
  return best;
}

/// CDF and mean of lambda_min of a 2x2 induced state with ancilla s in closed
/// form. With t = (1 - 2 lambda)^2 the density becomes Beta(3/2, s - 1) in t.
struct QubitOracle {
  explicit QubitOracle(int s) : b(s - 1.0) {}
  double cdf(double x) const {
    if (x <= 0) return 0.0;
    if (x >= 0.5) return 1.0;
    return boost::math::ibetac(1.5, b, (1.0 - 2.0 * x) * (1.0 - 2.0 * x));
  }
  // lambda = (1 - sqrt t) / 2 and E sqrt(t) = B(2, b) / B(3/2, b)
  double mean() const { return 0.5 * (1.0 - std::beta(2.0, b) / std::beta(1.5, b)); }

  double b;
};

/// Integral of f over [lo, hi] after x = c + r cos(theta), composite 5-point
/// Gauss-Legendre in theta. The nodes are interior, so integrable 1/sqrt edge
/// singularities are handled.
template <class F>
double integrate_cosine_substitution(F&& f, double lo, double hi, int panels = 20000) {
  static constexpr double kNode[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                      0.9061798459386640};
  static constexpr double kWeight[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                        0.4786286704993665, 0.2369268850561891};
  const double c = 0.5 * (lo + hi);
  const double r = 0.5 * (hi - lo);
  const double h = std::numbers::pi / panels;
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double mid = (i + 0.5) * h;
    for (int q = 0; q < 5; ++q) {
      const double t = mid + 0.5 * h * kNode[q];
      sum += kWeight[q] * f(c + r * std::cos(t)) * r * std::sin(t);
    }
  }
  return sum * 0.5 * h;
}

/// Haar-random unitary via QR of a complex Gaussian matrix with the phase fix.
inline ComplexMatrix haar_unitary(int n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) z(i, j) = Complex(normal(gen), normal(gen));
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) q.col(j) *= std::polar(1.0, std::arg(r(j, j)));
  return q;
}

/// Random density matrix from an independent generator (std::mt19937_64).
inline ComplexMatrix random_state(int n, int rank, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix g(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) g(i, j) = Complex(normal(gen), normal(gen));
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

/// Random Hermitian (not necessarily PSD) matrix.
inline ComplexMatrix random_hermitian(int n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  ComplexMatrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = Complex(normal(gen), normal(gen));
  return 0.5 * (g + g.adjoint());
}

}  // namespace ptlab::oracle
