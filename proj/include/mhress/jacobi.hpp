#pragma once

// Dense symmetric eigensolver (cyclic Jacobi) and a power-iteration estimate of
// the largest singular value. Both are deterministic: fixed sweep order, fixed
// start vector.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "mhress/errors.hpp"

namespace mhress {

template <typename Scalar>
class JacobiEigenSolver {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Options {
    Scalar tolerance = Scalar(1e-11);  // off-diagonal Frobenius norm relative to ||A||_F
    int max_sweeps = 100;
    bool compute_vectors = false;
  };

  JacobiEigenSolver() = default;

  template <typename Derived>
  explicit JacobiEigenSolver(const Eigen::MatrixBase<Derived>& a, const Options& opts = Options()) {
    compute(a, opts);
  }

  /// Eigenvalues are sorted descending; eigenvector columns follow the same order.
  template <typename Derived>
  JacobiEigenSolver& compute(const Eigen::MatrixBase<Derived>& input, const Options& opts = Options()) {
    const Eigen::Index n = input.rows();
    if (n != input.cols()) throw NumericalError("Jacobi eigensolver needs a square matrix");
    Matrix a = input;
    Matrix v;
    if (opts.compute_vectors) v = Matrix::Identity(n, n);

    const Scalar norm = a.norm();
    const Scalar target = opts.tolerance * norm;
    sweeps_ = 0;
    auto off_norm = [&] {
      Scalar sum = 0;
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < j; ++i) sum += a(i, j) * a(i, j);
      return std::sqrt(Scalar(2) * sum);
    };

    while (off_norm() > target) {
      if (sweeps_ >= opts.max_sweeps) {
        throw NumericalError("Jacobi eigensolver exceeded the sweep cap");
      }
      ++sweeps_;
      for (Eigen::Index p = 0; p < n - 1; ++p) {
        for (Eigen::Index q = p + 1; q < n; ++q) {
          const Scalar apq = a(p, q);
          if (apq == Scalar(0)) continue;
          const Scalar app = a(p, p);
          const Scalar aqq = a(q, q);
          // Skip entries below rounding relative to the diagonal.
          if (std::abs(apq) < std::numeric_limits<Scalar>::epsilon() * Scalar(1e-3) *
                                  (std::abs(app) + std::abs(aqq))) {
            a(p, q) = a(q, p) = Scalar(0);
            continue;
          }
          const Scalar theta = (aqq - app) / (Scalar(2) * apq);
          const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) /
                           (std::abs(theta) + std::sqrt(theta * theta + Scalar(1)));
          const Scalar c = Scalar(1) / std::sqrt(t * t + Scalar(1));
          const Scalar s = t * c;
          // A <- J^T A J on columns, then mirror into rows (A stays symmetric).
          for (Eigen::Index k = 0; k < n; ++k) {
            const Scalar akp = a(k, p);
            const Scalar akq = a(k, q);
            a(k, p) = c * akp - s * akq;
            a(k, q) = s * akp + c * akq;
          }
          a(p, p) = app - t * apq;
          a(q, q) = aqq + t * apq;
          a(p, q) = Scalar(0);
          a(q, p) = Scalar(0);
          for (Eigen::Index k = 0; k < n; ++k) {
            if (k == p || k == q) continue;
            a(p, k) = a(k, p);
            a(q, k) = a(k, q);
          }
          if (opts.compute_vectors) {
            for (Eigen::Index k = 0; k < n; ++k) {
              const Scalar vkp = v(k, p);
              const Scalar vkq = v(k, q);
              v(k, p) = c * vkp - s * vkq;
              v(k, q) = s * vkp + c * vkq;
            }
          }
        }
      }
    }

    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
    eigenvalues_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) eigenvalues_(i) = a(order[i], order[i]);
    if (opts.compute_vectors) {
      eigenvectors_.resize(n, n);
      for (Eigen::Index i = 0; i < n; ++i) eigenvectors_.col(i) = v.col(order[i]);
    } else {
      eigenvectors_.resize(0, 0);
    }
    return *this;
  }

  const Vector& eigenvalues() const { return eigenvalues_; }
  const Matrix& eigenvectors() const { return eigenvectors_; }
  int sweeps() const { return sweeps_; }

 private:
  Vector eigenvalues_;
  Matrix eigenvectors_;
  int sweeps_ = 0;
};

struct SingularValueEstimate {
  double value = 0.0;
  double last_change = 0.0;  // |sigma_k - sigma_{k-1}| at the final iteration
  int iterations = 0;
};

/// Largest singular value of B by power iteration on B^T B from a fixed
/// pseudo-random start vector. Converges from below.
template <typename Derived>
SingularValueEstimate largest_singular_value(const Eigen::MatrixBase<Derived>& b, int iterations = 200,
                                             std::uint64_t seed = 0x5eed5eedULL) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  std::mt19937_64 gen(seed);
  Vector x(b.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    x(i) = Scalar(0.5) + Scalar(gen() >> 11) * Scalar(1.0 / 9007199254740992.0);
  }
  x.normalize();
  SingularValueEstimate out;
  double prev = 0.0;
  for (int k = 0; k < iterations; ++k) {
    const Vector y = b * x;
    const Vector z = b.transpose() * y;
    const Scalar zn = z.norm();
    out.iterations = k + 1;
    if (!(zn > Scalar(0)) || !std::isfinite(static_cast<double>(zn))) {
      if (k == 0 && zn == Scalar(0)) return out;  // B x = 0 from the start: treat as zero operator
      throw NumericalError("power iteration stagnated");
    }
    out.value = std::sqrt(static_cast<double>(zn));
    out.last_change = std::abs(out.value - prev);
    prev = out.value;
    x = z / zn;
  }
  // Rayleigh quotient of the final iterate: ||B x|| with ||x|| = 1.
  out.value = static_cast<double>((b * x).norm());
  return out;
}

}  // namespace mhress
