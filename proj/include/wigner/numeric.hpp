#pragma once

// Dense complex-matrix primitives shared by the rest of the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "wigner/error.hpp"

namespace wigner {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Tolerance ladder. All values are relative Frobenius-norm thresholds.
struct Tolerances {
  double herm = 1e-10;
  double lin = 1e-10;
  double proj = 1e-9;
  double comm = 1e-9;
  double verify = 1e-9;
  double jordan = 1e-8;
  double split = 1e-7;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

/// The ambient matrix algebra M_n with its unnormalized trace, tau(I) = n.
class AlgebraContext {
 public:
  explicit AlgebraContext(int n) : n_(n) {
    if (n < 2) {
      throw Error(ErrorCode::InvalidContext, "matrix dimension must be >= 2, got " + std::to_string(n));
    }
  }

  int n() const noexcept { return n_; }
  double trace_of_identity() const noexcept { return static_cast<double>(n_); }

  friend bool operator==(const AlgebraContext&, const AlgebraContext&) = default;

 private:
  int n_;
};

/// Explicitly passed, seedable random source. Copying forks the stream.
class SeededRandomSource {
 public:
  explicit SeededRandomSource(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

  Complex complex_normal() {
    // Unit-variance complex Gaussian.
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

  std::uint64_t next_seed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline double frobenius(const Matrix& a) { return a.norm(); }

/// Short scientific rendering for messages and report notes.
inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

inline double hermiticity_defect(const Matrix& a) { return (a - a.adjoint()).norm(); }

inline bool is_hermitian(const Matrix& a, double tol) {
  return a.rows() == a.cols() && hermiticity_defect(a) <= tol * std::max(1.0, a.norm());
}

/// Re tr(AB) without forming the product.
inline double trace_pairing(const Matrix& a, const Matrix& b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

/// Entrywise conjugate in the standard basis.
inline Matrix conj(const Matrix& a) { return a.conjugate(); }

inline Matrix identity(int n) { return Matrix::Identity(n, n); }

struct SpectralDecomposition {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // columns, orthonormal
};

inline SpectralDecomposition hermitian_eig(const Matrix& h, double herm_tol = default_tolerances().herm) {
  if (h.rows() != h.cols()) {
    throw Error(ErrorCode::NonHermitianInput, "matrix is not square");
  }
  const double defect = hermiticity_defect(h);
  if (defect > herm_tol * std::max(1.0, h.norm())) {
    throw Error(ErrorCode::NonHermitianInput, "||H - H*||_F = " + sci(defect));
  }
  const Matrix sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  // Eigen sorts ascending.
  SpectralDecomposition out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

/// Orthonormal basis (columns) of the span of eigenvectors whose eigenvalue exceeds `threshold`.
inline Matrix spectral_subspace(const SpectralDecomposition& d, double threshold) {
  Eigen::Index count = 0;
  while (count < d.eigenvalues.size() && d.eigenvalues(count) > threshold) ++count;
  return d.eigenvectors.leftCols(count);
}

inline Matrix projector_onto_orthonormal(const Matrix& basis) { return basis * basis.adjoint(); }

/// Default range threshold: relative 1e-8 of the top eigenvalue, floored at 1e-12.
inline double default_range_tol(const SpectralDecomposition& d) {
  const double top = d.eigenvalues.size() > 0 ? std::max(0.0, d.eigenvalues(0)) : 0.0;
  return std::max(1e-8 * top, 1e-12);
}

/// Orthogonal projection onto the range of a positive semidefinite matrix,
/// returned together with its rank. See Projection for the validated wrapper.
struct RangeResult {
  Matrix projector;
  int rank;
};

inline RangeResult range_projection_raw(const Matrix& a, std::optional<double> tol = std::nullopt) {
  const SpectralDecomposition d = hermitian_eig(a);
  const double t = tol.value_or(default_range_tol(d));
  if (d.eigenvalues.size() > 0 && d.eigenvalues(d.eigenvalues.size() - 1) < -t) {
    throw Error(ErrorCode::NegativeSpectrum,
                "min eigenvalue " + sci(d.eigenvalues(d.eigenvalues.size() - 1)));
  }
  const Matrix basis = spectral_subspace(d, t);
  return {projector_onto_orthonormal(basis), static_cast<int>(basis.cols())};
}

inline Matrix gaussian_matrix(int rows, int cols, SeededRandomSource& rng) {
  Matrix g(rows, cols);
  // Fill column-major so the draw order is fixed.
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  return g;
}

/// Haar-distributed unitary of size n (n = 1 allowed): QR of a Ginibre matrix with
/// the phases of diag(R) absorbed into Q.
inline Matrix haar_unitary(int n, SeededRandomSource& rng) {
  const Matrix g = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= (mag > 0.0 ? d / mag : Complex(1.0, 0.0));
  }
  return q;
}

inline Matrix haar_unitary(const AlgebraContext& ctx, SeededRandomSource& rng) {
  return haar_unitary(ctx.n(), rng);
}

/// n_to x n_from matrix with orthonormal columns.
inline Matrix random_isometry(int n_from, int n_to, SeededRandomSource& rng) {
  if (n_from < 0 || n_to < n_from) {
    throw Error(ErrorCode::DimensionOrder,
                "isometry needs n_to >= n_from, got " + std::to_string(n_from) + " -> " + std::to_string(n_to));
  }
  return haar_unitary(n_to, rng).leftCols(n_from);
}

/// Random Hermitian matrix with unit Frobenius norm.
inline Matrix random_hermitian(int n, SeededRandomSource& rng) {
  const Matrix g = gaussian_matrix(n, n, rng);
  Matrix h = 0.5 * (g + g.adjoint());
  return h / h.norm();
}

/// exp(i t H) for Hermitian H.
inline Matrix unitary_exponential(const Matrix& h, double t) {
  const SpectralDecomposition d = hermitian_eig(h);
  Vector phases(d.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(1.0, t * d.eigenvalues(i));
  return d.eigenvectors * phases.asDiagonal() * d.eigenvectors.adjoint();
}

/// Gram-Schmidt completion: appends columns of `candidates` (in index order) that are
/// independent of `basis` until `count` new columns have been added.
inline Matrix complete_orthonormal(const Matrix& basis, const Matrix& candidates, Eigen::Index count,
                                   double tol = 1e-8) {
  Matrix out(candidates.rows(), basis.cols() + count);
  out.leftCols(basis.cols()) = basis;
  Eigen::Index filled = basis.cols();
  for (Eigen::Index j = 0; j < candidates.cols() && filled < basis.cols() + count; ++j) {
    Vector v = candidates.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      v -= out.leftCols(filled) * (out.leftCols(filled).adjoint() * v);
    }
    const double norm = v.norm();
    if (norm > tol) out.col(filled++) = v / norm;
  }
  if (filled != basis.cols() + count) {
    throw Error(ErrorCode::DimensionOrder, "not enough independent candidates for completion");
  }
  return out;
}

}  // namespace wigner
