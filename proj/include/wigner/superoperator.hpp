#pragma once

// Linear maps M_n -> M_m stored as an (m^2) x (n^2) action matrix in
// column-major vectorization: vec(A)[a + b n] = A(a, b).

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "wigner/reduction.hpp"

namespace wigner {

inline Vector vec(const Matrix& a) { return Eigen::Map<const Vector>(a.data(), a.size()); }

inline Matrix unvec(const Vector& v, int rows) {
  return Eigen::Map<const Matrix>(v.data(), rows, v.size() / rows);
}

inline Matrix matrix_unit(int n, int a, int b) {
  Matrix e = Matrix::Zero(n, n);
  e(a, b) = 1.0;
  return e;
}

class SuperOperator {
 public:
  SuperOperator(int source_n, int target_n, Matrix action)
      : n_(source_n), m_(target_n), action_(std::move(action)) {
    if (action_.rows() != static_cast<Eigen::Index>(m_) * m_ || action_.cols() != static_cast<Eigen::Index>(n_) * n_) {
      throw Error(ErrorCode::DimensionMismatch, "action matrix must be m^2 x n^2");
    }
  }

  /// Tabulates a linear map by its values on matrix units.
  static SuperOperator from_function(int source_n, int target_n, const std::function<Matrix(const Matrix&)>& f) {
    Matrix action(static_cast<Eigen::Index>(target_n) * target_n, static_cast<Eigen::Index>(source_n) * source_n);
    for (int b = 0; b < source_n; ++b)
      for (int a = 0; a < source_n; ++a) action.col(a + b * source_n) = vec(f(matrix_unit(source_n, a, b)));
    return SuperOperator(source_n, target_n, std::move(action));
  }

  static SuperOperator identity(int n) {
    const Eigen::Index d = static_cast<Eigen::Index>(n) * n;
    return SuperOperator(n, n, Matrix::Identity(d, d));
  }

  static SuperOperator conjugation(const Matrix& u) {
    const auto n = static_cast<int>(u.cols());
    const auto m = static_cast<int>(u.rows());
    return from_function(n, m, [&](const Matrix& a) -> Matrix { return u * a * u.adjoint(); });
  }

  static SuperOperator transpose(int n) {
    return from_function(n, n, [](const Matrix& a) -> Matrix { return a.transpose(); });
  }

  int source_n() const noexcept { return n_; }
  int target_n() const noexcept { return m_; }
  const Matrix& action() const noexcept { return action_; }

  Matrix apply(const Matrix& a) const { return unvec(action_ * vec(a), m_); }
  Matrix operator()(const Matrix& a) const { return apply(a); }

  /// L(E_ab), read directly from the action matrix.
  Matrix unit_image(int a, int b) const { return unvec(action_.col(a + b * n_), m_); }

  bool jordan_certified() const noexcept { return certified_; }
  void set_jordan_certified(bool v) noexcept { certified_ = v; }

 private:
  int n_;
  int m_;
  Matrix action_;
  bool certified_ = false;
};

/// The n^2 Hermitian rank-one basis projections with exact entries: the diagonal
/// e_i projections, then for each i < j the projections onto (e_i + e_j)/sqrt2 and
/// (e_i + i e_j)/sqrt2.
struct HermitianBasisElement {
  int i;
  int j;
  enum class Type { diagonal, real_pair, imag_pair } type;
  Projection projection;
};

inline std::vector<HermitianBasisElement> hermitian_rank_one_basis(int n) {
  std::vector<HermitianBasisElement> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({i, i, HermitianBasisElement::Type::diagonal, Projection::from_matrix(matrix_unit(n, i, i))});
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Matrix x = Matrix::Zero(n, n);
      x(i, i) = x(j, j) = x(i, j) = x(j, i) = 0.5;
      Matrix y = Matrix::Zero(n, n);
      y(i, i) = y(j, j) = 0.5;
      y(i, j) = Complex(0.0, -0.5);
      y(j, i) = Complex(0.0, 0.5);
      out.push_back({i, j, HermitianBasisElement::Type::real_pair, Projection::from_matrix(std::move(x))});
      out.push_back({i, j, HermitianBasisElement::Type::imag_pair, Projection::from_matrix(std::move(y))});
    }
  }
  return out;
}

/// Records the images of the Hermitian rank-one basis and extends linearly:
/// E_ij = ((2X - D_i - D_j) + i(2Y - D_i - D_j)) / 2 and E_ji its adjoint combination.
inline SuperOperator linearize_to_superoperator(const RankOneMap& map, const AlgebraContext& ctx,
                                                const Tolerances& tol = {}) {
  const int n = ctx.n();
  const int m = map.target_n;
  if (map.source_n != n) throw Error(ErrorCode::ContextMismatch, "rank-one map acts on a different algebra");
  const auto basis = hermitian_rank_one_basis(n);
  std::vector<Matrix> diag(n);
  Matrix action(static_cast<Eigen::Index>(m) * m, static_cast<Eigen::Index>(n) * n);
  auto image = [&](const Projection& p) {
    Matrix img = map(p);
    if (img.rows() != m || img.cols() != m) throw Error(ErrorCode::DimensionMismatch, "image has wrong size");
    if (!is_hermitian(img, tol.proj)) {
      throw Error(ErrorCode::NonHermitianInput, "image of a Hermitian basis element is not Hermitian");
    }
    return img;
  };
  std::size_t idx = 0;
  for (; idx < static_cast<std::size_t>(n); ++idx) {
    diag[idx] = image(basis[idx].projection);
    action.col(static_cast<Eigen::Index>(idx) * (n + 1)) = vec(diag[idx]);
  }
  const Complex i_unit(0.0, 1.0);
  for (; idx < basis.size(); idx += 2) {
    const int i = basis[idx].i;
    const int j = basis[idx].j;
    const Matrix sym = 2.0 * image(basis[idx].projection) - diag[i] - diag[j];       // L(E_ij + E_ji)
    const Matrix asym = 2.0 * image(basis[idx + 1].projection) - diag[i] - diag[j];  // L(-iE_ij + iE_ji)
    action.col(i + j * n) = vec(0.5 * (sym + i_unit * asym));
    action.col(j + i * n) = vec(0.5 * (sym - i_unit * asym));
  }
  return SuperOperator(n, m, std::move(action));
}

/// max ||L(H^2) - L(H)^2||_F over random unit-norm Hermitians, together with the
/// adjoint defect max ||L(A*) - L(A)*||_F over random unit-norm A.
inline PropertyReport check_jordan_property(const SuperOperator& l, int samples, SeededRandomSource& rng,
                                            const Tolerances& tol = {}) {
  PropertyReport report{.name = "jordan_property", .tolerance = tol.jordan};
  const int n = l.source_n();
  double adjoint_defect = 0.0;
  for (int s = 0; s < samples; ++s) {
    ++report.trials;
    const Matrix h = random_hermitian(n, rng);
    const Matrix lh = l(h);
    const Matrix residual = l(h * h) - lh * lh;
    const double dev = residual.norm();
    report.observe(dev);
    if (dev > tol.jordan) report.record_failure({"H,residual", h, residual, dev});

    Matrix a = gaussian_matrix(n, n, rng);
    a /= a.norm();
    const Matrix adj_residual = l(a.adjoint()) - l(a).adjoint();
    const double adev = adj_residual.norm();
    adjoint_defect = std::max(adjoint_defect, adev);
    report.observe(adev);
    if (adev > tol.jordan) report.record_failure({"A,adjoint_residual", a, adj_residual, adev});
  }
  report.note = "adjoint defect " + sci(adjoint_defect);
  return report;
}

}  // namespace wigner
