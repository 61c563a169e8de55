#pragma once

// Central decomposition of a Jordan *-homomorphism L: M_n -> M_m into a
// multiplicative part L(.)E1 and an anti-multiplicative part L(.)E2, and
// recovery of the implementing (anti-)unitary when one part vanishes.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wigner/superoperator.hpp"

namespace wigner {

struct JordanDecomposition {
  Projection e1;  // homomorphic summands
  Projection e2;  // anti-homomorphic summands
  double hom_residual = 0.0;
  double antihom_residual = 0.0;
  double centrality_residual = 0.0;
  Matrix block_basis;  // unitary: range(E1) | range(E2) | rest
  int algebra_dim = 0;
  int center_dim = 0;
  std::vector<Projection> summands;  // minimal central projections
  std::vector<bool> summand_homomorphic;
};

namespace detail {

/// Incrementally maintained orthonormal basis of a subspace of C^N.
class SpanBasis {
 public:
  explicit SpanBasis(Eigen::Index ambient) : q_(ambient, ambient) {}

  Eigen::Index dim() const noexcept { return size_; }
  bool full() const noexcept { return size_ == q_.rows(); }
  Vector column(Eigen::Index i) const { return q_.col(i); }

  /// Appends the normalized residual of v when it is not already in the span. The
  /// residual is measured against max(|v|, floor) so that rounding noise in products
  /// that vanish exactly is not promoted to a basis direction.
  bool add(const Vector& v, double tol, double floor = 0.0) {
    if (full()) return false;
    const double scale = std::max(v.norm(), floor);
    if (scale == 0.0) return false;
    Vector r = v;
    for (int pass = 0; pass < 2; ++pass) r -= q_.leftCols(size_) * (q_.leftCols(size_).adjoint() * r);
    const double norm = r.norm();
    if (norm <= tol * scale) return false;
    q_.col(size_++) = r / norm;
    return true;
  }

 private:
  Matrix q_;
  Eigen::Index size_ = 0;
};

inline std::vector<Matrix> unit_images(const SuperOperator& l) {
  std::vector<Matrix> out;
  for (int b = 0; b < l.source_n(); ++b)
    for (int a = 0; a < l.source_n(); ++a) out.push_back(l.unit_image(a, b));
  return out;
}

/// Basis (as matrices) of the algebra generated by `gens`, closed under left and
/// right multiplication by generators.
inline std::vector<Matrix> generated_algebra(const std::vector<Matrix>& gens, int m) {
  constexpr double kTol = 1e-9;
  SpanBasis span(static_cast<Eigen::Index>(m) * m);
  std::vector<Matrix> basis;
  std::vector<std::size_t> work;
  double floor = 0.0;
  for (const auto& g : gens) floor = std::max(floor, g.norm());
  auto push = [&](const Matrix& x) {
    if (span.add(vec(x), kTol, floor)) {
      basis.push_back(unvec(span.column(span.dim() - 1), m));
      work.push_back(basis.size() - 1);
    }
  };
  for (const auto& g : gens) push(g);
  std::size_t cursor = 0;
  while (cursor < work.size() && !span.full()) {
    const Matrix b = basis[work[cursor++]];
    for (const auto& g : gens) {
      push(g * b);
      push(b * g);
      if (span.full()) break;
    }
  }
  if (span.full()) {
    // Whole matrix algebra: the standard basis is cleaner downstream.
    basis.clear();
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) basis.push_back(matrix_unit(m, i, j));
  }
  return basis;
}

/// Central elements of span(basis) commuting with every generator.
inline std::vector<Matrix> center_of(const std::vector<Matrix>& basis, const std::vector<Matrix>& gens, int m) {
  const auto d = static_cast<Eigen::Index>(basis.size());
  const Eigen::Index block = static_cast<Eigen::Index>(m) * m;
  Matrix k(block * static_cast<Eigen::Index>(gens.size()), d);
  for (Eigen::Index l = 0; l < d; ++l) {
    for (std::size_t g = 0; g < gens.size(); ++g) {
      k.col(l).segment(static_cast<Eigen::Index>(g) * block, block) =
          vec(basis[l] * gens[g] - gens[g] * basis[l]);
    }
  }
  Eigen::BDCSVD<Matrix> svd(k, Eigen::ComputeFullV);
  const RealVector s = svd.singularValues();
  const double top = std::max(s.size() > 0 ? s(0) : 0.0, 1.0);
  std::vector<Matrix> center;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double rel = s(i) / top;
    if (rel > 1e-7 && rel < 1e-4) {
      throw Error(ErrorCode::CenterComputationFailure, "commutant solve is ill-conditioned, singular value " + sci(s(i)));
    }
    if (rel <= 1e-7) {
      Matrix z = Matrix::Zero(m, m);
      for (Eigen::Index l = 0; l < d; ++l) z += svd.matrixV()(l, i) * basis[l];
      center.push_back(z);
    }
  }
  return center;
}

/// Minimal central projections from the spectral projections of a random Hermitian
/// central element, cut down by the unit of the algebra.
inline std::vector<Matrix> minimal_central_projections(const std::vector<Matrix>& center, const Matrix& unit,
                                                       SeededRandomSource& rng) {
  const auto m = static_cast<int>(unit.rows());
  Matrix h = Matrix::Zero(m, m);
  const Complex i_unit(0.0, 1.0);
  for (const auto& z : center) {
    h += rng.normal() * 0.5 * (z + z.adjoint());
    h += rng.normal() * (-0.5 * i_unit) * (z - z.adjoint());
  }
  h = 0.5 * (h + h.adjoint());
  const SpectralDecomposition d = hermitian_eig(h, 1e-6);
  const double spread = std::max(1.0, d.eigenvalues.cwiseAbs().maxCoeff());
  std::vector<Matrix> out;
  Eigen::Index start = 0;
  while (start < d.eigenvalues.size()) {
    Eigen::Index end = start + 1;
    while (end < d.eigenvalues.size() && d.eigenvalues(end - 1) - d.eigenvalues(end) <= 1e-6 * spread) ++end;
    const Matrix cols = d.eigenvectors.middleCols(start, end - start);
    Matrix z = cols * cols.adjoint() * unit;
    z = 0.5 * (z + z.adjoint());
    if (z.trace().real() > 0.5) out.push_back(z);
    start = end;
  }
  return out;
}

struct SplitResiduals {
  double hom = 0.0;
  double antihom = 0.0;
};

/// max over matrix-unit pairs of ||(L(AB) - L(A)L(B))z|| and ||(L(AB) - L(B)L(A))z||,
/// relative to ||z||.
inline SplitResiduals split_residuals(const std::vector<Matrix>& units, int n, const Matrix& z) {
  SplitResiduals r;
  const double zn = std::max(z.norm(), 1e-300);
  const auto m = z.rows();
  const Matrix zero = Matrix::Zero(m, m);
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      const Matrix& la = units[a + b * n];
      for (int d = 0; d < n; ++d) {
        for (int c = 0; c < n; ++c) {
          const Matrix& lb = units[c + d * n];
          // E_ab E_cd = delta_bc E_ad.
          const Matrix& lab = b == c ? units[a + d * n] : zero;
          r.hom = std::max(r.hom, ((lab - la * lb) * z).norm() / zn);
          r.antihom = std::max(r.antihom, ((lab - lb * la) * z).norm() / zn);
        }
      }
    }
  }
  return r;
}

inline bool same_projection_sets(const std::vector<Matrix>& a, const std::vector<Matrix>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    bool found = false;
    for (const auto& y : b) found = found || (x - y).norm() <= tol;
    if (!found) return false;
  }
  return true;
}

}  // namespace detail

/// Finds the central projections of the algebra generated by the image of L and
/// sorts the minimal ones into homomorphic (E1) and anti-homomorphic (E2) summands.
inline JordanDecomposition jordan_decompose(const SuperOperator& l, const Tolerances& tol = {},
                                            std::uint64_t seed = 0x6a6f7264616eULL) {
  const int n = l.source_n();
  const int m = l.target_n();
  const std::vector<Matrix> units = detail::unit_images(l);
  const std::vector<Matrix> algebra = detail::generated_algebra(units, m);
  if (algebra.empty()) throw Error(ErrorCode::CenterComputationFailure, "image algebra is zero");

  Matrix gram = Matrix::Zero(m, m);
  for (const auto& b : algebra) gram += b * b.adjoint();
  const Matrix unit = range_projection_raw(0.5 * (gram + gram.adjoint())).projector;

  const std::vector<Matrix> center = detail::center_of(algebra, units, m);
  if (center.empty()) throw Error(ErrorCode::CenterComputationFailure, "empty center");

  SeededRandomSource rng(seed);
  const auto draw1 = detail::minimal_central_projections(center, unit, rng);
  const auto draw2 = detail::minimal_central_projections(center, unit, rng);
  if (!detail::same_projection_sets(draw1, draw2, 1e-6)) {
    throw Error(ErrorCode::CenterComputationFailure, "independent central draws disagree");
  }

  JordanDecomposition out{.e1 = Projection::zero(m), .e2 = Projection::zero(m)};
  out.algebra_dim = static_cast<int>(algebra.size());
  out.center_dim = static_cast<int>(center.size());
  Matrix e1 = Matrix::Zero(m, m);
  Matrix e2 = Matrix::Zero(m, m);
  for (const auto& z : draw1) {
    const auto r = detail::split_residuals(units, n, z);
    if (std::min(r.hom, r.antihom) > tol.split) {
      throw Error(ErrorCode::UnclassifiableSummand, "central summand of rank " +
                                                        std::to_string(std::lround(z.trace().real())) +
                                                        " has residuals " + sci(r.hom) + " / " + sci(r.antihom));
    }
    const bool hom = r.hom <= r.antihom;
    (hom ? e1 : e2) += z;
    out.summands.push_back(Projection::from_matrix(z, 1e-6));
    out.summand_homomorphic.push_back(hom);
  }
  out.e1 = Projection::from_matrix(e1, 1e-6);
  out.e2 = Projection::from_matrix(e2, 1e-6);
  if (out.e1.rank() > 0) out.hom_residual = detail::split_residuals(units, n, e1).hom;
  if (out.e2.rank() > 0) out.antihom_residual = detail::split_residuals(units, n, e2).antihom;
  for (const auto& g : units) {
    out.centrality_residual = std::max(out.centrality_residual, commutator_norm(e1, g));
    out.centrality_residual = std::max(out.centrality_residual, commutator_norm(e2, g));
  }
  const Matrix b1 = out.e1.range_basis();
  const Matrix b2 = out.e2.range_basis();
  const Matrix rest = spectral_subspace(hermitian_eig(identity(m) - e1 - e2, 1e-6), 0.5);
  out.block_basis.resize(m, b1.cols() + b2.cols() + rest.cols());
  out.block_basis << b1, b2, rest;
  return out;
}

enum class Verdict { unitary, antiunitary, mixed, not_transition_preserving, reduction_failed };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::unitary: return "unitary";
    case Verdict::antiunitary: return "antiunitary";
    case Verdict::mixed: return "mixed";
    case Verdict::not_transition_preserving: return "not_transition_preserving";
    case Verdict::reduction_failed: return "reduction_failed";
  }
  return "unknown";
}

struct ReconstructionResult {
  Verdict verdict = Verdict::reduction_failed;
  std::optional<Matrix> implementer;
  double max_conjugation_residual = 0.0;
  std::vector<PropertyReport> diagnostics;
  bool excluded_trace_value = false;
  bool complement_reduced = false;
  std::optional<JordanDecomposition> decomposition;
};

/// Reference against which a reconstructed implementer is scored: random rank-`rank`
/// projections P, compared as ||U P U* - reference(P)||_F (or U conj(P) U*).
struct ResidualProbe {
  std::function<Matrix(const Projection&)> reference;
  int rank = 1;
  int count = 100;
  std::uint64_t seed = 0x70726f6265ULL;
};

/// Assembles U = [u_1 .. u_n] from an anchor u_a in the range of L'(E_aa) via
/// u_j = L'(E_ja) u_a, where L' = L (homomorphic) or L o transpose (anti-homomorphic).
inline ReconstructionResult reconstruct_implementer(const SuperOperator& l, const JordanDecomposition& d,
                                                    std::optional<ResidualProbe> probe = std::nullopt) {
  ReconstructionResult out;
  out.decomposition = d;
  if (d.e1.rank() > 0 && d.e2.rank() > 0) {
    out.verdict = Verdict::mixed;
    return out;
  }
  if (d.e1.rank() == 0 && d.e2.rank() == 0) {
    throw Error(ErrorCode::DegenerateAnchor, "both central parts vanish");
  }
  const bool anti = d.e1.rank() == 0;
  const int n = l.source_n();
  const int m = l.target_n();
  auto unit = [&](int a, int b) { return anti ? l.unit_image(b, a) : l.unit_image(a, b); };

  int anchor = -1;
  Vector u_anchor;
  for (int a = 0; a < n && anchor < 0; ++a) {
    const Matrix laa = unit(a, a);
    if (laa.norm() < 0.5) continue;
    const SpectralDecomposition sd = hermitian_eig(0.5 * (laa + laa.adjoint()), 1e-6);
    anchor = a;
    u_anchor = sd.eigenvectors.col(0);
  }
  if (anchor < 0) throw Error(ErrorCode::DegenerateAnchor, "L(E_aa) vanishes for every a");

  Matrix u(m, n);
  for (int j = 0; j < n; ++j) {
    Vector col = unit(j, anchor) * u_anchor;
    const double norm = col.norm();
    if (norm > 0.0) col /= norm;
    u.col(j) = col;
  }
  const double defect = (u.adjoint() * u - identity(n)).norm();
  if (defect > 1e-6) throw Error(ErrorCode::NonIsometricAssembly, "||U*U - I||_F = " + sci(defect));

  out.verdict = anti ? Verdict::antiunitary : Verdict::unitary;
  out.implementer = u;

  ResidualProbe p = probe.value_or(ResidualProbe{[&l](const Projection& x) { return l(x.matrix()); }, 1});
  SeededRandomSource rng(p.seed);
  for (int t = 0; t < p.count; ++t) {
    const int rank = p.rank > 0 ? p.rank : rng.uniform_int(1, n - 1);
    const Projection x = sample_projection(n, rank, rng);
    const Matrix action = anti ? Matrix(u * conj(x.matrix()) * u.adjoint()) : Matrix(u * x.matrix() * u.adjoint());
    out.max_conjugation_residual = std::max(out.max_conjugation_residual, (action - p.reference(x)).norm());
  }
  return out;
}

}  // namespace wigner
