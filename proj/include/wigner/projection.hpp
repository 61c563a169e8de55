#pragma once

// The projection lattice of M_n: Grassmann spaces of fixed rank, transition
// probability, join/meet/order and the samplers and witness constructors
// used by the verifiers.

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "wigner/numeric.hpp"

namespace wigner {

/// Hermitian idempotent of validated rank.
class Projection {
 public:
  /// Validates `m` against the projection invariants at tolerance `tol`.
  static Projection from_matrix(Matrix m, double tol = default_tolerances().proj) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::NotAProjection, "matrix is not square");
    const double scale = std::max(1.0, m.norm());
    const double herm = hermiticity_defect(m);
    if (herm > tol * scale) {
      throw Error(ErrorCode::NotAProjection, "hermiticity defect " + sci(herm));
    }
    const double idem = (m * m - m).norm();
    if (idem > tol * scale) {
      throw Error(ErrorCode::NotAProjection, "idempotency defect " + sci(idem));
    }
    const double tr = m.trace().real();
    const int rank = static_cast<int>(std::lround(tr));
    if (std::abs(tr - rank) > tol * scale) {
      throw Error(ErrorCode::NotAProjection, "non-integral trace " + sci(tr));
    }
    return Projection(std::move(m), rank);
  }

  /// Projection onto the column span of `columns` (need not be orthonormal).
  static Projection onto(const Matrix& columns) {
    if (columns.cols() == 0) return zero(static_cast<int>(columns.rows()));
    Eigen::ColPivHouseholderQR<Matrix> qr(columns);
    qr.setThreshold(1e-10);
    const auto r = qr.rank();
    const Matrix q = qr.householderQ() * Matrix::Identity(columns.rows(), r);
    return Projection(projector_onto_orthonormal(q), static_cast<int>(r));
  }

  /// Projection onto an orthonormal family; no re-orthonormalization.
  static Projection onto_orthonormal(const Matrix& basis) {
    return Projection(projector_onto_orthonormal(basis), static_cast<int>(basis.cols()));
  }

  static Projection zero(int n) { return Projection(Matrix::Zero(n, n), 0); }
  static Projection identity(int n) { return Projection(Matrix::Identity(n, n), n); }

  /// Rank-one projection onto the unit vector v / |v|.
  static Projection rank_one(const Vector& v) {
    const Vector u = v / v.norm();
    return Projection(u * u.adjoint(), 1);
  }

  /// Diagonal projection with ones at the listed indices.
  static Projection diagonal(int n, const std::vector<int>& indices) {
    Matrix m = Matrix::Zero(n, n);
    for (int i : indices) m(i, i) = 1.0;
    return Projection(std::move(m), static_cast<int>(indices.size()));
  }

  const Matrix& matrix() const noexcept { return matrix_; }
  int rank() const noexcept { return rank_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }

  Projection complement() const { return Projection(Matrix::Identity(dim(), dim()) - matrix_, dim() - rank_); }

  /// Orthonormal basis of the range.
  Matrix range_basis() const {
    if (rank_ == 0) return Matrix(dim(), 0);
    return spectral_subspace(hermitian_eig(matrix_, 1e-6), 0.5);
  }

  Projection conjugated_by(const Matrix& u) const { return Projection(u * matrix_ * u.adjoint(), rank_); }

 private:
  Projection(Matrix m, int rank) : matrix_(std::move(m)), rank_(rank) {}

  Matrix matrix_;
  int rank_;
};

/// Index of the Grassmann space of rank-k projections in M_n, 0 < k < n.
class GrassmannIndex {
 public:
  GrassmannIndex(AlgebraContext ctx, int k) : ctx_(ctx), k_(k) {
    if (k <= 0 || k >= ctx.n()) {
      throw Error(ErrorCode::InvalidContext,
                  "rank must satisfy 0 < k < n, got k=" + std::to_string(k) + " n=" + std::to_string(ctx.n()));
    }
  }

  const AlgebraContext& ctx() const noexcept { return ctx_; }
  int n() const noexcept { return ctx_.n(); }
  int k() const noexcept { return k_; }
  bool balanced() const noexcept { return 2 * k_ == ctx_.n(); }

 private:
  AlgebraContext ctx_;
  int k_;
};

namespace detail {
inline void require_same_dim(const Projection& p, const Projection& q) {
  if (p.dim() != q.dim()) {
    throw Error(ErrorCode::ContextMismatch,
                "dimensions " + std::to_string(p.dim()) + " and " + std::to_string(q.dim()));
  }
}
}  // namespace detail

inline Projection range_projection(const Matrix& a, std::optional<double> tol = std::nullopt) {
  RangeResult r = range_projection_raw(a, tol);
  return Projection::from_matrix(std::move(r.projector), 1e-6);
}

/// tau(PQ) = Re tr(PQ).
inline double transition_probability(const Projection& p, const Projection& q) {
  detail::require_same_dim(p, q);
  return trace_pairing(p.matrix(), q.matrix());
}

inline double commutator_norm(const Matrix& a, const Matrix& b) { return (a * b - b * a).norm(); }

inline bool commutes(const Projection& p, const Projection& q, double tol = default_tolerances().comm) {
  detail::require_same_dim(p, q);
  return commutator_norm(p.matrix(), q.matrix()) <= tol;
}

/// P <= Q iff QP = P.
inline bool leq(const Projection& p, const Projection& q, double tol = default_tolerances().proj) {
  detail::require_same_dim(p, q);
  return (q.matrix() * p.matrix() - p.matrix()).norm() <= tol;
}

/// P ⊥ Q iff tau(PQ) vanishes (PQP >= 0 makes this equivalent to PQ = 0).
inline bool orthogonal(const Projection& p, const Projection& q, double tol = default_tolerances().proj) {
  return transition_probability(p, q) <= tol;
}

inline Projection join(const Projection& p, const Projection& q) {
  detail::require_same_dim(p, q);
  if (p.rank() == 0) return q;
  if (q.rank() == 0) return p;
  return range_projection(p.matrix() + q.matrix());
}

inline Projection meet(const Projection& p, const Projection& q) {
  detail::require_same_dim(p, q);
  return join(p.complement(), q.complement()).complement();
}

inline Projection sample_projection(int n, int k, SeededRandomSource& rng) {
  const Matrix u = haar_unitary(n, rng);
  return Projection::onto_orthonormal(u.leftCols(k));
}

inline Projection sample_projection(const GrassmannIndex& g, SeededRandomSource& rng) {
  return sample_projection(g.n(), g.k(), rng);
}

/// Random rank-k subprojection of `p`.
inline Projection sample_subprojection(const Projection& p, int k, SeededRandomSource& rng) {
  if (k > p.rank()) throw Error(ErrorCode::RankMismatch, "subprojection rank exceeds parent rank");
  const Matrix w = p.range_basis();
  const Matrix rot = haar_unitary(p.rank(), rng);
  return Projection::onto_orthonormal(w * rot.leftCols(k));
}

/// Commuting pair of rank-k projections with tr(PQ) = overlap, built diagonally and
/// rotated into a Haar frame.
inline std::pair<Projection, Projection> sample_commuting_pair(const GrassmannIndex& g, int overlap,
                                                               SeededRandomSource& rng) {
  const int n = g.n();
  const int k = g.k();
  if (overlap < std::max(0, 2 * k - n) || overlap > k) {
    throw Error(ErrorCode::InfeasibleOverlap,
                "overlap " + std::to_string(overlap) + " outside [" + std::to_string(std::max(0, 2 * k - n)) +
                    ", " + std::to_string(k) + "]");
  }
  std::vector<int> pi, qi;
  for (int i = 0; i < k; ++i) pi.push_back(i);
  for (int i = k - overlap; i < 2 * k - overlap; ++i) qi.push_back(i);
  const Matrix u = haar_unitary(n, rng);
  return {Projection::diagonal(n, pi).conjugated_by(u), Projection::diagonal(n, qi).conjugated_by(u)};
}

/// Returns P' of rank k with P'P = 0 and Q <= P + P'. Uses (P v Q) - P, padded with
/// the lowest-index completion inside the range of I - (P v Q).
inline Projection orthogonal_cover(const Projection& p, const Projection& q) {
  detail::require_same_dim(p, q);
  const int n = p.dim();
  const int k = p.rank();
  if (q.rank() != k) throw Error(ErrorCode::RankMismatch, "cover needs equal ranks");
  if (2 * k > n) {
    throw Error(ErrorCode::InfeasibleCover, "2k > n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");
  }
  const Projection j = join(p, q);
  const Matrix diff = j.matrix() - p.matrix();
  const Matrix fill = spectral_subspace(hermitian_eig(diff, 1e-6), 0.5);
  const Eigen::Index pad = k - fill.cols();
  if (pad == 0) return Projection::onto_orthonormal(fill);
  const Matrix outside = Matrix::Identity(n, n) - j.matrix();
  const Matrix pad_basis = complete_orthonormal(Matrix(n, 0), outside, pad);
  Matrix basis(n, k);
  basis << fill, pad_basis;
  return Projection::onto_orthonormal(basis);
}

namespace detail {
inline std::vector<Projection> split_into_blocks(const Matrix& basis, int block, int count) {
  std::vector<Projection> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(Projection::onto_orthonormal(basis.middleCols(i * block, block)));
  return out;
}

inline Matrix complement_basis(const Projection& q) {
  return spectral_subspace(hermitian_eig(q.complement().matrix(), 1e-6), 0.5);
}
}  // namespace detail

/// Q_0 = Q followed by m mutually orthogonal rank-r blocks inside the range of I - Q
/// (deterministic completion).
inline std::vector<Projection> complete_orthogonal_family(const Projection& q, int m) {
  const int n = q.dim();
  const int r = q.rank();
  if (m < 0 || (m + 1) * r > n) {
    throw Error(ErrorCode::InfeasibleFamily,
                std::to_string(m + 1) + " blocks of rank " + std::to_string(r) + " exceed n=" + std::to_string(n));
  }
  std::vector<Projection> out{q};
  if (m == 0 || r == 0) {
    for (int i = 0; i < m; ++i) out.push_back(Projection::zero(n));
    return out;
  }
  const Matrix w = complete_orthonormal(Matrix(n, 0), q.complement().matrix(), static_cast<Eigen::Index>(m) * r);
  auto blocks = detail::split_into_blocks(w, r, m);
  out.insert(out.end(), blocks.begin(), blocks.end());
  return out;
}

/// As above, but the completion is a Haar-random frame of the complement.
inline std::vector<Projection> complete_orthogonal_family(const Projection& q, int m, SeededRandomSource& rng) {
  const int n = q.dim();
  const int r = q.rank();
  if (m < 0 || (m + 1) * r > n) {
    throw Error(ErrorCode::InfeasibleFamily,
                std::to_string(m + 1) + " blocks of rank " + std::to_string(r) + " exceed n=" + std::to_string(n));
  }
  std::vector<Projection> out{q};
  if (m == 0 || r == 0) {
    for (int i = 0; i < m; ++i) out.push_back(Projection::zero(n));
    return out;
  }
  const Matrix w = detail::complement_basis(q);
  const Matrix rotated = w * haar_unitary(static_cast<int>(w.cols()), rng);
  auto blocks = detail::split_into_blocks(rotated, r, m);
  out.insert(out.end(), blocks.begin(), blocks.end());
  return out;
}

struct RangeTraceCriterion {
  double lhs;  // tau(PQP)
  double rhs;  // tau(E), E the range projection of PQP
  bool commute_flag;
};

inline RangeTraceCriterion range_trace_criterion(const Projection& p, const Projection& q,
                                                 double comm_tol = default_tolerances().comm) {
  detail::require_same_dim(p, q);
  const Matrix pqp = p.matrix() * q.matrix() * p.matrix();
  const double lhs = pqp.trace().real();
  const RangeResult e = range_projection_raw(0.5 * (pqp + pqp.adjoint()));
  const double rhs = static_cast<double>(e.rank);
  return {lhs, rhs, std::abs(lhs - rhs) <= comm_tol};
}

}  // namespace wigner
