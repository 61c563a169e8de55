#pragma once

// Rank reduction phi -> phi_1 on rank k/m projections and the orthoadditive
// extension of a rank-one map to all projections.

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wigner/report.hpp"
#include "wigner/symmetry_map.hpp"

namespace wigner {

/// Raised when a reduced or extended image fails the projection test. Carries
/// the offending combination.
class NotAProjectionError : public Error {
 public:
  NotAProjectionError(const std::string& what, Matrix raw)
      : Error(ErrorCode::NotAProjection, what), raw_(std::move(raw)) {}

  const Matrix& raw() const noexcept { return raw_; }

 private:
  Matrix raw_;
};

struct RankReduction {
  std::vector<Projection> blocks;  // Q_0 = Q, Q_1..Q_m, mutually orthogonal
  std::vector<Projection> family;  // P_i = sum_j Q_j - Q_i, rank k each
  std::vector<Projection> images;  // phi(P_i)
  Matrix raw;                      // (1/m)[sum_{i>=1} phi(P_i) - (m-1) phi(P_0)]
};

/// Builds the family and the image combination without judging the result.
inline RankReduction reduce_rank_raw(const SymmetryMapSpec& spec, const Projection& q, int m,
                                     SeededRandomSource& rng) {
  const int k = spec.source().k();
  const int n = spec.source().n();
  if (m < 1 || k % m != 0) {
    throw Error(ErrorCode::NotDivisible, "m=" + std::to_string(m) + " does not divide k=" + std::to_string(k));
  }
  const int r = k / m;
  if (q.dim() != n) throw Error(ErrorCode::ContextMismatch, "Q lives in the wrong algebra");
  if (q.rank() != r) {
    throw Error(ErrorCode::RankMismatch, "rank Q = " + std::to_string(q.rank()) + ", expected k/m = " + std::to_string(r));
  }
  if (k + r > n) {
    throw Error(ErrorCode::InfeasibleFamily, "k + k/m = " + std::to_string(k + r) + " exceeds n=" + std::to_string(n));
  }
  RankReduction out;
  out.blocks = complete_orthogonal_family(q, m, rng);
  Matrix total = Matrix::Zero(n, n);
  for (const auto& b : out.blocks) total += b.matrix();
  for (const auto& b : out.blocks) out.family.push_back(Projection::from_matrix(total - b.matrix()));
  const int target = spec.target_ctx().n();
  out.raw = Matrix::Zero(target, target);
  for (int i = 0; i <= m; ++i) {
    out.images.push_back(apply_map(spec, out.family[i]));
    out.raw += (i == 0 ? -(m - 1.0) : 1.0) * out.images.back().matrix();
  }
  out.raw /= static_cast<double>(m);
  return out;
}

/// phi_1(Q) = (1/m)[phi(P_1) + ... + phi(P_m) - (m-1) phi(P_0)]; throws NotAProjectionError
/// unless the combination is a projection of rank f k/m (f the map's rank factor).
inline Projection reduce_rank(const SymmetryMapSpec& spec, const Projection& q, int m, SeededRandomSource& rng,
                              const Tolerances& tol = {}) {
  RankReduction red = reduce_rank_raw(spec, q, m, rng);
  const int expected = spec.rank_factor() * (spec.source().k() / m);
  try {
    Projection p = Projection::from_matrix(red.raw, tol.proj);
    if (p.rank() != expected) {
      throw Error(ErrorCode::NotAProjection, "rank " + std::to_string(p.rank()) + " != " + std::to_string(expected));
    }
    return p;
  } catch (const Error& e) {
    throw NotAProjectionError("reduced image: " + e.detail(), std::move(red.raw));
  }
}

/// A map defined on rank-one projections of M_source into M_target. The callable returns
/// the raw image; consumers decide whether to validate it.
struct RankOneMap {
  int source_n = 0;
  int target_n = 0;
  std::function<Matrix(const Projection&)> fn;

  Matrix operator()(const Projection& p) const { return fn(p); }
};

/// The map itself, for specs already acting on rank one.
inline RankOneMap rank_one_map_from_spec(std::shared_ptr<const SymmetryMapSpec> spec) {
  if (spec->source().k() != 1) throw Error(ErrorCode::RankMismatch, "spec does not act on rank one");
  const int n = spec->source().n();
  const int m = spec->target_ctx().n();
  return {n, m, [spec](const Projection& p) { return apply_map(*spec, p).matrix(); }};
}

/// phi_1 via reduce_rank with m = k; each evaluation draws a fresh orthogonal family
/// from the shared stream.
inline RankOneMap rank_one_map_via_reduction(std::shared_ptr<const SymmetryMapSpec> spec, std::uint64_t seed,
                                             const Tolerances& tol = {}) {
  const int n = spec->source().n();
  const int m = spec->target_ctx().n();
  auto rng = std::make_shared<SeededRandomSource>(seed);
  return {n, m, [spec, rng, tol](const Projection& p) {
            return reduce_rank(*spec, p, spec->source().k(), *rng, tol).matrix();
          }};
}

/// Like rank_one_map_via_reduction but returns the combination unvalidated.
inline RankOneMap forced_rank_one_map(std::shared_ptr<const SymmetryMapSpec> spec, std::uint64_t seed) {
  const int n = spec->source().n();
  const int m = spec->target_ctx().n();
  auto rng = std::make_shared<SeededRandomSource>(seed);
  return {n, m, [spec, rng](const Projection& p) {
            return reduce_rank_raw(*spec, p, spec->source().k(), *rng).raw;
          }};
}

inline RankOneMap identity_rank_one_map(int n) {
  return {n, n, [](const Projection& p) { return p.matrix(); }};
}

namespace detail {
inline Matrix sum_over_resolution(const RankOneMap& map, const Matrix& basis) {
  Matrix acc = Matrix::Zero(map.target_n, map.target_n);
  for (Eigen::Index j = 0; j < basis.cols(); ++j) acc += map(Projection::rank_one(basis.col(j)));
  return acc;
}
}  // namespace detail

/// Phi(P) = sum of phi over a rank-one spectral resolution of P.
inline Projection extend_additively(const RankOneMap& map, const Projection& p, const Tolerances& tol = {}) {
  if (p.dim() != map.source_n) throw Error(ErrorCode::ContextMismatch, "P lives in the wrong algebra");
  if (p.rank() == 0) return Projection::zero(map.target_n);
  if (p.rank() == 1) {
    Matrix img = map(p);
    try {
      return Projection::from_matrix(img, tol.proj);
    } catch (const Error& e) {
      throw NotAProjectionError(e.detail(), std::move(img));
    }
  }
  Matrix sum = detail::sum_over_resolution(map, p.range_basis());
  try {
    return Projection::from_matrix(sum, tol.proj);
  } catch (const Error& e) {
    throw NotAProjectionError("orthoadditive extension: " + e.detail(), std::move(sum));
  }
}

/// Recomputes the additive extension along `trials` random rank-one resolutions of P
/// and reports the largest deviation from the first.
inline PropertyReport well_definedness_check(const RankOneMap& map, const Projection& p, int trials,
                                             SeededRandomSource& rng, const Tolerances& tol = {}) {
  PropertyReport report{.name = "well_definedness", .tolerance = tol.proj};
  const Matrix basis = p.range_basis();
  Matrix reference;
  for (int t = 0; t < trials; ++t) {
    ++report.trials;
    const Matrix rotated =
        p.rank() > 0 ? Matrix(basis * haar_unitary(p.rank(), rng)) : Matrix(basis);
    const Matrix value = detail::sum_over_resolution(map, rotated);
    if (t == 0) {
      reference = value;
      continue;
    }
    const double dev = (value - reference).norm();
    report.observe(dev);
    if (dev > tol.proj) report.record_failure({"resolutions", reference, value, dev});
  }
  return report;
}

}  // namespace wigner
