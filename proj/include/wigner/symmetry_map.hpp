#pragma once

// Candidate maps phi on the Grassmann space of rank-k projections: the
// structure-preserving families (unitary, anti-unitary, Jordan block), the
// complement map that only exists at 2k = n, perturbed negative controls and
// tabulated black-box maps.

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "wigner/projection.hpp"

namespace wigner {

class SymmetryMapSpec;

namespace kinds {

/// P -> U P U*
struct Unitary {
  Matrix u;
};

/// P -> U conj(P) U*
struct AntiUnitary {
  Matrix u;
};

/// P -> V1 P V1* + V2 P^T V2*, V1 and V2 isometries with orthogonal ranges.
struct JordanBlock {
  Matrix v1;
  Matrix v2;
};

/// P -> I - P
struct Complement {};

struct OracleEntry {
  Projection input;
  Projection output;
  double key;  // Re tr(P Z_0), sort key
};

/// Exact-lookup table over a finite set of inputs.
struct OracleTable {
  std::vector<OracleEntry> entries;  // sorted by key
  std::vector<Matrix> probes;        // fingerprint probes, unit Frobenius norm
  int rank_factor = 1;
};

/// Output-side conjugation by W applied only where Re tr(P Z) > 0.
struct Perturbed {
  std::shared_ptr<const SymmetryMapSpec> base;
  Matrix w;
  Matrix selector;
  double eps = 0.0;
};

/// psi(P) = I - phi(I - P) on the complementary rank.
struct ComplementConjugated {
  std::shared_ptr<const SymmetryMapSpec> base;
};

}  // namespace kinds

using MapKind = std::variant<kinds::Unitary, kinds::AntiUnitary, kinds::JordanBlock, kinds::Complement,
                             kinds::OracleTable, kinds::Perturbed, kinds::ComplementConjugated>;

class SymmetryMapSpec {
 public:
  SymmetryMapSpec(MapKind kind, GrassmannIndex source, AlgebraContext target)
      : kind_(std::move(kind)), source_(source), target_(target) {}

  const MapKind& kind() const noexcept { return kind_; }
  const GrassmannIndex& source() const noexcept { return source_; }
  const AlgebraContext& target_ctx() const noexcept { return target_; }

  std::string kind_name() const {
    return std::visit(
        [](const auto& k) -> std::string {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, kinds::Unitary>) return "unitary";
          else if constexpr (std::is_same_v<K, kinds::AntiUnitary>) return "antiunitary";
          else if constexpr (std::is_same_v<K, kinds::JordanBlock>) return "jordan_block";
          else if constexpr (std::is_same_v<K, kinds::Complement>) return "complement";
          else if constexpr (std::is_same_v<K, kinds::OracleTable>) return "oracle_table";
          else if constexpr (std::is_same_v<K, kinds::Perturbed>) return "perturbed";
          else return "complement_conjugated";
        },
        kind_);
  }

  /// Can be evaluated on projections of any rank.
  bool constructive() const {
    if (std::holds_alternative<kinds::OracleTable>(kind_)) return false;
    if (const auto* p = std::get_if<kinds::Perturbed>(&kind_)) return p->base->constructive();
    if (const auto* c = std::get_if<kinds::ComplementConjugated>(&kind_)) return c->base->constructive();
    return true;
  }

  /// rank(phi(P)) / rank(P); 2 for Jordan block maps, 1 otherwise.
  int rank_factor() const {
    if (std::holds_alternative<kinds::JordanBlock>(kind_)) return 2;
    if (const auto* t = std::get_if<kinds::OracleTable>(&kind_)) return t->rank_factor;
    if (const auto* p = std::get_if<kinds::Perturbed>(&kind_)) return p->base->rank_factor();
    return 1;
  }

 private:
  MapKind kind_;
  GrassmannIndex source_;
  AlgebraContext target_;
};

namespace detail {

inline void require_isometry(const Matrix& v, const char* what, double tol = default_tolerances().proj) {
  const double defect = (v.adjoint() * v - Matrix::Identity(v.cols(), v.cols())).norm();
  if (defect > tol * std::max<double>(1.0, std::sqrt(static_cast<double>(v.cols())))) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " is not an isometry, defect " + sci(defect));
  }
}

inline std::vector<Matrix> oracle_probes(int n) {
  SeededRandomSource rng(0x0fac1e5eedULL);
  std::vector<Matrix> probes;
  for (int i = 0; i < 3; ++i) probes.push_back(random_hermitian(n, rng));
  return probes;
}

inline const kinds::OracleEntry* oracle_find(const kinds::OracleTable& table, const Projection& p, double tol) {
  const double key = trace_pairing(p.matrix(), table.probes.front());
  auto it = std::lower_bound(table.entries.begin(), table.entries.end(), key - tol,
                             [](const kinds::OracleEntry& e, double v) { return e.key < v; });
  for (; it != table.entries.end() && it->key <= key + tol; ++it) {
    if (it->input.dim() != p.dim()) continue;
    if ((it->input.matrix() - p.matrix()).norm() <= tol) return &*it;
  }
  return nullptr;
}

}  // namespace detail

/// Evaluates the map on a projection of any rank (constructive kinds) without the
/// source-rank check.
inline Projection apply_any_rank(const SymmetryMapSpec& spec, const Projection& p) {
  if (p.dim() != spec.source().n()) {
    throw Error(ErrorCode::ContextMismatch, "input dimension " + std::to_string(p.dim()) + " vs source n=" +
                                                std::to_string(spec.source().n()));
  }
  return std::visit(
      [&](const auto& k) -> Projection {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, kinds::Unitary>) {
          return p.conjugated_by(k.u);
        } else if constexpr (std::is_same_v<K, kinds::AntiUnitary>) {
          return Projection::from_matrix(k.u * conj(p.matrix()) * k.u.adjoint());
        } else if constexpr (std::is_same_v<K, kinds::JordanBlock>) {
          return Projection::from_matrix(k.v1 * p.matrix() * k.v1.adjoint() +
                                         k.v2 * p.matrix().transpose() * k.v2.adjoint());
        } else if constexpr (std::is_same_v<K, kinds::Complement>) {
          return p.complement();
        } else if constexpr (std::is_same_v<K, kinds::OracleTable>) {
          if (k.entries.empty()) throw Error(ErrorCode::OracleMiss, "empty table");
          const auto* hit = detail::oracle_find(k, p, default_tolerances().proj);
          if (hit == nullptr) throw Error(ErrorCode::OracleMiss, "no table entry for input");
          return hit->output;
        } else if constexpr (std::is_same_v<K, kinds::Perturbed>) {
          Projection out = apply_any_rank(*k.base, p);
          if (trace_pairing(p.matrix(), k.selector) > 0.0) out = out.conjugated_by(k.w);
          return out;
        } else {
          const auto& base = *k.base;
          const Projection inner = apply_any_rank(base, p.complement());
          return inner.complement();
        }
      },
      spec.kind());
}

/// phi(P) for P in the source Grassmann space.
inline Projection apply_map(const SymmetryMapSpec& spec, const Projection& p) {
  if (p.rank() != spec.source().k()) {
    throw Error(ErrorCode::RankMismatch,
                "input rank " + std::to_string(p.rank()) + " vs source k=" + std::to_string(spec.source().k()));
  }
  return apply_any_rank(spec, p);
}

inline SymmetryMapSpec make_unitary_map(const GrassmannIndex& g, Matrix u) {
  if (u.rows() != g.n() || u.cols() != g.n()) throw Error(ErrorCode::DimensionMismatch, "U must be n x n");
  detail::require_isometry(u, "U");
  return SymmetryMapSpec(kinds::Unitary{std::move(u)}, g, g.ctx());
}

inline SymmetryMapSpec make_identity_map(const GrassmannIndex& g) { return make_unitary_map(g, identity(g.n())); }

inline SymmetryMapSpec make_antiunitary_map(const GrassmannIndex& g, Matrix u) {
  if (u.rows() != g.n() || u.cols() != g.n()) throw Error(ErrorCode::DimensionMismatch, "U must be n x n");
  detail::require_isometry(u, "U");
  return SymmetryMapSpec(kinds::AntiUnitary{std::move(u)}, g, g.ctx());
}

inline SymmetryMapSpec make_jordan_block_map(const GrassmannIndex& g, Matrix v1, Matrix v2) {
  if (v1.cols() != g.n() || v2.cols() != g.n() || v1.rows() != v2.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "isometries must be m x n with a common target m");
  }
  detail::require_isometry(v1, "V1");
  detail::require_isometry(v2, "V2");
  const double overlap = (v1.adjoint() * v2).norm();
  if (overlap > default_tolerances().proj) {
    throw Error(ErrorCode::DimensionMismatch, "isometry ranges are not orthogonal, |V1* V2| = " + sci(overlap));
  }
  const auto m = static_cast<int>(v1.rows());
  return SymmetryMapSpec(kinds::JordanBlock{std::move(v1), std::move(v2)}, g, AlgebraContext(m));
}

/// Random Jordan block map into M_target_n, target_n >= 2n.
inline SymmetryMapSpec make_jordan_block_map(const GrassmannIndex& g, int target_n, SeededRandomSource& rng) {
  const Matrix v = random_isometry(2 * g.n(), target_n, rng);
  return make_jordan_block_map(g, v.leftCols(g.n()), v.rightCols(g.n()));
}

inline SymmetryMapSpec make_complement_map(const GrassmannIndex& g) {
  if (!g.balanced()) {
    throw Error(ErrorCode::NotBalanced, "complement map needs 2k = n, got k=" + std::to_string(g.k()) +
                                            " n=" + std::to_string(g.n()));
  }
  return SymmetryMapSpec(kinds::Complement{}, g, g.ctx());
}

/// psi(P) = I - phi(I - P), acting on rank n - k.
inline SymmetryMapSpec make_complement_conjugated(std::shared_ptr<const SymmetryMapSpec> base) {
  if (base->target_ctx() != base->source().ctx()) {
    throw Error(ErrorCode::UnsupportedKind, "complement conjugation needs target = source algebra");
  }
  const GrassmannIndex g(base->source().ctx(), base->source().n() - base->source().k());
  const AlgebraContext target = base->target_ctx();
  return SymmetryMapSpec(kinds::ComplementConjugated{std::move(base)}, g, target);
}

inline SymmetryMapSpec perturb_map(const SymmetryMapSpec& spec, double eps, SeededRandomSource& rng) {
  if (!spec.constructive()) throw Error(ErrorCode::UnsupportedKind, "perturbation needs a constructive map");
  const int m = spec.target_ctx().n();
  const int n = spec.source().n();
  const Matrix h = random_hermitian(m, rng);
  Matrix z = random_hermitian(n, rng);
  z -= (z.trace() / static_cast<double>(n)) * identity(n);
  return SymmetryMapSpec(
      kinds::Perturbed{std::make_shared<const SymmetryMapSpec>(spec), unitary_exponential(h, eps), z, eps},
      spec.source(), spec.target_ctx());
}

inline kinds::OracleTable build_oracle_table(int n, std::vector<std::pair<Projection, Projection>> pairs,
                                             int rank_factor) {
  kinds::OracleTable table;
  table.probes = detail::oracle_probes(n);
  table.rank_factor = rank_factor;
  for (auto& [in, out] : pairs) {
    const double key = trace_pairing(in.matrix(), table.probes.front());
    table.entries.push_back({std::move(in), std::move(out), key});
  }
  std::stable_sort(table.entries.begin(), table.entries.end(),
                   [](const auto& a, const auto& b) { return a.key < b.key; });
  return table;
}

inline SymmetryMapSpec tabulate(const SymmetryMapSpec& spec, const std::vector<Projection>& inputs) {
  std::vector<std::pair<Projection, Projection>> pairs;
  pairs.reserve(inputs.size());
  for (const auto& p : inputs) pairs.emplace_back(p, apply_map(spec, p));
  return SymmetryMapSpec(build_oracle_table(spec.source().n(), std::move(pairs), spec.rank_factor()),
                         spec.source(), spec.target_ctx());
}

}  // namespace wigner
