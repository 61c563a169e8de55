#pragma once

// Randomized property suites for the structure-preservation properties. Every verifier
// returns a PropertyReport; failures are report entries, never exceptions.

#include <cmath>
#include <string>
#include <utility>

#include "wigner/report.hpp"
#include "wigner/symmetry_map.hpp"

namespace wigner {

/// Relative frequencies of structured pair types in verifier sampling.
struct PairMix {
  double generic = 0.4;
  double commuting = 0.3;
  double orthogonal = 0.2;
  double equal = 0.1;
};

enum class PairKind { generic, commuting, orthogonal, equal };

inline const char* to_string(PairKind k) {
  switch (k) {
    case PairKind::generic: return "generic";
    case PairKind::commuting: return "commuting";
    case PairKind::orthogonal: return "orthogonal";
    case PairKind::equal: return "equal";
  }
  return "?";
}

/// Deterministic, well-interleaved schedule (golden-ratio sequence) hitting the
/// mix proportions.
inline PairKind pair_kind_for_trial(int trial, const PairMix& mix) {
  const double total = mix.generic + mix.commuting + mix.orthogonal + mix.equal;
  const double u = std::fmod(0.5 + trial * 0.6180339887498949, 1.0) * total;
  if (u < mix.generic) return PairKind::generic;
  if (u < mix.generic + mix.commuting) return PairKind::commuting;
  if (u < mix.generic + mix.commuting + mix.orthogonal) return PairKind::orthogonal;
  return PairKind::equal;
}

inline std::pair<Projection, Projection> sample_pair(const GrassmannIndex& g, PairKind kind,
                                                     SeededRandomSource& rng) {
  const int lo = std::max(0, 2 * g.k() - g.n());
  switch (kind) {
    case PairKind::generic: {
      Projection p = sample_projection(g, rng);
      return {std::move(p), sample_projection(g, rng)};
    }
    case PairKind::commuting:
      return sample_commuting_pair(g, rng.uniform_int(lo, g.k()), rng);
    case PairKind::orthogonal:
      // Closest-to-orthogonal commuting pair when 2k > n.
      return sample_commuting_pair(g, lo, rng);
    case PairKind::equal: {
      Projection p = sample_projection(g, rng);
      return {p, p};
    }
  }
  throw Error(ErrorCode::InvalidContext, "unknown pair kind");
}

namespace detail {

/// Pairs drawn from a table's stored inputs, or sampled per the mix otherwise.
inline std::pair<Projection, Projection> verifier_pair(const SymmetryMapSpec& spec, const GrassmannIndex& g,
                                                       int trial, const PairMix& mix, SeededRandomSource& rng) {
  if (const auto* table = std::get_if<kinds::OracleTable>(&spec.kind())) {
    if (table->entries.empty()) throw Error(ErrorCode::OracleMiss, "empty table");
    const int last = static_cast<int>(table->entries.size()) - 1;
    const auto& a = table->entries[rng.uniform_int(0, last)].input;
    const auto& b = table->entries[rng.uniform_int(0, last)].input;
    return {a, b};
  }
  return sample_pair(g, pair_kind_for_trial(trial, mix), rng);
}

/// ||S Q - Q||_F: how far the range of Q is from lying inside the range of S.
inline double domination_defect(const Matrix& q, const Matrix& s) { return (s * q - q).norm(); }

}  // namespace detail

/// max |tau(phi(P)phi(Q)) - f tau(PQ)|, with f the map's rank factor (2 for Jordan block maps).
inline PropertyReport verify_transition_preserving(const SymmetryMapSpec& spec, const GrassmannIndex& g, int trials,
                                                   SeededRandomSource& rng, const Tolerances& tol = {},
                                                   const PairMix& mix = {}) {
  PropertyReport report{.name = "transition_preserving", .tolerance = tol.verify};
  const double factor = spec.rank_factor();
  if (factor != 1.0) report.note = "scaled invariant, factor " + std::to_string(spec.rank_factor());
  for (int t = 0; t < trials; ++t) {
    ++report.trials;
    try {
      auto [p, q] = detail::verifier_pair(spec, g, t, mix, rng);
      const Projection fp = apply_map(spec, p);
      const Projection fq = apply_map(spec, q);
      const double dev = std::abs(transition_probability(fp, fq) - factor * transition_probability(p, q));
      report.observe(dev);
      if (dev > tol.verify) report.record_failure({"pair", p.matrix(), q.matrix(), dev});
    } catch (const Error& e) {
      report.note = e.what();
      report.record_failure({"error", Matrix(), Matrix(), 0.0});
    }
  }
  return report;
}

/// P ⊥ Q  <=>  phi(P) ⊥ phi(Q).
inline PropertyReport verify_orthogonality_iff(const SymmetryMapSpec& spec, const GrassmannIndex& g, int trials,
                                               SeededRandomSource& rng, const Tolerances& tol = {},
                                               const PairMix& mix = {}) {
  PropertyReport report{.name = "orthogonality_iff", .tolerance = tol.verify};
  int orthogonal_inputs = 0;
  for (int t = 0; t < trials; ++t) {
    ++report.trials;
    try {
      auto [p, q] = detail::verifier_pair(spec, g, t, mix, rng);
      const Projection fp = apply_map(spec, p);
      const Projection fq = apply_map(spec, q);
      const double in = transition_probability(p, q);
      const double out = transition_probability(fp, fq);
      const bool orth_in = in <= tol.verify;
      const bool orth_out = out <= tol.verify;
      orthogonal_inputs += orth_in ? 1 : 0;
      if (orth_in) report.observe(out);
      if (orth_out) report.observe(in);
      if (orth_in != orth_out) report.record_failure({"pair", p.matrix(), q.matrix(), std::max(in, out)});
    } catch (const Error& e) {
      report.note = e.what();
      report.record_failure({"error", Matrix(), Matrix(), 0.0});
    }
  }
  if (report.note.empty()) report.note = std::to_string(orthogonal_inputs) + " orthogonal input pairs";
  return report;
}

/// PQ = QP  =>  phi(P)phi(Q) = phi(Q)phi(P), over all feasible overlaps.
inline PropertyReport verify_commutativity_preserved(const SymmetryMapSpec& spec, const GrassmannIndex& g,
                                                     int trials, SeededRandomSource& rng,
                                                     const Tolerances& tol = {}) {
  PropertyReport report{.name = "commutativity_preserved", .tolerance = tol.verify};
  if (2 * g.k() < g.n()) report.note = "branch: 2k < n";
  else if (g.balanced()) report.note = "branch: 2k = n (excluded trace value)";
  else report.note = "branch: 2k > n (complement-reduced case, statement checked directly)";
  const int lo = std::max(0, 2 * g.k() - g.n());
  const int span = g.k() - lo + 1;
  for (int t = 0; t < trials; ++t) {
    ++report.trials;
    try {
      const int overlap = lo + t % span;
      auto [p, q] = sample_commuting_pair(g, overlap, rng);
      const Projection fp = apply_map(spec, p);
      const Projection fq = apply_map(spec, q);
      const double dev = commutator_norm(fp.matrix(), fq.matrix());
      report.observe(dev);
      if (dev > tol.verify) report.record_failure({"pair", p.matrix(), q.matrix(), dev});
    } catch (const Error& e) {
      report.note = e.what();
      report.record_failure({"error", Matrix(), Matrix(), 0.0});
    }
  }
  return report;
}

/// Q <= P1 + P2  <=>  phi(Q) <= phi(P1) + phi(P2) for P1 ⊥ P2. Even trials take Q inside
/// the sum (trial 0 uses Q = P1); odd trials, when 2k < n, take a generic Q as a control.
inline PropertyReport verify_inclusion_orth(const SymmetryMapSpec& spec, const GrassmannIndex& g, int trials,
                                            SeededRandomSource& rng, const Tolerances& tol = {}) {
  if (2 * g.k() > g.n()) {
    throw Error(ErrorCode::InfeasibleCover, "orthogonal pair of rank k needs 2k <= n");
  }
  PropertyReport report{.name = "inclusion_orth", .tolerance = tol.verify};
  const bool controls = 2 * g.k() < g.n();
  int control_count = 0;
  for (int t = 0; t < trials; ++t) {
    ++report.trials;
    try {
      auto [p1, p2] = sample_commuting_pair(g, 0, rng);
      const Matrix sum = p1.matrix() + p2.matrix();
      const bool control = controls && (t % 2 == 1);
      Projection q = t == 0 ? p1
                     : control ? sample_projection(g, rng)
                               : sample_subprojection(Projection::from_matrix(sum), g.k(), rng);
      control_count += control ? 1 : 0;
      const Matrix image_sum = apply_map(spec, p1).matrix() + apply_map(spec, p2).matrix();
      const Projection fq = apply_map(spec, q);
      const double in_defect = detail::domination_defect(q.matrix(), sum);
      const double out_defect = detail::domination_defect(fq.matrix(), image_sum);
      const bool in = in_defect <= tol.verify;
      const bool out = out_defect <= tol.verify;
      if (in) report.observe(out_defect);
      if (in != out) report.record_failure({"Q,P1+P2", q.matrix(), sum, out_defect});
    } catch (const Error& e) {
      report.note = e.what();
      report.record_failure({"error", Matrix(), Matrix(), 0.0});
    }
  }
  if (report.note.empty()) report.note = std::to_string(control_count) + " control trials";
  return report;
}

/// Q <= P1 v P2  =>  phi(Q) <= phi(P1) v phi(P2) for commuting P1, P2.
inline PropertyReport verify_inclusion_join(const SymmetryMapSpec& spec, const GrassmannIndex& g, int trials,
                                            SeededRandomSource& rng, const Tolerances& tol = {}) {
  PropertyReport report{.name = "inclusion_join", .tolerance = tol.verify};
  const int lo = std::max(0, 2 * g.k() - g.n());
  for (int t = 0; t < trials; ++t) {
    ++report.trials;
    try {
      auto [p1, p2] = sample_commuting_pair(g, rng.uniform_int(lo, g.k()), rng);
      const Projection j = join(p1, p2);
      const Projection q = sample_subprojection(j, g.k(), rng);
      const Projection image_join = join(apply_map(spec, p1), apply_map(spec, p2));
      const Projection fq = apply_map(spec, q);
      const double dev = detail::domination_defect(fq.matrix(), image_join.matrix());
      report.observe(dev);
      if (dev > tol.verify) report.record_failure({"Q,P1vP2", q.matrix(), j.matrix(), dev});
    } catch (const Error& e) {
      report.note = e.what();
      report.record_failure({"error", Matrix(), Matrix(), 0.0});
    }
  }
  return report;
}

}  // namespace wigner
