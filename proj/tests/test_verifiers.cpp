#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace wigner;

TEST(PairSchedule, HitsMixProportions) {
  const PairMix mix{};
  int counts[4] = {0, 0, 0, 0};
  const int n = 10000;
  for (int t = 0; t < n; ++t) ++counts[static_cast<int>(pair_kind_for_trial(t, mix))];
  EXPECT_NEAR(counts[0] / double(n), 0.4, 0.005);
  EXPECT_NEAR(counts[1] / double(n), 0.3, 0.005);
  EXPECT_NEAR(counts[2] / double(n), 0.2, 0.005);
  EXPECT_NEAR(counts[3] / double(n), 0.1, 0.005);
}

TEST(PropertyReport, MergeTakesMaxAndSums) {
  PropertyReport a{.name = "x"};
  a.trials = 3;
  a.observe(0.5);
  PropertyReport b{.name = "x"};
  b.trials = 4;
  b.observe(0.25);
  for (int i = 0; i < 5; ++i) b.record_failure({"c", Matrix(), Matrix(), 1.0});
  a.merge(b);
  EXPECT_EQ(a.trials, 7);
  EXPECT_EQ(a.failures, 5);
  EXPECT_EQ(a.max_deviation, 0.5);
  EXPECT_FALSE(a.passed());
  EXPECT_EQ(a.counterexamples.size(), PropertyReport::kMaxCounterexamples);
}

TEST(TransitionVerifier, UnitaryPassesTightly) {
  SeededRandomSource rng(1);
  for (auto [n, k] : {std::pair{4, 1}, {5, 2}, {6, 3}, {7, 5}}) {
    const GrassmannIndex g(AlgebraContext(n), k);
    const auto spec = make_unitary_map(g, haar_unitary(n, rng));
    const auto r = verify_transition_preserving(spec, g, 200, rng);
    EXPECT_TRUE(r.passed());
    EXPECT_LE(r.max_deviation, 1e-10);
  }
}

TEST(TransitionVerifier, BalancedComplementPasses) {
  SeededRandomSource rng(2);
  const GrassmannIndex g(AlgebraContext(4), 2);
  const auto r = verify_transition_preserving(make_complement_map(g), g, 500, rng);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.max_deviation, 1e-12);
}

TEST(TransitionVerifier, PerturbedMapFails) {
  SeededRandomSource rng(3);
  const GrassmannIndex g(AlgebraContext(4), 1);
  const auto spec = perturb_map(make_unitary_map(g, haar_unitary(4, rng)), 0.1, rng);
  const auto r = verify_transition_preserving(spec, g, 200, rng);
  EXPECT_FALSE(r.passed());
  EXPECT_GT(r.max_deviation, 1e-3);
  ASSERT_FALSE(r.counterexamples.empty());
  EXPECT_EQ(r.counterexamples.front().first.rows(), 4);
}

TEST(TransitionVerifier, JordanBlockUsesScaledInvariant) {
  SeededRandomSource rng(4);
  const GrassmannIndex g(AlgebraContext(3), 1);
  const auto spec = make_jordan_block_map(g, 6, rng);
  const auto r = verify_transition_preserving(spec, g, 200, rng);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.max_deviation, 1e-10);
}

TEST(TransitionVerifier, OracleTableSamplesStoredInputs) {
  SeededRandomSource rng(5);
  const GrassmannIndex g(AlgebraContext(4), 2);
  std::vector<Projection> inputs;
  for (int t = 0; t < 30; ++t) inputs.push_back(sample_projection(g, rng));
  const auto table = tabulate(make_antiunitary_map(g, haar_unitary(4, rng)), inputs);
  EXPECT_TRUE(verify_transition_preserving(table, g, 100, rng).passed());
}

TEST(OrthogonalityVerifier, DiagonalPairUnderUnitary) {
  SeededRandomSource rng(6);
  const GrassmannIndex g(AlgebraContext(4), 2);
  const Matrix u = haar_unitary(4, rng);
  const auto spec = make_unitary_map(g, u);
  const Projection p = Projection::diagonal(4, {0, 1}), q = Projection::diagonal(4, {2, 3});
  EXPECT_TRUE(orthogonal(apply_map(spec, p), apply_map(spec, q)));
  EXPECT_FALSE(orthogonal(apply_map(spec, p), apply_map(spec, p)));
}

TEST(OrthogonalityVerifier, AntiUnitarySuite) {
  SeededRandomSource rng(7);
  const GrassmannIndex g(AlgebraContext(5), 2);
  const auto r = verify_orthogonality_iff(make_antiunitary_map(g, haar_unitary(5, rng)), g, 500, rng);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.failures, 0);
  EXPECT_EQ(r.trials, 500);
}

TEST(CommutativityVerifier, UnitarySuiteAtOverlapOne) {
  SeededRandomSource rng(8);
  const GrassmannIndex g(AlgebraContext(6), 2);
  const Matrix u = haar_unitary(6, rng);
  const auto spec = make_unitary_map(g, u);
  auto [p, q] = sample_commuting_pair(g, 1, rng);
  EXPECT_LE(commutator_norm(apply_map(spec, p).matrix(), apply_map(spec, q).matrix()), 1e-10);
  const auto r = verify_commutativity_preserved(spec, g, 300, rng);
  EXPECT_TRUE(r.passed());
  EXPECT_LE(r.max_deviation, 1e-10);
}

TEST(CommutativityVerifier, PerturbedMapBreaksCommutation) {
  SeededRandomSource rng(9);
  const GrassmannIndex g(AlgebraContext(5), 2);
  const auto spec = perturb_map(make_unitary_map(g, haar_unitary(5, rng)), 0.3, rng);
  EXPECT_FALSE(verify_commutativity_preserved(spec, g, 200, rng).passed());
}

TEST(InclusionOrthVerifier, UnitaryAndAntiUnitaryPass) {
  SeededRandomSource rng(10);
  for (auto [n, k] : {std::pair{4, 2}, {5, 2}, {7, 3}}) {
    const GrassmannIndex g(AlgebraContext(n), k);
    EXPECT_TRUE(verify_inclusion_orth(make_unitary_map(g, haar_unitary(n, rng)), g, 200, rng).passed());
    EXPECT_TRUE(verify_inclusion_orth(make_antiunitary_map(g, haar_unitary(n, rng)), g, 200, rng).passed());
  }
}

TEST(InclusionOrthVerifier, ControlsRecordedAndDetectPerturbation) {
  SeededRandomSource rng(11);
  const GrassmannIndex g(AlgebraContext(6), 2);
  const auto ok = verify_inclusion_orth(make_unitary_map(g, haar_unitary(6, rng)), g, 100, rng);
  EXPECT_NE(ok.note.find("50 control"), std::string::npos);
  const auto bad =
      verify_inclusion_orth(perturb_map(make_unitary_map(g, haar_unitary(6, rng)), 0.3, rng), g, 200, rng);
  EXPECT_FALSE(bad.passed());
}

TEST(InclusionOrthVerifier, RejectsLargeRank) {
  SeededRandomSource rng(12);
  const GrassmannIndex g(AlgebraContext(5), 3);
  EXPECT_THROW(verify_inclusion_orth(make_identity_map(g), g, 10, rng), Error);
}

TEST(InclusionJoinVerifier, UnitaryAndAntiUnitaryPass) {
  SeededRandomSource rng(13);
  for (auto [n, k] : {std::pair{6, 2}, {5, 3}, {7, 3}}) {
    const GrassmannIndex g(AlgebraContext(n), k);
    EXPECT_TRUE(verify_inclusion_join(make_unitary_map(g, haar_unitary(n, rng)), g, 200, rng).passed());
    EXPECT_TRUE(verify_inclusion_join(make_antiunitary_map(g, haar_unitary(n, rng)), g, 200, rng).passed());
  }
}

TEST(InclusionJoinVerifier, PerturbedMapFails) {
  SeededRandomSource rng(14);
  const GrassmannIndex g(AlgebraContext(6), 2);
  const auto spec = perturb_map(make_unitary_map(g, haar_unitary(6, rng)), 0.3, rng);
  EXPECT_FALSE(verify_inclusion_join(spec, g, 200, rng).passed());
}
