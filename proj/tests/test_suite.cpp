#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>

#include "test_util.hpp"

using namespace wigner;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoFailure;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("wigner_suite_" + name)).string();
}

SuiteConfig quick(int n, int k, const std::string& kind, std::uint64_t seed) {
  SuiteConfig c;
  c.n = n;
  c.k = k;
  c.kind = kind;
  c.seed = seed;
  c.trials = 50;
  return c;
}

}  // namespace

TEST(SuiteConfig, AppliesKnownKeysAndRejectsUnknown) {
  SuiteConfig c;
  apply_config_json(Json::parse(R"({"n":6,"k":2,"kind":"antiunitary","seed":99,"trials":10,
                                    "tolerances":{"verify":1e-8},"verifiers":["transition"]})"),
                    c);
  EXPECT_EQ(c.n, 6);
  EXPECT_EQ(c.k, 2);
  EXPECT_EQ(c.kind, "antiunitary");
  EXPECT_EQ(c.seed, 99u);
  EXPECT_EQ(c.tol.verify, 1e-8);
  EXPECT_EQ(c.verifiers, std::vector<std::string>{"transition"});
  EXPECT_EQ(code_of([&] { apply_config_json(Json::parse(R"({"nn":3})"), c); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([&] { apply_config_json(Json::parse(R"({"tolerances":{"foo":1}})"), c); }),
            ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([&] { apply_config_json(Json::parse(R"({"n":"four"})"), c); }), ErrorCode::ConfigInvalid);
}

TEST(SuiteConfig, ValidationRules) {
  EXPECT_EQ(code_of([] { quick(4, 4, "unitary", 1).validate(); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { quick(4, 0, "unitary", 1).validate(); }), ErrorCode::ConfigInvalid);
  EXPECT_EQ(code_of([] { quick(4, 1, "bogus", 1).validate(); }), ErrorCode::ConfigInvalid);
  SuiteConfig c = quick(4, 1, "unitary", 1);
  c.trials = 0;
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::ConfigInvalid);
  c = quick(4, 1, "unitary", 1);
  c.verifiers = {"nope"};
  EXPECT_EQ(code_of([&] { c.validate(); }), ErrorCode::ConfigInvalid);
}

TEST(SuiteConfig, LoadFromFileAndMissingFile) {
  const std::string path = temp_path("cfg.json");
  detail::write_file(path, R"({"n":5,"k":2})");
  const SuiteConfig c = load_config(path);
  EXPECT_EQ(c.n, 5);
  EXPECT_EQ(c.k, 2);
  std::filesystem::remove(path);
  EXPECT_EQ(code_of([] { load_config(temp_path("missing.json")); }), ErrorCode::IoFailure);
  detail::write_file(path, "{not json");
  EXPECT_EQ(code_of([&] { load_config(path); }), ErrorCode::ConfigInvalid);
  std::filesystem::remove(path);
}

TEST(SuiteConfig, EnvironmentOverrides) {
  ::setenv("WIGNER_EPS_PROJ", "2e-9", 1);
  ::setenv("WIGNER_EPS_SPLIT", "3e-7", 1);
  const Tolerances t = tolerances_from_environment();
  EXPECT_EQ(t.proj, 2e-9);
  EXPECT_EQ(t.split, 3e-7);
  EXPECT_EQ(t.verify, 1e-9);
  ::setenv("WIGNER_EPS_PROJ", "abc", 1);
  EXPECT_EQ(code_of([] { tolerances_from_environment(); }), ErrorCode::ConfigInvalid);
  ::unsetenv("WIGNER_EPS_PROJ");
  ::unsetenv("WIGNER_EPS_SPLIT");
}

TEST(RunSuite, UnitaryRankOneSeedSeven) {
  SuiteConfig c;
  c.n = 4;
  c.k = 1;
  c.kind = "unitary";
  c.seed = 7;
  const SuiteReport r = run_suite(c);
  EXPECT_EQ(r.json.at("pipeline").at("verdict"), "unitary");
  EXPECT_TRUE(r.all_passed());
  EXPECT_EQ(r.json.at("seed"), 7u);
  EXPECT_EQ(r.json.at("version_stamp"), kVersionStamp);
  EXPECT_TRUE(r.json.at("timing").contains("total_ms"));
}

TEST(RunSuite, BalancedComplementSeedSeven) {
  SuiteConfig c;
  c.n = 4;
  c.k = 2;
  c.kind = "complement";
  c.seed = 7;
  const SuiteReport r = run_suite(c);
  const Json& p = r.json.at("pipeline");
  EXPECT_EQ(p.at("verdict"), "reduction_failed");
  EXPECT_TRUE(p.at("excluded_trace_value").get<bool>());
  EXPECT_FALSE(r.all_passed());
}

TEST(RunSuite, DeterministicModuloTiming) {
  for (const auto& kind : {"unitary", "antiunitary", "jordan_block"}) {
    const SuiteConfig c = quick(5, 2, kind, 31);
    const SuiteReport a = run_suite(c);
    const SuiteReport b = run_suite(c);
    EXPECT_EQ(a.without_timing().dump(), b.without_timing().dump()) << kind;
  }
}

TEST(RunSuite, EveryFailedStageCarriesCounterexample) {
  for (const auto& [kind, eps] : {std::pair{"complement", 0.0}, {"unitary", 0.1}}) {
    SuiteConfig c = quick(4, 2, kind, 3);
    c.perturb_eps = eps;
    const SuiteReport r = run_suite(c);
    EXPECT_FALSE(r.all_passed());
    auto check = [](const Json& stages) {
      for (const auto& s : stages) {
        if (s.at("status") == "fail") {
          EXPECT_FALSE(s.at("counterexamples").empty()) << s.at("name");
        }
      }
    };
    check(r.json.at("stages"));
    check(r.json.at("pipeline").at("stages"));
  }
}

TEST(RunSuite, WritesReportToOutPath) {
  SuiteConfig c = quick(3, 1, "identity", 2);
  c.out = temp_path("report.json");
  const SuiteReport r = run_suite(c);
  const Json back = Json::parse(detail::read_file(c.out));
  EXPECT_EQ(back.dump(), r.json.dump());
  std::filesystem::remove(c.out);
  c.out = "/nonexistent_dir/x/report.json";
  EXPECT_EQ(code_of([&] { run_suite(c); }), ErrorCode::IoFailure);
}

TEST(RunSuite, SpecFileOverridesKind) {
  SeededRandomSource rng(4);
  const GrassmannIndex g(AlgebraContext(4), 1);
  const std::string path = temp_path("spec.json");
  save_spec(path, make_antiunitary_map(g, haar_unitary(4, rng)));
  SuiteConfig c = quick(4, 1, "unitary", 5);
  c.spec_path = path;
  const SuiteReport r = run_suite(c);
  EXPECT_EQ(r.json.at("map_kind"), "antiunitary");
  EXPECT_EQ(r.json.at("pipeline").at("verdict"), "antiunitary");
  c.n = 5;
  EXPECT_EQ(code_of([&] { run_suite(c); }), ErrorCode::ConfigInvalid);
  std::filesystem::remove(path);
}

TEST(RunSuite, SkipsInapplicableVerifiers) {
  const SuiteReport r = run_suite(quick(5, 3, "unitary", 6));
  bool saw = false;
  for (const auto& s : r.json.at("stages")) {
    if (s.at("name") == "inclusion_orth") {
      EXPECT_EQ(s.at("status"), "skipped");
      saw = true;
    }
  }
  EXPECT_TRUE(saw);
  EXPECT_TRUE(r.all_passed());
}

TEST(RenderReport, MentionsVerdictAndStages) {
  const SuiteReport r = run_suite(quick(4, 2, "complement", 7));
  const std::string text = render_report(r.json);
  EXPECT_NE(text.find("verdict=reduction_failed"), std::string::npos);
  EXPECT_NE(text.find("excluded trace value"), std::string::npos);
  EXPECT_NE(text.find("transition_preserving"), std::string::npos);
}
