#pragma once

// Seeded batch runs: configuration, map synthesis, verifier suites, the full
// pipeline, and the JSON report. Reports are deterministic for a fixed seed
// except for the "timing" object.

#include <chrono>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wigner/pipeline.hpp"
#include "wigner/serialization.hpp"

namespace wigner {

inline constexpr const char* kVersionStamp = "wigner-workbench 1.0.0";

inline const std::vector<std::string>& all_verifiers() {
  static const std::vector<std::string> names{"transition",     "orthogonality", "commutativity",
                                              "inclusion_orth", "inclusion_join", "range_trace",
                                              "reduce_rank",    "well_definedness"};
  return names;
}

struct SuiteConfig {
  int n = 4;
  int k = 1;
  int m = 0;  // reduce_rank divisor; 0 means m = k
  std::string kind = "unitary";
  std::string spec_path;  // overrides kind when set
  int target_n = 0;       // jordan_block target dimension; 0 means 2n
  double perturb_eps = 0.0;
  int trials = 200;
  std::uint64_t seed = 1;
  Tolerances tol{};
  std::string out;
  std::vector<std::string> verifiers = all_verifiers();
  bool pipeline = true;

  void validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); };
    if (n < 2) bad("n must be >= 2");
    if (k <= 0 || k >= n) bad("need 0 < k < n");
    if (m < 0) bad("m must be >= 0");
    if (trials < 1) bad("trials must be >= 1");
    if (perturb_eps < 0.0) bad("perturb_eps must be >= 0");
    static const std::set<std::string> kinds_ok{"unitary", "antiunitary", "identity", "jordan_block", "complement"};
    if (spec_path.empty() && !kinds_ok.contains(kind)) bad("unknown kind '" + kind + "'");
    for (const auto& v : verifiers) {
      if (std::find(all_verifiers().begin(), all_verifiers().end(), v) == all_verifiers().end()) {
        bad("unknown verifier '" + v + "'");
      }
    }
  }
};

/// Tolerance overrides from WIGNER_EPS_{HERM,LIN,PROJ,COMM,VERIFY,JORDAN,SPLIT}.
inline Tolerances tolerances_from_environment(Tolerances tol = {}) {
  const std::pair<const char*, double*> vars[] = {
      {"WIGNER_EPS_HERM", &tol.herm},     {"WIGNER_EPS_LIN", &tol.lin},       {"WIGNER_EPS_PROJ", &tol.proj},
      {"WIGNER_EPS_COMM", &tol.comm},     {"WIGNER_EPS_VERIFY", &tol.verify}, {"WIGNER_EPS_JORDAN", &tol.jordan},
      {"WIGNER_EPS_SPLIT", &tol.split},
  };
  for (const auto& [name, slot] : vars) {
    if (const char* v = std::getenv(name)) {
      char* end = nullptr;
      const double x = std::strtod(v, &end);
      if (end == v || *end != '\0' || !(x > 0.0)) {
        throw Error(ErrorCode::ConfigInvalid, std::string(name) + " must be a positive number");
      }
      *slot = x;
    }
  }
  return tol;
}

namespace detail {

inline Json tolerances_to_json(const Tolerances& t) {
  return Json{{"herm", t.herm},     {"lin", t.lin},       {"proj", t.proj},  {"comm", t.comm},
              {"verify", t.verify}, {"jordan", t.jordan}, {"split", t.split}};
}

inline void tolerances_from_json(const Json& j, Tolerances& t) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, "tolerances must be an object");
  const std::map<std::string, double*> slots{{"herm", &t.herm},     {"lin", &t.lin},       {"proj", &t.proj},
                                             {"comm", &t.comm},     {"verify", &t.verify}, {"jordan", &t.jordan},
                                             {"split", &t.split}};
  for (const auto& [key, value] : j.items()) {
    auto it = slots.find(key);
    if (it == slots.end()) throw Error(ErrorCode::ConfigInvalid, "unknown tolerance key '" + key + "'");
    if (!value.is_number() || !(value.get<double>() > 0.0)) {
      throw Error(ErrorCode::ConfigInvalid, "tolerance '" + key + "' must be a positive number");
    }
    *it->second = value.get<double>();
  }
}

}  // namespace detail

inline Json config_to_json(const SuiteConfig& c) {
  Json j{{"n", c.n},
         {"k", c.k},
         {"m", c.m},
         {"kind", c.kind},
         {"target_n", c.target_n},
         {"perturb_eps", c.perturb_eps},
         {"trials", c.trials},
         {"seed", c.seed},
         {"tolerances", detail::tolerances_to_json(c.tol)},
         {"verifiers", c.verifiers},
         {"pipeline", c.pipeline}};
  if (!c.spec_path.empty()) j["spec"] = c.spec_path;
  return j;
}

/// Applies the keys of `j` onto `c`; unknown keys are rejected.
inline void apply_config_json(const Json& j, SuiteConfig& c) {
  if (!j.is_object()) throw Error(ErrorCode::ConfigInvalid, "config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "n") c.n = value.get<int>();
      else if (key == "k") c.k = value.get<int>();
      else if (key == "m") c.m = value.get<int>();
      else if (key == "kind") c.kind = value.get<std::string>();
      else if (key == "spec") c.spec_path = value.get<std::string>();
      else if (key == "target_n") c.target_n = value.get<int>();
      else if (key == "perturb_eps") c.perturb_eps = value.get<double>();
      else if (key == "trials") c.trials = value.get<int>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "tolerances") detail::tolerances_from_json(value, c.tol);
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "verifiers") c.verifiers = value.get<std::vector<std::string>>();
      else if (key == "pipeline") c.pipeline = value.get<bool>();
      else throw Error(ErrorCode::ConfigInvalid, "unknown config key '" + key + "'");
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ConfigInvalid, e.what());
  }
}

inline SuiteConfig load_config(const std::string& path, SuiteConfig base = {}) {
  const std::string text = detail::read_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ConfigInvalid, path + ": " + e.what());
  }
  apply_config_json(j, base);
  return base;
}

/// Builds the map described by the config (kind + seed, or a spec file).
inline SymmetryMapSpec synthesize_spec(const SuiteConfig& c) {
  if (!c.spec_path.empty()) {
    SymmetryMapSpec spec = load_spec(c.spec_path);
    if (spec.source().n() != c.n || spec.source().k() != c.k) {
      throw Error(ErrorCode::ConfigInvalid, "spec file source (n, k) does not match the config");
    }
    return spec;
  }
  const GrassmannIndex g(AlgebraContext(c.n), c.k);
  SeededRandomSource rng(c.seed);
  std::optional<SymmetryMapSpec> spec;
  if (c.kind == "unitary") spec = make_unitary_map(g, haar_unitary(c.n, rng));
  else if (c.kind == "antiunitary") spec = make_antiunitary_map(g, haar_unitary(c.n, rng));
  else if (c.kind == "identity") spec = make_identity_map(g);
  else if (c.kind == "jordan_block") spec = make_jordan_block_map(g, c.target_n > 0 ? c.target_n : 2 * c.n, rng);
  else if (c.kind == "complement") spec = make_complement_map(g);
  else throw Error(ErrorCode::ConfigInvalid, "unknown kind '" + c.kind + "'");
  if (c.perturb_eps > 0.0) spec = perturb_map(*spec, c.perturb_eps, rng);
  return *spec;
}

struct SuiteReport {
  Json json;  // the full report, including "timing"

  bool all_passed() const {
    for (const auto& s : json.at("stages")) {
      if (s.at("status") == "fail") return false;
    }
    if (json.contains("pipeline") && json["pipeline"].is_object()) {
      for (const auto& s : json["pipeline"].at("stages")) {
        if (s.at("status") == "fail") return false;
      }
    }
    return true;
  }

  /// The report without timing fields, for golden comparison.
  Json without_timing() const {
    Json j = json;
    j.erase("timing");
    return j;
  }
};

inline Json counterexample_to_json(const Counterexample& c) {
  return Json{{"label", c.label},
              {"deviation", c.deviation},
              {"first", matrix_to_json(c.first)},
              {"second", matrix_to_json(c.second)}};
}

inline Json property_report_to_json(const PropertyReport& r) {
  Json cex = Json::array();
  for (const auto& c : r.counterexamples) cex.push_back(counterexample_to_json(c));
  return Json{{"name", r.name},
              {"status", to_string(r.status)},
              {"trials", r.trials},
              {"failures", r.failures},
              {"max_deviation", r.max_deviation},
              {"tolerance", r.tolerance},
              {"note", r.note},
              {"counterexamples", std::move(cex)}};
}

inline Json reconstruction_to_json(const ReconstructionResult& r) {
  Json stages = Json::array();
  for (const auto& s : r.diagnostics) stages.push_back(property_report_to_json(s));
  Json j{{"verdict", to_string(r.verdict)},
         {"max_conjugation_residual", r.max_conjugation_residual},
         {"excluded_trace_value", r.excluded_trace_value},
         {"complement_reduced", r.complement_reduced},
         {"implementer", r.implementer ? matrix_to_json(*r.implementer) : Json(nullptr)},
         {"stages", std::move(stages)}};
  if (r.decomposition) {
    j["rank_e1"] = r.decomposition->e1.rank();
    j["rank_e2"] = r.decomposition->e2.rank();
  }
  return j;
}

namespace detail {

inline PropertyReport skipped(const std::string& name, const std::string& why) {
  PropertyReport r{.name = name, .status = Status::skipped};
  r.note = why;
  return r;
}

/// tau(PQP) vs tau(range(PQP)) over commuting and generic pairs.
inline PropertyReport range_trace_suite(const GrassmannIndex& g, int trials, SeededRandomSource& rng,
                                        const Tolerances& tol) {
  PropertyReport r{.name = "range_trace", .tolerance = tol.comm};
  const int lo = std::max(0, 2 * g.k() - g.n());
  for (int t = 0; t < trials; ++t) {
    ++r.trials;
    const bool commuting = t % 2 == 0;
    auto [p, q] = commuting ? sample_commuting_pair(g, rng.uniform_int(lo, g.k()), rng)
                            : std::pair{sample_projection(g, rng), sample_projection(g, rng)};
    const auto c = range_trace_criterion(p, q, tol.comm);
    const double gap = c.rhs - c.lhs;
    if (commuting) r.observe(std::abs(gap));
    const bool ok = commuting ? c.commute_flag && std::abs(gap) <= tol.comm
                              : (c.lhs <= c.rhs + tol.proj && c.commute_flag == commutes(p, q, tol.comm));
    if (!ok) r.record_failure({commuting ? "commuting" : "generic", p.matrix(), q.matrix(), gap});
  }
  return r;
}

/// reduce_rank under independent random families: agreement and tau(P_i P_j) = (m-1)k/m.
inline PropertyReport reduce_rank_suite(const SymmetryMapSpec& spec, int m, int trials, SeededRandomSource& rng,
                                        const Tolerances& tol) {
  PropertyReport r{.name = "reduce_rank", .tolerance = tol.proj};
  const int k = spec.source().k();
  const int n = spec.source().n();
  r.note = "m = " + std::to_string(m);
  const Projection q = sample_projection(n, k / m, rng);
  const double expected_overlap = (m - 1.0) * k / m;
  Matrix reference;
  try {
    for (int t = 0; t < trials; ++t) {
      ++r.trials;
      RankReduction red = reduce_rank_raw(spec, q, m, rng);
      for (std::size_t i = 0; i < red.family.size(); ++i) {
        for (std::size_t j = i + 1; j < red.family.size(); ++j) {
          const double dev = std::abs(transition_probability(red.family[i], red.family[j]) - expected_overlap);
          r.observe(dev);
          if (dev > tol.proj) r.record_failure({"P_i,P_j", red.family[i].matrix(), red.family[j].matrix(), dev});
        }
      }
      const Matrix value = reduce_rank(spec, q, m, rng, tol).matrix();
      if (t == 0) {
        reference = value;
      } else {
        const double dev = (value - reference).norm();
        r.observe(dev);
        if (dev > tol.proj) r.record_failure({"families", reference, value, dev});
      }
    }
  } catch (const NotAProjectionError& e) {
    r.note += std::string("; ") + e.what();
    r.record_failure({"Q,raw", q.matrix(), e.raw(), 0.0});
  } catch (const Error& e) {
    r.note += std::string("; ") + e.what();
    r.record_failure({"Q", q.matrix(), Matrix(), 0.0});
  }
  return r;
}

}  // namespace detail

inline SuiteReport run_suite(const SuiteConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const SymmetryMapSpec spec = synthesize_spec(config);
  const GrassmannIndex g = spec.source();
  SeededRandomSource rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  const Tolerances& tol = config.tol;

  Json stages = Json::array();
  auto push = [&](const PropertyReport& r) { stages.push_back(property_report_to_json(r)); };
  for (const auto& v : config.verifiers) {
    // Each verifier draws from its own stream so the selection does not shift the others.
    SeededRandomSource vr(rng.next_seed());
    if (v == "transition") {
      push(verify_transition_preserving(spec, g, config.trials, vr, tol));
    } else if (v == "orthogonality") {
      push(verify_orthogonality_iff(spec, g, config.trials, vr, tol));
    } else if (v == "commutativity") {
      push(verify_commutativity_preserved(spec, g, config.trials, vr, tol));
    } else if (v == "inclusion_orth") {
      if (2 * g.k() > g.n()) push(detail::skipped("inclusion_orth", "needs 2k <= n"));
      else push(verify_inclusion_orth(spec, g, config.trials, vr, tol));
    } else if (v == "inclusion_join") {
      push(verify_inclusion_join(spec, g, config.trials, vr, tol));
    } else if (v == "range_trace") {
      push(detail::range_trace_suite(g, config.trials, vr, tol));
    } else if (v == "reduce_rank") {
      const int m = config.m > 0 ? config.m : g.k();
      if (m < 2 || g.k() % m != 0 || g.k() + g.k() / m > g.n()) {
        push(detail::skipped("reduce_rank", "needs m >= 2, m | k and k + k/m <= n"));
      } else {
        push(detail::reduce_rank_suite(spec, m, std::min(config.trials, 10), vr, tol));
      }
    } else if (v == "well_definedness") {
      auto shared = std::make_shared<const SymmetryMapSpec>(spec);
      const Projection p = sample_projection(g.n(), std::max(2, g.n() / 2), vr);
      try {
        const RankOneMap map =
            g.k() == 1 ? rank_one_map_from_spec(shared) : rank_one_map_via_reduction(shared, vr.next_seed(), tol);
        push(well_definedness_check(map, p, std::min(config.trials, 10), vr, tol));
      } catch (const Error& e) {
        PropertyReport r{.name = "well_definedness", .tolerance = tol.proj};
        r.note = e.what();
        r.record_failure({"P", p.matrix(), Matrix(), 0.0});
        push(r);
      }
    }
  }

  Json report{{"format", "wigner-report"},
              {"version", 1},
              {"version_stamp", kVersionStamp},
              {"seed", config.seed},
              {"config", config_to_json(config)},
              {"map_kind", spec.kind_name()},
              {"stages", std::move(stages)}};
  if (config.pipeline) {
    PipelineConfig pc;
    pc.seed = rng.next_seed();
    pc.trials = config.trials;
    pc.tol = tol;
    report["pipeline"] = reconstruction_to_json(run_full_pipeline(spec, g, pc));
  } else {
    report["pipeline"] = nullptr;
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  report["timing"] = Json{{"total_ms", ms}};
  SuiteReport out{std::move(report)};
  if (!config.out.empty()) detail::write_file(config.out, out.json.dump(2) + "\n");
  return out;
}

/// Human-readable rendering of a stored report.
inline std::string render_report(const Json& report) {
  std::ostringstream os;
  auto line = [&](const Json& s) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "  %-26s %-8s trials=%-5d failures=%-4d max_dev=%.3e",
                  s.at("name").get<std::string>().c_str(), s.at("status").get<std::string>().c_str(),
                  s.at("trials").get<int>(), s.at("failures").get<int>(), s.at("max_deviation").get<double>());
    os << buf;
    const auto note = s.value("note", std::string());
    if (!note.empty()) os << "  (" << note << ")";
    os << '\n';
  };
  os << report.value("version_stamp", std::string("?")) << "  seed=" << report.value("seed", 0ULL)
     << "  map=" << report.value("map_kind", std::string("?")) << '\n';
  if (report.contains("config")) {
    const Json& c = report["config"];
    os << "n=" << c.value("n", 0) << " k=" << c.value("k", 0) << " trials=" << c.value("trials", 0) << '\n';
  }
  os << "verifiers:\n";
  for (const auto& s : report.at("stages")) line(s);
  if (report.contains("pipeline") && report["pipeline"].is_object()) {
    const Json& p = report["pipeline"];
    os << "pipeline: verdict=" << p.at("verdict").get<std::string>();
    char buf[64];
    std::snprintf(buf, sizeof(buf), " residual=%.3e", p.value("max_conjugation_residual", 0.0));
    os << buf;
    if (p.value("excluded_trace_value", false)) os << " [excluded trace value]";
    if (p.value("complement_reduced", false)) os << " [complement-reduced]";
    os << '\n';
    for (const auto& s : p.at("stages")) line(s);
  }
  return os.str();
}

}  // namespace wigner
