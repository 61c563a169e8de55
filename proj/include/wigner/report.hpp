#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "wigner/numeric.hpp"

namespace wigner {

/// A serialized witness: for verifier failures this is the offending input pair.
struct Counterexample {
  std::string label;
  Matrix first;
  Matrix second;
  double deviation = 0.0;
};

enum class Status { passed, failed, skipped };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::passed: return "pass";
    case Status::failed: return "fail";
    case Status::skipped: return "skipped";
  }
  return "unknown";
}

struct PropertyReport {
  std::string name;
  Status status = Status::passed;
  int trials = 0;
  int failures = 0;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::string note;
  std::vector<Counterexample> counterexamples;

  bool passed() const { return status == Status::passed; }

  static constexpr std::size_t kMaxCounterexamples = 3;

  void record_failure(Counterexample c) {
    ++failures;
    status = Status::failed;
    if (counterexamples.size() < kMaxCounterexamples) counterexamples.push_back(std::move(c));
  }

  void observe(double deviation) { max_deviation = std::max(max_deviation, deviation); }

  /// Merges a partial report over disjoint trials (max of deviations, sum of counts).
  void merge(const PropertyReport& other) {
    trials += other.trials;
    failures += other.failures;
    max_deviation = std::max(max_deviation, other.max_deviation);
    if (other.status == Status::failed) status = Status::failed;
    for (const auto& c : other.counterexamples) {
      if (counterexamples.size() < kMaxCounterexamples) counterexamples.push_back(c);
    }
  }
};

}  // namespace wigner
