#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ballcover/space.hpp"

namespace ballcover {

enum class Verdict { pass, fail, not_applicable };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_applicable: return "not_applicable";
  }
  return "?";
}

inline constexpr std::size_t kMaxWitnesses = 16;

/// Outcome of one audit pass. `witnesses` holds the first failing sample
/// points by sample index. `detail` carries audit-specific fields.
struct AuditReport {
  std::string kind;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::size_t failures = 0;
  std::vector<Vector> witnesses;
  double residual_max = 0.0;
  Verdict verdict = Verdict::pass;
  double runtime_ms = 0.0;
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();

  bool passed() const { return verdict == Verdict::pass; }
};

// Per-chunk accumulator; merging chunks in index order makes the reduction
// independent of which thread evaluated which chunk.
struct Tally {
  std::size_t failures = 0;
  double residual_max = 0.0;
  std::vector<Vector> witnesses;

  void record(double residual, bool failed, const Vector& at) {
    residual_max = std::max(residual_max, residual);
    if (failed) {
      ++failures;
      if (witnesses.size() < kMaxWitnesses) witnesses.push_back(at);
    }
  }

  void merge(const Tally& o) {
    failures += o.failures;
    residual_max = std::max(residual_max, o.residual_max);
    for (const auto& w : o.witnesses) {
      if (witnesses.size() >= kMaxWitnesses) break;
      witnesses.push_back(w);
    }
  }
};

inline void apply_tally(AuditReport& r, const Tally& t) {
  r.failures = t.failures;
  r.residual_max = t.residual_max;
  r.witnesses = t.witnesses;
  r.verdict = t.failures == 0 ? Verdict::pass : Verdict::fail;
}

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace ballcover
