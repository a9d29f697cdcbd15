#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace homog {

/// One named check inside a report. A "violation" always carries a
/// replayable witness description.
struct Check {
  std::string name;
  std::string params;
  std::string status;   // ok | violation | inconclusive
  std::string witness;  // replay data for violations, tallies otherwise
  std::int64_t runtime_ms = 0;
};

struct Report {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<Check> checks;

  bool any_violation() const {
    for (const auto& c : checks)
      if (c.status == "violation") return true;
    return false;
  }
  bool any_inconclusive() const {
    for (const auto& c : checks)
      if (c.status == "inconclusive") return true;
    return false;
  }
  int exit_code() const { return any_violation() ? 1 : (any_inconclusive() ? 2 : 0); }

  /// Canonical JSON: checks sorted by name; timings only on request so that
  /// identical (command, seed, version) gives identical bytes.
  nlohmann::ordered_json to_json(bool with_timings = false) const {
    nlohmann::ordered_json out;
    out["version"] = "v1";
    out["command"] = command;
    out["seed"] = seed;
    std::vector<Check> sorted = checks;
    std::sort(sorted.begin(), sorted.end(),
              [](const Check& a, const Check& b) { return a.name < b.name; });
    out["checks"] = nlohmann::ordered_json::array();
    for (const Check& c : sorted) {
      nlohmann::ordered_json jc;
      jc["name"] = c.name;
      jc["params"] = c.params;
      jc["status"] = c.status;
      if (!c.witness.empty()) jc["witness"] = c.witness;
      if (with_timings) jc["runtime_ms"] = c.runtime_ms;
      out["checks"].push_back(jc);
    }
    return out;
  }
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  std::int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace homog
