#pragma once

#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mdrpp/error.hpp"
#include "mdrpp/instance.hpp"
#include "mdrpp/routing.hpp"

namespace mdrpp {

// Failed vehicles (0-based ids) and their failure times.
struct FailureScenario {
  std::string name;
  std::map<int, Time> failures;
};

// Failures may not land inside a recharge; a time strictly inside the
// recharge after trip i is moved to the instant trip i+1 starts.
inline Time normalize_failure_time(const FleetPlan& plan, int vehicle, Time f) {
  const Route& r = plan.routes[static_cast<std::size_t>(vehicle)];
  Time clock;
  for (std::size_t i = 0; i + 1 < r.trips.size(); ++i) {
    clock += r.trips[i].duration;
    const Time resume = clock + plan.recharge;
    if (f > clock && f < resume) return resume;
    clock = resume;
  }
  return f;
}

// Random failure scenarios for a reference plan. Draws N_F in [1, K-1];
// scenario j picks j vehicles with replacement (duplicates collapse), each
// failing at a uniform millitime in [1, y_k]. Vehicles with an empty route
// are never picked.
inline std::vector<FailureScenario> create_failure_scenarios(const Instance& inst,
                                                             const FleetPlan& plan,
                                                             std::uint64_t seed) {
  const int k = inst.vehicle_count;
  if (k < 2) throw ValidationError("cannot create failure scenario with fewer than two vehicles");
  std::vector<int> eligible;
  for (int v = 0; v < k; ++v) {
    if (plan.completion_time(static_cast<std::size_t>(v)) > Time{}) eligible.push_back(v);
  }
  if (eligible.empty()) throw ValidationError("cannot create failure scenario: no vehicle moves");

  std::mt19937_64 rng(seed);
  const int count = std::uniform_int_distribution<int>(1, k - 1)(rng);
  std::vector<FailureScenario> out;
  for (int j = 1; j <= count; ++j) {
    std::set<int> failed;
    for (int i = 0; i < j; ++i) {
      failed.insert(eligible[std::uniform_int_distribution<std::size_t>(0, eligible.size() - 1)(rng)]);
    }
    FailureScenario s;
    s.name = inst.name + ".f" + std::to_string(j);
    for (int v : failed) {
      const std::int64_t y = plan.completion_time(static_cast<std::size_t>(v)).count();
      const Time f = Time::ticks(std::uniform_int_distribution<std::int64_t>(1, y)(rng));
      s.failures[v] = normalize_failure_time(plan, v, f);
    }
    out.push_back(std::move(s));
  }
  return out;
}

// `SCENARIO <name>` / `FAILURES <count>` / `<vehicle_id> <failure_time>`;
// vehicle ids are 1-based in text.
inline std::string format_scenarios(const std::vector<FailureScenario>& scenarios) {
  std::ostringstream os;
  for (const auto& s : scenarios) {
    os << "SCENARIO " << s.name << '\n';
    os << "FAILURES " << s.failures.size() << '\n';
    for (const auto& [v, f] : s.failures) os << v + 1 << ' ' << f << '\n';
  }
  return os.str();
}

inline std::vector<FailureScenario> parse_scenarios(std::string_view text, int vehicle_count) {
  const auto lines = detail::tokenize_lines(text);
  std::vector<FailureScenario> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& [line, tok] = lines[i];
    if (tok[0] != "SCENARIO" || tok.size() != 2) throw ParseError("expected 'SCENARIO <name>'", line);
    FailureScenario s;
    s.name = tok[1];
    if (++i >= lines.size() || lines[i].second[0] != "FAILURES" || lines[i].second.size() != 2) {
      throw ParseError("expected 'FAILURES <count>' after SCENARIO", line);
    }
    const long long n = detail::parse_int(lines[i].second[1], lines[i].first, "failure count");
    for (long long j = 0; j < n; ++j) {
      if (++i >= lines.size()) throw ParseError("failure list ends early", line);
      const auto& [fline, ftok] = lines[i];
      if (ftok.size() != 2) throw ParseError("expected '<vehicle_id> <failure_time>'", fline);
      const long long v = detail::parse_int(ftok[0], fline, "vehicle id");
      if (v < 1 || v > vehicle_count) throw ParseError("vehicle id out of range", fline);
      const Time f = detail::parse_time_at(ftok[1], fline);
      if (f <= Time{}) throw ParseError("failure time must be positive", fline);
      if (!s.failures.emplace(static_cast<int>(v - 1), f).second) {
        throw ParseError("vehicle fails twice in one scenario", fline);
      }
    }
    if (static_cast<int>(s.failures.size()) >= vehicle_count) {
      throw ValidationError("scenario " + s.name + " fails every vehicle");
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace mdrpp
