#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mdrpp/error.hpp"
#include "mdrpp/routing.hpp"
#include "mdrpp/time.hpp"

namespace mdrpp {

// Exact ratio num/den with den > 0.
class Rational {
 public:
  Rational(std::int64_t num = 0, std::int64_t den = 1) : num_(num), den_(den) {
    if (den_ == 0) throw ValidationError("zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  friend bool operator==(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ == static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator<(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
  }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  // Value in hundredths, rounded half up.
  std::int64_t hundredths() const {
    const __int128 scaled = static_cast<__int128>(num_) * 200 + den_;
    const __int128 d = static_cast<__int128>(den_) * 2;
    __int128 q = scaled / d;
    if (scaled % d != 0 && scaled < 0) --q;
    return static_cast<std::int64_t>(q);
  }

  std::string str2() const {
    const std::int64_t h = hundredths();
    const std::int64_t a = h < 0 ? -h : h;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%lld.%02lld", h < 0 ? "-" : "", static_cast<long long>(a / 100),
                  static_cast<long long>(a % 100));
    return buf;
  }

 private:
  std::int64_t num_;
  std::int64_t den_;
};

inline Rational percent_increase(Time base, Time now) {
  if (base <= Time{}) throw ValidationError("percent increase needs a positive base");
  return Rational((now - base).count() * 100, base.count());
}

inline Rational competitive_ratio(Time beta_ca, Time beta_opt_f) {
  if (beta_opt_f <= Time{}) throw ValidationError("competitive ratio needs a positive offline optimum");
  return Rational(beta_ca.count(), beta_opt_f.count());
}

struct BoundInputs {
  int n_trips = 1;  // trips of the most utilized vehicle
  int vehicles = 1;
  Time capacity;
  Time recharge;
  Time beta_opt_f;
};

// 1 + N_t (K - 1) 3 (C + R_T) / beta_opt_f. nullopt ("not applicable") when
// some depot pair is not one trip apart.
inline std::optional<Rational> theoretical_bound(const BoundInputs& b, bool single_trip_complete) {
  if (b.n_trips < 1) throw ValidationError("bound needs at least one trip on the most utilized vehicle");
  if (b.vehicles < 1) throw ValidationError("bound needs at least one vehicle");
  if (!single_trip_complete || b.beta_opt_f <= Time{}) return std::nullopt;
  const Time extra = (b.capacity + b.recharge) * (3LL * b.n_trips * (b.vehicles - 1));
  return Rational((b.beta_opt_f + extra).count(), b.beta_opt_f.count());
}

// argmax of y_k, lower id on ties.
inline int most_utilized_vehicle(const FleetPlan& plan) {
  int best = 0;
  for (std::size_t k = 1; k < plan.size(); ++k) {
    if (plan.completion_time(k) > plan.completion_time(static_cast<std::size_t>(best))) best = static_cast<int>(k);
  }
  return best;
}

struct ScenarioMetrics {
  std::string scenario;
  int nodes = 0;
  int edges = 0;
  int required = 0;
  Time capacity;
  Time recharge;
  int vehicles = 0;
  int depots = 0;
  int failures = 0;
  std::optional<Time> beta_opt;
  std::optional<Time> beta_opt_f;
  std::optional<Time> beta_sa;
  std::optional<Time> beta_ca;
  std::optional<Rational> rho_bound;
  std::optional<double> et_opt;
  std::optional<double> et_opt_f;
  std::optional<double> et_sa;
  std::optional<double> et_ca;

  std::optional<Rational> pct_opt_f() const {
    if (!beta_opt || !beta_opt_f) return std::nullopt;
    return percent_increase(*beta_opt, *beta_opt_f);
  }
  std::optional<Rational> pct_ca() const {
    if (!beta_sa || !beta_ca) return std::nullopt;
    return percent_increase(*beta_sa, *beta_ca);
  }
  std::optional<Rational> rho() const {
    if (!beta_ca || !beta_opt_f) return std::nullopt;
    return competitive_ratio(*beta_ca, *beta_opt_f);
  }
};

inline const char* kReportHeader =
    "scenario,|N|,|E|,|E_u|,C,R_T,K,|N_d|,|F|,beta_opt,et_opt,beta_opt_f,pct_opt_f,et_opt_f,"
    "beta_sa,et_sa,beta_ca,pct_ca,rho,rho_bound,et_ca";

namespace detail {

inline std::string cell(const std::optional<Time>& t) { return t ? format_time(*t) : "-"; }
inline std::string cell(const std::optional<Rational>& r) { return r ? r->str2() : "-"; }
inline std::string cell(const std::optional<double>& s) {
  if (!s) return "-";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.2f", *s);
  return buf;
}

inline std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> out(1);
  for (char c : line) {
    if (c == ',') out.emplace_back();
    else if (c != '\r') out.back() += c;
  }
  return out;
}

}  // namespace detail

inline std::string format_report(const std::vector<ScenarioMetrics>& rows) {
  std::ostringstream os;
  os << kReportHeader << '\n';
  for (const auto& r : rows) {
    using detail::cell;
    os << r.scenario << ',' << r.nodes << ',' << r.edges << ',' << r.required << ',' << r.capacity << ','
       << r.recharge << ',' << r.vehicles << ',' << r.depots << ',' << r.failures << ',' << cell(r.beta_opt)
       << ',' << cell(r.et_opt) << ',' << cell(r.beta_opt_f) << ',' << cell(r.pct_opt_f()) << ','
       << cell(r.et_opt_f) << ',' << cell(r.beta_sa) << ',' << cell(r.et_sa) << ',' << cell(r.beta_ca)
       << ',' << cell(r.pct_ca()) << ',' << cell(r.rho()) << ',' << cell(r.rho_bound) << ','
       << cell(r.et_ca) << '\n';
  }
  return os.str();
}

// Reads a report back. Derived columns (percentages, rho) are ignored since
// they are recomputed from the beta columns; rho_bound is kept as printed.
inline std::vector<ScenarioMetrics> parse_report(std::string_view text) {
  std::vector<ScenarioMetrics> rows;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty() || line == "\r") continue;
    if (line_no == 1) {
      if (line.substr(0, 9) != "scenario,") throw ParseError("expected report header", line_no);
      continue;
    }
    const auto c = detail::split_csv(line);
    if (c.size() != 21) throw ParseError("expected 21 columns, got " + std::to_string(c.size()), line_no);
    auto integer = [&](const std::string& s) {
      return static_cast<int>(detail::parse_int(s, line_no, "count"));
    };
    auto time = [&](const std::string& s) -> std::optional<Time> {
      if (s == "-") return std::nullopt;
      return detail::parse_time_at(s, line_no);
    };
    auto seconds = [&](const std::string& s) -> std::optional<double> {
      if (s == "-") return std::nullopt;
      try {
        return std::stod(s);
      } catch (const std::exception&) {
        throw ParseError("bad execution time '" + s + "'", line_no);
      }
    };
    ScenarioMetrics m;
    m.scenario = c[0];
    m.nodes = integer(c[1]);
    m.edges = integer(c[2]);
    m.required = integer(c[3]);
    m.capacity = detail::parse_time_at(c[4], line_no);
    m.recharge = detail::parse_time_at(c[5], line_no);
    m.vehicles = integer(c[6]);
    m.depots = integer(c[7]);
    m.failures = integer(c[8]);
    m.beta_opt = time(c[9]);
    m.et_opt = seconds(c[10]);
    m.beta_opt_f = time(c[11]);
    m.et_opt_f = seconds(c[13]);
    m.beta_sa = time(c[14]);
    m.et_sa = seconds(c[15]);
    m.beta_ca = time(c[16]);
    if (c[19] != "-") {
      const Time b = detail::parse_time_at(c[19], line_no);
      m.rho_bound = Rational(b.count(), Time::units(1).count());
    }
    m.et_ca = seconds(c[20]);
    rows.push_back(std::move(m));
  }
  return rows;
}

}  // namespace mdrpp
