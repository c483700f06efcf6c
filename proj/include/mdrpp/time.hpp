#pragma once

#include <charconv>
#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

#include "mdrpp/error.hpp"

namespace mdrpp {

// Fixed-point time: one time unit is 1000 millitime ticks. All durations,
// capacities, recharge and failure times are held in this type so that
// trip and route accounting is exact.
class Time {
 public:
  static constexpr std::int64_t kTicksPerUnit = 1000;

  constexpr Time() = default;
  static constexpr Time ticks(std::int64_t t) { return Time(t); }
  static constexpr Time units(std::int64_t u) { return Time(u * kTicksPerUnit); }
  static constexpr Time infinity() {
    return Time(std::numeric_limits<std::int64_t>::max() / 4);
  }

  constexpr std::int64_t count() const { return ticks_; }
  constexpr bool is_infinite() const { return ticks_ >= infinity().ticks_; }
  double as_units() const {
    return static_cast<double>(ticks_) / static_cast<double>(kTicksPerUnit);
  }

  constexpr Time& operator+=(Time o) {
    ticks_ += o.ticks_;
    return *this;
  }
  constexpr Time& operator-=(Time o) {
    ticks_ -= o.ticks_;
    return *this;
  }
  friend constexpr Time operator+(Time a, Time b) { return Time(a.ticks_ + b.ticks_); }
  friend constexpr Time operator-(Time a, Time b) { return Time(a.ticks_ - b.ticks_); }
  friend constexpr Time operator*(Time a, std::int64_t k) { return Time(a.ticks_ * k); }
  friend constexpr Time operator*(std::int64_t k, Time a) { return Time(a.ticks_ * k); }
  friend constexpr auto operator<=>(Time, Time) = default;

 private:
  constexpr explicit Time(std::int64_t t) : ticks_(t) {}
  std::int64_t ticks_ = 0;
};

// Parses a decimal literal with at most three fractional digits ("6.2",
// "-1.125", "40"). Anything finer than a millitime tick is rejected rather
// than rounded.
inline Time parse_time(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  const auto dot = s.find('.');
  const std::string_view whole = s.substr(0, dot);
  const std::string_view frac =
      dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() && frac.empty()) {
    throw ParseError("invalid time literal '" + std::string(text) + "'");
  }
  if (frac.size() > 3) {
    throw ParseError("time literal '" + std::string(text) +
                     "' has more than 3 fractional digits");
  }
  auto digits_only = [](std::string_view v) {
    for (char c : v) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };
  if (!digits_only(whole) || !digits_only(frac) ||
      (dot != std::string_view::npos && frac.empty() && whole.empty())) {
    throw ParseError("invalid time literal '" + std::string(text) + "'");
  }
  std::int64_t w = 0;
  if (!whole.empty()) {
    auto [ptr, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
    if (ec != std::errc{}) {
      throw ParseError("time literal out of range '" + std::string(text) + "'");
    }
  }
  std::int64_t f = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    f = f * 10 + (i < frac.size() ? frac[i] - '0' : 0);
  }
  const std::int64_t t = w * Time::kTicksPerUnit + f;
  return Time::ticks(negative ? -t : t);
}

// Shortest decimal rendering that parses back to the same value.
inline std::string format_time(Time t) {
  if (t.is_infinite()) return "inf";
  std::int64_t v = t.count();
  std::string out;
  if (v < 0) {
    out.push_back('-');
    v = -v;
  }
  out += std::to_string(v / Time::kTicksPerUnit);
  std::int64_t frac = v % Time::kTicksPerUnit;
  if (frac != 0) {
    std::string digits = std::to_string(frac);
    digits.insert(0, 3 - digits.size(), '0');
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    out += '.';
    out += digits;
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, Time t) { return os << format_time(t); }

}  // namespace mdrpp
