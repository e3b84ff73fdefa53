#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <string>
#include <string_view>

namespace prlqual {

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace detail

// YYYY-MM-DD with real calendar-date semantics (month lengths, leap years).
inline bool is_iso_date(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  if (!detail::all_digits(s.substr(0, 4)) || !detail::all_digits(s.substr(5, 2)) ||
      !detail::all_digits(s.substr(8, 2)))
    return false;
  std::chrono::year_month_day ymd{
      std::chrono::year(detail::to_int(s.substr(0, 4))),
      std::chrono::month(static_cast<unsigned>(detail::to_int(s.substr(5, 2)))),
      std::chrono::day(static_cast<unsigned>(detail::to_int(s.substr(8, 2))))};
  return ymd.ok();
}

// RFC 3339 timestamp: date-time with optional fractional seconds and either a
// 'Z' suffix or a numeric offset. Leap-second 60 is accepted.
inline bool is_rfc3339_instant(std::string_view s) {
  if (s.size() < 20) return false;
  if (!is_iso_date(s.substr(0, 10))) return false;
  if (s[10] != 'T' && s[10] != 't') return false;
  std::string_view rest = s.substr(11);
  if (rest.size() < 8 || rest[2] != ':' || rest[5] != ':') return false;
  if (!detail::all_digits(rest.substr(0, 2)) || !detail::all_digits(rest.substr(3, 2)) ||
      !detail::all_digits(rest.substr(6, 2)))
    return false;
  int hh = detail::to_int(rest.substr(0, 2));
  int mm = detail::to_int(rest.substr(3, 2));
  int ss = detail::to_int(rest.substr(6, 2));
  if (hh > 23 || mm > 59 || ss > 60) return false;
  std::string_view tail = rest.substr(8);
  if (!tail.empty() && tail[0] == '.') {
    std::size_t i = 1;
    while (i < tail.size() && tail[i] >= '0' && tail[i] <= '9') ++i;
    if (i == 1) return false;
    tail = tail.substr(i);
  }
  if (tail.empty()) return false;
  if (tail == "Z" || tail == "z") return true;
  if (tail.size() != 6 || (tail[0] != '+' && tail[0] != '-') || tail[3] != ':') return false;
  if (!detail::all_digits(tail.substr(1, 2)) || !detail::all_digits(tail.substr(4, 2)))
    return false;
  return detail::to_int(tail.substr(1, 2)) <= 23 && detail::to_int(tail.substr(4, 2)) <= 59;
}

// Current UTC instant at second resolution, e.g. "2026-03-01T09:15:00Z".
inline std::string utc_now_instant() {
  std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[80];  // generous: tm fields are ints, the formatter may expand
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

// Calendar-date portion of an RFC 3339 instant.
inline std::string date_part(std::string_view instant) {
  return std::string(instant.substr(0, instant.size() < 10 ? instant.size() : 10));
}

}  // namespace prlqual
