#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include <json.hpp>

#include "prlqual/errors.hpp"

namespace prlqual {

using json = nlohmann::json;

// Canonical form, compact: keys sorted (nlohmann's default object storage),
// no insignificant whitespace. Used for hashing.
inline std::string canonical_dump(const json& j) { return j.dump(); }

// Canonical form, readable: sorted keys, two-space indent, trailing newline.
// Used for files meant to be read and diffed.
inline std::string canonical_pretty(const json& j) { return j.dump(2) + "\n"; }

inline json parse_json_text(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::malformed_document, what, e.what());
  }
}

// Closed-world object access: every key must be consumed through require() or
// find(), and reject_unknown() flags anything left over. Paths are dotted so
// errors name the exact offending field.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : obj_(j), path_(std::move(path)) {
    if (!j.is_object())
      throw Error(ErrorCode::malformed_document, path_, "expected a JSON object");
  }

  const json& require(const char* key) {
    auto it = obj_.find(key);
    if (it == obj_.end())
      throw Error(ErrorCode::missing_field, member(key), "required field is missing");
    seen_.insert(key);
    return *it;
  }

  // nullptr when absent.
  const json* find(const char* key) {
    auto it = obj_.find(key);
    if (it == obj_.end()) return nullptr;
    seen_.insert(key);
    return &*it;
  }

  void reject_unknown() const {
    for (const auto& item : obj_.items())
      if (!seen_.contains(item.key()))
        throw Error(ErrorCode::unknown_field, member(item.key().c_str()),
                    "field is not part of the schema");
  }

  std::string member(const char* key) const {
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

  const std::string& path() const { return path_; }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string, std::less<>> seen_;
};

inline std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw Error(ErrorCode::invalid_value, path, "expected a string");
  return j.get<std::string>();
}

inline std::string get_nonempty_string(const json& j, const std::string& path) {
  std::string s = get_string(j, path);
  if (s.empty()) throw Error(ErrorCode::invalid_value, path, "must be non-empty");
  return s;
}

inline double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw Error(ErrorCode::invalid_value, path, "expected a number");
  return j.get<double>();
}

inline std::int64_t get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer())
    throw Error(ErrorCode::invalid_value, path, "expected an integer");
  return j.get<std::int64_t>();
}

inline bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw Error(ErrorCode::invalid_value, path, "expected a boolean");
  return j.get<bool>();
}

// Score-scale number in [0, 100].
inline double get_score(const json& j, const std::string& path) {
  double v = get_number(j, path);
  if (!(v >= 0.0 && v <= 100.0))
    throw Error(ErrorCode::invalid_value, path, "must be in [0, 100]");
  return v;
}

inline json finding_to_json(const Finding& finding) {
  json j = json::object();
  j["severity"] = severity_name(finding.severity);
  j["code"] = finding.code;
  j["subject"] = finding.subject;
  j["message"] = finding.message;
  return j;
}

inline json findings_to_json(const std::vector<Finding>& findings) {
  json arr = json::array();
  for (const Finding& finding : findings) arr.push_back(finding_to_json(finding));
  return arr;
}

}  // namespace prlqual
