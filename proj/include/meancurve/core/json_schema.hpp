#pragma once

#include <json.hpp>

#include <initializer_list>
#include <string>
#include <string_view>

#include "meancurve/core/errors.hpp"

namespace meancurve::schema {

using nlohmann::json;

inline std::string join(const std::string& path, std::string_view key) { return path + "/" + std::string(key); }

inline void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected an object");
}

/// Rejects keys outside `allowed`, naming the first offender.
inline void only_keys(const json& j, const std::string& path, std::initializer_list<std::string_view> allowed) {
  require_object(j, path);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (auto a : allowed) ok = ok || it.key() == a;
    if (!ok) throw SchemaError(join(path, it.key()), "unknown key '" + it.key() + "'");
  }
}

inline const json& required(const json& j, const std::string& path, std::string_view key) {
  auto it = j.find(std::string(key));
  if (it == j.end()) throw SchemaError(join(path, key), "missing required key");
  return *it;
}

inline double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path, "expected a number");
  return j.get<double>();
}

inline std::int64_t integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  return j.get<std::int64_t>();
}

inline std::string string(const json& j, const std::string& path) {
  if (!j.is_string()) throw SchemaError(path, "expected a string");
  return j.get<std::string>();
}

inline double number_or(const json& j, const std::string& path, std::string_view key, double fallback) {
  auto it = j.find(std::string(key));
  return it == j.end() ? fallback : number(*it, join(path, key));
}

inline std::int64_t integer_or(const json& j, const std::string& path, std::string_view key, std::int64_t fallback) {
  auto it = j.find(std::string(key));
  return it == j.end() ? fallback : integer(*it, join(path, key));
}

}  // namespace meancurve::schema
