#pragma once

// Validator for the closed JSON-schema subset used in structured-output
// requests: type, enum, const, properties, required, additionalProperties,
// items, minItems, maxItems, minLength.

#include <string>

#include <nlohmann/json.hpp>

namespace chanfind {

namespace schema_detail {

inline bool type_matches(const nlohmann::json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "null") return v.is_null();
  return false;
}

}  // namespace schema_detail

// Empty string when `value` conforms; otherwise the first violation found,
// prefixed with its JSON pointer.
inline std::string schema_violation(const nlohmann::json& value, const nlohmann::json& schema,
                                    const std::string& where = "") {
  const std::string at = where.empty() ? "/" : where;
  if (!schema.is_object()) return {};
  if (schema.contains("type")) {
    const auto& t = schema.at("type");
    bool ok = false;
    if (t.is_string()) {
      ok = schema_detail::type_matches(value, t.get<std::string>());
    } else {
      for (const auto& alt : t) ok = ok || schema_detail::type_matches(value, alt.get<std::string>());
    }
    if (!ok) return at + ": expected type " + t.dump();
  }
  if (schema.contains("const") && value != schema.at("const")) return at + ": expected " + schema.at("const").dump();
  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& e : schema.at("enum")) found = found || e == value;
    if (!found) return at + ": value " + value.dump() + " not in enum";
  }
  if (value.is_string() && schema.contains("minLength") &&
      value.get<std::string>().size() < schema.at("minLength").get<std::size_t>())
    return at + ": string too short";
  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema.at("minItems").get<std::size_t>())
      return at + ": too few items";
    if (schema.contains("maxItems") && value.size() > schema.at("maxItems").get<std::size_t>())
      return at + ": too many items";
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        auto v = schema_violation(value[i], schema.at("items"), where + "/" + std::to_string(i));
        if (!v.empty()) return v;
      }
    }
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema.at("required"))
        if (!value.contains(key.get<std::string>())) return at + ": missing required field " + key.dump();
    }
    const nlohmann::json props = schema.value("properties", nlohmann::json::object());
    const bool closed = schema.contains("additionalProperties") && schema.at("additionalProperties").is_boolean() &&
                        !schema.at("additionalProperties").get<bool>();
    for (const auto& [key, v] : value.items()) {
      if (props.contains(key)) {
        auto err = schema_violation(v, props.at(key), where + "/" + key);
        if (!err.empty()) return err;
      } else if (closed) {
        return at + ": unexpected field \"" + key + "\"";
      }
    }
  }
  return {};
}

inline bool validates(const nlohmann::json& value, const nlohmann::json& schema) {
  return schema_violation(value, schema).empty();
}

}  // namespace chanfind
