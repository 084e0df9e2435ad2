#pragma once

// Structured-document loading: every config, tree, case and mapping file is
// accepted as JSON or YAML and normalized to nlohmann::json.

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "chanfind/errors.hpp"

namespace chanfind {

using json = nlohmann::json;

namespace doc_detail {

inline json scalar_to_json(const YAML::Node& node) {
  const std::string& s = node.Scalar();
  if (node.Tag() == "!") return s;  // quoted scalars stay strings
  if (s == "~" || s == "null" || s == "Null" || s == "NULL") return nullptr;
  if (s == "true" || s == "True" || s == "TRUE") return true;
  if (s == "false" || s == "False" || s == "FALSE") return false;
  if (!s.empty()) {
    char* end = nullptr;
    const long long iv = std::strtoll(s.c_str(), &end, 10);
    if (end && *end == '\0' && !(s.size() > 1 && s[0] == '0')) return iv;
    const double dv = std::strtod(s.c_str(), &end);
    if (end && *end == '\0' && s.find_first_of(".eE") != std::string::npos) return dv;
  }
  return s;
}

inline json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      return nullptr;
    case YAML::NodeType::Scalar:
      return scalar_to_json(node);
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : node) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return obj;
    }
  }
  return nullptr;
}

}  // namespace doc_detail

// Parses JSON when the text starts with '{' or '[', YAML otherwise.
inline json parse_document(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw ParseError("empty document");
  if (text[first] == '{' || text[first] == '[') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what());
    }
  }
  try {
    return doc_detail::yaml_to_json(YAML::Load(std::string(text)));
  } catch (const YAML::Exception& e) {
    throw ParseError(std::string("invalid YAML: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write file: " + path);
  out << content;
}

inline json load_document_file(const std::string& path) { return parse_document(read_file(path)); }

// Typed field access with ParseError on mismatch.
template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.is_object()) return fallback;
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
T require(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null())
    throw ParseError(std::string("missing field '") + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("field '") + key + "' has the wrong type");
  }
}

// Scalars written unquoted in YAML may come back as numbers.
inline std::string scalar_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  throw ParseError("expected a scalar, got " + v.dump());
}

}  // namespace chanfind
