#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <rapidjson/document.h>
#include <rapidjson/schema.h>
#include <rapidjson/stringbuffer.h>

namespace testing_support {

inline std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

// Empty string when the instance validates, otherwise a short diagnosis.
inline std::string schema_errors(const std::string& schema_text, const std::string& instance_text) {
  rapidjson::Document sd;
  if (sd.Parse(schema_text.c_str()).HasParseError()) return "schema does not parse";
  rapidjson::SchemaDocument schema(sd);
  rapidjson::Document d;
  if (d.Parse(instance_text.c_str()).HasParseError()) return "instance does not parse";
  rapidjson::SchemaValidator v(schema);
  if (d.Accept(v)) return {};
  rapidjson::StringBuffer where, rule;
  v.GetInvalidDocumentPointer().StringifyUriFragment(where);
  v.GetInvalidSchemaPointer().StringifyUriFragment(rule);
  return std::string("invalid at ") + where.GetString() + " (rule " + rule.GetString() + ", keyword " +
         v.GetInvalidSchemaKeyword() + ")";
}

}  // namespace testing_support
