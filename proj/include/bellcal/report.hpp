// Copyright 2026 The bellcal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Machine-readable experiment reports. JSON is canonical; CSV is a flat
// projection with one row per scalar leaf.

#pragma once

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bellcal/core_algebra.hpp"
#include "json.hpp"

namespace bellcal {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct ExperimentReport {
  std::string experiment;
  Json parameters = Json::object();
  std::vector<Json> results;
  bool pass = false;
  int schema_version = kSchemaVersion;

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

inline Json complex_json(Complex c) { return Json{{"re", c.real()}, {"im", c.imag()}}; }

inline Json to_json(const ExperimentReport& r) {
  Json j;
  j["experiment"] = r.experiment;
  j["schema_version"] = r.schema_version;
  j["parameters"] = r.parameters;
  j["results"] = Json::array();
  for (const auto& rec : r.results) j["results"].push_back(rec);
  j["pass"] = r.pass;
  return j;
}

/// Structural check against the version-1 schema. Returns the list of
/// violations; empty means valid.
inline std::vector<std::string> validate_report_json(const Json& j) {
  std::vector<std::string> errors;
  if (!j.is_object()) return {"top level is not an object"};
  auto need = [&](const char* key, auto pred, const char* what) {
    if (!j.contains(key)) {
      errors.push_back(std::string("missing key '") + key + "'");
    } else if (!pred(j.at(key))) {
      errors.push_back(std::string("key '") + key + "' is not " + what);
    }
  };
  need("experiment", [](const Json& v) { return v.is_string() && !v.get<std::string>().empty(); },
       "a non-empty string");
  need("schema_version",
       [](const Json& v) { return v.is_number_integer() && v.get<int>() == kSchemaVersion; },
       "the integer 1");
  need("parameters", [](const Json& v) { return v.is_object(); }, "an object");
  need("results",
       [](const Json& v) {
         if (!v.is_array()) return false;
         for (const auto& rec : v)
           if (!rec.is_object() || !rec.contains("kind") || !rec.at("kind").is_string()) return false;
         return true;
       },
       "an array of objects with a string 'kind'");
  need("pass", [](const Json& v) { return v.is_boolean(); }, "a boolean");
  for (const auto& [key, _] : j.items()) {
    if (key != "experiment" && key != "schema_version" && key != "parameters" &&
        key != "results" && key != "pass") {
      errors.push_back("unexpected key '" + key + "'");
    }
  }
  return errors;
}

inline ExperimentReport report_from_json(const Json& j) {
  const auto errors = validate_report_json(j);
  if (!errors.empty()) throw std::invalid_argument("invalid report: " + errors.front());
  ExperimentReport r;
  r.experiment = j.at("experiment").get<std::string>();
  r.schema_version = j.at("schema_version").get<int>();
  r.parameters = j.at("parameters");
  for (const auto& rec : j.at("results")) r.results.push_back(rec);
  r.pass = j.at("pass").get<bool>();
  return r;
}

namespace detail {

inline std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline std::string csv_scalar(const Json& v) {
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return csv_number(v.get<double>());
  if (v.is_string()) return csv_quote(v.get<std::string>());
  if (v.is_null()) return "";
  return csv_quote(v.dump());
}

inline void flatten(const Json& v, const std::string& prefix,
                    std::vector<std::pair<std::string, std::string>>& out) {
  if (v.is_object()) {
    for (const auto& [k, child] : v.items()) flatten(child, prefix.empty() ? k : prefix + "." + k, out);
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(prefix, csv_scalar(v));
  }
}

}  // namespace detail

/// Columns: experiment,record,field,value. `record` is "parameters",
/// "pass", or the zero-based index into results.
inline std::string to_csv(const ExperimentReport& r) {
  std::ostringstream os;
  os << "experiment,record,field,value\n";
  const std::string exp = detail::csv_quote(r.experiment);
  std::vector<std::pair<std::string, std::string>> rows;
  detail::flatten(r.parameters, "", rows);
  for (const auto& [f, v] : rows) os << exp << ",parameters," << detail::csv_quote(f) << ',' << v << '\n';
  for (std::size_t i = 0; i < r.results.size(); ++i) {
    rows.clear();
    detail::flatten(r.results[i], "", rows);
    for (const auto& [f, v] : rows) os << exp << ',' << i << ',' << detail::csv_quote(f) << ',' << v << '\n';
  }
  os << exp << ",pass,pass," << (r.pass ? "true" : "false") << '\n';
  return os.str();
}

}  // namespace bellcal
