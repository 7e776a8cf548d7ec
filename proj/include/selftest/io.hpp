// Copyright 2026 The selftest Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "selftest/errors.hpp"
#include "selftest/models.hpp"

namespace selftest {

using Json = nlohmann::ordered_json;

// Malformed document; path is a JSONPath-like location such as $.alice.X.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path(path) {}
  std::string path;
};

std::string library_version();

// Complex scalars are [re, im]; matrices are row-major nested arrays.
Json to_json(cplx z);
Json to_json(const CMatrix& m);
Json to_json(const CVector& v);
Json to_json(const MeasurementFamily& f);
Json to_json(const Model& m);
Json to_json(const NsCorrelation& p);
Json to_json(const QnsCorrelation& g);
Json to_json(const CqnsCorrelation& g);
Json to_json(const std::vector<Residual>& rs);

cplx complex_from_json(const Json& j, const std::string& path);
CMatrix matrix_from_json(const Json& j, const std::string& path);
CVector vector_from_json(const Json& j, const std::string& path);
double real_from_json(const Json& j, const std::string& path);
int int_from_json(const Json& j, const std::string& path);
const Json& field(const Json& j, const char* key, const std::string& path);

MeasurementFamily parse_family(const Json& j, const std::string& path = "$");
// Validates eagerly; throws SchemaError or ValidationError.
Model parse_model(const Json& j, double tol = kDefaultTol);
Model parse_model(std::string_view text, double tol = kDefaultTol);

struct AnyCorrelation {
  std::string kind;  // ns, qns or cqns
  NsCorrelation ns;
  QnsCorrelation qns;
  CqnsCorrelation cqns;
};

AnyCorrelation parse_correlation(const Json& j, double tol = kDefaultTol);

Json parse_text(std::string_view text);
Json read_json_file(const std::string& path);
std::string dump(const Json& j);

}  // namespace selftest
