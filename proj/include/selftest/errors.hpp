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

#include <stdexcept>
#include <string>

namespace selftest {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  NotHermitian(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

class NotPsd : public Error {
 public:
  NotPsd(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue(min_eigenvalue) {}
  double min_eigenvalue;
};

// Raised when a structural invariant fails; residual is the size of the
// violation in the norm named by the message.
class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

class NotConverged : public Error {
 public:
  using Error::Error;
};

class NotOptimal : public Error {
 public:
  NotOptimal(const std::string& what, double gap) : Error(what), gap(gap) {}
  double gap;
};

}  // namespace selftest
