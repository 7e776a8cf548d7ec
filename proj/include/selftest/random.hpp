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

#include <cstdint>
#include <random>

#include "selftest/matcore.hpp"

namespace selftest {

class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}
  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  int below(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }
  cplx cnormal() { return {normal(), normal()}; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

CMatrix random_ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);
CMatrix random_unitary(Eigen::Index n, Rng& rng);
CMatrix random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng);
CMatrix random_hermitian(Eigen::Index n, Rng& rng);
CVector random_state(Eigen::Index n, Rng& rng);

}  // namespace selftest
