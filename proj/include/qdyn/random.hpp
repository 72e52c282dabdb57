// Copyright 2026 The qdyn authors
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

#include "qdyn/cmatrix.hpp"

namespace qdyn {

/// Deterministic generator: mt19937_64 with hand-rolled uniform and
/// Box-Muller transforms, so seeded streams do not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  Complex complex_gaussian() {
    double re = gaussian();
    double im = gaussian();
    return Complex(re, im) / std::sqrt(2.0);
  }

  std::uint64_t bits() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// splitmix64 mix of (seed, index): per-trial seeds are reproducible
/// regardless of evaluation order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Matrix of i.i.d. standard complex Gaussians.
CMatrix ginibre(int rows, int cols, Rng& rng);

/// Haar-distributed isometry with n >= r orthonormal columns (QR of a
/// Ginibre matrix with the R-diagonal phase fix).
CMatrix haar_isometry(int n, int r, Rng& rng);

CMatrix random_unitary(int dim, Rng& rng);

Eigen::VectorXcd haar_state_vector(int dim, Rng& rng);

/// Full-rank random density matrix G G^dag / tr(G G^dag).
CMatrix ginibre_density(int dim, Rng& rng);

}  // namespace qdyn
