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

#include "qdyn/random.hpp"

namespace qdyn {

CMatrix ginibre(int rows, int cols, Rng& rng) {
  CMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      g(i, j) = rng.complex_gaussian();
    }
  }
  return g;
}

CMatrix haar_isometry(int n, int r, Rng& rng) {
  if (r > n || r <= 0) {
    fail(ErrorCode::InvalidArgument, "haar_isometry: need 0 < r <= n");
  }
  CMatrix g = ginibre(n, r, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g.eigen());
  Eigen::MatrixXcd q =
      qr.householderQ() * Eigen::MatrixXcd::Identity(n, r);
  Eigen::MatrixXcd rmat =
      qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  for (int k = 0; k < r; ++k) {
    Complex d = rmat(k, k);
    double a = std::abs(d);
    if (a > 0.0) q.col(k) *= d / a;
  }
  return CMatrix(std::move(q));
}

CMatrix random_unitary(int dim, Rng& rng) { return haar_isometry(dim, dim, rng); }

Eigen::VectorXcd haar_state_vector(int dim, Rng& rng) {
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
  double norm = v.norm();
  if (norm == 0.0) {
    v.setZero();
    v(0) = 1.0;
    return v;
  }
  return v / norm;
}

CMatrix ginibre_density(int dim, Rng& rng) {
  CMatrix g = ginibre(dim, dim, rng);
  Eigen::MatrixXcd gg = g.eigen() * g.eigen().adjoint();
  Complex tr = gg.trace();
  return CMatrix(gg / tr.real());
}

}  // namespace qdyn
