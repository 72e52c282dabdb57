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

#include "qdyn/maps.hpp"

#include <cmath>

#include "qdyn/random.hpp"
#include "qdyn/states.hpp"

namespace qdyn {

namespace {

constexpr double kTpDefectTol = 1e-9;

double psd_floor(const CMatrix& c) {
  return kPsdEigenvalueFloor * std::max(1.0, c.frobenius_norm());
}

}  // namespace

LinearMap::LinearMap(int dim_in, CMatrix superoperator)
    : dim_in_(dim_in), superoperator_(std::move(superoperator)) {
  if (dim_in <= 0) {
    fail(ErrorCode::InvalidArgument, "LinearMap: dimension must be positive");
  }
  const int side = dim_in * dim_in;
  if (superoperator_.rows() != side || superoperator_.cols() != side) {
    fail(ErrorCode::DimensionMismatch,
         "LinearMap: superoperator side must be dim_in^2");
  }
}

LinearMap LinearMap::identity(int dim) {
  return LinearMap(dim, CMatrix::identity(dim * dim));
}

CMatrix LinearMap::apply(const CMatrix& x) const {
  if (x.rows() != dim_in_ || x.cols() != dim_in_) {
    fail(ErrorCode::DimensionMismatch, "LinearMap::apply: operand dimension mismatch");
  }
  Eigen::VectorXcd image = superoperator_.eigen() * vec(x);
  return unvec(image, dim_in_, dim_in_);
}

LinearMap LinearMap::combine(double a, double b, const LinearMap& other) const {
  if (other.dim_in_ != dim_in_) {
    fail(ErrorCode::DimensionMismatch, "LinearMap::combine: dimension mismatch");
  }
  return LinearMap(dim_in_, a * superoperator_ + b * other.superoperator_);
}

CMatrix KrausSet::apply(const CMatrix& x) const {
  if (operators.empty()) {
    fail(ErrorCode::InvalidArgument, "KrausSet: empty operator list");
  }
  const int d = operators.front().rows();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& m : operators) {
    acc += m.eigen().adjoint() * x.eigen() * m.eigen();
  }
  return CMatrix(std::move(acc));
}

LinearMap unitary_map(const CMatrix& u) {
  if (!u.is_square()) {
    fail(ErrorCode::DimensionMismatch, "unitary_map: matrix not square");
  }
  const int d = u.rows();
  Eigen::MatrixXcd defect =
      u.eigen().adjoint() * u.eigen() - Eigen::MatrixXcd::Identity(d, d);
  if (defect.cwiseAbs().maxCoeff() > 1e-10) {
    fail(ErrorCode::InvalidArgument, "unitary_map: matrix is not unitary");
  }
  // vec(U X U^dag) = (conj(U) kron U) vec(X)
  return LinearMap(d, kron(u.conjugate(), u));
}

LinearMap transpose_map(int dim) {
  if (dim <= 0) fail(ErrorCode::InvalidArgument, "transpose_map: bad dimension");
  const int side = dim * dim;
  CMatrix k(side, side);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      k(i + j * dim, j + i * dim) = 1.0;  // vec(X^T)[i + j d] = vec(X)[j + i d]
    }
  }
  return LinearMap(dim, std::move(k));
}

LinearMap depolarizing_map(int dim, double p) {
  if (dim <= 0) fail(ErrorCode::InvalidArgument, "depolarizing_map: bad dimension");
  const int side = dim * dim;
  // tr(X) I/d has superoperator (1/d) vec(I) vec(I)^T in the vec convention.
  Eigen::VectorXcd vec_id = vec(CMatrix::identity(dim));
  Eigen::MatrixXcd s = (1.0 - p) * Eigen::MatrixXcd::Identity(side, side) +
                       (p / dim) * (vec_id * vec_id.transpose());
  return LinearMap(dim, CMatrix(std::move(s)));
}

ChoiMatrix to_choi(const LinearMap& m) {
  const int d = m.dim_in();
  CMatrix c(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      CMatrix image = m.apply(matrix_unit(d, i, j));
      // C += M(E_ij) kron E_ij: E_ij places the image block at (i, j).
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          c(a * d + i, b * d + j) = image(a, b);
        }
      }
    }
  }
  return ChoiMatrix{std::move(c), d};
}

LinearMap from_choi(const ChoiMatrix& c) {
  const int d = c.dim_in;
  if (c.matrix.rows() != d * d || c.matrix.cols() != d * d) {
    fail(ErrorCode::DimensionMismatch, "from_choi: side must be dim_in^2");
  }
  // M(X) = Tr_2 [ C (I kron X^T) ].
  CMatrix s(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      CMatrix unit = matrix_unit(d, i, j);
      CMatrix image = partial_trace(
          c.matrix * kron(CMatrix::identity(d), unit.transpose()),
          DimPair{d, d}, Subsystem::B);
      Eigen::VectorXcd col = vec(image);
      const int cidx = i + j * d;
      for (int r = 0; r < d * d; ++r) s(r, cidx) = col(r);
    }
  }
  return LinearMap(d, std::move(s));
}

KrausSet kraus_from_choi(const ChoiMatrix& c) {
  const int d = c.dim_in;
  if (!c.matrix.is_hermitian()) {
    fail(ErrorCode::NotCompletelyPositive,
         "kraus_from_choi: Choi matrix is not Hermitian (map is not CP)");
  }
  HermitianEig e = eig_hermitian(c.matrix);
  if (e.eigenvalues.front() < psd_floor(c.matrix)) {
    fail(ErrorCode::NotCompletelyPositive,
         "kraus_from_choi: Choi matrix has a negative eigenvalue; "
         "no operator-sum representation exists");
  }
  KrausSet out;
  const double lambda_max = e.eigenvalues.back();
  for (size_t k = 0; k < e.eigenvalues.size(); ++k) {
    double lambda = e.eigenvalues[k];
    if (lambda <= 1e-12 * std::max(1.0, lambda_max)) continue;
    Eigen::VectorXcd v =
        std::sqrt(lambda) * e.eigenvectors.eigen().col(static_cast<Eigen::Index>(k));
    // v[(a,b)] = K[a,b] on the (output, input) composite index, and the
    // stored operator carries the adjoint so that sum M^dag X M acts as
    // sum K X K^dag.
    CMatrix kop(d, d);
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) kop(a, b) = v(a * d + b);
    }
    out.operators.push_back(kop.dagger());
  }
  if (out.operators.empty()) {
    out.operators.push_back(CMatrix::zero(d, d));
  }
  return out;
}

TracePreservationVerdict is_trace_preserving(const LinearMap& m) {
  const int d = m.dim_in();
  double defect = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      Complex tr = m.apply(matrix_unit(d, i, j)).trace();
      Complex want = (i == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      defect = std::max(defect, std::abs(tr - want));
    }
  }
  return {defect <= kTpDefectTol, defect};
}

CpVerdict is_completely_positive(const LinearMap& m) {
  ChoiMatrix c = to_choi(m);
  CpVerdict out{};
  out.hermiticity_preserving = c.matrix.is_hermitian();
  CMatrix sym = 0.5 * (c.matrix + c.matrix.dagger());
  HermitianEig e = eig_hermitian(sym);
  out.min_choi_eigenvalue = e.eigenvalues.front();
  out.completely_positive =
      out.hermiticity_preserving && out.min_choi_eigenvalue >= psd_floor(c.matrix);
  return out;
}

PositivityVerdict is_positive_sampled(const LinearMap& m, int trials,
                                      std::uint64_t seed) {
  if (trials < 1) fail(ErrorCode::InvalidArgument, "is_positive_sampled: trials >= 1");
  CpVerdict cp = is_completely_positive(m);
  if (cp.completely_positive) {
    return {PositivityStatus::PositiveSinceCp, cp.min_choi_eigenvalue, std::nullopt, 0};
  }
  const int d = m.dim_in();
  PositivityVerdict out{PositivityStatus::NoViolationFound,
                        std::numeric_limits<double>::infinity(), std::nullopt, trials};
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    CMatrix probe;
    if (t % 2 == 0) {
      Eigen::VectorXcd v = haar_state_vector(d, rng);
      probe = CMatrix(v * v.adjoint());
    } else {
      probe = ginibre_density(d, rng);
    }
    CMatrix image = m.apply(probe);
    CMatrix sym = 0.5 * (image + image.dagger());
    HermitianEig e = eig_hermitian(sym);
    double lo = e.eigenvalues.front();
    if (lo < out.min_output_eigenvalue) out.min_output_eigenvalue = lo;
    if (lo < psd_floor(image)) {
      out.status = PositivityStatus::ViolationFound;
      out.witness = probe;
      out.trials = t + 1;
      return out;
    }
  }
  return out;
}

LinearMap extend(const LinearMap& m, int dim_prime) {
  if (dim_prime <= 0) fail(ErrorCode::InvalidArgument, "extend: bad dimension");
  const int d = m.dim_in();
  const int dd = d * dim_prime;
  // Cache the images of the first-factor matrix units.
  std::vector<CMatrix> images;
  images.reserve(static_cast<size_t>(d) * d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      images.push_back(m.apply(matrix_unit(d, a, b)));
    }
  }
  CMatrix s(dd * dd, dd * dd);
  for (int a = 0; a < d; ++a) {
    for (int alpha = 0; alpha < dim_prime; ++alpha) {
      for (int b = 0; b < d; ++b) {
        for (int beta = 0; beta < dim_prime; ++beta) {
          const CMatrix& image = images[static_cast<size_t>(a) * d + b];
          const int col = (a * dim_prime + alpha) + (b * dim_prime + beta) * dd;
          // (m kron id)(E_ab kron E_alpha_beta) = image kron E_alpha_beta
          for (int r = 0; r < d; ++r) {
            for (int c = 0; c < d; ++c) {
              const int row = (r * dim_prime + alpha) + (c * dim_prime + beta) * dd;
              s(row, col) = image(r, c);
            }
          }
        }
      }
    }
  }
  return LinearMap(dd, std::move(s));
}

DensityPreservationReport density_preservation_test(const LinearMap& m,
                                                    int dim_prime, int trials,
                                                    std::uint64_t seed) {
  if (trials < 1) {
    fail(ErrorCode::InvalidArgument, "density_preservation_test: trials >= 1");
  }
  LinearMap ext = extend(m, dim_prime);
  const int dd = ext.dim_in();
  DensityTolerances tol = verdict_density_tolerances();
  tol.eigenvalue_floor = kPsdEigenvalueFloor;
  DensityPreservationReport out{false, 0, std::nullopt, 0.0, 0.0, 0.0};
  out.worst_min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    CMatrix probe;
    if (t % 2 == 0) {
      Eigen::VectorXcd v = haar_state_vector(dd, rng);
      probe = CMatrix(v * v.adjoint());
    } else {
      probe = ginibre_density(dd, rng);
    }
    CMatrix image = ext.apply(probe);
    DensityVerdict v = density_verdict(image, tol);
    out.trials_run = t + 1;
    double lo = std::isnan(v.min_eigenvalue)
                    ? -std::numeric_limits<double>::infinity()
                    : v.min_eigenvalue;
    out.worst_min_eigenvalue = std::min(out.worst_min_eigenvalue, lo);
    out.worst_trace_defect = std::max(out.worst_trace_defect, v.trace_defect);
    out.worst_hermiticity_defect =
        std::max(out.worst_hermiticity_defect, v.hermiticity_defect);
    if (!v.valid) {
      out.violation_found = true;
      out.witness = probe;
      return out;
    }
  }
  return out;
}

}  // namespace qdyn
