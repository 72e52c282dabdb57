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
#include <optional>
#include <vector>

#include "qdyn/cmatrix.hpp"

namespace qdyn {

/// Linear map on operator space, stored as a superoperator matrix of side
/// dim_in^2 acting on column-stacked operators (see the vec convention in
/// cmatrix.hpp).
class LinearMap {
 public:
  LinearMap(int dim_in, CMatrix superoperator);
  static LinearMap identity(int dim);

  int dim_in() const { return dim_in_; }
  const CMatrix& superoperator() const { return superoperator_; }

  CMatrix apply(const CMatrix& x) const;

  /// a*this + b*other, entrywise on superoperators.
  LinearMap combine(double a, double b, const LinearMap& other) const;

 private:
  int dim_in_;
  CMatrix superoperator_;
};

/// Image of the unnormalized maximally entangled projector sum_ij |ii><jj|
/// under map kron id; positive semidefinite exactly when the map is
/// completely positive.
struct ChoiMatrix {
  CMatrix matrix;  // side dim_in^2, output factor first
  int dim_in;
};

/// Operator-sum representation with the dagger on the left:
/// X -> sum_i M_i^dag X M_i.
struct KrausSet {
  std::vector<CMatrix> operators;

  CMatrix apply(const CMatrix& x) const;
};

/// rho -> U rho U^dag. Requires U unitary within 1e-10.
LinearMap unitary_map(const CMatrix& u);

/// rho -> rho^T; positive and trace-preserving but not completely positive.
LinearMap transpose_map(int dim);

/// rho -> (1-p) rho + p tr(rho) I/d. Negative p sharpens instead of mixing
/// and leaves the positive cone, which makes it a handy positivity-violation
/// fixture.
LinearMap depolarizing_map(int dim, double p);

ChoiMatrix to_choi(const LinearMap& m);
LinearMap from_choi(const ChoiMatrix& c);

/// Kraus operators from the scaled eigenvectors of a PSD Choi matrix;
/// throws NotCompletelyPositive when no operator-sum representation exists.
KrausSet kraus_from_choi(const ChoiMatrix& c);

struct TracePreservationVerdict {
  bool preserving;
  double defect;  // max |tr(M(E_ij)) - delta_ij| over matrix units
};
TracePreservationVerdict is_trace_preserving(const LinearMap& m);

struct CpVerdict {
  bool completely_positive;
  double min_choi_eigenvalue;
  bool hermiticity_preserving;  // Choi Hermitian within tolerance
};
/// True iff the minimum Choi eigenvalue clears -1e-9 * ||Choi||_F.
CpVerdict is_completely_positive(const LinearMap& m);

enum class PositivityStatus {
  ViolationFound,
  NoViolationFound,     // sampling is a semi-decision; only violations conclude
  PositiveSinceCp,      // complete positivity already proves positivity
};

struct PositivityVerdict {
  PositivityStatus status;
  double min_output_eigenvalue;
  std::optional<CMatrix> witness;  // input state whose image dips negative
  int trials;
};

/// Applies the map to Haar-random pure projectors and Ginibre mixtures and
/// looks for an output with a negative eigenvalue.
PositivityVerdict is_positive_sampled(const LinearMap& m, int trials,
                                      std::uint64_t seed);

/// Superoperator of (m kron id) on a dim_in * dim_prime system.
LinearMap extend(const LinearMap& m, int dim_prime);

struct DensityPreservationReport {
  bool violation_found;
  int trials_run;
  std::optional<CMatrix> witness;  // first offending input density operator
  double worst_min_eigenvalue;
  double worst_trace_defect;
  double worst_hermiticity_defect;
};

/// Samples random density operators on the composite system (half Haar-pure,
/// half Ginibre mixtures), pushes them through extend(m, dim_prime) and
/// checks the outputs remain density operators. This is the condition weaker
/// than complete positivity; it is a semi-decision distinct from
/// is_completely_positive.
DensityPreservationReport density_preservation_test(const LinearMap& m,
                                                    int dim_prime, int trials,
                                                    std::uint64_t seed);

}  // namespace qdyn
