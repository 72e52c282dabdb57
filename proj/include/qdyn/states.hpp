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

/// Unit-norm state vector.
class PureState {
 public:
  explicit PureState(Eigen::VectorXcd amplitudes);
  static PureState computational(int dim, int k);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

  /// <this|other>
  Complex overlap(const PureState& other) const;
  CMatrix projector() const;

 private:
  Eigen::VectorXcd amplitudes_;
};

/// Tolerance profile for accepting a matrix as a density operator. The
/// strict profile guards constructed states; the verdict profile is used
/// when judging the output of a dynamical map, where raw defects are
/// reported rather than clipped.
struct DensityTolerances {
  double herm_rel = kHermTolFactor;   // times ||M||_F
  double trace_abs = 1e-10;
  double eigenvalue_floor = -1e-9;
};

inline DensityTolerances strict_density_tolerances() { return {}; }
inline DensityTolerances verdict_density_tolerances() {
  return {kHermTolFactor, 1e-9, -1e-8};
}

/// Trace-one positive-semidefinite operator.
class DensityOperator {
 public:
  explicit DensityOperator(CMatrix m,
                           DensityTolerances tol = strict_density_tolerances());
  static DensityOperator pure(const PureState& psi);
  static DensityOperator maximally_mixed(int dim);

  int dim() const { return matrix_.rows(); }
  const CMatrix& matrix() const { return matrix_; }

 private:
  CMatrix matrix_;
};

/// Checks the density-operator invariants without throwing.
struct DensityVerdict {
  bool valid;
  double hermiticity_defect;
  double trace_defect;
  double min_eigenvalue;
};
DensityVerdict density_verdict(const CMatrix& m,
                               DensityTolerances tol = verdict_density_tolerances());

struct WeightedState {
  double weight;
  PureState state;
};

/// Weighted list of pure states with weights summing to one. States need
/// not be orthogonal.
class Ensemble {
 public:
  explicit Ensemble(std::vector<WeightedState> items);

  const std::vector<WeightedState>& items() const { return items_; }
  size_t size() const { return items_.size(); }
  int dim() const { return items_.front().state.dim(); }

 private:
  std::vector<WeightedState> items_;
};

// The nonlinear module's finite-support distribution on pure states has the
// same representation as an ensemble.
using PureDistribution = Ensemble;

/// Pure state on a bipartite space with explicit factor dimensions.
struct BipartiteState {
  PureState state;
  DimPair dims;

  BipartiteState(PureState s, DimPair d);

  /// Amplitudes as a dimA x dimB matrix, M[a,b] = <a,b|Psi>.
  CMatrix as_matrix() const;
  DensityOperator reduced(Subsystem kept) const;
};

/// rho = sum_i w_i |psi_i><psi_i|.
DensityOperator mix(const Ensemble& e);

/// Spectral ensemble of rho (eigenvalues above 1e-12, descending).
Ensemble eigen_ensemble(const DensityOperator& rho);

struct SchmidtDecomposition {
  std::vector<double> weights;   // descending, sum to 1
  std::vector<PureState> left;   // orthonormal on factor A
  std::vector<PureState> right;  // orthonormal on factor B
};

/// |Psi> = sum_k sqrt(w_k) |left_k>|right_k>.
SchmidtDecomposition schmidt(const BipartiteState& psi);

/// Spectral purification; the ancilla dimension equals rank(rho) and the
/// largest eigenvalue pairs with ancilla level 0.
BipartiteState purify(const DensityOperator& rho);

struct HjwBasis {
  /// Complete orthonormal basis of the (possibly enlarged) second factor;
  /// the first |E| vectors are the steering outcomes, in ensemble order.
  std::vector<PureState> basis;
  /// The input state, padded with an ancilla ground state when the second
  /// factor had to be enlarged.
  BipartiteState padded_state;
  bool enlarged;
};

/// Measurement basis on the second factor that steers the first factor to
/// the given rho_I-ensemble. Construction: from the Schmidt data of Psi,
/// build the isometry U_ik = <e_k|psi_i> sqrt(w_i / lambda_k), verify column
/// orthonormality, complete it to a unitary and rotate the Schmidt basis of
/// the second factor.
HjwBasis hjw_basis(const BipartiteState& psi, const Ensemble& target);

/// Measures the second factor in the given complete orthonormal basis and
/// returns the steered conditional ensemble of the first factor; outcomes
/// with probability below kOutcomeProbabilityFloor are dropped.
Ensemble steer(const BipartiteState& psi, const std::vector<PureState>& basis);

/// Premeasurement entangling the second factor with pointer states of an
/// apparatus: sum_i sqrt(w_i)|psi_i>|phi_i>|A_i>.
PureState von_neumann_premeasurement(const BipartiteState& psi,
                                     const std::vector<PureState>& basis,
                                     int apparatus_dim);

/// Same interaction, but the measured factor is destroyed:
/// sum_i sqrt(w_i)|psi_i>|A_i>.
PureState destructive_measurement(const BipartiteState& psi,
                                  const std::vector<PureState>& basis,
                                  int apparatus_dim);

struct ProjectionResult {
  double probability;
  PureState state;
};

/// Applies the projector P on tensor factor `which` of a state whose factor
/// dimensions are `dims`; throws ZeroProbabilityOutcome when the outcome
/// probability falls below kOutcomeProbabilityFloor.
ProjectionResult project(const PureState& psi, const CMatrix& projector,
                         const std::vector<int>& dims, int which);

/// n-element rho-ensemble from a Haar-random isometry acting on the spectral
/// decomposition; deterministic given the seed. Requires n >= rank(rho).
Ensemble random_ensemble(const DensityOperator& rho, int n, std::uint64_t seed);

struct EnsembleMatch {
  double max_weight_error;
  double min_overlap;              // min over matched pairs of |<psi|psi'>|
  std::vector<int> permutation;    // expected index -> actual index
};

/// Greedy maximal-overlap assignment between two ensembles; comparison is up
/// to permutation and global phase.
EnsembleMatch match_ensembles(const Ensemble& expected, const Ensemble& actual);

}  // namespace qdyn
