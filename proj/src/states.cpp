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

#include "qdyn/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdyn/random.hpp"

namespace qdyn {

namespace {

constexpr double kNormTol = 1e-10;
constexpr double kWeightSumTol = 1e-10;
constexpr double kRankFloor = 1e-12;
constexpr double kEnsembleConsistencyTol = 1e-8;
constexpr double kIsometryTol = 1e-8;

void require_orthonormal_basis(const std::vector<PureState>& basis, int dim,
                               const char* op) {
  if (basis.size() != static_cast<size_t>(dim)) {
    std::ostringstream os;
    os << op << ": expected a complete basis of " << dim << " states, got "
       << basis.size();
    fail(ErrorCode::InvalidArgument, os.str());
  }
  for (size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].dim() != dim) {
      fail(ErrorCode::DimensionMismatch, std::string(op) + ": basis state dimension mismatch");
    }
    for (size_t j = i; j < basis.size(); ++j) {
      Complex g = basis[i].overlap(basis[j]);
      double target = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - target) > kNormTol) {
        fail(ErrorCode::InvalidArgument, std::string(op) + ": basis is not orthonormal");
      }
    }
  }
}

// Extends the orthonormal columns of `cols` to `want` orthonormal columns by
// sweeping the canonical basis (deterministic).
Eigen::MatrixXcd complete_orthonormal(const Eigen::MatrixXcd& cols, int want) {
  const Eigen::Index d = cols.rows();
  Eigen::MatrixXcd out(d, want);
  Eigen::Index have = cols.cols();
  out.leftCols(have) = cols;
  for (Eigen::Index j = 0; j < d && have < want; ++j) {
    Eigen::VectorXcd cand = Eigen::VectorXcd::Zero(d);
    cand(j) = 1.0;
    for (int pass = 0; pass < 2; ++pass) {  // twice for numerical orthogonality
      cand -= out.leftCols(have) * (out.leftCols(have).adjoint() * cand);
    }
    double norm = cand.norm();
    if (norm > 1e-6) {
      out.col(have++) = cand / norm;
    }
  }
  if (have < want) {
    fail(ErrorCode::NumericalCrossCheck, "complete_orthonormal: completion failed");
  }
  return out;
}

}  // namespace

PureState::PureState(Eigen::VectorXcd amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) {
    fail(ErrorCode::InvalidArgument, "PureState: empty amplitude vector");
  }
  if (!amplitudes_.allFinite()) {
    fail(ErrorCode::InvalidArgument, "PureState: non-finite amplitude");
  }
  if (std::abs(amplitudes_.norm() - 1.0) > kNormTol) {
    fail(ErrorCode::InvalidArgument, "PureState: vector is not unit norm");
  }
}

PureState PureState::computational(int dim, int k) {
  if (k < 0 || k >= dim) {
    fail(ErrorCode::InvalidArgument, "PureState: level index out of range");
  }
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(k) = 1.0;
  return PureState(std::move(v));
}

Complex PureState::overlap(const PureState& other) const {
  if (dim() != other.dim()) {
    fail(ErrorCode::DimensionMismatch, "overlap: dimension mismatch");
  }
  return amplitudes_.dot(other.amplitudes_);
}

CMatrix PureState::projector() const {
  return CMatrix(amplitudes_ * amplitudes_.adjoint());
}

DensityOperator::DensityOperator(CMatrix m, DensityTolerances tol)
    : matrix_(std::move(m)) {
  DensityVerdict v = density_verdict(matrix_, tol);
  if (!v.valid) {
    std::ostringstream os;
    os << "DensityOperator: invariants violated (hermiticity defect "
       << v.hermiticity_defect << ", trace defect " << v.trace_defect
       << ", min eigenvalue " << v.min_eigenvalue << ")";
    fail(ErrorCode::NotADensityOperator, os.str());
  }
}

DensityOperator DensityOperator::pure(const PureState& psi) {
  return DensityOperator(psi.projector());
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  return DensityOperator(CMatrix(Eigen::MatrixXcd::Identity(dim, dim) / dim));
}

DensityVerdict density_verdict(const CMatrix& m, DensityTolerances tol) {
  DensityVerdict v{};
  if (!m.is_square() || !m.all_finite()) {
    v.valid = false;
    v.hermiticity_defect = std::numeric_limits<double>::infinity();
    return v;
  }
  v.hermiticity_defect = m.hermiticity_defect();
  v.trace_defect = std::abs(m.trace() - Complex(1.0, 0.0));
  bool herm_ok = v.hermiticity_defect <= tol.herm_rel * m.frobenius_norm() + 1e-300;
  if (herm_ok) {
    HermitianEig e = eig_hermitian(m);
    v.min_eigenvalue = e.eigenvalues.front();
  } else {
    v.min_eigenvalue = std::numeric_limits<double>::quiet_NaN();
  }
  v.valid = herm_ok && v.trace_defect <= tol.trace_abs &&
            v.min_eigenvalue >= tol.eigenvalue_floor;
  return v;
}

Ensemble::Ensemble(std::vector<WeightedState> items) : items_(std::move(items)) {
  if (items_.empty()) {
    fail(ErrorCode::InvalidArgument, "Ensemble: empty");
  }
  double sum = 0.0;
  int dim = items_.front().state.dim();
  for (const auto& it : items_) {
    if (!(it.weight > 0.0) || it.weight > 1.0 + kWeightSumTol) {
      fail(ErrorCode::InvalidArgument, "Ensemble: weights must lie in (0, 1]");
    }
    if (it.state.dim() != dim) {
      fail(ErrorCode::DimensionMismatch, "Ensemble: mixed state dimensions");
    }
    sum += it.weight;
  }
  if (std::abs(sum - 1.0) > kWeightSumTol) {
    fail(ErrorCode::InvalidArgument, "Ensemble: weights do not sum to one");
  }
}

BipartiteState::BipartiteState(PureState s, DimPair d) : state(std::move(s)), dims(d) {
  if (dims.dimA <= 0 || dims.dimB <= 0 || state.dim() != dims.total()) {
    fail(ErrorCode::DimensionMismatch,
         "BipartiteState: state dimension does not equal dimA*dimB");
  }
}

CMatrix BipartiteState::as_matrix() const {
  CMatrix m(dims.dimA, dims.dimB);
  for (int a = 0; a < dims.dimA; ++a) {
    for (int b = 0; b < dims.dimB; ++b) {
      m(a, b) = state.amplitudes()(a * dims.dimB + b);
    }
  }
  return m;
}

DensityOperator BipartiteState::reduced(Subsystem kept) const {
  CMatrix rho = CMatrix(state.amplitudes() * state.amplitudes().adjoint());
  Subsystem traced = (kept == Subsystem::A) ? Subsystem::B : Subsystem::A;
  return DensityOperator(partial_trace(rho, dims, traced));
}

DensityOperator mix(const Ensemble& e) {
  const int d = e.dim();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& it : e.items()) {
    acc += it.weight * (it.state.amplitudes() * it.state.amplitudes().adjoint());
  }
  return DensityOperator(CMatrix(std::move(acc)));
}

Ensemble eigen_ensemble(const DensityOperator& rho) {
  HermitianEig e = eig_hermitian(rho.matrix());
  std::vector<WeightedState> items;
  double kept = 0.0;
  for (int k = static_cast<int>(e.eigenvalues.size()) - 1; k >= 0; --k) {
    double lambda = e.eigenvalues[static_cast<size_t>(k)];
    if (lambda <= kRankFloor) break;
    kept += lambda;
    items.push_back({lambda, PureState(e.eigenvectors.eigen().col(k))});
  }
  for (auto& it : items) it.weight /= kept;
  return Ensemble(std::move(items));
}

SchmidtDecomposition schmidt(const BipartiteState& psi) {
  Svd dec = svd(psi.as_matrix());
  SchmidtDecomposition out;
  for (size_t k = 0; k < dec.singular_values.size(); ++k) {
    double w = dec.singular_values[k] * dec.singular_values[k];
    if (w <= kRankFloor) break;
    out.weights.push_back(w);
    out.left.emplace_back(dec.u.eigen().col(static_cast<Eigen::Index>(k)));
    // Psi[a,b] = sum_k s_k U[a,k] conj(V[b,k]), so the right Schmidt vectors
    // are the conjugated columns of V.
    out.right.emplace_back(
        dec.v.eigen().col(static_cast<Eigen::Index>(k)).conjugate());
  }
  return out;
}

BipartiteState purify(const DensityOperator& rho) {
  Ensemble spectral = eigen_ensemble(rho);  // descending weights
  const int d = rho.dim();
  const int r = static_cast<int>(spectral.size());
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(d) * r);
  for (int k = 0; k < r; ++k) {
    const auto& item = spectral.items()[static_cast<size_t>(k)];
    double root = std::sqrt(item.weight);
    for (int a = 0; a < d; ++a) {
      amps(a * r + k) = root * item.state.amplitudes()(a);
    }
  }
  amps /= amps.norm();
  return BipartiteState(PureState(std::move(amps)), DimPair{d, r});
}

HjwBasis hjw_basis(const BipartiteState& psi, const Ensemble& target) {
  const int dA = psi.dims.dimA;
  const int dB = psi.dims.dimB;
  if (target.dim() != dA) {
    fail(ErrorCode::DimensionMismatch, "hjw_basis: ensemble dimension mismatch");
  }
  DensityOperator rho_a = psi.reduced(Subsystem::A);
  if (trace_distance(mix(target).matrix(), rho_a.matrix()) > kEnsembleConsistencyTol) {
    fail(ErrorCode::InconsistentEnsemble,
         "hjw_basis: ensemble does not mix to the reduced state");
  }

  SchmidtDecomposition sd = schmidt(psi);
  const int r = static_cast<int>(sd.weights.size());
  const int n = static_cast<int>(target.size());
  if (n < r) {
    fail(ErrorCode::InvalidArgument,
         "hjw_basis: ensemble must have at least Schmidt-rank elements");
  }

  // U_ik = <e_k|psi_i> sqrt(w_i / lambda_k); its columns are orthonormal
  // exactly when the ensemble mixes to the reduced state.
  Eigen::MatrixXcd u(n, r);
  for (int i = 0; i < n; ++i) {
    const auto& item = target.items()[static_cast<size_t>(i)];
    for (int k = 0; k < r; ++k) {
      Complex amp = sd.left[static_cast<size_t>(k)].overlap(item.state);
      u(i, k) = amp * std::sqrt(item.weight / sd.weights[static_cast<size_t>(k)]);
    }
  }
  Eigen::MatrixXcd gram = u.adjoint() * u - Eigen::MatrixXcd::Identity(r, r);
  if (gram.cwiseAbs().maxCoeff() > kIsometryTol) {
    fail(ErrorCode::IsometryCheckFailure,
         "hjw_basis: isometry check failed (numerically degenerate input)");
  }
  Eigen::MatrixXcd u_full = complete_orthonormal(u, n);

  // Enlarge the second factor with an ancilla ground state until it can
  // carry n orthogonal outcomes.
  bool enlarged = n > dB;
  int anc = enlarged ? (n + dB - 1) / dB : 1;
  int dB2 = dB * anc;
  BipartiteState padded = psi;
  if (enlarged) {
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dA) * dB2);
    for (int a = 0; a < dA; ++a) {
      for (int b = 0; b < dB; ++b) {
        amps(a * dB2 + b * anc) = psi.state.amplitudes()(a * dB + b);
      }
    }
    padded = BipartiteState(PureState(std::move(amps)), DimPair{dA, dB2});
  }

  // Orthonormal family {g_m}: padded Schmidt vectors first, then canonical
  // completions; outcome vectors are b_i = sum_m conj(U_full[i,m]) g_m.
  Eigen::MatrixXcd g(dB2, r);
  for (int k = 0; k < r; ++k) {
    const Eigen::VectorXcd& f = sd.right[static_cast<size_t>(k)].amplitudes();
    Eigen::VectorXcd fp = Eigen::VectorXcd::Zero(dB2);
    for (int b = 0; b < dB; ++b) fp(b * anc) = f(b);
    g.col(k) = fp;
  }
  Eigen::MatrixXcd g_ext = complete_orthonormal(g, n);
  Eigen::MatrixXcd outcomes = g_ext * u_full.conjugate().transpose();

  HjwBasis out{.basis = {}, .padded_state = padded, .enlarged = enlarged};
  Eigen::MatrixXcd full_basis = complete_orthonormal(outcomes, dB2);
  out.basis.reserve(static_cast<size_t>(dB2));
  for (int i = 0; i < dB2; ++i) {
    Eigen::VectorXcd col = full_basis.col(i);
    out.basis.emplace_back(col / col.norm());
  }
  return out;
}

Ensemble steer(const BipartiteState& psi, const std::vector<PureState>& basis) {
  require_orthonormal_basis(basis, psi.dims.dimB, "steer");
  CMatrix m = psi.as_matrix();
  std::vector<WeightedState> kept;
  double total = 0.0;
  for (const auto& b : basis) {
    Eigen::VectorXcd v = m.eigen() * b.amplitudes().conjugate();
    double p = v.squaredNorm();
    total += p;
    if (p >= kOutcomeProbabilityFloor) {
      kept.push_back({p, PureState(v / v.norm())});
    }
  }
  if (std::abs(total - 1.0) > kWeightSumTol) {
    fail(ErrorCode::NumericalCrossCheck, "steer: outcome probabilities do not sum to one");
  }
  double kept_sum = 0.0;
  for (const auto& it : kept) kept_sum += it.weight;
  std::vector<WeightedState> items;
  items.reserve(kept.size());
  for (auto& it : kept) items.push_back({it.weight / kept_sum, it.state});
  return Ensemble(std::move(items));
}

PureState von_neumann_premeasurement(const BipartiteState& psi,
                                     const std::vector<PureState>& basis,
                                     int apparatus_dim) {
  require_orthonormal_basis(basis, psi.dims.dimB, "von_neumann_premeasurement");
  const int n = static_cast<int>(basis.size());
  if (apparatus_dim < n) {
    fail(ErrorCode::InvalidArgument,
         "von_neumann_premeasurement: apparatus too small for the basis");
  }
  const int dA = psi.dims.dimA, dB = psi.dims.dimB;
  CMatrix m = psi.as_matrix();
  Eigen::VectorXcd out =
      Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dA) * dB * apparatus_dim);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXcd v = m.eigen() * basis[static_cast<size_t>(i)].amplitudes().conjugate();
    const Eigen::VectorXcd& b = basis[static_cast<size_t>(i)].amplitudes();
    for (int a = 0; a < dA; ++a) {
      for (int beta = 0; beta < dB; ++beta) {
        out((a * dB + beta) * apparatus_dim + i) = v(a) * b(beta);
      }
    }
  }
  return PureState(std::move(out));
}

PureState destructive_measurement(const BipartiteState& psi,
                                  const std::vector<PureState>& basis,
                                  int apparatus_dim) {
  require_orthonormal_basis(basis, psi.dims.dimB, "destructive_measurement");
  const int n = static_cast<int>(basis.size());
  if (apparatus_dim < n) {
    fail(ErrorCode::InvalidArgument,
         "destructive_measurement: apparatus too small for the basis");
  }
  const int dA = psi.dims.dimA;
  CMatrix m = psi.as_matrix();
  Eigen::VectorXcd out =
      Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dA) * apparatus_dim);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXcd v = m.eigen() * basis[static_cast<size_t>(i)].amplitudes().conjugate();
    for (int a = 0; a < dA; ++a) {
      out(a * apparatus_dim + i) = v(a);
    }
  }
  return PureState(std::move(out));
}

ProjectionResult project(const PureState& psi, const CMatrix& projector,
                         const std::vector<int>& dims, int which) {
  long long total = 1;
  for (int d : dims) total *= d;
  if (total != psi.dim() || dims.empty()) {
    fail(ErrorCode::DimensionMismatch, "project: factor dimensions do not match state");
  }
  if (which < 0 || which >= static_cast<int>(dims.size())) {
    fail(ErrorCode::InvalidArgument, "project: factor index out of range");
  }
  const int d = dims[static_cast<size_t>(which)];
  if (projector.rows() != d || projector.cols() != d) {
    fail(ErrorCode::DimensionMismatch, "project: projector dimension mismatch");
  }
  if ((projector.eigen() * projector.eigen() - projector.eigen()).norm() > 1e-10 ||
      projector.hermiticity_defect() > 1e-10) {
    fail(ErrorCode::InvalidArgument, "project: operator is not a projector");
  }
  CMatrix full = CMatrix::identity(1);
  for (size_t f = 0; f < dims.size(); ++f) {
    const CMatrix& factor = (static_cast<int>(f) == which)
                                ? projector
                                : CMatrix::identity(dims[f]);
    full = kron(full, factor);
  }
  Eigen::VectorXcd projected = full.eigen() * psi.amplitudes();
  double p = projected.squaredNorm();
  if (p < kOutcomeProbabilityFloor) {
    fail(ErrorCode::ZeroProbabilityOutcome, "project: zero-probability outcome");
  }
  return {p, PureState(projected / projected.norm())};
}

Ensemble random_ensemble(const DensityOperator& rho, int n, std::uint64_t seed) {
  Ensemble spectral = eigen_ensemble(rho);
  const int r = static_cast<int>(spectral.size());
  if (n < r) {
    fail(ErrorCode::InvalidArgument, "random_ensemble: need n >= rank(rho)");
  }
  Rng rng(seed);
  CMatrix w = haar_isometry(n, r, rng);
  std::vector<WeightedState> items;
  items.reserve(static_cast<size_t>(n));
  const int d = rho.dim();
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
    for (int k = 0; k < r; ++k) {
      const auto& item = spectral.items()[static_cast<size_t>(k)];
      v += w(i, k) * std::sqrt(item.weight) * item.state.amplitudes();
    }
    double weight = v.squaredNorm();
    if (weight < 1e-30) {
      fail(ErrorCode::NumericalCrossCheck, "random_ensemble: degenerate member");
    }
    items.push_back({weight, PureState(v / v.norm())});
  }
  double sum = 0.0;
  for (const auto& it : items) sum += it.weight;
  for (auto& it : items) it.weight /= sum;
  return Ensemble(std::move(items));
}

EnsembleMatch match_ensembles(const Ensemble& expected, const Ensemble& actual) {
  EnsembleMatch out{0.0, 1.0, {}};
  std::vector<bool> used(actual.size(), false);
  for (const auto& e : expected.items()) {
    int best = -1;
    double best_overlap = -1.0;
    for (size_t j = 0; j < actual.size(); ++j) {
      if (used[j]) continue;
      double ov = std::abs(e.state.overlap(actual.items()[j].state));
      if (ov > best_overlap) {
        best_overlap = ov;
        best = static_cast<int>(j);
      }
    }
    if (best < 0) {
      out.max_weight_error = std::max(out.max_weight_error, e.weight);
      out.min_overlap = 0.0;
      out.permutation.push_back(-1);
      continue;
    }
    used[static_cast<size_t>(best)] = true;
    out.permutation.push_back(best);
    out.max_weight_error = std::max(
        out.max_weight_error,
        std::abs(e.weight - actual.items()[static_cast<size_t>(best)].weight));
    out.min_overlap = std::min(out.min_overlap, best_overlap);
  }
  return out;
}

}  // namespace qdyn
