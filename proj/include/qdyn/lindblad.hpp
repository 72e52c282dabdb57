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

#include <vector>

#include "qdyn/maps.hpp"
#include "qdyn/states.hpp"

namespace qdyn {

/// Hamiltonian plus jump operators, hbar = 1.
struct LindbladGenerator {
  CMatrix hamiltonian;
  std::vector<CMatrix> jumps;

  LindbladGenerator(CMatrix h, std::vector<CMatrix> js);
  int dim() const { return hamiltonian.rows(); }
};

/// Superoperator of the generator:
/// L(rho) = -i[H, rho] + sum_j (L_j rho L_j^dag - (1/2){rho, L_j^dag L_j}).
/// The returned LinearMap is the generator itself, not a finite-time map.
LinearMap liouvillian(const LindbladGenerator& g);

/// Right-hand side evaluated directly from the commutator/dissipator
/// algebra; independent of the superoperator construction and used as the
/// cross-checking integration path.
CMatrix lindblad_rhs(const LindbladGenerator& g, const CMatrix& rho);

/// Finite-time map exp(t L) as a LinearMap.
LinearMap propagator(const LindbladGenerator& g, double t);

/// rho(t) by superoperator exponential, cross-checked against a fixed-step
/// RK4 integration of lindblad_rhs; disagreement beyond 1e-7 trace distance
/// is an error. t must be nonnegative (the semigroup is forward-only).
DensityOperator propagate(const LindbladGenerator& g, const DensityOperator& rho0,
                          double t);

struct CptpCertificateEntry {
  double time;
  double trace_defect;
  double min_choi_eigenvalue;
  bool pass;
};

/// For each time, builds exp(t L) and reports its trace-preservation defect
/// and minimum Choi eigenvalue against the CPTP thresholds.
std::vector<CptpCertificateEntry> cptp_certificate(const LindbladGenerator& g,
                                                   const std::vector<double>& times);

/// tr(rho^2).
double purity(const DensityOperator& rho);

}  // namespace qdyn
