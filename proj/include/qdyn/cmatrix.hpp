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

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qdyn/error.hpp"

namespace qdyn {

using Complex = std::complex<double>;

// Tolerances shared across the toolkit.
//
// kHermTolFactor scales with the Frobenius norm of the operator under test;
// kReconTol is the relative Frobenius tolerance for decomposition round
// trips; kPsdEigenvalueFloor is the absolute eigenvalue floor below which a
// nominally positive operator counts as violated.
inline constexpr double kHermTolFactor = 1e-9;
inline constexpr double kReconTol = 1e-10;
inline constexpr double kPsdEigenvalueFloor = -1e-9;
inline constexpr double kOutcomeProbabilityFloor = 1e-12;

enum class Subsystem { A, B };

/// Dimensions of the two factors of a bipartite space.
struct DimPair {
  int dimA = 0;
  int dimB = 0;

  int total() const { return dimA * dimB; }
};

/// Dense complex matrix. Wraps an Eigen matrix; external (de)serialization
/// is row-major per the shared matrix literal convention.
class CMatrix {
 public:
  CMatrix() : m_(0, 0) {}
  CMatrix(int rows, int cols);
  explicit CMatrix(Eigen::MatrixXcd m) : m_(std::move(m)) {}

  /// Builds from a row-major entry sequence; rejects non-finite entries.
  static CMatrix from_row_major(int rows, int cols,
                                const std::vector<Complex>& entries);
  static CMatrix identity(int n);
  static CMatrix zero(int rows, int cols);

  int rows() const { return static_cast<int>(m_.rows()); }
  int cols() const { return static_cast<int>(m_.cols()); }
  bool is_square() const { return rows() == cols(); }

  Complex& operator()(int i, int j) { return m_(i, j); }
  const Complex& operator()(int i, int j) const { return m_(i, j); }

  const Eigen::MatrixXcd& eigen() const { return m_; }
  Eigen::MatrixXcd& eigen() { return m_; }

  CMatrix dagger() const { return CMatrix(m_.adjoint()); }
  CMatrix transpose() const { return CMatrix(m_.transpose()); }
  CMatrix conjugate() const { return CMatrix(m_.conjugate()); }

  Complex trace() const { return m_.trace(); }
  double frobenius_norm() const { return m_.norm(); }
  double hermiticity_defect() const;  // ||M - M^dag||_F
  bool is_hermitian(double tol_factor = kHermTolFactor) const;
  bool all_finite() const;

  CMatrix operator+(const CMatrix& o) const;
  CMatrix operator-(const CMatrix& o) const;
  CMatrix operator*(const CMatrix& o) const;
  CMatrix operator*(Complex s) const { return CMatrix(m_ * s); }
  CMatrix operator*(double s) const { return CMatrix(m_ * s); }

 private:
  Eigen::MatrixXcd m_;
};

inline CMatrix operator*(Complex s, const CMatrix& m) { return m * s; }
inline CMatrix operator*(double s, const CMatrix& m) { return m * s; }

/// ||a - b||_F <= tol * max(1, ||a||_F).
bool approx_equal(const CMatrix& a, const CMatrix& b, double tol = kReconTol);

/// Matrix unit E_ij of dimension d (1 at row i, column j).
CMatrix matrix_unit(int d, int i, int j);

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
CMatrix hadamard();

// Column-stacking convention used throughout: vec(X) stacks the columns of X
// top to bottom, so entry (i, j) lands at position i + j*rows. Every
// superoperator in the maps and lindblad modules acts on vectors in this
// convention; vec(A X B) = (B^T kron A) vec(X).
Eigen::VectorXcd vec(const CMatrix& x);
CMatrix unvec(const Eigen::VectorXcd& v, int rows, int cols);

/// Kronecker product with block structure A[i,j] * B.
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Trace over the selected factor of a (dimA*dimB)-dimensional operator.
CMatrix partial_trace(const CMatrix& m, DimPair dims, Subsystem traced_out);

/// Transposition applied to the selected factor only.
CMatrix partial_transpose(const CMatrix& m, DimPair dims, Subsystem which);

struct HermitianEig {
  std::vector<double> eigenvalues;  // ascending
  CMatrix eigenvectors;             // columns, phase-fixed
};

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascend; each
/// eigenvector is rephased so its entry of largest magnitude (first such
/// index on ties) is real and nonnegative.
HermitianEig eig_hermitian(const CMatrix& h);

struct Svd {
  CMatrix u;
  std::vector<double> singular_values;  // descending
  CMatrix v;                            // M = U diag(s) V^dag
};

/// Singular value decomposition. The phase convention is applied to the
/// columns of U; the columns of V carry the compensating phase so that
/// U diag(s) V^dag reproduces the input.
Svd svd(const CMatrix& m);

/// Matrix exponential (scaling-and-squaring Pade).
CMatrix expm(const CMatrix& m);

/// (1/2) sum |eig(rho - sigma)| for Hermitian rho, sigma.
double trace_distance(const CMatrix& rho, const CMatrix& sigma);

struct OperatorSchmidtTerm {
  CMatrix left;   // on factor A
  CMatrix right;  // on factor B
};

/// Minimal sum-of-products decomposition sigma = sum_k left_k kron right_k,
/// obtained from the SVD of the reshuffled matrix.
std::vector<OperatorSchmidtTerm> operator_schmidt(const CMatrix& sigma,
                                                  DimPair dims);

}  // namespace qdyn
