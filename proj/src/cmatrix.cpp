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

#include "qdyn/cmatrix.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qdyn {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << op << ": shape mismatch " << a.rows() << "x" << a.cols() << " vs "
       << b.rows() << "x" << b.cols();
    fail(ErrorCode::DimensionMismatch, os.str());
  }
}

void require_bipartite(const CMatrix& m, DimPair dims, const char* op) {
  if (dims.dimA <= 0 || dims.dimB <= 0) {
    fail(ErrorCode::InvalidArgument, std::string(op) + ": nonpositive factor dimension");
  }
  if (!m.is_square() || m.rows() != dims.total()) {
    std::ostringstream os;
    os << op << ": matrix side " << m.rows() << " does not equal dimA*dimB = "
       << dims.total();
    fail(ErrorCode::DimensionMismatch, os.str());
  }
}

// Rephases each column so that its entry of largest magnitude (first index
// on ties) becomes real nonnegative. When `companion` is given, its columns
// receive the same phase, keeping products of the form U S V^dag invariant.
void fix_column_phases(Eigen::MatrixXcd& m, Eigen::MatrixXcd* companion) {
  for (Eigen::Index k = 0; k < m.cols(); ++k) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      double a = std::abs(m(i, k));
      if (a > best) {  // strict: first index wins ties
        best = a;
        imax = i;
      }
    }
    if (best <= 0.0) continue;
    Complex phase = m(imax, k) / best;
    Complex rot = std::conj(phase);
    m.col(k) *= rot;
    m(imax, k) = Complex(std::abs(m(imax, k)), 0.0);  // scrub rounding residue
    if (companion != nullptr && k < companion->cols()) companion->col(k) *= rot;
  }
}

}  // namespace

CMatrix::CMatrix(int rows, int cols) {
  if (rows <= 0 || cols <= 0) {
    fail(ErrorCode::InvalidArgument, "CMatrix: dimensions must be positive");
  }
  m_ = Eigen::MatrixXcd::Zero(rows, cols);
}

CMatrix CMatrix::from_row_major(int rows, int cols,
                                const std::vector<Complex>& entries) {
  if (rows <= 0 || cols <= 0) {
    fail(ErrorCode::InvalidArgument, "CMatrix: dimensions must be positive");
  }
  if (entries.size() != static_cast<size_t>(rows) * static_cast<size_t>(cols)) {
    fail(ErrorCode::DimensionMismatch,
         "CMatrix: entry count does not equal rows*cols");
  }
  CMatrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      out(i, j) = entries[static_cast<size_t>(i) * cols + j];
    }
  }
  if (!out.all_finite()) {
    fail(ErrorCode::InvalidArgument, "CMatrix: non-finite entry");
  }
  return out;
}

CMatrix CMatrix::identity(int n) {
  return CMatrix(Eigen::MatrixXcd::Identity(n, n));
}

CMatrix CMatrix::zero(int rows, int cols) { return CMatrix(rows, cols); }

double CMatrix::hermiticity_defect() const {
  if (!is_square()) fail(ErrorCode::DimensionMismatch, "hermiticity: not square");
  return (m_ - m_.adjoint()).norm();
}

bool CMatrix::is_hermitian(double tol_factor) const {
  return hermiticity_defect() <= tol_factor * frobenius_norm() + 1e-300;
}

bool CMatrix::all_finite() const {
  for (Eigen::Index i = 0; i < m_.rows(); ++i) {
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      if (!std::isfinite(m_(i, j).real()) || !std::isfinite(m_(i, j).imag())) {
        return false;
      }
    }
  }
  return true;
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
  require_same_shape(*this, o, "operator+");
  return CMatrix(m_ + o.m_);
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
  require_same_shape(*this, o, "operator-");
  return CMatrix(m_ - o.m_);
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
  if (cols() != o.rows()) {
    fail(ErrorCode::DimensionMismatch, "operator*: inner dimensions differ");
  }
  return CMatrix(m_ * o.m_);
}

bool approx_equal(const CMatrix& a, const CMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  double scale = std::max(1.0, a.frobenius_norm());
  return (a.eigen() - b.eigen()).norm() <= tol * scale;
}

CMatrix matrix_unit(int d, int i, int j) {
  CMatrix e(d, d);
  e(i, j) = Complex(1.0, 0.0);
  return e;
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m(0, 1) = Complex(0.0, -1.0);
  m(1, 0) = Complex(0.0, 1.0);
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

CMatrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix m(2, 2);
  m(0, 0) = s;
  m(0, 1) = s;
  m(1, 0) = s;
  m(1, 1) = -s;
  return m;
}

Eigen::VectorXcd vec(const CMatrix& x) {
  return Eigen::Map<const Eigen::VectorXcd>(x.eigen().data(),
                                            x.rows() * static_cast<Eigen::Index>(x.cols()));
}

CMatrix unvec(const Eigen::VectorXcd& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols) {
    fail(ErrorCode::DimensionMismatch, "unvec: length does not equal rows*cols");
  }
  Eigen::MatrixXcd m =
      Eigen::Map<const Eigen::MatrixXcd>(v.data(), rows, cols);
  return CMatrix(std::move(m));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  const int m = a.rows(), n = a.cols(), p = b.rows(), q = b.cols();
  CMatrix out(m * p, n * q);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      out.eigen().block(i * p, j * q, p, q) = a(i, j) * b.eigen();
    }
  }
  return out;
}

CMatrix partial_trace(const CMatrix& m, DimPair dims, Subsystem traced_out) {
  require_bipartite(m, dims, "partial_trace");
  const int dA = dims.dimA, dB = dims.dimB;
  if (traced_out == Subsystem::B) {
    CMatrix out(dA, dA);
    for (int a = 0; a < dA; ++a) {
      for (int b = 0; b < dA; ++b) {
        Complex s = 0.0;
        for (int beta = 0; beta < dB; ++beta) {
          s += m(a * dB + beta, b * dB + beta);
        }
        out(a, b) = s;
      }
    }
    return out;
  }
  CMatrix out(dB, dB);
  for (int alpha = 0; alpha < dB; ++alpha) {
    for (int beta = 0; beta < dB; ++beta) {
      Complex s = 0.0;
      for (int a = 0; a < dA; ++a) {
        s += m(a * dB + alpha, a * dB + beta);
      }
      out(alpha, beta) = s;
    }
  }
  return out;
}

CMatrix partial_transpose(const CMatrix& m, DimPair dims, Subsystem which) {
  require_bipartite(m, dims, "partial_transpose");
  const int dA = dims.dimA, dB = dims.dimB;
  CMatrix out(dA * dB, dA * dB);
  for (int a = 0; a < dA; ++a) {
    for (int b = 0; b < dA; ++b) {
      for (int alpha = 0; alpha < dB; ++alpha) {
        for (int beta = 0; beta < dB; ++beta) {
          if (which == Subsystem::A) {
            out(a * dB + alpha, b * dB + beta) = m(b * dB + alpha, a * dB + beta);
          } else {
            out(a * dB + alpha, b * dB + beta) = m(a * dB + beta, b * dB + alpha);
          }
        }
      }
    }
  }
  return out;
}

HermitianEig eig_hermitian(const CMatrix& h) {
  if (!h.is_square()) fail(ErrorCode::DimensionMismatch, "eig_hermitian: not square");
  if (!h.is_hermitian()) {
    fail(ErrorCode::NotHermitian, "eig_hermitian: input exceeds Hermiticity tolerance");
  }
  Eigen::MatrixXcd sym = 0.5 * (h.eigen() + h.eigen().adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym);
  if (es.info() != Eigen::Success) {
    fail(ErrorCode::NumericalCrossCheck, "eig_hermitian: solver failed");
  }
  HermitianEig out;
  out.eigenvalues.assign(es.eigenvalues().data(),
                         es.eigenvalues().data() + es.eigenvalues().size());
  Eigen::MatrixXcd vectors = es.eigenvectors();
  fix_column_phases(vectors, nullptr);
  out.eigenvectors = CMatrix(std::move(vectors));
  return out;
}

Svd svd(const CMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> solver(
      m.eigen(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXcd u = solver.matrixU();
  Eigen::MatrixXcd v = solver.matrixV();
  fix_column_phases(u, &v);
  Svd out;
  out.singular_values.assign(
      solver.singularValues().data(),
      solver.singularValues().data() + solver.singularValues().size());
  out.u = CMatrix(std::move(u));
  out.v = CMatrix(std::move(v));
  return out;
}

CMatrix expm(const CMatrix& m) {
  if (!m.is_square()) fail(ErrorCode::DimensionMismatch, "expm: not square");
  return CMatrix(m.eigen().exp());
}

double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
  require_same_shape(rho, sigma, "trace_distance");
  if (!rho.is_hermitian() || !sigma.is_hermitian()) {
    fail(ErrorCode::NotHermitian, "trace_distance: inputs must be Hermitian");
  }
  HermitianEig e = eig_hermitian(rho - sigma);
  double acc = 0.0;
  for (double lambda : e.eigenvalues) acc += std::abs(lambda);
  return 0.5 * acc;
}

std::vector<OperatorSchmidtTerm> operator_schmidt(const CMatrix& sigma,
                                                  DimPair dims) {
  require_bipartite(sigma, dims, "operator_schmidt");
  const int dA = dims.dimA, dB = dims.dimB;
  // Reshuffle: R[a + b*dA, alpha + beta*dB] = sigma[(a,alpha),(b,beta)], so
  // that sigma = sum_k xi_k kron chi_k becomes the rank decomposition
  // R = sum_k vec(xi_k) vec(chi_k)^T.
  CMatrix r(dA * dA, dB * dB);
  for (int a = 0; a < dA; ++a) {
    for (int b = 0; b < dA; ++b) {
      for (int alpha = 0; alpha < dB; ++alpha) {
        for (int beta = 0; beta < dB; ++beta) {
          r(a + b * dA, alpha + beta * dB) = sigma(a * dB + alpha, b * dB + beta);
        }
      }
    }
  }
  Svd dec = svd(r);
  std::vector<OperatorSchmidtTerm> terms;
  const double smax = dec.singular_values.empty() ? 0.0 : dec.singular_values[0];
  for (size_t k = 0; k < dec.singular_values.size(); ++k) {
    double s = dec.singular_values[k];
    if (s <= 1e-12 * smax || s == 0.0) break;
    double root = std::sqrt(s);
    Eigen::VectorXcd left = root * dec.u.eigen().col(static_cast<Eigen::Index>(k));
    Eigen::VectorXcd right =
        root * dec.v.eigen().col(static_cast<Eigen::Index>(k)).conjugate();
    terms.push_back({unvec(left, dA, dA), unvec(right, dB, dB)});
  }
  return terms;
}

}  // namespace qdyn
