// crspec — transmit spatial-spectrum optimization for spectrum-sharing MIMO links
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crspec/matkernel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace crspec {

namespace {

// Rotate column j of U (and the paired column of Q, when given) so that the
// first entry with modulus above the threshold becomes real positive.
void normalize_column_phase(CMatrix& U, CMatrix* Q, Eigen::Index j) {
  const double thresh = 1e-8;
  for (Eigen::Index i = 0; i < U.rows(); ++i) {
    const double mag = std::abs(U(i, j));
    if (mag > thresh) {
      const Complex phase = std::conj(U(i, j)) / mag;
      U.col(j) *= phase;
      if (Q != nullptr) Q->col(j) *= phase;
      return;
    }
  }
}

}  // namespace

SvdFactors svd(CMatrixRef M) {
  if (M.size() == 0 || M.norm() == 0.0) {
    throw std::invalid_argument("svd: all-zero matrix");
  }
  Eigen::JacobiSVD<CMatrix> dec(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = dec.singularValues();
  const double cutoff = kRankCutoff * s(0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;

  SvdFactors f;
  f.Q = dec.matrixU().leftCols(r);
  f.U = dec.matrixV().leftCols(r);
  f.lambda = s.head(r).array().square();
  for (Eigen::Index j = 0; j < r; ++j) normalize_column_phase(f.U, &f.Q, j);
  return f;
}

std::pair<CMatrix, RVector> herm_eig(CMatrixRef A) {
  if (A.rows() != A.cols()) {
    throw std::invalid_argument("herm_eig: matrix not square");
  }
  const double asym = (A - A.adjoint()).norm();
  if (asym > 1e-10 * std::max(1.0, A.norm())) {
    throw std::invalid_argument("herm_eig: matrix not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es((A + A.adjoint()) / 2.0);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("herm_eig: eigensolver failed");
  }
  const Eigen::Index n = A.rows();
  CMatrix V(n, n);
  RVector d(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    V.col(j) = es.eigenvectors().col(n - 1 - j);
    d(j) = es.eigenvalues()(n - 1 - j);
  }
  for (Eigen::Index j = 0; j < n; ++j) normalize_column_phase(V, nullptr, j);
  return {std::move(V), std::move(d)};
}

CMatrix null_projector(CMatrixRef U_sel) {
  const Eigen::Index m = U_sel.rows();
  if (U_sel.cols() > 0) {
    const CMatrix gram = U_sel.adjoint() * U_sel;
    const CMatrix eye = CMatrix::Identity(U_sel.cols(), U_sel.cols());
    if ((gram - eye).norm() > 1e-8) {
      throw std::invalid_argument("null_projector: columns not orthonormal");
    }
  }
  return CMatrix::Identity(m, m) - U_sel * U_sel.adjoint();
}

CMatrix null_basis(CMatrixRef Z) {
  const Eigen::Index n = Z.cols();
  if (Z.rows() == 0 || Z.norm() == 0.0) return CMatrix::Identity(n, n);
  Eigen::JacobiSVD<CMatrix> dec(Z, Eigen::ComputeFullV);
  const RVector& s = dec.singularValues();
  const double cutoff = kRankCutoff * s(0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cutoff) ++r;
  return dec.matrixV().rightCols(n - r);
}

CMatrix inv_sqrt_psd(CMatrixRef A) {
  auto [V, d] = herm_eig(A);
  const double d_max = d.size() > 0 ? d(0) : 0.0;
  if (d.size() == 0 || d(d.size() - 1) <= 1e-14 * std::max(d_max, 0.0) ||
      d(d.size() - 1) <= 0.0) {
    throw std::domain_error("inv_sqrt_psd: matrix singular or indefinite");
  }
  return V * d.array().rsqrt().matrix().asDiagonal() * V.adjoint();
}

double max_squared_singular_value(CMatrixRef A) {
  Eigen::JacobiSVD<CMatrix> dec(A);
  const double s = dec.singularValues()(0);
  return s * s;
}

}  // namespace crspec
