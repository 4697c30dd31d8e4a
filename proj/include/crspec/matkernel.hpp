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

#pragma once

#include "crspec/types.hpp"

#include <utility>

namespace crspec {

/// Thin SVD of a channel matrix M = Q diag(sqrt(lambda)) U^H with only the
/// positive singular directions kept. `lambda` holds squared singular values
/// sorted nonincreasing; Q and U have orthonormal columns. Column phases are
/// normalized so the first significant entry of each U column is real
/// positive, which makes factorizations reproducible across runs.
struct SvdFactors {
  CMatrix Q;       // rows x r
  RVector lambda;  // r squared singular values, descending
  CMatrix U;       // cols x r
};

/// Thin SVD with the deterministic phase convention. Singular values below
/// kRankCutoff * sigma_max are dropped. Throws std::invalid_argument on an
/// all-zero matrix.
SvdFactors svd(CMatrixRef M);

/// Hermitian eigendecomposition A = V diag(d) V^H with d real and sorted
/// nonincreasing. Throws if A is not Hermitian within tolerance.
std::pair<CMatrix, RVector> herm_eig(CMatrixRef A);

/// Projector onto the orthogonal complement of the columns of U_sel:
/// P = I - U_sel U_sel^H. U_sel must have orthonormal columns (1e-8).
CMatrix null_projector(CMatrixRef U_sel);

/// Orthonormal basis of the right null space of Z (columns span
/// {x : Z x = 0}). Returns a cols x (cols - rank) matrix; may have zero
/// columns when Z has full column rank.
CMatrix null_basis(CMatrixRef Z);

/// Inverse principal square root of a Hermitian positive definite matrix:
/// returns B with B A B = I. Throws std::domain_error when A is singular or
/// indefinite.
CMatrix inv_sqrt_psd(CMatrixRef A);

/// Largest eigenvalue of A^H A (squared spectral norm).
double max_squared_singular_value(CMatrixRef A);

}  // namespace crspec
