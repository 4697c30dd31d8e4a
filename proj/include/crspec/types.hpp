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

#include <Eigen/Dense>
#include <complex>

namespace crspec {

using Real = double;
using Complex = std::complex<double>;

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Read-only views that bind matrix lvalues and blocks without copying.
using CMatrixRef = Eigen::Ref<const CMatrix>;
using RVectorRef = Eigen::Ref<const RVector>;

inline constexpr double kLn2 = 0.6931471805599453;

// Relative cutoff below which singular values count as zero.
inline constexpr double kRankCutoff = 1e-12;

}  // namespace crspec
