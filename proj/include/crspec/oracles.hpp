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

#include <vector>

namespace crspec::oracles {

// Brute-force references used by the verification suites. Everything here
// evaluates objectives directly from their defining formulas and never calls
// into the solvers it is checking.

/// Max of sum_i log2(1 + lambda_i s_i) over an n x n grid of (s_1, s_2) with
/// s_1 + s_2 <= P_t and alpha_1 s_1 + alpha_2 s_2 <= gamma.
double grid_rate_two_subchannels(double lambda1, double lambda2, double alpha1,
                                 double alpha2, double P_t, double gamma, int n);

/// Max of log2(1 + |h v|^2) - nu |v|^2 for real 2-dim channels with
/// |g v|^2 <= gamma, over an n x n grid of (power, angle).
double grid_p7_objective_miso_real(const Eigen::Vector2d& h,
                                   const Eigen::Vector2d& g, double nu,
                                   double gamma, int n);

/// Max of log2(1 + (alpha_h a + beta_h b)^2) over an n x n grid of the real
/// beamformer weights with a^2 <= gamma/|g|^2 and a^2 + b^2 <= P_t.
double grid_beamformer_rate_real(double alpha_h, double beta_h, double g_norm2,
                                 double P_t, double gamma, int n);

/// Max of log2(1 + |h v|^2) for real 2-dim v = sqrt(p) (cos t, sin t) with
/// |v|^2 <= P_t and |G_k v|^2 <= Gamma_k, over n_theta angles with the power
/// maximized exactly along each direction.
double grid_p5_rate_real(const Eigen::Vector2d& h,
                         const std::vector<Eigen::Matrix<double, Eigen::Dynamic, 2>>& G,
                         double P_t, const std::vector<double>& Gamma, int n_theta);

/// Water level for sigma_i = (w - 1/lambda_i)^+ summing to P, found by plain
/// bisection on w.
double wf_level_by_bisection(RVectorRef lambda, double P);

}  // namespace crspec::oracles
