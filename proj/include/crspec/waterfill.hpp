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

namespace crspec {

/// Power allocation over parallel sub-channels together with the dual
/// multipliers that produced it. Multipliers follow the water-level
/// convention: sigma_i = (1 / (nu + sum_k A(k,i) mu_k) - 1 / lambda_i)^+,
/// so for the standard allocator the water level is 1/nu.
struct WfAllocation {
  RVector sigma;
  double nu = 0.0;
  RVector mu;  // one entry per interference constraint (empty when none)
  bool converged = true;

  double total_power() const { return sigma.sum(); }
  /// Rate of the allocation over channels with gains lambda, in bits.
  double rate(RVectorRef lambda) const;
};

/// Standard water-filling: sigma_i = (w - 1/lambda_i)^+ with the water level
/// w chosen so the powers sum exactly to P. Solved in closed form over the
/// active set. Throws on empty lambda or negative P.
WfAllocation standard_wf(RVectorRef lambda, double P);

/// Pointwise multi-level water-filling formula
/// sigma_i = (1/(nu + alpha_i mu) - 1/lambda_i)^+. Throws when any
/// denominator is not positive.
RVector multilevel_wf(RVectorRef lambda, RVectorRef alpha, double nu, double mu);

/// Power allocation under one transmit-power and one interference-power
/// constraint (sum_i alpha_i sigma_i <= gamma): outer bisection on the
/// interference multiplier, inner exact search for the smallest power
/// multiplier meeting the budget. Returns mu = 0 whenever the interference
/// constraint is slack there.
WfAllocation solve_a1(RVectorRef lambda, RVectorRef alpha, double P_t, double gamma);

/// K-constraint generalization: couplings A is K x M (A(k,i) weights
/// sub-channel i in constraint k). Multipliers are found by the ellipsoid
/// method on the dual; on hitting the iteration cap the best feasible
/// iterate is returned with converged = false.
WfAllocation solve_multi_mu(RVectorRef lambda, const RMatrix& A, double P_t,
                            RVectorRef Gamma);

}  // namespace crspec
