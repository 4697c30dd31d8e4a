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

#include "crspec/model.hpp"
#include "crspec/types.hpp"

#include <utility>
#include <vector>

namespace crspec {

/// Orthogonal split of a MISO channel h against the cross channel g:
/// h^H = alpha_h g_hat + beta_h h_perp_hat, with g_hat the unit vector along
/// g^H and h_perp_hat a unit vector orthogonal to it.
struct MisoDecomposition {
  Complex alpha_h;
  Complex beta_h;
  CVector g_hat;
  CVector h_perp_hat;
};

/// Dual variables of the beamformer program: one power price and one price
/// per interference constraint. Feasibility means
/// -h^H h + nu I + sum_k mu_k G_k^H G_k is PSD.
struct DualPoint {
  double nu = 0.0;
  RVector mu;
};

/// Gram–Schmidt split of h against g. When h is parallel to g, h_perp_hat is
/// an arbitrary unit vector orthogonal to g_hat and beta_h = 0. Requires at
/// least two transmit antennas and nonzero h, g.
MisoDecomposition decompose(const CRowVector& h, const CRowVector& g);

/// Closed-form optimal beamformer for one single-antenna primary receiver.
/// Case I (cap slack): the pre-MRC beamformer at full power. Case II: power
/// along g_hat pinned to the cap, the remainder on the orthogonal direction.
/// Degenerate alignments (h orthogonal or parallel to g) are handled in
/// closed form as well; single-antenna transmitters reduce to a scalar rule.
PrecoderResult theorem2_beamformer(const CRowVector& h, const CRowVector& g,
                                   double P_t, double gamma);

/// Optimal MISO beamformer under K interference constraints via the Lagrange
/// dual (a K+1 variable semidefinite feasibility problem solved by the
/// ellipsoid method), with primal recovery from the null space of the
/// stationarity matrix. Caps must be strictly positive. Throws when no null
/// direction can be recovered after refinement retries.
std::pair<DualPoint, PrecoderResult> solve_p5(const CRowVector& h,
                                              const std::vector<CMatrix>& G,
                                              double P_t, RVectorRef Gamma);

}  // namespace crspec
