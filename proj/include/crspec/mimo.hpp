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

#include <stdexcept>
#include <utility>

namespace crspec {

/// Number of dominant directions of the cap-normalized cross channel that the
/// hybrid precoder nulls. b = 0 degenerates to the direct-channel SVD, and
/// b = min(M_ts, M_rp) (when admissible) to the fully projected SVD.
struct HybridConfig {
  int b = 0;
};

/// Raised when the fully projected precoder cannot be built because the
/// transmit array is not larger than the total number of protected antennas.
class PsvdNotImplementable : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Closed-form maximizer of log2|I + H S H^H| - Tr(A S) over S PSD, for a
/// positive definite price matrix A: whitened water-filling with a fixed
/// level. `value` is the attained objective in bits.
struct PricedWf {
  CMatrix S;
  double value = 0.0;
  double rate = 0.0;
};
PricedWf priced_waterfill(CMatrixRef H, CMatrixRef A);

/// Capacity-achieving covariance without interference constraints: SVD of H
/// plus water-filling at the given budget.
PrecoderResult unconstrained_capacity(CMatrixRef H, double P_t);

/// Exact solver for the rate-maximization problem under one transmit-power
/// and K interference-power constraints, via the Lagrangian dual (ellipsoid
/// over the K+1 multipliers, whitened water-filling inside). Zero caps are
/// eliminated exactly by restricting to the cross-channel null space. The
/// result carries a relative duality-gap certificate; on hitting the
/// iteration cap the best feasible iterate is returned with converged=false.
PrecoderResult solve_p1(const ChannelSet& cs);

/// Direct-channel SVD precoder: directions from the SVD of H, powers from the
/// multi-level water-filling allocators.
PrecoderResult dsvd(const ChannelSet& cs);

/// Projected-channel SVD precoder: H is first projected into the null space
/// of all cross channels, making the interference exactly zero. Throws
/// PsvdNotImplementable when M_ts <= M_rp.
PrecoderResult psvd(const ChannelSet& cs);

/// Hybrid precoder: nulls only the b dominant singular directions of the
/// cap-normalized stacked cross channel, then reallocates power so the
/// residual interference meets every cap.
PrecoderResult hybrid(const ChannelSet& cs, const HybridConfig& cfg);

/// Sweeps every admissible b and returns the best-rate configuration; ties
/// break toward smaller b.
std::pair<HybridConfig, PrecoderResult> best_hybrid(const ChannelSet& cs);

/// Isotropic spectrum S = (P/M_ts) I with P backed off from the budget just
/// enough to satisfy every interference cap.
PrecoderResult white_spectrum(const ChannelSet& cs);

}  // namespace crspec
