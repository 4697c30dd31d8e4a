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

#include <vector>

namespace crspec {

/// Parallel sub-channels (OFDM tones or fading blocks) of one secondary link
/// with a single-antenna primary receiver: per-tone channels, one total power
/// budget, and an identical interference cap at every tone.
struct ToneSet {
  std::vector<CMatrix> H;
  std::vector<CRowVector> g;
  double P_t = 0.0;
  double gamma = 0.0;

  int tone_count() const { return static_cast<int>(H.size()); }
  void validate() const;
};

/// Per-tone covariances under a common power price.
struct MultiAllocation {
  std::vector<Covariance> S;
  double nu = 0.0;
  double total_power = 0.0;
  RVector rates;
  double rate_total = 0.0;
  /// Relative duality gap of the outer dual; budget_binding is false when the
  /// whole budget could not be spent under the caps.
  double duality_gap = 0.0;
  bool budget_binding = true;
};

/// Per-tone subproblem: maximize log2|I + H S H^H| - nu Tr(S) subject to the
/// tone's interference cap. Solved by bisection on the cap's multiplier with
/// whitened water-filling inside; a zero cap is eliminated exactly via the
/// null-space restriction.
Covariance solve_p7(CMatrixRef H_j, const CRowVector& g_j, double nu, double gamma);

/// Multi-channel optimum by dual decomposition: outer bisection on the power
/// price, independent per-tone solves inside, and a final budget top-up on
/// the tone with the slackest cap.
MultiAllocation solve_p6(const ToneSet& ts);

/// Suboptimal multi-channel allocation where every tone picks the better of a
/// direct-SVD-style and a projected-SVD-style solution at the current price.
MultiAllocation per_tone_svd_select(const ToneSet& ts);

/// Builds per-tone channels from time-domain taps:
/// tone j = sum_l taps[l] exp(-i 2 pi j l / N). Requires 1 <= L <= N and
/// consistent tap dimensions.
ToneSet gen_ofdm_channels(const std::vector<CMatrix>& h_taps,
                          const std::vector<CRowVector>& g_taps, int N,
                          double P_t, double gamma);

}  // namespace crspec
