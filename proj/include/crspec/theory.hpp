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

#include <functional>

namespace crspec {

/// One protected link together with the secondary spectrum interfering with
/// it: primary channel H_k (receive x transmit), primary transmit covariance
/// S_k, receiver noise power phi_k, the cross channel G_k from the secondary
/// transmitter and the secondary covariance S.
struct PrimaryLink {
  CMatrix H_k;
  CMatrix S_k;
  double phi_k = 1.0;
  CMatrix G_k;
  CMatrix S;
};

/// Worst-case rate loss of a protected link whose received interference power
/// is capped: min(M_k, N_k) * log2(1 + Gamma_k / phi_k) bits.
double capacity_loss_bound(int M_k, int N_k, double Gamma_k, double phi_k);

/// Actual rate loss of the protected link caused by the interference
/// covariance G_k S G_k^H (capacity without minus capacity with it).
double capacity_loss_actual(const PrimaryLink& p);

/// Least-squares slope of rate against log2(P) over the top decade of an
/// increasing power grid spanning at least two decades.
double multiplexing_slope(const std::function<double(double)>& rate_fn,
                          RVectorRef P_grid);

}  // namespace crspec
