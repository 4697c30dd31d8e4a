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

#include "crspec/theory.hpp"

#include "crspec/matkernel.hpp"
#include "crspec/model.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace crspec {

double capacity_loss_bound(int M_k, int N_k, double Gamma_k, double phi_k) {
  if (M_k < 1 || N_k < 1 || Gamma_k < 0.0 || !(phi_k > 0.0)) {
    throw std::invalid_argument("capacity_loss_bound: invalid arguments");
  }
  return std::min(M_k, N_k) * std::log2(1.0 + Gamma_k / phi_k);
}

double capacity_loss_actual(const PrimaryLink& p) {
  if (!(p.phi_k > 0.0)) throw std::invalid_argument("capacity_loss_actual: phi_k <= 0");
  const Eigen::Index mk = p.H_k.rows();
  const CMatrix Q = p.G_k * p.S * p.G_k.adjoint();
  const CMatrix W = inv_sqrt_psd(
      (p.phi_k * CMatrix::Identity(mk, mk) + Q).eval());
  const double c1 = achievable_rate(p.S_k, (W * p.H_k).eval());
  const double c2 = achievable_rate(p.S_k, (p.H_k / std::sqrt(p.phi_k)).eval());
  return std::max(c2 - c1, 0.0);
}

double multiplexing_slope(const std::function<double(double)>& rate_fn,
                          RVectorRef P_grid) {
  const Eigen::Index n = P_grid.size();
  if (n < 2) throw std::invalid_argument("multiplexing_slope: need >= 2 grid points");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(P_grid(i) > 0.0) || (i > 0 && P_grid(i) <= P_grid(i - 1))) {
      throw std::invalid_argument("multiplexing_slope: grid not increasing positive");
    }
  }
  if (P_grid(n - 1) / P_grid(0) < 100.0 * (1.0 - 1e-12)) {
    throw std::invalid_argument("multiplexing_slope: grid spans under two decades");
  }

  std::vector<Eigen::Index> top;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (P_grid(i) >= P_grid(n - 1) / 10.0 * (1.0 - 1e-12)) top.push_back(i);
  }
  if (top.size() < 2) top = {n - 2, n - 1};

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (Eigen::Index i : top) {
    const double x = std::log2(P_grid(i));
    const double y = rate_fn(P_grid(i));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double c = static_cast<double>(top.size());
  return (c * sxy - sx * sy) / (c * sxx - sx * sx);
}

}  // namespace crspec
