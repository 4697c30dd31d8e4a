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

#include "crspec/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

namespace crspec::oracles {

namespace {

// Exhaustive scan of f over an n x n lattice on [0,a_max] x [0,b_max]
// (feasible points only), followed by one zoomed rescan around the coarse
// argmax so discretization error does not mask solver defects.
template <class Feasible, class Objective>
double scan2d(double a_max, double b_max, int n, const Feasible& ok,
              const Objective& f) {
  double best = -1e300;
  double best_a = 0.0, best_b = 0.0;
  auto sweep = [&](double a_lo, double a_hi, double b_lo, double b_hi) {
    const double da = (a_hi - a_lo) / n;
    const double db = (b_hi - b_lo) / n;
    for (int i = 0; i <= n; ++i) {
      const double a = a_lo + i * da;
      for (int j = 0; j <= n; ++j) {
        const double b = b_lo + j * db;
        if (!ok(a, b)) continue;
        const double v = f(a, b);
        if (v > best) {
          best = v;
          best_a = a;
          best_b = b;
        }
      }
    }
  };
  sweep(0.0, a_max, 0.0, b_max);
  const double wa = 2.0 * a_max / n;
  const double wb = 2.0 * b_max / n;
  sweep(std::max(0.0, best_a - wa), std::min(a_max, best_a + wa),
        std::max(0.0, best_b - wb), std::min(b_max, best_b + wb));
  return best;
}

}  // namespace

double grid_rate_two_subchannels(double lambda1, double lambda2, double alpha1,
                                 double alpha2, double P_t, double gamma, int n) {
  const auto ok = [&](double s1, double s2) {
    return s1 >= 0.0 && s2 >= 0.0 && s1 + s2 <= P_t &&
           alpha1 * s1 + alpha2 * s2 <= gamma;
  };
  const auto f = [&](double s1, double s2) {
    return std::log2(1.0 + lambda1 * s1) + std::log2(1.0 + lambda2 * s2);
  };
  double best = scan2d(P_t, P_t, n, ok, f);
  // The maximum often sits on a constraint line the lattice only grazes;
  // walk each boundary segment at grid resolution as well.
  auto line = [&](const std::function<std::pair<double, double>(double)>& pt) {
    double lo = 0.0, hi = 1.0, b_t = 0.0, b_v = -1e300;
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= n; ++i) {
        const double t = lo + (hi - lo) * i / n;
        const auto [s1, s2] = pt(t);
        if (!ok(s1, s2)) continue;
        const double v = f(s1, s2);
        if (v > b_v) {
          b_v = v;
          b_t = t;
        }
      }
      const double w = 2.0 * (hi - lo) / n;
      lo = std::max(0.0, b_t - w);
      hi = std::min(1.0, b_t + w);
    }
    best = std::max(best, b_v);
  };
  line([&](double t) { return std::pair{t * P_t, (1.0 - t) * P_t}; });
  if (alpha2 > 0.0) {
    line([&](double t) {
      const double s1 = t * std::min(P_t, gamma / std::max(alpha1, 1e-300));
      return std::pair{s1, (gamma - alpha1 * s1) / alpha2};
    });
  } else if (alpha1 > 0.0) {
    line([&](double t) { return std::pair{gamma / alpha1, t * P_t}; });
  }
  return best;
}

double grid_p7_objective_miso_real(const Eigen::Vector2d& h,
                                   const Eigen::Vector2d& g, double nu,
                                   double gamma, int n) {
  // Power beyond 1/(nu ln 2) can never pay for its price.
  const double ln2 = 0.6931471805599453;
  const double p_max = 1.0 / (nu * ln2);
  double best = scan2d(
      M_PI, p_max, n,
      [&](double theta, double p) {
        const Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
        const double gd = g.dot(dir);
        return gd * gd * p <= gamma;
      },
      [&](double theta, double p) {
        const Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
        const double hv = h.dot(dir);
        return std::log2(1.0 + hv * hv * p) - nu * p;
      });
  // Exact scalar maximization along each direction removes the power-axis
  // discretization at the cap boundary.
  for (int i = 0; i <= n * 4; ++i) {
    const double theta = M_PI * i / (n * 4);
    const Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
    const double h2 = h.dot(dir) * h.dot(dir);
    const double g2 = g.dot(dir) * g.dot(dir);
    double p = h2 > 0.0 ? std::max(1.0 / (nu * ln2) - 1.0 / h2, 0.0) : 0.0;
    if (g2 * p > gamma) p = gamma / g2;
    best = std::max(best, std::log2(1.0 + h2 * p) - nu * p);
  }
  return std::max(best, 0.0);
}

double grid_beamformer_rate_real(double alpha_h, double beta_h, double g_norm2,
                                 double P_t, double gamma, int n) {
  const double a_cap = std::sqrt(std::min(P_t, gamma / g_norm2));
  const double b_cap = std::sqrt(P_t);
  return scan2d(
      a_cap, b_cap, n,
      [&](double a, double b) { return a * a + b * b <= P_t; },
      [&](double a, double b) {
        const double s = alpha_h * a + beta_h * b;
        return std::log2(1.0 + s * s);
      });
}

double grid_p5_rate_real(const Eigen::Vector2d& h,
                         const std::vector<Eigen::Matrix<double, Eigen::Dynamic, 2>>& G,
                         double P_t, const std::vector<double>& Gamma, int n_theta) {
  double best = -1e300;
  double best_theta = 0.0;
  auto value = [&](double theta) {
    const Eigen::Vector2d dir(std::cos(theta), std::sin(theta));
    double p = P_t;
    for (size_t k = 0; k < G.size(); ++k) {
      const double gk = (G[k] * dir).squaredNorm();
      if (gk > 1e-300) p = std::min(p, Gamma[k] / gk);
    }
    const double hv = h.dot(dir);
    return std::log2(1.0 + hv * hv * p);
  };
  for (int i = 0; i < n_theta; ++i) {
    const double theta = M_PI * i / n_theta;
    const double v = value(theta);
    if (v > best) {
      best = v;
      best_theta = theta;
    }
  }
  const double w = 2.0 * M_PI / n_theta;
  for (int i = 0; i <= n_theta; ++i) {
    const double theta = best_theta - w + 2.0 * w * i / n_theta;
    best = std::max(best, value(theta));
  }
  return best;
}

double wf_level_by_bisection(RVectorRef lambda, double P) {
  auto power = [&](double w) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
      s += std::max(w - 1.0 / lambda(i), 0.0);
    }
    return s;
  };
  double lo = 0.0;
  double hi = P + 1.0 / lambda.minCoeff();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (power(mid) < P ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace crspec::oracles
