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

#include "crspec/ellipsoid.hpp"

#include <cmath>
#include <limits>

namespace crspec {

EllipsoidOutcome ellipsoid_minimize(
    const RVector& x0, double radius,
    const std::function<EllipsoidCut(const RVector&)>& oracle,
    const EllipsoidOptions& opt) {
  const Eigen::Index n = x0.size();
  RVector x = x0;
  RMatrix P = radius * radius * RMatrix::Identity(n, n);

  EllipsoidOutcome out;
  out.x_best = x0;
  out.f_best = std::numeric_limits<double>::infinity();

  const double geom_floor = 1e-15 * radius;

  for (int it = 0; it < opt.max_iter; ++it) {
    out.iterations = it + 1;
    const EllipsoidCut cut = oracle(x);
    const RVector& g = cut.g;

    const double gPg = g.dot(P * g);
    if (!(gPg > 0.0) || !std::isfinite(gPg)) break;
    const double width = std::sqrt(gPg);

    if (cut.is_objective) {
      if (cut.value < out.f_best) {
        out.f_best = cut.value;
        out.x_best = x;
        out.found_feasible = true;
      }
      const bool point_ok =
          opt.point_tol_rel <= 0.0 ||
          std::sqrt(P.trace()) <= opt.point_tol_rel * std::max(1.0, x.norm());
      if (width <= opt.tol && point_ok) {
        out.converged = true;
        break;
      }
    }
    if (width <= geom_floor) break;

    if (n == 1) {
      // Interval bisection: halve toward the feasible side.
      const double r = std::sqrt(P(0, 0));
      x(0) -= (g(0) > 0 ? 1.0 : -1.0) * r / 2.0;
      P(0, 0) = (r / 2.0) * (r / 2.0);
    } else {
      const RVector Pg = P * g / width;
      x -= Pg / (n + 1.0);
      const double nn = static_cast<double>(n);
      P = (nn * nn / (nn * nn - 1.0)) *
          (P - (2.0 / (nn + 1.0)) * (Pg * Pg.transpose()));
      P = ((P + P.transpose()) / 2.0).eval();
    }
  }
  return out;
}

}  // namespace crspec
