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

/// One cut returned by the ellipsoid oracle at a query point. For an
/// objective cut, `value` is the convex objective there and `g` a
/// subgradient; for a feasibility cut only `g` matters (points y with
/// g.(y - x) > 0 are discarded).
struct EllipsoidCut {
  RVector g;
  bool is_objective = false;
  double value = 0.0;
};

struct EllipsoidOptions {
  double tol = 1e-9;     // stop when sqrt(g' P g) of an objective cut drops below
  int max_iter = 10000;  // hard iteration cap
  // When positive, additionally require the ellipsoid extent sqrt(tr P) to
  // drop below point_tol_rel * max(1, |x|): localizes the minimizer itself,
  // which primal-recovery callers need.
  double point_tol_rel = 0.0;
};

struct EllipsoidOutcome {
  RVector x_best;
  double f_best;
  bool found_feasible = false;
  bool converged = false;
  int iterations = 0;
};

/// Minimizes a convex function over a convex set by the ellipsoid method,
/// starting from the ball of the given radius around x0. The dimension-1 case
/// degenerates to interval bisection. The best objective-cut point seen is
/// returned; sqrt(g' P g) bounds the suboptimality at termination.
EllipsoidOutcome ellipsoid_minimize(
    const RVector& x0, double radius,
    const std::function<EllipsoidCut(const RVector&)>& oracle,
    const EllipsoidOptions& opt = {});

}  // namespace crspec
