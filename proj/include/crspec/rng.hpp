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

#include <cstdint>

namespace crspec {

/// Roles keying independent random streams within one trial.
enum class RngRole : std::uint64_t {
  SecondaryChannel = 0,
  CrossChannel = 1,        // + receiver index
  SecondaryTaps = 1000,    // + tap index
  CrossTaps = 2000,        // + tap index
  Auxiliary = 9000,
};

/// Deterministic splitmix64 stream keyed by (seed, trial, role). Streams for
/// different keys are independent, so trials can run in any order or in
/// parallel without affecting the draws.
class Crng {
 public:
  Crng(std::uint64_t seed, std::uint64_t trial, std::uint64_t role);
  Crng(std::uint64_t seed, std::uint64_t trial, RngRole role, std::uint64_t offset = 0)
      : Crng(seed, trial, static_cast<std::uint64_t>(role) + offset) {}

  std::uint64_t next_u64();
  /// Uniform in (0, 1].
  double uniform();
  /// Uniform in [lo, hi).
  double uniform(double lo, double hi);
  /// Circularly symmetric complex Gaussian with E|x|^2 = var.
  Complex cgauss(double var);
  /// Real standard normal.
  double gauss();

 private:
  std::uint64_t state_;
};

/// Matrix with i.i.d. CSCG entries of per-entry variance var, filled in
/// row-major order.
CMatrix draw_cscg_matrix(Eigen::Index rows, Eigen::Index cols, double var, Crng& rng);

}  // namespace crspec
