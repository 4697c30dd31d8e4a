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

#include <optional>
#include <string>
#include <vector>

namespace crspec {

/// Eigen-factorization of a transmit covariance: S = V diag(sigma) V^H with
/// column-orthonormal V and strictly positive per-stream powers sigma.
struct EigFactors {
  CMatrix V;
  RVector sigma;
};

/// Hermitian PSD transmit spatial spectrum, optionally carrying its
/// factorization into precoding directions and per-stream powers.
struct Covariance {
  CMatrix S;
  std::optional<EigFactors> eig;

  static Covariance zero(Eigen::Index m);
  /// Symmetrizes the input and attaches the eigen-factorization (streams with
  /// power below 1e-14 * trace are dropped from the factorization).
  static Covariance from_matrix(CMatrixRef S_in);
  /// Builds S = V diag(sigma) V^H keeping only the positive-power streams.
  static Covariance from_eig(CMatrixRef V, RVectorRef sigma);

  Eigen::Index dim() const { return S.rows(); }
  double trace() const { return S.trace().real(); }
  Eigen::Index rank() const { return eig ? eig->sigma.size() : Eigen::Index(-1); }

  /// Checks PSD-ness and, when present, the consistency of the factorization.
  /// Throws std::invalid_argument on violation.
  void validate() const;
};

/// One secondary link sharing spectrum with K protected receivers: the
/// secondary channel H (receive x transmit), the cross channels G_k to each
/// primary receiver, the transmit-power budget and per-receiver
/// interference-power caps.
struct ChannelSet {
  CMatrix H;
  std::vector<CMatrix> G;
  double P_t = 0.0;
  RVector Gamma;

  int tx_count() const { return static_cast<int>(H.cols()); }
  int rx_count() const { return static_cast<int>(H.rows()); }
  int receiver_count() const { return static_cast<int>(G.size()); }
  /// Total number of protected antennas over all receivers.
  int primary_antenna_count() const;

  /// Throws std::invalid_argument on dimension mismatch, rank deficiency,
  /// or negative budgets/caps.
  void validate() const;
};

enum class Method { Optimal, MisoClosedForm, DSvd, PSvd, Hybrid, White };

std::string method_name(Method m, int hybrid_b = -1);

/// Outcome of any precoder design: the covariance, the rate it achieves on H,
/// the spent transmit power and the interference delivered to each receiver.
struct PrecoderResult {
  Covariance cov;
  double rate = 0.0;
  double tx_power = 0.0;
  RVector interference;
  Method method = Method::Optimal;
  int hybrid_b = -1;
  bool converged = true;
  /// Relative duality gap for solvers that carry an optimality certificate.
  double duality_gap = 0.0;
};

/// log2 |I + H S H^H| in bits per complex dimension. Throws on dimension
/// mismatch or when S fails the PSD tolerance (min eigenvalue below
/// -1e-9 * trace).
double achievable_rate(CMatrixRef S, CMatrixRef H);

/// Interference power Tr(G_k S G_k^H) delivered at one primary receiver.
double interference_power(CMatrixRef S, CMatrixRef G_k);

/// Rewrites per-antenna caps as an equivalent set of single-antenna
/// receivers: every row of every G_k becomes its own receiver with the cap of
/// its parent. `gamma_per_antenna` holds one cap per original receiver.
ChannelSet expand_per_antenna(const ChannelSet& cs, RVectorRef gamma_per_antenna);

/// Assembles a PrecoderResult from a covariance by evaluating rate, power and
/// interference against the channel set.
PrecoderResult finish_result(Covariance cov, const ChannelSet& cs, Method m,
                             int hybrid_b = -1);

}  // namespace crspec
