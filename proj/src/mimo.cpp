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

#include "crspec/mimo.hpp"

#include "crspec/ellipsoid.hpp"
#include "crspec/matkernel.hpp"
#include "crspec/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace crspec {

namespace {

// Stacks all cross channels into one M_rp x M_ts matrix, optionally scaling
// each receiver's rows by a per-receiver weight.
CMatrix stack_cross_channels(const ChannelSet& cs, const RVector* row_weights) {
  const int rows = cs.primary_antenna_count();
  CMatrix G(rows, cs.tx_count());
  int at = 0;
  for (size_t k = 0; k < cs.G.size(); ++k) {
    const double w = row_weights ? (*row_weights)(static_cast<Eigen::Index>(k)) : 1.0;
    G.middleRows(at, cs.G[k].rows()) = w * cs.G[k];
    at += static_cast<int>(cs.G[k].rows());
  }
  return G;
}

// Couplings A(k,i) = ||G_k u_i||^2 of precoder columns into each cap.
RMatrix coupling_matrix(const ChannelSet& cs, const CMatrix& U) {
  RMatrix A(static_cast<Eigen::Index>(cs.G.size()), U.cols());
  for (size_t k = 0; k < cs.G.size(); ++k) {
    for (Eigen::Index i = 0; i < U.cols(); ++i) {
      A(static_cast<Eigen::Index>(k), i) = (cs.G[k] * U.col(i)).squaredNorm();
    }
  }
  return A;
}

// Dispatches to the matching power allocator for K = 0 / 1 / many caps.
WfAllocation allocate_power(const RVector& lambda, const RMatrix& A, double P_t,
                            RVectorRef Gamma) {
  if (A.rows() == 0) return standard_wf(lambda, P_t);
  if (A.rows() == 1) return solve_a1(lambda, A.row(0), P_t, Gamma(0));
  return solve_multi_mu(lambda, A, P_t, Gamma);
}

PrecoderResult svd_precoder(const ChannelSet& cs, const SvdFactors& f,
                            Method method, int hybrid_b) {
  const WfAllocation alloc = allocate_power(
      f.lambda, coupling_matrix(cs, f.U), cs.P_t, cs.Gamma);
  Covariance cov = Covariance::from_eig(f.U, alloc.sigma);
  PrecoderResult r = finish_result(std::move(cov), cs, method, hybrid_b);
  r.converged = alloc.converged;
  return r;
}

struct ReducedProblem {
  CMatrix H;
  std::vector<CMatrix> G;  // positive-cap receivers only, in input order
  RVector Gamma;
  std::vector<size_t> source_index;
  CMatrix basis;  // M_ts x m' restriction map (identity when no zero caps)
  bool infeasible_nonzero = false;
};

// Zero interference caps force the covariance into the null space of the
// corresponding cross channels; restrict the problem there once and for all.
ReducedProblem reduce_zero_caps(const ChannelSet& cs) {
  ReducedProblem rp;
  std::vector<size_t> zero_idx;
  for (size_t k = 0; k < cs.G.size(); ++k) {
    if (cs.Gamma(static_cast<Eigen::Index>(k)) == 0.0) {
      zero_idx.push_back(k);
    } else {
      rp.source_index.push_back(k);
    }
  }
  if (zero_idx.empty()) {
    rp.H = cs.H;
    rp.G = cs.G;
    rp.Gamma = cs.Gamma;
    rp.basis = CMatrix::Identity(cs.tx_count(), cs.tx_count());
    return rp;
  }
  int rows = 0;
  for (size_t k : zero_idx) rows += static_cast<int>(cs.G[k].rows());
  CMatrix Z(rows, cs.tx_count());
  int at = 0;
  for (size_t k : zero_idx) {
    Z.middleRows(at, cs.G[k].rows()) = cs.G[k];
    at += static_cast<int>(cs.G[k].rows());
  }
  rp.basis = null_basis(Z);
  if (rp.basis.cols() == 0) {
    rp.infeasible_nonzero = true;
    return rp;
  }
  rp.H = cs.H * rp.basis;
  rp.Gamma.resize(static_cast<Eigen::Index>(rp.source_index.size()));
  for (size_t j = 0; j < rp.source_index.size(); ++j) {
    rp.G.push_back(cs.G[rp.source_index[j]] * rp.basis);
    rp.Gamma(static_cast<Eigen::Index>(j)) =
        cs.Gamma(static_cast<Eigen::Index>(rp.source_index[j]));
  }
  return rp;
}

// Dual solver on a problem whose caps are all strictly positive.
PrecoderResult solve_p1_positive(const CMatrix& H, const std::vector<CMatrix>& G,
                                 double P_t, const RVector& Gamma) {
  const Eigen::Index K = static_cast<Eigen::Index>(G.size());
  const Eigen::Index m = H.cols();

  const double nu_hat = max_squared_singular_value(H) / kLn2;
  double radius = nu_hat;
  for (Eigen::Index k = 0; k < K; ++k) {
    radius = std::max(radius, nu_hat * P_t / Gamma(k));
  }
  radius *= 1.2 * std::sqrt(static_cast<double>(K + 1));

  std::vector<CMatrix> GG(K);
  for (Eigen::Index k = 0; k < K; ++k) GG[k] = G[k].adjoint() * G[k];

  struct Best {
    double rate = -1.0;
    CMatrix S;
  };
  Best best;
  double dual_min = std::numeric_limits<double>::infinity();

  auto oracle = [&](const RVector& x) -> EllipsoidCut {
    EllipsoidCut cut;
    for (Eigen::Index j = 0; j < K + 1; ++j) {
      if (x(j) < 0.0) {
        cut.g = RVector::Zero(K + 1);
        cut.g(j) = -1.0;
        return cut;
      }
    }
    CMatrix A = x(0) * CMatrix::Identity(m, m);
    for (Eigen::Index k = 0; k < K; ++k) A += x(k + 1) * GG[k];
    const double ridge = 1e-12 * std::max(1.0, A.trace().real() / m);
    A += ridge * CMatrix::Identity(m, m);

    const PricedWf inner = priced_waterfill(H, A);
    const double power = inner.S.trace().real();
    RVector interf(K);
    for (Eigen::Index k = 0; k < K; ++k) {
      interf(k) = (G[k] * inner.S * G[k].adjoint()).trace().real();
    }

    // Feasibility-scaled primal candidate.
    double t = std::max(1.0, power / std::max(P_t, 1e-300));
    for (Eigen::Index k = 0; k < K; ++k) {
      if (interf(k) > 0.0) t = std::max(t, interf(k) / Gamma(k));
    }
    if (power > 0.0) {
      const CMatrix S_f = inner.S / t;
      const double r_f = achievable_rate(S_f, H);
      if (r_f > best.rate) best = Best{r_f, S_f};
    } else if (best.rate < 0.0) {
      best = Best{0.0, CMatrix::Zero(m, m)};
    }

    cut.is_objective = true;
    cut.g = RVector::Zero(K + 1);
    cut.g(0) = P_t - power;
    for (Eigen::Index k = 0; k < K; ++k) cut.g(k + 1) = Gamma(k) - interf(k);
    cut.value = inner.value + x(0) * P_t;
    for (Eigen::Index k = 0; k < K; ++k) cut.value += x(k + 1) * Gamma(k);
    dual_min = std::min(dual_min, cut.value);
    return cut;
  };

  EllipsoidOptions opt;
  // Absolute tolerance on the dual value, which is in bits.
  opt.tol = 1e-9 * std::max(1.0, std::log2(1.0 + nu_hat * P_t));
  opt.point_tol_rel = 1e-8;
  opt.max_iter = 2000 * static_cast<int>((K + 1) * (K + 1));
  const EllipsoidOutcome res =
      ellipsoid_minimize(RVector::Zero(K + 1), radius, oracle, opt);

  PrecoderResult out;
  ChannelSet cs;
  cs.H = H;
  cs.G = G;
  cs.P_t = P_t;
  cs.Gamma = Gamma;
  out = finish_result(best.rate >= 0.0 ? Covariance::from_matrix(best.S)
                                       : Covariance::zero(m),
                      cs, Method::Optimal);
  out.duality_gap =
      std::max(0.0, dual_min - out.rate) / std::max(1.0, dual_min);
  out.converged = res.converged && out.duality_gap <= 1e-4;
  return out;
}

}  // namespace

PricedWf priced_waterfill(CMatrixRef H, CMatrixRef A) {
  const CMatrix B = inv_sqrt_psd(A);
  const CMatrix Hw = H * B;
  PricedWf out;
  if (Hw.norm() == 0.0) {
    out.S = CMatrix::Zero(H.cols(), H.cols());
    return out;
  }
  const SvdFactors f = svd(Hw);
  RVector sig(f.lambda.size());
  for (Eigen::Index i = 0; i < f.lambda.size(); ++i) {
    sig(i) = std::max(1.0 / kLn2 - 1.0 / f.lambda(i), 0.0);
    out.rate += std::log2(1.0 + f.lambda(i) * sig(i));
    out.value += std::log2(1.0 + f.lambda(i) * sig(i)) - sig(i);
  }
  const CMatrix St = f.U * sig.asDiagonal() * f.U.adjoint();
  out.S = B * St * B;
  out.S = (out.S + out.S.adjoint()) / 2.0;
  return out;
}

PrecoderResult unconstrained_capacity(CMatrixRef H, double P_t) {
  const SvdFactors f = svd(H);
  const WfAllocation alloc = standard_wf(f.lambda, P_t);
  ChannelSet cs;
  cs.H = H;
  cs.P_t = P_t;
  cs.Gamma = RVector::Zero(0);
  return finish_result(Covariance::from_eig(f.U, alloc.sigma), cs, Method::Optimal);
}

PrecoderResult solve_p1(const ChannelSet& cs) {
  cs.validate();
  if (!(cs.P_t > 0.0)) throw std::invalid_argument("solve_p1: budget must be positive");

  const ReducedProblem rp = reduce_zero_caps(cs);
  if (rp.infeasible_nonzero) {
    PrecoderResult r = finish_result(Covariance::zero(cs.tx_count()), cs,
                                     Method::Optimal);
    return r;
  }

  PrecoderResult inner;
  if (rp.G.empty()) {
    if (rp.H.norm() == 0.0) {
      inner = finish_result(Covariance::zero(rp.H.cols()),
                            ChannelSet{rp.H, {}, cs.P_t, RVector::Zero(0)},
                            Method::Optimal);
    } else {
      inner = unconstrained_capacity(rp.H, cs.P_t);
    }
  } else {
    inner = solve_p1_positive(rp.H, rp.G, cs.P_t, rp.Gamma);
  }

  if (rp.basis.cols() == cs.tx_count() && rp.source_index.size() == cs.G.size()) {
    return inner;  // no zero caps were removed
  }
  const CMatrix S_full = rp.basis * inner.cov.S * rp.basis.adjoint();
  PrecoderResult out = finish_result(Covariance::from_matrix(S_full), cs,
                                     Method::Optimal);
  out.duality_gap = inner.duality_gap;
  out.converged = inner.converged;
  return out;
}

PrecoderResult dsvd(const ChannelSet& cs) {
  cs.validate();
  return svd_precoder(cs, svd(cs.H), Method::DSvd, -1);
}

PrecoderResult psvd(const ChannelSet& cs) {
  cs.validate();
  const int m_rp = cs.primary_antenna_count();
  if (cs.tx_count() <= m_rp) {
    throw PsvdNotImplementable(
        "psvd: transmit array not larger than the protected antenna count");
  }
  const SvdFactors g_f = svd(stack_cross_channels(cs, nullptr));
  const CMatrix H_perp = cs.H * null_projector(g_f.U);
  if (H_perp.norm() <= 1e-14 * std::max(cs.H.norm(), 1e-300)) {
    return finish_result(Covariance::zero(cs.tx_count()), cs, Method::PSvd);
  }
  const SvdFactors f = svd(H_perp);
  const WfAllocation alloc = standard_wf(f.lambda, cs.P_t);
  return finish_result(Covariance::from_eig(f.U, alloc.sigma), cs, Method::PSvd);
}

PrecoderResult hybrid(const ChannelSet& cs, const HybridConfig& cfg) {
  cs.validate();
  const int m_rp = cs.primary_antenna_count();
  const int b_max = std::min(cs.tx_count(), m_rp);
  if (cfg.b < 0 || cfg.b > b_max || cfg.b >= cs.tx_count()) {
    throw std::invalid_argument("hybrid: b out of range");
  }
  if (cfg.b == 0) {
    PrecoderResult r = svd_precoder(cs, svd(cs.H), Method::Hybrid, 0);
    return r;
  }

  // Cap-normalized cross channel; zero caps get a large finite weight so
  // their directions dominate the nulled subspace.
  RVector weights(static_cast<Eigen::Index>(cs.G.size()));
  double gamma_floor = 0.0;
  for (Eigen::Index k = 0; k < cs.Gamma.size(); ++k) {
    gamma_floor = std::max(gamma_floor, cs.Gamma(k));
  }
  gamma_floor = (gamma_floor > 0.0 ? gamma_floor : 1.0) * 1e-18;
  for (Eigen::Index k = 0; k < cs.Gamma.size(); ++k) {
    weights(k) = 1.0 / std::sqrt(std::max(cs.Gamma(k), gamma_floor));
  }
  const SvdFactors g_f = svd(stack_cross_channels(cs, &weights));
  const int b_eff = std::min<int>(cfg.b, static_cast<int>(g_f.U.cols()));
  const CMatrix H_perp = cs.H * null_projector(g_f.U.leftCols(b_eff));
  if (H_perp.norm() <= 1e-14 * std::max(cs.H.norm(), 1e-300)) {
    return finish_result(Covariance::zero(cs.tx_count()), cs, Method::Hybrid,
                         cfg.b);
  }
  return svd_precoder(cs, svd(H_perp), Method::Hybrid, cfg.b);
}

std::pair<HybridConfig, PrecoderResult> best_hybrid(const ChannelSet& cs) {
  cs.validate();
  const int b_max =
      std::min({cs.tx_count() - 1, std::min(cs.tx_count(), cs.primary_antenna_count())});
  std::optional<std::pair<HybridConfig, PrecoderResult>> best;
  for (int b = 0; b <= b_max; ++b) {
    PrecoderResult r = hybrid(cs, HybridConfig{b});
    if (!best || r.rate > best->second.rate) {
      best = {HybridConfig{b}, std::move(r)};
    }
  }
  return std::move(*best);
}

PrecoderResult white_spectrum(const ChannelSet& cs) {
  cs.validate();
  const int m = cs.tx_count();
  double P = cs.P_t;
  for (size_t k = 0; k < cs.G.size(); ++k) {
    const double g2 = cs.G[k].squaredNorm();
    if (g2 > 0.0) {
      P = std::min(P, m * cs.Gamma(static_cast<Eigen::Index>(k)) / g2);
    }
  }
  Covariance cov =
      P > 0.0 ? Covariance::from_eig(CMatrix::Identity(m, m),
                                     RVector::Constant(m, P / m))
              : Covariance::zero(m);
  return finish_result(std::move(cov), cs, Method::White);
}

}  // namespace crspec
