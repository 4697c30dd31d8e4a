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

#include "crspec/multichannel.hpp"

#include "crspec/matkernel.hpp"
#include "crspec/mimo.hpp"
#include "crspec/waterfill.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace crspec {

namespace {

constexpr double kDeltaNu = 1e-8;
constexpr double kNuFloor = 1e-12;

struct ToneSolution {
  CMatrix S;
  double power = 0.0;
  double rate = 0.0;
  double objective = 0.0;  // rate - nu * power
  double interference = 0.0;
};

ToneSolution pack_tone(const CMatrix& S, const CMatrix& H, const CRowVector& g,
                       double nu) {
  ToneSolution t;
  t.S = S;
  t.power = S.trace().real();
  t.rate = achievable_rate(S, H);
  t.objective = t.rate - nu * t.power;
  t.interference = (g * S * g.adjoint())(0, 0).real();
  return t;
}

// Exact P7 maximizer at price nu (wrapped so both A2 variants share the
// search loop through a per-tone callback).
ToneSolution tone_optimal(const CMatrix& H, const CRowVector& g, double nu,
                          double gamma) {
  const Eigen::Index m = H.cols();
  if (gamma == 0.0) {
    const CMatrix N = null_basis(g);
    if (N.cols() == 0) return pack_tone(CMatrix::Zero(m, m), H, g, nu);
    const CMatrix Hn = H * N;
    if (Hn.norm() == 0.0) return pack_tone(CMatrix::Zero(m, m), H, g, nu);
    const PricedWf inner =
        priced_waterfill(Hn, nu * CMatrix::Identity(N.cols(), N.cols()));
    return pack_tone((N * inner.S * N.adjoint()).eval(), H, g, nu);
  }

  const CMatrix eye = CMatrix::Identity(m, m);
  const CMatrix gg = g.adjoint() * g;
  auto at_mu = [&](double mu) {
    return priced_waterfill(H, (nu * eye + mu * gg).eval());
  };
  auto interf_of = [&](const PricedWf& w) {
    return (g * w.S * g.adjoint())(0, 0).real();
  };

  PricedWf w0 = at_mu(0.0);
  if (interf_of(w0) <= gamma * (1.0 + 1e-12) + 1e-300) {
    return pack_tone(w0.S, H, g, nu);
  }

  double hi = std::max(1.0, max_squared_singular_value(H) / kLn2) /
              std::max(gamma, 1e-12);
  for (int grow = 0; grow < 80 && interf_of(at_mu(hi)) > gamma; ++grow) hi *= 4.0;
  double lo = 0.0;
  PricedWf w_hi = at_mu(hi);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi + 1e-300; ++it) {
    const double mid = 0.5 * (lo + hi);
    const PricedWf wm = at_mu(mid);
    if (interf_of(wm) > gamma) {
      lo = mid;
    } else {
      hi = mid;
      w_hi = wm;
    }
  }
  return pack_tone(w_hi.S, H, g, nu);
}

// Better of the direct-SVD-style and projected-SVD-style tone solutions at
// price nu, by P7 objective value.
ToneSolution tone_svd_select(const CMatrix& H, const CRowVector& g, double nu,
                             double gamma) {
  const SvdFactors fd = svd(H);
  const Eigen::Index ms = fd.lambda.size();
  RVector alpha(ms);
  for (Eigen::Index i = 0; i < ms; ++i) {
    alpha(i) = std::norm((g * fd.U.col(i))(0, 0));
  }

  auto d_sigma = [&](double mu) {
    RVector s(ms);
    for (Eigen::Index i = 0; i < ms; ++i) {
      s(i) = std::max(1.0 / ((nu + mu * alpha(i)) * kLn2) - 1.0 / fd.lambda(i), 0.0);
    }
    return s;
  };
  RVector sd = d_sigma(0.0);
  if (alpha.dot(sd) > gamma) {
    double hi = 0.0;
    for (Eigen::Index i = 0; i < ms; ++i) {
      if (alpha(i) > 0.0) hi = std::max(hi, fd.lambda(i) / (kLn2 * alpha(i)));
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-13 * hi + 1e-300; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (alpha.dot(d_sigma(mid)) > gamma) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    sd = d_sigma(hi);
  }
  const CMatrix Sd = fd.U * sd.asDiagonal() * fd.U.adjoint();
  const ToneSolution cand_d = pack_tone(Sd, H, g, nu);

  // Projected branch needs a nonempty null space of g.
  ToneSolution cand_p;
  cand_p.S = CMatrix::Zero(H.cols(), H.cols());
  cand_p.objective = 0.0;
  if (H.cols() > 1) {
    const CVector g_hat = g.adjoint() / g.norm();
    const CMatrix H_perp = H * null_projector(g_hat);
    if (H_perp.norm() > 1e-14 * std::max(H.norm(), 1e-300)) {
      const SvdFactors fp = svd(H_perp);
      RVector sp(fp.lambda.size());
      for (Eigen::Index i = 0; i < fp.lambda.size(); ++i) {
        sp(i) = std::max(1.0 / (nu * kLn2) - 1.0 / fp.lambda(i), 0.0);
      }
      const CMatrix Sp = fp.U * sp.asDiagonal() * fp.U.adjoint();
      cand_p = pack_tone(Sp, H, g, nu);
    } else {
      cand_p = pack_tone(cand_p.S, H, g, nu);
    }
  } else {
    cand_p = pack_tone(cand_p.S, H, g, nu);
  }
  return cand_d.objective >= cand_p.objective ? cand_d : cand_p;
}

using ToneSolver = std::function<ToneSolution(const CMatrix&, const CRowVector&,
                                              double, double)>;

MultiAllocation run_a2(const ToneSet& ts, const ToneSolver& solver,
                       bool exact_subproblems) {
  ts.validate();
  const int N = ts.tone_count();

  double nu_hat = 0.0;
  for (int j = 0; j < N; ++j) {
    nu_hat = std::max(nu_hat, max_squared_singular_value(ts.H[j]) / kLn2);
  }
  nu_hat = std::max(nu_hat * 1.0000001, kNuFloor * 2);

  std::vector<ToneSolution> sols(N);
  auto solve_all = [&](double nu) {
    double total = 0.0;
    for (int j = 0; j < N; ++j) {
      sols[j] = solver(ts.H[j], ts.g[j], nu, ts.gamma);
      total += sols[j].power;
    }
    return total;
  };

  MultiAllocation out;
  double lo = kNuFloor, hi = nu_hat;
  double total = solve_all(lo);
  if (total <= ts.P_t) {
    out.nu = lo;
    out.budget_binding = false;
  } else {
    while (hi - lo > kDeltaNu) {
      const double mid = 0.5 * (lo + hi);
      total = solve_all(mid);
      if (total <= ts.P_t) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    total = solve_all(hi);
    out.nu = hi;
    out.budget_binding = true;
  }

  // Dual value at the final price, before the budget top-up.
  double dual = out.nu * ts.P_t;
  for (int j = 0; j < N; ++j) dual += sols[j].objective;

  // Spend any bisection shortfall on the tone with the slackest cap.
  const double shortfall = ts.P_t - total;
  if (out.budget_binding && shortfall > 1e-12 * std::max(1.0, ts.P_t)) {
    int j_star = 0;
    for (int j = 1; j < N; ++j) {
      if (sols[j].interference < sols[j_star].interference) j_star = j;
    }
    const double budget = sols[j_star].power + shortfall;
    ChannelSet one;
    one.H = ts.H[j_star];
    one.G = {CMatrix(ts.g[j_star])};
    one.P_t = budget;
    one.Gamma = RVector::Constant(1, ts.gamma);
    PrecoderResult rr;
    if (exact_subproblems) {
      rr = solve_p1(one);
    } else {
      rr = dsvd(one);
      if (one.tx_count() > 1) {
        PrecoderResult pp = psvd(one);
        if (pp.rate > rr.rate) rr = pp;
      }
    }
    if (rr.rate >= sols[j_star].rate) {
      sols[j_star] =
          pack_tone(rr.cov.S, ts.H[j_star], ts.g[j_star], out.nu);
    }
  }

  out.S.reserve(N);
  out.rates.resize(N);
  out.total_power = 0.0;
  for (int j = 0; j < N; ++j) {
    out.S.push_back(Covariance::from_matrix(sols[j].S));
    out.rates(j) = sols[j].rate;
    out.total_power += sols[j].power;
    out.rate_total += sols[j].rate;
  }
  out.duality_gap =
      std::max(0.0, dual - out.rate_total) / std::max(1.0, dual);
  return out;
}

}  // namespace

void ToneSet::validate() const {
  if (H.empty() || H.size() != g.size()) {
    throw std::invalid_argument("tone set: inconsistent tone count");
  }
  if (P_t < 0.0 || gamma < 0.0) {
    throw std::invalid_argument("tone set: negative budget or cap");
  }
  for (size_t j = 0; j < H.size(); ++j) {
    if (H[j].cols() != H[0].cols() || g[j].size() != H[j].cols()) {
      throw std::invalid_argument("tone set: per-tone dimension mismatch");
    }
  }
}

Covariance solve_p7(CMatrixRef H_j, const CRowVector& g_j, double nu, double gamma) {
  if (!(nu > 0.0)) throw std::invalid_argument("solve_p7: price must be positive");
  if (gamma < 0.0) throw std::invalid_argument("solve_p7: negative cap");
  return Covariance::from_matrix(tone_optimal(H_j, g_j, nu, gamma).S);
}

MultiAllocation solve_p6(const ToneSet& ts) {
  return run_a2(ts, tone_optimal, /*exact_subproblems=*/true);
}

MultiAllocation per_tone_svd_select(const ToneSet& ts) {
  if (!ts.H.empty() && ts.H[0].cols() < 2) {
    throw std::invalid_argument("per_tone_svd_select: needs at least two antennas");
  }
  return run_a2(ts, tone_svd_select, /*exact_subproblems=*/false);
}

ToneSet gen_ofdm_channels(const std::vector<CMatrix>& h_taps,
                          const std::vector<CRowVector>& g_taps, int N,
                          double P_t, double gamma) {
  const int L = static_cast<int>(h_taps.size());
  if (L == 0 || static_cast<int>(g_taps.size()) != L) {
    throw std::invalid_argument("gen_ofdm_channels: inconsistent tap lists");
  }
  if (L > N) throw std::invalid_argument("gen_ofdm_channels: more taps than tones");

  ToneSet ts;
  ts.P_t = P_t;
  ts.gamma = gamma;
  ts.H.reserve(N);
  ts.g.reserve(N);
  for (int j = 0; j < N; ++j) {
    CMatrix Hj = CMatrix::Zero(h_taps[0].rows(), h_taps[0].cols());
    CRowVector gj = CRowVector::Zero(g_taps[0].size());
    for (int l = 0; l < L; ++l) {
      const Complex w = std::polar(1.0, -2.0 * M_PI * j * l / N);
      Hj += h_taps[l] * w;
      gj += g_taps[l] * w;
    }
    ts.H.push_back(std::move(Hj));
    ts.g.push_back(std::move(gj));
  }
  return ts;
}

}  // namespace crspec
