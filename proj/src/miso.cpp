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

#include "crspec/miso.hpp"

#include "crspec/ellipsoid.hpp"
#include "crspec/matkernel.hpp"

#include <cmath>
#include <stdexcept>

namespace crspec {

namespace {

ChannelSet miso_channel_set(const CRowVector& h, const std::vector<CMatrix>& G,
                            double P_t, RVectorRef Gamma) {
  ChannelSet cs;
  cs.H = h;
  cs.G = G;
  cs.P_t = P_t;
  cs.Gamma = Gamma;
  return cs;
}

PrecoderResult beamformer_result(const CVector& v, const CRowVector& h,
                                 const std::vector<CMatrix>& G, double P_t,
                                 RVectorRef Gamma, Method method) {
  const double p = v.squaredNorm();
  Covariance cov;
  if (p > 0.0) {
    cov = Covariance::from_eig((v / std::sqrt(p)).eval(), RVector::Constant(1, p));
  } else {
    cov = Covariance::zero(v.size());
  }
  return finish_result(std::move(cov), miso_channel_set(h, G, P_t, Gamma), method);
}

}  // namespace

MisoDecomposition decompose(const CRowVector& h, const CRowVector& g) {
  if (h.size() != g.size()) throw std::invalid_argument("decompose: size mismatch");
  if (h.size() < 2) {
    throw std::invalid_argument("decompose: needs at least two transmit antennas");
  }
  const double hn = h.norm();
  const double gn = g.norm();
  if (hn == 0.0 || gn == 0.0) throw std::invalid_argument("decompose: zero channel");

  MisoDecomposition d;
  d.g_hat = g.adjoint() / gn;
  d.alpha_h = d.g_hat.dot(h.adjoint());  // g_hat^H h^H
  CVector h_perp = h.adjoint() - d.alpha_h * d.g_hat;
  const double pn = h_perp.norm();
  if (pn > 1e-12 * hn) {
    d.h_perp_hat = h_perp / pn;
    d.beta_h = pn;
    return d;
  }

  // h parallel to g: pick any unit vector orthogonal to g_hat.
  d.beta_h = 0.0;
  Eigen::Index weakest = 0;
  for (Eigen::Index i = 1; i < d.g_hat.size(); ++i) {
    if (std::abs(d.g_hat(i)) < std::abs(d.g_hat(weakest))) weakest = i;
  }
  CVector e = CVector::Zero(d.g_hat.size());
  e(weakest) = 1.0;
  CVector q = e - d.g_hat.dot(e) * d.g_hat;
  d.h_perp_hat = q / q.norm();
  return d;
}

PrecoderResult theorem2_beamformer(const CRowVector& h, const CRowVector& g,
                                   double P_t, double gamma) {
  if (h.norm() == 0.0 || g.norm() == 0.0) {
    throw std::invalid_argument("theorem2_beamformer: zero channel");
  }
  if (!(P_t > 0.0) || gamma < 0.0) {
    throw std::invalid_argument("theorem2_beamformer: invalid budget or cap");
  }
  const std::vector<CMatrix> G = {CMatrix(g)};
  const RVector Gamma = RVector::Constant(1, gamma);
  const double gn2 = g.squaredNorm();

  if (h.size() < 2) {
    const double p = std::min(P_t, gamma / gn2);
    const CVector v = std::sqrt(p) / h.norm() * h.adjoint();
    return beamformer_result(v, h, G, P_t, Gamma, Method::MisoClosedForm);
  }

  const MisoDecomposition d = decompose(h, g);
  const double a2 = std::norm(d.alpha_h);
  const double b2 = std::norm(d.beta_h);
  const double hn2 = a2 + b2;

  CVector v;
  if (a2 <= 1e-24 * hn2) {
    // h orthogonal to g: full-power MRC is interference-free.
    v = std::sqrt(P_t) / h.norm() * h.adjoint();
  } else if (b2 <= 1e-24 * hn2) {
    // h parallel to g: scalar power cap.
    v = std::sqrt(std::min(P_t, gamma / gn2)) / h.norm() * h.adjoint();
  } else if (gamma >= gn2 * a2 / hn2 * P_t) {
    // Case I: interference constraint slack, pre-MRC at full power.
    const double scale = std::sqrt(P_t / hn2);
    v = scale * d.alpha_h * d.g_hat + scale * d.beta_h * d.h_perp_hat;
  } else {
    // Case II: both constraints tight.
    const Complex alpha_v =
        std::sqrt(gamma) / g.norm() * d.alpha_h / std::sqrt(a2);
    const Complex beta_v =
        std::sqrt(P_t - gamma / gn2) * d.beta_h / std::sqrt(b2);
    v = alpha_v * d.g_hat + beta_v * d.h_perp_hat;
  }
  return beamformer_result(v, h, G, P_t, Gamma, Method::MisoClosedForm);
}

std::pair<DualPoint, PrecoderResult> solve_p5(const CRowVector& h,
                                              const std::vector<CMatrix>& G,
                                              double P_t, RVectorRef Gamma) {
  const Eigen::Index K = static_cast<Eigen::Index>(G.size());
  if (K < 1) throw std::invalid_argument("solve_p5: needs at least one receiver");
  if (h.norm() == 0.0) throw std::invalid_argument("solve_p5: zero channel");
  if (Gamma.size() != K) throw std::invalid_argument("solve_p5: cap count mismatch");
  if (!(P_t > 0.0)) throw std::invalid_argument("solve_p5: invalid budget");
  for (Eigen::Index k = 0; k < K; ++k) {
    if (!(Gamma(k) > 0.0)) {
      throw std::invalid_argument("solve_p5: caps must be strictly positive");
    }
  }
  const Eigen::Index m = h.size();
  const CMatrix hh = h.adjoint() * h;
  std::vector<CMatrix> GG(K);
  for (Eigen::Index k = 0; k < K; ++k) GG[k] = G[k].adjoint() * G[k];

  const double hn2 = h.squaredNorm();
  double radius = hn2;
  for (Eigen::Index k = 0; k < K; ++k) {
    radius = std::max(radius, hn2 * P_t / Gamma(k));
  }
  radius *= 1.2 * std::sqrt(static_cast<double>(K + 1));

  const auto stationarity = [&](const RVector& x) {
    CMatrix M = -hh + x(0) * CMatrix::Identity(m, m);
    for (Eigen::Index k = 0; k < K; ++k) M += x(k + 1) * GG[k];
    return M;
  };

  double tol = 1e-10 * std::max(1.0, hn2 * P_t);
  for (int attempt = 0; attempt < 3; ++attempt) {
    auto oracle = [&](const RVector& x) -> EllipsoidCut {
      EllipsoidCut cut;
      for (Eigen::Index j = 0; j < K + 1; ++j) {
        if (x(j) < 0.0) {
          cut.g = RVector::Zero(K + 1);
          cut.g(j) = -1.0;
          return cut;
        }
      }
      const CMatrix M = stationarity(x);
      auto [V, d] = herm_eig(M);
      const double min_eig = d(d.size() - 1);
      if (min_eig < 0.0) {
        const CVector w = V.col(d.size() - 1);
        cut.g = RVector::Zero(K + 1);
        cut.g(0) = -1.0;  // -d(min_eig)/d(nu) = -w^H I w
        for (Eigen::Index k = 0; k < K; ++k) {
          cut.g(k + 1) = -(G[k] * w).squaredNorm();
        }
        return cut;
      }
      cut.is_objective = true;
      cut.g = RVector::Zero(K + 1);
      cut.g(0) = P_t;
      for (Eigen::Index k = 0; k < K; ++k) cut.g(k + 1) = Gamma(k);
      cut.value = x.dot(cut.g);
      return cut;
    };

    EllipsoidOptions opt;
    opt.tol = tol;
    opt.point_tol_rel = 1e-9;
    opt.max_iter = 4000 * static_cast<int>((K + 1) * (K + 1));
    const EllipsoidOutcome res =
        ellipsoid_minimize(RVector::Zero(K + 1), radius, oracle, opt);
    if (!res.found_feasible) {
      tol *= 1e-2;
      continue;
    }

    // Primal recovery: project h^H onto the (near-)null space of the
    // stationarity matrix at the dual point, then scale to the tightest of
    // the power and interference constraints. The power price is first
    // shifted so the smallest eigenvalue sits exactly at zero, restoring the
    // complementarity the primal direction is read from.
    RVector x = res.x_best.cwiseMax(0.0);
    {
      auto [V0, d0] = herm_eig(stationarity(x));
      x(0) = std::max(x(0) - d0(d0.size() - 1), 0.0);
    }
    auto [V, d] = herm_eig(stationarity(x));
    const double span = std::max(std::abs(d(0)), std::abs(d(d.size() - 1)));
    Eigen::Index null_dim = 0;
    for (Eigen::Index i = d.size() - 1; i >= 0; --i) {
      if (std::abs(d(i)) <= 1e-5 * std::max(span, 1e-300)) ++null_dim;
    }
    if (null_dim == 0) {
      tol *= 1e-2;
      continue;
    }
    const CMatrix N = V.rightCols(null_dim);
    CVector dir = N * (N.adjoint() * h.adjoint());
    if (dir.norm() == 0.0) {
      tol *= 1e-2;
      continue;
    }
    dir /= dir.norm();
    double scale = P_t;
    for (Eigen::Index k = 0; k < K; ++k) {
      const double gk = (G[k] * dir).squaredNorm();
      if (gk > 1e-300) scale = std::min(scale, Gamma(k) / gk);
    }
    const CVector v = std::sqrt(scale) * dir;

    PrecoderResult pr =
        beamformer_result(v, h, G, P_t, Gamma, Method::Optimal);
    const double dual_rate = std::log2(1.0 + res.f_best);
    pr.duality_gap =
        std::abs(pr.rate - dual_rate) / std::max(1.0, dual_rate);
    pr.converged = pr.duality_gap <= 1e-4;
    if (!pr.converged && attempt + 1 < 3) {
      tol *= 1e-2;
      continue;
    }
    DualPoint dp;
    dp.nu = x(0);
    dp.mu = x.tail(K);
    return {dp, pr};
  }
  throw std::runtime_error("solve_p5: primal recovery failed after retries");
}

}  // namespace crspec
