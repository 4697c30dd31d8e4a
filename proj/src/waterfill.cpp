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

#include "crspec/waterfill.hpp"

#include "crspec/ellipsoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace crspec {

namespace {

void check_lambda(RVectorRef lambda) {
  if (lambda.size() == 0) throw std::invalid_argument("empty sub-channel gains");
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (!(lambda(i) > 0.0)) {
      throw std::invalid_argument("sub-channel gains must be positive");
    }
  }
}

double rate_bits(RVectorRef lambda, const RVector& sigma) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    r += std::log2(1.0 + lambda(i) * sigma(i));
  }
  return r;
}

// sigma_i(nu) = (1/(nu + a_i) - 1/lambda_i)^+ for per-channel price offsets a.
RVector sigma_at(RVectorRef lambda, const RVector& a, double nu) {
  RVector s(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double denom = nu + a(i);
    s(i) = denom > 0.0 ? std::max(1.0 / denom - 1.0 / lambda(i), 0.0)
                       : std::numeric_limits<double>::infinity();
  }
  return s;
}

double power_at(RVectorRef lambda, const RVector& a, double nu) {
  return sigma_at(lambda, a, nu).sum();
}

// Smallest nu >= 0 with sum_i sigma_i(nu) <= P_t. Bisection bracketed by
// [0 or eps, max lambda], then Newton steps on the active set to pin the
// budget to machine precision.
std::pair<double, RVector> inner_min_nu(RVectorRef lambda, const RVector& a,
                                        double P_t) {
  const Eigen::Index m = lambda.size();
  if (P_t <= 0.0) {
    double nu = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) nu = std::max(nu, lambda(i) - a(i));
    return {nu, RVector::Zero(m)};
  }

  const bool zero_ok = [&] {
    for (Eigen::Index i = 0; i < m; ++i) {
      if (!(a(i) > 0.0)) return false;
    }
    return true;
  }();
  if (zero_ok && power_at(lambda, a, 0.0) <= P_t) {
    return {0.0, sigma_at(lambda, a, 0.0)};
  }

  double hi = lambda.maxCoeff();
  double lo = zero_ok ? 0.0 : 1e-12;
  while (!zero_ok && power_at(lambda, a, lo) <= P_t && lo > 1e-300) lo *= 1e-2;

  for (int it = 0; it < 400 && hi - lo > 1e-14 * hi + 1e-300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (power_at(lambda, a, mid) <= P_t) {
      hi = mid;
    } else {
      lo = mid;
    }
  }

  double nu = hi;
  for (int it = 0; it < 6; ++it) {
    double f = -P_t;
    double df = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double denom = nu + a(i);
      if (denom > 0.0 && 1.0 / denom > 1.0 / lambda(i)) {
        f += 1.0 / denom - 1.0 / lambda(i);
        df -= 1.0 / (denom * denom);
      }
    }
    if (df == 0.0) break;
    const double next = nu - f / df;
    if (!(next > lo) || !std::isfinite(next)) break;
    nu = next;
  }
  if (power_at(lambda, a, nu) > P_t * (1.0 + 1e-12) + 1e-300) nu = hi;
  return {nu, sigma_at(lambda, a, nu)};
}

}  // namespace

double WfAllocation::rate(RVectorRef lambda) const { return rate_bits(lambda, sigma); }

WfAllocation standard_wf(RVectorRef lambda, double P) {
  check_lambda(lambda);
  if (P < 0.0) throw std::invalid_argument("standard_wf: negative budget");
  const Eigen::Index m = lambda.size();

  WfAllocation out;
  out.sigma = RVector::Zero(m);
  out.mu = RVector::Zero(0);
  if (P == 0.0) {
    out.nu = lambda.maxCoeff();
    return out;
  }

  std::vector<Eigen::Index> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](Eigen::Index i, Eigen::Index j) { return lambda(i) > lambda(j); });

  double inv_sum = 0.0;
  double level = 0.0;
  Eigen::Index active = 0;
  for (Eigen::Index k = 0; k < m; ++k) {
    inv_sum += 1.0 / lambda(idx[k]);
    const double w = (P + inv_sum) / static_cast<double>(k + 1);
    if (w >= 1.0 / lambda(idx[k]) &&
        (k + 1 == m || w <= 1.0 / lambda(idx[k + 1]))) {
      level = w;
      active = k + 1;
      break;
    }
  }
  for (Eigen::Index k = 0; k < active; ++k) {
    out.sigma(idx[k]) = level - 1.0 / lambda(idx[k]);
  }
  out.nu = 1.0 / level;
  return out;
}

RVector multilevel_wf(RVectorRef lambda, RVectorRef alpha, double nu, double mu) {
  check_lambda(lambda);
  if (alpha.size() != lambda.size()) {
    throw std::invalid_argument("multilevel_wf: alpha size mismatch");
  }
  RVector s(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double denom = nu + alpha(i) * mu;
    if (!(denom > 0.0)) {
      throw std::invalid_argument("multilevel_wf: nonpositive water-level denominator");
    }
    s(i) = std::max(1.0 / denom - 1.0 / lambda(i), 0.0);
  }
  return s;
}

WfAllocation solve_a1(RVectorRef lambda, RVectorRef alpha, double P_t, double gamma) {
  check_lambda(lambda);
  if (alpha.size() != lambda.size()) {
    throw std::invalid_argument("solve_a1: alpha size mismatch");
  }
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (alpha(i) < 0.0) throw std::invalid_argument("solve_a1: negative coupling");
  }
  if (P_t < 0.0 || gamma < 0.0) {
    throw std::invalid_argument("solve_a1: negative budget or cap");
  }
  const Eigen::Index m = lambda.size();

  WfAllocation out;
  out.mu = RVector::Zero(1);
  if (P_t == 0.0) {
    out.sigma = RVector::Zero(m);
    out.nu = lambda.maxCoeff();
    return out;
  }

  // Slack interference constraint: the KKT conditions give mu = 0 and the
  // allocation is plain water-filling.
  WfAllocation base = standard_wf(lambda, P_t);
  const double base_interf = alpha.dot(base.sigma);
  if (base_interf <= gamma * (1.0 + 1e-12) + 1e-15) {
    base.mu = RVector::Zero(1);
    return base;
  }

  if (gamma == 0.0) {
    // Only sub-channels invisible to the constraint may carry power.
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (alpha(i) == 0.0) free.push_back(i);
    }
    out.sigma = RVector::Zero(m);
    if (free.empty()) {
      out.nu = 0.0;
      double mu_req = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) mu_req = std::max(mu_req, lambda(i) / alpha(i));
      out.mu(0) = mu_req;
      return out;
    }
    RVector lam_free(static_cast<Eigen::Index>(free.size()));
    for (size_t j = 0; j < free.size(); ++j) lam_free(static_cast<Eigen::Index>(j)) = lambda(free[j]);
    const WfAllocation sub = standard_wf(lam_free, P_t);
    for (size_t j = 0; j < free.size(); ++j) out.sigma(free[j]) = sub.sigma(static_cast<Eigen::Index>(j));
    out.nu = sub.nu;
    double mu_req = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (alpha(i) > 0.0) mu_req = std::max(mu_req, (lambda(i) - out.nu) / alpha(i));
    }
    out.mu(0) = std::max(mu_req, 0.0);
    return out;
  }

  double mu_hat = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (alpha(i) > 0.0) mu_hat = std::max(mu_hat, lambda(i) / alpha(i));
  }

  const double delta_mu = 1e-8;
  double lo = 0.0, hi = mu_hat;
  double nu_hi = 0.0;
  RVector sig_hi;
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    auto [nu, sig] = inner_min_nu(lambda, (alpha * mid).eval(), P_t);
    if (alpha.dot(sig) >= gamma) {
      lo = mid;
    } else {
      hi = mid;
      nu_hi = nu;
      sig_hi = sig;
    }
    if (hi - lo <= delta_mu) {
      auto [nu_f, sig_f] = inner_min_nu(lambda, (alpha * hi).eval(), P_t);
      nu_hi = nu_f;
      sig_hi = sig_f;
      if (hi * (gamma - alpha.dot(sig_f)) <= 1e-8 * std::max(1.0, P_t)) break;
    }
  }
  if (sig_hi.size() == 0) {
    auto [nu_f, sig_f] = inner_min_nu(lambda, (alpha * hi).eval(), P_t);
    nu_hi = nu_f;
    sig_hi = sig_f;
  }
  out.sigma = sig_hi;
  out.nu = nu_hi;
  out.mu(0) = hi;
  return out;
}

WfAllocation solve_multi_mu(RVectorRef lambda, const RMatrix& A, double P_t,
                            RVectorRef Gamma) {
  check_lambda(lambda);
  const Eigen::Index K = A.rows();
  const Eigen::Index m = lambda.size();
  if (A.cols() != m || Gamma.size() != K) {
    throw std::invalid_argument("solve_multi_mu: coupling shape mismatch");
  }
  if (P_t < 0.0) throw std::invalid_argument("solve_multi_mu: negative budget");
  for (Eigen::Index k = 0; k < K; ++k) {
    if (Gamma(k) < 0.0) throw std::invalid_argument("solve_multi_mu: negative cap");
  }

  WfAllocation out;
  out.mu = RVector::Zero(K);
  if (K == 0) {
    WfAllocation wf = standard_wf(lambda, P_t);
    wf.mu = RVector::Zero(0);
    return wf;
  }
  if (P_t == 0.0) {
    out.sigma = RVector::Zero(m);
    out.nu = lambda.maxCoeff();
    return out;
  }

  WfAllocation base = standard_wf(lambda, P_t);
  const RVector base_interf = A * base.sigma;
  bool slack = true;
  for (Eigen::Index k = 0; k < K; ++k) {
    if (base_interf(k) > Gamma(k) * (1.0 + 1e-12) + 1e-15) slack = false;
  }
  if (slack) {
    base.mu = RVector::Zero(K);
    return base;
  }

  // Zero caps pin every coupled sub-channel to zero power; reduce to the
  // positive-cap problem over the remaining channels.
  std::vector<Eigen::Index> zero_rows, pos_rows;
  for (Eigen::Index k = 0; k < K; ++k) {
    (Gamma(k) == 0.0 ? zero_rows : pos_rows).push_back(k);
  }
  if (!zero_rows.empty()) {
    std::vector<Eigen::Index> free;
    for (Eigen::Index i = 0; i < m; ++i) {
      bool forced = false;
      for (Eigen::Index k : zero_rows) {
        if (A(k, i) > 0.0) forced = true;
      }
      if (!forced) free.push_back(i);
    }
    out.sigma = RVector::Zero(m);
    out.nu = 0.0;
    out.converged = true;
    if (!free.empty()) {
      RVector lam_free(static_cast<Eigen::Index>(free.size()));
      RMatrix A_sub(static_cast<Eigen::Index>(pos_rows.size()), lam_free.size());
      RVector G_sub(static_cast<Eigen::Index>(pos_rows.size()));
      for (size_t j = 0; j < free.size(); ++j) {
        lam_free(static_cast<Eigen::Index>(j)) = lambda(free[j]);
        for (size_t kk = 0; kk < pos_rows.size(); ++kk) {
          A_sub(static_cast<Eigen::Index>(kk), static_cast<Eigen::Index>(j)) =
              A(pos_rows[kk], free[j]);
        }
      }
      for (size_t kk = 0; kk < pos_rows.size(); ++kk) {
        G_sub(static_cast<Eigen::Index>(kk)) = Gamma(pos_rows[kk]);
      }
      WfAllocation sub = solve_multi_mu(lam_free, A_sub, P_t, G_sub);
      for (size_t j = 0; j < free.size(); ++j) {
        out.sigma(free[j]) = sub.sigma(static_cast<Eigen::Index>(j));
      }
      out.nu = sub.nu;
      out.converged = sub.converged;
      for (size_t kk = 0; kk < pos_rows.size(); ++kk) {
        out.mu(pos_rows[kk]) = sub.mu(static_cast<Eigen::Index>(kk));
      }
    }
    // Dual weights on zero-cap rows chosen to cover stationarity of the
    // silenced channels.
    for (Eigen::Index k : zero_rows) {
      double need = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (A(k, i) > 0.0 && out.sigma(i) == 0.0) {
          double offset = out.nu;
          for (Eigen::Index j = 0; j < K; ++j) {
            if (j != k) offset += out.mu(j) * A(j, i);
          }
          need = std::max(need, (lambda(i) - offset) / A(k, i));
        }
      }
      out.mu(k) = std::max(need, 0.0);
    }
    return out;
  }

  double mu_hat = 0.0;
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index i = 0; i < m; ++i) {
      if (A(k, i) > 0.0) mu_hat = std::max(mu_hat, lambda(i) / A(k, i));
    }
  }

  struct Cand {
    double rate;
    RVector sigma;
    RVector mu;
    double nu;
  };
  std::optional<Cand> best;

  auto consider = [&](const RVector& mu, double nu, const RVector& sigma) {
    const RVector interf = A * sigma;
    for (Eigen::Index k = 0; k < K; ++k) {
      if (interf(k) > Gamma(k) * (1.0 + 1e-9) + 1e-15) return;
    }
    const double r = rate_bits(lambda, sigma);
    if (!best || r > best->rate) best = Cand{r, sigma, mu, nu};
  };

  auto evaluate = [&](const RVector& mu) {
    const RVector a = A.transpose() * mu;
    auto [nu, sigma] = inner_min_nu(lambda, a, P_t);
    consider(mu, nu, sigma);
    const RVector grad = (Gamma - A * sigma) / kLn2;
    const double dual = rate_bits(lambda, sigma) + mu.dot(grad);
    return std::make_tuple(nu, sigma, grad, dual);
  };

  {  // seed a guaranteed-feasible candidate at the corner price
    RVector mu_corner = RVector::Constant(K, mu_hat);
    evaluate(mu_corner);
  }

  auto oracle = [&](const RVector& x) -> EllipsoidCut {
    for (Eigen::Index k = 0; k < K; ++k) {
      if (x(k) < 0.0) {
        EllipsoidCut cut;
        cut.g = RVector::Zero(K);
        cut.g(k) = -1.0;
        return cut;
      }
    }
    auto [nu, sigma, grad, dual] = evaluate(x);
    (void)nu;
    (void)sigma;
    EllipsoidCut cut;
    cut.g = grad;
    cut.is_objective = true;
    cut.value = dual;
    return cut;
  };

  EllipsoidOptions opt;
  opt.tol = 1e-7;
  opt.point_tol_rel = 1e-8;
  opt.max_iter = 500 * static_cast<int>(K) * static_cast<int>(K);
  const EllipsoidOutcome res = ellipsoid_minimize(
      RVector::Zero(K), mu_hat * std::sqrt(static_cast<double>(K)) + 1e-12, oracle, opt);

  // The dual-optimal center usually satisfies complementary slackness best;
  // fall back to its feasibility-scaled allocation when needed.
  {
    RVector mu_fin = res.x_best.cwiseMax(0.0);
    const RVector a = A.transpose() * mu_fin;
    auto [nu, sigma] = inner_min_nu(lambda, a, P_t);
    const RVector interf = A * sigma;
    double t = 1.0;
    for (Eigen::Index k = 0; k < K; ++k) {
      if (interf(k) > Gamma(k)) t = std::min(t, Gamma(k) / interf(k));
    }
    consider(mu_fin, nu, (sigma * t).eval());
  }

  if (!best) {
    out.sigma = RVector::Zero(m);
    out.nu = lambda.maxCoeff();
    out.converged = false;
    return out;
  }
  out.sigma = best->sigma;
  out.nu = best->nu;
  out.mu = best->mu;
  out.converged = res.converged;
  return out;
}

}  // namespace crspec
