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

#include "crspec/model.hpp"

#include "crspec/matkernel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace crspec {

namespace {

RVector herm_eigenvalues(const CMatrix& A) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((A + A.adjoint()) / 2.0,
                                            Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

void check_psd(CMatrixRef S) {
  const RVector ev = herm_eigenvalues(S);
  const double tr = S.trace().real();
  const double slack = 1e-9 * std::max(tr, 0.0) + 1e-13 * S.norm();
  if (ev(0) < -slack) {
    throw std::invalid_argument("covariance not PSD within tolerance");
  }
}

bool full_rank(const CMatrix& M) {
  Eigen::JacobiSVD<CMatrix> dec(M);
  const RVector& s = dec.singularValues();
  return s(s.size() - 1) > kRankCutoff * s(0);
}

}  // namespace

Covariance Covariance::zero(Eigen::Index m) {
  Covariance c;
  c.S = CMatrix::Zero(m, m);
  c.eig = EigFactors{CMatrix::Zero(m, 0), RVector::Zero(0)};
  return c;
}

Covariance Covariance::from_matrix(CMatrixRef S_in) {
  Covariance c;
  c.S = (S_in + S_in.adjoint()) / 2.0;
  auto [V, d] = herm_eig(c.S);
  const double floor = 1e-14 * std::max(c.S.trace().real(), 0.0);
  Eigen::Index r = 0;
  while (r < d.size() && d(r) > floor) ++r;
  c.eig = EigFactors{V.leftCols(r), d.head(r)};
  return c;
}

Covariance Covariance::from_eig(CMatrixRef V, RVectorRef sigma) {
  if (V.cols() != sigma.size()) {
    throw std::invalid_argument("from_eig: V/sigma size mismatch");
  }
  Eigen::Index keep = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > 0.0) ++keep;
  }
  CMatrix Vk(V.rows(), keep);
  RVector sk(keep);
  Eigen::Index j = 0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > 0.0) {
      Vk.col(j) = V.col(i);
      sk(j) = sigma(i);
      ++j;
    }
  }
  Covariance c;
  c.S = Vk * sk.asDiagonal() * Vk.adjoint();
  c.S = (c.S + c.S.adjoint()) / 2.0;
  c.eig = EigFactors{std::move(Vk), std::move(sk)};
  return c;
}

void Covariance::validate() const {
  if (S.rows() != S.cols()) throw std::invalid_argument("covariance not square");
  check_psd(S);
  if (!eig) return;
  const CMatrix& V = eig->V;
  const RVector& sigma = eig->sigma;
  if (V.rows() != S.rows() || V.cols() != sigma.size()) {
    throw std::invalid_argument("covariance factorization shape mismatch");
  }
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (!(sigma(i) > 0.0)) {
      throw std::invalid_argument("covariance stream power not positive");
    }
  }
  if (V.cols() > 0) {
    const CMatrix eye = CMatrix::Identity(V.cols(), V.cols());
    if ((V.adjoint() * V - eye).norm() > 1e-10 * std::max<double>(1, V.cols())) {
      throw std::invalid_argument("covariance directions not orthonormal");
    }
  }
  const CMatrix rebuilt = V * sigma.asDiagonal() * V.adjoint();
  const double denom = std::max(S.norm(), 1e-300);
  if ((rebuilt - S).norm() / denom > 1e-8) {
    throw std::invalid_argument("covariance factorization inconsistent");
  }
}

int ChannelSet::primary_antenna_count() const {
  int n = 0;
  for (const auto& Gk : G) n += static_cast<int>(Gk.rows());
  return n;
}

void ChannelSet::validate() const {
  if (H.rows() < 1 || H.cols() < 1) {
    throw std::invalid_argument("channel set: empty H");
  }
  if (P_t < 0.0) throw std::invalid_argument("channel set: negative power budget");
  if (static_cast<Eigen::Index>(G.size()) != Gamma.size()) {
    throw std::invalid_argument("channel set: G/Gamma count mismatch");
  }
  if (!full_rank(H)) throw std::invalid_argument("channel set: H rank deficient");
  for (size_t k = 0; k < G.size(); ++k) {
    if (G[k].cols() != H.cols()) {
      throw std::invalid_argument("channel set: cross-channel column mismatch");
    }
    if (G[k].rows() < 1) throw std::invalid_argument("channel set: empty G_k");
    if (!full_rank(G[k])) {
      throw std::invalid_argument("channel set: G_k rank deficient");
    }
    if (Gamma(static_cast<Eigen::Index>(k)) < 0.0) {
      throw std::invalid_argument("channel set: negative interference cap");
    }
  }
}

std::string method_name(Method m, int hybrid_b) {
  switch (m) {
    case Method::Optimal: return "optimal";
    case Method::MisoClosedForm: return "miso-closed-form";
    case Method::DSvd: return "d-svd";
    case Method::PSvd: return "p-svd";
    case Method::Hybrid:
      return hybrid_b >= 0 ? "hybrid-b" + std::to_string(hybrid_b) : "hybrid";
    case Method::White: return "white";
  }
  return "unknown";
}

double achievable_rate(CMatrixRef S, CMatrixRef H) {
  if (S.rows() != S.cols() || S.rows() != H.cols()) {
    throw std::invalid_argument("achievable_rate: dimension mismatch");
  }
  check_psd(S);
  CMatrix E = CMatrix::Identity(H.rows(), H.rows()) + H * S * H.adjoint();
  const RVector ev = herm_eigenvalues(E);
  double bits = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    bits += std::log2(std::max(ev(i), 1e-300));
  }
  return std::max(bits, 0.0);
}

double interference_power(CMatrixRef S, CMatrixRef G_k) {
  if (S.rows() != S.cols() || S.rows() != G_k.cols()) {
    throw std::invalid_argument("interference_power: dimension mismatch");
  }
  return (G_k * S * G_k.adjoint()).trace().real();
}

ChannelSet expand_per_antenna(const ChannelSet& cs, RVectorRef gamma_per_antenna) {
  if (gamma_per_antenna.size() != static_cast<Eigen::Index>(cs.G.size())) {
    throw std::invalid_argument("expand_per_antenna: one cap per receiver required");
  }
  ChannelSet out;
  out.H = cs.H;
  out.P_t = cs.P_t;
  std::vector<CMatrix> rows;
  std::vector<double> caps;
  for (size_t k = 0; k < cs.G.size(); ++k) {
    for (Eigen::Index j = 0; j < cs.G[k].rows(); ++j) {
      rows.push_back(cs.G[k].row(j));
      caps.push_back(gamma_per_antenna(static_cast<Eigen::Index>(k)));
    }
  }
  out.G = std::move(rows);
  out.Gamma = Eigen::Map<const RVector>(caps.data(), static_cast<Eigen::Index>(caps.size()));
  return out;
}

PrecoderResult finish_result(Covariance cov, const ChannelSet& cs, Method m,
                             int hybrid_b) {
  PrecoderResult r;
  r.rate = achievable_rate(cov.S, cs.H);
  r.tx_power = cov.trace();
  r.interference.resize(static_cast<Eigen::Index>(cs.G.size()));
  for (size_t k = 0; k < cs.G.size(); ++k) {
    r.interference(static_cast<Eigen::Index>(k)) = interference_power(cov.S, cs.G[k]);
  }
  r.cov = std::move(cov);
  r.method = m;
  r.hybrid_b = hybrid_b;
  return r;
}

}  // namespace crspec
