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

#include "crspec/matkernel.hpp"

#include "crspec/rng.hpp"

#include <doctest.h>

using namespace crspec;

TEST_SUITE("matkernel") {

TEST_CASE("svd of a real diagonal matrix") {
  CMatrix M = CMatrix::Zero(2, 2);
  M(0, 0) = 2.0;
  M(1, 1) = 1.0;
  const SvdFactors f = svd(M);
  CHECK(f.lambda.size() == 2);
  CHECK(f.lambda(0) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(f.lambda(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((f.Q - CMatrix::Identity(2, 2)).norm() < 1e-12);
  CHECK((f.U - CMatrix::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("svd of a row vector") {
  CMatrix M(1, 2);
  M << 3.0, 4.0;
  const SvdFactors f = svd(M);
  REQUIRE(f.lambda.size() == 1);
  CHECK(f.lambda(0) == doctest::Approx(25.0).epsilon(1e-12));
  CHECK(std::abs(f.U(0, 0) - Complex(0.6, 0.0)) < 1e-12);
  CHECK(std::abs(f.U(1, 0) - Complex(0.8, 0.0)) < 1e-12);
}

TEST_CASE("svd reconstruction on a random rectangular matrix") {
  Crng rng(1, 0, RngRole::Auxiliary);
  CMatrix M = draw_cscg_matrix(3, 2, 1.0, rng);
  const SvdFactors f = svd(M);
  const CMatrix rebuilt =
      f.Q * f.lambda.array().sqrt().matrix().asDiagonal() * f.U.adjoint();
  CHECK((rebuilt - M).norm() < 1e-10);
}

TEST_CASE("svd reconstruction and orthonormality over many random shapes") {
  for (int i = 0; i < 1000; ++i) {
    Crng rng(2, i, RngRole::Auxiliary);
    const int rows = 1 + static_cast<int>(rng.next_u64() % 8);
    const int cols = 1 + static_cast<int>(rng.next_u64() % 8);
    const CMatrix M = draw_cscg_matrix(rows, cols, 1.0, rng);
    const SvdFactors f = svd(M);
    const CMatrix rebuilt =
        f.Q * f.lambda.array().sqrt().matrix().asDiagonal() * f.U.adjoint();
    REQUIRE((rebuilt - M).norm() / M.norm() < 1e-8);
    const auto r = f.lambda.size();
    REQUIRE((f.Q.adjoint() * f.Q - CMatrix::Identity(r, r)).norm() < 1e-10);
    REQUIRE((f.U.adjoint() * f.U - CMatrix::Identity(r, r)).norm() < 1e-10);
    for (Eigen::Index j = 1; j < r; ++j) REQUIRE(f.lambda(j) <= f.lambda(j - 1));
  }
}

TEST_CASE("svd determinism across repeated calls") {
  Crng rng(3, 0, RngRole::Auxiliary);
  const CMatrix M = draw_cscg_matrix(4, 3, 1.0, rng);
  const SvdFactors a = svd(M);
  const SvdFactors b = svd(M);
  CHECK((a.U - b.U).norm() == 0.0);
  CHECK((a.Q - b.Q).norm() == 0.0);
}

TEST_CASE("svd rejects the zero matrix") {
  CHECK_THROWS_AS(svd(CMatrix::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("herm_eig on small fixed matrices") {
  auto [V1, d1] = herm_eig(CMatrix::Identity(2, 2));
  CHECK(d1(0) == doctest::Approx(1.0));
  CHECK(d1(1) == doctest::Approx(1.0));
  (void)V1;

  CMatrix A(2, 2);
  A << 2.0, 1.0, 1.0, 2.0;
  auto [V, d] = herm_eig(A);
  CHECK(d(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(d(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((V * d.asDiagonal() * V.adjoint() - A).norm() < 1e-12);
}

TEST_CASE("herm_eig reconstruction on random PSD matrices") {
  for (int i = 0; i < 100; ++i) {
    Crng rng(4, i, RngRole::Auxiliary);
    const CMatrix X = draw_cscg_matrix(4, 4, 1.0, rng);
    const CMatrix A = X * X.adjoint();
    auto [V, d] = herm_eig(A);
    REQUIRE(d(d.size() - 1) >= -1e-10 * A.norm());
    REQUIRE((V * d.asDiagonal() * V.adjoint() - A).norm() < 1e-10 * A.norm());
  }
}

TEST_CASE("herm_eig matches squared singular values of the Hermitian root") {
  Crng rng(5, 0, RngRole::Auxiliary);
  const CMatrix X = draw_cscg_matrix(3, 3, 1.0, rng);
  const CMatrix A = X * X.adjoint();
  auto [V, d] = herm_eig(A);
  const CMatrix root = V * d.array().sqrt().matrix().asDiagonal() * V.adjoint();
  const SvdFactors f = svd(root);
  REQUIRE(f.lambda.size() == d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    CHECK(f.lambda(i) == doctest::Approx(d(i)).epsilon(1e-8));
  }
}

TEST_CASE("herm_eig rejects a non-Hermitian matrix") {
  CMatrix A(2, 2);
  A << 1.0, 2.0, 3.0, 4.0;
  CHECK_THROWS_AS(herm_eig(A), std::invalid_argument);
}

TEST_CASE("null_projector basics") {
  CMatrix e1 = CMatrix::Zero(2, 1);
  e1(0, 0) = 1.0;
  CMatrix P = null_projector(e1);
  CHECK(std::abs(P(0, 0)) < 1e-15);
  CHECK(std::abs(P(1, 1) - Complex(1, 0)) < 1e-15);

  CHECK(null_projector(CMatrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("null_projector is an idempotent Hermitian projector of right rank") {
  for (int i = 0; i < 50; ++i) {
    Crng rng(6, i, RngRole::Auxiliary);
    const CMatrix M = draw_cscg_matrix(4, 2, 1.0, rng);
    const SvdFactors f = svd(M);
    const CMatrix P = null_projector(f.Q);
    REQUIRE((P * P - P).norm() < 1e-9);
    REQUIRE((P - P.adjoint()).norm() < 1e-9);
    REQUIRE((P * f.Q).norm() < 1e-9);
    auto [V, d] = herm_eig(P);
    int rank = 0;
    for (Eigen::Index j = 0; j < d.size(); ++j) {
      if (d(j) > 0.5) ++rank;
    }
    REQUIRE(rank == 2);
    (void)V;
  }
}

TEST_CASE("null_projector rejects non-orthonormal columns") {
  CMatrix U(2, 1);
  U << 1.0, 1.0;
  CHECK_THROWS_AS(null_projector(U), std::invalid_argument);
}

TEST_CASE("null_basis spans the kernel") {
  Crng rng(7, 0, RngRole::Auxiliary);
  const CMatrix Z = draw_cscg_matrix(2, 5, 1.0, rng);
  const CMatrix N = null_basis(Z);
  REQUIRE(N.cols() == 3);
  CHECK((Z * N).norm() < 1e-10);
  CHECK((N.adjoint() * N - CMatrix::Identity(3, 3)).norm() < 1e-10);
  CHECK(null_basis(CMatrix::Identity(3, 3)).cols() == 0);
}

TEST_CASE("inv_sqrt_psd on fixed and random matrices") {
  CHECK((inv_sqrt_psd(4.0 * CMatrix::Identity(3, 3)) -
         0.5 * CMatrix::Identity(3, 3))
            .norm() < 1e-12);

  CMatrix D = CMatrix::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = 9.0;
  const CMatrix B = inv_sqrt_psd(D);
  CHECK(std::abs(B(0, 0) - Complex(1.0, 0)) < 1e-12);
  CHECK(std::abs(B(1, 1) - Complex(1.0 / 3.0, 0)) < 1e-12);

  for (int i = 0; i < 50; ++i) {
    Crng rng(8, i, RngRole::Auxiliary);
    const CMatrix X = draw_cscg_matrix(4, 4, 1.0, rng);
    const CMatrix A = X * X.adjoint() + 0.1 * CMatrix::Identity(4, 4);
    const CMatrix W = inv_sqrt_psd(A);
    REQUIRE((W * A * W - CMatrix::Identity(4, 4)).norm() < 1e-8);
  }
}

TEST_CASE("inv_sqrt_psd rejects singular or indefinite input") {
  CMatrix Z = CMatrix::Zero(2, 2);
  Z(0, 0) = 1.0;
  CHECK_THROWS_AS(inv_sqrt_psd(Z), std::domain_error);
  CMatrix Neg = CMatrix::Identity(2, 2);
  Neg(1, 1) = -1.0;
  CHECK_THROWS_AS(inv_sqrt_psd(Neg), std::domain_error);
}

}  // TEST_SUITE
