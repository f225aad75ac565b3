// Copyright 2026 The chandiv Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "chandiv/qubit.hpp"
#include "chandiv/sampling.hpp"

using namespace chandiv;

namespace {

Channel amplitude_damping(double gamma) {
  CMat k0 = CMat::Zero(2, 2);
  k0(0, 0) = 1;
  k0(1, 1) = std::sqrt(1 - gamma);
  CMat k1 = CMat::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  return Channel::from_kraus({2, {k0, k1}});
}

Channel dephasing(double y) {
  CMat k0 = CMat::Zero(2, 2);
  k0(0, 0) = std::sqrt(1 - y * y);
  CMat k1 = CMat::Zero(2, 2);
  k1(0, 0) = y;
  k1(1, 1) = 1;
  return Channel::from_kraus({2, {k0, k1}});
}

Channel point_channel() {
  PauliTransfer pt;
  pt.v = Eigen::Vector3d(0, 0, 1);
  pt.delta.setZero();
  return channel_from_pauli(pt);
}

Channel reconstruct(const RankTwoClass& cls, const Channel& canonical) {
  return compose(unitary_channel(cls.u1),
                 compose(canonical, unitary_channel(cls.u2)));
}

}  // namespace

TEST_CASE("pauli transfer extraction") {
  SUBCASE("identity") {
    const PauliTransfer pt = pauli_transfer(identity_channel(2));
    CHECK(pt.v.norm() < 1e-14);
    CHECK((pt.delta - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("amplitude damping") {
    const double gamma = 0.3;
    const PauliTransfer pt = pauli_transfer(amplitude_damping(gamma));
    const double s = std::sqrt(1 - gamma);
    CHECK(pt.v(0) == doctest::Approx(0.0));
    CHECK(pt.v(2) == doctest::Approx(gamma));
    CHECK(pt.delta(0, 0) == doctest::Approx(s));
    CHECK(pt.delta(1, 1) == doctest::Approx(s));
    CHECK(pt.delta(2, 2) == doctest::Approx(1 - gamma));
  }
  SUBCASE("corner transposition flips the antisymmetric axis") {
    const PauliTransfer pt = pauli_transfer(minimal_determinant_channel(2));
    CHECK(pt.v.norm() < 1e-13);
    Eigen::Vector3d expected(1.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0);
    CHECK((pt.delta - Eigen::Matrix3d(expected.asDiagonal())).cwiseAbs().maxCoeff() <
          1e-13);
  }
  SUBCASE("det delta equals det T") {
    for (int i = 0; i < 20; ++i) {
      const Channel ch = random_channel(2, 1 + i % 4, mix_seed(401, i));
      CHECK(std::abs(pauli_transfer(ch).delta.determinant() - determinant(ch)) <
            1e-10);
    }
  }
  SUBCASE("wrong dimension is rejected") {
    CHECK_THROWS_AS(pauli_transfer(identity_channel(3)), Error);
  }
}

TEST_CASE("delta diagonalization") {
  SUBCASE("already diagonal and ordered") {
    PauliTransfer pt;
    pt.delta = Eigen::Vector3d(0.9, 0.5, 0.2).asDiagonal();
    const DeltaDiagonalization dd = diagonalize_delta(pt);
    CHECK((dd.o1 - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((dd.o2 - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("negative determinant moves the sign to the last entry") {
    PauliTransfer pt;
    pt.delta = Eigen::Vector3d(1.0 / 3, -1.0 / 3, 1.0 / 3).asDiagonal();
    const DeltaDiagonalization dd = diagonalize_delta(pt);
    CHECK(dd.lambda(0) == doctest::Approx(1.0 / 3));
    CHECK(dd.lambda(1) == doctest::Approx(1.0 / 3));
    CHECK(dd.lambda(2) == doctest::Approx(-1.0 / 3));
  }
  SUBCASE("construct-then-recover round trip") {
    Rng rng(402);
    for (int i = 0; i < 10; ++i) {
      // Random rotations from the covering map of Haar unitaries.
      const Eigen::Matrix3d r1 =
          pauli_transfer(unitary_channel(random_unitary(2, mix_seed(403, i)))).delta;
      const Eigen::Matrix3d r2 =
          pauli_transfer(unitary_channel(random_unitary(2, mix_seed(404, i)))).delta;
      PauliTransfer pt;
      pt.delta = r1 * Eigen::Vector3d(0.9, 0.5, 0.2).asDiagonal() * r2;
      const DeltaDiagonalization dd = diagonalize_delta(pt);
      CHECK(dd.lambda(0) == doctest::Approx(0.9));
      CHECK(dd.lambda(1) == doctest::Approx(0.5));
      CHECK(std::abs(dd.lambda(2)) == doctest::Approx(0.2));
      const Eigen::Matrix3d achieved = dd.o1 * pt.delta * dd.o2;
      CHECK((achieved - Eigen::Matrix3d(dd.lambda.asDiagonal())).cwiseAbs().maxCoeff() <
            1e-12);
      CHECK(std::abs(pt.delta.determinant() - dd.lambda.prod()) < 1e-12);
    }
  }
  SUBCASE("qubit unitaries realize the rotations") {
    PauliTransfer pt;
    pt.delta << 0.3, 0.2, -0.1, 0.0, 0.5, 0.2, -0.3, 0.1, 0.4;
    const DeltaDiagonalization dd = diagonalize_delta(pt);
    const Eigen::Matrix3d r1 = pauli_transfer(unitary_channel(dd.u1)).delta;
    const Eigen::Matrix3d r2 = pauli_transfer(unitary_channel(dd.u2)).delta;
    CHECK((r1 - dd.o1).cwiseAbs().maxCoeff() < 1e-9);
    CHECK((r2 - dd.o2).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("Lorentz normal form") {
  SUBCASE("unital channels are already normal") {
    const Channel ch = unital_qubit_channel(Eigen::Vector3d(0.8, 0.7, 0.5));
    const LorentzNormalForm form = lorentz_normal_form(ch);
    CHECK(form.tag == NormalFormTag::Diagonal);
    CHECK(form.lambda(0) == doctest::Approx(0.8));
    CHECK(form.lambda(1) == doctest::Approx(0.7));
    CHECK(form.lambda(2) == doctest::Approx(0.5));
    CHECK(form.residual < 1e-6);
    // Filters are proportional to unitaries.
    CHECK(form.cond_a == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(form.cond_b == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("amplitude damping is the x=1 non-diagonal form") {
    const Channel ch = amplitude_damping(0.5);
    const LorentzNormalForm form = lorentz_normal_form(ch);
    CHECK(form.tag == NormalFormTag::NonDiagonal);
    CHECK(form.x == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(form.residual < 1e-6);
    CHECK(validate(ch).kraus_rank == 2);
  }
  SUBCASE("point channel onto a pure state is singular") {
    const LorentzNormalForm form = lorentz_normal_form(point_channel());
    CHECK(form.tag == NormalFormTag::Singular);
    CHECK(form.residual < 1e-8);
  }
  SUBCASE("non-diagonal representative recovers its x") {
    for (const double x : {0.2, 0.5, 0.8}) {
      const auto [f1, f2] = nondiagonal_decompose(x);
      const LorentzNormalForm form = lorentz_normal_form(compose(f1, f2));
      CHECK(form.tag == NormalFormTag::NonDiagonal);
      CHECK(form.x == doctest::Approx(x).epsilon(1e-6));
      CHECK(form.residual < 1e-6);
    }
  }
  SUBCASE("x extraction is invariant under extra unitaries") {
    const auto [f1, f2] = nondiagonal_decompose(0.4);
    const Channel nd = compose(f1, f2);
    const Channel rotated =
        compose(unitary_channel(random_unitary(2, 405)),
                compose(nd, unitary_channel(random_unitary(2, 406))));
    const LorentzNormalForm form = lorentz_normal_form(rotated);
    CHECK(form.tag == NormalFormTag::NonDiagonal);
    CHECK(form.x == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(form.residual < 1e-6);
  }
  SUBCASE("diagonal lambda is invariant under filtering") {
    const Eigen::Vector3d lambda(0.85, 0.6, 0.45);
    const Channel base = unital_qubit_channel(lambda);
    CMat fa(2, 2), fb(2, 2);
    fa << 1.3, 0.2, Complex(0.1, -0.1), 0.8;
    fb << 0.9, Complex(0.0, 0.3), 0.2, 1.1;
    Channel filtered = apply_filters(base, fa, fb);
    CMat q = unstack_rows(
        CVec(filtered.transfer().adjoint() * stack_rows(identity_matrix(2))), 2);
    q = hermitian_part(q);
    const CMat qinv = psd_inv_sqrt(q);
    filtered = Channel::from_transfer(
        {2, Basis::MatrixUnits,
         CMat(filtered.transfer() * kron(qinv, qinv.conjugate()))},
        base.tol(), true);
    const LorentzNormalForm form = lorentz_normal_form(filtered);
    REQUIRE(form.tag == NormalFormTag::Diagonal);
    CHECK(form.lambda(0) == doctest::Approx(lambda(0)).epsilon(1e-7));
    CHECK(form.lambda(1) == doctest::Approx(lambda(1)).epsilon(1e-7));
    CHECK(form.lambda(2) == doctest::Approx(lambda(2)).epsilon(1e-7));
    CHECK(form.residual < 1e-6);
  }
}

TEST_CASE("classification truth table") {
  SUBCASE("corner transposition") {
    const ClassificationReport r = classify(minimal_determinant_channel(2));
    CHECK(r.divisibility == Divisibility::Indivisible);
    CHECK(r.infinitesimal == Infinitesimal::NotInfinitesimalDivisible);
    CHECK(!r.positive_divisible);
  }
  SUBCASE("unital diag(0.8, 0.7, 0.5)") {
    const ClassificationReport r =
        classify(unital_qubit_channel(Eigen::Vector3d(0.8, 0.7, 0.5)));
    CHECK(r.divisibility == Divisibility::Indivisible);
    CHECK(r.infinitesimal == Infinitesimal::NotInfinitesimalDivisible);
    CHECK(r.positive_divisible);
    CHECK(r.evidence.det == doctest::Approx(0.28));
    CHECK(r.evidence.kraus_rank == 3);
    CHECK(r.evidence.s_min_sq == doctest::Approx(0.25));
    CHECK(r.evidence.det_delta == doctest::Approx(0.28));
  }
  SUBCASE("unital diag(0.9, 0.6, 0.6)") {
    const ClassificationReport r =
        classify(unital_qubit_channel(Eigen::Vector3d(0.9, 0.6, 0.6)));
    CHECK(r.divisibility == Divisibility::Divisible);
    CHECK(r.infinitesimal == Infinitesimal::InfinitesimalDivisible);
    CHECK(r.evidence.kraus_rank == 4);
  }
  SUBCASE("amplitude damping 0.5") {
    const ClassificationReport r = classify(amplitude_damping(0.5));
    CHECK(r.divisibility == Divisibility::Divisible);
    CHECK(r.infinitesimal == Infinitesimal::InfinitesimalDivisible);
  }
  SUBCASE("unitary conjugation") {
    const ClassificationReport r = classify(unitary_channel(random_unitary(2, 5)));
    CHECK(r.divisibility == Divisibility::Unitary);
    CHECK(r.infinitesimal == Infinitesimal::InfinitesimalDivisible);
  }
  SUBCASE("rank-four channels are divisible") {
    for (int i = 0; i < 20; ++i) {
      const ClassificationReport r =
          classify(random_channel(2, 4, mix_seed(407, i)));
      CHECK(r.divisibility == Divisibility::Divisible);
    }
  }
  SUBCASE("Markovian samples are benign") {
    for (int i = 0; i < 20; ++i) {
      const Channel e = exp_generator(random_generator(2, mix_seed(408, i)), 1.0);
      const ClassificationReport r = classify(e);
      CHECK(r.divisibility != Divisibility::Indivisible);
      CHECK(r.infinitesimal != Infinitesimal::NotInfinitesimalDivisible);
    }
  }
  SUBCASE("infinitesimal divisible implies nonnegative determinant") {
    for (int i = 0; i < 30; ++i) {
      const ClassificationReport r =
          classify(random_channel(2, 1 + i % 4, mix_seed(409, i)));
      if (r.infinitesimal == Infinitesimal::InfinitesimalDivisible)
        CHECK(r.evidence.det >= -1e-10);
      if (r.divisibility == Divisibility::Indivisible)
        CHECK((r.evidence.s_min_sq < r.evidence.det_delta ||
               r.evidence.det <= 0));
    }
  }
}

TEST_CASE("rank-two normal form") {
  SUBCASE("amplitude damping is class 1") {
    const double gamma = 0.4;
    const auto [cls, canonical] = rank_two_normal_form(amplitude_damping(gamma));
    CHECK(cls.kind == RankTwoClass::Kind::Class1);
    CHECK(cls.x == doctest::Approx(std::sqrt(1 - gamma)));
    CHECK(distance(reconstruct(cls, canonical), amplitude_damping(gamma)) < 1e-8);
  }
  SUBCASE("dephasing is class 2") {
    const double y = 0.6;
    const auto [cls, canonical] = rank_two_normal_form(dephasing(y));
    CHECK(cls.kind == RankTwoClass::Kind::Class2);
    CHECK(cls.y == doctest::Approx(y));
    CHECK(distance(reconstruct(cls, canonical), dephasing(y)) < 1e-8);
  }
  SUBCASE("unitary channels degenerate to class 1 with x = 1") {
    const CMat w = random_unitary(2, 411);
    const auto [cls, canonical] = rank_two_normal_form(unitary_channel(w));
    CHECK(cls.kind == RankTwoClass::Kind::Class1);
    CHECK(cls.x == doctest::Approx(1.0));
    CHECK(distance(canonical, identity_channel(2)) < 1e-12);
    CHECK(distance(reconstruct(cls, canonical), unitary_channel(w)) < 1e-10);
  }
  SUBCASE("extracted class data rebuilds the canonical channel") {
    for (int i = 0; i < 15; ++i) {
      const Channel ch = random_channel(2, 2, mix_seed(412, i));
      const auto [cls, canonical] = rank_two_normal_form(ch);
      CHECK(distance(reconstruct(cls, canonical), ch) < 1e-8);
      // rank_two_class_channel builds the A1 = |0><a|, A2 = |0><b| + x|1><1|
      // pair from the class parameters alone, with b fixed by the trace
      // condition; matching it pins the whole canonical structure.
      CHECK(distance(rank_two_class_channel(cls), canonical) < 1e-8);
      // The canonical channel fixes |0><0|.
      CMat north = CMat::Zero(2, 2);
      north(0, 0) = 1;
      const CMat img = canonical.apply(north);
      CHECK((img - north).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  SUBCASE("rank three is rejected") {
    CHECK_THROWS_AS(rank_two_normal_form(minimal_determinant_channel(2)), Error);
  }
}

TEST_CASE("rank-two channel from angles") {
  SUBCASE("zero angles give the identity") {
    CHECK(distance(rank_two_from_angles(0, 0), identity_channel(2)) < 1e-13);
  }
  SUBCASE("u = 0 gives a unital dephasing-like channel") {
    const double v = 1.0;
    const Channel ch = rank_two_from_angles(0, v);
    const PauliTransfer pt = pauli_transfer(ch);
    CHECK(pt.v.norm() < 1e-13);
    CHECK(pt.delta(0, 0) == doctest::Approx(1.0));
    CHECK(pt.delta(1, 1) == doctest::Approx(std::cos(v)));
    CHECK(pt.delta(2, 2) == doctest::Approx(std::cos(v)));
  }
  SUBCASE("u = v = pi/3") {
    const Channel ch = rank_two_from_angles(M_PI / 3, M_PI / 3);
    const StructureReport r = validate(ch);
    CHECK(r.is_completely_positive);
    CHECK(r.kraus_rank == 2);
    CHECK(r.det == doctest::Approx(1.0 / 16.0).epsilon(1e-10));
  }
  SUBCASE("angles outside the quarter turn are rejected") {
    CHECK_THROWS_AS(rank_two_from_angles(-0.1, 0), Error);
    CHECK_THROWS_AS(rank_two_from_angles(0, 2.0), Error);
  }
}

TEST_CASE("class-3 channels") {
  SUBCASE("the distinguished state maps to a pure state") {
    const double c1 = 0.6, x = 0.5, phi = 1.0;
    const Channel ch = class3_channel(c1, x, phi);
    const double c0 = std::sqrt(1 - c1 * c1);
    CVec c(2);
    c << c0 * std::exp(Complex(0, phi)), c1;
    const CMat img = ch.apply(CMat(c * c.adjoint()));
    CHECK((img * img).trace().real() == doctest::Approx(1.0).epsilon(1e-10));
    // The image direction keeps the azimuthal angle and contracts toward |0>:
    // |c'> = y c0 e^{i phi}|0> + x c1 |1> with y c0 = sqrt(1 - x^2 c1^2).
    CVec expected(2);
    expected << std::sqrt(1 - x * x * c1 * c1) * std::exp(Complex(0, phi)), x * c1;
    const CMat expected_proj = expected * expected.adjoint();
    CHECK((img - expected_proj).cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("composition law") {
    const double c1 = 0.45, x = 0.62, y = 0.71, phi = 2.2;
    const Channel lhs = compose(class3_channel(x * c1, y, phi),
                                class3_channel(c1, x, phi));
    const Channel rhs = class3_channel(c1, x * y, phi);
    CHECK(distance(lhs, rhs) < 1e-12);
  }
  SUBCASE("x to one limit approaches the identity") {
    CHECK(distance(class3_channel(0.6, 1 - 1e-7, 1.0), identity_channel(2)) < 1e-6);
  }
  SUBCASE("parameters outside the open interval are rejected") {
    CHECK_THROWS_AS(class3_channel(0.0, 0.5, 0.0), Error);
    CHECK_THROWS_AS(class3_channel(0.5, 1.0, 0.0), Error);
    CHECK_THROWS_AS(class3_channel(0.5, 0.5, -1.0), Error);
  }
}

TEST_CASE("rank-two generator schedules") {
  SUBCASE("class-1 reconstruction is exact at any step count") {
    RankTwoClass cls;
    cls.kind = RankTwoClass::Kind::Class1;
    cls.x = 0.5;
    const Channel target = amplitude_damping(1 - 0.25);
    for (const int steps : {1, 16})
      CHECK(distance(time_ordered_exp(rank_two_generator_schedule(cls), steps),
                     target) < 1e-10);
  }
  SUBCASE("class-2 reconstruction is exact") {
    RankTwoClass cls;
    cls.kind = RankTwoClass::Kind::Class2;
    cls.y = 0.7;
    for (const int steps : {1, 16})
      CHECK(distance(time_ordered_exp(rank_two_generator_schedule(cls), steps),
                     dephasing(0.7)) < 1e-10);
  }
  SUBCASE("class-3 reconstruction converges at first order") {
    RankTwoClass cls;
    cls.kind = RankTwoClass::Kind::Class3;
    cls.c1 = 0.6;
    cls.x = 0.5;
    cls.phi = 1.0;
    const Channel target = class3_channel(cls.c1, cls.x, cls.phi);
    const GeneratorSchedule schedule = rank_two_generator_schedule(cls);
    const double e512 = distance(time_ordered_exp(schedule, 512), target);
    const double e1024 = distance(time_ordered_exp(schedule, 1024), target);
    CHECK(e1024 < 1e-2);
    CHECK(e512 / e1024 > 1.7);
    CHECK(e512 / e1024 < 2.3);
  }
  SUBCASE("degenerate parameters are rejected") {
    RankTwoClass cls;
    cls.kind = RankTwoClass::Kind::Class1;
    cls.x = 1.0;
    CHECK_THROWS_AS(rank_two_generator_schedule(cls), Error);
    cls.x = 0.0;
    CHECK_THROWS_AS(rank_two_generator_schedule(cls), Error);
  }
}

TEST_CASE("non-diagonal decomposition") {
  SUBCASE("x = 0 has the projective dephasing second factor") {
    const auto [first, second] = nondiagonal_decompose(0.0);
    const PauliTransfer pt = pauli_transfer(second);
    CHECK(pt.v.norm() < 1e-13);
    CHECK(pt.delta(0, 0) == doctest::Approx(0.0));
    CHECK(pt.delta(1, 1) == doctest::Approx(0.0));
    CHECK(pt.delta(2, 2) == doctest::Approx(1.0));
  }
  SUBCASE("x = 1/2 composes to the documented form") {
    const auto [first, second] = nondiagonal_decompose(0.5);
    const PauliTransfer pt = pauli_transfer(compose(first, second));
    CHECK(pt.v(2) == doctest::Approx(2.0 / 3.0));
    CHECK(pt.delta(0, 0) == doctest::Approx(0.5 / std::sqrt(3.0)));
    CHECK(pt.delta(1, 1) == doctest::Approx(0.5 / std::sqrt(3.0)));
    CHECK(pt.delta(2, 2) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("both factors are CP with rank at most two") {
    for (double x = 0.1; x < 0.95; x += 0.1) {
      const auto [first, second] = nondiagonal_decompose(x);
      for (const Channel& factor : {first, second}) {
        const StructureReport r = validate(factor);
        CHECK(r.is_completely_positive);
        CHECK(r.kraus_rank <= 2);
      }
    }
  }
  SUBCASE("x outside [0,1) is rejected") {
    CHECK_THROWS_AS(nondiagonal_decompose(1.0), Error);
    CHECK_THROWS_AS(nondiagonal_decompose(-0.2), Error);
  }
}

TEST_CASE("unital semigroup pieces") {
  SUBCASE("t = 1 returns the original channel, t = 1/2 stays CP") {
    const Eigen::Vector3d lambda(0.9, 0.6, 0.6);
    CHECK(distance(unital_semigroup_channel(lambda, 1.0),
                   unital_qubit_channel(lambda)) < 1e-13);
    CHECK(unital_semigroup_channel(lambda, 0.5).is_completely_positive());
  }
  SUBCASE("condition-violating lambda loses CP at small times") {
    const Eigen::Vector3d lambda(0.8, 0.7, 0.5);
    const Channel piece = unital_semigroup_channel(lambda, 0.01);
    CHECK(unital_choi_spectrum(pauli_transfer(piece).delta.diagonal()).minCoeff() <
          -1e-12);
  }
  SUBCASE("t = 0 is the identity") {
    CHECK(distance(unital_semigroup_channel(Eigen::Vector3d(0.3, 0.2, 0.1), 0.0),
                   identity_channel(2)) < 1e-13);
  }
  SUBCASE("nonpositive lambda is rejected") {
    CHECK_THROWS_AS(unital_semigroup_channel(Eigen::Vector3d(0.5, 0.0, 0.5), 1.0),
                    Error);
  }
}

TEST_CASE("product of Markovian pieces") {
  SUBCASE("depolarizing is exactly Markovian") {
    const Channel dep = unital_qubit_channel(Eigen::Vector3d(0.5, 0.5, 0.5));
    for (const int n : {1, 4, 32}) {
      const auto [recon, err] = markov_product_approx(dep, n);
      CHECK(err < 1e-9);
    }
  }
  SUBCASE("unital semigroup channel reconstructs exactly") {
    const auto [recon, err] =
        markov_product_approx(unital_qubit_channel(Eigen::Vector3d(0.9, 0.6, 0.6)), 64);
    CHECK(err < 1e-6);
  }
  SUBCASE("amplitude damping via its class schedule") {
    const auto [recon, err] = markov_product_approx(amplitude_damping(0.75), 1024);
    CHECK(err < 1e-2);
  }
  SUBCASE("filtered non-diagonal channel goes through the rebalancing chain") {
    const auto [f1, f2] = nondiagonal_decompose(0.5);
    const auto [recon, err] = markov_product_approx(compose(f1, f2), 64);
    CHECK(err < 1e-6);
  }
  SUBCASE("non-unital Markovian channels reconstruct through their normal form") {
    for (int i = 0; i < 5; ++i) {
      const Channel e = exp_generator(random_generator(2, mix_seed(413, i)), 1.0);
      const auto [recon, err] = markov_product_approx(e, 16);
      CHECK(err < 1e-6);
    }
  }
  SUBCASE("non-infinitesimal-divisible channels are rejected") {
    CHECK_THROWS_AS(
        markov_product_approx(unital_qubit_channel(Eigen::Vector3d(0.8, 0.7, 0.5)), 8),
        Error);
  }
}

TEST_CASE("class semigroup relation C_x1 C_x2 = C_x1x2") {
  for (double x1 = 0.1; x1 < 0.95; x1 += 0.2) {
    for (double x2 = 0.1; x2 < 0.95; x2 += 0.2) {
      const Channel lhs = compose(amplitude_damping(1 - x1 * x1),
                                  amplitude_damping(1 - x2 * x2));
      const Channel rhs = amplitude_damping(1 - x1 * x1 * x2 * x2);
      CHECK(distance(lhs, rhs) < 1e-10);
      const Channel lhs2 = compose(dephasing(x1), dephasing(x2));
      CHECK(distance(lhs2, dephasing(x1 * x2)) < 1e-10);
    }
  }
}
