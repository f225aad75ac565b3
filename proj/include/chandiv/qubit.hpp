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

#ifndef CHANDIV_QUBIT_HPP_
#define CHANDIV_QUBIT_HPP_

#include <utility>

#include "chandiv/channel.hpp"
#include "chandiv/lindblad.hpp"
#include "chandiv/types.hpp"

namespace chandiv {

/// Real 4x4 representation of a qubit channel: first row (1,0,0,0),
/// translation v and 3x3 block delta acting on the Bloch vector.
struct PauliTransfer {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Eigen::Matrix3d delta = Eigen::Matrix3d::Identity();
};

PauliTransfer pauli_transfer(const Channel& ch);

/// Builds a qubit channel from its Pauli transfer form.
Channel channel_from_pauli(const PauliTransfer& pt, Tolerances tol = {},
                           bool require_tp = true);

/// Unital qubit channel with delta = diag(lambda).
Channel unital_qubit_channel(const Eigen::Vector3d& lambda, Tolerances tol = {});

/// Closed-form Choi eigenvalues (1 +- l1 +- l2 +- l3)/4 over the sign
/// combinations with an even number of minus signs; the channel is
/// completely positive iff all four are nonnegative.
Eigen::Vector4d unital_choi_spectrum(const Eigen::Vector3d& lambda);

struct DeltaDiagonalization {
  Eigen::Matrix3d o1 = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d o2 = Eigen::Matrix3d::Identity();
  Eigen::Vector3d lambda = Eigen::Vector3d::Ones();  // l1 >= l2 >= |l3|
  CMat u1, u2;  // qubit unitaries realizing o1, o2 through SU(2) -> SO(3)
};

/// Special orthogonal matrices with o1 * delta * o2 diagonal, ordered
/// l1 >= l2 >= |l3| with any sign moved to l3, plus the qubit unitaries
/// whose conjugation channels realize the rotations.
DeltaDiagonalization diagonalize_delta(const PauliTransfer& pt);

/// SU(2) element whose conjugation channel has Bloch rotation r.
CMat su2_from_so3(const Eigen::Matrix3d& r);

enum class NormalFormTag { Diagonal, NonDiagonal, Singular };

const char* normal_form_tag_name(NormalFormTag tag);

/// Normal form of a qubit channel under invertible Kraus-rank-one filtering:
/// Diagonal (unital, generic), NonDiagonal with delta =
/// diag(x/sqrt(3), x/sqrt(3), 1/3) and v = (0,0,2/3), or Singular with
/// delta = 0 and v = (0,0,1).  filter_a (output side) and filter_b (input
/// side) are the Kraus operators of the realizing filters.
struct LorentzNormalForm {
  NormalFormTag tag = NormalFormTag::Diagonal;
  Eigen::Vector3d lambda = Eigen::Vector3d::Zero();  // Diagonal
  double x = 0.0;                                    // NonDiagonal
  CMat filter_a, filter_b;
  int iterations = 0;
  double residual = 0.0;
  double cond_a = 1.0, cond_b = 1.0;
};

/// The normal-form channel itself (the representative of the tag).
Channel normal_form_channel(const LorentzNormalForm& form, Tolerances tol = {});

/// Applies the filters: rho -> A T(B rho B^dagger) A^dagger.
Channel apply_filters(const Channel& ch, const CMat& a, const CMat& b);

/// Filtering (Sinkhorn-style) iteration on the Choi state, with the
/// Lorentz-invariant spectrum of eta T^t eta T as fallback for the
/// non-diagonal branch.  Throws NonConvergence when neither resolves.
LorentzNormalForm lorentz_normal_form(const Channel& ch);

enum class Divisibility { Unitary, Divisible, Indivisible };
enum class Infinitesimal {
  InfinitesimalDivisible,
  NotInfinitesimalDivisible,
  BoundaryZeroDet,
};

const char* divisibility_name(Divisibility d);
const char* infinitesimal_name(Infinitesimal i);

struct ClassificationReport {
  Divisibility divisibility = Divisibility::Divisible;
  Infinitesimal infinitesimal = Infinitesimal::InfinitesimalDivisible;
  bool positive_divisible = false;
  struct Evidence {
    int kraus_rank = 0;
    NormalFormTag normal_form = NormalFormTag::Diagonal;
    double det = 0.0;
    double s_min_sq = 0.0;
    double det_delta = 0.0;
  } evidence;
  LorentzNormalForm normal_form;
};

/// Divisibility and infinitesimal-divisibility verdicts for a qubit channel:
/// indivisible iff non-unitary with Kraus rank three and diagonal normal
/// form; infinitesimal divisible iff the normal form is non-diagonal, or
/// diagonal with rank(delta) < 2, or diagonal with s_min^2 >= det(delta) > 0.
ClassificationReport classify(const Channel& ch);

/// Canonical Kraus pair of a rank-two qubit channel,
///   A1 = |0><a|, A2 = |0><b| + x |1><1|,
/// with x and the zero components of a, b real.
struct RankTwoClass {
  enum class Kind { Class1, Class2, Class3 };
  Kind kind = Kind::Class1;
  double x = 0.0;    // Class1 and Class3
  double y = 0.0;    // Class2
  double c1 = 0.0;   // Class3
  double phi = 0.0;  // Class3
  CMat u1, u2;       // unitary matrices with T = U1 C U2
};

const char* rank_two_kind_name(RankTwoClass::Kind kind);

/// Reduces a Kraus rank <= 2 qubit channel to the canonical form C with
/// T = U1 C U2; throws WrongRank for higher rank.
std::pair<RankTwoClass, Channel> rank_two_normal_form(const Channel& ch);

/// The canonical channel of a classified rank-two form (without the
/// surrounding unitaries).
Channel rank_two_class_channel(const RankTwoClass& cls, Tolerances tol = {});

/// Rank-two channel with delta = diag(cos u, cos v, cos u cos v) and
/// translation (0, 0, sin u sin v); u, v in [0, pi/2].
Channel rank_two_from_angles(double u, double v, Tolerances tol = {});

/// The unique class-3 channel mapping |c> = c0 e^{i phi}|0> + c1|1> to a
/// pure state; c1, x in (0,1), phi in [0, 2 pi).
Channel class3_channel(double c1, double x, double phi, Tolerances tol = {});

/// Lindblad schedule whose time-ordered exponential reproduces the class
/// channel: constant generators for class 1 and 2, and the flowing
/// class-3 generator tau -> L_{c1 e^-tau, phi} over [0, -ln x].
GeneratorSchedule rank_two_generator_schedule(const RankTwoClass& cls);

/// The two Kraus rank-two factors whose concatenation is the non-diagonal
/// normal-form channel with parameter x in [0, 1).
std::pair<Channel, Channel> nondiagonal_decompose(double x, Tolerances tol = {});

/// Unital semigroup piece delta_t = exp(t ln delta) for positive lambda.
Channel unital_semigroup_channel(const Eigen::Vector3d& lambda, double t,
                                 Tolerances tol = {});

}  // namespace chandiv

#endif  // CHANDIV_QUBIT_HPP_
