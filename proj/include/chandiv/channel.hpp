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

#ifndef CHANDIV_CHANNEL_HPP_
#define CHANDIV_CHANNEL_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "chandiv/basis.hpp"
#include "chandiv/types.hpp"

namespace chandiv {

/// Jamiolkowski state tau = (T x id)(omega) of a map on d x d matrices.
struct ChoiState {
  Index dim = 0;
  CMat tau;
};

/// List of Kraus operators K_alpha, T(A) = sum_alpha K_alpha A K_alpha^dag.
struct KrausRep {
  Index dim = 0;
  std::vector<CMat> ops;
};

/// d^2 x d^2 matrix representation in an orthonormal operator basis.
struct TransferMatrix {
  Index dim = 0;
  Basis basis = Basis::MatrixUnits;
  CMat mat;
};

struct StructureReport {
  bool is_hermiticity_preserving = false;
  bool is_trace_preserving = false;
  bool is_unital = false;
  bool is_completely_positive = false;
  int kraus_rank = 0;
  std::vector<double> choi_eigenvalues;  // ascending
  double det = 0.0;
  double purity = 0.0;
};

/// A linear, Hermiticity-preserving map on d x d matrices with the Choi
/// matrix as source of truth.  The matrix-units transfer matrix is cached at
/// construction; Kraus operators are cached whenever the Choi matrix is
/// positive semidefinite.  Values are immutable after construction and safe
/// to share across threads.
///
/// The checked factories (require_tp = true, the default) enforce the trace
/// preserving contract of a channel; dual maps and filtering operations are
/// built with require_tp = false.
class Channel {
 public:
  static Channel from_kraus(const KrausRep& rep, Tolerances tol = {},
                            bool require_tp = true);
  static Channel from_choi(const ChoiState& rep, Tolerances tol = {},
                           bool require_tp = true);
  static Channel from_transfer(const TransferMatrix& rep, Tolerances tol = {},
                               bool require_tp = true);

  Index dim() const { return dim_; }
  const Tolerances& tol() const { return tol_; }

  const CMat& choi() const { return choi_; }
  /// Matrix-units transfer matrix, hat(T) = d tau^Gamma.
  const CMat& transfer() const { return transfer_; }
  CMat transfer_in(Basis basis) const;

  bool is_trace_preserving() const { return trace_preserving_; }
  bool is_hermiticity_preserving() const { return hermiticity_preserving_; }
  bool is_unital() const;
  bool is_completely_positive() const;
  /// Smallest and largest Choi eigenvalue.
  double choi_min_eigenvalue() const { return choi_min_eig_; }
  double choi_max_eigenvalue() const { return choi_max_eig_; }

  /// Kraus operators, ordered by descending Choi eigenvalue with the
  /// largest-magnitude entry of each operator made real positive.
  /// Throws NegativeChoi when the map is not completely positive.
  const std::vector<CMat>& kraus() const;
  bool has_kraus() const { return kraus_.has_value(); }

  CMat apply(const CMat& rho) const;

 private:
  Channel() = default;
  void finalize(Tolerances tol, bool require_tp, bool known_tp);

  Index dim_ = 0;
  Tolerances tol_;
  CMat choi_;
  CMat transfer_;
  std::optional<std::vector<CMat>> kraus_;
  bool trace_preserving_ = false;
  bool hermiticity_preserving_ = false;
  double choi_min_eig_ = 0.0;
  double choi_max_eig_ = 0.0;
};

// --- conversions -----------------------------------------------------------

ChoiState to_choi(const Channel& ch);
KrausRep to_kraus(const Channel& ch);
TransferMatrix to_transfer(const Channel& ch, Basis basis);

// --- operations ------------------------------------------------------------

/// Concatenation t1 after t2: transfer matrix product hat(T1) hat(T2).
Channel compose(const Channel& t1, const Channel& t2);

/// Dual map w.r.t. the Hilbert-Schmidt inner product; transfer matrix is the
/// adjoint.  Unital iff the input is trace preserving, and generally not
/// trace preserving itself.
Channel dual(const Channel& ch);

StructureReport validate(const Channel& ch);

/// Real determinant of the transfer matrix.  The imaginary residue of the
/// complex LU determinant must stay below 1e-8, else NumericalFailure.
double determinant(const Channel& ch);

struct PurityBounds {
  double purity = 0.0;      // tr[tau^2]
  double mu = 0.0;          // largest Choi eigenvalue
  double det = 0.0;
  double overlap = 0.0;     // <Omega_0| tau_0 |Omega_0> for tau_0 = Choi(T U0)
  bool det_bound_ok = false;   // det T <= purity^(d^2/2) + 1e-10
  bool mu3_bound_ok = false;   // overlap >= mu^3 - 1e-10
};

/// Purity of the Jamiolkowski state and the determinant / mu^3 bounds.
/// Requires a completely positive trace preserving channel.
PurityBounds purity_and_bounds(const Channel& ch);

/// Operator-norm distance ||hat(T1) - hat(T2)||_inf.
double distance(const Channel& t1, const Channel& t2);

// --- named channels --------------------------------------------------------

Channel identity_channel(Index d, Tolerances tol = {});

/// Unitary conjugation rho -> V rho V^dagger.
Channel unitary_channel(const CMat& v, Tolerances tol = {});

/// rho -> 1 tr(rho) / d.
Channel completely_depolarizing_channel(Index d, Tolerances tol = {});

/// rho -> (rho^{T_c} + 1 tr rho) / (1 + d) where T_c transposes the corner
/// entries (1,d) and (d,1).  Completely positive with Kraus rank d^2 - 1 and
/// determinant -(d+1)^(1-d^2), the minimum over all channels.
Channel minimal_determinant_channel(Index d, Tolerances tol = {});

/// rho -> rho^T.  Positive and trace preserving but not completely positive;
/// determinant (-1)^(d(d-1)/2).
Channel transposition_channel(Index d, Tolerances tol = {});

/// Given maps t1, t2 whose concatenation is trace preserving, returns trace
/// preserving maps (T1, T2) with T1 T2 = t1 t2 and the same Kraus ranks,
/// obtained by conjugating with P = sqrt(t1*(1)).  Throws
/// SingularNormalization when t1*(1) is singular.
std::pair<Channel, Channel> rebalance_to_tp(const Channel& t1,
                                            const Channel& t2);

}  // namespace chandiv

#endif  // CHANDIV_CHANNEL_HPP_
