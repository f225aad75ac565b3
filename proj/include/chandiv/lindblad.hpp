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

#ifndef CHANDIV_LINDBLAD_HPP_
#define CHANDIV_LINDBLAD_HPP_

#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "chandiv/channel.hpp"
#include "chandiv/types.hpp"

namespace chandiv {

/// Dissipative part as a Hermitian PSD matrix over the traceless elements of
/// the unitary operator basis (see traceless_unitary_basis).
struct GKSForm {
  CMat g;  // (d^2-1) x (d^2-1)
};

struct LindbladOps {
  std::vector<CMat> ops;
};

/// Dimension encoded by a (d^2-1)-sized GKS matrix.
Index gks_dim(const GKSForm& g);

/// Generator of a quantum dynamical semigroup,
///   L(rho) = i[rho, H] + phi(rho) - 1/2 {phi*(1), rho},
/// with phi given either by Lindblad operators or by a GKS matrix over the
/// traceless unitary basis.  L*(1) = 0 holds by construction.
class LindbladGenerator {
 public:
  /// Builds from a Hamiltonian and a dissipator; throws NotHermitian /
  /// NotPSD when the parts violate their contracts.
  static LindbladGenerator make(const CMat& hamiltonian, const GKSForm& gks,
                                Tolerances tol = {});
  static LindbladGenerator make(const CMat& hamiltonian, const LindbladOps& ops,
                                Tolerances tol = {});

  /// Builds from the matrix-units transfer matrix of an arbitrary map with
  /// L*(1)=0, extracting the unique (H, G) standard form.  No conditional
  /// complete positivity is enforced here; validate_generator reports it.
  static LindbladGenerator from_map_transfer(Index dim, const CMat& transfer,
                                             Tolerances tol = {});

  Index dim() const { return dim_; }
  const Tolerances& tol() const { return tol_; }
  /// Traceless Hamiltonian part of the unique standard form.
  const CMat& hamiltonian() const { return hamiltonian_; }
  bool has_gks() const { return std::holds_alternative<GKSForm>(dissipator_); }
  const GKSForm& gks() const { return std::get<GKSForm>(dissipator_); }
  const std::vector<CMat>& lindblad_ops() const {
    return std::get<LindbladOps>(dissipator_).ops;
  }
  const CMat& transfer() const { return transfer_; }
  CMat apply(const CMat& rho) const;

 private:
  LindbladGenerator() = default;

  Index dim_ = 0;
  Tolerances tol_;
  CMat hamiltonian_;
  std::variant<GKSForm, LindbladOps> dissipator_;
  CMat transfer_;
};

struct GeneratorReport {
  bool trace_annihilating = false;    // L*(1) = 0
  bool hermiticity_preserving = false;
  bool conditionally_cp = false;      // Choi projected off omega is PSD
  double worst_eigenvalue = 0.0;      // min eigenvalue of the projected Choi
  bool valid() const {
    return trace_annihilating && hermiticity_preserving && conditionally_cp;
  }
};

GeneratorReport validate_generator(const LindbladGenerator& gen);

/// Channel exp(t L) via scaling-and-squaring on the transfer matrix.
Channel exp_generator(const LindbladGenerator& gen, double t);

/// Unique decomposition into a traceless Hamiltonian and a GKS matrix over
/// the traceless unitary basis; rebuilding from the parts reproduces the
/// transfer matrix.  Throws InvalidGenerator when validation fails.
std::pair<CMat, GKSForm> gks_projection(const LindbladGenerator& gen);

/// det exp(t L) = exp(-d t tr G) for any Hamiltonian part.
double det_from_gks(const GKSForm& g, double t);

struct OptimalUnitaryResult {
  CMat u0;             // unitary matrix V of the conjugation channel
  double objective = 0.0;  // tr_H[T U0] at the fixed point
  int iterations = 0;
};

/// Alternating polar iteration maximizing tr_H[T U] over unitary
/// conjugations U; starts from the identity and stops once the objective
/// change falls below conv_tol and the unitary step below 1e-9.  Throws
/// NonConvergence at the iteration cap.
OptimalUnitaryResult optimal_unitary(const Channel& ch);

struct MarkovApproxResult {
  CMat u0;
  LindbladGenerator semigroup_generator;    // T - id
  LindbladGenerator dissipative_generator;  // T U0 - id, purely dissipative
  int iterations;
  double objective;
};

/// Markovian approximation: T - id generates a completely positive
/// semigroup, and composing with the optimal unitary removes the
/// Hamiltonian part.
MarkovApproxResult markov_approx(const Channel& ch);

/// Time-dependent generator over [0, duration], continuous in tau.
struct GeneratorSchedule {
  double duration = 0.0;
  std::function<LindbladGenerator(double)> sample;
};

/// Ordered product of semigroup factors,
/// exp(L(tau_steps) dt) ... exp(L(tau_1) dt) with tau_k = (k - 1) dt;
/// first-order accurate in 1/steps.
Channel time_ordered_exp(const GeneratorSchedule& schedule, int steps);

/// Reconstructs an infinitesimal-divisible qubit channel as a product of
/// unitary conjugations and n Markovian pieces; returns the reconstruction
/// and its distance to the input.  Throws NotInfinitesimalDivisible when the
/// classifier rejects the channel.
std::pair<Channel, double> markov_product_approx(const Channel& ch, int n);

}  // namespace chandiv

#endif  // CHANDIV_LINDBLAD_HPP_
