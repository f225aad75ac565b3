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

#ifndef CHANDIV_SAMPLING_HPP_
#define CHANDIV_SAMPLING_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chandiv/channel.hpp"
#include "chandiv/lindblad.hpp"

namespace chandiv {

/// Deterministic 64-bit generator (splitmix64 core) with a Box-Muller
/// Gaussian; identical output on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}
  uint64_t next_u64();
  double uniform();   // [0, 1)
  double gaussian();  // standard normal

 private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Per-sample seed derivation; keeps parallel sweeps deterministic.
uint64_t mix_seed(uint64_t base, uint64_t index);

struct SampleSpec {
  Index dim = 2;                       // in [2, 5]
  std::optional<int> kraus_rank;       // in [1, d^2]; absent cycles ranks
  uint64_t seed = 0;
  int count = 1;
};

struct Violation {
  uint64_t seed = 0;
  std::string description;
  double magnitude = 0.0;
};

struct PropertyReport {
  std::string suite;
  int samples = 0;
  std::vector<Violation> violations;
  double worst_margin = 0.0;
};

/// Haar-distributed unitary via QR of a complex Gaussian matrix with the
/// triangular factor's diagonal made real positive.
CMat random_unitary(Index d, uint64_t seed);

/// CP TP channel of the prescribed Kraus rank from a Haar isometry sliced
/// into Kraus operators.
Channel random_channel(Index d, int kraus_rank, uint64_t seed, Tolerances tol = {});
Channel random_channel(const SampleSpec& spec, uint64_t sample_index = 0);

/// Generator with a traceless Gaussian Hamiltonian and G = W^dagger W.
LindbladGenerator random_generator(Index d, uint64_t seed, Tolerances tol = {});

const std::vector<std::string>& property_suite_names();

/// Runs a named invariant suite over seeded samples; every violation is
/// recorded with the seed that regenerates it.
PropertyReport run_property_suite(const std::string& name, const SampleSpec& spec);

}  // namespace chandiv

#endif  // CHANDIV_SAMPLING_HPP_
