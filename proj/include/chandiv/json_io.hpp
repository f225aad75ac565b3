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

#ifndef CHANDIV_JSON_IO_HPP_
#define CHANDIV_JSON_IO_HPP_

#include <string>

#include <json.hpp>

#include "chandiv/channel.hpp"
#include "chandiv/lindblad.hpp"
#include "chandiv/qubit.hpp"
#include "chandiv/sampling.hpp"

namespace chandiv::io {

using json = nlohmann::ordered_json;

json matrix_to_json(const CMat& m);
CMat matrix_from_json(const json& j);

/// chandiv/1 channel documents.
json channel_to_json(const Channel& ch, const std::string& representation,
                     Basis basis = Basis::MatrixUnits);
Channel channel_from_json(const json& j, Tolerances tol = {});
Channel read_channel_json(const std::string& text, Tolerances tol = {});

/// chandiv-gen/1 generator documents.
json generator_to_json(const LindbladGenerator& gen);
LindbladGenerator generator_from_json(const json& j, Tolerances tol = {});

json structure_report_to_json(const StructureReport& report);
json normal_form_to_json(const LorentzNormalForm& form);
json classification_to_json(const ClassificationReport& report);
json property_report_to_json(const PropertyReport& report);
json markov_result_to_json(const MarkovApproxResult& result,
                           const Channel& exponential);

json parse_text(const std::string& text);

}  // namespace chandiv::io

#endif  // CHANDIV_JSON_IO_HPP_
