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

#include "chandiv/json_io.hpp"

namespace chandiv::io {

namespace {

const json& require_field(const json& j, const char* key) {
  if (!j.contains(key))
    throw Error(ErrorKind::SchemaError, std::string("missing field: ") + key);
  return j.at(key);
}

Basis basis_from_string(const std::string& name) {
  if (name == "matrix_units") return Basis::MatrixUnits;
  if (name == "gellmann") return Basis::GellMann;
  throw Error(ErrorKind::SchemaError, "unknown basis: " + name);
}

}  // namespace

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

json matrix_to_json(const CMat& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw Error(ErrorKind::SchemaError, "matrix must be a nonempty array of rows");
  const Index rows = Index(j.size());
  const Index cols = Index(j.at(0).size());
  CMat m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const json& row = j.at(size_t(r));
    if (!row.is_array() || Index(row.size()) != cols)
      throw Error(ErrorKind::SchemaError, "ragged matrix rows");
    for (Index c = 0; c < cols; ++c) {
      const json& entry = row.at(size_t(c));
      if (!entry.is_array() || entry.size() != 2)
        throw Error(ErrorKind::SchemaError, "matrix entry must be [re, im]");
      m(r, c) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

json channel_to_json(const Channel& ch, const std::string& representation,
                     Basis basis) {
  json j;
  j["format"] = "chandiv/1";
  j["dimension"] = ch.dim();
  j["representation"] = representation;
  if (representation == "kraus") {
    json ops = json::array();
    for (const CMat& k : ch.kraus()) ops.push_back(matrix_to_json(k));
    j["data"] = std::move(ops);
  } else if (representation == "choi") {
    j["data"] = matrix_to_json(ch.choi());
  } else if (representation == "transfer") {
    if (basis == Basis::Unitary)
      throw Error(ErrorKind::SchemaError,
                  "transfer serialization supports matrix_units and gellmann");
    j["basis"] = basis_name(basis);
    j["data"] = matrix_to_json(ch.transfer_in(basis));
  } else {
    throw Error(ErrorKind::SchemaError, "unknown representation: " + representation);
  }
  return j;
}

Channel channel_from_json(const json& j, Tolerances tol) {
  const std::string format = require_field(j, "format").get<std::string>();
  if (format != "chandiv/1")
    throw Error(ErrorKind::SchemaError, "unknown format: " + format);
  const Index dim = require_field(j, "dimension").get<Index>();
  const std::string representation =
      require_field(j, "representation").get<std::string>();
  const json& data = require_field(j, "data");
  if (representation == "kraus") {
    KrausRep rep;
    rep.dim = dim;
    for (const json& op : data) rep.ops.push_back(matrix_from_json(op));
    return Channel::from_kraus(rep, tol, true);
  }
  if (representation == "choi")
    return Channel::from_choi({dim, matrix_from_json(data)}, tol, true);
  if (representation == "transfer") {
    const Basis basis =
        basis_from_string(require_field(j, "basis").get<std::string>());
    return Channel::from_transfer({dim, basis, matrix_from_json(data)}, tol, true);
  }
  throw Error(ErrorKind::SchemaError, "unknown representation: " + representation);
}

Channel read_channel_json(const std::string& text, Tolerances tol) {
  return channel_from_json(parse_text(text), tol);
}

json generator_to_json(const LindbladGenerator& gen) {
  json j;
  j["format"] = "chandiv-gen/1";
  j["dimension"] = gen.dim();
  j["hamiltonian"] = matrix_to_json(gen.hamiltonian());
  json dissipator;
  if (gen.has_gks()) {
    dissipator["kind"] = "gks";
    dissipator["basis"] = "unitary";
    dissipator["g"] = matrix_to_json(gen.gks().g);
  } else {
    dissipator["kind"] = "lindblad_ops";
    json ops = json::array();
    for (const CMat& op : gen.lindblad_ops()) ops.push_back(matrix_to_json(op));
    dissipator["ops"] = std::move(ops);
  }
  j["dissipator"] = std::move(dissipator);
  return j;
}

LindbladGenerator generator_from_json(const json& j, Tolerances tol) {
  const std::string format = require_field(j, "format").get<std::string>();
  if (format != "chandiv-gen/1")
    throw Error(ErrorKind::SchemaError, "unknown format: " + format);
  require_field(j, "dimension");
  const CMat h = matrix_from_json(require_field(j, "hamiltonian"));
  const json& dissipator = require_field(j, "dissipator");
  const std::string kind = require_field(dissipator, "kind").get<std::string>();
  if (kind == "gks") {
    const std::string basis = require_field(dissipator, "basis").get<std::string>();
    if (basis != "unitary")
      throw Error(ErrorKind::SchemaError, "unknown GKS basis: " + basis);
    return LindbladGenerator::make(h, GKSForm{matrix_from_json(dissipator.at("g"))},
                                   tol);
  }
  if (kind == "lindblad_ops") {
    LindbladOps ops;
    for (const json& op : require_field(dissipator, "ops"))
      ops.ops.push_back(matrix_from_json(op));
    return LindbladGenerator::make(h, ops, tol);
  }
  throw Error(ErrorKind::SchemaError, "unknown dissipator kind: " + kind);
}

json structure_report_to_json(const StructureReport& report) {
  json j;
  j["is_hermiticity_preserving"] = report.is_hermiticity_preserving;
  j["is_trace_preserving"] = report.is_trace_preserving;
  j["is_unital"] = report.is_unital;
  j["is_completely_positive"] = report.is_completely_positive;
  j["kraus_rank"] = report.kraus_rank;
  j["choi_eigenvalues"] = report.choi_eigenvalues;
  j["det"] = report.det;
  j["purity"] = report.purity;
  return j;
}

json normal_form_to_json(const LorentzNormalForm& form) {
  json j;
  j["tag"] = normal_form_tag_name(form.tag);
  json parameters;
  if (form.tag == NormalFormTag::Diagonal) {
    parameters["lambda"] =
        json::array({form.lambda(0), form.lambda(1), form.lambda(2)});
  } else if (form.tag == NormalFormTag::NonDiagonal) {
    parameters["x"] = form.x;
  }
  j["parameters"] = std::move(parameters);
  j["filters"] = json{{"a", matrix_to_json(form.filter_a)},
                      {"b", matrix_to_json(form.filter_b)}};
  j["diagnostics"] = json{{"iterations", form.iterations},
                          {"residual", form.residual},
                          {"cond_a", form.cond_a},
                          {"cond_b", form.cond_b}};
  return j;
}

json classification_to_json(const ClassificationReport& report) {
  json j;
  j["format"] = "chandiv-report/1";
  j["divisibility"] = divisibility_name(report.divisibility);
  j["infinitesimal"] = infinitesimal_name(report.infinitesimal);
  j["positive_divisible"] = report.positive_divisible;
  j["normal_form"] = normal_form_to_json(report.normal_form);
  j["evidence"] = json{{"kraus_rank", report.evidence.kraus_rank},
                       {"det", report.evidence.det},
                       {"s_min_sq", report.evidence.s_min_sq},
                       {"det_delta", report.evidence.det_delta}};
  return j;
}

json property_report_to_json(const PropertyReport& report) {
  json j;
  j["format"] = "chandiv-suite/1";
  j["suite"] = report.suite;
  j["samples"] = report.samples;
  json violations = json::array();
  for (const Violation& v : report.violations)
    violations.push_back(json{{"seed", v.seed},
                              {"description", v.description},
                              {"magnitude", v.magnitude}});
  j["violations"] = std::move(violations);
  j["worst_margin"] = report.worst_margin;
  return j;
}

json markov_result_to_json(const MarkovApproxResult& result,
                           const Channel& exponential) {
  json j;
  j["format"] = "chandiv-markov/1";
  j["u0"] = matrix_to_json(result.u0);
  j["objective"] = result.objective;
  j["iterations"] = result.iterations;
  j["semigroup_generator"] = generator_to_json(result.semigroup_generator);
  j["dissipative_generator"] = generator_to_json(result.dissipative_generator);
  j["exponential_channel"] = channel_to_json(exponential, "choi");
  return j;
}

}  // namespace chandiv::io
