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

#include "chandiv/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "chandiv/json_io.hpp"

namespace chandiv::cli {

namespace {

struct InputOptions {
  std::string path;
  std::string inline_json;
};

void add_input_options(CLI::App* cmd, InputOptions& input) {
  cmd->add_option("input", input.path, "channel JSON file, or '-' for stdin");
  cmd->add_option("--json", input.inline_json, "inline channel JSON");
}

std::string read_input_text(const InputOptions& input, std::istream& in) {
  if (!input.inline_json.empty()) return input.inline_json;
  if (input.path.empty() || input.path == "-") {
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }
  std::ifstream file(input.path);
  if (!file)
    throw Error(ErrorKind::ParseError, "cannot open input file: " + input.path);
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

/// A channel document, or an array of them (as emitted by `sample`): every
/// consuming verb maps over arrays and emits an array of results.
std::vector<Channel> load_channels(const InputOptions& input, std::istream& in,
                                   bool& was_array) {
  const io::json j = io::parse_text(read_input_text(input, in));
  was_array = j.is_array();
  std::vector<Channel> channels;
  if (was_array) {
    for (const io::json& item : j) channels.push_back(io::channel_from_json(item));
    if (channels.empty())
      throw Error(ErrorKind::SchemaError, "empty channel array");
  } else {
    channels.push_back(io::channel_from_json(j));
  }
  return channels;
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::NumericalFailure:
    case ErrorKind::NonConvergence:
    case ErrorKind::SingularNormalization:
      return 2;
    default:
      return 1;
  }
}

void emit(std::ostream& out, const io::json& j) { out << j.dump(2) << "\n"; }

io::json schedule_metadata(const RankTwoClass& cls) {
  io::json j;
  j["class"] = rank_two_kind_name(cls.kind);
  switch (cls.kind) {
    case RankTwoClass::Kind::Class1:
      j["parameters"] = io::json{{"x", cls.x}};
      break;
    case RankTwoClass::Kind::Class2:
      j["parameters"] = io::json{{"y", cls.y}};
      break;
    case RankTwoClass::Kind::Class3:
      j["parameters"] = io::json{{"c1", cls.c1}, {"x", cls.x}, {"phi", cls.phi}};
      break;
  }
  j["u1"] = io::matrix_to_json(cls.u1);
  j["u2"] = io::matrix_to_json(cls.u2);
  const GeneratorSchedule schedule = rank_two_generator_schedule(cls);
  j["schedule"] = io::json{
      {"duration", schedule.duration},
      {"time_dependent", cls.kind == RankTwoClass::Kind::Class3},
      {"initial_generator", io::generator_to_json(schedule.sample(0.0))}};
  return j;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::istream& in) {
  CLI::App app{"quantum channel divisibility toolkit"};
  app.require_subcommand(1);

  InputOptions input;

  auto* analyze = app.add_subcommand("analyze", "structural report of a channel");
  add_input_options(analyze, input);

  auto* classify_cmd =
      app.add_subcommand("classify", "divisibility classification (qubit only)");
  add_input_options(classify_cmd, input);

  auto* normal_form_cmd =
      app.add_subcommand("normal-form", "Lorentz normal form (qubit only)");
  add_input_options(normal_form_cmd, input);

  double markov_time = 1.0;
  auto* markov_cmd = app.add_subcommand(
      "markov-approx", "Markovian approximation and optimal unitary");
  add_input_options(markov_cmd, input);
  markov_cmd->add_option("--time", markov_time, "exponential time parameter");

  auto* decompose_cmd = app.add_subcommand(
      "decompose", "rank-two class with schedule, or non-diagonal factors");
  add_input_options(decompose_cmd, input);

  Index sample_dim = 2;
  int sample_rank = -1;
  uint64_t sample_seed = 0;
  int sample_count = 1;
  auto* sample_cmd = app.add_subcommand("sample", "seeded random channels");
  sample_cmd->add_option("--dim", sample_dim, "Hilbert space dimension (2..5)")
      ->required();
  sample_cmd->add_option("--rank", sample_rank, "Kraus rank (default cycles)");
  sample_cmd->add_option("--seed", sample_seed, "base seed")->required();
  sample_cmd->add_option("--count", sample_count, "number of samples");

  std::string verify_suite;
  int verify_samples = 100;
  uint64_t verify_seed = 0;
  Index verify_dim = 2;
  int verify_rank = -1;
  auto* verify_cmd = app.add_subcommand("verify", "run a property suite");
  verify_cmd->add_option("--suite", verify_suite, "suite name")->required();
  verify_cmd->add_option("--samples", verify_samples, "sample count");
  verify_cmd->add_option("--seed", verify_seed, "base seed")->required();
  verify_cmd->add_option("--dim", verify_dim, "dimension for sampled channels");
  verify_cmd->add_option("--rank", verify_rank, "fixed Kraus rank");

  std::string convert_to = "choi";
  std::string convert_basis = "matrix_units";
  auto* convert_cmd = app.add_subcommand("convert", "re-serialize a channel");
  add_input_options(convert_cmd, input);
  convert_cmd->add_option("--to", convert_to, "kraus | choi | transfer")->required();
  convert_cmd->add_option("--basis", convert_basis,
                          "matrix_units | gellmann (for transfer)");

  std::vector<const char*> argv;
  argv.push_back("chandiv");
  for (const std::string& arg : args) argv.push_back(arg.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 1;
  }

  // Maps a per-channel verb over the input, emitting one JSON document for
  // a single channel and an array for array input.
  auto for_each_channel = [&](const std::function<io::json(const Channel&)>& verb) {
    bool was_array = false;
    const std::vector<Channel> channels = load_channels(input, in, was_array);
    if (!was_array) {
      emit(out, verb(channels.front()));
      return;
    }
    io::json results = io::json::array();
    for (const Channel& ch : channels) results.push_back(verb(ch));
    emit(out, results);
  };

  try {
    if (*analyze) {
      for_each_channel(
          [](const Channel& ch) { return io::structure_report_to_json(validate(ch)); });
    } else if (*classify_cmd) {
      for_each_channel(
          [](const Channel& ch) { return io::classification_to_json(classify(ch)); });
    } else if (*normal_form_cmd) {
      for_each_channel([](const Channel& ch) {
        io::json j = io::normal_form_to_json(lorentz_normal_form(ch));
        j["format"] = "chandiv-nf/1";
        return j;
      });
    } else if (*markov_cmd) {
      for_each_channel([markov_time](const Channel& ch) {
        const MarkovApproxResult result = markov_approx(ch);
        const Channel exponential =
            exp_generator(result.semigroup_generator, markov_time);
        return io::markov_result_to_json(result, exponential);
      });
    } else if (*decompose_cmd) {
      for_each_channel([](const Channel& ch) {
        const StructureReport report = validate(ch);
        io::json j;
        if (report.kraus_rank <= 2) {
          const auto [cls, canonical] = rank_two_normal_form(ch);
          j["kind"] = "rank_two";
          j["decomposition"] = schedule_metadata(cls);
          j["canonical_channel"] = io::channel_to_json(canonical, "kraus");
          return j;
        }
        const LorentzNormalForm form = lorentz_normal_form(ch);
        if (form.tag != NormalFormTag::NonDiagonal)
          throw Error(ErrorKind::WrongRank,
                      std::string("channel has a ") + normal_form_tag_name(form.tag) +
                          " normal form at Kraus rank " +
                          std::to_string(report.kraus_rank) +
                          "; no rank-two decomposition applies");
        const auto [first, second] = nondiagonal_decompose(form.x);
        j["kind"] = "nondiagonal_factors";
        j["x"] = form.x;
        j["normal_form"] = io::normal_form_to_json(form);
        j["factors"] = io::json::array({io::channel_to_json(first, "kraus"),
                                        io::channel_to_json(second, "kraus")});
        return j;
      });
    } else if (*sample_cmd) {
      SampleSpec spec;
      spec.dim = sample_dim;
      if (sample_rank >= 0) spec.kraus_rank = sample_rank;
      spec.seed = sample_seed;
      spec.count = sample_count;
      io::json channels = io::json::array();
      for (int i = 0; i < spec.count; ++i)
        channels.push_back(io::channel_to_json(random_channel(spec, uint64_t(i)),
                                               "kraus"));
      emit(out, channels);
    } else if (*verify_cmd) {
      SampleSpec spec;
      spec.dim = verify_dim;
      if (verify_rank >= 0) spec.kraus_rank = verify_rank;
      spec.seed = verify_seed;
      spec.count = verify_samples;
      const PropertyReport report = run_property_suite(verify_suite, spec);
      emit(out, io::property_report_to_json(report));
      if (!report.violations.empty()) return 3;
    } else if (*convert_cmd) {
      Basis basis = Basis::MatrixUnits;
      if (convert_basis == "gellmann") basis = Basis::GellMann;
      else if (convert_basis != "matrix_units")
        throw Error(ErrorKind::SchemaError, "unknown basis: " + convert_basis);
      for_each_channel([&convert_to, basis](const Channel& ch) {
        return io::channel_to_json(ch, convert_to, basis);
      });
    }
    return 0;
  } catch (const Error& e) {
    err << error_kind_name(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace chandiv::cli
