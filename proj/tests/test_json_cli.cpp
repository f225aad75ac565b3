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
#include <sstream>

#include "chandiv/cli.hpp"
#include "chandiv/json_io.hpp"

using namespace chandiv;

#ifndef CHANDIV_FIXTURE_DIR
#define CHANDIV_FIXTURE_DIR "fixtures"
#endif

namespace {

std::string fixture(const std::string& name) {
  return std::string(CHANDIV_FIXTURE_DIR) + "/" + name;
}

struct CliRun {
  int exit_code;
  std::string out;
  std::string err;
};

CliRun run_cli(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::ostringstream out, err;
  std::istringstream in(stdin_text);
  const int code = cli::run(args, out, err, in);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("matrix JSON round trip") {
  CMat m(2, 3);
  m << Complex(1.5, -0.25), Complex(0, 1), Complex(-2, 0.125),
       Complex(0.1, 0.2), Complex(3, -4), Complex(0, 0);
  const CMat back = io::matrix_from_json(io::matrix_to_json(m));
  CHECK((m - back).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("channel JSON round trips through every representation") {
  const Channel ch = random_channel(2, 3, 601);
  for (const std::string& rep : {"kraus", "choi", "transfer"}) {
    const io::json j = io::channel_to_json(ch, rep, Basis::GellMann);
    const Channel back = io::channel_from_json(j);
    CHECK((ch.choi() - back.choi()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("channel JSON schema is enforced") {
  SUBCASE("unknown format") {
    const io::json j = {{"format", "chandiv/2"},
                        {"dimension", 2},
                        {"representation", "choi"},
                        {"data", io::json::array()}};
    CHECK_THROWS_AS(io::channel_from_json(j), Error);
  }
  SUBCASE("missing fields") {
    CHECK_THROWS_AS(io::channel_from_json(io::json{{"format", "chandiv/1"}}), Error);
  }
  SUBCASE("truncated text is a parse error") {
    try {
      io::read_channel_json("{\"format\": \"chandiv/1\", \"dim");
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ParseError);
      CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
  }
  SUBCASE("ragged matrix") {
    const io::json bad = io::json::parse(R"([[ [1,0],[0,0] ],[ [0,0] ]])");
    CHECK_THROWS_AS(io::matrix_from_json(bad), Error);
  }
}

TEST_CASE("generator JSON round trips") {
  SUBCASE("GKS form") {
    const LindbladGenerator gen = random_generator(2, 603);
    const LindbladGenerator back = io::generator_from_json(io::generator_to_json(gen));
    CHECK(operator_norm(gen.transfer() - back.transfer()) < 1e-12);
  }
  SUBCASE("Lindblad operator form") {
    CMat op(2, 2);
    op << 0, std::sqrt(2.0), 0, 0;
    CMat h(2, 2);
    h << 0.5, Complex(0, -0.25), Complex(0, 0.25), -0.5;
    const LindbladGenerator gen = LindbladGenerator::make(h, LindbladOps{{op}});
    const LindbladGenerator back = io::generator_from_json(io::generator_to_json(gen));
    CHECK(operator_norm(gen.transfer() - back.transfer()) < 1e-12);
  }
  SUBCASE("unknown dissipator kind") {
    io::json j = io::generator_to_json(random_generator(2, 604));
    j["dissipator"]["kind"] = "other";
    CHECK_THROWS_AS(io::generator_from_json(j), Error);
  }
}

TEST_CASE("cli analyze") {
  const CliRun run = run_cli({"analyze", fixture("identity_qubit.json")});
  REQUIRE(run.exit_code == 0);
  const io::json j = io::json::parse(run.out);
  CHECK(j.at("det").get<double>() == doctest::Approx(1.0));
  CHECK(j.at("kraus_rank").get<int>() == 1);
  CHECK(j.at("is_completely_positive").get<bool>());
}

TEST_CASE("cli analyze on the shipped minimal-determinant fixture") {
  const CliRun run = run_cli({"analyze", fixture("min_det_qubit.json")});
  REQUIRE(run.exit_code == 0);
  const io::json j = io::json::parse(run.out);
  CHECK(j.at("det").get<double>() == doctest::Approx(-1.0 / 27.0).epsilon(1e-10));
}

TEST_CASE("cli classify") {
  const CliRun run = run_cli({"classify", fixture("min_det_qubit.json")});
  REQUIRE(run.exit_code == 0);
  const io::json j = io::json::parse(run.out);
  CHECK(j.at("format").get<std::string>() == "chandiv-report/1");
  CHECK(j.at("divisibility").get<std::string>() == "Indivisible");
  CHECK(j.at("infinitesimal").get<std::string>() == "NotInfinitesimalDivisible");
  CHECK(!j.at("positive_divisible").get<bool>());
}

TEST_CASE("cli sample piped into classify") {
  const CliRun sample = run_cli(
      {"sample", "--dim", "2", "--rank", "4", "--seed", "9", "--count", "3"});
  REQUIRE(sample.exit_code == 0);
  const io::json channels = io::json::parse(sample.out);
  REQUIRE(channels.size() == 3);
  for (const io::json& channel : channels) {
    const CliRun cls = run_cli({"classify", "--json", channel.dump()});
    REQUIRE(cls.exit_code == 0);
    CHECK(io::json::parse(cls.out).at("divisibility").get<std::string>() ==
          "Divisible");
  }
}

TEST_CASE("cli verbs map over sampled channel arrays") {
  const CliRun sample = run_cli(
      {"sample", "--dim", "2", "--rank", "4", "--seed", "9", "--count", "3"});
  REQUIRE(sample.exit_code == 0);
  const CliRun cls = run_cli({"classify", "-"}, sample.out);
  REQUIRE(cls.exit_code == 0);
  const io::json reports = io::json::parse(cls.out);
  REQUIRE(reports.is_array());
  REQUIRE(reports.size() == 3);
  for (const io::json& report : reports)
    CHECK(report.at("divisibility").get<std::string>() == "Divisible");
  const CliRun conv = run_cli({"convert", "-", "--to", "choi"}, sample.out);
  REQUIRE(conv.exit_code == 0);
  CHECK(io::json::parse(conv.out).size() == 3);
}

TEST_CASE("cli sample output is byte stable") {
  const std::vector<std::string> args = {"sample", "--dim", "3", "--rank",
                                         "2",      "--seed", "42"};
  CHECK(run_cli(args).out == run_cli(args).out);
}

TEST_CASE("cli verify") {
  SUBCASE("clean suite exits zero") {
    const CliRun run = run_cli({"verify", "--suite", "det_monotone", "--samples",
                                "50", "--seed", "1"});
    CHECK(run.exit_code == 0);
    const io::json j = io::json::parse(run.out);
    CHECK(j.at("format").get<std::string>() == "chandiv-suite/1");
    CHECK(j.at("violations").empty());
  }
  SUBCASE("unknown suite exits one") {
    const CliRun run = run_cli({"verify", "--suite", "bogus", "--seed", "1"});
    CHECK(run.exit_code == 1);
    CHECK(run.err.find("UnknownSuite") != std::string::npos);
  }
  SUBCASE("seed is required") {
    const CliRun run = run_cli({"verify", "--suite", "det_range"});
    CHECK(run.exit_code == 1);
  }
}

TEST_CASE("cli convert round trips and feeds every verb") {
  const CliRun to_transfer =
      run_cli({"convert", fixture("amplitude_damping_half.json"), "--to",
               "transfer", "--basis", "gellmann"});
  REQUIRE(to_transfer.exit_code == 0);
  const CliRun back =
      run_cli({"convert", "--json", to_transfer.out, "--to", "choi"});
  REQUIRE(back.exit_code == 0);
  const Channel a = io::read_channel_json(to_transfer.out);
  const Channel b = io::read_channel_json(back.out);
  CHECK(distance(a, b) < 1e-12);

  const CliRun analyzed = run_cli({"analyze", "--json", back.out});
  CHECK(analyzed.exit_code == 0);
  const CliRun classified = run_cli({"classify", "--json", back.out});
  CHECK(classified.exit_code == 0);
}

TEST_CASE("cli normal-form") {
  const CliRun run = run_cli({"normal-form", fixture("amplitude_damping_half.json")});
  REQUIRE(run.exit_code == 0);
  const io::json j = io::json::parse(run.out);
  CHECK(j.at("tag").get<std::string>() == "non_diagonal");
  CHECK(j.at("parameters").at("x").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("cli markov-approx") {
  const CliRun run =
      run_cli({"markov-approx", fixture("identity_qubit.json"), "--time", "1.0"});
  REQUIRE(run.exit_code == 0);
  const io::json j = io::json::parse(run.out);
  CHECK(j.at("objective").get<double>() == doctest::Approx(4.0));
  const Channel exp_channel = io::channel_from_json(j.at("exponential_channel"));
  CHECK(distance(exp_channel, identity_channel(2)) < 1e-10);
  const LindbladGenerator gen =
      io::generator_from_json(j.at("dissipative_generator"));
  CHECK(operator_norm(gen.hamiltonian()) < 1e-7);
}

TEST_CASE("cli decompose") {
  SUBCASE("rank-two channel reports its class and schedule") {
    const CliRun run = run_cli({"decompose", fixture("amplitude_damping_half.json")});
    REQUIRE(run.exit_code == 0);
    const io::json j = io::json::parse(run.out);
    CHECK(j.at("kind").get<std::string>() == "rank_two");
    CHECK(j.at("decomposition").at("class").get<std::string>() == "class1");
    CHECK(j.at("decomposition").at("schedule").at("duration").get<double>() ==
          doctest::Approx(-std::log(std::sqrt(0.5))));
  }
  SUBCASE("diagonal rank-three channel is refused") {
    const CliRun run = run_cli({"decompose", fixture("min_det_qubit.json")});
    CHECK(run.exit_code == 1);
    CHECK(run.err.find("diagonal") != std::string::npos);
  }
}

TEST_CASE("cli input errors") {
  SUBCASE("missing file") {
    const CliRun run = run_cli({"analyze", "/nonexistent/channel.json"});
    CHECK(run.exit_code == 1);
  }
  SUBCASE("stdin is read when no path is given") {
    std::ostringstream text;
    std::ifstream file(fixture("identity_qubit.json"));
    text << file.rdbuf();
    const CliRun run = run_cli({"analyze"}, text.str());
    CHECK(run.exit_code == 0);
  }
  SUBCASE("non trace preserving input") {
    io::json j = io::json::parse(R"({"format":"chandiv/1","dimension":2,
      "representation":"kraus","data":[[[[0.5,0],[0,0]],[[0,0],[0.5,0]]]]})");
    const CliRun run = run_cli({"analyze", "--json", j.dump()});
    CHECK(run.exit_code == 1);
    CHECK(run.err.find("NotTracePreserving") != std::string::npos);
  }
}
