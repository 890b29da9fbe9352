// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The PulseForge Authors
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
// ------------------------------------------------------------------------

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "json.hpp"
#include "pulseforge/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pulseforge;
using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pulseforge_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

std::string read(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("presets round-trip through JSON unchanged") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const Preset p = preset(name);
    const std::string a = preset_to_json(p);
    const Preset q = preset_from_json(a);
    CHECK(preset_to_json(q) == a);
    if (p.link) {
      CHECK(q.link->pulse_half_length == p.link->pulse_half_length);
      CHECK(q.link->shaping.cutoff == p.link->shaping.cutoff);
      CHECK(q.link->subcarrier_spacing == p.link->subcarrier_spacing);
      CHECK(link_spec_to_json(link_spec_from_json(link_spec_to_json(*p.link))) == link_spec_to_json(*p.link));
    }
  }
}

TEST_CASE("shipped preset files match the built-in presets") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const std::string text = read(fs::path(PULSEFORGE_SOURCE_DIR) / "presets" / (name + ".json"));
    CHECK(text == preset_to_json(preset(name)) + "\n");
  }
}

TEST_CASE("expected blocks carry only published numbers") {
  const Preset p = preset("example3");
  REQUIRE(p.expected.size() == 3);
  CHECK(p.expected[0].key == "delta_sharp");
  CHECK(*p.expected[0].value == doctest::Approx(4.2720));
  CHECK(*p.expected[0].tolerance == doctest::Approx(1e-2));
}

TEST_CASE("unknown preset and unknown config keys are usage errors") {
  CHECK_THROWS_AS(preset("example9"), Error);
  CHECK_THROWS_AS(link_spec_from_json(R"({"pulse_half_lenght": 12})"), Error);
  CHECK_THROWS_AS(link_spec_from_json("{not json"), Error);
  const Run r = run({"verify", "--preset", "example9"});
  CHECK(r.code == 2);
  const Json e = Json::parse(r.err);
  CHECK(e["error"]["code"] == "InvalidArgument");
}

TEST_CASE("design-fir WISE reproduces the published values") {
  const Run r16 = run({"design-fir", "--method", "wise", "--m", "33", "--fc", "0.3", "--flo", "0.15", "--fhi", "0.3",
                       "--wpass", "1", "--wstop", "1000", "--q", "16"});
  REQUIRE(r16.code == 0);
  const Json j16 = Json::parse(r16.out);
  CHECK(j16["metrics"]["wise"].get<double>() == doctest::Approx(9.6194e-8).epsilon(5e-3));
  CHECK(j16["taps"]["length"] == 33);

  const Run r8 = run({"design-fir", "--method", "wise", "--m", "33", "--flo", "0.15", "--fhi", "0.3", "--q", "8"});
  REQUIRE(r8.code == 0);
  CHECK(Json::parse(r8.out)["metrics"]["wise"].get<double>() == doctest::Approx(1.9193e-6).epsilon(5e-3));
}

TEST_CASE("design-fir Slepian and CSV output") {
  const Run r = run({"design-fir", "--method", "slepian", "--m", "33", "--fc", "0.1"});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["metrics"]["stopband_power"].get<double>() == doctest::Approx(1.5820e-8).epsilon(0.05));

  const Run c = run({"design-fir", "--method", "sinc", "--k", "8", "--fsnc", "0.1", "--feig", "0.1", "--format", "csv"});
  REQUIRE(c.code == 0);
  std::istringstream lines(c.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "m,value");
  std::getline(lines, line);
  CHECK(line.rfind("-8,", 0) == 0);

  CHECK(run({"design-fir", "--method", "slepian", "--m", "33", "--k", "10"}).code == 2);
  CHECK(run({"design-fir", "--method", "remez"}).code == 2);
}

TEST_CASE("design-iir reports the causal factor's dc group delay") {
  const Run r = run({"design-iir", "--half-order", "4", "--fc", "0.3", "--split", "causal"});
  REQUIRE(r.code == 0);
  const Json j = Json::parse(r.out);
  CHECK(j["group_delay_dc"].get<double>() == doctest::Approx(1.3863).epsilon(1e-3 / 1.3863));
  CHECK(j["poles"].size() == 4);
  CHECK(j["sections"]["backward"].empty());

  const Run sos = run({"design-iir", "--half-order", "4", "--fc", "0.3", "--format", "sos"});
  REQUIRE(sos.code == 0);
  CHECK(sos.out.rfind("pass,section,b0,b1,b2,a1,a2\n", 0) == 0);

  CHECK(run({"design-iir", "--half-order", "20"}).code == 2);
}

TEST_CASE("analyze emits the response columns") {
  const Run r = run({"analyze", "--half-order", "4", "--fc", "0.3", "--points", "16"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("omega,f,re,im,mag,phase\n", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 17);

  const Run j = run({"analyze", "--half-order", "4", "--fc", "0.3", "--points", "4096", "--format", "json"});
  REQUIRE(j.code == 0);
  const Json parsed = Json::parse(j.out);
  CHECK(parsed["curve"]["mag"].size() == 4096);

  CHECK(run({"analyze", "--points", "16"}).code == 2);
}

TEST_CASE("fastconv splices, verifies, and rejects ragged CSV") {
  const fs::path k = scratch("kernel.csv"), x = scratch("input.csv"), bad = scratch("bad.csv");
  write(k, "m,value\n-1,0.25\n0,0.5\n1,0.25\n");
  std::string in = "n,re,im\n";
  for (int n = 0; n < 50; ++n) in += std::to_string(n) + "," + std::to_string(n % 7) + ",0\n";
  write(x, in);
  const Run r = run({"fastconv", "--kernel", k.string(), "--input", x.string(), "--block", "5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# verified=true", 0) == 0);
  // 50 + 3 - 1 samples, one header and one comment line.
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 54);
  CHECK(r.out.find("\nn,re,im\n-1,") != std::string::npos);

  write(bad, "n,re,im\n0,1,0\n1,2\n");
  const Run b = run({"fastconv", "--kernel", k.string(), "--input", bad.string(), "--block", "5"});
  CHECK(b.code == 2);
  CHECK(Json::parse(b.err)["error"]["code"] == "UsageError");

  CHECK(run({"fastconv", "--kernel", k.string(), "--block", "5"}).code == 2);
}

TEST_CASE("verify passes a preset and fails a mismatched one") {
  const Run ok = run({"verify", "--preset", "example3"});
  CHECK(ok.code == 0);
  CHECK(Json::parse(ok.out)["pass"] == true);

  Preset p = preset("example3");
  p.expected[0].value = 5.0;
  const fs::path f = scratch("mismatch.json");
  write(f, preset_to_json(p));
  const Run bad = run({"verify", "--file", f.string()});
  CHECK(bad.code == 1);
  CHECK(Json::parse(bad.out)["checks"][0]["pass"] == false);
}

TEST_CASE("simulate-link reports are byte-identical for a fixed seed and any thread count") {
  LinkSpec s = *preset("example2").link;
  s.pulses = 2000;
  const fs::path cfg = scratch("link.json");
  write(cfg, link_spec_to_json(s));
  const Run a = run({"simulate-link", "--config", cfg.string()});
  const Run b = run({"simulate-link", "--config", cfg.string(), "--threads", "3"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const Run c = run({"simulate-link", "--config", cfg.string(), "--seed", "2"});
  CHECK(c.out != a.out);
  CHECK(Json::parse(c.out)["config"]["seed"] == 2);
}

TEST_CASE("PULSEFORGE_SEED overrides the config seed") {
  ::setenv("PULSEFORGE_SEED", "5", 1);
  const Run r = run({"simulate-link", "--preset", "example1", "--emit-config"});
  ::unsetenv("PULSEFORGE_SEED");
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["seed"] == 5);

  ::setenv("PULSEFORGE_SEED", "five", 1);
  const Run bad = run({"simulate-link", "--preset", "example1", "--emit-config"});
  ::unsetenv("PULSEFORGE_SEED");
  CHECK(bad.code == 2);
}

TEST_CASE("simulate-link dumps constellation points") {
  const fs::path pts = scratch("points.csv");
  const Run r = run({"simulate-link", "--preset", "example1", "--dump-points", pts.string()});
  REQUIRE(r.code == 0);
  const std::string text = read(pts);
  CHECK(text.rfind("n,subchannel,re,im,tx_symbol,rx_symbol\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 11);
  CHECK(Json::parse(r.out)["measured"]["errors"] == 0);
}
