#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(RESONANCE_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) {
    if (!l.empty()) out.push_back(l);
  }
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  return {std::istreambuf_iterator<char>(f), {}};
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "resonance_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("s-of-t grid rows and determinism") {
  const auto a = run("s-of-t --from 10 --to 20 --step 1");
  CHECK(a.status == 0);
  const auto rows = lines(a.out);
  REQUIRE(rows.size() == 13);
  CHECK(rows[0].rfind("# {", 0) == 0);
  CHECK(rows[1] == "t,S,N_main,Z,status");
  CHECK(rows[2].rfind("10,", 0) == 0);
  CHECK(rows[12].rfind("20,", 0) == 0);
  const auto b = run("s-of-t --from 10 --to 20 --step 1");
  CHECK(a.out == b.out);
  // Before the first zero N = 0, so S = -N_main up to the O(1/t) remainder.
  std::istringstream row(rows[2]);
  double t, s, main;
  char comma;
  row >> t >> comma >> s >> comma >> main;
  CHECK(std::fabs(s + main) < 1 / t);
}

TEST_CASE("build-resonator at T = 1e12") {
  const auto path = scratch("w.csv");
  const auto r = run("build-resonator --T 1e12 --beta 0.5 --out " + path.string());
  CHECK(r.status == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["primes"] == nlohmann::json::array({37}));
  CHECK(j["m_prime_size"] == 2);
  CHECK(j["reload_R0"].get<double>() == j["reload_sum_r"].get<double>());
  CHECK(j["R0"].get<double>() == j["reload_R0"].get<double>());
  const auto printed = nlohmann::json::parse(run("build-resonator --T 1e12 --printed-endpoint").out);
  CHECK(printed["printed_endpoint"] == true);
  CHECK(printed["r"][0].get<double>() == 0.0);
  CHECK(j["r"][0].get<double>() > 0.0);
}

TEST_CASE("search reports both signs and the coarse-only case") {
  for (int sign : {1, -1}) {
    const auto r = run("search --T 1e4 --N 1000 --sign " + std::to_string(sign));
    REQUIRE(r.status == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["sign"] == sign);
    CHECK(j["found"] == true);
    CHECK(j["s_star"].get<double>() > 0);
    CHECK(j["t_lo"].get<double>() == doctest::Approx(100));
    CHECK(j["evaluations"].get<long>() <= 990000 / 10);
  }
  const auto c = nlohmann::json::parse(run("search --T 1e4 --N 1000 --budget 0").out);
  CHECK(c["coarse_only"] == true);
  CHECK(c["s_star"].is_null());
}

TEST_CASE("verify-convolution exit status") {
  const auto good = run("verify-convolution --log-T 10 --lambda 0.45 --H 0 --t 500");
  CHECK(good.status == 0);
  CHECK(lines(good.out).size() == 1);
  const auto bad = run("verify-convolution --log-T 10 --lambda 0.45 --H 0 --t 500 --corrupt-lambda");
  CHECK(bad.status == 1);
  CHECK(nlohmann::json::parse(bad.out)["pass"] == false);
  const auto empty = run("verify-convolution --t");
  CHECK(empty.status == 0);
  CHECK(empty.out.empty());
}

TEST_CASE("invalid configurations exit with 2") {
  CHECK(run("build-resonator --T 1e4").status == 2);                       // N below e^e
  CHECK(run("build-resonator --T 1e12 --override-window 36").status == 2);
  CHECK(run("search --sign 3").status == 2);
  CHECK(run("no-such-command").status == 2);
  CHECK(run("moments --log-T 1").status == 2);
}

TEST_CASE("config file with flag override") {
  const auto cfg = scratch("c.toml");
  std::ofstream(cfg) << "[search]\nT = 1000\nt-lo = 10\nN = 1000\nbudget = 500\n";
  const auto from_file = nlohmann::json::parse(run("--config " + cfg.string() + " search").out);
  CHECK(from_file["budget"] == 500);
  CHECK(from_file["t_lo"] == 10.0);
  const auto overridden = nlohmann::json::parse(run("--config " + cfg.string() + " search --budget 300").out);
  CHECK(overridden["budget"] == 300);
  CHECK(overridden["evaluations"] == 300);
}

TEST_CASE("ladder emits one keyed record per rung and sign") {
  const auto out = scratch("ladder.jsonl");
  std::filesystem::remove(out);
  const auto r = run("ladder --log-T 8 9 --N 1000 --budget 2000 --out " + out.string());
  CHECK(r.status == 0);
  const auto recs = lines(slurp(out));
  REQUIRE(recs.size() == 4);
  for (const auto& l : recs) {
    const auto j = nlohmann::json::parse(l);
    CHECK(j.contains("ratio"));
    CHECK(j["key"].contains("T"));
    CHECK(j["key"]["budget"] == 2000);
    CHECK(j["moments"]["ratio"].get<double>() > 0);
  }
}
