#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "fracfp/field_io.hpp"
#include "fracfp/mc_oracle.hpp"
#include "fracfp/ou_kernel.hpp"
#include "fracfp/solver.hpp"
#include "json.hpp"

using namespace fracfp;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "fracfp_cli_test";

int run(const std::string& args) {
  const std::string cmd = std::string(FRACFP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> rows(const fs::path& csv) {
  std::ifstream is(csv);
  std::string line;
  std::getline(is, line);
  std::vector<std::vector<double>> out;
  while (std::getline(is, line)) {
    std::vector<double> r;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) r.push_back(parse_double(cell));
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("kernel table") {
  fs::remove_all(kRoot);
  const fs::path out = kRoot / "kernel";
  REQUIRE(run("--out " + out.string() + " kernel --alpha 1 --dim 1 --t 1 --x-range -5:5:101 --profile both") == 0);
  const auto r = rows(out / "kernel.csv");
  CHECK(r.size() == 101u);
  CHECK(r[50][0] == 0.0);
  CHECK(r[50][1] == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-14));
  CHECK(r[50][2] == 1.0);
  CHECK(fs::exists(out / "kernel.json"));
  CHECK(fs::exists(out / "config.json"));
}

TEST_CASE("OU kernel slice against the direct contraction of a narrow box") {
  const fs::path out = kRoot / "ou";
  REQUIRE(run("--out " + out.string() + " kernel --ou --alpha 1.5 --t 0.5 --y 0.3 --x-range -2:2:9") == 0);
  // A box of width w around y, contracted directly, approaches p(t, x, y) as w -> 0.
  const StableLaw law(1.5, 1);
  const Grid g(1, 4.0, 4096);
  std::vector<double> v(g.size(), 0.0);
  const int j = g.n() / 2 + static_cast<int>(std::lround(0.3 / g.spacing()));
  v[j] = 1.0 / g.spacing();
  const Field delta(g, v);
  for (const auto& r : rows(out / "kernel.csv")) {
    const double direct = ou_solve_direct(law, delta, 0.5, {r[0] + (g.node(j) - 0.3) * std::exp(-0.5)}, 1e-12);
    CHECK(r[1] == doctest::Approx(direct).epsilon(1e-4));
  }
}

TEST_CASE("usage errors exit with 2 and write nothing") {
  const fs::path out = kRoot / "bad";
  CHECK(run("--out " + out.string() + " kernel --x-range -5:5") == 2);
  CHECK(run("--out " + out.string() + " kernel --x-range a:b:c") == 2);
  CHECK(run("--out " + out.string() + " kernel --alpha 3") == 2);
  CHECK(run("--out " + out.string() + " solve --alpha 1") == 2);
  CHECK(run("--out " + out.string() + " solve --alpha 1 --half-width 2 --n 64 --times 1") == 2);
  CHECK(run("--out " + out.string() + " solve --alpha 1 --half-width 16 --input-half-width 20 --times 1") == 2);
  CHECK(run("--out " + out.string() + " simulate --samples 0") == 2);
  CHECK(run("--out " + out.string() + " frobnicate") == 2);
  CHECK(run("--out " + out.string() + " --config /nonexistent.json kernel") == 2);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("solve snapshots, stationary preset and config replay") {
  const fs::path out = kRoot / "solve";
  REQUIRE(run("--out " + out.string() + " solve --alpha 1 --times 0.1 0.5 1") == 0);
  for (int i = 0; i < 3; ++i) {
    const Field u = read_field(out / ("u_" + std::to_string(i) + ".csv"), out / ("u_" + std::to_string(i) + ".json"));
    CHECK(std::abs(u.mass() - 1.0) < 1e-4);
  }
  const fs::path replay = kRoot / "replay";
  REQUIRE(run("--out " + replay.string() + " --config " + (out / "config.json").string() + " solve") == 0);
  CHECK(slurp(replay / "u_2.csv") == slurp(out / "u_2.csv"));
  CHECK(slurp(replay / "config.json") == slurp(out / "config.json"));

  // Flags beat the config file.
  const fs::path over = kRoot / "override";
  REQUIRE(run("--out " + over.string() + " --config " + (out / "config.json").string() + " solve --alpha 1.5") == 0);
  const auto cfg = nlohmann::json::parse(slurp(over / "config.json"));
  CHECK(cfg["alpha"].get<double>() == 1.5);
  CHECK(cfg["times"].size() == 3u);

  const fs::path st = kRoot / "stationary";
  REQUIRE(run("--out " + st.string() + " solve --alpha 1.5 --data stationary --half-width 64 --n 4096 --times 2") == 0);
  const Field u = read_field(st / "u_0.csv", st / "u_0.json");
  const Field ref = InitialData::stationary(StableLaw(1.5, 1)).discretize(u.grid());
  for (std::size_t i = 0; i < u.grid().size(); ++i) CHECK(std::abs(u[i] - ref[i]) < 1e-10);
}

TEST_CASE("simulate is deterministic and t = 0 gives the initial density") {
  const fs::path a = kRoot / "sim_a", b = kRoot / "sim_b";
  REQUIRE(run("--out " + a.string() + " simulate --alpha 1 --samples 20000 --seed 5 --workers 1 --particles") == 0);
  REQUIRE(run("--out " + b.string() + " simulate --alpha 1 --samples 20000 --seed 5 --workers 3 --particles") == 0);
  for (const char* f : {"histogram.csv", "histogram.json", "particles.csv"}) CHECK(slurp(a / f) == slurp(b / f));

  const fs::path z = kRoot / "sim_zero";
  REQUIRE(run("--out " + z.string() + " simulate --t 0 --samples 100000 --half-width 4 --n 64") == 0);
  const Field h = read_field(z / "histogram.csv", z / "histogram.json");
  CHECK(h.mass() == doctest::Approx(1.0));
  CHECK(interpolate(h, {0.0}) == doctest::Approx(0.5).epsilon(0.05));
  CHECK(interpolate(h, {2.0}) == 0.0);
}

TEST_CASE("verify exit codes") {
  CHECK(run("--out " + (kRoot / "verify").string() + " verify --suite quick") == 0);
  CHECK(fs::exists(kRoot / "verify" / "report.json"));
  CHECK(fs::exists(kRoot / "verify" / "report.txt"));
  CHECK(run("--out " + (kRoot / "verify_neg").string() + " verify --negative-control") == 1);
  CHECK(run("--out " + (kRoot / "verify_bad").string() + " verify --suite huge") == 2);
  fs::remove_all(kRoot);
}
