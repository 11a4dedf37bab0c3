#include <doctest.h>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path& scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("faithlab_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const fs::path log = scratch() / "stdout.txt";
  const std::string cmd = std::string("\"") + FAITHLAB_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string out_dir(const std::string& name) { return "\"" + (scratch() / name).string() + "\""; }

}  // namespace

TEST_CASE("simulate writes files and is reproducible") {
  const std::string flags = "simulate --experiment eprb --grid 0,0.3927 --n 200000 --seed 42";
  const Run a = run(flags + " --out " + out_dir("sim_a"));
  REQUIRE(a.code == 0);
  CHECK(a.out.find("events: 200000") != std::string::npos);
  const Run b = run(flags + " --out " + out_dir("sim_b"));
  REQUIRE(b.code == 0);
  const std::string csv = slurp(scratch() / "sim_a" / "events.csv");
  CHECK(csv.rfind("alpha_idx,beta_idx,a,b\n", 0) == 0);
  CHECK(csv == slurp(scratch() / "sim_b" / "events.csv"));
  CHECK(fs::exists(scratch() / "sim_a" / "events.json"));
  CHECK(fs::exists(scratch() / "sim_a" / "config.json"));

  SUBCASE("config echo replays the run") {
    const Run r = run("rerun --config \"" + (scratch() / "sim_a" / "config.json").string() + "\" --out " +
                      out_dir("sim_rerun"));
    REQUIRE(r.code == 0);
    CHECK(csv == slurp(scratch() / "sim_rerun" / "events.csv"));
  }

  SUBCASE("worker count does not change the output") {
    const std::string cmd = "FAITHLAB_THREADS=3 ";
    const fs::path log = scratch() / "threads.txt";
    const std::string full = cmd + "\"" + FAITHLAB_CLI_PATH + "\" " + flags + " --out " + out_dir("sim_t") + " > \"" +
                             log.string() + "\"";
    REQUIRE(std::system(full.c_str()) == 0);
    CHECK(csv == slurp(scratch() / "sim_t" / "events.csv"));
  }

  SUBCASE("degrees flag converts the grid") {
    const Run d = run("simulate --degrees --grid 0,22.5 --n 1000 --seed 3 --out " + out_dir("sim_deg"));
    REQUIRE(d.code == 0);
    const auto meta = nlohmann::json::parse(slurp(scratch() / "sim_deg" / "config.json"));
    CHECK(meta["grid"]["alpha"][1].get<double>() == doctest::Approx(0.39269908169872414));
  }
}

TEST_CASE("hidden demon drops the input column") {
  const Run r = run("simulate --experiment icseprb --demon-p 0.5 --hidden --n 5000 --seed 1 --out " +
                    out_dir("hidden"));
  REQUIRE(r.code == 0);
  const std::string csv = slurp(scratch() / "hidden" / "events.csv");
  CHECK(csv.rfind("alpha_idx,beta_idx,b\n", 0) == 0);
}

TEST_CASE("analyze") {
  REQUIRE(run("simulate --n 200000 --seed 9 --out " + out_dir("an_src")).code == 0);
  const Run a = run("analyze --csv \"" + (scratch() / "an_src" / "events.csv").string() + "\" --out " +
                    out_dir("an"));
  REQUIRE(a.code == 0);
  CHECK(a.out.find("(B _||_ alpha | beta): independent") != std::string::npos);
  const auto report = nlohmann::json::parse(slurp(scratch() / "an" / "analysis.json"));
  CHECK(report["tests"].size() == 2);
  CHECK(report["correlations"].size() == 4);
  CHECK(fs::exists(scratch() / "an" / "ci_tests.csv"));

  SUBCASE("biased demon is detected") {
    REQUIRE(run("simulate --experiment seprb --p 0.7 --grid 0,1.5708 --n 100000 --seed 2 --out " +
                out_dir("an_biased"))
                .code == 0);
    const Run b = run("analyze --csv \"" + (scratch() / "an_biased" / "events.csv").string() + "\" --out " +
                      out_dir("an_b"));
    REQUIRE(b.code == 0);
    CHECK(b.out.find("(B _||_ alpha | beta): dependent") != std::string::npos);
  }

  SUBCASE("tiny batch is a precondition failure") {
    REQUIRE(run("simulate --n 10 --seed 1 --out " + out_dir("an_tiny")).code == 0);
    const Run t = run("analyze --csv \"" + (scratch() / "an_tiny" / "events.csv").string() + "\" --out " +
                      out_dir("an_t"));
    CHECK(t.code == 2);
    CHECK(t.out.find("sparse") != std::string::npos);
  }

  SUBCASE("missing input") {
    CHECK(run("analyze --csv \"" + (scratch() / "nope.csv").string() + "\" --out " + out_dir("an_x")).code != 0);
  }
}

TEST_CASE("chsh") {
  const Run e = run("chsh --exact --out " + out_dir("chsh_exact"));
  REQUIRE(e.code == 0);
  CHECK(e.out.find("|S|: 2.8284271") != std::string::npos);
  CHECK(e.out.find("classical bound: 2.0000000") != std::string::npos);
  CHECK(fs::exists(scratch() / "chsh_exact" / "chsh.svg"));
  CHECK(slurp(scratch() / "chsh_exact" / "chsh.svg").find("<svg") != std::string::npos);

  const Run d = run("chsh --exact --spec 0,0,0,0 --out " + out_dir("chsh_deg"));
  REQUIRE(d.code == 0);
  CHECK(d.out.find("|S|: 2.0000000") != std::string::npos);

  REQUIRE(run("simulate --n 100000 --seed 4 --out " + out_dir("chsh_src")).code == 0);
  const Run s = run("chsh --csv \"" + (scratch() / "chsh_src" / "events.csv").string() + "\" --out " +
                    out_dir("chsh_emp"));
  REQUIRE(s.code == 0);
  const auto j = nlohmann::json::parse(slurp(scratch() / "chsh_emp" / "chsh.json"));
  CHECK(std::abs(j["abs_s"].get<double>() - 2.8284271247461903) < 0.05);

  REQUIRE(run("simulate --grid 0,0.5 --n 10000 --seed 4 --out " + out_dir("chsh_src2")).code == 0);
  const Run m = run("chsh --csv \"" + (scratch() / "chsh_src2" / "events.csv").string() + "\" --out " +
                    out_dir("chsh_missing"));
  CHECK(m.code == 2);
}

TEST_CASE("triad") {
  const Run t = run("triad --out " + out_dir("triad"));
  REQUIRE(t.code == 0);
  CHECK(t.out.find("explanatory-and-faithful: 0\n") != std::string::npos);
  const std::string csv = slurp(scratch() / "triad" / "triad.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1601);
  CHECK(fs::exists(scratch() / "triad" / "triad.json"));
}

TEST_CASE("finetune") {
  const Run s = run("finetune --model seprb --eps 0.01,0.05,0.1 --out " + out_dir("ft_seprb"));
  REQUIRE(s.code == 0);
  CHECK(s.out.find("verdict: fine_tuned") != std::string::npos);
  CHECK(fs::exists(scratch() / "ft_seprb" / "finetune.svg"));
  const Run c = run("finetune --model cancelling-paths --parameter q1 --out " + out_dir("ft_cp"));
  REQUIRE(c.code == 0);
  const auto j = nlohmann::json::parse(slurp(scratch() / "ft_cp" / "finetune.json"));
  CHECK(j["verdict"] == "fine_tuned");
  CHECK(run("finetune --eps 0.9 --out " + out_dir("ft_bad")).code == 1);
  CHECK(run("finetune --model nonsense --out " + out_dir("ft_bad")).code == 1);
}

TEST_CASE("equivalence and usage errors") {
  const Run e = run("equivalence --density 19 --out " + out_dir("eq"));
  REQUIRE(e.code == 0);
  CHECK(e.out.find("equivalent: yes") != std::string::npos);
  CHECK(run("equivalence --density 1 --out " + out_dir("eq_bad")).code == 1);
  CHECK(run("").code == 1);
  CHECK(run("simulate --experiment nope").code == 1);
  CHECK(run("simulate --n 0 --out " + out_dir("zero")).code == 1);
}
