#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "doctest.h"

#include "cocoa_abm/io.hpp"
#include "cocoa_abm/version.hpp"

using namespace cocoa_abm;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("COCOA_ABM_CLI_PATH");
  REQUIRE_MESSAGE(p != nullptr, "COCOA_ABM_CLI_PATH not set");
  return p;
}

struct CommandResult {
  int status = -1;
  std::string output;
};

CommandResult run_command(const std::string& args,
                          const std::string& env_prefix = "") {
  CommandResult r;
  std::string cmd;
  if (!env_prefix.empty()) cmd += env_prefix + " ";
  cmd += cli_path() + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::fgets(buf, sizeof buf, pipe) != nullptr) r.output += buf;
  const int rc = pclose(pipe);
  r.status = (rc >= 0 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
  return r;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) n += c == '\n' ? 1 : 0;
  return n;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_tiny_config(const fs::path& dir) {
  const fs::path p = dir / "tiny.json";
  write_file_atomic(p,
                    "{\"n_houses\": 25, \"n_initial_infected\": 4, "
                    "\"max_days\": 6, \"beta\": 0.3}\n");
  return p;
}

const std::string kRunHeader =
    "seed,p1,p2,p3,day,S,E,I,R,D,n_ip,new_infections,notifications_issued,"
    "hospitalized";

}  // namespace

TEST_CASE("cli reports its version") {
  const CommandResult r = run_command("--version");
  CHECK(r.status == 0);
  CHECK(r.output.find(kVersion) != std::string::npos);
}

TEST_CASE("cli requires a subcommand") {
  CHECK(run_command("").status != 0);
}

TEST_CASE("cli errors cleanly on a missing config") {
  const CommandResult r =
      run_command("simulate --config /nonexistent/nope.json");
  CHECK(r.status == 1);
  CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("simulate writes the day series to stdout") {
  TempDir dir("cocoa_cli_sim");
  const fs::path cfg = write_tiny_config(dir.path);
  const CommandResult r =
      run_command("simulate --config " + cfg.string() + " --seed 7 --days 5");
  CHECK(r.status == 0);
  CHECK(r.output.rfind(kRunHeader + "\n", 0) == 0);
  CHECK(r.output.find("\n7,0,0,0,1,") != std::string::npos);
  CHECK(count_lines(r.output) == 6);
}

TEST_CASE("simulate applies percent overrides") {
  TempDir dir("cocoa_cli_simpct");
  const fs::path cfg = write_tiny_config(dir.path);
  const CommandResult r =
      run_command("simulate --config " + cfg.string() +
                  " --seed 7 --days 3 --p1 60 --p2 40 --p3 100");
  CHECK(r.status == 0);
  CHECK(r.output.find("\n7,0.6,0.4,1,1,") != std::string::npos);
}

TEST_CASE("simulate writes files when asked") {
  TempDir dir("cocoa_cli_simfiles");
  const fs::path cfg = write_tiny_config(dir.path);
  const fs::path run = dir.path / "run.csv";
  const fs::path events = dir.path / "events.csv";
  const CommandResult r = run_command(
      "simulate --config " + cfg.string() + " --seed 3 --days 4 --out " +
      run.string() + " --events " + events.string());
  CHECK(r.status == 0);
  CHECK(read_file(run).rfind(kRunHeader + "\n", 0) == 0);
  // nobody uses the app in this config, so the log is just its header
  CHECK(read_file(events) == "day,step,infector_id,other_id,notified\n");
}

TEST_CASE("sweep analyze render pipeline") {
  TempDir dir("cocoa_cli_pipeline");
  const fs::path cfg = write_tiny_config(dir.path);
  const fs::path store = dir.path / "store";
  const fs::path an = dir.path / "analysis";
  const fs::path figs = dir.path / "figs";
  const std::string sweep_args =
      "sweep --config " + cfg.string() + " --out " + store.string() +
      " --grid-p1 0,100 --grid-p2 0,60 --grid-p3 0,100 --seeds 1..3"
      " --parallelism 2";

  const CommandResult swept = run_command(sweep_args);
  CHECK(swept.status == 0);
  CHECK(swept.output.find("8 scenarios run, 0 already present, 8 total") !=
        std::string::npos);
  CHECK(fs::exists(store / "manifest.json"));
  CHECK(fs::exists(store / "runs_0_0_0.csv"));
  CHECK(fs::exists(store / "runs_0_0_1.csv"));
  CHECK(fs::exists(store / "runs_0_0.6_1.csv"));
  CHECK(fs::exists(store / "runs_1_0_1.csv"));
  CHECK(fs::exists(store / "runs_1_0.6_1.csv"));

  const CommandResult resumed = run_command(sweep_args);
  CHECK(resumed.status == 0);
  CHECK(resumed.output.find("0 scenarios run, 8 already present, 8 total") !=
        std::string::npos);

  const CommandResult mismatched = run_command(
      "sweep --config " + cfg.string() + " --out " + store.string() +
      " --grid-p1 0,100 --grid-p2 0,60 --grid-p3 0,100 --seeds 1..3"
      " --beta 0.5");
  CHECK(mismatched.status == 1);
  CHECK(mismatched.output.find("different plan") != std::string::npos);

  // every baseline run keeps its 4 initial infections, so threshold 2
  // excludes nobody
  const CommandResult analyzed =
      run_command("analyze --results " + store.string() + " --out " +
                  an.string() + " --threshold 2");
  CHECK(analyzed.status == 0);
  CHECK(analyzed.output.find("analyzed 8 scenarios, excluded 0 of 3 seeds") !=
        std::string::npos);
  CHECK(count_lines(read_file(an / "summary.csv")) == 9);
  CHECK(count_lines(read_file(an / "w.csv")) == 25);
  CHECK(fs::exists(an / "heatmap_p3_0.csv"));
  CHECK(fs::exists(an / "heatmap_p3_100.csv"));
  CHECK(read_file(an / "analysis.json").find("\"config_hash\"") !=
        std::string::npos);

  const CommandResult all_excluded =
      run_command("analyze --results " + store.string() + " --out " +
                  (dir.path / "an2").string() + " --threshold 1000");
  CHECK(all_excluded.status == 1);
  CHECK(all_excluded.output.find("error:") != std::string::npos);

  const CommandResult rendered = run_command(
      "render --summary " + an.string() + " --out " + figs.string());
  CHECK(rendered.status == 0);
  CHECK(rendered.output.find("rendered 4 figures for 2 p3 slices") !=
        std::string::npos);
  CHECK(read_file(figs / "heatmap_p3_100.svg").rfind("<svg", 0) == 0);
  CHECK(read_file(figs / "w_p3_0.svg").rfind("<svg", 0) == 0);
  CHECK(read_file(figs / "w_p3_100.svg").rfind("<svg", 0) == 0);
}

TEST_CASE("analyze refuses a store without the baseline scenario") {
  TempDir dir("cocoa_cli_nobase");
  const fs::path cfg = write_tiny_config(dir.path);
  const fs::path store = dir.path / "store";
  const CommandResult swept = run_command(
      "sweep --config " + cfg.string() + " --out " + store.string() +
      " --grid-p1 0 --grid-p2 0 --grid-p3 100 --seeds 1..2");
  CHECK(swept.status == 0);

  const CommandResult r =
      run_command("analyze --results " + store.string() + " --out " +
                  (dir.path / "an").string());
  CHECK(r.status == 1);
  CHECK(r.output.find("(0,0,0) baseline") != std::string::npos);
}

TEST_CASE("analyze needs a result store") {
  TempDir dir("cocoa_cli_nostore");
  const CommandResult r =
      run_command("analyze --results " + (dir.path / "void").string() +
                  " --out " + (dir.path / "an").string());
  CHECK(r.status == 1);
  CHECK(r.output.find("error:") != std::string::npos);
  CHECK(r.output.find("manifest.json") != std::string::npos);
}

TEST_CASE("calibrate prints one summary line") {
  TempDir dir("cocoa_cli_cal");
  const fs::path cfg = write_tiny_config(dir.path);
  const CommandResult r =
      run_command("calibrate --config " + cfg.string() +
                  " --band 0,100 --beta-range 0,1 --seeds 1..2");
  CHECK(r.status == 0);
  CHECK(r.output.rfind("beta=0 ", 0) == 0);
  CHECK(r.output.find("mean_final_n_ip=4") != std::string::npos);
  CHECK(r.output.find("iterations=1") != std::string::npos);
  CHECK(r.output.find("converged=yes") != std::string::npos);
}

TEST_CASE("the threads env var sets the default parallelism") {
  TempDir dir("cocoa_cli_env");
  const fs::path cfg = write_tiny_config(dir.path);
  const std::string args = "simulate --config " + cfg.string() + " --days 1";
  CHECK(run_command(args, "COCOA_ABM_THREADS=3").status == 0);

  const CommandResult bad = run_command(args, "COCOA_ABM_THREADS=abc");
  CHECK(bad.status == 1);
  CHECK(bad.output.find("COCOA_ABM_THREADS") != std::string::npos);
  CHECK(run_command(args, "COCOA_ABM_THREADS=0").status == 1);
}
