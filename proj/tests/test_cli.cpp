#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "kdi/pipeline.hpp"

using namespace kdi;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

// Runs the CLI with the given arguments (stderr discarded).
Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string(KDI_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path fresh_dir(const std::string& name) {
  fs::path d = fs::temp_directory_path() / (name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_CASE("p2 text output") {
  Run r = run("p2 --c1 0 --n 4 --no-cache");
  CHECK(r.code == 0);
  CHECK(r.out.find("surface:   P2") != std::string::npos);
  CHECK(r.out.find("validity:  exact") != std::string::npos);
  CHECK(r.out.find("(1 + 6*Lambda^8 + Lambda^12) / (1 - Lambda^4)^15 + (-1 - 51/2*Lambda^4)") != std::string::npos);
}

TEST_CASE("p1p1 JSON output matches the library") {
  Run r = run("p1p1 --c1 FG --d 4 --json --no-cache");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["surface"] == "P1xP1");
  CHECK(j["one_minus_l4_pow"] == 25);
  CHECK(j["equiv_threshold"].is_null());
  CHECK(result_from_json(j).closed == chi_P1P1_diag(P1P1C1::FG, 4).closed);
  CHECK(to_json(result_from_json(j)) == j);
}

TEST_CASE("blowup output carries the threshold") {
  Run r = run("blowup --s 1 --c1 0 --L 4H-2E --json --no-cache");
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["equiv_threshold"] == 12);
}

TEST_CASE("conjecture checks") {
  Run r = run("p2 --n 4 --conjectures --json --no-cache");
  REQUIRE(r.code == 0);
  const auto c = nlohmann::json::parse(r.out)["checks"]["conjectures"];
  CHECK(c["numerator_at_1_is_2^g"] == true);
  CHECK(c["duality"] == true);
}

TEST_CASE("exit codes") {
  CHECK(run("p2 --c1 H --n 2 --r 1 --no-cache").code == 2);  // parity
  CHECK(run("p2 --c1 X --n 2 --no-cache").code == 2);
  CHECK(run("p2").code == 2);                                 // missing --n
  CHECK(run("frobnicate").code == 2);
  CHECK(run("p1p1 --c1 F --d 3 --no-cache").code == 2);       // parity
  CHECK(run("p1p1 --d 2 --n 2 --m 2 --no-cache").code == 2);  // ambiguous
  CHECK(run("blowup --s 2 --L 4H-2E1+E2 --no-cache").code == 2);
  CHECK(run("p2 --n 12").code == 3);
  CHECK(run("p2 --n 5 --max-n 4").code == 3);
  CHECK(run("p1p1 --d 8").code == 3);
  CHECK(run("--help").code == 0);
}

TEST_CASE("result cache: warm runs are byte-identical") {
  const fs::path dir = fresh_dir("kdi_cli_cache");
  const std::string env = "KDI_CACHE_DIR=" + dir.string();
  for (const char* args : {"p2 --n 5 --c1 0 --json", "p2 --n 5 --c1 0", "p1p1 --c1 F --d 2"}) {
    CAPTURE(args);
    Run cold = run(args, env);
    REQUIRE(cold.code == 0);
    Run warm = run(args, env);
    CHECK(warm.code == 0);
    CHECK(warm.out == cold.out);
  }
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator()) == 2);
  // --cache-dir overrides the environment; a corrupted entry is recomputed
  const fs::path dir2 = fresh_dir("kdi_cli_cache2");
  Run a = run("p2 --n 3 --json --cache-dir " + dir2.string(), env);
  for (auto& f : fs::directory_iterator(dir2)) {
    FILE* fp = fopen(f.path().c_str(), "w");
    fputs("{not json", fp);
    fclose(fp);
  }
  Run b = run("p2 --n 3 --json --cache-dir " + dir2.string());
  CHECK(b.code == 0);
  CHECK(b.out == a.out);
  fs::remove_all(dir);
  fs::remove_all(dir2);
}

TEST_CASE("trace writes JSON lines") {
  const std::string cmd = std::string(KDI_CLI_PATH) + " hatp2 --c1 F --L 4H-3E --r 1 --trace --no-cache 2>&1 >/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::string err;
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) err.append(buf, n);
  pclose(p);
  const auto line = nlohmann::json::parse(err.substr(0, err.find('\n')));
  CHECK(line["xi"] == "H-3E");
  CHECK(line["delta"] == nlohmann::json::array({nlohmann::json::array({8, "1"})}));
}

TEST_CASE("verify suites") {
  Run w = run("verify --suite walls");
  CHECK(w.code == 0);
  CHECK(w.out.find("FAIL") == std::string::npos);
  Run t = run("verify --suite tables --json");
  CHECK(t.code == 0);
  CHECK(nlohmann::json::parse(t.out)["pass"] == true);
  CHECK(run("verify --suite tables --data-dir /nonexistent").code == 2);
  CHECK(run("verify --suite nope").code == 2);
}
