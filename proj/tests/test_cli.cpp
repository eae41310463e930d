#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef SCARLAB_BIN
#error "SCARLAB_BIN must point at the command-line binary"
#endif

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(SCARLAB_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::path("cli-scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("basis subcommand writes one configuration per line", "[cli]") {
  const auto dir = fresh_dir("basis6");
  REQUIRE(run_cli("basis --length 6 --bc pbc --out " + dir.string()) == 0);
  const auto rows = lines_of(slurp(dir / "basis.txt"));
  REQUIRE(rows.size() == 18);
  REQUIRE(rows.front() == "oooooo");
  for (const auto& row : rows) {
    REQUIRE(row.size() == 6);
    REQUIRE(row.find_first_not_of("ox") == std::string::npos);
  }
  REQUIRE(fs::exists(dir / "config.json"));
  REQUIRE(fs::exists(dir / "manifest.json"));
  const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  REQUIRE(manifest.contains("generated_at"));
  REQUIRE(manifest.contains("files"));
}

TEST_CASE("sector summary reports orbit structure", "[cli]") {
  const auto dir = fresh_dir("sector12");
  REQUIRE(run_cli("basis -L 12 --momentum 0 --inversion +1 --out " +
                  dir.string()) == 0);
  const auto summary = nlohmann::json::parse(slurp(dir / "sector.json"));
  REQUIRE(summary["L"] == 12);
  REQUIRE(summary["k"] == 0);
  REQUIRE(summary["I"] == 1);
  REQUIRE(summary["dimension"] == 26);
}

TEST_CASE("exact kernel subcommand certifies the expected dimension",
          "[cli]") {
  const auto dir = fresh_dir("kernel6");
  REQUIRE(run_cli("zeromodes --length 6 --bc obc --exact --out " +
                  dir.string()) == 0);
  const auto report = nlohmann::json::parse(slurp(dir / "zeromodes.json"));
  REQUIRE(report["kernelDimension"] == 3);
  REQUIRE(report["prediction"] == 3);
}

TEST_CASE("spectrum table honors the format switch", "[cli]") {
  const auto csv_dir = fresh_dir("spec-csv");
  REQUIRE(run_cli("spectrum -L 6 --out " + csv_dir.string()) == 0);
  const auto rows = lines_of(slurp(csv_dir / "spectrum.csv"));
  REQUIRE(rows.size() == 19);  // header plus one row per level
  REQUIRE(rows.front() == "index,energy");

  const auto json_dir = fresh_dir("spec-json");
  REQUIRE(run_cli("spectrum -L 6 --format json --out " + json_dir.string()) ==
          0);
  const auto table = nlohmann::json::parse(slurp(json_dir / "spectrum.json"));
  REQUIRE(table.is_array());
  REQUIRE(table.size() == 18);
  REQUIRE(table.front().contains("energy"));
}

TEST_CASE("invalid arguments exit with code two", "[cli]") {
  REQUIRE(run_cli("basis") == 2);                       // missing length
  REQUIRE(run_cli("basis -L 6 --bc ring") == 2);        // unknown boundary
  REQUIRE(run_cli("basis -L 40") == 2);                 // length out of range
  REQUIRE(run_cli("spectrum -L 6 --momentum 9") == 2);  // momentum range
  REQUIRE(run_cli("basis -L 6 --bc obc --momentum 0") == 2);
  REQUIRE(run_cli("levelstats --synthetic gue") == 2);  // unknown control
  REQUIRE(run_cli("frobnicate") == 2);                  // unknown subcommand
}

TEST_CASE("capacity overruns exit with code three", "[cli]") {
  const auto dir = fresh_dir("cap");
  const std::string cmd = std::string("SCARLAB_DENSE_CAP=50 ") + SCARLAB_BIN +
                          " spectrum -L 12 --out " + dir.string() +
                          " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  REQUIRE(WEXITSTATUS(status) == 3);
}

TEST_CASE("repeated runs are byte-identical apart from the manifest",
          "[cli]") {
  const auto dir_a = fresh_dir("det-a");
  const auto dir_b = fresh_dir("det-b");
  const std::string args = "scars -L 12 --out ";
  REQUIRE(run_cli(args + dir_a.string()) == 0);
  REQUIRE(run_cli(args + dir_b.string()) == 0);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir_a)) {
    const auto name = entry.path().filename().string();
    if (name == "manifest.json" || name == "config.json") continue;
    INFO(name);
    REQUIRE(slurp(entry.path()) == slurp(dir_b / name));
    ++compared;
  }
  REQUIRE(compared >= 2);  // at least the scatter table and the band report
}

TEST_CASE("synthetic controls are seeded and deterministic", "[cli]") {
  const auto dir_a = fresh_dir("syn-a");
  const auto dir_b = fresh_dir("syn-b");
  const auto dir_c = fresh_dir("syn-c");
  const std::string args = "levelstats --synthetic poisson --levels 500 ";
  REQUIRE(run_cli(args + "--seed 5 --out " + dir_a.string()) == 0);
  REQUIRE(run_cli(args + "--seed 5 --out " + dir_b.string()) == 0);
  REQUIRE(run_cli(args + "--seed 6 --out " + dir_c.string()) == 0);
  const auto a = slurp(dir_a / "statistics.json");
  REQUIRE(a == slurp(dir_b / "statistics.json"));
  REQUIRE(a != slurp(dir_c / "statistics.json"));
}
