#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

#ifndef CLI_BINARY
#define CLI_BINARY "wavemol"
#endif
#ifndef FIXTURES_DIR
#define FIXTURES_DIR "fixtures"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

const fs::path kWork = fs::temp_directory_path() / "wavemol_cli_test";

RunResult run_cli(const std::string& args) {
  fs::create_directories(kWork);
  const fs::path log = kWork / "out.log";
  const std::string cmd = "cd " + kWork.string() + " && " + CLI_BINARY + " " +
                          args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p);
  out << text;
}

const std::string kH2Fixture =
    std::string(FIXTURES_DIR) + "/h2_sto3g/h2_r0.735.fcidump";

}  // namespace

TEST_CASE("inspect reports the H2 mapping summary") {
  const RunResult r = run_cli("inspect " + kH2Fixture);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("2 spatial orbitals") != std::string::npos);
  CHECK(r.output.find("4 spin orbitals -> 4 qubits (parity), 2 qubits (tapered)") !=
        std::string::npos);
  CHECK(r.output.find("5 (tapered)") != std::string::npos);
}

TEST_CASE("inspect on a corrupt fixture fails with a diagnostic") {
  write_file(kWork / "corrupt.fcidump", "this is not an integral file\n");
  const RunResult r = run_cli("inspect corrupt.fcidump");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error:") != std::string::npos);

  const RunResult missing = run_cli("inspect does_not_exist.fcidump");
  CHECK(missing.exit_code == 2);
}

TEST_CASE("config validation: noisy backend requires noise file and seed") {
  write_file(kWork / "bad.json",
             "{\"fixture_dir\": \"" + std::string(FIXTURES_DIR) +
                 "/h2_sto3g_fit\", \"backend\": \"noisy\"}");
  const RunResult r = run_cli("scan --config bad.json");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("noise_file") != std::string::npos);

  write_file(kWork / "bad2.json",
             "{\"fixture_dir\": \"x\", \"backend\": \"sampled\"}");
  const RunResult r2 = run_cli("scan --config bad2.json");
  CHECK(r2.exit_code == 2);
  CHECK(r2.output.find("shots") != std::string::npos);

  write_file(kWork / "bad3.json", "{ not json ]");
  const RunResult r3 = run_cli("scan --config bad3.json");
  CHECK(r3.exit_code == 2);
  CHECK(r3.output.find("config parse error") != std::string::npos);
}

TEST_CASE("run: FCI scan + fit reproduces the H2 Table-I row") {
  write_file(kWork / "h2.json",
             "{\"fixture_dir\": \"" + std::string(FIXTURES_DIR) +
                 "/h2_sto3g_fit\", \"method\": \"fci\", \"label\": "
                 "\"STO-3G/FCI\", \"masses\": [1.00782503, 1.00782503], "
                 "\"output_dir\": \"h2_out\"}");
  const RunResult r = run_cli("run --config h2.json");
  CHECK(r.exit_code == 0);
  REQUIRE(r.output.find("summary,STO-3G/FCI,") != std::string::npos);
  double r_eq = 0, omega = 0;
  {
    std::istringstream ss(
        r.output.substr(r.output.find("summary,STO-3G/FCI,") + 19));
    char comma;
    ss >> r_eq >> comma >> omega;
  }
  CHECK(std::abs(r_eq - 0.74) < 0.01);
  CHECK(std::abs(omega - 4930.0) < 50.0);

  const std::string first = slurp(kWork / "h2_out" / "curve.csv");
  CHECK(first.find("# wavemol 1.0.0") != std::string::npos);
  CHECK(first.find("# config ") != std::string::npos);
  CHECK(first.find("# fixtures ") != std::string::npos);
  CHECK(first.find("geometry,energy,stderr") != std::string::npos);

  // byte-identical rerun
  const RunResult r2 = run_cli("run --config h2.json");
  CHECK(r2.exit_code == 0);
  CHECK(slurp(kWork / "h2_out" / "curve.csv") == first);
  CHECK(r2.output == r.output);
}

TEST_CASE("fit and npe consume the written curve") {
  // depends on the run test's output; regenerate if absent
  if (!fs::exists(kWork / "h2_out" / "curve.csv")) {
    write_file(kWork / "h2.json",
               "{\"fixture_dir\": \"" + std::string(FIXTURES_DIR) +
                   "/h2_sto3g_fit\", \"method\": \"fci\", \"output_dir\": "
                   "\"h2_out\"}");
    REQUIRE(run_cli("scan --config h2.json").exit_code == 0);
  }
  const RunResult f = run_cli(
      "fit --curve h2_out/curve.csv --mass-a 1.00782503 --mass-b 1.00782503");
  CHECK(f.exit_code == 0);
  CHECK(f.output.find("r_eq_angstrom,0.7") != std::string::npos);
  CHECK(f.output.find("omega_cm1,") != std::string::npos);

  const RunResult n = run_cli(
      "npe --curve h2_out/curve.csv --reference h2_out/curve.csv");
  CHECK(n.exit_code == 0);
  CHECK(n.output.find("npe_mha,0") != std::string::npos);

  const RunResult miss = run_cli("fit --curve nope.csv --mass-a 1 --mass-b 1");
  CHECK(miss.exit_code == 2);
}

TEST_CASE("scan honors the active_space config block") {
  write_file(kWork / "lih.json",
             "{\"fixture_dir\": \"" + std::string(FIXTURES_DIR) +
                 "/lih_sto3g_fit\", \"method\": \"fci\", \"active_space\": "
                 "{\"frozen\": [0]}, \"output_dir\": \"lih_out\"}");
  const RunResult r = run_cli("scan --config lih.json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("wrote lih_out/curve.csv") != std::string::npos);
  const std::string csv = slurp(kWork / "lih_out" / "curve.csv");
  // 16 fit-grid points present
  int rows = 0;
  std::istringstream ss(csv);
  std::string line;
  while (std::getline(ss, line))
    if (!line.empty() && line[0] != '#' && line.rfind("geometry", 0) != 0)
      ++rows;
  CHECK(rows == 16);
}
