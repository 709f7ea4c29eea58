#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

// End-to-end checks of the installed command surface: subcommands, exit
// codes, file formats and the determinism contract. Spawns the real binary
// (path injected by CMake).

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "bevc/exchange.hpp"
#include "bevc/report.hpp"
#include "bevc/states.hpp"

using namespace bevc;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(BEVC_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_path(const std::string& name) {
  return std::string("cli_test_") + name;
}

}  // namespace

TEST_CASE("build sigma writes the Choi exchange file") {
  const auto file = temp_path("choi.op");
  const auto r = run_cli("build sigma --k 3 --alphas 2,2 --out " + file);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out.find("\"pt_invariance_residual\": 0.0") != std::string::npos);

  const auto doc = exchange::read_operator_file(file);
  CHECK(doc.dims == Dims{3, 3});
  CHECK(doc.meta.at("kind") == "sigma");
  const auto expect = states::build_sigma(states::AlphaFamily::choi());
  CHECK((doc.matrix - expect.matrix()).cwiseAbs().maxCoeff() == 0.0);
  std::remove(file.c_str());
}

TEST_CASE("build rho reports the PT residual") {
  const auto file = temp_path("rho.op");
  const auto r = run_cli("build rho --a 0.5 --c 0.8 --n 12 --out " + file);
  REQUIRE(r.exit_code == 0);
  const auto pos = r.out.find("\"pt_invariance_residual\": ");
  REQUIRE(pos != std::string::npos);
  const double residual = std::stod(r.out.substr(pos + 27));
  CHECK(residual <= 1e-12);
  std::remove(file.c_str());
}

TEST_CASE("certify choi produces the certified verdict with a witness") {
  const auto r = run_cli("certify --kind choi");
  REQUIRE(r.exit_code == 0);
  const auto report = report::report_from_json_string(r.out);
  CHECK(report.verdict == criteria::Verdict::BoundEntangledCertified);
  REQUIRE(report.witness.has_value());
  CHECK(report.witness->trace_w_state < 0.0);
  CHECK(report.witness->epsilon_used > 0.0);
  REQUIRE(report.alpha.has_value());
  CHECK(report.alpha->violated_indices == std::vector<int>{2});
}

TEST_CASE("certify a maximally entangled file state as NPT") {
  // write |Phi+> through the library, certify through the CLI
  const auto file = temp_path("bell.op");
  Vector v = Vector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  exchange::write_operator_file(file, v * v.adjoint(), {2, 2});
  const auto r = run_cli("certify --file " + file);
  REQUIRE(r.exit_code == 0);
  const auto report = report::report_from_json_string(r.out);
  CHECK(report.verdict == criteria::Verdict::Npt);
  std::remove(file.c_str());
}

TEST_CASE("certify rho projected onto rows 1..4") {
  const auto r = run_cli("certify --kind rho --a 0.5 --c 0.8 --n 12 --rows 1,2,3,4 --no-witness");
  REQUIRE(r.exit_code == 0);
  const auto report = report::report_from_json_string(r.out);
  CHECK(report.verdict == criteria::Verdict::BoundEntangledCertified);
  CHECK(report.dims == Dims{4, 4});
}

TEST_CASE("invalid parameters exit with code 2 naming the invariant") {
  CHECK(run_cli("build rho --a 0.9 --c 0.5 --n 8 --out x.op").exit_code == 2);
  CHECK(run_cli("certify --kind sigma --k 3 --alphas 2").exit_code == 2);
  CHECK(run_cli("certify").exit_code == 2);
  CHECK(run_cli("scan").exit_code == 2);
  CHECK(run_cli("build rho --a 0.5 --c 0.8 --n 200 --out x.op").exit_code == 2);
}

TEST_CASE("missing files exit with the I/O code") {
  CHECK(run_cli("certify --file /nonexistent/state.op").exit_code == 4);
  CHECK(run_cli("build direct-sum --block /nonexistent.op --probs 1 --out y.op").exit_code == 4);
}

TEST_CASE("non-state files exit with the invalid-input code") {
  const auto file = temp_path("witnessish.op");
  Matrix w = Matrix::Identity(4, 4);
  w(0, 0) = -2.0;  // Hermitian but not PSD, trace != 1
  exchange::write_operator_file(file, w, {2, 2});
  CHECK(run_cli("certify --file " + file).exit_code == 2);
  CHECK(run_cli("certify --file " + file + " --normalize").exit_code == 2);
  std::remove(file.c_str());
}

TEST_CASE("scan emits one CSV row per grid point, deterministically") {
  const std::string args =
      "scan --a-values 0.3,0.5 --c-values 0.6,0.8 --n 8 --restarts 8";
  const auto first = run_cli(args);
  REQUIRE(first.exit_code == 0);
  std::istringstream is(first.out);
  std::string line;
  std::getline(is, line);
  CHECK(line ==
        "index,kind,a,c,n,k,alphas,min_pt_eigenvalue,residual,verdict,psi_schmidt_rank");
  int rows = 0;
  while (std::getline(is, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 4);
  // determinism contract: identical bytes on a rerun
  const auto second = run_cli(args);
  CHECK(second.out == first.out);

  // degenerate single-point grid
  const auto single = run_cli("scan --a-values 0.5 --c-values 0.8 --n 6 --restarts 8");
  REQUIRE(single.exit_code == 0);
  std::istringstream is2(single.out);
  int lines = 0;
  while (std::getline(is2, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 2);  // header + one row
}

TEST_CASE("K scan certifies entanglement exactly for K >= 3") {
  const auto r = run_cli(
      "scan --k-values 2,3,4,5,6,7,8 --alpha-geometric 0.8 --restarts 8 --format json");
  REQUIRE(r.exit_code == 0);
  // strictly decreasing alphas in (0,1): K = 2 is inconclusive, the rest certify
  CHECK(r.out.find("INCONCLUSIVE") != std::string::npos);
  std::size_t certified = 0, pos = 0;
  while ((pos = r.out.find("BOUND_ENTANGLED_CERTIFIED", pos)) != std::string::npos) {
    ++certified;
    pos += 10;
  }
  CHECK(certified == 6);
}

TEST_CASE("certify reports are byte-identical across runs under a fixed seed") {
  const std::string args = "certify --kind sigma --k 3 --alphas 2,2 --seed 42";
  const auto first = run_cli(args);
  const auto second = run_cli(args);
  REQUIRE(first.exit_code == 0);
  CHECK(first.out == second.out);
  const auto report = report::report_from_json_string(first.out);
  CHECK(report.seed == 42);
}

TEST_CASE("BEVC_SEED environment variable overrides the default") {
  const auto r = run_cli("certify --kind choi --no-witness");
  const auto report = report::report_from_json_string(r.out);
  CHECK(report.seed == kDefaultSeed);
  RunResult env_run;
  {
    const std::string cmd = std::string("BEVC_SEED=777 ") + BEVC_CLI_PATH +
                            " certify --kind choi --no-witness 2>/dev/null";
    std::array<char, 4096> buf{};
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
      env_run.out.append(buf.data(), got);
    env_run.exit_code = WEXITSTATUS(pclose(pipe));
  }
  REQUIRE(env_run.exit_code == 0);
  CHECK(report::report_from_json_string(env_run.out).seed == 777);
}

TEST_CASE("optics-verify meets the equivalence tolerances at the defaults") {
  const auto r = run_cli("optics-verify");
  REQUIRE(r.exit_code == 0);
  const auto pos = r.out.find("\"value\": ");
  REQUIRE(pos != std::string::npos);
  // frobenius distance
  CHECK(r.out.find("frobenius_distance") != std::string::npos);
  CHECK(r.out.find("kerr_delta") != std::string::npos);
  CHECK(run_cli("optics-verify --gamma 0.8 --beta 0.2").exit_code == 2);
}

TEST_CASE("witness export carries the metadata block") {
  const auto file = temp_path("witness.op");
  const auto r = run_cli("certify --kind choi --witness-out " + file);
  REQUIRE(r.exit_code == 0);
  const auto doc = exchange::read_operator_file(file);
  CHECK(doc.dims == Dims{3, 3});
  CHECK(doc.meta.count("epsilon_used") == 1);
  CHECK(doc.meta.count("epsilon_opt") == 1);
  CHECK(doc.meta.at("witness_of") == "choi");
  CHECK(std::stod(doc.meta.at("epsilon_used")) > 0.0);
  std::remove(file.c_str());
}

TEST_CASE("direct-sum builds from a block file") {
  const auto block_file = temp_path("block.op");
  const auto sum_file = temp_path("sum.op");
  REQUIRE(run_cli("build choi --out " + block_file).exit_code == 0);
  const auto r =
      run_cli("build direct-sum --block " + block_file + " --probs 0.5,0.5 --out " + sum_file);
  REQUIRE(r.exit_code == 0);
  const auto doc = exchange::read_operator_file(sum_file);
  CHECK(doc.dims == Dims{6, 6});
  std::remove(block_file.c_str());
  std::remove(sum_file.c_str());
}

TEST_CASE("squeezed build writes the outer product with its norm as trace") {
  const auto file = temp_path("squeezed.op");
  const auto r = run_cli("build squeezed --lambda 0.5 --n 10 --out " + file);
  REQUIRE(r.exit_code == 0);
  const auto doc = exchange::read_operator_file(file);
  CHECK(doc.dims == Dims{10, 10});
  const double trace = doc.matrix.trace().real();
  CHECK(trace == doctest::Approx(1.0 / (1.0 - 0.25)).epsilon(1e-6));
  std::remove(file.c_str());
}
