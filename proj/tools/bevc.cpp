// bevc: build, certify and scan the bound entangled state families, and
// verify the optical preparation protocol against the direct construction.
//
// Exit codes: 0 completed, 2 invalid input, 3 numerical failure, 4 I/O.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bevc/criteria.hpp"
#include "bevc/exchange.hpp"
#include "bevc/hilbert.hpp"
#include "bevc/optics.hpp"
#include "bevc/report.hpp"
#include "bevc/states.hpp"
#include "bevc/witness.hpp"

namespace {

using namespace bevc;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitIo = 4;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("BEVC_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw invalid_input("BEVC_SEED must be an unsigned 64-bit integer");
    return v;
  }
  return kDefaultSeed;
}

std::vector<double> parse_doubles(const std::string& csv, const char* what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw invalid_input(std::string(what) + ": cannot parse '" + tok + "'");
    }
  }
  if (out.empty()) throw invalid_input(std::string(what) + ": empty list");
  return out;
}

std::vector<int> parse_ints(const std::string& csv, const char* what) {
  std::vector<int> out;
  for (double v : parse_doubles(csv, what)) {
    const int i = static_cast<int>(v);
    if (v != i) throw invalid_input(std::string(what) + ": expected integers");
    out.push_back(i);
  }
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw io_error("cannot open for writing: " + out_path);
  os << text;
  if (!os) throw io_error("write failed: " + out_path);
}

std::string format_17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---- build ---------------------------------------------------------------

struct BuildOptions {
  std::string kind;
  double a = 0.5, c = 0.8;
  int n = 12;
  int k = 3;
  std::string alphas = "2,2";
  double lambda = 0.5;
  std::string block_file;
  std::string probs = "1";
  std::string out_file;
};

int run_build(const BuildOptions& opt) {
  Matrix m;
  Dims dims{0, 0};
  std::map<std::string, std::string> meta;
  meta["kind"] = opt.kind;
  if (opt.kind == "rho") {
    const states::CVParams p(opt.a, opt.c, opt.n);
    const auto rho = states::build_rho(p);
    m = rho.matrix();
    dims = rho.dims();
    meta["a"] = format_17(opt.a);
    meta["c"] = format_17(opt.c);
    meta["n"] = std::to_string(opt.n);
  } else if (opt.kind == "sigma" || opt.kind == "choi") {
    const states::AlphaFamily f =
        opt.kind == "choi"
            ? states::AlphaFamily::choi()
            : states::AlphaFamily(opt.k, parse_doubles(opt.alphas, "--alphas"));
    const auto sigma = states::build_sigma(f);
    m = sigma.matrix();
    dims = sigma.dims();
    meta["k"] = std::to_string(f.k);
    std::string joined;
    for (double al : f.alphas) joined += (joined.empty() ? "" : ";") + std::string(format_17(al));
    meta["alphas"] = joined;
  } else if (opt.kind == "direct-sum") {
    if (opt.block_file.empty())
      throw invalid_input("direct-sum requires --block FILE");
    const auto doc = exchange::read_operator_file(opt.block_file);
    const hilbert::DensityOperator block(doc.matrix, doc.dims, true);
    const auto sum =
        states::build_direct_sum(block, parse_doubles(opt.probs, "--probs"));
    m = sum.matrix();
    dims = sum.dims();
    meta["blocks"] = std::to_string(parse_doubles(opt.probs, "--probs").size());
  } else if (opt.kind == "squeezed") {
    const auto s = optics::build_squeezed(opt.lambda, opt.n);
    m = s.amplitudes() * s.amplitudes().adjoint();
    dims = s.dims();
    meta["lambda"] = format_17(opt.lambda);
    meta["n"] = std::to_string(opt.n);
  } else {
    throw invalid_input("unknown build kind: " + opt.kind +
                        " (expected rho|sigma|choi|direct-sum|squeezed)");
  }

  if (opt.out_file.empty()) throw invalid_input("build requires --out FILE");
  exchange::write_operator_file(opt.out_file, m, dims, meta);

  const hilbert::DensityOperator op(m, dims, false);
  const auto pt = hilbert::partial_transpose(op);
  json j;
  j["file"] = opt.out_file;
  j["kind"] = opt.kind;
  j["dims"] = {dims.a, dims.b};
  j["trace"] = op.trace_real();
  j["pt_invariance_residual"] = (m - pt.matrix()).cwiseAbs().maxCoeff();
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

// ---- certify ---------------------------------------------------------------

struct CertifyOptions {
  std::string file;
  std::string kind;
  double a = 0.5, c = 0.8;
  int n = 12;
  int k = 3;
  std::string alphas = "2,2";
  std::string rows;
  int restarts = 64;
  int max_sweeps = 500;
  double eps_conv = 1e-14;
  double margin = 1e-6;
  double ppt_tol = 1e-10;
  std::optional<std::uint64_t> seed;
  bool normalize = false;
  bool no_witness = false;
  bool timings = false;
  std::string witness_out;
  std::string out_file;
};

int run_certify(const CertifyOptions& opt) {
  criteria::CertifyConfig cfg;
  cfg.search.restarts = opt.restarts;
  cfg.search.max_sweeps = opt.max_sweeps;
  cfg.search.eps_conv = opt.eps_conv;
  cfg.search.seed = opt.seed ? *opt.seed : default_seed();
  cfg.entangle_margin = opt.margin;
  cfg.ppt_tol = opt.ppt_tol;

  std::optional<hilbert::DensityOperator> op;
  std::string descriptor;
  if (!opt.file.empty()) {
    const auto doc = exchange::read_operator_file(opt.file);
    Matrix m = doc.matrix;
    if (opt.normalize) {
      const double tr = m.trace().real();
      if (tr <= 0.0) throw invalid_input("cannot normalize: trace <= 0");
      m /= tr;
    }
    op.emplace(std::move(m), doc.dims, false);
    descriptor = "file:" + opt.file;
  } else if (opt.kind == "rho") {
    const states::CVParams p(opt.a, opt.c, opt.n);
    op.emplace(states::build_rho(p));
    descriptor = "rho(a=" + std::string(format_17(opt.a)) +
                 ", c=" + format_17(opt.c) + ", N=" + std::to_string(opt.n) + ")";
    std::vector<int> rows;
    if (!opt.rows.empty()) rows = parse_ints(opt.rows, "--rows");
    else for (int r = 1; r <= opt.n; ++r) rows.push_back(r);
    op.emplace(hilbert::project_local(*op, rows, rows));
    cfg.cv_provenance = criteria::CVProvenance{p, rows};
    if (!opt.rows.empty()) descriptor += " rows=" + opt.rows;
  } else if (opt.kind == "sigma" || opt.kind == "choi") {
    const states::AlphaFamily f =
        opt.kind == "choi"
            ? states::AlphaFamily::choi()
            : states::AlphaFamily(opt.k, parse_doubles(opt.alphas, "--alphas"));
    op.emplace(states::build_sigma(f));
    cfg.sigma_alpha = f;
    descriptor = opt.kind == "choi" ? "choi" : "sigma(K=" + std::to_string(f.k) +
                                                   ", alphas=" + opt.alphas + ")";
  } else {
    throw invalid_input("certify needs --file FILE or --kind rho|sigma|choi");
  }
  if (!opt.file.empty() && !opt.rows.empty()) {
    const auto rows = parse_ints(opt.rows, "--rows");
    op.emplace(hilbert::project_local(*op, rows, rows));
    descriptor += " rows=" + opt.rows;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto report = criteria::certify(*op, cfg);
  report.input_descriptor = descriptor;

  if (report.verdict == criteria::Verdict::BoundEntangledCertified &&
      !opt.no_witness) {
    witness::WitnessConfig wc;
    wc.search = cfg.search;
    const auto w = witness::build_witness(*op, wc, descriptor);
    criteria::WitnessSummary ws;
    ws.epsilon_used = w.epsilon_used;
    ws.epsilon_opt = w.epsilon_opt;
    ws.trace_w_state = (w.w * op->matrix()).trace().real();
    ws.restarts = w.optimizer_restarts;
    ws.iterations_used = w.optimizer_iterations;
    report.witness = ws;
    if (!opt.witness_out.empty()) {
      std::map<std::string, std::string> meta;
      meta["witness_of"] = descriptor;
      meta["epsilon_used"] = format_17(w.epsilon_used);
      meta["epsilon_opt"] = format_17(w.epsilon_opt);
      meta["optimizer_restarts"] = std::to_string(w.optimizer_restarts);
      exchange::write_operator_file(opt.witness_out, w.w, w.dims, meta);
    }
  }
  if (opt.timings) {
    report.timings = criteria::Timings{
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count()};
  }
  emit(report::to_json_string(report), opt.out_file);
  return kExitOk;
}

// ---- scan ------------------------------------------------------------------

struct ScanOptions {
  std::string a_values, c_values;
  int n = 10;
  std::string k_values;
  double alpha_geometric = 0.8;
  int k = 3;
  std::string alpha_values;
  std::string format = "csv";
  int restarts = 64;
  std::optional<std::uint64_t> seed;
  std::string out_file;
};

struct ScanRow {
  int index = 0;
  std::string kind;
  std::optional<double> a, c;
  std::optional<int> n, k;
  std::string alphas;
  double min_pt_eigenvalue = 0.0;
  double residual = 0.0;
  std::string verdict;
  int psi_schmidt_rank = 0;
};

ScanRow scan_point_ac(int index, double a, double c, int n,
                      const criteria::CertifyConfig& cfg) {
  ScanRow row;
  row.index = index;
  row.kind = "rho";
  row.a = a;
  row.c = c;
  row.n = n;
  const states::CVParams p(a, c, n);
  criteria::CertifyConfig local = cfg;
  std::vector<int> rows;
  for (int r = 1; r <= n; ++r) rows.push_back(r);
  local.cv_provenance = criteria::CVProvenance{p, rows};
  const auto report = criteria::certify(states::build_rho(p), local);
  row.min_pt_eigenvalue = report.ppt.min_pt_eigenvalue;
  row.residual = report.range_search ? report.range_search->residual : 0.0;
  row.verdict = criteria::to_string(report.verdict);
  row.psi_schmidt_rank = hilbert::schmidt(states::build_psi(p)).rank();
  return row;
}

ScanRow scan_point_sigma(int index, const states::AlphaFamily& f,
                         const criteria::CertifyConfig& cfg, const char* kind) {
  ScanRow row;
  row.index = index;
  row.kind = kind;
  row.k = f.k;
  for (double al : f.alphas)
    row.alphas += (row.alphas.empty() ? "" : ";") + std::string(format_17(al));
  criteria::CertifyConfig local = cfg;
  local.sigma_alpha = f;
  const auto report = criteria::certify(states::build_sigma(f), local);
  row.min_pt_eigenvalue = report.ppt.min_pt_eigenvalue;
  row.residual = report.range_search ? report.range_search->residual : 0.0;
  row.verdict = criteria::to_string(report.verdict);
  row.psi_schmidt_rank = f.k;  // Phi = sum |n,n> over K levels
  return row;
}

int run_scan(const ScanOptions& opt) {
  criteria::CertifyConfig cfg;
  cfg.search.restarts = opt.restarts;
  cfg.search.seed = opt.seed ? *opt.seed : default_seed();

  std::vector<std::function<ScanRow()>> points;
  if (!opt.a_values.empty() || !opt.c_values.empty()) {
    if (opt.a_values.empty() || opt.c_values.empty())
      throw invalid_input("ac scan needs both --a-values and --c-values");
    const auto as = parse_doubles(opt.a_values, "--a-values");
    const auto cs = parse_doubles(opt.c_values, "--c-values");
    int index = 0;
    for (double a : as)
      for (double c : cs) {
        points.push_back([index, a, c, n = opt.n, &cfg] {
          return scan_point_ac(index, a, c, n, cfg);
        });
        ++index;
      }
  } else if (!opt.k_values.empty()) {
    const auto ks = parse_ints(opt.k_values, "--k-values");
    if (!(opt.alpha_geometric > 0.0) || opt.alpha_geometric >= 1.0)
      throw invalid_input("--alpha-geometric must lie in (0,1) so alphas strictly decrease");
    int index = 0;
    for (int k : ks) {
      std::vector<double> alphas;
      for (int m = 2; m <= k; ++m)
        alphas.push_back(std::pow(opt.alpha_geometric, m - 1));
      const states::AlphaFamily f(k, std::move(alphas));
      points.push_back([index, f, &cfg] { return scan_point_sigma(index, f, cfg, "sigma-k"); });
      ++index;
    }
  } else if (!opt.alpha_values.empty()) {
    const auto alphas = parse_doubles(opt.alpha_values, "--alpha-values");
    int index = 0;
    for (double al : alphas) {
      const states::AlphaFamily f = states::AlphaFamily::uniform(opt.k, al);
      points.push_back([index, f, &cfg] { return scan_point_sigma(index, f, cfg, "sigma-alpha"); });
      ++index;
    }
  } else {
    throw invalid_input(
        "scan needs a grid: --a-values/--c-values, --k-values, or --alpha-values");
  }
  if (points.empty()) throw invalid_input("empty scan grid");

  // Grid points are independent pure computations; run them in parallel and
  // merge in grid order.
  std::vector<std::future<ScanRow>> futures;
  futures.reserve(points.size());
  for (auto& fn : points)
    futures.push_back(std::async(std::launch::async | std::launch::deferred, fn));
  std::vector<ScanRow> rows;
  rows.reserve(points.size());
  for (auto& fut : futures) rows.push_back(fut.get());

  std::ostringstream os;
  if (opt.format == "csv") {
    os << "index,kind,a,c,n,k,alphas,min_pt_eigenvalue,residual,verdict,psi_schmidt_rank\n";
    for (const auto& r : rows) {
      os << r.index << "," << r.kind << ",";
      if (r.a) os << format_17(*r.a);
      os << ",";
      if (r.c) os << format_17(*r.c);
      os << ",";
      if (r.n) os << *r.n;
      os << ",";
      if (r.k) os << *r.k;
      os << "," << r.alphas << "," << format_17(r.min_pt_eigenvalue) << ","
         << format_17(r.residual) << "," << r.verdict << "," << r.psi_schmidt_rank
         << "\n";
    }
  } else if (opt.format == "json") {
    json arr = json::array();
    for (const auto& r : rows) {
      json j;
      j["index"] = r.index;
      j["kind"] = r.kind;
      if (r.a) j["a"] = *r.a;
      if (r.c) j["c"] = *r.c;
      if (r.n) j["n"] = *r.n;
      if (r.k) j["k"] = *r.k;
      if (!r.alphas.empty()) j["alphas"] = r.alphas;
      j["min_pt_eigenvalue"] = r.min_pt_eigenvalue;
      j["residual"] = r.residual;
      j["verdict"] = r.verdict;
      j["psi_schmidt_rank"] = r.psi_schmidt_rank;
      arr.push_back(std::move(j));
    }
    os << arr.dump(2) << "\n";
  } else {
    throw invalid_input("--format must be csv or json");
  }
  emit(os.str(), opt.out_file);
  return kExitOk;
}

// ---- optics-verify ----------------------------------------------------------

struct OpticsOptions {
  double beta = std::log(2.0);
  double gamma = std::log(1.25);
  int n = 10;
  int k_max = 8;
  int l_levels = 32;
  std::string out_file;
};

int run_optics_verify(const OpticsOptions& opt) {
  const optics::ProtocolParams p(opt.beta, opt.gamma, opt.k_max, opt.l_levels);
  const auto cmp = optics::compare_protocol_to_direct(p, opt.n);

  json j;
  j["params"] = {{"beta", opt.beta}, {"gamma", opt.gamma},      {"n", opt.n},
                 {"k_max", opt.k_max}, {"ancilla_levels", opt.l_levels}};
  j["frobenius_distance"] = {{"value", cmp.frobenius_distance},
                             {"tolerance", 1e-10},
                             {"producer", "optics.compare_protocol_to_direct"},
                             {"direct_n_levels", cmp.direct_n_levels}};
  json per_k = json::array();
  for (std::size_t i = 0; i < cmp.per_k_residuals.size(); ++i)
    per_k.push_back({{"k", i + 1},
                     {"max_elementwise_defect", cmp.per_k_residuals[i]},
                     {"tolerance", 1e-12}});
  j["per_k_identity"] = std::move(per_k);

  json kerr = json::array();
  const auto phases = optics::uniform_phases(opt.l_levels);
  for (int k = 0; k <= opt.k_max; ++k) {
    const auto approx = optics::kerr_delta_approx(k, phases, opt.n);
    kerr.push_back({{"k", k},
                    {"l", opt.l_levels},
                    {"sup_error", optics::kerr_sup_error(approx, k, opt.n)},
                    {"aliasing_free", opt.l_levels > (opt.n - 1) + k}});
  }
  j["kerr_delta"] = std::move(kerr);
  emit(j.dump(2) + "\n", opt.out_file);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bound entanglement construction and certification toolkit"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  BuildOptions build_opt;
  auto* build = app.add_subcommand("build", "construct a state and write the exchange file");
  build->add_option("kind", build_opt.kind, "rho|sigma|choi|direct-sum|squeezed")->required();
  build->add_option("--a", build_opt.a, "geometric parameter a in (0,1)");
  build->add_option("--c", build_opt.c, "geometric parameter c in (a,1)");
  build->add_option("--n", build_opt.n, "levels per mode");
  build->add_option("--k", build_opt.k, "local dimension K of Sigma");
  build->add_option("--alphas", build_opt.alphas, "comma-separated alpha_2..alpha_K");
  build->add_option("--lambda", build_opt.lambda, "squeezing parameter, |lambda| < 1");
  build->add_option("--block", build_opt.block_file, "exchange file with the block state");
  build->add_option("--probs", build_opt.probs, "comma-separated block probabilities");
  build->add_option("--out", build_opt.out_file, "output exchange file")->required();

  CertifyOptions cert_opt;
  auto* certify = app.add_subcommand("certify", "run PPT + range-criterion certification");
  certify->add_option("--file", cert_opt.file, "exchange file with the state");
  certify->add_option("--kind", cert_opt.kind, "rho|sigma|choi (inline constructor)");
  certify->add_option("--a", cert_opt.a, "rho: a");
  certify->add_option("--c", cert_opt.c, "rho: c");
  certify->add_option("--n", cert_opt.n, "rho: levels per mode");
  certify->add_option("--k", cert_opt.k, "sigma: K");
  certify->add_option("--alphas", cert_opt.alphas, "sigma: alpha_2..alpha_K");
  certify->add_option("--rows", cert_opt.rows, "project onto these 1-based levels first");
  certify->add_option("--restarts", cert_opt.restarts, "multistart restarts");
  certify->add_option("--max-sweeps", cert_opt.max_sweeps, "sweep cap per restart");
  certify->add_option("--eps-conv", cert_opt.eps_conv, "per-sweep convergence threshold");
  certify->add_option("--margin", cert_opt.margin, "entanglement residual margin");
  certify->add_option("--ppt-tol", cert_opt.ppt_tol, "PPT eigenvalue tolerance");
  certify->add_option("--seed", cert_opt.seed, "base seed (default BEVC_SEED or built-in)");
  certify->add_flag("--normalize", cert_opt.normalize, "normalize the file trace to 1");
  certify->add_flag("--no-witness", cert_opt.no_witness, "skip the witness construction");
  certify->add_flag("--timings", cert_opt.timings, "include wall-clock timings (breaks byte-determinism)");
  certify->add_option("--witness-out", cert_opt.witness_out, "write the witness exchange file");
  certify->add_option("--out", cert_opt.out_file, "report file (default stdout)");

  ScanOptions scan_opt;
  auto* scan = app.add_subcommand("scan", "certify a parameter grid, one row per point");
  scan->add_option("--a-values", scan_opt.a_values, "comma-separated a grid");
  scan->add_option("--c-values", scan_opt.c_values, "comma-separated c grid");
  scan->add_option("--n", scan_opt.n, "levels per mode for rho points");
  scan->add_option("--k-values", scan_opt.k_values, "comma-separated K grid");
  scan->add_option("--alpha-geometric", scan_opt.alpha_geometric,
                   "K scan: alpha_m = q^(m-1) with this q in (0,1)");
  scan->add_option("--k", scan_opt.k, "alpha scan: fixed K");
  scan->add_option("--alpha-values", scan_opt.alpha_values,
                   "alpha scan: uniform alpha grid");
  scan->add_option("--format", scan_opt.format, "csv (default) or json");
  scan->add_option("--restarts", scan_opt.restarts, "multistart restarts");
  scan->add_option("--seed", scan_opt.seed, "base seed");
  scan->add_option("--out", scan_opt.out_file, "output file (default stdout)");

  OpticsOptions optics_opt;
  auto* overify = app.add_subcommand(
      "optics-verify", "protocol-vs-direct equivalence and Kerr delta table");
  overify->add_option("--beta", optics_opt.beta, "decay rate beta (a = e^-beta)");
  overify->add_option("--gamma", optics_opt.gamma, "decay rate gamma (c = e^-gamma)");
  overify->add_option("--n", optics_opt.n, "occupation levels per mode");
  overify->add_option("--k-max", optics_opt.k_max, "largest photon-number difference");
  overify->add_option("--l", optics_opt.l_levels, "Kerr ancilla levels");
  overify->add_option("--out", optics_opt.out_file, "report file (default stdout)");

  try {
    app.parse(argc, argv);
    if (*build) return run_build(build_opt);
    if (*certify) return run_certify(cert_opt);
    if (*scan) return run_scan(scan_opt);
    if (*overify) return run_optics_verify(optics_opt);
    return kExitInvalidInput;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return kExitInvalidInput;
  } catch (const invalid_input& e) {
    std::cerr << "error (invalid input): " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const io_error& e) {
    std::cerr << "error (I/O): " << e.what() << "\n";
    return kExitIo;
  } catch (const numerical_error& e) {
    std::cerr << "error (numerical): " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
