#include "bevc/report.hpp"

#include <json.hpp>

namespace bevc::report {

namespace {

using criteria::CertificationReport;
using criteria::Verdict;
using nlohmann::json;
using optimize::ProductVector;

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    out.push_back({v(i).real(), v(i).imag()});
  return out;
}

Vector vector_from_json(const json& j) {
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) =
        Complex(j[i][0].get<double>(), j[i][1].get<double>());
  return v;
}

json product_to_json(const ProductVector& p) {
  return {{"phi", vector_to_json(p.phi)}, {"chi", vector_to_json(p.chi)}};
}

ProductVector product_from_json(const json& j) {
  return ProductVector{vector_from_json(j.at("phi")), vector_from_json(j.at("chi"))};
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "BOUND_ENTANGLED_CERTIFIED") return Verdict::BoundEntangledCertified;
  if (s == "INCONCLUSIVE") return Verdict::Inconclusive;
  if (s == "NPT") return Verdict::Npt;
  throw invalid_input("unknown verdict: " + s);
}

}  // namespace

std::string to_json_string(const CertificationReport& r, int indent) {
  json j;
  j["tool"] = {{"name", std::string(kToolName)}, {"version", r.tool_version}};
  j["input"] = {{"descriptor", r.input_descriptor}, {"dims", {r.dims.a, r.dims.b}}};
  j["seed"] = r.seed;
  j["verdict"] = criteria::to_string(r.verdict);
  j["ppt"] = {{"producer", "criteria.ppt_check"},
              {"is_ppt", r.ppt.is_ppt},
              {"min_pt_eigenvalue", r.ppt.min_pt_eigenvalue},
              {"tolerance", r.ppt.tolerance}};
  if (r.range_search) {
    j["range_search"] = {{"producer", "criteria.product_in_range_search"},
                         {"residual", r.range_search->residual},
                         {"entangle_margin", r.entangle_margin},
                         {"eps_conv", r.eps_conv},
                         {"restarts", r.range_search->restarts},
                         {"iterations_used", r.range_search->iterations_used},
                         {"converged", r.range_search->converged},
                         {"best_product", product_to_json(r.range_search->best_product)}};
  }
  if (r.alpha) {
    json a = {{"producer", "criteria.alpha_decision"},
              {"entangled_certified", r.alpha->entangled_certified},
              {"violated_indices", r.alpha->violated_indices},
              {"witness_residual", r.alpha->witness_residual},
              {"residual_tolerance", 1e-10}};
    if (r.alpha->witness_product)
      a["witness_product"] = product_to_json(*r.alpha->witness_product);
    if (r.alpha->solver_data)
      a["solver_data"] = {{"x", r.alpha->solver_data->x},
                          {"g", r.alpha->solver_data->g},
                          {"g_ij", r.alpha->solver_data->g_ij}};
    j["alpha_decision"] = std::move(a);
  }
  if (r.witness) {
    j["witness"] = {{"producer", "witness.build_witness"},
                    {"epsilon_used", r.witness->epsilon_used},
                    {"epsilon_opt", r.witness->epsilon_opt},
                    {"trace_w_state", r.witness->trace_w_state},
                    {"trace_tolerance", 1e-10},
                    {"restarts", r.witness->restarts},
                    {"iterations_used", r.witness->iterations_used}};
  }
  j["notes"] = r.notes;
  if (r.timings) j["timings"] = {{"total_seconds", r.timings->total_seconds}};
  return j.dump(indent) + "\n";
}

criteria::CertificationReport report_from_json_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw invalid_input(std::string("report is not valid JSON: ") + e.what());
  }
  CertificationReport r;
  try {
    r.tool_version = j.at("tool").at("version").get<std::string>();
    r.input_descriptor = j.at("input").at("descriptor").get<std::string>();
    r.dims = Dims{j.at("input").at("dims")[0].get<int>(),
                  j.at("input").at("dims")[1].get<int>()};
    r.seed = j.at("seed").get<std::uint64_t>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    const auto& ppt = j.at("ppt");
    r.ppt.is_ppt = ppt.at("is_ppt").get<bool>();
    r.ppt.min_pt_eigenvalue = ppt.at("min_pt_eigenvalue").get<double>();
    r.ppt.tolerance = ppt.at("tolerance").get<double>();
    if (j.contains("range_search")) {
      const auto& rs = j.at("range_search");
      criteria::RangeSearchResult search;
      search.residual = rs.at("residual").get<double>();
      search.restarts = rs.at("restarts").get<int>();
      search.iterations_used = rs.at("iterations_used").get<int>();
      search.converged = rs.at("converged").get<bool>();
      search.best_product = product_from_json(rs.at("best_product"));
      r.entangle_margin = rs.at("entangle_margin").get<double>();
      r.eps_conv = rs.at("eps_conv").get<double>();
      r.range_search = std::move(search);
    }
    if (j.contains("alpha_decision")) {
      const auto& a = j.at("alpha_decision");
      criteria::AlphaDecision ad;
      ad.entangled_certified = a.at("entangled_certified").get<bool>();
      ad.violated_indices = a.at("violated_indices").get<std::vector<int>>();
      ad.witness_residual = a.at("witness_residual").get<double>();
      if (a.contains("witness_product"))
        ad.witness_product = product_from_json(a.at("witness_product"));
      if (a.contains("solver_data")) {
        criteria::AlphaSolverData sd;
        sd.x = a.at("solver_data").at("x").get<std::vector<double>>();
        sd.g = a.at("solver_data").at("g").get<double>();
        sd.g_ij = a.at("solver_data")
                      .at("g_ij")
                      .get<std::vector<std::vector<double>>>();
        ad.solver_data = std::move(sd);
      }
      r.alpha = std::move(ad);
    }
    if (j.contains("witness")) {
      const auto& w = j.at("witness");
      criteria::WitnessSummary ws;
      ws.epsilon_used = w.at("epsilon_used").get<double>();
      ws.epsilon_opt = w.at("epsilon_opt").get<double>();
      ws.trace_w_state = w.at("trace_w_state").get<double>();
      ws.restarts = w.at("restarts").get<int>();
      ws.iterations_used = w.at("iterations_used").get<int>();
      r.witness = ws;
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.contains("timings"))
      r.timings = criteria::Timings{
          j.at("timings").at("total_seconds").get<double>()};
  } catch (const json::exception& e) {
    throw invalid_input(std::string("report JSON missing fields: ") + e.what());
  }
  return r;
}

}  // namespace bevc::report
