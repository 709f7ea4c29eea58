#ifndef BEVC_CRITERIA_HPP
#define BEVC_CRITERIA_HPP

#include <optional>
#include <string>
#include <vector>

#include "bevc/hilbert.hpp"
#include "bevc/optimize.hpp"
#include "bevc/states.hpp"

namespace bevc::criteria {

using hilbert::DensityOperator;
using optimize::ProductVector;
using optimize::SearchConfig;
using states::AlphaFamily;
using states::CVParams;

/// Peres criterion outcome: is_ppt <=> min_pt_eigenvalue >= -tolerance.
struct PptVerdict {
  bool is_ppt = false;
  double min_pt_eigenvalue = 0.0;
  double tolerance = 0.0;
};

/// Outcome of the numerical product-vector-in-range search: residual is
/// min over product states of <phi chi|(I - P)|phi chi>, minimized over all
/// restarts (ties resolved by restart index).
struct RangeSearchResult {
  double residual = 0.0;
  ProductVector best_product;
  int restarts = 0;
  int iterations_used = 0;
  bool converged = false;
};

/// Coefficient data of an explicit range membership
/// g |Phi> + sum g_ij |Phi_ij> = |psi, phi>, with g = 1.
struct AlphaSolverData {
  std::vector<double> x;                       // x_1..x_K
  double g = 1.0;
  std::vector<std::vector<double>> g_ij;       // index [i-1][j-i-1], j > i
};

/// Exact decision procedure for Sigma(alpha): a product vector lies in the
/// range iff alpha_j^2 = 1 for every j in 2..K-1 (alpha_K is unconstrained).
/// When none exists the state is entangled by the range criterion.
struct AlphaDecision {
  bool entangled_certified = false;
  std::vector<int> violated_indices;            // j in 2..K-1 with alpha_j^2 != 1
  std::optional<ProductVector> witness_product; // emitted when a solution exists
  std::optional<AlphaSolverData> solver_data;
  double witness_residual = 0.0;                // range residual of the emitted vector
};

struct DecisionConfig {
  double alpha_unit_tol = 1e-9;   // |alpha_j^2 - 1| below this counts as 1
  double range_tau = 1e-12;
  double residual_check = 1e-10;  // emitted vector must sit in the range this well
};

/// Entanglement verdicts. The range criterion is one-way: a product vector
/// in the range never certifies separability, so PPT + small residual is
/// INCONCLUSIVE.
enum class Verdict { BoundEntangledCertified, Inconclusive, Npt };

std::string to_string(Verdict v);

/// Provenance of a state obtained as project_local(build_rho(params), rows,
/// rows). Certification then has an exact route: the local filter
/// diag(a^{-n_m}) carries the state to Sigma(alpha_m = c^{n_m}) and
/// invertible local filters map product vectors to product vectors, so the
/// filtered family's alpha decision settles the range criterion even when
/// the raw numerical residual is small.
struct CVProvenance {
  CVParams params;
  std::vector<int> rows;
};

/// alpha_m = c^{n_m} over the sorted row labels; the Sigma family reached by
/// the local filter from the projected rho.
AlphaFamily derived_alpha_family(const CVParams& params,
                                 const std::vector<int>& rows);

struct CertifyConfig {
  SearchConfig search;
  double ppt_tol = 1e-10;
  double entangle_margin = 1e-6;  // residual above this counts as "no product vector found"
  double range_tau = 1e-12;
  std::optional<AlphaFamily> sigma_alpha;   // metadata when the input is a Sigma(alpha)
  std::optional<CVProvenance> cv_provenance;  // metadata for projected rho states
  Tolerances tol;
};

/// Witness numbers attached to a certification report by the front end.
struct WitnessSummary {
  double epsilon_used = 0.0;
  double epsilon_opt = 0.0;
  double trace_w_state = 0.0;
  int restarts = 0;
  int iterations_used = 0;
};

struct Timings {
  double total_seconds = 0.0;
};

/// Full certification record; serializes via bevc/report.hpp.
struct CertificationReport {
  std::string input_descriptor;
  Dims dims{0, 0};
  std::uint64_t seed = 0;
  PptVerdict ppt;
  std::optional<RangeSearchResult> range_search;  // absent for NPT inputs
  std::optional<AlphaDecision> alpha;
  std::optional<WitnessSummary> witness;
  Verdict verdict = Verdict::Inconclusive;
  double entangle_margin = 0.0;
  double eps_conv = 0.0;
  std::vector<std::string> notes;
  std::string tool_version;
  std::optional<Timings> timings;
};

PptVerdict ppt_check(const DensityOperator& op, double tol = 1e-10);

AlphaDecision alpha_decision(const AlphaFamily& f, const DecisionConfig& cfg = {});

/// Requires an idempotent Hermitian projector (within tol.projector_idem).
RangeSearchResult product_in_range_search(const DensityOperator& projector,
                                          const SearchConfig& cfg,
                                          const Tolerances& tol = {});

/// Runs ppt_check and the range search; when alpha metadata is supplied the
/// exact decision must agree or the verdict degrades to INCONCLUSIVE.
CertificationReport certify(const DensityOperator& op, const CertifyConfig& cfg);

/// Validates that op is a state: trace 1 and PSD within tolerances.
void require_state(const DensityOperator& op, const Tolerances& tol = {});

struct SchmidtScanEntry {
  int k = 0;
  int psi_rank = 0;                   // Schmidt rank of Psi truncated at k
  int rho_leading_eigvec_rank = 0;    // rank of the top eigenvector of rho at k
};

/// Rank growth along the truncation ladder; K values must be ascending and
/// bounded by p.n_levels.
std::vector<SchmidtScanEntry> schmidt_rank_scan(const CVParams& p,
                                                const std::vector<int>& k_list,
                                                double rank_rel_tol = 1e-12);

}  // namespace bevc::criteria

#endif  // BEVC_CRITERIA_HPP
