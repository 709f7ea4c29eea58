#ifndef BEVC_COMMON_HPP
#define BEVC_COMMON_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace bevc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr std::string_view kToolName = "bevc";
inline constexpr std::string_view kToolVersion = "0.1.0";

// Published default seed; override per run (CLI --seed or BEVC_SEED).
inline constexpr std::uint64_t kDefaultSeed = 123456789ULL;

// Dense matrices only; keeps eigendecompositions at desk scale.
inline constexpr int kMaxTotalDimension = 4096;

/// Invalid parameters or malformed inputs (CLI exit code 2).
struct invalid_input : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure such as eigensolver non-convergence (CLI exit code 3).
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// File I/O failure (CLI exit code 4).
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bipartite dimensions (d_A, d_B).
struct Dims {
  int a = 0;
  int b = 0;
  int total() const { return a * b; }
  bool operator==(const Dims&) const = default;
};

/// Numerical thresholds shared by all operations. Never hard-coded at
/// call sites; pass a modified copy to loosen or tighten a contract.
struct Tolerances {
  double hermiticity = 1e-12;    // max elementwise |M - M^dag| accepted
  double trace_unit = 1e-12;     // |trace - 1| for trace-normalized states
  double rank_rel = 1e-12;       // relative eigen/singular cutoff
  double psd = 1e-10;            // PSD slack relative to spectral norm
  double projector_idem = 1e-8;  // ||P^2 - P|| accepted for projectors
};

// -- Deterministic seeding -------------------------------------------------
//
// Restart/sample seeds are derived as mix_seed(base, index) so results do
// not depend on scheduling order.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index + 0x51B0FE11ULL));
}

}  // namespace bevc

#endif  // BEVC_COMMON_HPP
