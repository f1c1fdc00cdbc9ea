#pragma once

// Quantitative bounds on the minimum Hartree value and the per-state
// inequality-chain certificate:
//
//   1 = ||A||^2 = sum_slices ||A_slice||^2
//             <= d' * sum_slices sigma(A_slice)^2
//             <= (prod dims / max dim) * lambda*^2,
//
// where the slices fix all modes except the two largest-dimensional ones and
// d' is the smaller of the two matrix dims. Each slice's top singular value
// is itself a lower bound on lambda*, since it is an overlap achieved by a
// product state with basis vectors on the sliced modes.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hartree/eigensolver.hpp"
#include "hartree/state.hpp"

namespace hartree {

inline constexpr double kChainTol = 1e-8;

/// Product of all dims with one occurrence of the maximum removed.
inline std::int64_t product_excluding_max(const DimProfile& dims) {
  const auto& d = dims.dims();
  return dims.total_size() / *std::max_element(d.begin(), d.end());
}

struct SpaceBound {
  DimProfile dims;
  double lower = 0.0;           // 1 / sqrt(prod dims / max dim)
  std::optional<double> exact;  // 1 / sqrt(min dim), bipartite only
};

inline SpaceBound theorem3_lower_bound(const DimProfile& dims) {
  SpaceBound b{dims, 1.0 / std::sqrt(static_cast<double>(product_excluding_max(dims))), {}};
  if (dims.mode_count() == 2)
    b.exact = 1.0 / std::sqrt(static_cast<double>(std::min(dims.dim(0), dims.dim(1))));
  return b;
}

struct SliceEntry {
  std::vector<int> index;   // multi-index over the sliced modes
  double frobenius = 0.0;
  double spectral = 0.0;    // largest singular value of the slice matrix
};

struct BoundCertificate {
  explicit BoundCertificate(DimProfile d) : dims(std::move(d)) {}

  DimProfile dims;
  double frobenius_sq = 0.0;
  std::vector<SliceEntry> slice_norms;
  double lambda_star = 0.0;
  bool chain_holds = false;
  double slack = 0.0;  // (prod dims / max dim) * lambda*^2 - 1

  // Raw link data so callers can re-judge with their own tolerances.
  double sum_slice_frobenius_sq = 0.0;
  double sum_slice_spectral_sq = 0.0;
  std::vector<int> sliced_modes;  // original mode labels, ascending dim
  int matrix_row_mode = 0;        // second-largest dim
  int matrix_col_mode = 0;        // largest dim
  int small_matrix_dim = 0;       // d'
  bool link_frobenius_partition = false;
  bool link_slice_dominance = false;
  bool link_chain_lower = false;
};

namespace detail {

// Modes ordered by ascending dimension (stable in the original labels); the
// last two are the slice-matrix modes.
inline std::vector<int> modes_by_dim(const DimProfile& dims) {
  std::vector<int> order(static_cast<std::size_t>(dims.mode_count()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return dims.dim(a) < dims.dim(b); });
  return order;
}

inline BoundCertificate slice_certificate_impl(const StateTensor& t, double lambda) {
  const DimProfile& dims = t.dims();
  const int n = dims.mode_count();
  if (n < 3)
    throw std::invalid_argument("slice_certificate: bipartite input, use theorem 2 path");

  std::vector<int> order = modes_by_dim(dims);
  const int row_mode = order[static_cast<std::size_t>(n - 2)];
  const int col_mode = order[static_cast<std::size_t>(n - 1)];
  std::vector<int> sliced(order.begin(), order.end() - 2);

  std::vector<int> slice_dims;
  slice_dims.reserve(sliced.size());
  for (int m : sliced) slice_dims.push_back(dims.dim(m));
  const std::int64_t slice_count = dim_product(slice_dims);
  const int rows = dims.dim(row_mode);
  const int cols = dims.dim(col_mode);

  BoundCertificate cert(dims);
  cert.lambda_star = lambda;
  cert.sliced_modes = sliced;
  cert.matrix_row_mode = row_mode;
  cert.matrix_col_mode = col_mode;
  cert.small_matrix_dim = rows;

  double frob_sq = 0.0;
  for (const cplx& c : t.amplitudes()) frob_sq += std::norm(c);
  cert.frobenius_sq = frob_sq;

  std::vector<int> full(static_cast<std::size_t>(n), 0);
  std::vector<int> slice_idx(slice_dims.size(), 0);
  Eigen::MatrixXcd m(rows, cols);
  double sum_frob_sq = 0.0;
  double sum_spec_sq = 0.0;
  bool dominance = true;

  for (std::int64_t s = 0; s < slice_count; ++s, increment_index(slice_dims, slice_idx)) {
    for (std::size_t j = 0; j < sliced.size(); ++j)
      full[static_cast<std::size_t>(sliced[j])] = slice_idx[j];
    for (int x = 0; x < rows; ++x) {
      full[static_cast<std::size_t>(row_mode)] = x;
      for (int y = 0; y < cols; ++y) {
        full[static_cast<std::size_t>(col_mode)] = y;
        m(x, y) = t.amplitudes()[static_cast<std::size_t>(flatten_index(dims.dims(), full))];
      }
    }
    SliceEntry entry;
    entry.index = slice_idx;
    entry.frobenius = m.norm();
    entry.spectral = Eigen::JacobiSVD<Eigen::MatrixXcd>(m).singularValues()(0);
    sum_frob_sq += entry.frobenius * entry.frobenius;
    sum_spec_sq += entry.spectral * entry.spectral;
    if (entry.spectral > lambda + kChainTol) dominance = false;
    cert.slice_norms.push_back(std::move(entry));
  }

  cert.sum_slice_frobenius_sq = sum_frob_sq;
  cert.sum_slice_spectral_sq = sum_spec_sq;
  cert.link_frobenius_partition = std::abs(sum_frob_sq - 1.0) <= kChainTol;
  cert.link_slice_dominance = dominance;
  const double chain_mid = static_cast<double>(rows) * sum_spec_sq;
  const double chain_end =
      static_cast<double>(product_excluding_max(dims)) * lambda * lambda;
  cert.link_chain_lower =
      (1.0 <= chain_mid + kChainTol) && (1.0 <= chain_end + kChainTol);
  cert.chain_holds =
      cert.link_frobenius_partition && cert.link_slice_dominance && cert.link_chain_lower;
  cert.slack = chain_end - 1.0;
  return cert;
}

}  // namespace detail

/// Certificate with lambda* taken from a multi-restart solve.
inline BoundCertificate slice_certificate(const StateTensor& t, const SolverConfig& cfg) {
  if (t.mode_count() < 3)
    throw std::invalid_argument("slice_certificate: bipartite input, use theorem 2 path");
  const double lambda = entanglement_eigenvalue(t, cfg).lambda_star.value;
  return detail::slice_certificate_impl(t, lambda);
}

/// Certificate against a caller-supplied lambda* (avoids re-solving).
inline BoundCertificate slice_certificate(const StateTensor& t, double lambda_star) {
  return detail::slice_certificate_impl(t, lambda_star);
}

/// True iff every slice's top singular value is <= lambda* + tolerance.
inline bool slice_norm_dominance(const StateTensor& t, const SolverConfig& cfg) {
  return slice_certificate(t, cfg).link_slice_dominance;
}

/// g(z) = max |<z|phi>| over product states, for arbitrary (not necessarily
/// normalized) z. Exact via SVD for n = 2; multi-restart power otherwise.
inline double max_overlap_norm(const StateTensor& z, const SolverConfig& cfg) {
  const double nz = frobenius_norm(z);
  if (nz == 0.0) return 0.0;
  if (z.mode_count() == 2) {
    Eigen::Map<const detail::RowMat> a(z.amplitudes().data(), z.dims().dim(0),
                                       z.dims().dim(1));
    return Eigen::JacobiSVD<detail::RowMat>(a).singularValues()(0);
  }
  return nz * entanglement_eigenvalue(normalize(z), cfg).lambda_star.value;
}

struct NormAxiomReport {
  int trials = 0;
  int positivity_violations = 0;
  int homogeneity_violations = 0;
  int triangle_violations = 0;
  int candidate_violations = 0;  // flagged before the escalated re-check
  double worst_violation = 0.0;  // largest confirmed excess beyond tolerance

  int total_violations() const {
    return positivity_violations + homogeneity_violations + triangle_violations;
  }
};

/// Empirical check of the norm axioms for g over `trials` random pairs of
/// unnormalized Gaussian tensors. A candidate violation is re-solved with
/// 10x restarts before it counts: g is evaluated by a heuristic maximizer
/// for n >= 3, so an apparent violation usually means an under-solved
/// instance, not a counterexample.
inline NormAxiomReport norm_axiom_suite(const DimProfile& dims, int trials,
                                        std::uint64_t seed, const SolverConfig& cfg) {
  if (dims.total_size() > 4096)
    throw GuardError("norm_axiom_suite: total dimension exceeds 4096");
  if (trials < 1) throw std::invalid_argument("norm_axiom_suite: trials >= 1");
  detail::require_valid(cfg);

  SolverConfig escalated = cfg;
  escalated.restarts = cfg.restarts * 10;

  GaussianSource src(seed);
  auto gaussian_tensor = [&]() {
    std::vector<cplx> a(static_cast<std::size_t>(dims.total_size()));
    for (cplx& x : a) x = src.complex_normal();
    return StateTensor(dims, std::move(a));
  };

  NormAxiomReport report;
  report.trials = trials;

  for (int trial = 0; trial < trials; ++trial) {
    StateTensor z = gaussian_tensor();
    StateTensor w = gaussian_tensor();
    const cplx c = std::polar(0.1 + 2.9 * src.uniform01(),
                              2.0 * std::numbers::pi * src.uniform01());

    const double gz = max_overlap_norm(z, cfg);
    const double gw = max_overlap_norm(w, cfg);
    const double gcz = max_overlap_norm(c * z, cfg);
    const double gsum = max_overlap_norm(z + w, cfg);

    // (a) positivity: z != 0 almost surely, so g must be strictly positive.
    if (frobenius_norm(z) > 0.0 && !(gz > 0.0)) {
      ++report.candidate_violations;
      if (!(max_overlap_norm(z, escalated) > 0.0)) {
        ++report.positivity_violations;
        report.worst_violation = std::max(report.worst_violation, 1.0);
      }
    }

    // (b) absolute homogeneity.
    if (std::abs(gcz - std::abs(c) * gz) > kChainTol) {
      ++report.candidate_violations;
      const double re_gz = max_overlap_norm(z, escalated);
      const double re_gcz = max_overlap_norm(c * z, escalated);
      const double excess = std::abs(re_gcz - std::abs(c) * re_gz) - kChainTol;
      if (excess > 0.0) {
        ++report.homogeneity_violations;
        report.worst_violation = std::max(report.worst_violation, excess);
      }
    }

    // (c) triangle inequality. An apparent violation needs g(z) or g(w)
    // under-solved, since any found overlap only lower-bounds g(z+w).
    if (gsum > gz + gw + kChainTol) {
      ++report.candidate_violations;
      const double re_gz = max_overlap_norm(z, escalated);
      const double re_gw = max_overlap_norm(w, escalated);
      const double re_gsum = max_overlap_norm(z + w, escalated);
      const double excess = re_gsum - (re_gz + re_gw + kChainTol);
      if (excess > 0.0) {
        ++report.triangle_violations;
        report.worst_violation = std::max(report.worst_violation, excess);
      }
    }
  }
  return report;
}

}  // namespace hartree
