#pragma once

// Entanglement eigenvalue lambda* and nearest product state.
//
// The workhorse is alternating power iteration on the stationarity system
//
//     (x) conj(partial_contraction(t, s, k)) = lambda * factor_k   for all k,
//
// the coordinate form of the Lagrange conditions for maximizing |<Psi|phi>|
// over product states. Each factor update sets factor_k to the normalized
// conjugate of the partial contraction, which simultaneously phase-aligns
// the overlap to a real value >= 0 and makes the overlap magnitude
// non-decreasing sweep to sweep. For n = 2 the problem is an exact singular
// value computation and is dispatched to Eigen's SVD.
//
// Conjugation note: the stationarity condition carries conj(.) because the
// bra side of the overlap holds the stored amplitudes unconjugated (see
// state.hpp); residuals below measure exactly (x).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hartree/state.hpp"

namespace hartree {

struct SolverConfig {
  int max_iters = 500;          // sweep budget per initialization
  double tol = 1e-12;           // stop once per-sweep lambda increase drops below
  int restarts = 16;            // random initializations per solve
  double residual_tol = 1e-8;   // stationarity threshold for `converged`
  std::uint64_t seed = 0;
};

enum class SolveMethod { power, svd, brute };

inline const char* to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::power: return "power";
    case SolveMethod::svd: return "svd";
    case SolveMethod::brute: return "brute";
  }
  return "?";
}

struct SolveReport {
  EntanglementEigenvalue lambda_star;
  SeparableState nearest;
  std::vector<double> residuals;           // per-mode stationarity violation
  std::vector<int> iterations_per_restart; // sweeps used by each initialization
  bool converged = false;
  SolveMethod method = SolveMethod::power;
  std::vector<double> sweep_lambdas;       // overlap magnitude after each sweep
                                           // of the winning initialization
};

namespace detail {

inline void require_normalized(const StateTensor& t, const char* where) {
  if (std::abs(frobenius_norm(t) - 1.0) > 1e-6)
    throw std::invalid_argument(std::string(where) + ": input state must be normalized");
}

inline void require_valid(const SolverConfig& cfg) {
  if (cfg.max_iters < 1 || cfg.restarts < 1 || cfg.tol <= 0.0 || cfg.residual_tol <= 0.0)
    throw std::invalid_argument("SolverConfig: max_iters/restarts >= 1 and tolerances > 0");
}

using Factors = std::vector<std::vector<cplx>>;

// Raw-factor contraction over all modes but `mode`; same math as the public
// partial_contraction but without SeparableState re-validation per sweep.
inline std::vector<cplx> contract(const StateTensor& t, const Factors& u, int mode) {
  const auto& dims = t.dims().dims();
  const int n = static_cast<int>(dims.size());
  const auto& a = t.amplitudes();
  std::vector<cplx> v(static_cast<std::size_t>(dims[static_cast<std::size_t>(mode)]), cplx(0));
  std::vector<int> idx(dims.size(), 0);
  for (std::int64_t flat = 0; flat < static_cast<std::int64_t>(a.size());
       ++flat, increment_index(dims, idx)) {
    cplx prod = a[static_cast<std::size_t>(flat)];
    for (int j = 0; j < n; ++j)
      if (j != mode)
        prod *= u[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    v[static_cast<std::size_t>(idx[static_cast<std::size_t>(mode)])] += prod;
  }
  return v;
}

inline cplx overlap_raw(const StateTensor& t, const Factors& u) {
  const auto& dims = t.dims().dims();
  const int n = static_cast<int>(dims.size());
  const auto& a = t.amplitudes();
  std::vector<int> idx(dims.size(), 0);
  cplx acc = 0.0;
  for (std::int64_t flat = 0; flat < static_cast<std::int64_t>(a.size());
       ++flat, increment_index(dims, idx)) {
    cplx prod = a[static_cast<std::size_t>(flat)];
    for (int j = 0; j < n; ++j)
      prod *= u[static_cast<std::size_t>(j)][static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
    acc += prod;
  }
  return acc;
}

inline double vec_norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return std::sqrt(s);
}

inline std::vector<double> residuals_raw(const StateTensor& t, const Factors& u,
                                         double lambda) {
  const int n = t.mode_count();
  std::vector<double> res(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    std::vector<cplx> v = contract(t, u, k);
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += std::norm(std::conj(v[i]) - lambda * u[static_cast<std::size_t>(k)][i]);
    res[static_cast<std::size_t>(k)] = std::sqrt(s);
  }
  return res;
}

}  // namespace detail

/// Contraction of the state against all factors except `mode` (0-based):
/// v[i] = sum over the other indices of a[..] * prod_{j != mode} factor_j[..].
/// Contracting v once more against factor_mode reproduces overlap(t, s).
inline std::vector<cplx> partial_contraction(const StateTensor& t,
                                             const SeparableState& s, int mode) {
  if (mode < 0 || mode >= t.mode_count())
    throw std::invalid_argument("partial_contraction: mode index out of range");
  if (!s.matches(t.dims()))
    throw std::invalid_argument("partial_contraction: state shapes do not match");
  return detail::contract(t, s.factors(), mode);
}

/// Per-mode violation of the stationarity system at (s, lambda).
inline std::vector<double> stationarity_residuals(const StateTensor& t,
                                                  const SeparableState& s,
                                                  double lambda) {
  if (!s.matches(t.dims()))
    throw std::invalid_argument("stationarity_residuals: state shapes do not match");
  return detail::residuals_raw(t, s.factors(), lambda);
}

/// Alternating power iteration from a single initialization.
///
/// Sweeps modes in ascending order; each update replaces factor k by the
/// normalized conjugate of its partial contraction (making the overlap real
/// non-negative). Iteration continues until the per-sweep lambda increase
/// drops below cfg.tol *and* the stationarity residuals sit below
/// cfg.residual_tol, or cfg.max_iters sweeps are spent; the extra polish
/// sweeps matter because lambda stagnates quadratically faster than the
/// factors converge.
///
/// A zero partial contraction triggers a random reinitialization of that
/// factor (drawn from a stream decorrelated from the init stream by a fixed
/// xor of cfg.seed); more than cfg.restarts recoveries in one run is an error.
inline SolveReport power_iterate(const StateTensor& t, const SeparableState& init,
                                 const SolverConfig& cfg) {
  detail::require_valid(cfg);
  detail::require_normalized(t, "power_iterate");
  if (!init.matches(t.dims()))
    throw std::invalid_argument("power_iterate: init does not match state dims");

  const int n = t.mode_count();
  detail::Factors u = init.factors();
  GaussianSource recovery(cfg.seed ^ 0x9e3779b97f4a7c15ull);
  int recoveries = 0;

  std::vector<double> sweep_lambdas;
  std::vector<double> res;
  double lambda = 0.0;
  double prev = -1.0;
  bool stationary = false;
  int sweeps = 0;

  for (sweeps = 1; sweeps <= cfg.max_iters; ++sweeps) {
    for (int k = 0; k < n; ++k) {
      std::vector<cplx> v = detail::contract(t, u, k);
      const double nv = detail::vec_norm(v);
      if (nv < 1e-300) {
        if (++recoveries > cfg.restarts)
          throw std::runtime_error("power_iterate: zero contraction recovery failed");
        auto& f = u[static_cast<std::size_t>(k)];
        double nf = 0.0;
        while (nf == 0.0) {
          for (cplx& x : f) x = recovery.complex_normal();
          for (const cplx& x : f) nf += std::norm(x);
        }
        const double inv = 1.0 / std::sqrt(nf);
        for (cplx& x : f) x *= inv;
        continue;
      }
      auto& f = u[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::conj(v[i]) / nv;
    }
    lambda = std::abs(detail::overlap_raw(t, u));
    sweep_lambdas.push_back(lambda);
    if (lambda - prev < cfg.tol) {
      res = detail::residuals_raw(t, u, lambda);
      if (*std::max_element(res.begin(), res.end()) <= cfg.residual_tol) {
        stationary = true;
        break;
      }
    }
    prev = lambda;
  }

  lambda = std::abs(detail::overlap_raw(t, u));
  res = detail::residuals_raw(t, u, lambda);
  const bool converged =
      stationary || *std::max_element(res.begin(), res.end()) <= cfg.residual_tol;

  return SolveReport{EntanglementEigenvalue{lambda},
                     SeparableState(std::move(u)),
                     std::move(res),
                     {std::min(sweeps, cfg.max_iters)},
                     converged,
                     SolveMethod::power,
                     std::move(sweep_lambdas)};
}

namespace detail {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline RowMat unfold(const StateTensor& t, int mode) {
  const auto& dims = t.dims().dims();
  const int n = static_cast<int>(dims.size());
  const std::int64_t rows = dims[static_cast<std::size_t>(mode)];
  const std::int64_t cols = t.dims().total_size() / rows;
  RowMat m(rows, cols);
  std::vector<int> idx(dims.size(), 0);
  for (std::int64_t flat = 0; flat < t.dims().total_size();
       ++flat, increment_index(dims, idx)) {
    std::int64_t col = 0;
    for (int j = 0; j < n; ++j)
      if (j != mode) col = col * dims[static_cast<std::size_t>(j)] + idx[static_cast<std::size_t>(j)];
    m(idx[static_cast<std::size_t>(mode)], col) = t.amplitudes()[static_cast<std::size_t>(flat)];
  }
  return m;
}

// One deterministic initialization from the leading left singular vector of
// every mode unfolding (conjugated so the factors line up with the overlap).
inline SeparableState unfolding_init(const StateTensor& t) {
  Factors factors(static_cast<std::size_t>(t.mode_count()));
  for (int k = 0; k < t.mode_count(); ++k) {
    Eigen::JacobiSVD<RowMat> svd(unfold(t, k), Eigen::ComputeThinU);
    Eigen::VectorXcd w = svd.matrixU().col(0);
    std::vector<cplx> f(static_cast<std::size_t>(w.size()));
    for (Eigen::Index i = 0; i < w.size(); ++i)
      f[static_cast<std::size_t>(i)] = std::conj(w(i));
    double nrm = vec_norm(f);
    for (cplx& x : f) x /= nrm;
    factors[static_cast<std::size_t>(k)] = std::move(f);
  }
  return SeparableState(std::move(factors));
}

}  // namespace detail

/// Multi-restart power iteration: cfg.restarts random initializations with
/// per-restart seeds cfg.seed + i, plus one initialization from the leading
/// unfolding singular vectors. The winner is picked by the (value, restart
/// index) rule — strictly larger lambda wins, ties go to the earlier restart —
/// so the selection is independent of execution order.
inline SolveReport power_solve(const StateTensor& t, const SolverConfig& cfg) {
  detail::require_valid(cfg);
  detail::require_normalized(t, "power_solve");

  std::optional<SolveReport> best;
  std::vector<int> iters;
  iters.reserve(static_cast<std::size_t>(cfg.restarts) + 1);
  for (int r = 0; r <= cfg.restarts; ++r) {
    SeparableState init = (r < cfg.restarts)
                              ? random_separable(t.dims(), cfg.seed + static_cast<std::uint64_t>(r))
                              : detail::unfolding_init(t);
    SolverConfig sub = cfg;
    sub.seed = cfg.seed + static_cast<std::uint64_t>(r);
    SolveReport rep = power_iterate(t, init, sub);
    iters.push_back(rep.iterations_per_restart.front());
    if (!best || rep.lambda_star.value > best->lambda_star.value)
      best = std::move(rep);
  }
  best->iterations_per_restart = std::move(iters);
  return std::move(*best);
}

/// Exact bipartite solve: lambda* is the largest singular value of the
/// amplitude matrix, and the nearest product state comes from the top
/// singular pair (left factor conjugated to fit the overlap convention).
inline SolveReport svd_bipartite(const StateTensor& t) {
  if (t.mode_count() != 2)
    throw std::invalid_argument("svd_bipartite: requires exactly two modes");
  const int d1 = t.dims().dim(0);
  const int d2 = t.dims().dim(1);
  Eigen::Map<const detail::RowMat> a(t.amplitudes().data(), d1, d2);
  Eigen::JacobiSVD<detail::RowMat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);

  std::vector<cplx> u1(static_cast<std::size_t>(d1));
  std::vector<cplx> u2(static_cast<std::size_t>(d2));
  for (int i = 0; i < d1; ++i) u1[static_cast<std::size_t>(i)] = std::conj(svd.matrixU()(i, 0));
  for (int j = 0; j < d2; ++j) u2[static_cast<std::size_t>(j)] = svd.matrixV()(j, 0);
  SeparableState nearest({std::move(u1), std::move(u2)});

  const double lambda = std::abs(overlap(t, nearest));
  std::vector<double> res = detail::residuals_raw(t, nearest.factors(), lambda);
  const bool converged = *std::max_element(res.begin(), res.end()) <= 1e-10;
  return SolveReport{EntanglementEigenvalue{lambda}, std::move(nearest),
                     std::move(res),  {1}, converged,
                     SolveMethod::svd, {lambda}};
}

/// lambda* of a normalized state: exact SVD for n = 2, multi-restart power
/// iteration otherwise.
inline SolveReport entanglement_eigenvalue(const StateTensor& t, const SolverConfig& cfg) {
  if (t.mode_count() == 2) return svd_bipartite(t);
  return power_solve(t, cfg);
}

/// Sampling oracle for the maximal overlap: evaluates |overlap| on `samples`
/// random product states, then polishes the best few with plain power sweeps.
/// Returns the maximum found. Test oracle only — the value lower-bounds
/// lambda* by construction.
inline EntanglementEigenvalue brute_force_eigenvalue(const StateTensor& t,
                                                     int samples, int refine_iters,
                                                     std::uint64_t seed) {
  if (t.dims().total_size() > 4096)
    throw GuardError("brute_force_eigenvalue: total dimension exceeds 4096");
  if (samples < 1) throw std::invalid_argument("brute_force_eigenvalue: samples >= 1");
  if (refine_iters < 0) throw std::invalid_argument("brute_force_eigenvalue: refine_iters >= 0");

  const auto& dims = t.dims().dims();
  const int n = t.mode_count();
  GaussianSource src(seed);

  struct Candidate {
    double value;
    detail::Factors factors;
  };
  constexpr int kKeep = 8;
  std::vector<Candidate> top;

  detail::Factors u(static_cast<std::size_t>(n));
  for (int s = 0; s < samples; ++s) {
    for (int k = 0; k < n; ++k) {
      std::vector<cplx> f(static_cast<std::size_t>(dims[static_cast<std::size_t>(k)]));
      double nf = 0.0;
      while (nf == 0.0) {
        for (cplx& x : f) x = src.complex_normal();
        for (const cplx& x : f) nf += std::norm(x);
      }
      const double inv = 1.0 / std::sqrt(nf);
      for (cplx& x : f) x *= inv;
      u[static_cast<std::size_t>(k)] = std::move(f);
    }
    const double val = std::abs(detail::overlap_raw(t, u));
    if (static_cast<int>(top.size()) < kKeep) {
      top.push_back({val, u});
      std::sort(top.begin(), top.end(),
                [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
    } else if (val > top.back().value) {
      top.back() = {val, u};
      std::sort(top.begin(), top.end(),
                [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
    }
  }

  double best = 0.0;
  for (const Candidate& c : top) {
    best = std::max(best, c.value);
    detail::Factors f = c.factors;
    for (int it = 0; it < refine_iters; ++it) {
      bool dead = false;
      for (int k = 0; k < n; ++k) {
        std::vector<cplx> v = detail::contract(t, f, k);
        const double nv = detail::vec_norm(v);
        if (nv < 1e-300) {
          dead = true;
          break;
        }
        auto& fk = f[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < fk.size(); ++i) fk[i] = std::conj(v[i]) / nv;
      }
      if (dead) break;
      best = std::max(best, std::abs(detail::overlap_raw(t, f)));
    }
  }
  return EntanglementEigenvalue{best};
}

/// Distance from the state to the separable set, sqrt(2 - 2 lambda*).
inline double geometric_measure(const StateTensor& t, const SolverConfig& cfg) {
  const double lambda = entanglement_eigenvalue(t, cfg).lambda_star.value;
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * lambda));
}

}  // namespace hartree
