// hartree — entanglement eigenvalue, nearest product state, and minimum
// Hartree value exploration from the command line.
//
// Exit codes: 0 success, 1 certified-property violation, 2 input error,
// 3 guard or usage error.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hartree/bounds.hpp"
#include "hartree/builtin_states.hpp"
#include "hartree/eigensolver.hpp"
#include "hartree/io.hpp"
#include "hartree/sigma_search.hpp"
#include "hartree/state.hpp"

namespace {

using hartree::cplx;
using nlohmann::ordered_json;

constexpr int kBruteSamples = 10000;
constexpr int kBruteRefineIters = 60;

struct SolverFlags {
  int restarts = 16;
  double tol = 1e-12;
  int max_iters = 500;
  std::uint64_t seed = 0;
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f) {
  cmd->add_option("--restarts", f.restarts, "random initializations per solve");
  cmd->add_option("--tol", f.tol, "per-sweep lambda convergence threshold");
  cmd->add_option("--max-iters", f.max_iters, "sweep budget per initialization");
  cmd->add_option("--seed", f.seed, "RNG seed");
}

hartree::SolverConfig to_config(const SolverFlags& f) {
  hartree::SolverConfig cfg;
  cfg.restarts = f.restarts;
  cfg.tol = f.tol;
  cfg.max_iters = f.max_iters;
  cfg.seed = f.seed;
  return cfg;
}

ordered_json config_echo(const hartree::SolverConfig& cfg) {
  ordered_json j;
  j["seed"] = cfg.seed;
  j["restarts"] = cfg.restarts;
  j["tol"] = cfg.tol;
  j["max_iters"] = cfg.max_iters;
  j["residual_tol"] = cfg.residual_tol;
  return j;
}

ordered_json factors_json(const hartree::SeparableState& s) {
  ordered_json factors = ordered_json::array();
  for (int k = 0; k < s.factor_count(); ++k) {
    ordered_json f = ordered_json::array();
    for (const cplx& c : s.factor(k))
      f.push_back(ordered_json::array({c.real(), c.imag()}));
    factors.push_back(std::move(f));
  }
  return factors;
}

ordered_json bound_block(const hartree::StateTensor& t, double lambda) {
  ordered_json b;
  const hartree::SpaceBound sb = hartree::theorem3_lower_bound(t.dims());
  b["lower_bound"] = sb.lower;
  if (sb.exact) b["exact"] = *sb.exact;
  if (t.mode_count() >= 3) {
    const hartree::BoundCertificate cert = hartree::slice_certificate(t, lambda);
    b["chain_holds"] = cert.chain_holds;
    b["slack"] = cert.slack;
  }
  return b;
}

// Loads a state spec and rescales to unit norm when needed (with a warning,
// since the library's definitions assume a normalized input).
hartree::StateTensor load_normalized(const std::string& spec, hartree::LoadedState& loaded,
                                     bool& rescaled) {
  loaded = hartree::parse_state_spec(spec);
  const double nrm = hartree::frobenius_norm(loaded.tensor);
  if (nrm == 0.0) throw hartree::InputError("input is the zero state");
  rescaled = std::abs(nrm - 1.0) > 1e-12;
  if (rescaled) {
    std::cerr << "warning: input norm " << hartree::format_double(nrm)
              << " != 1; rescaled to the unit sphere\n";
    return hartree::normalize(loaded.tensor);
  }
  return loaded.tensor;
}

void emit(ordered_json& report, const std::optional<std::chrono::steady_clock::time_point>& t0) {
  if (t0) {
    const auto dt = std::chrono::steady_clock::now() - *t0;
    report["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(dt).count();
  }
  std::cout << hartree::json_to_string(report);
}

struct MeasureArgs {
  std::string state;
  SolverFlags solver;
  std::string method = "auto";
  bool timing = false;
};

int run_measure(const MeasureArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  hartree::LoadedState loaded{hartree::make_bell(), "", ""};
  bool rescaled = false;
  hartree::StateTensor t = load_normalized(a.state, loaded, rescaled);
  const hartree::SolverConfig cfg = to_config(a.solver);

  ordered_json report;
  report["schema"] = hartree::kReportSchema;
  report["command"] = "measure";
  report["input"] = {{"source", loaded.source},
                     {"digest", loaded.digest},
                     {"rescaled", rescaled}};

  double lambda = 0.0;
  if (a.method == "brute") {
    lambda = hartree::brute_force_eigenvalue(t, kBruteSamples, kBruteRefineIters, cfg.seed).value;
    report["method"] = "brute";
    report["lambda_star"] = lambda;
    report["geometric_measure"] = std::sqrt(std::max(0.0, 2.0 - 2.0 * lambda));
    report["samples"] = kBruteSamples;
    report["refine_iters"] = kBruteRefineIters;
  } else {
    hartree::SolveReport rep = [&] {
      if (a.method == "svd") {
        if (t.mode_count() != 2)
          throw hartree::GuardError("--method svd requires a bipartite state");
        return hartree::svd_bipartite(t);
      }
      if (a.method == "power") return hartree::power_solve(t, cfg);
      return hartree::entanglement_eigenvalue(t, cfg);  // auto
    }();
    lambda = rep.lambda_star.value;
    report["method"] = hartree::to_string(rep.method);
    report["lambda_star"] = lambda;
    report["geometric_measure"] = std::sqrt(std::max(0.0, 2.0 - 2.0 * lambda));
    report["converged"] = rep.converged;
    report["residuals"] = rep.residuals;
    report["iterations_per_restart"] = rep.iterations_per_restart;
    report["nearest_factors"] = factors_json(rep.nearest);
  }
  report["bound"] = bound_block(t, lambda);
  report["config"] = config_echo(cfg);
  emit(report, a.timing ? std::optional{t0} : std::nullopt);
  return 0;
}

struct BoundArgs {
  std::string dims;
  bool timing = false;
};

int run_bound(const BoundArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const hartree::DimProfile dims(hartree::parse_dims_list(a.dims));
  const hartree::SpaceBound b = hartree::theorem3_lower_bound(dims);

  ordered_json report;
  report["schema"] = hartree::kReportSchema;
  report["command"] = "bound";
  report["dims"] = dims.dims();
  report["lower_bound"] = b.lower;
  if (b.exact) report["exact"] = *b.exact;
  report["distance_ceiling"] = std::sqrt(std::max(0.0, 2.0 - 2.0 * b.lower));
  emit(report, a.timing ? std::optional{t0} : std::nullopt);
  return 0;
}

struct CertifyArgs {
  std::string state;
  SolverFlags solver;
  bool timing = false;
};

int run_certify(const CertifyArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  hartree::LoadedState loaded{hartree::make_bell(), "", ""};
  bool rescaled = false;
  hartree::StateTensor t = load_normalized(a.state, loaded, rescaled);
  if (t.mode_count() < 3)
    throw hartree::GuardError(
        "certificate needs n >= 3 modes; for bipartite spaces the exact value "
        "is available via `hartree bound --dims d1,d2`");
  const hartree::SolverConfig cfg = to_config(a.solver);
  const hartree::BoundCertificate cert = hartree::slice_certificate(t, cfg);

  ordered_json report;
  report["schema"] = hartree::kReportSchema;
  report["command"] = "certify";
  report["input"] = {{"source", loaded.source},
                     {"digest", loaded.digest},
                     {"rescaled", rescaled}};
  report["dims"] = cert.dims.dims();
  report["lambda_star"] = cert.lambda_star;
  report["frobenius_sq"] = cert.frobenius_sq;
  report["sliced_modes"] = cert.sliced_modes;
  report["matrix_modes"] = ordered_json::array({cert.matrix_row_mode, cert.matrix_col_mode});
  report["small_matrix_dim"] = cert.small_matrix_dim;
  ordered_json slices = ordered_json::array();
  for (const hartree::SliceEntry& e : cert.slice_norms) {
    ordered_json s;
    s["index"] = e.index;
    s["frobenius"] = e.frobenius;
    s["spectral"] = e.spectral;
    slices.push_back(std::move(s));
  }
  report["slices"] = std::move(slices);
  report["links"] = {{"frobenius_partition", cert.link_frobenius_partition},
                     {"slice_dominance", cert.link_slice_dominance},
                     {"chain_lower", cert.link_chain_lower},
                     {"sum_slice_frobenius_sq", cert.sum_slice_frobenius_sq},
                     {"sum_slice_spectral_sq", cert.sum_slice_spectral_sq}};
  report["chain_holds"] = cert.chain_holds;
  report["slack"] = cert.slack;
  report["config"] = config_echo(cfg);
  emit(report, a.timing ? std::optional{t0} : std::nullopt);
  return cert.chain_holds ? 0 : 1;
}

struct SigmaArgs {
  std::string dims;
  int outer_iters = 2000;
  int outer_restarts = 8;
  double step0 = 0.1;
  SolverFlags solver;
  std::string out;
  bool timing = false;
};

int run_sigma(const SigmaArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const hartree::DimProfile dims(hartree::parse_dims_list(a.dims));
  hartree::OuterConfig cfg;
  cfg.outer_iters = a.outer_iters;
  cfg.outer_restarts = a.outer_restarts;
  cfg.step0 = a.step0;
  cfg.inner = to_config(a.solver);
  cfg.seed = a.solver.seed;
  const hartree::SigmaSearchResult r = hartree::sigma_search(dims, cfg);

  ordered_json report;
  report["schema"] = hartree::kReportSchema;
  report["command"] = "sigma";
  report["dims"] = dims.dims();
  report["lower_bound"] = r.lower_bound;
  report["best_lambda"] = r.best_lambda;
  report["gap"] = r.gap;
  if (dims.mode_count() == 2) report["exact"] = hartree::sigma_exact_bipartite(dims);
  ordered_json trace = ordered_json::array();
  for (const auto& [iter, lambda] : r.trace)
    trace.push_back(ordered_json::array({iter, lambda}));
  report["trace"] = std::move(trace);
  report["config"] = {{"outer_iters", cfg.outer_iters},
                      {"outer_restarts", cfg.outer_restarts},
                      {"step0", cfg.step0},
                      {"step_schedule", cfg.step_schedule},
                      {"seed", cfg.seed},
                      {"inner", config_echo(cfg.inner)}};
  if (!a.out.empty()) {
    hartree::save_state_file(a.out, r.best_state);
    report["witness_path"] = a.out;
  }
  emit(report, a.timing ? std::optional{t0} : std::nullopt);
  return 0;
}

struct RandomArgs {
  std::string dims;
  std::uint64_t seed = 0;
  std::string out;
  bool separable = false;
  bool timing = false;
};

int run_random(const RandomArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const hartree::DimProfile dims(hartree::parse_dims_list(a.dims));
  const hartree::StateTensor t =
      a.separable ? hartree::separable_to_tensor(hartree::random_separable(dims, a.seed))
                  : hartree::random_state(dims, a.seed);
  hartree::save_state_file(a.out, t);

  ordered_json report;
  report["schema"] = hartree::kReportSchema;
  report["command"] = "random";
  report["dims"] = dims.dims();
  report["seed"] = a.seed;
  report["separable"] = a.separable;
  report["path"] = a.out;
  report["digest"] = hartree::digest64(hartree::save_state(t));
  emit(report, a.timing ? std::optional{t0} : std::nullopt);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nearest separable states, entanglement eigenvalues, and minimum "
               "Hartree value bounds for pure n-partite states"};
  app.require_subcommand(1);

  MeasureArgs measure;
  CLI::App* cmd_measure =
      app.add_subcommand("measure", "lambda*, geometric measure, and nearest product state");
  cmd_measure->add_option("state", measure.state,
                          "state file path, or bell | ghz:N | w:N | diag:D1,D2")
      ->required();
  add_solver_flags(cmd_measure, measure.solver);
  cmd_measure->add_option("--method", measure.method, "auto | power | svd | brute")
      ->check(CLI::IsMember({"auto", "power", "svd", "brute"}));
  cmd_measure->add_flag("--timing", measure.timing, "include wall_time_ms in the report");

  BoundArgs bound;
  CLI::App* cmd_bound = app.add_subcommand("bound", "minimum Hartree value bounds for a space");
  cmd_bound->add_option("--dims", bound.dims, "comma-separated mode dimensions")->required();
  cmd_bound->add_flag("--timing", bound.timing, "include wall_time_ms in the report");

  CertifyArgs certify;
  CLI::App* cmd_certify =
      app.add_subcommand("certify", "per-state slice inequality chain certificate (n >= 3)");
  cmd_certify->add_option("state", certify.state,
                          "state file path, or bell | ghz:N | w:N | diag:D1,D2")
      ->required();
  add_solver_flags(cmd_certify, certify.solver);
  cmd_certify->add_flag("--timing", certify.timing, "include wall_time_ms in the report");

  SigmaArgs sigma;
  CLI::App* cmd_sigma =
      app.add_subcommand("sigma", "search for the minimum Hartree value of a space");
  cmd_sigma->add_option("--dims", sigma.dims, "comma-separated mode dimensions")->required();
  cmd_sigma->add_option("--outer-iters", sigma.outer_iters, "descent iterations per restart");
  cmd_sigma->add_option("--outer-restarts", sigma.outer_restarts, "independent descent restarts");
  cmd_sigma->add_option("--step0", sigma.step0, "initial descent step");
  add_solver_flags(cmd_sigma, sigma.solver);
  cmd_sigma->add_option("--out", sigma.out, "write the best witness state to this file");
  cmd_sigma->add_flag("--timing", sigma.timing, "include wall_time_ms in the report");

  RandomArgs random;
  CLI::App* cmd_random = app.add_subcommand("random", "write a seeded random state file");
  cmd_random->add_option("--dims", random.dims, "comma-separated mode dimensions")->required();
  cmd_random->add_option("--seed", random.seed, "RNG seed");
  cmd_random->add_option("--out", random.out, "output path")->required();
  cmd_random->add_flag("--separable", random.separable, "emit a random product state instead");
  cmd_random->add_flag("--timing", random.timing, "include wall_time_ms in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (cmd_measure->parsed()) return run_measure(measure);
    if (cmd_bound->parsed()) return run_bound(bound);
    if (cmd_certify->parsed()) return run_certify(certify);
    if (cmd_sigma->parsed()) return run_sigma(sigma);
    if (cmd_random->parsed()) return run_random(random);
  } catch (const hartree::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hartree::GuardError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}
