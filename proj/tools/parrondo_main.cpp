#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "parrondo/game_spec.hpp"
#include "parrondo/verify.hpp"

namespace {

using namespace parrondo;

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailure = 1;
constexpr int kExitInputError = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitScanFailure = 4;

std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + out_path);
  out << text;
}

int run_command(const std::string& spec_path, std::optional<long> n_flag, bool limit,
                const std::string& out_path) {
  GameSpec spec;
  try {
    spec = load_game_spec(spec_path);
  } catch (const SpecError& e) {
    std::cerr << "spec error: " << e.what() << "\n";
    return kExitInputError;
  }
  long n = n_flag.value_or(spec.n.value_or(1));

  double value = 0.0;
  try {
    if (const auto* c = std::get_if<ClassicalSpec>(&spec.payload)) {
      if (limit) {
        FixedPointReport pf = pf_fixed_point(c->game.transition, 1e-12, 1L << 45);
        if (!pf.converged) {
          std::cerr << "fixed point did not converge (residual " << pf.residual << ")\n";
          return kExitNoConvergence;
        }
        value = 0.0;
        for (int s : c->game.win_states) value += pf.vector[s];
      } else {
        value = classical_win_prob(c->game, n);
      }
    } else if (const auto* h = std::get_if<HiddenSpec>(&spec.payload)) {
      value = limit ? hidden_limit(h->pince_nez) : hidden_win_prob(h->pince_nez, h->initial, n);
    } else if (const auto* q = std::get_if<QuantumSpec>(&spec.payload)) {
      if (limit) {
        FixedPointReport pf = quantum_pf_fixed_point(
            [&](const CMatrix& r) { return q->pince_nez.apply_round(r); }, q->pince_nez.dim(),
            1e-11, 1L << 40);
        if (!pf.converged) {
          std::cerr << "quantum fixed point did not converge\n";
          return kExitNoConvergence;
        }
        value = q->pince_nez.apply_branch_A(pf.matrix).trace().real();
      } else {
        value = quantum_win_prob(q->pince_nez, q->rho0, n);
      }
    } else if (const auto* g = std::get_if<GeodesicSpec>(&spec.payload)) {
      Wavefunction gamma = geodesic_point(g->psi, g->xi, g->theta);
      value = (g->eta.entries * gamma.amplitudes).dot(gamma.amplitudes).real();
      // one-round game: the limit is the same single-round probability
    } else {
      const auto& wspec = std::get<WalkSpec>(spec.payload);
      if (limit) {
        std::cerr << "walk games have no limit mode; use --n\n";
        return kExitInputError;
      }
      Window w = wspec.window.value_or(
          Window(-static_cast<int>(n) - 2, static_cast<int>(n) + 2));
      WalkOperator op = std::holds_alternative<VerblunskyConfig>(wspec.walk)
                            ? cmv_walk(std::get<VerblunskyConfig>(wspec.walk), w)
                            : coined_walk(std::get<Coin>(wspec.walk), w);
      CVector amps = CVector::Zero(w.dim());
      for (const auto& [pos, s, amp] : wspec.initial) amps[w.index(pos, s)] = amp;
      value = walk_win_prob(evolve(op, WalkState(w, amps), n));
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "non-convergence: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const ValidationError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInputError;
  }

  std::string label = limit ? "P_A" : "P_A_n";
  emit(label + "," + csv_number(value) + "\n", out_path);
  return kExitOk;
}

int region_command(const std::string& model, double p, int grid, int restarts,
                   std::uint64_t seed, long samples, double tol, const std::string& out_path) {
  std::cerr << "seed: " << seed << "\n";
  std::ostringstream csv;
  csv << "P_A,P_Aprime,min_Pcomb,max_Pcomb,converged\n";
  int failures = 0;
  const int cells = grid * grid;

  if (model == "quantum") {
    auto scan = quantum_region_scan(p, grid, restarts, seed, tol);
    for (const auto& cell : scan) {
      csv << csv_number(cell.P_A) << "," << csv_number(cell.P_Aprime) << ","
          << csv_number(cell.min_value) << "," << csv_number(cell.max_value) << ","
          << (cell.converged ? 1 : 0) << "\n";
      if (!cell.converged) ++failures;
    }
  } else if (model == "hidden") {
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        double P_A = (i + 1.0) / (grid + 1.0);
        double P_Ap = (j + 1.0) / (grid + 1.0);
        bool ok = true;
        HiddenRegionSample r;
        try {
          r = hidden_region_sample(p, P_A, P_Ap, samples, seed + 1000003ULL * (i * grid + j));
        } catch (const std::exception&) {
          ok = false;
          ++failures;
        }
        csv << csv_number(P_A) << "," << csv_number(P_Ap) << ","
            << csv_number(ok ? r.observed_min : 0.0) << ","
            << csv_number(ok ? r.observed_max : 0.0) << "," << (ok ? 1 : 0) << "\n";
      }
    }
  } else if (model == "geodesic") {
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        double P_A = (i + 1.0) / (grid + 1.0);
        double P_Ap = (j + 1.0) / (grid + 1.0);
        auto [lo, hi] = geo_bounds(P_A, P_Ap);
        csv << csv_number(P_A) << "," << csv_number(P_Ap) << "," << csv_number(lo) << ","
            << csv_number(hi) << ",1\n";
      }
    }
  } else {
    std::cerr << "unknown region model \"" << model << "\"\n";
    return kExitInputError;
  }

  emit(csv.str(), out_path);
  return failures == cells ? kExitScanFailure : kExitOk;
}

int verify_command(const std::string& suite_name, std::uint64_t seed, long samples) {
  std::cout << "suite: " << suite_name << "  seed: " << seed << "\n";
  verify::Suite suite;
  try {
    suite = verify::run_suite(suite_name, seed, samples);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitInputError;
  }
  bool all_pass = true;
  for (const auto& r : suite) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << suite_name << "." << r.name << ": "
              << r.detail << "\n";
    all_pass &= r.pass;
  }
  return all_pass ? kExitOk : kExitPropertyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parrondo-game numerics: simulation, region scans, bound checks"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "evaluate a game spec file");
  std::string spec_path, run_out;
  std::optional<long> run_n;
  bool run_limit = false;
  run->add_option("spec", spec_path, "path to a JSON game spec")->required();
  run->add_option("--n", run_n, "number of rounds (overrides the spec)");
  run->add_flag("--limit", run_limit, "report the long-run limit instead of round n");
  run->add_option("--out", run_out, "write the CSV row to this file");

  auto* region = app.add_subcommand("region", "scan achievable combined probabilities");
  std::string region_model, region_out;
  double region_p = 0.5, region_tol = 1e-6;
  int region_grid = 9, region_restarts = 64;
  std::uint64_t region_seed = 0;
  long region_samples = 100000;
  region->add_option("--model", region_model, "hidden | quantum | geodesic")->required();
  region->add_option("--p", region_p, "coin bias");
  region->add_option("--grid", region_grid, "grid size K (cells at i/(K+1))");
  region->add_option("--restarts", region_restarts, "optimizer restarts per cell");
  region->add_option("--seed", region_seed, "random seed (printed for reproducibility)");
  region->add_option("--samples", region_samples, "samples per cell (hidden model)");
  region->add_option("--tol", region_tol, "constraint tolerance (quantum model)");
  region->add_option("--out", region_out, "write CSV here instead of stdout");

  auto* ver = app.add_subcommand("verify", "run a named bound/example suite");
  std::string suite_name;
  std::uint64_t verify_seed = 0;
  long verify_samples = 0;
  std::string names;
  for (const auto& s : parrondo::verify::suite_names()) names += s + " ";
  ver->add_option("--suite", suite_name, "one of: " + names)->required();
  ver->add_option("--seed", verify_seed, "random seed");
  ver->add_option("--samples", verify_samples, "sample volume (0 = suite default)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return run_command(spec_path, run_n, run_limit, run_out);
    if (region->parsed())
      return region_command(region_model, region_p, region_grid, region_restarts,
                            region_seed, region_samples, region_tol, region_out);
    return verify_command(suite_name, verify_seed, verify_samples);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}
