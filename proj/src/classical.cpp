#include "parrondo/classical.hpp"

#include <algorithm>
#include <cmath>

namespace parrondo {

namespace {

// b^n * x by binary powering; exact enough for the n <= 1e9 used here.
RVector matrix_power_apply(const RMatrix& b, long n, RVector x) {
  RMatrix base = b;
  while (n > 0) {
    if (n & 1) x = base * x;
    n >>= 1;
    if (n) base = base * base;
  }
  return x;
}

void check_entry(double value, const char* name, int row, int col) {
  if (value < -1e-15 || value > 1.0 + 1e-15)
    throw ValidationError(std::string(name) + " entry (" + std::to_string(row + 1) +
                          "," + std::to_string(col + 1) + ") = " +
                          std::to_string(value) + " is outside [0,1]");
}

StochasticMatrix checked_3x3(const RMatrix& m, const char* name) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) check_entry(m(i, j), name, i, j);
  return StochasticMatrix(m);
}

}  // namespace

ClassicalGame::ClassicalGame(StochasticMatrix t, std::set<int> wins, ProbVector init)
    : transition(std::move(t)), win_states(std::move(wins)), initial(std::move(init)) {
  if (initial.dim() != transition.dim())
    throw ValidationError("initial vector dimension does not match transition");
  if (win_states.empty())
    throw ValidationError("win_states must be nonempty");
  if (static_cast<int>(win_states.size()) >= transition.dim())
    throw ValidationError("win_states must be a strict subset of the states");
  for (int s : win_states)
    if (s < 0 || s >= transition.dim())
      throw ValidationError("win state index out of range");
}

double classical_win_prob(const ClassicalGame& g, long n) {
  if (n < 1) throw ValidationError("n must be >= 1");
  RVector state = matrix_power_apply(g.transition.entries, n - 1, g.initial.entries);
  double prob = 0.0;
  for (int s : g.win_states) prob += state[s];
  return prob;
}

ClassicalGame combine_classical(const ClassicalGame& g, const ClassicalGame& gp, double p) {
  if (g.dim() != gp.dim()) throw ValidationError("game dimensions differ");
  if (g.win_states != gp.win_states) throw ValidationError("games have different win sets");
  if (p < 0.0 || p > 1.0) throw ValidationError("p must be in [0,1]");
  RMatrix mixed = p * g.transition.entries + (1.0 - p) * gp.transition.entries;
  return ClassicalGame(StochasticMatrix(std::move(mixed)), g.win_states, g.initial);
}

StochasticMatrix make_T(double P_A, double eps, double s) {
  if (P_A <= 0.0 || P_A >= 1.0) throw ValidationError("P_A must be in (0,1)");
  if (s < 0.0 || s > 1.0) throw ValidationError("s must be in [0,1]");
  if (eps <= 0.0) throw ValidationError("eps must be positive");
  const double denom = 1.0 - (1.0 + eps) * P_A;
  if (denom <= 0.0)
    throw ValidationError("T entry (3,2): 1-(1+eps)*P_A is not positive");
  const double r = P_A * s * eps / denom;
  const double q = (1.0 / P_A - 1.0 - eps) * eps * eps;
  RMatrix m(3, 3);
  m << 1.0 - (1.0 - s) * eps - q, eps * eps,       1.0 - s,
       q,                         1.0 - r - eps * eps, s,
       (1.0 - s) * eps,           r,               0.0;
  return checked_3x3(m, "T");
}

StochasticMatrix make_Tprime(double P_Aprime, double eps) {
  if (P_Aprime <= 0.0 || P_Aprime >= 1.0) throw ValidationError("P_Aprime must be in (0,1)");
  if (eps <= 0.0) throw ValidationError("eps must be positive");
  const double q = (1.0 - P_Aprime) / P_Aprime * eps * eps;
  RMatrix m(3, 3);
  m << 1.0 - q, eps * eps,       0.5,
       q,       1.0 - eps * eps, 0.5,
       0.0,     0.0,             0.0;
  return checked_3x3(m, "T'");
}

StochasticMatrix make_S(double P_A, double zeta) {
  RMatrix m(2, 2);
  if (P_A == 0.0) {
    if (zeta <= 0.0 || zeta > 1.0) throw ValidationError("zeta must be in (0,1]");
    m << 1.0 - zeta, 0.0,
         zeta,       1.0;
    return StochasticMatrix(std::move(m));
  }
  if (P_A < 0.0 || P_A > 1.0) throw ValidationError("P_A must be in [0,1]");
  const double zmax = std::min(P_A / (1.0 - P_A), 1.0);  // +inf at P_A = 1 is fine
  if (zeta <= 0.0 || zeta > zmax + 1e-15)
    throw ValidationError("zeta outside (0, min{P_A/(1-P_A), 1}]");
  const double q = (1.0 / P_A - 1.0) * zeta;
  m << 1.0 - q, zeta,
       q,       1.0 - zeta;
  return StochasticMatrix(std::move(m));
}

StochasticMatrix make_Sprime(double P_Aprime, double xi) { return make_S(P_Aprime, xi); }

double combined_limit_T_s0(double P_A, double P_Aprime, double p, double eps) {
  return eps / (p * (1.0 - p) / 2.0 + eps * (p / P_A + (1.0 - p) / P_Aprime));
}

double combined_limit_T_s1(double P_A, double P_Aprime, double p, double eps) {
  const double num = 2.0 * eps * (1.0 / P_A - 1.0 - eps + eps * p) *
                     (p / P_A + (1.0 - p) / P_Aprime - 1.0 - eps * p);
  const double den = p * (1.0 - p) + 2.0 * eps * (1.0 / P_A - 1.0 - eps);
  return 1.0 / (1.0 + num / den);
}

RegionCheckResult two_state_region_check(double P_A, double P_Aprime, double p, int grid) {
  if (grid < 2) throw ValidationError("grid must be >= 2");
  if (P_A < 0.0 || P_A > 1.0 || P_Aprime < 0.0 || P_Aprime > 1.0)
    throw ValidationError("win probabilities must be in [0,1]");

  auto zeta_max = [](double P) {
    if (P == 0.0) return 1.0;
    return std::min(P / (1.0 - P), 1.0);  // P = 1 gives 1
  };
  const double clip = 1e-6;  // the allowed intervals are open at 0
  const double z_hi = zeta_max(P_A), x_hi = zeta_max(P_Aprime);

  const double lo_bound = std::min(P_A, P_Aprime) - 1e-9;
  const double hi_bound = std::max(P_A, P_Aprime) + 1e-9;

  RegionCheckResult result;
  result.observed_min = 1.0;
  result.observed_max = 0.0;
  result.within_bounds = true;
  for (int i = 0; i < grid; ++i) {
    double zeta = clip + (z_hi - clip) * i / (grid - 1);
    StochasticMatrix S = make_S(P_A, zeta);
    for (int j = 0; j < grid; ++j) {
      double xi = clip + (x_hi - clip) * j / (grid - 1);
      StochasticMatrix Sp = make_Sprime(P_Aprime, xi);
      StochasticMatrix mixed(p * S.entries + (1.0 - p) * Sp.entries);
      FixedPointReport pf = pf_fixed_point(mixed, 1e-12, 1L << 40);
      if (!pf.converged)
        throw ConvergenceError("combined two-state map failed to converge");
      double comb = pf.vector[0];
      result.observed_min = std::min(result.observed_min, comb);
      result.observed_max = std::max(result.observed_max, comb);
      if (comb < lo_bound || comb > hi_bound) result.within_bounds = false;
    }
  }
  return result;
}

}  // namespace parrondo
