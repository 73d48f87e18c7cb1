#pragma once

#include <set>

#include "parrondo/linalg.hpp"

namespace parrondo {

// Repeated game on a finite observed Markov chain: Alice wins when the state
// is in win_states at the final round.
struct ClassicalGame {
  StochasticMatrix transition;
  std::set<int> win_states;
  ProbVector initial;

  ClassicalGame(StochasticMatrix t, std::set<int> wins, ProbVector init);
  int dim() const { return transition.dim(); }
};

// One row of a region scan: the two individual win probabilities, the
// combined one, and the coin bias.
struct RegionPoint {
  double P_A = 0.0;
  double P_Aprime = 0.0;
  double P_comb = 0.0;
  double p = 0.0;
};

// Probability that the state is in win_states at round n (n >= 1),
// i.e. the win_states mass of transition^(n-1) * initial.
double classical_win_prob(const ClassicalGame& g, long n);

// Coin-flip combination: transition p*L + (1-p)*L', initial from g.
ClassicalGame combine_classical(const ClassicalGame& g, const ClassicalGame& gp, double p);

// 3x3 transition matrices whose leading fixed-point entry is pinned to P_A
// (resp. P_Aprime) for every s; eps must be small enough that every entry
// lands in [0, 1], which is checked entry by entry.
StochasticMatrix make_T(double P_A, double eps, double s);
StochasticMatrix make_Tprime(double P_Aprime, double eps);

// 2x2 transition matrices with leading fixed-point entry P_A (resp. P_Aprime).
// zeta must lie in (0, min{P_A/(1-P_A), 1}]; the degenerate P_A = 0 branch
// uses the lower-triangular form with an absorbing losing state.
StochasticMatrix make_S(double P_A, double zeta);
StochasticMatrix make_Sprime(double P_Aprime, double xi);

// Closed-form combined limits of p*T + (1-p)*T' at the sweep endpoints s = 0
// and s = 1 (exact rational expressions in eps).
double combined_limit_T_s0(double P_A, double P_Aprime, double p, double eps);
double combined_limit_T_s1(double P_A, double P_Aprime, double p, double eps);

struct RegionCheckResult {
  bool within_bounds = false;
  double observed_min = 0.0;
  double observed_max = 0.0;
};

// Sweeps (zeta, xi) over a grid of their allowed intervals (open endpoints
// clipped inward by 1e-6) and checks that every combined limit stays inside
// [min{P_A, P_Aprime}, max{P_A, P_Aprime}] to 1e-9.
RegionCheckResult two_state_region_check(double P_A, double P_Aprime, double p, int grid);

}  // namespace parrondo
