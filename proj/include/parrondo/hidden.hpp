#pragma once

#include <cstdint>
#include <utility>

#include "parrondo/linalg.hpp"

namespace parrondo {

// Hidden Markov model with back reaction, reduced to matrices over a finite
// hidden set. branch_A carries the transitions that emit the winning signal,
// branch_Atilde the rest; their sum is the column-stochastic round map.
struct HiddenPinceNez {
  RMatrix branch_A;
  RMatrix branch_Atilde;

  HiddenPinceNez(RMatrix a, RMatrix at);
  int dim() const { return static_cast<int>(branch_A.rows()); }
  RMatrix round_map() const { return branch_A + branch_Atilde; }
};

// Two-state reduced form: a row functional v with entries in [0,1] and a
// 2x2 stochastic round map N = [[1-c, d],[c, 1-d]]. The fixed-point-free
// corners c = d = 0 and c = d = 1 are rejected.
struct ReducedHiddenGame {
  Eigen::RowVector2d v;
  StochasticMatrix N;

  ReducedHiddenGame(Eigen::RowVector2d row, StochasticMatrix n);
};

// Probability that round n emits the winning signal:
// 1^T * branch_A * N^(n-1) * initial.
double hidden_win_prob(const HiddenPinceNez& pn, const ProbVector& initial, long n);

// Branch-wise convex combination of two pince-nez of equal dimension.
HiddenPinceNez combine_hidden(const HiddenPinceNez& pn, const HiddenPinceNez& pnp, double p);

// The open interval that bounds the two-state hidden combined limit:
// (min{p P_A, (1-p) P_Aprime}, max{1-p+p P_A, p+(1-p) P_Aprime}).
std::pair<double, double> hidden_bounds(double p, double P_A, double P_Aprime);

// v applied to the fixed point of N. Throws ConvergenceError when N lacks one.
double reduced_limit(const ReducedHiddenGame& rg);

struct HiddenRegionSample {
  double observed_min = 1.0;
  double observed_max = 0.0;
  long violations = 0;
};

// Draws random admissible (v, N, v', N') pairs pinned to P_A and P_Aprime,
// computes the combined limits, and counts violations of hidden_bounds.
// Deterministic given the seed, independent of thread count.
HiddenRegionSample hidden_region_sample(double p, double P_A, double P_Aprime,
                                        long samples, std::uint64_t seed);

// Two-state proof family: the first game pins P_A through a near-absorbing
// signal split with parameter eps, the second signals a win with fixed
// probability P_Aprime while s in [0,1] steers the mixed fixed point.
std::pair<HiddenPinceNez, HiddenPinceNez> make_hidden_two_state_family(
    double P_A, double P_Aprime, double eps, double s);

// Three-state embedding built on make_T / make_Tprime: the winning signal
// fires exactly when the hidden state lands in the first cell.
std::pair<HiddenPinceNez, HiddenPinceNez> make_hidden_embedding_3state(
    double P_A, double P_Aprime, double eps, double s);

// Fixed-point limit of the winning probability for a single pince-nez.
double hidden_limit(const HiddenPinceNez& pn, double tol = kDefaultFixedPointTol,
                    long max_iter = 1L << 40);

}  // namespace parrondo
