#include "parrondo/hidden.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "parrondo/classical.hpp"
#include "parrondo/threading.hpp"

namespace parrondo {

HiddenPinceNez::HiddenPinceNez(RMatrix a, RMatrix at)
    : branch_A(std::move(a)), branch_Atilde(std::move(at)) {
  if (branch_A.rows() != branch_A.cols() || branch_A.rows() == 0)
    throw ValidationError("branch_A must be square and nonempty");
  if (branch_Atilde.rows() != branch_A.rows() || branch_Atilde.cols() != branch_A.cols())
    throw ValidationError("branch dimensions differ");
  if ((branch_A.array() < -kStochasticTol).any() ||
      (branch_Atilde.array() < -kStochasticTol).any())
    throw ValidationError("branch matrices must be nonnegative");
  StochasticMatrix check(round_map());  // throws unless column-stochastic
}

ReducedHiddenGame::ReducedHiddenGame(Eigen::RowVector2d row, StochasticMatrix n)
    : v(row), N(std::move(n)) {
  if (N.dim() != 2) throw ValidationError("reduced game requires a 2x2 round map");
  if (v.minCoeff() < 0.0 || v.maxCoeff() > 1.0)
    throw ValidationError("v entries must lie in [0,1]");
  const double c = N.entries(1, 0), d = N.entries(0, 1);
  if (c + d <= kStochasticTol)
    throw ValidationError("round map with c = d = 0 has no fixed point");
  if (2.0 - c - d <= kStochasticTol)
    throw ValidationError("round map with c = d = 1 is periodic");
}

double hidden_win_prob(const HiddenPinceNez& pn, const ProbVector& initial, long n) {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (initial.dim() != pn.dim()) throw ValidationError("initial dimension mismatch");
  RMatrix N = pn.round_map();
  RVector state = initial.entries;
  RMatrix base = N;
  long k = n - 1;
  while (k > 0) {
    if (k & 1) state = base * state;
    k >>= 1;
    if (k) base = base * base;
  }
  return (pn.branch_A * state).sum();
}

HiddenPinceNez combine_hidden(const HiddenPinceNez& pn, const HiddenPinceNez& pnp, double p) {
  if (pn.dim() != pnp.dim()) throw ValidationError("pince-nez dimensions differ");
  if (p < 0.0 || p > 1.0) throw ValidationError("p must be in [0,1]");
  return HiddenPinceNez(p * pn.branch_A + (1.0 - p) * pnp.branch_A,
                        p * pn.branch_Atilde + (1.0 - p) * pnp.branch_Atilde);
}

std::pair<double, double> hidden_bounds(double p, double P_A, double P_Aprime) {
  return {std::min(p * P_A, (1.0 - p) * P_Aprime),
          std::max(1.0 - p + p * P_A, p + (1.0 - p) * P_Aprime)};
}

double reduced_limit(const ReducedHiddenGame& rg) {
  FixedPointReport pf = pf_fixed_point(rg.N, kDefaultFixedPointTol, 1L << 40);
  if (!pf.converged) throw ConvergenceError("reduced round map has no fixed point");
  return rg.v * pf.vector;
}

double hidden_limit(const HiddenPinceNez& pn, double tol, long max_iter) {
  FixedPointReport pf = pf_fixed_point(StochasticMatrix(pn.round_map()), tol, max_iter);
  if (!pf.converged) throw ConvergenceError("round map has no fixed point");
  return (pn.branch_A * pf.vector).sum();
}

HiddenRegionSample hidden_region_sample(double p, double P_A, double P_Aprime,
                                        long samples, std::uint64_t seed) {
  if (samples < 1) throw ValidationError("samples must be >= 1");
  auto [lo, hi] = hidden_bounds(p, P_A, P_Aprime);

  constexpr int kShards = 64;
  std::vector<HiddenRegionSample> partial(kShards);

  parallel_for(kShards, [&](int shard) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + shard);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    long count = samples / kShards + (shard < samples % kShards ? 1 : 0);
    HiddenRegionSample& acc = partial[shard];
    acc.observed_min = 1.0;
    acc.observed_max = 0.0;

    auto draw_game = [&](double target) {
      // v = (a, b), N from (c, d); b solved from the pinning constraint
      // a*d + b*c = target * (c + d), rejection on b outside [0,1].
      for (;;) {
        double a = unif(rng), c = unif(rng), d = unif(rng);
        if (c < 1e-6 || c + d < 1e-6 || 2.0 - c - d < 1e-6) continue;
        double b = (target * (c + d) - a * d) / c;
        if (b < 0.0 || b > 1.0) continue;
        return std::array<double, 4>{a, b, c, d};
      }
    };

    for (long i = 0; i < count; ++i) {
      auto [a, b, c, d] = draw_game(P_A);
      auto [ap, bp, cp, dp] = draw_game(P_Aprime);
      double cc = p * c + (1.0 - p) * cp;
      double dd = p * d + (1.0 - p) * dp;
      Eigen::RowVector2d v;
      v << p * a + (1.0 - p) * ap, p * b + (1.0 - p) * bp;
      RMatrix N(2, 2);
      N << 1.0 - cc, dd,
           cc,       1.0 - dd;
      double comb = reduced_limit(ReducedHiddenGame(v, StochasticMatrix(N)));
      acc.observed_min = std::min(acc.observed_min, comb);
      acc.observed_max = std::max(acc.observed_max, comb);
      if (comb < lo - 1e-9 || comb > hi + 1e-9) ++acc.violations;
    }
  });

  HiddenRegionSample result;
  for (const auto& acc : partial) {
    result.observed_min = std::min(result.observed_min, acc.observed_min);
    result.observed_max = std::max(result.observed_max, acc.observed_max);
    result.violations += acc.violations;
  }
  return result;
}

std::pair<HiddenPinceNez, HiddenPinceNez> make_hidden_two_state_family(
    double P_A, double P_Aprime, double eps, double s) {
  if (P_A <= 0.0 || P_A > 1.0) throw ValidationError("P_A must be in (0,1]");
  if (P_Aprime < 0.0 || P_Aprime > 1.0) throw ValidationError("P_Aprime must be in [0,1]");
  if (s < 0.0 || s > 1.0) throw ValidationError("s must be in [0,1]");
  const double q = (1.0 / P_A - 1.0) * eps;
  if (eps <= 0.0 || q > 1.0)
    throw ValidationError("eps outside the admissible range for P_A");

  RMatrix a1(2, 2), at1(2, 2);
  a1 << 1.0 - q, 0.0,
        q,       0.0;
  at1 << 0.0, eps,
         0.0, 1.0 - eps;

  RMatrix Ns(2, 2);
  Ns << 0.5 * (1.0 + s), 0.5 * s,
        0.5 * (1.0 - s), 1.0 - 0.5 * s;
  RMatrix a2 = P_Aprime * Ns;
  RMatrix at2 = (1.0 - P_Aprime) * Ns;

  return {HiddenPinceNez(std::move(a1), std::move(at1)),
          HiddenPinceNez(std::move(a2), std::move(at2))};
}

std::pair<HiddenPinceNez, HiddenPinceNez> make_hidden_embedding_3state(
    double P_A, double P_Aprime, double eps, double s) {
  StochasticMatrix T = make_T(P_A, eps, s);
  StochasticMatrix Tp = make_Tprime(P_Aprime, eps);

  auto split = [](const RMatrix& m) {
    RMatrix a = RMatrix::Zero(3, 3), at = RMatrix::Zero(3, 3);
    a.row(0) = m.row(0);
    at.row(1) = m.row(1);
    at.row(2) = m.row(2);
    return HiddenPinceNez(std::move(a), std::move(at));
  };
  return {split(T.entries), split(Tp.entries)};
}

}  // namespace parrondo
