#include <doctest.h>

#include <random>

#include "parrondo/classical.hpp"

using namespace parrondo;

namespace {

ClassicalGame game_of(const StochasticMatrix& m, std::set<int> wins, RVector init) {
  return ClassicalGame(m, std::move(wins), ProbVector(std::move(init)));
}

}  // namespace

TEST_SUITE_BEGIN("classical");

TEST_CASE("identity chain never moves the initial mass") {
  RMatrix id = RMatrix::Identity(2, 2);
  RVector init(2);
  init << 0.3, 0.7;
  ClassicalGame g = game_of(StochasticMatrix(id), {0}, init);
  for (long n : {1L, 2L, 17L, 1000L})
    CHECK(classical_win_prob(g, n) == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("two-state construction has the displayed entries") {
  StochasticMatrix s = make_S(0.6, 0.2);
  CHECK(s.entries(0, 0) == doctest::Approx(1.0 - 2.0 / 15.0).epsilon(1e-14));
  CHECK(s.entries(0, 1) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(s.entries(1, 0) == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
  CHECK(s.entries(1, 1) == doctest::Approx(0.8).epsilon(1e-14));

  RVector init(2);
  init << 0.12, 0.88;
  ClassicalGame g = game_of(s, {0}, init);
  CHECK(classical_win_prob(g, 10000) == doctest::Approx(0.6).epsilon(1e-8));
}

TEST_CASE("degenerate two-state constructions") {
  StochasticMatrix absorbing = make_S(1.0, 1.0);
  CHECK(absorbing.entries(0, 0) == 1.0);
  CHECK(absorbing.entries(0, 1) == 1.0);
  FixedPointReport pf = pf_fixed_point(absorbing);
  REQUIRE(pf.converged);
  CHECK(pf.vector[0] == doctest::Approx(1.0).epsilon(1e-10));

  StochasticMatrix losing = make_S(0.0, 0.5);
  CHECK(losing.entries(0, 0) == doctest::Approx(0.5));
  CHECK(losing.entries(1, 1) == 1.0);
  FixedPointReport pf0 = pf_fixed_point(losing);
  REQUIRE(pf0.converged);
  CHECK(pf0.vector[0] == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("three-state construction pins the leading fixed-point entry") {
  StochasticMatrix t = make_T(0.7, 0.01, 0.0);
  FixedPointReport pf = pf_fixed_point(t, 1e-12, 1L << 40);
  REQUIRE(pf.converged);
  CHECK(pf.vector[0] == doctest::Approx(0.7).epsilon(1e-9));

  for (int j = 0; j < 3; ++j)
    CHECK(t.entries.col(j).sum() == doctest::Approx(1.0).epsilon(1e-14));

  RVector init(3);
  init << 0.2, 0.5, 0.3;
  ClassicalGame g = game_of(make_T(0.7, 0.05, 0.3), {0}, init);
  CHECK(classical_win_prob(g, 2000000) == doctest::Approx(0.7).epsilon(1e-8));
}

TEST_CASE("infeasible parameters are rejected with the offending entry") {
  CHECK_THROWS_WITH_AS(make_T(0.95, 0.1, 0.5), doctest::Contains("(3,2)"), ValidationError);
  CHECK_THROWS_AS(make_S(0.3, 0.9), ValidationError);  // zeta above P_A/(1-P_A)
}

TEST_CASE("combination is the convex blend of the round maps") {
  RMatrix id = RMatrix::Identity(2, 2);
  RMatrix swap(2, 2);
  swap << 0, 1, 1, 0;
  RVector init(2);
  init << 1.0, 0.0;
  ClassicalGame a = game_of(StochasticMatrix(id), {0}, init);
  ClassicalGame b = game_of(StochasticMatrix(swap), {0}, init);

  ClassicalGame keep = combine_classical(a, b, 1.0);
  CHECK((keep.transition.entries - id).cwiseAbs().maxCoeff() == 0.0);

  ClassicalGame mid = combine_classical(a, b, 0.5);
  CHECK(mid.transition.entries(0, 0) == doctest::Approx(0.5));
  CHECK(mid.transition.entries(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("combined win probability equals the coin-sequence expansion") {
  // brute force over all coin sequences: sum_c p^{#heads} (1-p)^{#tails} P(win | c)
  std::mt19937_64 rng(2024);
  std::exponential_distribution<double> expo(1.0);
  for (int trial = 0; trial < 10; ++trial) {
    int dim = 2 + static_cast<int>(rng() % 2);
    auto random_stochastic = [&] {
      RMatrix m(dim, dim);
      for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) m(i, j) = expo(rng);
        m.col(j) /= m.col(j).sum();
      }
      return StochasticMatrix(m);
    };
    RVector init(dim);
    for (int i = 0; i < dim; ++i) init[i] = expo(rng);
    init /= init.sum();
    ClassicalGame a = game_of(random_stochastic(), {0}, init);
    ClassicalGame b = game_of(random_stochastic(), {0}, init);
    double p = 0.3;
    for (long n = 1; n <= 6; ++n) {
      double brute = 0.0;
      for (long mask = 0; mask < (1L << (n - 1)); ++mask) {
        RVector state = init;
        double weight = 1.0;
        for (long round = 0; round < n - 1; ++round) {
          bool heads = (mask >> round) & 1;
          weight *= heads ? p : 1.0 - p;
          state = (heads ? a : b).transition.entries * state;
        }
        brute += weight * state[0];
      }
      double combined = classical_win_prob(combine_classical(a, b, p), n);
      CHECK(std::abs(brute - combined) < 1e-12);
    }
  }
}

TEST_CASE("combined endpoint limits match the closed forms") {
  const double P = 0.7, p = 0.5, eps = 0.01;
  StochasticMatrix tp = make_Tprime(P, eps);

  StochasticMatrix t0 = make_T(P, eps, 0.0);
  FixedPointReport pf0 =
      pf_fixed_point(StochasticMatrix(p * t0.entries + (1 - p) * tp.entries), 1e-12, 1L << 40);
  REQUIRE(pf0.converged);
  double closed0 = combined_limit_T_s0(P, P, p, eps);
  CHECK(closed0 == doctest::Approx(0.0718).epsilon(1e-3));
  CHECK(std::abs(pf0.vector[0] - closed0) < 1e-9);

  StochasticMatrix t1 = make_T(P, eps, 1.0);
  FixedPointReport pf1 =
      pf_fixed_point(StochasticMatrix(p * t1.entries + (1 - p) * tp.entries), 1e-12, 1L << 40);
  REQUIRE(pf1.converged);
  double closed1 = combined_limit_T_s1(P, P, p, eps);
  CHECK(std::abs(pf1.vector[0] - closed1) < 1e-9);
  CHECK(closed1 > 0.98);
}

TEST_CASE("two-state sweeps stay within the naive interval") {
  RegionCheckResult equal = two_state_region_check(0.6, 0.6, 0.5, 20);
  CHECK(equal.within_bounds);
  CHECK(equal.observed_min == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(equal.observed_max == doctest::Approx(0.6).epsilon(1e-9));

  RegionCheckResult spread = two_state_region_check(0.9, 0.3, 0.5, 20);
  CHECK(spread.within_bounds);
  CHECK(spread.observed_min > 0.3);
  CHECK(spread.observed_max < 0.9);

  RegionCheckResult corner = two_state_region_check(1.0, 0.0, 0.5, 20);
  CHECK(corner.within_bounds);
}

TEST_SUITE_END();
