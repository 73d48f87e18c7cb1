#include <doctest.h>

#include "parrondo/game_spec.hpp"

using namespace parrondo;

TEST_SUITE_BEGIN("gamespec");

TEST_CASE("classical spec round trip") {
  const char* text = R"({
    "model": "classical",
    "transition": [[0.8666666666666667, 0.2], [0.13333333333333333, 0.8]],
    "win_states": [0],
    "initial": [0.5, 0.5],
    "n": 10
  })";
  GameSpec spec = parse_game_spec(text);
  CHECK(std::string(spec.model_name()) == "classical");
  REQUIRE(spec.n.has_value());
  CHECK(*spec.n == 10);
  const auto& game = std::get<ClassicalSpec>(spec.payload).game;
  CHECK(game.dim() == 2);
  CHECK(classical_win_prob(game, 10000) == doctest::Approx(0.6).epsilon(1e-8));
}

TEST_CASE("quantum spec with complex pairs") {
  const char* text = R"({
    "model": "quantum",
    "kraus_A": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]]],
    "kraus_Atilde": [[[[0, 0], [0, 0]], [[0, 0], [1, 0]]]],
    "rho0": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]
  })";
  GameSpec spec = parse_game_spec(text);
  const auto& q = std::get<QuantumSpec>(spec.payload);
  CHECK(quantum_win_prob(q.pince_nez, q.rho0, 3) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("walk spec with sparse initial state") {
  const char* text = R"({
    "model": "walk",
    "walk": {"kind": "cmv", "line": "full", "coeffs": {"-1": [0.5773502691896258, 0]}},
    "initial": [
      {"position": 0, "spin": "up", "amp": [0.7071067811865476, 0]},
      {"position": 0, "spin": "down", "amp": [0.7071067811865476, 0]}
    ],
    "n": 5
  })";
  GameSpec spec = parse_game_spec(text);
  const auto& wspec = std::get<WalkSpec>(spec.payload);
  CHECK(std::holds_alternative<VerblunskyConfig>(wspec.walk));
  CHECK(wspec.initial.size() == 2);
}

TEST_CASE("geodesic spec") {
  const char* text = R"({
    "model": "geodesic",
    "eta": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
    "psi": [[1, 0], [0, 0]],
    "xi": [[0, 0], [1, 0]],
    "theta": 0.5
  })";
  GameSpec spec = parse_game_spec(text);
  CHECK(std::get<GeodesicSpec>(spec.payload).theta == 0.5);
}

TEST_CASE("schema violations carry anchored messages") {
  CHECK_THROWS_AS(parse_game_spec("not json"), SpecError);
  CHECK_THROWS_AS(parse_game_spec(R"({"model": "sudoku"})"), SpecError);
  CHECK_THROWS_WITH_AS(parse_game_spec(R"({
    "model": "classical",
    "transition": [[1, 0], [0, 1]],
    "win_states": [0],
    "initial": [0.5, 0.5],
    "extra": 1
  })"),
                       doctest::Contains("extra"), SpecError);
  // malformed JSON carries the byte position
  CHECK_THROWS_WITH_AS(parse_game_spec(R"({"model": "classical",)"),
                       doctest::Contains("byte"), SpecError);
  // stochastic violation is rejected with the column named
  CHECK_THROWS_WITH_AS(parse_game_spec(R"({
    "model": "classical",
    "transition": [[0.9, 0.0], [0.2, 1.0]],
    "win_states": [0],
    "initial": [0.5, 0.5]
  })"),
                       doctest::Contains("column"), SpecError);
}

TEST_CASE("hidden spec validates the branch sum") {
  const char* bad = R"({
    "model": "hidden",
    "branch_A": [[0.5, 0.0], [0.0, 0.5]],
    "branch_Atilde": [[0.1, 0.0], [0.0, 0.1]],
    "initial": [1.0, 0.0]
  })";
  CHECK_THROWS_AS(parse_game_spec(bad), SpecError);
}

TEST_SUITE_END();
