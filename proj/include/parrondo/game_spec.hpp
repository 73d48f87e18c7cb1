#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "parrondo/classical.hpp"
#include "parrondo/geodesic.hpp"
#include "parrondo/hidden.hpp"
#include "parrondo/quantum.hpp"
#include "parrondo/walks.hpp"

namespace parrondo {

// Thrown on malformed or schema-violating game spec files. `where` is a JSON
// pointer (or byte position for parse errors) anchoring the message.
class SpecError : public std::runtime_error {
 public:
  SpecError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what) {}
};

struct ClassicalSpec {
  ClassicalGame game;
};

struct HiddenSpec {
  HiddenPinceNez pince_nez;
  ProbVector initial;
};

struct QuantumSpec {
  QuantumPinceNez pince_nez;
  DensityMatrix rho0;
};

struct GeodesicSpec {
  EffectOperator eta;
  Wavefunction psi;
  Wavefunction xi;
  double theta = 0.0;
};

struct WalkSpec {
  std::variant<VerblunskyConfig, Coin> walk;
  std::optional<Window> window;  // sized from n when absent
  // sparse initial state: (position, spin, amplitude)
  std::vector<std::tuple<int, Spin, Complex>> initial;
};

struct GameSpec {
  std::variant<ClassicalSpec, HiddenSpec, QuantumSpec, GeodesicSpec, WalkSpec> payload;
  std::optional<long> n;
  std::optional<double> p;
  std::optional<std::uint64_t> seed;

  const char* model_name() const;
};

// Parses and validates a spec document; unknown keys are rejected.
GameSpec parse_game_spec(const std::string& json_text);
GameSpec load_game_spec(const std::string& path);

}  // namespace parrondo
