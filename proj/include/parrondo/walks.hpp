#pragma once

#include <map>
#include <optional>
#include <vector>

#include "parrondo/geodesic.hpp"
#include "parrondo/linalg.hpp"

namespace parrondo {

enum class Spin { up = 0, down = 1 };

// Position window [lo, hi]; amplitudes are indexed position-major with the
// up component before the down one: ..., j up, j down, (j+1) up, ...
struct Window {
  int lo = 0;
  int hi = 0;

  Window() = default;
  Window(int l, int h);
  int sites() const { return hi - lo + 1; }
  int dim() const { return 2 * sites(); }
  bool contains(int pos) const { return pos >= lo && pos <= hi; }
  int index(int pos, Spin s) const;
};

// Complex coefficients in the closed unit disk, indexed by integers
// (half-line: indices >= 0); unspecified indices default to zero.
struct VerblunskyConfig {
  enum class Kind { half_line, full_line };
  Kind kind = Kind::full_line;
  std::map<int, Complex> coeffs;

  VerblunskyConfig() = default;
  VerblunskyConfig(Kind k, std::map<int, Complex> c);
  Complex alpha(int j) const;
  int max_abs_index() const;
};

struct WalkState {
  Window window;
  CVector amplitudes;

  WalkState() = default;
  WalkState(Window w, CVector a);
  static WalkState basis(const Window& w, int pos, Spin s);
  double norm() const { return amplitudes.norm(); }
};

struct Coin {
  Eigen::Matrix2cd U;
  enum class Form { first, second };
  Form form = Form::second;

  Coin() = default;
  Coin(Eigen::Matrix2cd u, Form f);
};

// One-step walk unitary factored into a position-block factor (2x2 blocks on
// (j up, j down)) and a straddling factor (2x2 blocks on (j down, (j+1) up),
// identity at the window ends). The order of the two factors depends on the
// construction.
class WalkOperator {
 public:
  WalkOperator(Window w, std::vector<Eigen::Matrix2cd> position_blocks,
               std::vector<Eigen::Matrix2cd> straddle_blocks, bool straddle_first,
               bool half_line = false);

  const Window& window() const { return window_; }
  bool half_line() const { return half_line_; }
  void apply_in_place(WalkState& state) const;
  WalkState apply(WalkState state) const;
  CMatrix dense() const;

 private:
  Window window_;
  std::vector<Eigen::Matrix2cd> position_;  // one per site
  std::vector<Eigen::Matrix2cd> straddle_;  // one per adjacent pair
  bool straddle_first_;
  bool half_line_;
};

// Walk unitary from Verblunsky coefficients: position blocks carry the even
// coefficients, straddling blocks the odd ones. Half-line windows must start
// at zero; the window must contain every explicitly set index.
WalkOperator cmv_walk(const VerblunskyConfig& cfg, const Window& w);
// Dense matrix of the same operator.
CMatrix cmv_matrix(const VerblunskyConfig& cfg, const Window& w);

// Coined walk: the coin on every position block and pure swaps straddling.
// First form applies the shift before the coin, second form after.
WalkOperator coined_walk(const Coin& coin, const Window& w);
CMatrix coined_walk_matrix(const Coin& coin, const Window& w);

// Applies the walk n times. Requires the window to exceed the initial
// support by n+2 on each side; throws if amplitude leaks into the outermost
// two sites beyond 1e-12.
WalkState evolve(const WalkOperator& op, WalkState state, long n);

// Weight on positions with positive index.
double walk_win_prob(const WalkState& state);

struct WalkGameResult {
  double P_A = 0.0;
  double P_Aprime = 0.0;
  double P_geo = 0.0;
};

// One-round geodesic game on walks: evolve psi, xi, and the geodesic point
// at arclength theta for n steps and report the positive-side weights.
WalkGameResult walk_geo_game(const WalkOperator& op, const WalkState& psi,
                             const WalkState& xi, long n, double theta);

// The 2x2 signal matrix of the same game computed from the evolved endpoint
// states; geo_prob of this matrix reproduces P_geo.
BMatrix walk_b_matrix(const WalkOperator& op, const WalkState& psi, const WalkState& xi,
                      long n);

enum class SymmetryCase { i, ii, iii, iv, v, vi };

struct SymmetryDetection {
  SymmetryCase which;
  Complex omega{1.0, 0.0};  // meaningful for cases i and ii
};

// Checks the six paradox-excluding coefficient symmetries on a full-line
// config with finitely many nonzero entries; returns the first match.
std::optional<SymmetryDetection> detect_symmetry_case(const VerblunskyConfig& cfg);

// P+(U^n eta_{0 up}) + P+(U^n eta_{0 down}) for a constant-coin walk in the
// second form; tends to 1 as n grows when the coin entry a = U(0,1) has
// modulus strictly between 0 and 1.
double konno_sum_check(const Coin& coin, long n);

struct GaussianWalkGame {
  WalkGameResult triple;
  double momentum_a = 0.0;   // solved from the quadrature condition
  double overlap = 0.0;      // |<psi, xi>| before evolution
};

// Wavepacket game: Gaussian envelopes with widths sigma1, sigma2 and momenta
// pi/2 - eps and a (root of the Konno-density integral equalling 1/3),
// spinor (i, 1)/sqrt(2), constant coin [[1,1],[-1,1]]/sqrt(2) in the second
// form, window of 2(n+2)+1 sites.
GaussianWalkGame example_934_game(double eps, double sigma1, double sigma2, long n);

// Root of the averaged Konno density equalling 1/3 for the given width.
double solve_momentum_a(double sigma2);

}  // namespace parrondo
