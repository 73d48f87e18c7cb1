#pragma once

#include <cstdint>
#include <random>

#include "parrondo/linalg.hpp"

namespace parrondo {

// Unit vector in a finite-dimensional Hilbert space. Inner products follow
// the convention <a,b> = sum_i a_i * conj(b_i) (linear in the first slot).
struct Wavefunction {
  CVector amplitudes;

  Wavefunction() = default;
  explicit Wavefunction(CVector a);
  int dim() const { return static_cast<int>(amplitudes.size()); }
};

inline Complex inner(const CVector& a, const CVector& b) { return b.dot(a); }

// Hermitian eta with 0 <= eta <= I.
struct EffectOperator {
  CMatrix entries;

  explicit EffectOperator(CMatrix m);
  int dim() const { return static_cast<int>(entries.rows()); }
};

// 2x2 Hermitian matrix of signal expectations on the two endpoints plus the
// separation delta = dist_round; constrained to 0 <= B <= [[1, cos d],[cos d, 1]].
struct BMatrix {
  Eigen::Matrix2cd B;
  double delta = 0.0;

  BMatrix() = default;
  BMatrix(Eigen::Matrix2cd b, double d);
};

// arccos |<psi, xi>|, in [0, pi/2].
double dist_round(const Wavefunction& psi, const Wavefunction& xi);
// 2 sqrt(1 - |<psi, xi>|^2), in [0, 2].
double dist_trace(const Wavefunction& psi, const Wavefunction& xi);

// Rotates xi by a phase so that <psi, xi_hat> is real and nonnegative.
// Orthogonal endpoints (|<psi,xi>| below 1e-14) return xi unchanged.
Wavefunction phase_align(const Wavefunction& psi, const Wavefunction& xi);

// Point at arclength theta on the minimizing great-circle arc from [psi]
// toward [xi]; theta in [0, dist_round]. Phase-equivalent endpoints rejected.
Wavefunction geodesic_point(const Wavefunction& psi, const Wavefunction& xi, double theta);

BMatrix build_B(const EffectOperator& eta, const Wavefunction& psi, const Wavefunction& xi);

// Win probability at arclength theta for the game encoded by B:
// [sin(d-theta), sin theta] B [sin(d-theta), sin theta]^T / sin^2 d.
double geo_prob(const BMatrix& b, double theta);

// Exact reachable interval for the one-round game:
// [max{0, P_A + P_Aprime - 1}, min{P_A + P_Aprime, 1}].
std::pair<double, double> geo_bounds(double P_A, double P_Aprime);

enum class Extreme { min, max };

struct ExtremeConstruction {
  BMatrix B;
  double delta0 = 0.0;
  double theta0 = 0.0;
  double value = 0.0;
};

// Explicit (B, delta0, theta0) achieving geo_bounds' endpoint for
// P_A, P_Aprime in (0,1).
ExtremeConstruction achieve_extreme(double P_A, double P_Aprime, Extreme which);

// True when tr C <= 1 (+1e-12): the paradox cannot occur on that span.
// C must be Hermitian 2x2 with eigenvalues in [0,1].
bool no_paradox_check(const Eigen::Matrix2cd& C);

// Random effect operator W diag(uniform[0,1]) W^dagger with W from the QR of
// a Gaussian matrix. Test/verify helper.
EffectOperator random_effect(int dim, std::mt19937_64& rng);
Wavefunction random_wavefunction(int dim, std::mt19937_64& rng);

}  // namespace parrondo
