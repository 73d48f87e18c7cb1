#include "parrondo/geodesic.hpp"

#include <algorithm>
#include <cmath>

namespace parrondo {

namespace {
constexpr double kOrthoTol = 1e-14;

void check_effect_interval(const CMatrix& m, const char* what) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol || es.eigenvalues().maxCoeff() > 1.0 + kPsdTol)
    throw ValidationError(std::string(what) + " has eigenvalues outside [0,1]");
}
}  // namespace

Wavefunction::Wavefunction(CVector a) : amplitudes(std::move(a)) {
  if (amplitudes.size() == 0) throw ValidationError("wavefunction is empty");
  if (std::abs(amplitudes.norm() - 1.0) > 1e-12)
    throw ValidationError("wavefunction is not normalized");
}

EffectOperator::EffectOperator(CMatrix m) : entries(std::move(m)) {
  if (entries.rows() != entries.cols() || entries.rows() == 0)
    throw ValidationError("effect operator must be square and nonempty");
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw ValidationError("effect operator is not Hermitian");
  check_effect_interval(entries, "effect operator");
}

BMatrix::BMatrix(Eigen::Matrix2cd b, double d) : B(std::move(b)), delta(d) {
  if (delta < 0.0 || delta > M_PI_2 + 1e-12)
    throw ValidationError("delta must lie in [0, pi/2]");
  if ((B - B.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("B is not Hermitian");
  Eigen::Matrix2cd upper;
  upper << 1.0, std::cos(delta), std::cos(delta), 1.0;
  check_effect_interval(B, "B");
  check_effect_interval(upper - B, "upper bound minus B");
}

double dist_round(const Wavefunction& psi, const Wavefunction& xi) {
  if (psi.dim() != xi.dim()) throw ValidationError("dimension mismatch");
  double c = std::min(1.0, std::abs(inner(psi.amplitudes, xi.amplitudes)));
  return std::acos(c);
}

double dist_trace(const Wavefunction& psi, const Wavefunction& xi) {
  if (psi.dim() != xi.dim()) throw ValidationError("dimension mismatch");
  double c = std::min(1.0, std::abs(inner(psi.amplitudes, xi.amplitudes)));
  return 2.0 * std::sqrt(1.0 - c * c);
}

Wavefunction phase_align(const Wavefunction& psi, const Wavefunction& xi) {
  if (psi.dim() != xi.dim()) throw ValidationError("dimension mismatch");
  Complex ip = inner(psi.amplitudes, xi.amplitudes);
  if (std::abs(ip) < kOrthoTol) return xi;
  return Wavefunction(CVector(ip / std::abs(ip) * xi.amplitudes));
}

Wavefunction geodesic_point(const Wavefunction& psi, const Wavefunction& xi, double theta) {
  double delta = dist_round(psi, xi);
  if (delta < 1e-12)
    throw ValidationError("geodesic endpoints are phase-equivalent");
  if (theta < -1e-15 || theta > delta + 1e-12)
    throw ValidationError("theta outside [0, dist_round]");
  Wavefunction xi_hat = phase_align(psi, xi);
  CVector perp =
      xi_hat.amplitudes - inner(xi_hat.amplitudes, psi.amplitudes) * psi.amplitudes;
  perp.normalize();
  CVector point = std::cos(theta) * psi.amplitudes + std::sin(theta) * perp;
  point.normalize();
  return Wavefunction(std::move(point));
}

BMatrix build_B(const EffectOperator& eta, const Wavefunction& psi, const Wavefunction& xi) {
  if (eta.dim() != psi.dim() || psi.dim() != xi.dim())
    throw ValidationError("dimension mismatch");
  Wavefunction xi_hat = phase_align(psi, xi);
  const CVector& ps = psi.amplitudes;
  const CVector& xh = xi_hat.amplitudes;
  CVector eta_psi = eta.entries * ps;
  CVector eta_xih = eta.entries * xh;
  Eigen::Matrix2cd B;
  B << inner(eta_psi, ps), inner(eta_psi, xh),
       inner(eta_xih, ps), inner(eta_xih, xh);
  return BMatrix(B, dist_round(psi, xi));
}

double geo_prob(const BMatrix& b, double theta) {
  if (b.delta <= 0.0) throw ValidationError("geo_prob requires delta > 0");
  if (theta < -1e-15 || theta > b.delta + 1e-12)
    throw ValidationError("theta outside [0, delta]");
  Eigen::Vector2cd w;
  w << std::sin(b.delta - theta), std::sin(theta);
  Complex val = (w.adjoint() * b.B * w)(0);
  double s = std::sin(b.delta);
  double prob = val.real() / (s * s);
  return std::clamp(prob, 0.0, 1.0);
}

std::pair<double, double> geo_bounds(double P_A, double P_Aprime) {
  if (P_A < 0.0 || P_A > 1.0 || P_Aprime < 0.0 || P_Aprime > 1.0)
    throw ValidationError("win probabilities must be in [0,1]");
  return {std::max(0.0, P_A + P_Aprime - 1.0), std::min(P_A + P_Aprime, 1.0)};
}

ExtremeConstruction achieve_extreme(double P_A, double P_Aprime, Extreme which) {
  if (P_A <= 0.0 || P_A >= 1.0 || P_Aprime <= 0.0 || P_Aprime >= 1.0)
    throw ValidationError("achieve_extreme requires probabilities strictly inside (0,1)");
  const double b11 = P_A, b22 = P_Aprime;
  ExtremeConstruction out;
  double delta0, theta0, off;
  if (which == Extreme::max) {
    // rank-one B with positive off-diagonal
    off = std::sqrt(b11 * b22);
    if (b11 + b22 <= 1.0) {
      delta0 = M_PI_2;
      theta0 = std::asin(std::sqrt(b22 / (b11 + b22)));
    } else {
      delta0 = std::acos(std::sqrt(b11 * b22) - std::sqrt((1.0 - b11) * (1.0 - b22)));
      theta0 = std::asin(std::sqrt(1.0 - b11));
    }
  } else {
    // complement-rank-one B with negative square-root off-diagonal
    if (b11 + b22 <= 1.0) {
      delta0 = std::acos(std::sqrt((1.0 - b11) * (1.0 - b22)) - std::sqrt(b11 * b22));
      theta0 = std::asin(std::sqrt(b11));
    } else {
      delta0 = M_PI_2;
      theta0 = std::asin(std::sqrt((1.0 - b22) / (2.0 - b11 - b22)));
    }
    off = std::cos(delta0) - std::sqrt((1.0 - b11) * (1.0 - b22));
  }
  Eigen::Matrix2cd B;
  B << b11, off, off, b22;
  out.B = BMatrix(B, delta0);
  out.delta0 = delta0;
  out.theta0 = theta0;
  out.value = geo_prob(out.B, theta0);
  return out;
}

bool no_paradox_check(const Eigen::Matrix2cd& C) {
  if ((C - C.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("restriction matrix is not Hermitian");
  check_effect_interval(C, "restriction matrix");
  return C.trace().real() <= 1.0 + 1e-12;
}

EffectOperator random_effect(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  CMatrix G(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) G(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMatrix> qr(G);
  CMatrix W = qr.householderQ();
  CVector diag(dim);
  for (int i = 0; i < dim; ++i) diag[i] = unif(rng);
  CMatrix eta = W * diag.asDiagonal() * W.adjoint();
  eta = 0.5 * (eta + eta.adjoint().eval());
  return EffectOperator(std::move(eta));
}

Wavefunction random_wavefunction(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = Complex(gauss(rng), gauss(rng));
  v.normalize();
  return Wavefunction(std::move(v));
}

}  // namespace parrondo
