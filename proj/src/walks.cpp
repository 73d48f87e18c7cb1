#include "parrondo/walks.hpp"

#include <algorithm>
#include <cmath>

namespace parrondo {

namespace {

Eigen::Matrix2cd theta_block(Complex alpha) {
  double rho = std::sqrt(std::max(0.0, 1.0 - std::norm(alpha)));
  Eigen::Matrix2cd b;
  b << std::conj(alpha), rho,
       rho,              -alpha;
  return b;
}

}  // namespace

Window::Window(int l, int h) : lo(l), hi(h) {
  if (hi < lo) throw ValidationError("window is empty");
}

int Window::index(int pos, Spin s) const {
  if (!contains(pos)) throw ValidationError("position outside window");
  return 2 * (pos - lo) + static_cast<int>(s);
}

VerblunskyConfig::VerblunskyConfig(Kind k, std::map<int, Complex> c)
    : kind(k), coeffs(std::move(c)) {
  for (const auto& [j, a] : coeffs) {
    if (std::abs(a) > 1.0 + 1e-12)
      throw ValidationError("coefficient at index " + std::to_string(j) +
                            " lies outside the unit disk");
    if (kind == Kind::half_line && j < 0)
      throw ValidationError("half-line config has a negative index");
  }
}

Complex VerblunskyConfig::alpha(int j) const {
  auto it = coeffs.find(j);
  return it == coeffs.end() ? Complex(0.0, 0.0) : it->second;
}

int VerblunskyConfig::max_abs_index() const {
  int m = 0;
  for (const auto& [j, a] : coeffs)
    if (std::abs(a) != 0.0) m = std::max(m, std::abs(j));
  return m;
}

WalkState::WalkState(Window w, CVector a) : window(w), amplitudes(std::move(a)) {
  if (amplitudes.size() != window.dim())
    throw ValidationError("amplitude count does not match window");
  if (std::abs(amplitudes.norm() - 1.0) > 1e-10)
    throw ValidationError("walk state is not normalized");
}

WalkState WalkState::basis(const Window& w, int pos, Spin s) {
  CVector a = CVector::Zero(w.dim());
  a[w.index(pos, s)] = 1.0;
  return WalkState(w, std::move(a));
}

Coin::Coin(Eigen::Matrix2cd u, Form f) : U(std::move(u)), form(f) {
  if ((U.adjoint() * U - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("coin is not unitary");
}

WalkOperator::WalkOperator(Window w, std::vector<Eigen::Matrix2cd> position_blocks,
                           std::vector<Eigen::Matrix2cd> straddle_blocks,
                           bool straddle_first, bool half_line)
    : window_(w),
      position_(std::move(position_blocks)),
      straddle_(std::move(straddle_blocks)),
      straddle_first_(straddle_first),
      half_line_(half_line) {
  if (half_line_ && window_.lo != 0)
    throw ValidationError("half-line operator must have window starting at 0");
  if (static_cast<int>(position_.size()) != window_.sites() ||
      static_cast<int>(straddle_.size()) != window_.sites() - 1)
    throw ValidationError("block counts do not match window");
}

void WalkOperator::apply_in_place(WalkState& state) const {
  if (state.window.lo != window_.lo || state.window.hi != window_.hi)
    throw ValidationError("state window does not match operator window");
  CVector& a = state.amplitudes;
  auto apply_position = [&] {
    for (int s = 0; s < window_.sites(); ++s) {
      Eigen::Vector2cd seg = a.segment<2>(2 * s);
      a.segment<2>(2 * s) = position_[s] * seg;
    }
  };
  auto apply_straddle = [&] {
    for (int s = 0; s + 1 < window_.sites(); ++s) {
      Eigen::Vector2cd seg = a.segment<2>(2 * s + 1);
      a.segment<2>(2 * s + 1) = straddle_[s] * seg;
    }
  };
  if (straddle_first_) {
    apply_straddle();
    apply_position();
  } else {
    apply_position();
    apply_straddle();
  }
}

WalkState WalkOperator::apply(WalkState state) const {
  apply_in_place(state);
  return state;
}

CMatrix WalkOperator::dense() const {
  const int d = window_.dim();
  CMatrix pos = CMatrix::Identity(d, d);
  for (int s = 0; s < window_.sites(); ++s) pos.block<2, 2>(2 * s, 2 * s) = position_[s];
  CMatrix str = CMatrix::Identity(d, d);
  for (int s = 0; s + 1 < window_.sites(); ++s)
    str.block<2, 2>(2 * s + 1, 2 * s + 1) = straddle_[s];
  return straddle_first_ ? CMatrix(pos * str) : CMatrix(str * pos);
}

WalkOperator cmv_walk(const VerblunskyConfig& cfg, const Window& w) {
  if (cfg.kind == VerblunskyConfig::Kind::half_line && w.lo != 0)
    throw ValidationError("half-line window must start at 0");
  if (cfg.kind == VerblunskyConfig::Kind::full_line && cfg.max_abs_index() > 0) {
    int need = (cfg.max_abs_index() + 1) / 2;  // coefficient 2j or 2j+1 sits near position j
    if (w.lo > -need - 1 || w.hi < need + 1)
      throw ValidationError("window too small for the set coefficients");
  }
  std::vector<Eigen::Matrix2cd> position, straddle;
  position.reserve(w.sites());
  straddle.reserve(w.sites() - 1);
  for (int j = w.lo; j <= w.hi; ++j) position.push_back(theta_block(cfg.alpha(2 * j)));
  for (int j = w.lo; j < w.hi; ++j) straddle.push_back(theta_block(cfg.alpha(2 * j + 1)));
  return WalkOperator(w, std::move(position), std::move(straddle), true,
                      cfg.kind == VerblunskyConfig::Kind::half_line);
}

CMatrix cmv_matrix(const VerblunskyConfig& cfg, const Window& w) {
  return cmv_walk(cfg, w).dense();
}

WalkOperator coined_walk(const Coin& coin, const Window& w) {
  std::vector<Eigen::Matrix2cd> position(w.sites(), coin.U);
  std::vector<Eigen::Matrix2cd> straddle(w.sites() - 1, theta_block(Complex(0.0, 0.0)));
  return WalkOperator(w, std::move(position), std::move(straddle),
                      coin.form == Coin::Form::first);
}

CMatrix coined_walk_matrix(const Coin& coin, const Window& w) {
  return coined_walk(coin, w).dense();
}

namespace {

// [min, max] positions carrying more than 1e-14 amplitude
std::pair<int, int> support(const WalkState& state) {
  int lo = state.window.hi, hi = state.window.lo;
  for (int pos = state.window.lo; pos <= state.window.hi; ++pos) {
    double mass = std::norm(state.amplitudes[state.window.index(pos, Spin::up)]) +
                  std::norm(state.amplitudes[state.window.index(pos, Spin::down)]);
    if (mass > 1e-28) {
      lo = std::min(lo, pos);
      hi = std::max(hi, pos);
    }
  }
  return {lo, hi};
}

}  // namespace

WalkState evolve(const WalkOperator& op, WalkState state, long n) {
  if (n < 0) throw ValidationError("n must be >= 0");
  auto [slo, shi] = support(state);
  const Window& w = state.window;
  if (!op.half_line() && static_cast<long>(w.lo) > slo - n - 2)
    throw ValidationError("window too small below the initial support");
  if (static_cast<long>(w.hi) < shi + n + 2)
    throw ValidationError("window too small above the initial support");
  for (long k = 0; k < n; ++k) op.apply_in_place(state);

  if (std::abs(state.norm() - 1.0) > 1e-10)
    throw ConvergenceError("evolution lost normalization");
  double edge = 0.0;
  std::vector<int> rim{w.hi - 1, w.hi};
  if (!op.half_line()) {
    rim.push_back(w.lo);
    rim.push_back(w.lo + 1);
  }
  for (int pos : rim) {
    edge = std::max(edge, std::abs(state.amplitudes[w.index(pos, Spin::up)]));
    edge = std::max(edge, std::abs(state.amplitudes[w.index(pos, Spin::down)]));
  }
  if (edge > 1e-12)
    throw ConvergenceError("amplitude leaked into the window boundary");
  return state;
}

double walk_win_prob(const WalkState& state) {
  double sum = 0.0;
  for (int pos = std::max(1, state.window.lo); pos <= state.window.hi; ++pos) {
    sum += std::norm(state.amplitudes[state.window.index(pos, Spin::up)]);
    sum += std::norm(state.amplitudes[state.window.index(pos, Spin::down)]);
  }
  return sum;
}

WalkGameResult walk_geo_game(const WalkOperator& op, const WalkState& psi,
                             const WalkState& xi, long n, double theta) {
  Wavefunction wpsi(psi.amplitudes), wxi(xi.amplitudes);
  Wavefunction gamma = geodesic_point(wpsi, wxi, theta);
  WalkGameResult out;
  out.P_A = walk_win_prob(evolve(op, psi, n));
  out.P_Aprime = walk_win_prob(evolve(op, xi, n));
  out.P_geo = walk_win_prob(evolve(op, WalkState(psi.window, gamma.amplitudes), n));
  return out;
}

BMatrix walk_b_matrix(const WalkOperator& op, const WalkState& psi, const WalkState& xi,
                      long n) {
  Wavefunction wpsi(psi.amplitudes);
  Wavefunction xi_hat = phase_align(wpsi, Wavefunction(xi.amplitudes));
  WalkState psi_n = evolve(op, psi, n);
  WalkState xih_n = evolve(op, WalkState(psi.window, xi_hat.amplitudes), n);

  // project onto positive positions
  auto pplus = [&](const CVector& a) {
    CVector out = CVector::Zero(a.size());
    for (int pos = std::max(1, psi.window.lo); pos <= psi.window.hi; ++pos) {
      out[psi.window.index(pos, Spin::up)] = a[psi.window.index(pos, Spin::up)];
      out[psi.window.index(pos, Spin::down)] = a[psi.window.index(pos, Spin::down)];
    }
    return out;
  };
  CVector pp = pplus(psi_n.amplitudes);
  CVector px = pplus(xih_n.amplitudes);
  Eigen::Matrix2cd B;
  B << inner(pp, psi_n.amplitudes), inner(pp, xih_n.amplitudes),
       inner(px, psi_n.amplitudes), inner(px, xih_n.amplitudes);
  B = 0.5 * (B + B.adjoint().eval());
  return BMatrix(B, dist_round(wpsi, Wavefunction(xi.amplitudes)));
}

std::optional<SymmetryDetection> detect_symmetry_case(const VerblunskyConfig& cfg) {
  if (cfg.kind != VerblunskyConfig::Kind::full_line)
    throw ValidationError("symmetry detection applies to full-line configs");
  const int jmax = cfg.max_abs_index();
  const double tol = 1e-12;

  auto check_conjugate_case = [&](SymmetryCase which, auto relation) -> bool {
    for (int j = 0; j <= jmax; ++j)
      if (!relation(j)) return false;
    (void)which;
    return true;
  };

  // cases iii..vi: direct relations on conjugates, sign depending on parity
  auto near = [&](Complex a, Complex b) { return std::abs(a - b) <= tol; };
  auto case_iii = [&](int j) { return near(cfg.alpha(j), std::conj(cfg.alpha(-j))); };
  auto case_iv = [&](int j) { return near(cfg.alpha(j), -std::conj(cfg.alpha(-j))); };
  auto case_v = [&](int j) {
    return j % 2 == 0 ? near(cfg.alpha(j), std::conj(cfg.alpha(-j)))
                      : near(cfg.alpha(j), -std::conj(cfg.alpha(-j)));
  };
  auto case_vi = [&](int j) {
    return j % 2 == 0 ? near(cfg.alpha(j), -std::conj(cfg.alpha(-j)))
                      : near(cfg.alpha(j), std::conj(cfg.alpha(-j)));
  };

  // cases i and ii: solve omega from the lowest-index pair with both entries
  // nonzero, then verify every index against each admissible root.
  auto try_phase_case = [&](bool case_two) -> std::optional<Complex> {
    auto sign = [&](int j) { return (case_two && j % 2 == 0) ? -1.0 : 1.0; };
    // relation: alpha_j = sign(j) * omega^j * alpha_{-j}
    int j0 = 0;
    for (int j = 1; j <= jmax; ++j) {
      bool aj = std::abs(cfg.alpha(j)) > tol;
      bool amj = std::abs(cfg.alpha(-j)) > tol;
      if (aj != amj) return std::nullopt;  // one side zero, other not
      if (aj && amj) { j0 = j; break; }
    }
    if (case_two && std::abs(cfg.alpha(0)) > tol) return std::nullopt;
    if (j0 == 0) return Complex(1.0, 0.0);  // no constraint on omega
    Complex ratio = cfg.alpha(j0) / cfg.alpha(-j0) * sign(j0);
    if (std::abs(std::abs(ratio) - 1.0) > 1e-9) return std::nullopt;
    ratio /= std::abs(ratio);
    // the j0-th roots of ratio are the omega candidates
    double base_arg = std::arg(ratio) / j0;
    for (int r = 0; r < j0; ++r) {
      Complex omega = std::polar(1.0, base_arg + 2.0 * M_PI * r / j0);
      bool ok = true;
      for (int j = 0; j <= jmax && ok; ++j) {
        Complex expect = sign(j) * std::pow(omega, j) * cfg.alpha(-j);
        ok = std::abs(cfg.alpha(j) - expect) <= 1e-9;
      }
      if (ok) return omega;
    }
    return std::nullopt;
  };

  // A config with no nonzero coefficient satisfies every relation; report it
  // as the phase case with a free omega. The conjugate relations are decided
  // directly and take precedence over the solved-omega cases.
  if (jmax == 0 && std::abs(cfg.alpha(0)) <= tol)
    return SymmetryDetection{SymmetryCase::i, Complex(1.0, 0.0)};
  if (check_conjugate_case(SymmetryCase::iii, case_iii))
    return SymmetryDetection{SymmetryCase::iii};
  if (check_conjugate_case(SymmetryCase::iv, case_iv))
    return SymmetryDetection{SymmetryCase::iv};
  if (check_conjugate_case(SymmetryCase::v, case_v)) return SymmetryDetection{SymmetryCase::v};
  if (check_conjugate_case(SymmetryCase::vi, case_vi))
    return SymmetryDetection{SymmetryCase::vi};
  if (auto omega = try_phase_case(false)) return SymmetryDetection{SymmetryCase::i, *omega};
  if (auto omega = try_phase_case(true)) return SymmetryDetection{SymmetryCase::ii, *omega};
  return std::nullopt;
}

double konno_sum_check(const Coin& coin, long n) {
  if (coin.form != Coin::Form::second)
    throw ValidationError("the sum check expects the second coined form");
  double a_mod = std::abs(coin.U(0, 1));
  if (a_mod < 1e-12 || a_mod > 1.0 - 1e-12)
    throw ValidationError("degenerate coin: |a| must lie strictly between 0 and 1");
  Window w(-static_cast<int>(n) - 2, static_cast<int>(n) + 2);
  WalkOperator op = coined_walk(coin, w);
  WalkState up = evolve(op, WalkState::basis(w, 0, Spin::up), n);
  WalkState down = evolve(op, WalkState::basis(w, 0, Spin::down), n);
  return walk_win_prob(up) + walk_win_prob(down);
}

namespace {

// integral of -sin k / sqrt(1 + cos^2 k) against Normal(a, s^2), clipped to
// (-pi/2, 0); composite Simpson is plenty for these smooth integrands
double averaged_konno_density(double a, double s) {
  double lo = std::max(-M_PI_2, a - 10.0 * s);
  double hi = std::min(0.0, a + 10.0 * s);
  if (hi <= lo) return 0.0;
  const int n = 400;  // even
  double h = (hi - lo) / n;
  auto f = [&](double k) {
    double dens = std::exp(-(k - a) * (k - a) / (2.0 * s * s)) / std::sqrt(2.0 * M_PI * s * s);
    return -std::sin(k) / std::sqrt(1.0 + std::cos(k) * std::cos(k)) * dens;
  };
  double acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) acc += f(lo + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

double solve_momentum_a(double sigma2) {
  if (sigma2 <= 0.0) throw ValidationError("sigma2 must be positive");
  double lo = -M_PI_2 + 1e-9, hi = -1e-9;
  double flo = averaged_konno_density(lo, sigma2) - 1.0 / 3.0;
  double fhi = averaged_konno_density(hi, sigma2) - 1.0 / 3.0;
  if (flo * fhi > 0.0) throw ConvergenceError("momentum root not bracketed");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = averaged_konno_density(mid, sigma2) - 1.0 / 3.0;
    if (std::abs(fm) < 1e-14 || hi - lo < 1e-14) return mid;
    if (flo * fm <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

GaussianWalkGame example_934_game(double eps, double sigma1, double sigma2, long n) {
  if (eps <= 0.0 || sigma1 <= 0.0 || sigma2 <= 0.0)
    throw ValidationError("eps and widths must be positive");
  if (n < 1) throw ValidationError("n must be >= 1");

  GaussianWalkGame out;
  out.momentum_a = solve_momentum_a(sigma2);

  const int half = static_cast<int>(n) + 2;
  Window w(-half, half);
  const double k_phi = M_PI_2 - eps;
  const double norm1 = std::pow(2.0 * sigma1 * sigma1 / M_PI, 0.25);
  const double norm2 = std::pow(2.0 * sigma2 * sigma2 / M_PI, 0.25);

  CVector phi = CVector::Zero(w.dim()), zeta = CVector::Zero(w.dim());
  const Complex spin_up(0.0, 1.0);   // spinor (i, 1) before normalization
  const Complex spin_down(1.0, 0.0);
  for (int j = w.lo; j <= w.hi; ++j) {
    double jj = static_cast<double>(j);
    Complex phi_j = norm1 * std::exp(Complex(-sigma1 * sigma1 * jj * jj, k_phi * jj));
    Complex zeta_j = norm2 * std::exp(Complex(-sigma2 * sigma2 * jj * jj, out.momentum_a * jj));
    phi[w.index(j, Spin::up)] = phi_j * spin_up;
    phi[w.index(j, Spin::down)] = phi_j * spin_down;
    zeta[w.index(j, Spin::up)] = zeta_j * spin_up;
    zeta[w.index(j, Spin::down)] = zeta_j * spin_down;
  }
  CVector psi = 0.5 * (zeta + phi);
  CVector xi = 0.5 * (zeta - phi);
  out.overlap = std::abs(psi.dot(xi)) / (psi.norm() * xi.norm());
  psi.normalize();
  xi.normalize();

  Coin coin((Eigen::Matrix2cd() << 1, 1, -1, 1).finished() / std::sqrt(2.0),
            Coin::Form::second);
  WalkOperator op = coined_walk(coin, w);
  WalkState spsi(w, psi), sxi(w, xi);
  double delta = dist_round(Wavefunction(psi), Wavefunction(xi));
  out.triple = walk_geo_game(op, spsi, sxi, n, delta / 2.0);
  return out;
}

}  // namespace parrondo
