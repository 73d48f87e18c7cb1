#include "parrondo/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "parrondo/threading.hpp"

namespace parrondo {

namespace {

const Eigen::Vector4cd kE4 = (Eigen::Vector4cd() << 0, 0, 0, 1).finished();

CMatrix kraus_sum(const std::vector<CMatrix>& ops, const CMatrix& rho) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const CMatrix& k : ops) out += k * rho * k.adjoint();
  return out;
}

// row-major flatten/unflatten shared with the superoperator convention
CVector flatten(const CMatrix& m) {
  CVector v(m.rows() * m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) v[r * m.cols() + c] = m(r, c);
  return v;
}

CMatrix unflatten(const CVector& v, int dim) {
  CMatrix m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) m(r, c) = v[r * dim + c];
  return m;
}

}  // namespace

QuantumPinceNez::QuantumPinceNez(std::vector<CMatrix> a, std::vector<CMatrix> at)
    : kraus_A(std::move(a)), kraus_Atilde(std::move(at)) {
  if (kraus_A.empty() && kraus_Atilde.empty())
    throw ValidationError("pince-nez needs at least one Kraus operator");
  const int d = dim();
  CMatrix total = CMatrix::Zero(d, d);
  for (const auto* list : {&kraus_A, &kraus_Atilde}) {
    for (const CMatrix& k : *list) {
      if (k.rows() != d || k.cols() != d)
        throw ValidationError("Kraus operators must be square with equal dimension");
      total += k.adjoint() * k;
    }
  }
  if ((total - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("combined channel is not trace-preserving");
}

CMatrix QuantumPinceNez::apply_branch_A(const CMatrix& rho) const {
  return kraus_sum(kraus_A, rho);
}

CMatrix QuantumPinceNez::apply_branch_Atilde(const CMatrix& rho) const {
  return kraus_sum(kraus_Atilde, rho);
}

CMatrix QuantumPinceNez::apply_round(const CMatrix& rho) const {
  return apply_branch_A(rho) + apply_branch_Atilde(rho);
}

std::pair<CMatrix, CMatrix> apply_pince_nez(const QuantumPinceNez& pn,
                                            const DensityMatrix& rho) {
  if (pn.dim() != rho.dim()) throw ValidationError("dimension mismatch");
  return {pn.apply_branch_A(rho.entries), pn.apply_branch_Atilde(rho.entries)};
}

double quantum_win_prob(const QuantumPinceNez& pn, const DensityMatrix& rho0, long n) {
  if (n < 1) throw ValidationError("n must be >= 1");
  if (pn.dim() != rho0.dim()) throw ValidationError("dimension mismatch");
  const int d = pn.dim();
  CMatrix S = channel_superoperator([&](const CMatrix& r) { return pn.apply_round(r); }, d);
  CVector state = flatten(rho0.entries);
  long k = n - 1;
  CMatrix base = S;
  while (k > 0) {
    if (k & 1) state = base * state;
    k >>= 1;
    if (k) base = base * base;
  }
  return pn.apply_branch_A(unflatten(state, d)).trace().real();
}

QuantumPinceNez combine_quantum(const QuantumPinceNez& pn, const QuantumPinceNez& pnp,
                                double p) {
  if (pn.dim() != pnp.dim()) throw ValidationError("pince-nez dimensions differ");
  if (p < 0.0 || p > 1.0) throw ValidationError("p must be in [0,1]");
  const double sp = std::sqrt(p), sq = std::sqrt(1.0 - p);
  std::vector<CMatrix> a, at;
  for (const CMatrix& k : pn.kraus_A) a.push_back(sp * k);
  for (const CMatrix& k : pnp.kraus_A) a.push_back(sq * k);
  for (const CMatrix& k : pn.kraus_Atilde) at.push_back(sp * k);
  for (const CMatrix& k : pnp.kraus_Atilde) at.push_back(sq * k);
  return QuantumPinceNez(std::move(a), std::move(at));
}

ExtremalParams::ExtremalParams(Eigen::Vector4cd uu, Eigen::Vector4cd vv)
    : u(std::move(uu)), v(std::move(vv)) {
  if (std::abs(u.norm() - 1.0) > 1e-10 || std::abs(v.norm() - 1.0) > 1e-10)
    throw ValidationError("u and v must be unit vectors");
  if (std::abs(u.dot(v)) > 1e-10)
    throw ValidationError("u and v must be orthogonal");
}

CMatrix ExtremalParams::kraus_J() const {
  CMatrix j(2, 2);
  j << u[0], v[0], u[1], v[1];
  return j;
}

CMatrix ExtremalParams::kraus_K() const {
  CMatrix k(2, 2);
  k << u[2], v[2], u[3], v[3];
  return k;
}

WMPair build_wM(const ExtremalParams& params) {
  const Eigen::Matrix2cd J = params.kraus_J();
  const Eigen::Matrix2cd K = params.kraus_K();
  WMPair out;
  // Superoperator of rho -> J rho J^+ + K rho K^+ in row-major vectorization:
  // S[(r,c),(j,k)] = J(r,j) conj(J(c,k)) + K(r,j) conj(K(c,k)).
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          out.M(2 * r + c, 2 * j + k) = J(r, j) * std::conj(J(c, k)) +
                                        K(r, j) * std::conj(K(c, k));
  out.M -= Eigen::Matrix4cd::Identity();
  out.M.row(3) << 1, 0, 0, 1;
  // w[(j,k)] = tr(J E_jk J^+) = sum_r J(r,j) conj(J(r,k))
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k)
      out.w[2 * j + k] =
          J(0, j) * std::conj(J(0, k)) + J(1, j) * std::conj(J(1, k));
  return out;
}

namespace {

// Solves M x = e4; nullopt when M is singular (no unique fixed point).
std::optional<Eigen::Vector4cd> solve_fixed_point(const Eigen::Matrix4cd& M) {
  Eigen::PartialPivLU<Eigen::Matrix4cd> lu(M);
  if (std::abs(lu.determinant()) < 1e-10) return std::nullopt;
  Eigen::Vector4cd x = lu.solve(kE4);
  if ((M * x - kE4).cwiseAbs().maxCoeff() > 1e-8) return std::nullopt;
  return x;
}

}  // namespace

QuantumPinceNez extremal_pince_nez(const ExtremalParams& params, bool require_qpf) {
  if (require_qpf) {
    WMPair wm = build_wM(params);
    if (!solve_fixed_point(wm.M))
      throw ConvergenceError("extremal parameters give a channel without a unique fixed point");
  }
  return QuantumPinceNez({params.kraus_J()}, {params.kraus_K()});
}

double quantum_limit_via_wM(const ExtremalParams& params) {
  WMPair wm = build_wM(params);
  auto x = solve_fixed_point(wm.M);
  if (!x) throw ConvergenceError("fixed-point system is singular");
  Complex value = wm.w * (*x);
  if (std::abs(value.imag()) > 1e-9)
    throw ConvergenceError("limit has a non-negligible imaginary part");
  return value.real();
}

double quantum_combined_limit(const ExtremalParams& a, const ExtremalParams& b, double p) {
  WMPair wa = build_wM(a), wb = build_wM(b);
  Eigen::Matrix4cd M = p * wa.M + (1.0 - p) * wb.M;
  auto x = solve_fixed_point(M);
  if (!x) throw ConvergenceError("combined fixed-point system is singular");
  Complex value = (p * wa.w + (1.0 - p) * wb.w) * (*x);
  return value.real();
}

// ---------------------------------------------------------------------------
// Region optimizer
// ---------------------------------------------------------------------------

namespace {

// Maps a raw parameter block to (u, v) on the constraint manifold:
// normalize u, project v against u, normalize. Returns nullopt for
// degenerate blocks.
std::optional<ExtremalParams> params_from_raw(const double* x, bool complex_mode) {
  Eigen::Vector4cd u, v;
  if (complex_mode) {
    for (int i = 0; i < 4; ++i) {
      u[i] = Complex(x[2 * i], x[2 * i + 1]);
      v[i] = Complex(x[8 + 2 * i], x[9 + 2 * i]);
    }
  } else {
    for (int i = 0; i < 4; ++i) {
      u[i] = x[i];
      v[i] = x[4 + i];
    }
  }
  double nu = u.norm();
  if (nu < 1e-10) return std::nullopt;
  u /= nu;
  v -= u.dot(v) * u;
  double nv = v.norm();
  if (nv < 1e-10) return std::nullopt;
  v /= nv;
  return ExtremalParams(u, v);
}

struct EvaluatedPoint {
  double objective = 0.0;     // combined limit (sign-adjusted for maximize)
  double constraint = 1e9;    // max |individual limit - target|
  bool valid = false;
};

struct RegionProblem {
  double p, P_A, P_Aprime;
  bool complex_mode;
  bool maximize;
  int block;  // raw parameters per game

  int dim() const { return 2 * block; }

  EvaluatedPoint evaluate(const std::vector<double>& x) const {
    EvaluatedPoint out;
    auto pa = params_from_raw(x.data(), complex_mode);
    auto pb = params_from_raw(x.data() + block, complex_mode);
    if (!pa || !pb) return out;
    WMPair wa = build_wM(*pa), wb = build_wM(*pb);
    auto xa = solve_fixed_point(wa.M);
    auto xb = solve_fixed_point(wb.M);
    if (!xa || !xb) return out;
    double lim_a = (wa.w * (*xa)).real();
    double lim_b = (wb.w * (*xb)).real();
    Eigen::Matrix4cd Mc = p * wa.M + (1.0 - p) * wb.M;
    auto xc = solve_fixed_point(Mc);
    if (!xc) return out;
    double comb = ((p * wa.w + (1.0 - p) * wb.w) * (*xc)).real();
    out.objective = maximize ? -comb : comb;
    out.constraint = std::max(std::abs(lim_a - P_A), std::abs(lim_b - P_Aprime));
    out.valid = true;
    return out;
  }

  double penalized(const std::vector<double>& x, double mu) const {
    EvaluatedPoint e = evaluate(x);
    if (!e.valid) return 1e9;
    return e.objective + mu * e.constraint * e.constraint;
  }
};

// Plain Nelder-Mead simplex; good enough for the smooth low-dimensional
// penalized objectives used here.
void nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                 std::vector<double>& x, int max_iter, double step = 0.25) {
  const int n = static_cast<int>(x.size());
  std::vector<std::vector<double>> simplex(n + 1, x);
  std::vector<double> fx(n + 1);
  for (int i = 0; i < n; ++i) simplex[i + 1][i] += step;
  for (int i = 0; i <= n; ++i) fx[i] = f(simplex[i]);

  std::vector<int> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  for (int iter = 0; iter < max_iter; ++iter) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    int best = order[0], worst = order[n], second = order[n - 1];
    if (fx[worst] - fx[best] < 1e-13) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (int i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (int j = 0; j < n; ++j) centroid[j] += simplex[i][j];
    }
    for (int j = 0; j < n; ++j) centroid[j] /= n;

    auto blend = [&](std::vector<double>& dst, double t) {
      for (int j = 0; j < n; ++j) dst[j] = centroid[j] + t * (simplex[worst][j] - centroid[j]);
    };
    blend(trial, -1.0);  // reflection
    double f_r = f(trial);
    if (f_r < fx[best]) {
      blend(trial2, -2.0);  // expansion
      double f_e = f(trial2);
      if (f_e < f_r) { simplex[worst] = trial2; fx[worst] = f_e; }
      else { simplex[worst] = trial; fx[worst] = f_r; }
    } else if (f_r < fx[second]) {
      simplex[worst] = trial; fx[worst] = f_r;
    } else {
      blend(trial2, f_r < fx[worst] ? -0.5 : 0.5);  // contraction
      double f_c = f(trial2);
      if (f_c < std::min(f_r, fx[worst])) {
        simplex[worst] = trial2; fx[worst] = f_c;
      } else {  // shrink toward best
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (int j = 0; j < n; ++j)
            simplex[i][j] = simplex[best][j] + 0.5 * (simplex[i][j] - simplex[best][j]);
          fx[i] = f(simplex[i]);
        }
      }
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fx[i] < fx[best]) best = i;
  x = simplex[best];
}

struct RestartOutcome {
  double value = 1e9;
  double constraint = 1e9;
  bool feasible = false;
  std::vector<double> x;
};

RestartOutcome run_restart(const RegionProblem& prob, std::uint64_t seed, int restart,
                           double tol) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 17 * restart + 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> x(prob.dim());
  for (double& xi : x) xi = gauss(rng);

  for (double mu : {1e3, 1e6, 1e10})
    nelder_mead([&](const std::vector<double>& z) { return prob.penalized(z, mu); }, x,
                120 * prob.dim());

  RestartOutcome out;
  EvaluatedPoint e = prob.evaluate(x);
  if (!e.valid) return out;
  out.value = prob.maximize ? -e.objective : e.objective;
  out.constraint = e.constraint;
  out.feasible = e.constraint <= tol;
  out.x = std::move(x);
  return out;
}

}  // namespace

QuantumRegionResult quantum_region_min(double p, double P_A, double P_Aprime, int restarts,
                                       std::uint64_t seed, double tol, bool maximize) {
  if (p <= 0.0 || p >= 1.0) throw ValidationError("p must be in (0,1)");
  if (P_A <= 0.0 || P_A >= 1.0 || P_Aprime <= 0.0 || P_Aprime >= 1.0)
    throw ValidationError("targets must be strictly inside (0,1)");
  if (restarts < 1) throw ValidationError("restarts must be >= 1");

  std::vector<RestartOutcome> outcomes(restarts);
  parallel_for(restarts, [&](int r) {
    // alternate real and complex parameter blocks across restarts
    RegionProblem prob;
    prob.p = p;
    prob.P_A = P_A;
    prob.P_Aprime = P_Aprime;
    prob.maximize = maximize;
    prob.complex_mode = (r % 2 == 1);
    prob.block = prob.complex_mode ? 16 : 8;
    outcomes[r] = run_restart(prob, seed, r, tol);
  });

  QuantumRegionResult result;
  int best = -1;
  for (int r = 0; r < restarts; ++r) {
    const RestartOutcome& o = outcomes[r];
    if (!o.feasible) continue;
    bool better = maximize ? (best < 0 || o.value > result.value)
                           : (best < 0 || o.value < result.value);
    if (better) {
      best = r;
      result.value = o.value;
      result.constraint_error = o.constraint;
    }
  }
  if (best < 0) {
    result.feasible = false;
    return result;
  }
  result.feasible = true;
  bool complex_mode = (best % 2 == 1);
  int block = complex_mode ? 16 : 8;
  result.argbest1 = params_from_raw(outcomes[best].x.data(), complex_mode);
  result.argbest2 = params_from_raw(outcomes[best].x.data() + block, complex_mode);
  return result;
}

std::vector<QuantumRegionCell> quantum_region_scan(double p, int grid, int restarts,
                                                   std::uint64_t seed, double tol) {
  if (grid < 2) throw ValidationError("grid must be >= 2");
  std::vector<QuantumRegionCell> cells(grid * grid);
  parallel_for(grid * grid, [&](int idx) {
    int i = idx / grid, j = idx % grid;
    QuantumRegionCell& cell = cells[idx];
    // strictly interior grid: (0,1) grid without the degenerate endpoints
    cell.P_A = (i + 1.0) / (grid + 1.0);
    cell.P_Aprime = (j + 1.0) / (grid + 1.0);
    std::uint64_t cell_seed = seed + 1000003ULL * idx;
    try {
      QuantumRegionResult lo = quantum_region_min(p, cell.P_A, cell.P_Aprime, restarts,
                                                  cell_seed, tol, false);
      QuantumRegionResult hi = quantum_region_min(p, cell.P_A, cell.P_Aprime, restarts,
                                                  cell_seed, tol, true);
      cell.converged = lo.feasible && hi.feasible;
      cell.min_value = lo.feasible ? lo.value : 0.0;
      cell.max_value = hi.feasible ? hi.value : 0.0;
    } catch (const std::exception&) {
      cell.converged = false;
    }
  });
  return cells;
}

// ---------------------------------------------------------------------------
// Dilation
// ---------------------------------------------------------------------------

Dilation dilate_pince_nez(const QuantumPinceNez& pn) {
  const int d = pn.dim();
  const int m = static_cast<int>(std::max(pn.kraus_A.size(), pn.kraus_Atilde.size()));
  const int rows = 2 * d * m;

  Dilation out;
  out.env_dim = m;
  out.V = CMatrix::Zero(rows, d);
  auto row_of = [&](int branch, int sys, int env) { return (branch * d + sys) * m + env; };
  for (int branch = 0; branch < 2; ++branch) {
    const auto& list = branch == 0 ? pn.kraus_A : pn.kraus_Atilde;
    for (int i = 0; i < static_cast<int>(list.size()); ++i)
      for (int r = 0; r < d; ++r)
        for (int s = 0; s < d; ++s) out.V(row_of(branch, r, i), s) = list[i](r, s);
  }
  for (int branch = 0; branch < 2; ++branch) {
    CMatrix proj = CMatrix::Zero(rows, rows);
    for (int r = 0; r < d; ++r)
      for (int i = 0; i < m; ++i)
        proj(row_of(branch, r, i), row_of(branch, r, i)) = 1.0;
    out.branch_projectors[branch] = std::move(proj);
  }

  if ((out.V.adjoint() * out.V - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12)
    throw ValidationError("dilation is not an isometry; channel not trace-preserving");
  return out;
}

UnitaryDilation unitary_dilation(const QuantumPinceNez& pn) {
  const int d = pn.dim();
  const int m = static_cast<int>(std::max(pn.kraus_A.size(), pn.kraus_Atilde.size()));
  const int t = 2 * m;       // traced factor: observation (x) environment
  const int total = t * d;

  // isometry with output ordered as (system, traced); the traced factor
  // combines the observation register and the environment
  CMatrix W = CMatrix::Zero(total, d);
  for (int branch = 0; branch < 2; ++branch) {
    const auto& list = branch == 0 ? pn.kraus_A : pn.kraus_Atilde;
    for (int i = 0; i < static_cast<int>(list.size()); ++i)
      for (int r = 0; r < d; ++r)
        for (int s = 0; s < d; ++s) W(r * t + branch * m + i, s) = list[i](r, s);
  }

  UnitaryDilation out;
  out.traced_dim = t;
  out.sys_dim = d;
  out.psi1 = CVector::Zero(t);
  out.psi1[0] = 1.0;

  // U(phi (x) e_0) = W phi; remaining ancilla columns completed by
  // Gram-Schmidt over the standard basis.
  out.U = CMatrix::Zero(total, total);
  std::vector<CVector> ortho;
  ortho.reserve(total);
  for (int s = 0; s < d; ++s) {
    out.U.col(s * t) = W.col(s);
    ortho.push_back(W.col(s));
  }
  std::vector<int> free_cols;
  for (int s = 0; s < d; ++s)
    for (int a = 1; a < t; ++a) free_cols.push_back(s * t + a);
  size_t next_free = 0;
  for (int j = 0; j < total && next_free < free_cols.size(); ++j) {
    CVector cand = CVector::Zero(total);
    cand[j] = 1.0;
    for (const CVector& q : ortho) cand -= q.dot(cand) * q;
    double nrm = cand.norm();
    if (nrm < 0.5) continue;  // nearly dependent; try the next basis vector
    cand /= nrm;
    // second pass for numerical orthogonality
    for (const CVector& q : ortho) cand -= q.dot(cand) * q;
    cand.normalize();
    out.U.col(free_cols[next_free++]) = cand;
    ortho.push_back(cand);
  }
  if (next_free != free_cols.size())
    throw ValidationError("failed to complete the dilation to a unitary");

  for (int branch = 0; branch < 2; ++branch) {
    CMatrix q = CMatrix::Zero(t, t);
    for (int i = 0; i < m; ++i) q(branch * m + i, branch * m + i) = 1.0;
    out.Q[branch] = std::move(q);
  }
  return out;
}

QuantumPinceNez extract_pince_nez(const CMatrix& U, const CVector& psi1,
                                  const std::vector<CMatrix>& projectors) {
  const int total = static_cast<int>(U.rows());
  if (U.cols() != total) throw ValidationError("U must be square");
  if ((U.adjoint() * U - CMatrix::Identity(total, total)).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("U is not unitary");
  const int anc = static_cast<int>(psi1.size());
  if (anc <= 0 || total % anc != 0) throw ValidationError("ancilla dimension mismatch");
  if (std::abs(psi1.norm() - 1.0) > 1e-10) throw ValidationError("psi1 is not normalized");
  const int d = total / anc;
  const int t = anc;

  CMatrix sum = CMatrix::Zero(t, t);
  for (const CMatrix& q : projectors) {
    if (q.rows() != t || q.cols() != t)
      throw ValidationError("projector dimension mismatch");
    if ((q * q - q).cwiseAbs().maxCoeff() > 1e-10 ||
        (q - q.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
      throw ValidationError("projectors must be orthogonal projectors");
    sum += q;
  }
  if ((sum - CMatrix::Identity(t, t)).cwiseAbs().maxCoeff() > 1e-10)
    throw ValidationError("projectors must sum to the identity");
  if (projectors.size() != 2)
    throw ValidationError("expected one projector per observation branch");

  // W = U (I_d (x) psi1); both input and output ordered (system, traced)
  CMatrix W(total, d);
  for (int s = 0; s < d; ++s) {
    CVector in = CVector::Zero(total);
    for (int a = 0; a < anc; ++a) in[s * anc + a] = psi1[a];
    W.col(s) = U * in;
  }

  auto branch_kraus = [&](const CMatrix& q) {
    std::vector<CMatrix> ops;
    for (int i = 0; i < t; ++i) {
      CMatrix k = CMatrix::Zero(d, d);
      for (int r = 0; r < d; ++r)
        for (int s = 0; s < d; ++s) {
          Complex acc = 0.0;
          for (int tau = 0; tau < t; ++tau) acc += q(i, tau) * W(r * t + tau, s);
          k(r, s) = acc;
        }
      if (k.cwiseAbs().maxCoeff() > 1e-12) ops.push_back(std::move(k));
    }
    return ops;
  };
  return QuantumPinceNez(branch_kraus(projectors[0]), branch_kraus(projectors[1]));
}

std::vector<double> chain_joint_probs(const QuantumPinceNez& pn, const DensityMatrix& rho0,
                                      int n) {
  if (n < 1 || n > 20) throw ValidationError("n must be in [1, 20]");
  std::vector<CMatrix> states{rho0.entries};
  for (int round = 0; round < n; ++round) {
    std::vector<CMatrix> next;
    next.reserve(states.size() * 2);
    for (const CMatrix& rho : states) {
      next.push_back(pn.apply_branch_Atilde(rho));  // bit 0
      next.push_back(pn.apply_branch_A(rho));       // bit 1
    }
    states = std::move(next);
  }
  std::vector<double> probs(states.size());
  for (size_t i = 0; i < states.size(); ++i) probs[i] = states[i].trace().real();
  return probs;
}

std::vector<double> dilated_joint_probs(const UnitaryDilation& dil, const DensityMatrix& rho0,
                                        int n) {
  if (n < 1 || n > 20) throw ValidationError("n must be in [1, 20]");
  const int d = dil.sys_dim, t = dil.traced_dim, total = t * d;

  auto branch_step = [&](const CMatrix& rho, int branch) {
    // rho (x) psi1 psi1^dagger in (system, ancilla) ordering
    CMatrix big = CMatrix::Zero(total, total);
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s)
        for (int a = 0; a < t; ++a)
          for (int b = 0; b < t; ++b)
            big(r * t + a, s * t + b) = rho(r, s) * dil.psi1[a] * std::conj(dil.psi1[b]);
    CMatrix evolved = dil.U * big * dil.U.adjoint();
    // apply (I (x) Q) and trace out the second factor
    const CMatrix& q = dil.Q[branch];
    CMatrix reduced = CMatrix::Zero(d, d);
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s) {
        Complex acc = 0.0;
        for (int tau = 0; tau < t; ++tau)
          for (int sig = 0; sig < t; ++sig)
            acc += q(tau, sig) * evolved(r * t + sig, s * t + tau);
        reduced(r, s) = acc;
      }
    return reduced;
  };

  std::vector<CMatrix> states{rho0.entries};
  for (int round = 0; round < n; ++round) {
    std::vector<CMatrix> next;
    next.reserve(states.size() * 2);
    for (const CMatrix& rho : states) {
      next.push_back(branch_step(rho, 1));  // A-tilde, bit 0
      next.push_back(branch_step(rho, 0));  // A, bit 1
    }
    states = std::move(next);
  }
  std::vector<double> probs(states.size());
  for (size_t i = 0; i < states.size(); ++i) probs[i] = states[i].trace().real();
  return probs;
}

}  // namespace parrondo
