#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "parrondo/linalg.hpp"

namespace parrondo {

// Quantum round map split into the two signal branches: branch A applies
// rho -> sum J rho J^dagger, branch A-tilde likewise with its own list.
// The combined channel must preserve trace.
struct QuantumPinceNez {
  std::vector<CMatrix> kraus_A;
  std::vector<CMatrix> kraus_Atilde;

  QuantumPinceNez(std::vector<CMatrix> a, std::vector<CMatrix> at);
  int dim() const { return static_cast<int>(kraus_A.empty() ? kraus_Atilde[0].rows()
                                                            : kraus_A[0].rows()); }
  CMatrix apply_branch_A(const CMatrix& rho) const;
  CMatrix apply_branch_Atilde(const CMatrix& rho) const;
  CMatrix apply_round(const CMatrix& rho) const;
};

// Extremal single-Kraus parameters: unit vectors u, v in C^4 with u _|_ v.
// Branch A Kraus is [[u1, v1],[u2, v2]], branch A-tilde [[u3, v3],[u4, v4]].
struct ExtremalParams {
  Eigen::Vector4cd u;
  Eigen::Vector4cd v;

  ExtremalParams(Eigen::Vector4cd uu, Eigen::Vector4cd vv);
  CMatrix kraus_J() const;
  CMatrix kraus_K() const;
};

// Row functional w and 4x4 matrix M of the fixed-point system in the
// row-major vectorization (r11, r12, r21, r22): M x = e4 is solved by the
// vectorized fixed state, and w x is the branch-A trace functional. The last
// row of M is (1, 0, 0, 1).
struct WMPair {
  Eigen::RowVector4cd w;
  Eigen::Matrix4cd M;
};

// Partial outputs of one round; traces sum to tr rho.
std::pair<CMatrix, CMatrix> apply_pince_nez(const QuantumPinceNez& pn,
                                            const DensityMatrix& rho);

// Probability that round n signals A: tr(branch_A(N^(n-1) rho0)).
double quantum_win_prob(const QuantumPinceNez& pn, const DensityMatrix& rho0, long n);

// Kraus lists scaled by sqrt(p) and sqrt(1-p) and concatenated branch-wise.
QuantumPinceNez combine_quantum(const QuantumPinceNez& pn, const QuantumPinceNez& pnp,
                                double p);

// Pince-nez of an extremal parameter point. With require_qpf (default) the
// fixed-point system is checked for solvability and degenerate points
// (dephasing-like channels) are rejected.
QuantumPinceNez extremal_pince_nez(const ExtremalParams& params, bool require_qpf = true);

WMPair build_wM(const ExtremalParams& params);

// w M^-1 e4: the limiting win probability of the extremal game.
// Throws ConvergenceError when M is singular (no quantum fixed point).
double quantum_limit_via_wM(const ExtremalParams& params);

// Limiting combined win probability of two extremal games mixed with bias p.
double quantum_combined_limit(const ExtremalParams& a, const ExtremalParams& b, double p);

struct QuantumRegionResult {
  double value = 0.0;
  bool feasible = false;
  double constraint_error = 0.0;
  std::optional<ExtremalParams> argbest1;
  std::optional<ExtremalParams> argbest2;
};

// Extremizes the combined limit over two extremal parameter sets subject to
// the individual limits equalling P_A and P_Aprime (quadratic penalty with an
// escalating weight schedule, Nelder-Mead local search, seeded multi-start).
QuantumRegionResult quantum_region_min(double p, double P_A, double P_Aprime,
                                       int restarts, std::uint64_t seed,
                                       double tol = 1e-6, bool maximize = false);

struct QuantumRegionCell {
  double P_A = 0.0;
  double P_Aprime = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  bool converged = false;
};

// Runs quantum_region_min (both directions) on each grid point of
// (P_A, P_Aprime) in (0,1)^2; cells are independent and run in parallel.
std::vector<QuantumRegionCell> quantum_region_scan(double p, int grid, int restarts,
                                                   std::uint64_t seed, double tol = 1e-6);

// Isometry V: C^d -> C^2 (x) C^d (x) C^m stacking branch-A rows
// |A> (x) J_i phi (x) |i> above branch-A-tilde rows |A~> (x) K_i phi (x) |i>,
// plus the two observation projectors on the C^2 register.
struct Dilation {
  CMatrix V;
  std::array<CMatrix, 2> branch_projectors;
  int env_dim = 0;
};

Dilation dilate_pince_nez(const QuantumPinceNez& pn);

// Unitary extension of the dilation: U maps (system (x) ancilla) to
// (system (x) traced) where the traced factor combines the observation
// register with the environment, and U(phi (x) psi1) = V phi up to register
// reordering. Q_A, Q_Atilde project the traced factor.
struct UnitaryDilation {
  CMatrix U;
  CVector psi1;
  std::array<CMatrix, 2> Q;
  int traced_dim = 0;
  int sys_dim = 0;
};

UnitaryDilation unitary_dilation(const QuantumPinceNez& pn);

// Recovers a pince-nez from a unitary U on (system (x) ancilla), an ancilla
// state psi1, and orthogonal projectors {Q_C} on the traced factor; U's
// output is read as (system (x) traced), so U = I gives branch maps whose
// traces are the constants tr(Q_C psi1 psi1^+).
QuantumPinceNez extract_pince_nez(const CMatrix& U, const CVector& psi1,
                                  const std::vector<CMatrix>& projectors);

// Joint probabilities of all 2^n observation sequences (branch A = bit 1,
// most recent round in the lowest bit), via the branch-map chain.
std::vector<double> chain_joint_probs(const QuantumPinceNez& pn, const DensityMatrix& rho0,
                                      int n);

// Same joint probabilities evaluated through the dilated unitary.
std::vector<double> dilated_joint_probs(const UnitaryDilation& dil, const DensityMatrix& rho0,
                                        int n);

}  // namespace parrondo
