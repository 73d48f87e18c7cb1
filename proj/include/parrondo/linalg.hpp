#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace parrondo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Thrown when an input violates a documented invariant (bad matrix shape,
// non-stochastic columns, entry out of range, ...).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a fixed point is required but the iteration does not certify one.
class ConvergenceError : public std::runtime_error {
 public:
  explicit ConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kStochasticTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

// Probability vector: nonnegative entries summing to one.
struct ProbVector {
  RVector entries;

  ProbVector() = default;
  explicit ProbVector(RVector e);

  int dim() const { return static_cast<int>(entries.size()); }
  static ProbVector uniform(int dim);
  static ProbVector basis(int dim, int i);
};

// Column-stochastic matrix: entry(i, j) is the weight into state i from state j.
struct StochasticMatrix {
  RMatrix entries;

  StochasticMatrix() = default;
  explicit StochasticMatrix(RMatrix m);

  int dim() const { return static_cast<int>(entries.rows()); }
};

// Hermitian, positive-semidefinite, unit-trace matrix.
struct DensityMatrix {
  CMatrix entries;

  DensityMatrix() = default;
  explicit DensityMatrix(CMatrix m);

  int dim() const { return static_cast<int>(entries.rows()); }
  static DensityMatrix maximally_mixed(int dim);
  static DensityMatrix pure_basis(int dim, int i);
};

// Outcome of a fixed-point search. `vector` is filled for classical runs,
// `matrix` for quantum ones. `converged` implies residual <= the requested
// tolerance and agreement of all starts.
struct FixedPointReport {
  RVector vector;
  CMatrix matrix;
  long iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

inline constexpr double kDefaultFixedPointTol = 1e-10;
inline constexpr long kDefaultFixedPointMaxIter = 100000;

// Iterates M on several starting distributions (uniform plus basis vectors)
// and reports the common limit if every start converges to the same vector
// within tol. Iteration counts are powers of two evaluated by repeated
// squaring, so large max_iter is cheap.
FixedPointReport pf_fixed_point(const StochasticMatrix& M,
                                double tol = kDefaultFixedPointTol,
                                long max_iter = kDefaultFixedPointMaxIter,
                                int starts = 4);

using ChannelApplier = std::function<CMatrix(const CMatrix&)>;

// Quantum analogue of pf_fixed_point: iterates a trace-preserving channel on
// pure-basis starts plus the maximally mixed state; distances in trace norm.
// Throws ValidationError if the channel fails to preserve trace within 1e-9.
FixedPointReport quantum_pf_fixed_point(const ChannelApplier& channel, int dim,
                                        double tol = kDefaultFixedPointTol,
                                        long max_iter = kDefaultFixedPointMaxIter,
                                        int starts = 4);

// Builds the dim^2 x dim^2 matrix of a channel in the row-major vectorization
// used throughout (vec of a 2x2 is (r11, r12, r21, r22)).
CMatrix channel_superoperator(const ChannelApplier& channel, int dim);

// Sum of singular values. Square input required.
double trace_norm(const CMatrix& A);

// Row-major vectorization of a 2x2 density matrix, ordering (r11, r12, r21, r22).
Eigen::Vector4cd vec2(const DensityMatrix& rho);
DensityMatrix unvec2(const Eigen::Vector4cd& x);

}  // namespace parrondo
