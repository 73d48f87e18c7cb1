#include "parrondo/linalg.hpp"

#include <cmath>
#include <vector>

namespace parrondo {

ProbVector::ProbVector(RVector e) : entries(std::move(e)) {
  if (entries.size() == 0) throw ValidationError("probability vector is empty");
  if ((entries.array() < -kStochasticTol).any())
    throw ValidationError("probability vector has a negative entry");
  if (std::abs(entries.sum() - 1.0) > kStochasticTol)
    throw ValidationError("probability vector does not sum to 1");
}

ProbVector ProbVector::uniform(int dim) {
  return ProbVector(RVector::Constant(dim, 1.0 / dim));
}

ProbVector ProbVector::basis(int dim, int i) {
  RVector v = RVector::Zero(dim);
  v[i] = 1.0;
  return ProbVector(std::move(v));
}

StochasticMatrix::StochasticMatrix(RMatrix m) : entries(std::move(m)) {
  if (entries.rows() != entries.cols() || entries.rows() == 0)
    throw ValidationError("stochastic matrix must be square and nonempty");
  if ((entries.array() < -kStochasticTol).any())
    throw ValidationError("stochastic matrix has a negative entry");
  for (int j = 0; j < entries.cols(); ++j) {
    if (std::abs(entries.col(j).sum() - 1.0) > kStochasticTol)
      throw ValidationError("column " + std::to_string(j) + " does not sum to 1");
  }
}

DensityMatrix::DensityMatrix(CMatrix m) : entries(std::move(m)) {
  if (entries.rows() != entries.cols() || entries.rows() == 0)
    throw ValidationError("density matrix must be square and nonempty");
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
    throw ValidationError("density matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(entries, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kPsdTol)
    throw ValidationError("density matrix has a negative eigenvalue");
  if (std::abs(entries.trace().real() - 1.0) > 1e-9 ||
      std::abs(entries.trace().imag()) > kHermitianTol)
    throw ValidationError("density matrix trace is not 1");
}

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  return DensityMatrix(CMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::pure_basis(int dim, int i) {
  CMatrix m = CMatrix::Zero(dim, dim);
  m(i, i) = 1.0;
  return DensityMatrix(std::move(m));
}

namespace {

// Shared fixed-point driver over a generic linear map given as a dense matrix
// P acting on vectors. Starting vectors are supplied by the caller; distances
// and residuals via `dist`. Evaluates x_n = P^n x0 at n = 1, 2, 4, ... using
// squared powers of P, so slow-mixing maps stay cheap.
struct IterationOutcome {
  std::vector<CVector> limits;
  long iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

IterationOutcome iterate_to_fixed_point(
    const CMatrix& P, const std::vector<CVector>& starts, double tol, long max_iter,
    const std::function<double(const CVector&, const CVector&)>& dist) {
  IterationOutcome out;
  const double stop_tol = tol * 0.1;
  std::vector<CVector> current = starts;
  std::vector<bool> done(starts.size(), false);

  CMatrix power = P;     // P^(2^k)
  long step = 1;         // applications contributed by this pass
  long applied = 0;      // total applications so far (2^k - 1 after pass k)
  bool all_done = false;
  for (;;) {
    all_done = true;
    for (size_t s = 0; s < current.size(); ++s) {
      if (done[s]) continue;
      current[s] = power * current[s];
      double res = dist(P * current[s], current[s]);
      if (res <= stop_tol)
        done[s] = true;
      else
        all_done = false;
    }
    applied += step;
    out.iterations = applied;
    if (all_done || applied + 2 * step > max_iter) break;
    power = power * power;
    step *= 2;
  }

  out.limits = current;
  out.residual = dist(P * current[0], current[0]);
  if (!all_done) return out;

  for (size_t s = 1; s < current.size(); ++s) {
    if (dist(current[s], current[0]) > tol) return out;
  }
  out.converged = true;
  return out;
}

}  // namespace

FixedPointReport pf_fixed_point(const StochasticMatrix& M, double tol, long max_iter,
                                int starts) {
  if (tol <= 0) throw ValidationError("tol must be positive");
  if (starts < 2) throw ValidationError("at least 2 starts required");
  const int d = M.dim();

  std::vector<CVector> inits;
  inits.push_back(ProbVector::uniform(d).entries.cast<Complex>());
  for (int i = 0; i < d && static_cast<int>(inits.size()) < starts; ++i)
    inits.push_back(ProbVector::basis(d, i).entries.cast<Complex>());

  auto l1 = [](const CVector& a, const CVector& b) {
    return (a - b).cwiseAbs().sum();
  };
  IterationOutcome out =
      iterate_to_fixed_point(M.entries.cast<Complex>(), inits, tol, max_iter, l1);

  FixedPointReport report;
  report.iterations = out.iterations;
  report.residual = out.residual;
  report.converged = out.converged;
  report.vector = out.limits[0].real();
  if (report.converged) {
    // clean tiny negatives from roundoff and renormalize
    report.vector = report.vector.cwiseMax(0.0);
    report.vector /= report.vector.sum();
  }
  return report;
}

CMatrix channel_superoperator(const ChannelApplier& channel, int dim) {
  const int d2 = dim * dim;
  CMatrix S(d2, d2);
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      CMatrix unit = CMatrix::Zero(dim, dim);
      unit(j, k) = 1.0;
      CMatrix out = channel(unit);
      if (out.rows() != dim || out.cols() != dim)
        throw ValidationError("channel output has wrong dimension");
      // row-major flatten
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) S(r * dim + c, j * dim + k) = out(r, c);
    }
  }
  return S;
}

FixedPointReport quantum_pf_fixed_point(const ChannelApplier& channel, int dim,
                                        double tol, long max_iter, int starts) {
  if (tol <= 0) throw ValidationError("tol must be positive");
  if (starts < 2) throw ValidationError("at least 2 starts required");

  CMatrix S = channel_superoperator(channel, dim);
  // trace preservation: tr(channel(E_jk)) must equal delta_jk
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      Complex tr = 0.0;
      for (int r = 0; r < dim; ++r) tr += S(r * dim + r, j * dim + k);
      Complex expected = (j == k) ? 1.0 : 0.0;
      if (std::abs(tr - expected) > 1e-9)
        throw ValidationError("channel does not preserve trace");
    }
  }

  auto flatten = [dim](const CMatrix& m) {
    CVector v(dim * dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) v[r * dim + c] = m(r, c);
    return v;
  };
  auto unflatten = [dim](const CVector& v) {
    CMatrix m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = v[r * dim + c];
    return m;
  };

  std::vector<CVector> inits;
  inits.push_back(flatten(DensityMatrix::maximally_mixed(dim).entries));
  for (int i = 0; i < dim && static_cast<int>(inits.size()) < starts; ++i)
    inits.push_back(flatten(DensityMatrix::pure_basis(dim, i).entries));

  auto trace_dist = [&](const CVector& a, const CVector& b) {
    return trace_norm(unflatten(a) - unflatten(b));
  };
  IterationOutcome out = iterate_to_fixed_point(S, inits, tol, max_iter, trace_dist);

  FixedPointReport report;
  report.iterations = out.iterations;
  report.residual = out.residual;
  report.converged = out.converged;
  report.matrix = unflatten(out.limits[0]);
  if (report.converged) {
    // symmetrize roundoff and renormalize the trace
    report.matrix = 0.5 * (report.matrix + report.matrix.adjoint().eval());
    report.matrix /= report.matrix.trace().real();
  }
  return report;
}

double trace_norm(const CMatrix& A) {
  if (A.rows() != A.cols()) throw ValidationError("trace norm requires a square matrix");
  Eigen::JacobiSVD<CMatrix> svd(A);
  return svd.singularValues().sum();
}

Eigen::Vector4cd vec2(const DensityMatrix& rho) {
  if (rho.dim() != 2) throw ValidationError("vec2 requires dimension 2");
  Eigen::Vector4cd x;
  x << rho.entries(0, 0), rho.entries(0, 1), rho.entries(1, 0), rho.entries(1, 1);
  return x;
}

DensityMatrix unvec2(const Eigen::Vector4cd& x) {
  CMatrix m(2, 2);
  m << x[0], x[1], x[2], x[3];
  return DensityMatrix(std::move(m));
}

}  // namespace parrondo
