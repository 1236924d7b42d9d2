#include "realbloch/linalg.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <limits>
#include <mutex>
#include <thread>

namespace realbloch {

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) { g_threads = std::max(1, n); }
int thread_count() { return g_threads.load(); }

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDiscretization: return "invalid-discretization";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Model: return "model";
    case ErrorKind::GapClosure: return "gap-closure";
    case ErrorKind::Rank: return "rank";
    case ErrorKind::SymmetryInconsistency: return "symmetry-inconsistency";
    case ErrorKind::SingularOverlap: return "singular-overlap";
    case ErrorKind::BranchCut: return "branch-cut";
    case ErrorKind::IndeterminateHolonomy: return "indeterminate-holonomy";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

namespace linalg {

CMatrix polar_unitary(const CMatrix& m, double min_sigma, double* smallest_sigma) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double smin = m.size() == 0 ? 1.0 : svd.singularValues().minCoeff();
  if (smallest_sigma) *smallest_sigma = smin;
  if (smin < min_sigma) {
    std::ostringstream os;
    os << "overlap matrix is nearly singular (smallest singular value " << smin << ")";
    throw Error(ErrorKind::SingularOverlap, os.str());
  }
  return svd.matrixU() * svd.matrixV().adjoint();
}

CMatrix log_unitary(const CMatrix& u, double cut_tol) {
  // A unitary matrix is normal, so its complex Schur form is diagonal up to
  // roundoff and the Schur vectors stay orthonormal through degeneracies.
  Eigen::ComplexSchur<CMatrix> schur(u);
  const CMatrix& t = schur.matrixT();
  const CMatrix& z = schur.matrixU();
  const auto n = u.rows();
  CVector logs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const cplx ev = t(i, i);
    if (std::abs(ev + 1.0) < cut_tol) {
      throw Error(ErrorKind::BranchCut,
                  "unitary has an eigenvalue at -1; the principal logarithm is "
                  "undefined (refine the lattice)");
    }
    logs(i) = cplx(0.0, std::arg(ev));
  }
  CMatrix out = z * logs.asDiagonal() * z.adjoint();
  return 0.5 * (out - out.adjoint());
}

CMatrix exp_antihermitian(const CMatrix& a) {
  const CMatrix h = cplx(0.0, -1.0) * 0.5 * (a - a.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const RVector& lam = es.eigenvalues();
  CVector phases(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) phases(i) = std::exp(kI * lam(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix symmetric_unitary_sqrt(const CMatrix& w) {
  const Eigen::MatrixXd re = 0.5 * (w.real() + w.real().transpose());
  const Eigen::MatrixXd im = 0.5 * (w.imag() + w.imag().transpose());
  const double mixes[] = {0.6180339887498949, 1.4142135623730951, -0.7320508075688772,
                          2.718281828459045};
  CMatrix best;
  double best_res = std::numeric_limits<double>::infinity();
  for (double c : mixes) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(re + c * im);
    const CMatrix o = es.eigenvectors().cast<cplx>();
    const CMatrix d = o.transpose() * w * o;
    CVector roots(d.rows());
    for (Eigen::Index i = 0; i < d.rows(); ++i) roots(i) = std::sqrt(d(i, i));
    CMatrix v = o * roots.asDiagonal();
    const double res = (v * v.transpose() - w).norm();
    if (res < best_res) {
      best_res = res;
      best = std::move(v);
    }
    if (res < 1e-10) break;
  }
  return best;
}

double unitarity_residual(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.cols(), u.cols())).norm();
}

double antihermitian_residual(const CMatrix& a) { return (a + a.adjoint()).norm(); }

CMatrix block_diagonal(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

std::vector<cplx> elementary_symmetric(const CMatrix& x) {
  const auto m = x.rows();
  std::vector<cplx> e(static_cast<std::size_t>(m) + 1, cplx(0.0));
  e[0] = 1.0;
  if (m == 0) return {};
  Eigen::ComplexEigenSolver<CMatrix> es(x, false);
  const CVector& lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < m; ++i) {
    for (auto k = static_cast<std::size_t>(i) + 1; k >= 1; --k) e[k] += lam(i) * e[k - 1];
  }
  return {e.begin() + 1, e.end()};
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const auto workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::mutex failure_mutex;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n || failed) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(failure_mutex);
          if (!failed) failure = std::current_exception();
          failed = true;
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

// Golub-Welsch: eigen-decomposition of the symmetric Jacobi matrix.
template <class Beta>
Quadrature golub_welsch(int n, double mu0, Beta beta) {
  if (n < 1) throw Error(ErrorKind::Domain, "quadrature needs at least one node");
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = beta(k);
    jac(k, k - 1) = b;
    jac(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  Quadrature q;
  q.nodes = es.eigenvalues();
  q.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    q.weights(i) = mu0 * v0 * v0;
  }
  return q;
}

}  // namespace

Quadrature gauss_hermite(int n) {
  return golub_welsch(n, std::sqrt(kPi), [](int k) { return std::sqrt(k / 2.0); });
}

Quadrature gauss_legendre(int n) {
  return golub_welsch(n, 2.0, [](int k) { return k / std::sqrt(4.0 * k * k - 1.0); });
}

}  // namespace linalg
}  // namespace realbloch
