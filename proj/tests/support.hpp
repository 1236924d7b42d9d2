#pragma once

#include "realbloch/common.hpp"

#include <optional>
#include <random>

namespace rbtest {

using realbloch::CMatrix;
using realbloch::cplx;

inline CMatrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = cplx(g(rng), g(rng));
  return m;
}

// Haar-ish unitary from the QR factorization of a Gaussian matrix.
inline CMatrix random_unitary(std::mt19937_64& rng, int n) {
  Eigen::HouseholderQR<CMatrix> qr(random_matrix(rng, n, n));
  return qr.householderQ() * CMatrix::Identity(n, n);
}

inline CMatrix random_hermitian(std::mt19937_64& rng, int n) {
  const CMatrix a = random_matrix(rng, n, n);
  return 0.5 * (a + a.adjoint());
}

inline CMatrix scalar(cplx z) { return CMatrix::Constant(1, 1, z); }

// Kind of the library error thrown by f, or nothing if it returns normally.
template <class F>
std::optional<realbloch::ErrorKind> error_kind(F&& f) {
  try {
    f();
  } catch (const realbloch::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

}  // namespace rbtest
