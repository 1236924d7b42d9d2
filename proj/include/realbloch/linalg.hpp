#pragma once

#include "realbloch/common.hpp"

#include <cstddef>
#include <functional>
#include <vector>

namespace realbloch::linalg {

/// Unitary factor of the polar decomposition M = U |M|.
/// Throws SingularOverlap if the smallest singular value is below min_sigma.
CMatrix polar_unitary(const CMatrix& m, double min_sigma = 1e-6,
                      double* smallest_sigma = nullptr);

/// Principal logarithm of a unitary matrix (anti-Hermitian result).
/// Throws BranchCut when an eigenvalue lies within cut_tol of -1.
CMatrix log_unitary(const CMatrix& u, double cut_tol = 1e-9);

/// exp of an anti-Hermitian matrix.
CMatrix exp_antihermitian(const CMatrix& a);

/// Real orthogonal-diagonal (Takagi) square root of a symmetric unitary:
/// returns V unitary with W = V V^T.
CMatrix symmetric_unitary_sqrt(const CMatrix& w);

double unitarity_residual(const CMatrix& u);
double antihermitian_residual(const CMatrix& a);

CMatrix block_diagonal(const CMatrix& a, const CMatrix& b);

/// Determinant-expansion coefficients of det(t - X): returns e_1..e_m with
/// det(t - X) = sum_k (-1)^k e_k t^{m-k}.
std::vector<cplx> elementary_symmetric(const CMatrix& x);

/// Runs body(i) for i in [0, n) on up to thread_count() workers. Each index
/// must write only its own output slot.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Nodes and weights of a Gaussian rule.
struct Quadrature {
  RVector nodes;
  RVector weights;
};
Quadrature gauss_hermite(int n);
/// Gauss-Legendre on [-1, 1].
Quadrature gauss_legendre(int n);

}  // namespace realbloch::linalg
