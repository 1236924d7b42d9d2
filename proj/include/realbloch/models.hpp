#pragma once

#include "realbloch/berry.hpp"
#include "realbloch/common.hpp"
#include "realbloch/lattice.hpp"
#include "realbloch/spectral.hpp"
#include "realbloch/symmetry.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace realbloch {

/// A real function of one angle together with its derivative.
struct Profile {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::string description;

  static Profile constant(double c);
  static Profile sine(double amplitude);
  static Profile cosine(double amplitude);
};

/// Parametrized harmonic oscillator over the torus:
///   nu(t1, t2) = delta + f(t2)^2,  phi(t1, t2) = sin(t1) g(t2).
struct OscillatorParams {
  int n = 0;
  int n_basis = 40;
  double delta = 1.0;
  Profile f = Profile::sine(1.0);
  Profile g = Profile::constant(1.0);

  double nu(const Point& x) const;
  double phi(const Point& x) const;
  Point grad_nu(const Point& x) const;
  Point grad_phi(const Point& x) const;
};

struct ModelPair {
  HamiltonianFamily h;
  SymmetryData j;
};

/// Normalized psi_n(r) = nu^{1/4} h_n(r sqrt(nu)) exp(-i phi r^2 / 2), with
/// h_n the Hermite functions. Stable for large |r|.
cplx hermite_eigenfunction(int n, double r, double nu, double phi);

/// H = (p^2 + phi (pq + qp) + (nu^2 + phi^2) q^2) / 2 in the first n_basis
/// Hermite functions of the unit oscillator; J = 1. Needs a torus with the
/// EtaFirst involution. Throws Truncation when the level-n eigenvalue misses
/// nu (n + 1/2) by more than 1e-6 at some site.
ModelPair model_oscillator(const OscillatorParams& p, const InvolutiveLattice& lat);

/// Coefficients <h_k | psi_n(x)> of the exact eigenfunction in the truncated
/// basis, one column per site, computed by the trapezoid rule on a wide window.
std::vector<CMatrix> oscillator_reference_frame(const OscillatorParams& p,
                                                const InvolutiveLattice& lat);

/// A = -i (2n + 1) / (4 nu) dphi, returned as (A_1, A_2).
std::array<cplx, 2> oscillator_analytic_connection(const OscillatorParams& p, const Point& x);

/// Coefficient i (2n + 1) / (4 nu^2) of dnu ^ dphi.
cplx oscillator_analytic_curvature(const OscillatorParams& p, const Point& x);

/// The dt1 ^ dt2 component of the curvature.
cplx oscillator_curvature_component(const OscillatorParams& p, const Point& x);

/// J = e^{i theta}, A = -(i/2) d theta on circle-trivial.
ProductConnectionSpec model_mobius_circle();
/// A = 0, J = 1.
ProductConnectionSpec model_trivial_circle();
/// A = i a d theta, J = 1, on circle-reflection.
ProductConnectionSpec model_flat_circle(double a);
/// J = e^{i t1}, A = -(i/2) d t1 on torus2-eta.
ProductConnectionSpec model_mobius_pullback_torus();

/// H = Re(z^k) sx + Im(z^k) sy + x0 sz with z = x1 + i x2, J = 1.
ModelPair model_degree_k_sphere(int k, const InvolutiveLattice& lat);

/// Qi-Wu-Zhang model sin t1 sx + sin t2 sy + (m + cos t1 + cos t2) sz, J = 1.
/// On torus2-xi the second angle is replaced by 2 t2 - t1, which doubles the
/// Chern number.
ModelPair model_qwz(double m, const InvolutiveLattice& lat);

/// Brouwer degree of x -> d(x)/|d(x)| for the degree-k sphere model, from
/// signed solid angles of the image triangles, relative to the outward
/// orientation. Throws Domain when the sum is not an integer multiple of 4 pi.
long degree_oracle(int k, const InvolutiveLattice& lat);
/// Total signed solid angle of the image triangles divided by 4 pi.
double degree_oracle_value(const std::function<std::array<double, 3>(int site)>& map,
                           const InvolutiveLattice& lat);

/// Block-diagonal sums.
HamiltonianFamily direct_sum(const HamiltonianFamily& a, const HamiltonianFamily& b);
SymmetryData direct_sum(const SymmetryData& a, const SymmetryData& b);
ProductConnectionSpec direct_sum(const ProductConnectionSpec& a, const ProductConnectionSpec& b);

/// Conjugation by a constant real orthogonal O: H -> O H O^T, J -> O J O^T.
ModelPair rotate_basis(const ModelPair& m, const Eigen::MatrixXd& o);

}  // namespace realbloch
