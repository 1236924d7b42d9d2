#include "realbloch/holonomy.hpp"
#include "realbloch/linalg.hpp"

#include <cmath>
#include <sstream>

namespace realbloch {

HolonomyResult wilson_loop(const LinkField& u, const LoopPath& loop, const InvolutiveLattice& lat) {
  lat.validate(loop);
  CMatrix hol = CMatrix::Identity(u.rank, u.rank);
  for (const auto& s : loop.steps) hol = step_overlap(u, s).adjoint() * hol;
  return {std::move(hol), loop, loop.base, "frame"};
}

HolonomyResult continuum_holonomy(const ProductConnectionSpec& spec, const ParametrizedCurve& curve,
                                  int steps) {
  if (steps < 16) throw Error(ErrorKind::Domain, "continuum holonomy needs at least 16 steps");
  CMatrix hol = CMatrix::Identity(spec.rank, spec.rank);
  const double dt = 1.0 / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = (k + 0.5) * dt;
    hol = linalg::exp_antihermitian(-dt * spec.form(curve.point(t), curve.velocity(t))) * hol;
  }
  return {std::move(hol), {}, 0, "frame"};
}

int round_sign(cplx value) {
  if (std::abs(value - 1.0) < kSignRoundingThreshold) return 1;
  if (std::abs(value + 1.0) < kSignRoundingThreshold) return -1;
  std::ostringstream os;
  os << "holonomy " << value.real() << (value.imag() < 0 ? "" : "+") << value.imag()
     << "i is not close to +1 or -1; refine the lattice";
  throw Error(ErrorKind::IndeterminateHolonomy, os.str());
}

std::vector<FixedLoopHolonomy> fixed_loop_holonomies(const LinkField& u, const InvolutiveLattice& lat,
                                                     const SewingField& w) {
  std::vector<FixedLoopHolonomy> out;
  for (const auto& loop : fixed_loops(lat)) {
    HolonomyResult h = wilson_loop(u, loop, lat);
    const CMatrix v = linalg::symmetric_unitary_sqrt(w.w.at(static_cast<std::size_t>(loop.base)));
    h.hol = v.adjoint() * h.hol * v;
    h.gauge = "real";
    FixedLoopHolonomy f;
    f.reality_residual = h.hol.imag().norm();
    f.sign = round_sign(h.hol.determinant());
    f.holonomy = std::move(h);
    out.push_back(std::move(f));
  }
  return out;
}

double holonomy_equivariance_check(const LinkField& u, const SewingField& w, const LoopPath& loop,
                                   const InvolutiveLattice& lat) {
  const HolonomyResult h = wilson_loop(u, loop, lat);
  const HolonomyResult ht = wilson_loop(u, map_loop(lat, loop), lat);
  const CMatrix& wb = w.w.at(static_cast<std::size_t>(loop.base));
  return (wb.adjoint() * ht.hol * wb - h.hol.conjugate()).norm();
}

cplx flat_moduli_holonomy(double a) { return std::exp(-kTwoPi * kI * a); }

}  // namespace realbloch
