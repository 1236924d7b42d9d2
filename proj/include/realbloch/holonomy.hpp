#pragma once

#include "realbloch/berry.hpp"
#include "realbloch/common.hpp"
#include "realbloch/lattice.hpp"
#include "realbloch/symmetry.hpp"

#include <functional>
#include <string>
#include <vector>

namespace realbloch {

/// Holonomy of a loop in the frame gauge at its base site. Only its
/// conjugacy class is gauge invariant.
struct HolonomyResult {
  CMatrix hol;
  LoopPath loop;
  int base = 0;
  std::string gauge;  // "frame" or "real"
};

struct FixedLoopHolonomy {
  HolonomyResult holonomy;  // in a Theta-fixed (real) gauge at the base site
  double reality_residual = 0.0;
  /// Rounded det(hol), which is the holonomy itself for line bundles.
  int sign = 0;
};

struct ParametrizedCurve {
  std::function<Point(double)> point;
  std::function<Point(double)> velocity;
};

/// Ordered transport around the loop. Each step contributes the adjoint of its
/// overlap; later steps multiply on the left, so
/// wilson_loop(a then b) = wilson_loop(b) * wilson_loop(a).
HolonomyResult wilson_loop(const LinkField& u, const LoopPath& loop, const InvolutiveLattice& lat);

/// Product of exp(-A(x(t), x'(t)) dt) over `steps` midpoint intervals of [0, 1].
HolonomyResult continuum_holonomy(const ProductConnectionSpec& spec, const ParametrizedCurve& curve,
                                  int steps);

/// For each fixed loop: Wilson loop rotated into the real gauge W = V V^T at
/// the base, |Im hol| as reality residual, and the rounded sign.
std::vector<FixedLoopHolonomy> fixed_loop_holonomies(const LinkField& u, const InvolutiveLattice& lat,
                                                     const SewingField& w);

/// |W(base)^dag hol(tau loop) W(base) - conj(hol(loop))|.
double holonomy_equivariance_check(const LinkField& u, const SewingField& w, const LoopPath& loop,
                                   const InvolutiveLattice& lat);

/// Holonomy e^{-2 pi i a} of the flat Real connection i a d(theta) on the
/// reflection circle.
cplx flat_moduli_holonomy(double a);

/// Rounds a value expected near +1 or -1. Throws IndeterminateHolonomy when
/// it is not within 0.3 of either.
int round_sign(cplx value);

inline constexpr double kSignRoundingThreshold = 0.3;

}  // namespace realbloch
