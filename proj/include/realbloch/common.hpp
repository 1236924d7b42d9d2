#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

namespace realbloch {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Coordinates of a lattice site. Circles use only the first entry; the
/// sphere stores (polar, azimuth).
using Point = std::array<double, 2>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr cplx kI{0.0, 1.0};

enum class ErrorKind {
  InvalidDiscretization,
  Domain,
  Model,
  GapClosure,
  Rank,
  SymmetryInconsistency,
  SingularOverlap,
  BranchCut,
  IndeterminateHolonomy,
  Unsupported,
  Truncation,
  Config,
};

const char* to_string(ErrorKind kind);

/// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Upper bound on worker threads used by data-parallel loops. Defaults to 1.
void set_thread_count(int n);
int thread_count();

}  // namespace realbloch
