#pragma once

#include <vector>

#include "helm/errors.hpp"
#include "helm/su11.hpp"

namespace helm {

// alpha = -1/2 (log zeta)' is the stored primitive on each absolutely
// continuous piece; zeta is always reconstructed from it.
enum class AlphaKind { zero, constant, linear, gaussian_bump, grid };

struct AlphaSpec {
  AlphaKind kind = AlphaKind::zero;

  double value = 0.0;   // constant
  double value0 = 0.0;  // linear: alpha at the segment's left endpoint
  double slope = 0.0;   // linear
  double amplitude = 0.0;  // gaussian bump
  double center = 0.0;
  double width = 0.0;
  std::vector<double> samples;  // grid: uniform over [lo, hi], endpoints included

  static AlphaSpec zero();
  static AlphaSpec constant(double value);
  static AlphaSpec linear(double value0, double slope);
  static AlphaSpec gaussian_bump(double amplitude, double center, double width);
  static AlphaSpec grid(std::vector<double> samples);
};

struct Segment {
  double lo = 0.0;
  double hi = 1.0;
  AlphaSpec alpha;

  double length() const { return hi - lo; }

  double alpha_at(double x) const;
  // Derivative of the stored alpha.  Grid data differentiates the linear
  // interpolant: central difference at interior sample points, cell slope
  // between them, BoundaryPoint at the first and last sample.
  double alpha_deriv(double x) const;
  // Exact integral of the stored form over [a, b] (signed when a > b).
  double alpha_integral(double a, double b) const;
  double alpha_l1() const;   // integral of |alpha| over [lo, hi], exact
  double alpha_sup() const;  // sup of |alpha| over [lo, hi]

  // Sub-segment on [a, b] evaluating to the same alpha.  Grid data is sliced
  // when a and b sit on sample points, otherwise resampled at the original
  // density.
  Segment restricted(double a, double b) const;
};

struct JumpPoint {
  double y = 0.0;
  double gamma = 1.0;  // zeta(y-)/zeta(y+); 1 encodes continuity
};

struct ImpedanceProfile {
  double x0 = 0.0;
  std::vector<Segment> segments;  // tile (x0, x1), strictly increasing
  std::vector<JumpPoint> jumps;   // one per interior breakpoint, in order
  double zeta_left = 1.0;         // zeta(x0+)

  double x1() const;
  void validate() const;  // throws Error on any structural violation

  // Index of the segment whose closed interval contains x; ties at interior
  // breakpoints resolve to the right segment.
  std::size_t segment_index(double x) const;
};

// zeta reconstructed from zeta_left, alpha and the jump ratios.  Defined on
// x0 < x < x1; at a jump location with gamma != 1 the two-sided value is
// ambiguous and BoundaryPoint is raised (use the one-sided variants).
double zeta_at(const ImpedanceProfile& profile, double x);
// One-sided limits; these extend to x0 (right limit) and x1 (left limit).
double zeta_before(const ImpedanceProfile& profile, double x);
double zeta_after(const ImpedanceProfile& profile, double x);

// J(gamma) = 1/(2 sqrt(gamma)) [[1+gamma, 1-gamma], [1-gamma, 1+gamma]],
// the transfer matrix across a zeta discontinuity; det J = 1.
Su11Matrix jump_matrix(double gamma);

// q = alpha^2 - alpha', the potential paired with alpha by the Miura map.
double miura_potential(const Segment& segment, double x);

struct FactorizedProfile {
  ImpedanceProfile step;  // alpha == 0, original jumps, zeta_left = 1
  ImpedanceProfile ac;    // original alpha, gamma == 1 everywhere
};

// Splits zeta into (piecewise constant) x (absolutely continuous); the
// reconstructed product equals the original zeta exactly.
FactorizedProfile factorize(const ImpedanceProfile& profile);

}  // namespace helm
