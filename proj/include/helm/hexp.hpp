#pragma once

#include <vector>

#include "helm/profile.hpp"
#include "helm/su11.hpp"

namespace helm {

enum class HexpMethod { series, ode, opuc };

const char* method_name(HexpMethod method);
HexpMethod method_from_name(const std::string& name);

// E_{+alpha} and E_{-alpha} over one segment, evaluated together: every
// identity of interest (normalization, hyperbolic split) couples the pair.
struct HexpValue {
  Complex e_plus{1.0, 0.0};
  Complex e_minus{1.0, 0.0};
  Complex sigma{0.0, 0.0};
  double seg_lo = 0.0;
  double seg_hi = 0.0;
  HexpMethod method = HexpMethod::ode;
};

struct HyperbolicSet {
  Complex cosh, sinh, sech, tanh;
};

// Tail bound for the order expansion: |sum_{j>=order} C_j| <=
// beta_sigma * alpha_l1^order / order!  (beta_sigma = 1 when Im sigma >= 0,
// exp(2|Im sigma| L) below the axis).
struct TruncationEstimate {
  double beta_sigma = 1.0;
  double alpha_l1 = 0.0;
  int order = 0;
  double bound = 0.0;
};

struct DualValue {
  Complex value;
};

struct SeriesResult {
  HexpValue value;
  std::vector<Complex> terms;     // terms[j-1] = C_j, contribution of order j
  TruncationEstimate truncation;  // tail bound at order max_order+1
};

// (F, G) at the right endpoint of the closed first-order system
//   F' = alpha G,  G' = alpha F + 2 i sigma G,  F(lo) = G(lo) = 1,
// where G is the dual of F.  alpha_sign = -1 integrates with alpha negated.
struct OdePair {
  Complex f, g;
};

// Evaluator selection shared by the higher-level modules.  `resolution`
// means steps for ode, grid_n for series and n for opuc; max_order applies
// to series only.
struct EvalSpec {
  HexpMethod method = HexpMethod::ode;
  int steps = 4096;
  int max_order = 25;
  int grid_n = 4096;
  long long n = 100000;

  long long resolution() const;
  static EvalSpec with(HexpMethod method, long long resolution);
};

// Order-truncated evaluation of the iterated-integral expansion.  Each order
// advances F_j by a derivative-corrected trapezoid step and G_j by a
// phase-exact cubic Hermite step, so accuracy is uniform in sigma.  E_{-alpha}
// costs nothing extra: C_j is homogeneous of degree j in alpha.
SeriesResult eval_series(const Segment& segment, Complex sigma, int max_order,
                         int grid_n);

// Fixed-step fourth-order Runge-Kutta on the closed system, run twice for
// +alpha and -alpha.
HexpValue eval_ode(const Segment& segment, Complex sigma, int steps);
OdePair eval_ode_pair(const Segment& segment, Complex sigma, int steps,
                      double alpha_sign = 1.0);

// Szego-recurrence product with Verblunsky coefficients r_j = Delta *
// alpha(lo + j Delta), evaluated at z = e^{2 i Delta sigma}; converges to the
// pair (E_plus, E_minus) as n grows, empirically at rate O(1/n).
HexpValue eval_opuc(const Segment& segment, Complex sigma, long long n);

// Dispatch to the evaluator selected by spec.method.
HexpValue eval_hexp(const Segment& segment, Complex sigma,
                    const EvalSpec& spec);

TruncationEstimate truncation_estimate(const Segment& segment, Complex sigma,
                                       int order);

// F*(sigma) = e^{2i(hi-lo) sigma} conj(value), where the caller evaluated
// `value` at conj(sigma).  Applying the construction twice returns the
// original evaluation.
DualValue dual(Complex value, Complex sigma, double lo, double hi);

// Cosh = (E_+ + E_-)/2, Sinh = (E_+ - E_-)/2, Sech = 1/Cosh, Tanh = Sinh/Cosh.
HyperbolicSet hyperbolic(const HexpValue& h);

}  // namespace helm
