#include "helm/hexp.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace helm {

namespace {

// Integration moments for one cubic Hermite step against the oscillation
// e^{-i theta u}: a_kl weights the basis element carrying (value, slope) data
// from the (left, right) endpoint.  Built from I_k = int_0^1 e^{beta u} u^k du
// with beta = -i theta; the downward recursion is stable at large |theta|, a
// short Taylor sum takes over near zero where it cancels badly.
struct HermiteMoments {
  Complex a00, a10, a01, a11;
};

HermiteMoments hermite_moments(Complex theta) {
  const Complex beta = Complex(0.0, -1.0) * theta;
  Complex I[4];
  if (std::abs(theta) < 0.5) {
    for (int k = 0; k < 4; ++k) {
      Complex sum = 0.0;
      Complex bp = 1.0;
      double fact = 1.0;
      for (int m = 0; m < 14; ++m) {
        sum += bp / (fact * double(k + m + 1));
        bp *= beta;
        fact *= double(m + 1);
      }
      I[k] = sum;
    }
  } else {
    const Complex e = std::exp(beta);
    I[0] = (e - 1.0) / beta;
    for (int k = 1; k < 4; ++k) I[k] = (e - double(k) * I[k - 1]) / beta;
  }
  return {I[0] - 3.0 * I[2] + 2.0 * I[3], I[1] - 2.0 * I[2] + I[3],
          3.0 * I[2] - 2.0 * I[3], -I[2] + I[3]};
}

// Derivative of alpha for quadrature purposes.  At the two segment endpoints
// of grid data the strict contract has no value, so fall back to the
// interpolant's one-sided slope there.
double quad_deriv(const Segment& seg, double x, std::size_t i, std::size_t n) {
  if (seg.alpha.kind == AlphaKind::grid && (i == 0 || i == n)) {
    const auto& s = seg.alpha.samples;
    const double hg = seg.length() / double(s.size() - 1);
    return i == 0 ? (s[1] - s[0]) / hg
                  : (s[s.size() - 1] - s[s.size() - 2]) / hg;
  }
  return seg.alpha_deriv(x);
}

void check_finite(Complex v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    fail(ErrorCode::non_finite_result,
         std::string(what) + " overflowed or produced NaN");
}

}  // namespace

const char* method_name(HexpMethod method) {
  switch (method) {
    case HexpMethod::series:
      return "series";
    case HexpMethod::ode:
      return "ode";
    case HexpMethod::opuc:
      return "opuc";
  }
  return "?";
}

HexpMethod method_from_name(const std::string& name) {
  if (name == "series") return HexpMethod::series;
  if (name == "ode") return HexpMethod::ode;
  if (name == "opuc") return HexpMethod::opuc;
  fail(ErrorCode::invalid_argument, "unknown method \"" + name +
                                        "\" (expected series, ode or opuc)");
}

long long EvalSpec::resolution() const {
  switch (method) {
    case HexpMethod::series:
      return grid_n;
    case HexpMethod::ode:
      return steps;
    case HexpMethod::opuc:
      return n;
  }
  return 0;
}

EvalSpec EvalSpec::with(HexpMethod method, long long resolution) {
  EvalSpec spec;
  spec.method = method;
  switch (method) {
    case HexpMethod::series:
      spec.grid_n = int(resolution);
      break;
    case HexpMethod::ode:
      spec.steps = int(resolution);
      break;
    case HexpMethod::opuc:
      spec.n = resolution;
      break;
  }
  return spec;
}

HexpValue eval_hexp(const Segment& segment, Complex sigma,
                    const EvalSpec& spec) {
  switch (spec.method) {
    case HexpMethod::series:
      return eval_series(segment, sigma, spec.max_order, spec.grid_n).value;
    case HexpMethod::ode:
      return eval_ode(segment, sigma, spec.steps);
    case HexpMethod::opuc:
      return eval_opuc(segment, sigma, spec.n);
  }
  fail(ErrorCode::invalid_argument, "unknown evaluation method");
}

SeriesResult eval_series(const Segment& segment, Complex sigma, int max_order,
                         int grid_n) {
  if (max_order < 0)
    fail(ErrorCode::invalid_argument, "max_order must be >= 0");
  if (grid_n < 2) fail(ErrorCode::invalid_argument, "grid_n must be >= 2");

  const std::size_t n = std::size_t(grid_n);
  const double h = segment.length() / double(n);
  const Complex two_is = Complex(0.0, 2.0) * sigma;
  const Complex theta = 2.0 * sigma * h;
  const Complex ph = std::exp(Complex(0.0, 1.0) * theta);
  const HermiteMoments mom = hermite_moments(theta);

  std::vector<double> x(n + 1), a(n + 1), da(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    x[i] = (i == n) ? segment.hi : segment.lo + h * double(i);
  for (std::size_t i = 0; i <= n; ++i) {
    a[i] = segment.alpha_at(x[i]);
    da[i] = quad_deriv(segment, x[i], i, n);
  }

  // Two-order history: the step corrections need the derivatives of the
  // current integrands, which involve the previous two orders.
  std::vector<Complex> F(n + 1, Complex(1.0)), G(n + 1);
  std::vector<Complex> Fm(n + 1, Complex(0.0)), Gm(n + 1, Complex(0.0));
  std::vector<Complex> Fn(n + 1), Gn(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    G[i] = std::exp(two_is * (x[i] - segment.lo));

  SeriesResult out;
  out.terms.reserve(std::size_t(max_order));
  for (int j = 1; j <= max_order; ++j) {
    Fn[0] = 0.0;
    Gn[0] = 0.0;
    Complex acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      // f = alpha G_{j-1}; f' via G_{j-1}' = alpha F_{j-2} + 2 i sigma G_{j-1}
      const Complex f0 = a[i] * G[i];
      const Complex f1 = a[i + 1] * G[i + 1];
      const Complex fp0 =
          da[i] * G[i] + a[i] * (a[i] * Fm[i] + two_is * G[i]);
      const Complex fp1 = da[i + 1] * G[i + 1] +
                          a[i + 1] * (a[i + 1] * Fm[i + 1] + two_is * G[i + 1]);
      Fn[i + 1] =
          Fn[i] + 0.5 * h * (f0 + f1) + (h * h / 12.0) * (fp0 - fp1);
      // g = alpha F_{j-1}; g' via F_{j-1}' = alpha G_{j-2}
      const Complex g0 = a[i] * F[i];
      const Complex g1 = a[i + 1] * F[i + 1];
      const Complex gp0 = da[i] * F[i] + a[i] * (a[i] * Gm[i]);
      const Complex gp1 = da[i + 1] * F[i + 1] + a[i + 1] * (a[i + 1] * Gm[i + 1]);
      acc = ph * acc + h * ph * (g0 * mom.a00 + h * gp0 * mom.a10 +
                                 g1 * mom.a01 + h * gp1 * mom.a11);
      Gn[i + 1] = acc;
    }
    out.terms.push_back(Fn[n]);
    std::swap(Fm, F);
    std::swap(Gm, G);
    std::swap(F, Fn);
    std::swap(G, Gn);
  }

  Complex epl = 1.0, emi = 1.0;
  double sign = -1.0;  // C_j flips sign with the parity of j under alpha -> -alpha
  for (const Complex& c : out.terms) {
    epl += c;
    emi += sign * c;
    sign = -sign;
  }
  check_finite(epl, "series evaluation");
  check_finite(emi, "series evaluation");

  out.value = {epl,       emi,        sigma, segment.lo, segment.hi,
               HexpMethod::series};
  out.truncation = truncation_estimate(segment, sigma, max_order + 1);
  return out;
}

OdePair eval_ode_pair(const Segment& segment, Complex sigma, int steps,
                      double alpha_sign) {
  if (steps < 8)
    fail(ErrorCode::step_count_too_small,
         "need at least 8 steps, got " + std::to_string(steps));
  const double h = segment.length() / double(steps);
  const Complex two_is = Complex(0.0, 2.0) * sigma;
  Complex f = 1.0, g = 1.0;
  struct Deriv {
    Complex df, dg;
  };
  auto rhs = [&](double xx, Complex fv, Complex gv) -> Deriv {
    const double av = alpha_sign * segment.alpha_at(xx);
    return {av * gv, av * fv + two_is * gv};
  };
  for (int s = 0; s < steps; ++s) {
    const double x0 = segment.lo + h * double(s);
    const double x1 = (s + 1 == steps) ? segment.hi : x0 + h;
    const double xm = 0.5 * (x0 + x1);
    const Deriv k1 = rhs(x0, f, g);
    const Deriv k2 = rhs(xm, f + 0.5 * h * k1.df, g + 0.5 * h * k1.dg);
    const Deriv k3 = rhs(xm, f + 0.5 * h * k2.df, g + 0.5 * h * k2.dg);
    const Deriv k4 = rhs(x1, f + h * k3.df, g + h * k3.dg);
    f += (h / 6.0) * (k1.df + 2.0 * k2.df + 2.0 * k3.df + k4.df);
    g += (h / 6.0) * (k1.dg + 2.0 * k2.dg + 2.0 * k3.dg + k4.dg);
  }
  check_finite(f, "one-step integration");
  check_finite(g, "one-step integration");
  return {f, g};
}

HexpValue eval_ode(const Segment& segment, Complex sigma, int steps) {
  const OdePair plus = eval_ode_pair(segment, sigma, steps, +1.0);
  const OdePair minus = eval_ode_pair(segment, sigma, steps, -1.0);
  return {plus.f, minus.f, sigma, segment.lo, segment.hi, HexpMethod::ode};
}

HexpValue eval_opuc(const Segment& segment, Complex sigma, long long n) {
  if (n < 1) fail(ErrorCode::invalid_argument, "n must be >= 1");
  const double d = segment.length() / double(n);
  const Complex z = std::exp(Complex(0.0, 2.0) * d * sigma);
  // Two Szego chains run side by side; negating alpha swaps them, so the
  // star polynomials of the pair deliver E_plus and E_minus together.
  Complex psi = 1.0, psi_star = 1.0;
  Complex phi = 1.0, phi_star = 1.0;
  for (long long j = 1; j <= n; ++j) {
    const double y = (j == n) ? segment.hi : segment.lo + d * double(j);
    const double r = d * segment.alpha_at(y);
    if (!(std::abs(r) < 1.0))
      fail(ErrorCode::verblunsky_out_of_range,
           "|r_" + std::to_string(j) + "| = " + std::to_string(std::abs(r)) +
               " is not < 1; n is too small for this alpha");
    const Complex npsi = z * psi + r * psi_star;
    const Complex npsi_star = psi_star + z * r * psi;
    psi = npsi;
    psi_star = npsi_star;
    const Complex nphi = z * phi - r * phi_star;
    const Complex nphi_star = phi_star - z * r * phi;
    phi = nphi;
    phi_star = nphi_star;
  }
  check_finite(psi_star, "grid product");
  check_finite(phi_star, "grid product");
  return {psi_star,   phi_star,   sigma, segment.lo, segment.hi,
          HexpMethod::opuc};
}

TruncationEstimate truncation_estimate(const Segment& segment, Complex sigma,
                                       int order) {
  if (order < 0) fail(ErrorCode::invalid_argument, "order must be >= 0");
  if (order >= 171)
    fail(ErrorCode::order_overflow,
         "order " + std::to_string(order) +
             ": factorial exceeds the double range");
  TruncationEstimate t;
  t.order = order;
  t.alpha_l1 = segment.alpha_l1();
  t.beta_sigma = sigma.imag() >= 0.0
                     ? 1.0
                     : std::exp(2.0 * std::abs(sigma.imag()) * segment.length());
  t.bound = t.beta_sigma * std::pow(t.alpha_l1, double(order)) /
            std::tgamma(double(order) + 1.0);
  return t;
}

DualValue dual(Complex value, Complex sigma, double lo, double hi) {
  return {std::exp(Complex(0.0, 2.0) * (hi - lo) * sigma) * std::conj(value)};
}

HyperbolicSet hyperbolic(const HexpValue& h) {
  const Complex c = 0.5 * (h.e_plus + h.e_minus);
  const Complex s = 0.5 * (h.e_plus - h.e_minus);
  if (std::abs(c) < 1e-300)
    fail(ErrorCode::cosh_zero,
         "Cosh vanishes; this cannot happen for Im sigma >= 0");
  return {c, s, 1.0 / c, s / c};
}

}  // namespace helm
