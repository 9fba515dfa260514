// The three evaluators for E_{+alpha}, E_{-alpha} and their shared identities.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "closed_form.hpp"
#include "helm/hexp.hpp"

using namespace helm;

namespace {

Segment make_seg(double lo, double hi, AlphaSpec a) {
  Segment s;
  s.lo = lo;
  s.hi = hi;
  s.alpha = a;
  return s;
}

const Segment kConst1 = make_seg(0, 1, AlphaSpec::constant(1.0));
const Segment kBump =
    make_seg(0, 1, AlphaSpec::gaussian_bump(0.8, 0.45, 0.12));

// A frozen reference for constant alpha=1, L=1, sigma=2, cross-checked
// against the closed form and two integrators before being pinned here.
const Complex kE12(0.8660142617401481, 0.8464696295497711);

Segment random_segment(std::mt19937& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double lo = -1.0 + 2.0 * unif(rng);
  double L = 0.3 + 1.2 * unif(rng);
  double hi = lo + L;
  switch (rng() % 4) {
    case 0:
      return make_seg(lo, hi, AlphaSpec::constant(-1.5 + 3.0 * unif(rng)));
    case 1:
      return make_seg(lo, hi,
                      AlphaSpec::linear(-1.0 + 2.0 * unif(rng),
                                        -1.0 + 2.0 * unif(rng)));
    case 2:
      return make_seg(
          lo, hi,
          AlphaSpec::gaussian_bump(-1.0 + 2.0 * unif(rng),
                                   lo + (0.2 + 0.6 * unif(rng)) * L,
                                   (0.08 + 0.22 * unif(rng)) * L));
    default: {
      double amp = -1.0 + 2.0 * unif(rng);
      double omega = 1.0 + 5.0 * unif(rng);
      double phase = 6.28 * unif(rng);
      std::vector<double> s(257);
      for (int i = 0; i < 257; ++i)
        s[i] = amp * std::sin(omega * (lo + L * i / 256.0) + phase);
      return make_seg(lo, hi, AlphaSpec::grid(std::move(s)));
    }
  }
}

}  // namespace

TEST_CASE("zero alpha gives the identity value for every method") {
  Segment s = make_seg(-0.5, 1.5, AlphaSpec::zero());
  for (Complex sigma : {Complex(0, 0), Complex(3, 0), Complex(1.2, 0.7)}) {
    SeriesResult sr = eval_series(s, sigma, 10, 64);
    CHECK(std::abs(sr.value.e_plus - 1.0) < 1e-14);
    CHECK(std::abs(sr.value.e_minus - 1.0) < 1e-14);
    HexpValue od = eval_ode(s, sigma, 64);
    CHECK(std::abs(od.e_plus - 1.0) < 1e-14);
    HexpValue op = eval_opuc(s, sigma, 500);
    CHECK(std::abs(op.e_plus - 1.0) < 1e-14);
    CHECK(std::abs(op.e_minus - 1.0) < 1e-14);
    // G decouples to the free phase
    OdePair pair = eval_ode_pair(s, sigma, 4096);
    Complex free_phase = std::exp(Complex(0, 2) * sigma * s.length());
    CHECK(std::abs(pair.g - free_phase) < 1e-10 * std::abs(free_phase));
  }
}

TEST_CASE("sigma = 0 collapses to exp of the integral of alpha") {
  const double I1 = 1.0;  // integral of constant 1 over (0,1)
  SeriesResult sr = eval_series(kConst1, 0.0, 20, 1024);
  CHECK(std::abs(sr.value.e_plus - std::exp(I1)) < 1e-12);
  CHECK(std::abs(sr.value.e_minus - std::exp(-I1)) < 1e-12);

  HexpValue od = eval_ode(kConst1, 0.0, 2048);
  CHECK(std::abs(od.e_plus - std::exp(1.0)) < 1e-10);
  CHECK(std::abs(od.e_minus - std::exp(-1.0)) < 1e-10);

  HexpValue op = eval_opuc(kConst1, 0.0, 10000);
  CHECK(std::abs(op.e_plus - std::exp(1.0)) < 2e-4);

  double Ib = 0.24061448735299415;  // integral of the bump over (0,1)
  SeriesResult sb = eval_series(kBump, 0.0, 20, 2048);
  CHECK(std::abs(sb.value.e_plus - std::exp(Ib)) < 1e-10);
  CHECK(std::abs(sb.value.e_minus - std::exp(-Ib)) < 1e-10);
}

TEST_CASE("constant alpha matches the closed form") {
  const Complex sigma(2.0, 0.0);
  const Complex want_p = oracle::closed_form_E(1.0, 1.0, sigma);
  const Complex want_m = oracle::closed_form_E(-1.0, 1.0, sigma);
  CHECK(std::abs(want_p - kE12) < 5e-15);

  SeriesResult sr = eval_series(kConst1, sigma, 25, 4096);
  CHECK(std::abs(sr.value.e_plus - want_p) < 1e-8);
  CHECK(std::abs(sr.value.e_minus - want_m) < 1e-8);
  CHECK(std::abs(sr.value.e_plus - kE12) < 1e-9);

  HexpValue od = eval_ode(kConst1, sigma, 4096);
  CHECK(std::abs(od.e_plus - want_p) < 1e-9);
  CHECK(std::abs(od.e_minus - want_m) < 1e-9);

  HexpValue op = eval_opuc(kConst1, sigma, 100000);
  CHECK(std::abs(op.e_plus - want_p) < 1e-4);
  CHECK(std::abs(op.e_minus - want_m) < 1e-4);

  // complex frequency, both half-planes
  for (Complex cs : {Complex(1.5, 0.8), Complex(0.7, -0.3)}) {
    HexpValue oc = eval_ode(kConst1, cs, 4096);
    CHECK(std::abs(oc.e_plus - oracle::closed_form_E(1.0, 1.0, cs)) < 1e-9);
    SeriesResult sc = eval_series(kConst1, cs, 25, 2048);
    CHECK(std::abs(sc.value.e_plus - oracle::closed_form_E(1.0, 1.0, cs)) <
          1e-9);
  }
}

TEST_CASE("first two expansion terms match direct quadrature") {
  const Complex sigma(1.5, 0.0);
  SeriesResult sr = eval_series(kBump, sigma, 6, 4096);

  const int n = 200000;
  const double h = 1.0 / n;
  const Complex two_is = Complex(0, 2) * sigma;
  // C1 = int alpha(x) e^{2 i sigma x} dx; C2 = int alpha(t) G1(t) dt with
  // G1(t) = e^{2 i sigma t} int_0^t e^{-2 i sigma s} alpha(s) ds.
  Complex c1 = 0.0, c2 = 0.0, prefix = 0.0;
  auto alpha = [&](double x) { return kBump.alpha_at(x); };
  double prev_x = 0.0;
  Complex prev_f = alpha(0.0);      // e^{-0} alpha(0)
  Complex prev_g1_int = 0.0;        // G1(0) = 0
  for (int i = 1; i <= n; ++i) {
    double x = i * h;
    Complex em = std::exp(-two_is * x);
    Complex f = alpha(x) * em;
    prefix += 0.5 * h * (prev_f + f);
    Complex g1 = std::exp(two_is * x) * prefix;
    Complex c1_term = alpha(x) * std::exp(two_is * x);
    Complex c2_term = alpha(x) * g1;
    c1 += 0.5 * h * (alpha(prev_x) * std::exp(two_is * prev_x) + c1_term);
    c2 += 0.5 * h * (prev_g1_int + c2_term);
    prev_x = x;
    prev_f = f;
    prev_g1_int = c2_term;
  }
  CHECK(std::abs(sr.terms[0] - c1) < 1e-8);
  CHECK(std::abs(sr.terms[1] - c2) < 1e-8);
}

TEST_CASE("the three methods agree on random segments") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> sig(-20.0, 20.0);
  for (int k = 0; k < 50; ++k) {
    Segment s = random_segment(rng);
    Complex sigma(sig(rng), 0.0);
    SeriesResult sr = eval_series(s, sigma, 25, 4096);
    HexpValue od = eval_ode(s, sigma, 4096);
    HexpValue op = eval_opuc(s, sigma, 100000);
    CHECK(std::abs(sr.value.e_plus - od.e_plus) < 1e-7);
    CHECK(std::abs(sr.value.e_minus - od.e_minus) < 1e-7);
    CHECK(std::abs(op.e_plus - od.e_plus) < 1e-3);
    CHECK(std::abs(op.e_minus - od.e_minus) < 1e-3);
  }
}

TEST_CASE("normalization: Re(E+ conj(E-)) = 1 on the real axis") {
  for (double s : {-15.0, -3.0, -0.5, 0.0, 1.0, 2.7, 8.0, 19.0}) {
    HexpValue od = eval_ode(kBump, Complex(s, 0.0), 4096);
    CHECK(std::real(od.e_plus * std::conj(od.e_minus)) ==
          doctest::Approx(1.0).epsilon(1e-8));
    SeriesResult sr = eval_series(kConst1, Complex(s, 0.0), 25, 4096);
    CHECK(std::real(sr.value.e_plus * std::conj(sr.value.e_minus)) ==
          doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("|E+ + E-| stays above sqrt(2) in the closed upper half-plane") {
  Segment lin = make_seg(0, 1, AlphaSpec::linear(0.9, -1.4));
  for (double re : {-5.0, -2.0, 0.0, 1.0, 4.0}) {
    for (double im : {0.0, 0.5, 2.0, 5.0}) {
      for (const Segment& s : {kBump, lin}) {
        HexpValue od = eval_ode(s, Complex(re, im), 4096);
        CHECK(std::abs(od.e_plus + od.e_minus) >= std::sqrt(2.0) - 1e-8);
      }
    }
  }
}

TEST_CASE("high-frequency limit: E -> 1 monotonically over three decades") {
  double gaps[3];
  int i = 0;
  for (double s : {1e2, 1e3, 1e4}) {
    SeriesResult sr = eval_series(kBump, Complex(s, 0.0), 12, 65536);
    gaps[i++] = std::abs(sr.value.e_plus - 1.0);
  }
  CHECK(gaps[0] > gaps[1]);
  CHECK(gaps[1] > gaps[2]);
  CHECK(gaps[2] < 1e-4);
}

TEST_CASE("Sech is positive at sigma = i") {
  HexpValue od = eval_ode(kConst1, Complex(0.0, 1.0), 4096);
  HyperbolicSet h = hyperbolic(od);
  CHECK(std::abs(h.sech.imag()) < 1e-9);
  CHECK(h.sech.real() == doctest::Approx(0.7664726621862757).epsilon(1e-10));

  SeriesResult sr = eval_series(kBump, Complex(0.0, 1.0), 25, 4096);
  HyperbolicSet hb = hyperbolic(sr.value);
  CHECK(std::abs(hb.sech.imag()) < 1e-9);
  CHECK(hb.sech.real() > 0.0);
}

TEST_CASE("truncation estimate bounds the dropped tail") {
  struct Case {
    Segment seg;
    Complex sigma;
  };
  std::vector<Case> cases = {
      {kBump, Complex(2.0, 0.0)},
      {kBump, Complex(6.0, 0.0)},
      {kBump, Complex(1.0, 1.0)},
      {make_seg(0, 1, AlphaSpec::linear(0.5, -2.0)), Complex(0.0, 0.0)},
  };
  for (const Case& c : cases) {
    SeriesResult low = eval_series(c.seg, c.sigma, 6, 4096);
    SeriesResult high = eval_series(c.seg, c.sigma, 16, 4096);
    double tail = std::abs(high.value.e_plus - low.value.e_plus);
    CHECK(low.truncation.order == 7);
    CHECK(tail <= low.truncation.bound);
    double tail_m = std::abs(high.value.e_minus - low.value.e_minus);
    CHECK(tail_m <= low.truncation.bound);
  }

  // beta_sigma kicks in below the axis
  TruncationEstimate below =
      truncation_estimate(kConst1, Complex(1.0, -2.0), 5);
  CHECK(below.beta_sigma == doctest::Approx(std::exp(4.0)));
  TruncationEstimate above = truncation_estimate(kConst1, Complex(1.0, 2.0), 5);
  CHECK(above.beta_sigma == 1.0);
  CHECK(above.alpha_l1 == doctest::Approx(1.0));
  CHECK(above.bound == doctest::Approx(1.0 / 120.0));
}

TEST_CASE("order overflow is reported, not silently saturated") {
  try {
    truncation_estimate(kConst1, Complex(1.0, 0.0), 171);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::order_overflow);
  }
  CHECK_THROWS_AS(eval_series(kConst1, Complex(1.0, 0.0), 170, 64), Error);
  CHECK_NOTHROW(truncation_estimate(kConst1, Complex(1.0, 0.0), 170));
}

TEST_CASE("duality") {
  SUBCASE("phase factor on the trivial value") {
    DualValue d = dual(Complex(1.0, 0.0), Complex(M_PI, 0.0), 0.0, 0.5);
    CHECK(d.value.real() == doctest::Approx(-1.0));
    CHECK(std::abs(d.value.imag()) < 1e-12);
  }
  SUBCASE("involution on 100 random inputs") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    for (int k = 0; k < 100; ++k) {
      Complex v(unif(rng), unif(rng));
      Complex sigma(unif(rng), unif(rng));
      double lo = unif(rng);
      double hi = lo + 0.1 + std::abs(unif(rng));
      Complex once = dual(v, std::conj(sigma), lo, hi).value;
      Complex twice = dual(once, sigma, lo, hi).value;
      CHECK(std::abs(twice - v) < 1e-12 * std::max(1.0, std::abs(v)));
    }
  }
  SUBCASE("G is the dual of F along the integration") {
    for (Complex sigma : {Complex(2.0, 0.0), Complex(1.3, 0.4)}) {
      OdePair at_conj = eval_ode_pair(kBump, std::conj(sigma), 4096);
      OdePair at_sigma = eval_ode_pair(kBump, sigma, 4096);
      Complex predicted = dual(at_conj.f, sigma, kBump.lo, kBump.hi).value;
      CHECK(std::abs(predicted - at_sigma.g) < 1e-10);
    }
  }
}

TEST_CASE("hyperbolic set") {
  SUBCASE("trivial value") {
    HexpValue h;
    h.e_plus = h.e_minus = 1.0;
    HyperbolicSet hs = hyperbolic(h);
    CHECK(hs.cosh == Complex(1.0, 0.0));
    CHECK(hs.sinh == Complex(0.0, 0.0));
    CHECK(hs.sech == Complex(1.0, 0.0));
    CHECK(hs.tanh == Complex(0.0, 0.0));
  }
  SUBCASE("sigma = 0 reduces to scalar hyperbolics") {
    SeriesResult sr = eval_series(kConst1, 0.0, 25, 1024);
    HyperbolicSet hs = hyperbolic(sr.value);
    CHECK(hs.cosh.real() == doctest::Approx(std::cosh(1.0)).epsilon(1e-10));
    CHECK(hs.tanh.real() == doctest::Approx(std::tanh(1.0)).epsilon(1e-10));
  }
  SUBCASE("|Cosh|^2 - |Sinh|^2 = 1 on the real axis") {
    HexpValue od = eval_ode(kConst1, Complex(2.0, 0.0), 4096);
    HyperbolicSet hs = hyperbolic(od);
    CHECK(std::norm(hs.cosh) - std::norm(hs.sinh) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(hs.cosh * hs.sech - 1.0) < 1e-14);
    CHECK(std::abs(hs.tanh - hs.sinh * hs.sech) < 1e-14);
  }
  SUBCASE("vanishing Cosh is an error") {
    HexpValue h;
    h.e_plus = 1.0;
    h.e_minus = -1.0;
    try {
      hyperbolic(h);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::cosh_zero);
    }
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(eval_ode(kConst1, 1.0, 4), Error);
  try {
    eval_ode(kConst1, 1.0, 7);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::step_count_too_small);
  }
  CHECK_THROWS_AS(eval_series(kConst1, 1.0, -1, 64), Error);
  CHECK_THROWS_AS(eval_series(kConst1, 1.0, 5, 1), Error);
  try {
    eval_opuc(make_seg(0, 1, AlphaSpec::constant(50.0)), 1.0, 10);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::verblunsky_out_of_range);
  }
}
