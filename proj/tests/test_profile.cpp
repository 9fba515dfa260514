// Impedance profiles: alpha forms, zeta reconstruction, jumps, factorization.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "helm/profile.hpp"
#include "helm/profile_io.hpp"

using namespace helm;

namespace {

ImpedanceProfile single(Segment seg, double zeta_left = 1.0) {
  ImpedanceProfile p;
  p.x0 = seg.lo;
  p.zeta_left = zeta_left;
  p.segments = {seg};
  return p;
}

Segment make_seg(double lo, double hi, AlphaSpec a) {
  Segment s;
  s.lo = lo;
  s.hi = hi;
  s.alpha = a;
  return s;
}

std::string fixture(const char* name) {
  return std::string(HELM_FIXTURES_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("alpha forms evaluate, differentiate and integrate correctly") {
  SUBCASE("zero") {
    Segment s = make_seg(0, 1, AlphaSpec::zero());
    CHECK(s.alpha_at(0.3) == 0.0);
    CHECK(s.alpha_deriv(0.3) == 0.0);
    CHECK(s.alpha_integral(0, 1) == 0.0);
    CHECK(s.alpha_l1() == 0.0);
    CHECK(s.alpha_sup() == 0.0);
  }
  SUBCASE("constant") {
    Segment s = make_seg(0, 2, AlphaSpec::constant(-1.5));
    CHECK(s.alpha_at(1.7) == -1.5);
    CHECK(s.alpha_deriv(0.2) == 0.0);
    CHECK(s.alpha_integral(0.5, 1.5) == doctest::Approx(-1.5));
    CHECK(s.alpha_l1() == doctest::Approx(3.0));
    CHECK(s.alpha_sup() == 1.5);
  }
  SUBCASE("linear, sign change inside") {
    // alpha = 1 - 2(x-0): root at x = 0.5
    Segment s = make_seg(0, 1, AlphaSpec::linear(1.0, -2.0));
    CHECK(s.alpha_at(0.25) == doctest::Approx(0.5));
    CHECK(s.alpha_deriv(0.9) == -2.0);
    CHECK(s.alpha_integral(0, 1) == doctest::Approx(0.0));
    CHECK(s.alpha_l1() == doctest::Approx(0.5));  // two triangles of area 1/4
    CHECK(s.alpha_sup() == doctest::Approx(1.0));
  }
  SUBCASE("gaussian bump") {
    Segment s = make_seg(0, 1, AlphaSpec::gaussian_bump(0.8, 0.45, 0.12));
    CHECK(s.alpha_at(0.45) == doctest::Approx(0.8));
    CHECK(s.alpha_deriv(0.45) == doctest::Approx(0.0));
    // d/dx at center + width is -A e^{-1/2}/width
    CHECK(s.alpha_deriv(0.57) ==
          doctest::Approx(-0.8 * std::exp(-0.5) / 0.12));
    CHECK(s.alpha_integral(0, 1) == doctest::Approx(0.24061448735299415).epsilon(1e-12));
    CHECK(s.alpha_l1() == doctest::Approx(0.24061448735299415).epsilon(1e-12));
    CHECK(s.alpha_sup() == doctest::Approx(0.8));
    // off-center segment: sup attained at the nearest endpoint
    Segment t = make_seg(0.6, 1.0, AlphaSpec::gaussian_bump(0.8, 0.45, 0.12));
    CHECK(t.alpha_sup() == doctest::Approx(t.alpha_at(0.6)));
  }
  SUBCASE("grid interpolation") {
    Segment s = make_seg(0, 1, AlphaSpec::grid({0.0, 1.0, 0.0, -1.0, 0.0}));
    CHECK(s.alpha_at(0.25) == doctest::Approx(1.0));
    CHECK(s.alpha_at(0.125) == doctest::Approx(0.5));
    CHECK(s.alpha_at(1.0) == doctest::Approx(0.0));
    CHECK(s.alpha_deriv(0.1) == doctest::Approx(4.0));   // cell slope
    CHECK(s.alpha_deriv(0.25) == doctest::Approx(0.0));  // central difference
    CHECK(s.alpha_integral(0, 1) == doctest::Approx(0.0));
    CHECK(s.alpha_integral(0, 0.5) == doctest::Approx(0.25));
    CHECK(s.alpha_integral(0.125, 0.25) == doctest::Approx(0.09375));
    CHECK(s.alpha_l1() == doctest::Approx(0.5));
    CHECK(s.alpha_sup() == 1.0);
    for (double edge : {0.0, 1.0}) {
      try {
        s.alpha_deriv(edge);
        CHECK(false);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::boundary_point);
      }
    }
  }
}

TEST_CASE("restricted sub-segments reproduce the parent alpha") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  Segment lin = make_seg(1.0, 3.0, AlphaSpec::linear(0.4, 0.7));
  Segment cut = lin.restricted(1.5, 2.5);
  for (int i = 0; i < 20; ++i) {
    double x = 1.5 + unif(rng);
    CHECK(cut.alpha_at(x) == doctest::Approx(lin.alpha_at(x)).epsilon(1e-14));
  }

  Segment grid = make_seg(0, 1, AlphaSpec::grid({0.0, 1.0, 0.0, -1.0, 0.0}));
  Segment aligned = grid.restricted(0.25, 0.75);
  CHECK(aligned.alpha.samples.size() == 3);
  for (int i = 0; i < 20; ++i) {
    double x = 0.25 + 0.5 * unif(rng);
    CHECK(aligned.alpha_at(x) ==
          doctest::Approx(grid.alpha_at(x)).epsilon(1e-14));
  }
  // off-node cut resamples; exact only where the interpolant is linear
  Segment off = grid.restricted(0.3, 0.7);
  CHECK(off.alpha_at(0.3) == doctest::Approx(grid.alpha_at(0.3)));
  CHECK(off.alpha_at(0.7) == doctest::Approx(grid.alpha_at(0.7)));

  CHECK_THROWS_AS(lin.restricted(0.5, 2.0), Error);
}

TEST_CASE("zeta reconstruction") {
  SUBCASE("constant profile stays 1") {
    ImpedanceProfile p = single(make_seg(0, 1, AlphaSpec::zero()));
    CHECK(zeta_at(p, 0.123) == doctest::Approx(1.0));
    CHECK(zeta_at(p, 0.999) == doctest::Approx(1.0));
  }
  SUBCASE("constant alpha gives exponential decay") {
    ImpedanceProfile p = single(make_seg(0, 1, AlphaSpec::constant(1.0)));
    CHECK(zeta_at(p, 0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }
  SUBCASE("jump divides by gamma") {
    ImpedanceProfile p;
    p.x0 = 0;
    p.zeta_left = 1.0;
    p.segments = {make_seg(0, 0.5, AlphaSpec::zero()),
                  make_seg(0.5, 1, AlphaSpec::zero())};
    p.jumps = {{0.5, 4.0}};
    CHECK(zeta_at(p, 0.75) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(zeta_at(p, 0.25) == doctest::Approx(1.0));
    CHECK(zeta_before(p, 0.5) == doctest::Approx(1.0));
    CHECK(zeta_after(p, 0.5) == doctest::Approx(0.25));
    try {
      zeta_at(p, 0.5);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::boundary_point);
    }
    try {
      zeta_at(p, 1.5);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::out_of_domain);
    }
    // endpoints via one-sided limits
    CHECK(zeta_after(p, 0.0) == doctest::Approx(1.0));
    CHECK(zeta_before(p, 1.0) == doctest::Approx(0.25));
  }
  SUBCASE("round trip through sampled alpha is O(h^2)") {
    // zeta = exp(cos 3x) on (0,1): alpha = -1/2 (log zeta)' = 3/2 sin 3x
    const int m = 257;
    std::vector<double> samples(m);
    for (int i = 0; i < m; ++i) {
      double x = double(i) / (m - 1);
      samples[i] = 1.5 * std::sin(3.0 * x);
    }
    ImpedanceProfile p =
        single(make_seg(0, 1, AlphaSpec::grid(samples)), std::exp(1.0));
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> unif(0.01, 0.99);
    for (int k = 0; k < 50; ++k) {
      double x = unif(rng);
      double expected = std::exp(std::cos(3.0 * x));
      CHECK(zeta_at(p, x) == doctest::Approx(expected).epsilon(5e-5));
    }
  }
}

TEST_CASE("jump matrices") {
  SUBCASE("gamma = 1 is the identity") {
    Su11Matrix j = jump_matrix(1.0);
    CHECK(j.z == Complex(1.0, 0.0));
    CHECK(j.w == Complex(0.0, 0.0));
  }
  SUBCASE("gamma = 4 and 1/4 match the closed form") {
    Su11Matrix j4 = jump_matrix(4.0);
    auto m = j4.full();
    CHECK(m[0][0].real() == doctest::Approx(1.25));
    CHECK(m[0][1].real() == doctest::Approx(-0.75));
    CHECK(m[1][0].real() == doctest::Approx(-0.75));
    CHECK(m[1][1].real() == doctest::Approx(1.25));
    CHECK(j4.det() == doctest::Approx(1.0).epsilon(1e-15));

    Su11Matrix jq = jump_matrix(0.25);
    auto q = jq.full();
    CHECK(q[0][0].real() == doctest::Approx(1.25));
    CHECK(q[0][1].real() == doctest::Approx(0.75));
  }
  SUBCASE("inverse-jump symmetry and Lambda-unitarity, 1000 random gammas") {
    std::mt19937 rng(1234);
    std::uniform_real_distribution<double> expo(-3.0, 3.0);
    for (int k = 0; k < 1000; ++k) {
      double gamma = std::pow(10.0, expo(rng));
      Su11Matrix j = jump_matrix(gamma);
      Su11Matrix jinv = jump_matrix(1.0 / gamma);
      Su11Matrix prod = mul(j, jinv);
      CHECK(std::abs(prod.z - 1.0) < 1e-12);
      CHECK(std::abs(prod.w) < 1e-12);
      CHECK(j.det() == doctest::Approx(1.0).epsilon(1e-12));
      // J real symmetric: Lambda J^T Lambda = Lambda J Lambda must equal J^{-1}
      auto f = j.full();
      auto inv = j.inverse().full();
      CHECK(std::abs(f[0][0] - inv[0][0]) < 1e-12);
      CHECK(std::abs(-f[0][1] - inv[0][1]) < 1e-12);
      CHECK(std::abs(-f[1][0] - inv[1][0]) < 1e-12);
      CHECK(std::abs(f[1][1] - inv[1][1]) < 1e-12);
    }
  }
  SUBCASE("rejects gamma <= 0") {
    try {
      jump_matrix(-2.0);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::non_positive_gamma);
    }
  }
}

TEST_CASE("Miura potential") {
  CHECK(miura_potential(make_seg(0, 1, AlphaSpec::zero()), 0.5) == 0.0);
  CHECK(miura_potential(make_seg(0, 1, AlphaSpec::constant(3.0)), 0.2) ==
        doctest::Approx(9.0));

  // alpha(x) = x sampled on a grid with h = 1e-3: q = x^2 - 1
  const int m = 1001;
  std::vector<double> samples(m);
  for (int i = 0; i < m; ++i) samples[i] = double(i) / (m - 1);
  Segment s = make_seg(0, 1, AlphaSpec::grid(samples));
  CHECK(miura_potential(s, 0.5) == doctest::Approx(-0.75).epsilon(1e-6));
  try {
    miura_potential(s, 0.0);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::boundary_point);
  }
}

TEST_CASE("factorization splits zeta into step times AC") {
  ImpedanceProfile p = load_profile(fixture("twojump.json"));
  FactorizedProfile f = factorize(p);

  CHECK(f.step.zeta_left == 1.0);
  for (const Segment& seg : f.step.segments)
    CHECK(seg.alpha.kind == AlphaKind::zero);
  for (const JumpPoint& j : f.ac.jumps) CHECK(j.gamma == 1.0);

  for (int i = 0; i < 100; ++i) {
    double x = p.x0 + (p.x1() - p.x0) * (i + 0.5) / 100.0;
    double product = zeta_at(f.step, x) * zeta_at(f.ac, x);
    CHECK(std::abs(product - zeta_at(p, x)) < 1e-10);
  }

  // step factor is piecewise constant
  CHECK(zeta_at(f.step, 0.0) == doctest::Approx(zeta_at(f.step, 0.29)));
  CHECK(zeta_at(f.step, 0.31) == doctest::Approx(zeta_at(f.step, 0.79)));

  // pure AC profile: step factor is constant 1
  ImpedanceProfile ac = load_profile(fixture("bump.json"));
  FactorizedProfile g = factorize(ac);
  CHECK(zeta_at(g.step, 0.7) == doctest::Approx(1.0));
  CHECK(zeta_at(g.ac, 0.7) == doctest::Approx(zeta_at(ac, 0.7)));
}

TEST_CASE("profile validation rejects malformed structures") {
  ImpedanceProfile p = single(make_seg(0, 1, AlphaSpec::zero()));
  CHECK_NOTHROW(p.validate());

  SUBCASE("empty") {
    ImpedanceProfile q;
    q.segments.clear();
    CHECK_THROWS_AS(q.validate(), Error);
  }
  SUBCASE("gap between segments") {
    ImpedanceProfile q;
    q.x0 = 0;
    q.segments = {make_seg(0, 0.4, AlphaSpec::zero()),
                  make_seg(0.5, 1, AlphaSpec::zero())};
    q.jumps = {{0.4, 1.0}};
    try {
      q.validate();
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::invalid_profile);
    }
  }
  SUBCASE("jump off the boundary") {
    ImpedanceProfile q;
    q.x0 = 0;
    q.segments = {make_seg(0, 0.5, AlphaSpec::zero()),
                  make_seg(0.5, 1, AlphaSpec::zero())};
    q.jumps = {{0.45, 2.0}};
    try {
      q.validate();
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::invalid_profile);
    }
  }
  SUBCASE("wrong jump count") {
    ImpedanceProfile q;
    q.x0 = 0;
    q.segments = {make_seg(0, 0.5, AlphaSpec::zero()),
                  make_seg(0.5, 1, AlphaSpec::zero())};
    CHECK_THROWS_AS(q.validate(), Error);
  }
  SUBCASE("bad gamma") {
    ImpedanceProfile q;
    q.x0 = 0;
    q.segments = {make_seg(0, 0.5, AlphaSpec::zero()),
                  make_seg(0.5, 1, AlphaSpec::zero())};
    q.jumps = {{0.5, 0.0}};
    try {
      q.validate();
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::non_positive_gamma);
    }
  }
  SUBCASE("bad zeta_left") {
    ImpedanceProfile q = single(make_seg(0, 1, AlphaSpec::zero()), -1.0);
    CHECK_THROWS_AS(q.validate(), Error);
  }
  SUBCASE("non-finite grid sample") {
    ImpedanceProfile q = single(
        make_seg(0, 1, AlphaSpec::grid({0.0, std::nan(""), 0.0})));
    try {
      q.validate();
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::non_finite_alpha);
    }
  }
  SUBCASE("too few grid samples") {
    ImpedanceProfile q = single(make_seg(0, 1, AlphaSpec::grid({0.0})));
    CHECK_THROWS_AS(q.validate(), Error);
  }
  SUBCASE("bump width must be positive") {
    ImpedanceProfile q =
        single(make_seg(0, 1, AlphaSpec::gaussian_bump(1.0, 0.5, 0.0)));
    CHECK_THROWS_AS(q.validate(), Error);
  }
}

TEST_CASE("JSON round trip and schema enforcement") {
  SUBCASE("fixtures load") {
    for (const char* name :
         {"const1.json", "zero.json", "bump.json", "mixed.json",
          "twojump.json", "gridprof.json"}) {
      ImpedanceProfile p = load_profile(fixture(name));
      CHECK(p.segments.size() >= 1);
    }
  }
  SUBCASE("round trip preserves evaluations") {
    ImpedanceProfile p = load_profile(fixture("twojump.json"));
    ImpedanceProfile q = profile_from_json(profile_to_json(p));
    for (int i = 1; i < 20; ++i) {
      double x = p.x0 + (p.x1() - p.x0) * i / 20.0;
      if (x == 0.3 || x == 0.8) continue;
      CHECK(zeta_at(q, x) == doctest::Approx(zeta_at(p, x)).epsilon(1e-15));
    }
  }
  SUBCASE("syntax errors carry ParseError") {
    try {
      load_profile(fixture("badfile.json"));
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::parse_error);
    }
    try {
      load_profile(fixture("no_such_file.json"));
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::parse_error);
    }
  }
  SUBCASE("unknown keys are rejected with the key name") {
    auto expect_reject = [](const std::string& text, const char* key) {
      try {
        profile_from_json(text);
        CHECK(false);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::parse_error);
        CHECK(std::string(e.what()).find(key) != std::string::npos);
      }
    };
    expect_reject(R"({"x0":0,"zeta_left":1,"segments":[],"extra":1})", "extra");
    expect_reject(
        R"({"x0":0,"zeta_left":1,"segments":[
             {"lo":0,"hi":1,"alpha":{"kind":"zero"},"colour":"red"}]})",
        "colour");
    expect_reject(
        R"({"x0":0,"zeta_left":1,"segments":[
             {"lo":0,"hi":1,"alpha":{"kind":"zero","value":3}}]})",
        "value");
    expect_reject(
        R"({"x0":0,"zeta_left":1,"segments":[
             {"lo":0,"hi":0.5,"alpha":{"kind":"zero"}},
             {"lo":0.5,"hi":1,"alpha":{"kind":"zero"}}],
            "jumps":[{"y":0.5,"gamma":1,"note":"hi"}]})",
        "note");
  }
  SUBCASE("missing fields are rejected") {
    CHECK_THROWS_AS(profile_from_json(R"({"zeta_left":1,"segments":[]})"),
                    Error);
    CHECK_THROWS_AS(
        profile_from_json(
            R"({"x0":0,"zeta_left":1,"segments":[{"lo":0,"hi":1}]})"),
        Error);
    CHECK_THROWS_AS(
        profile_from_json(
            R"({"x0":0,"zeta_left":1,"segments":[
                 {"lo":0,"hi":1,"alpha":{"kind":"linear","value0":1}}]})"),
        Error);
  }
}
