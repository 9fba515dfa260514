#include "helm/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

namespace helm {

namespace {

constexpr double kNodeTol = 1e-9;  // relative to segment span
const double kSqrtHalfPi = std::sqrt(std::atan(1.0) * 2.0);

std::string fmt(double v) { return std::to_string(v); }

// Exact integral of the linear interpolant of uniform samples over [a, b],
// both assumed inside [lo, hi].
double grid_integral(const std::vector<double>& s, double lo, double hi,
                     double a, double b) {
  const std::size_t n = s.size();
  const double h = (hi - lo) / double(n - 1);
  auto value = [&](double x) {
    double u = (x - lo) / h;
    std::size_t i = std::min<std::size_t>(
        n - 2, std::size_t(std::max(0.0, std::floor(u))));
    double t = u - double(i);
    return s[i] * (1.0 - t) + s[i + 1] * t;
  };
  std::size_t ia = std::min<std::size_t>(
      n - 2, std::size_t(std::max(0.0, std::floor((a - lo) / h))));
  std::size_t ib = std::min<std::size_t>(
      n - 2, std::size_t(std::max(0.0, std::floor((b - lo) / h))));
  double total = 0.0;
  for (std::size_t i = ia; i <= ib; ++i) {
    double p = std::max(a, lo + double(i) * h);
    double q = std::min(b, lo + double(i + 1) * h);
    if (q <= p) continue;
    total += 0.5 * (q - p) * (value(p) + value(q));  // exact: integrand linear
  }
  return total;
}

}  // namespace

AlphaSpec AlphaSpec::zero() { return AlphaSpec{}; }

AlphaSpec AlphaSpec::constant(double value) {
  AlphaSpec a;
  a.kind = AlphaKind::constant;
  a.value = value;
  return a;
}

AlphaSpec AlphaSpec::linear(double value0, double slope) {
  AlphaSpec a;
  a.kind = AlphaKind::linear;
  a.value0 = value0;
  a.slope = slope;
  return a;
}

AlphaSpec AlphaSpec::gaussian_bump(double amplitude, double center,
                                   double width) {
  AlphaSpec a;
  a.kind = AlphaKind::gaussian_bump;
  a.amplitude = amplitude;
  a.center = center;
  a.width = width;
  return a;
}

AlphaSpec AlphaSpec::grid(std::vector<double> samples) {
  AlphaSpec a;
  a.kind = AlphaKind::grid;
  a.samples = std::move(samples);
  return a;
}

double Segment::alpha_at(double x) const {
  switch (alpha.kind) {
    case AlphaKind::zero:
      return 0.0;
    case AlphaKind::constant:
      return alpha.value;
    case AlphaKind::linear:
      return alpha.value0 + alpha.slope * (x - lo);
    case AlphaKind::gaussian_bump: {
      double d = (x - alpha.center) / alpha.width;
      return alpha.amplitude * std::exp(-0.5 * d * d);
    }
    case AlphaKind::grid: {
      const auto& s = alpha.samples;
      const std::size_t n = s.size();
      const double h = (hi - lo) / double(n - 1);
      double u = (x - lo) / h;
      std::size_t i = std::min<std::size_t>(
          n - 2, std::size_t(std::max(0.0, std::floor(u))));
      double t = u - double(i);
      return s[i] * (1.0 - t) + s[i + 1] * t;
    }
  }
  fail(ErrorCode::invalid_argument, "unknown alpha kind");
}

double Segment::alpha_deriv(double x) const {
  switch (alpha.kind) {
    case AlphaKind::zero:
      return 0.0;
    case AlphaKind::constant:
      return 0.0;
    case AlphaKind::linear:
      return alpha.slope;
    case AlphaKind::gaussian_bump: {
      double d = (x - alpha.center) / alpha.width;
      return -alpha.amplitude * d / alpha.width * std::exp(-0.5 * d * d);
    }
    case AlphaKind::grid: {
      const auto& s = alpha.samples;
      const std::size_t n = s.size();
      const double h = (hi - lo) / double(n - 1);
      double u = (x - lo) / h;
      double j = std::round(u);
      if (std::abs(x - (lo + j * h)) <= kNodeTol * (hi - lo)) {
        auto idx = std::size_t(std::max(0.0, j));
        if (idx == 0 || idx >= n - 1)
          fail(ErrorCode::boundary_point,
               "grid derivative at edge sample x=" + fmt(x) +
                   " needs a one-sided stencil");
        return (s[idx + 1] - s[idx - 1]) / (2.0 * h);
      }
      std::size_t i = std::min<std::size_t>(
          n - 2, std::size_t(std::max(0.0, std::floor(u))));
      return (s[i + 1] - s[i]) / h;
    }
  }
  fail(ErrorCode::invalid_argument, "unknown alpha kind");
}

double Segment::alpha_integral(double a, double b) const {
  if (b < a) return -alpha_integral(b, a);
  const double tol = 1e-12 * std::max(1.0, hi - lo);
  if (a < lo - tol || b > hi + tol)
    fail(ErrorCode::out_of_domain,
         "integration range [" + fmt(a) + ", " + fmt(b) +
             "] leaves the segment [" + fmt(lo) + ", " + fmt(hi) + "]");
  a = std::clamp(a, lo, hi);
  b = std::clamp(b, lo, hi);
  switch (alpha.kind) {
    case AlphaKind::zero:
      return 0.0;
    case AlphaKind::constant:
      return alpha.value * (b - a);
    case AlphaKind::linear: {
      double ta = a - lo, tb = b - lo;
      return alpha.value0 * (b - a) +
             0.5 * alpha.slope * (tb * tb - ta * ta);
    }
    case AlphaKind::gaussian_bump: {
      const double w = alpha.width;
      const double root2 = std::sqrt(2.0);
      return alpha.amplitude * w * kSqrtHalfPi *
             (std::erf((b - alpha.center) / (w * root2)) -
              std::erf((a - alpha.center) / (w * root2)));
    }
    case AlphaKind::grid:
      return grid_integral(alpha.samples, lo, hi, a, b);
  }
  fail(ErrorCode::invalid_argument, "unknown alpha kind");
}

double Segment::alpha_l1() const {
  switch (alpha.kind) {
    case AlphaKind::zero:
      return 0.0;
    case AlphaKind::constant:
      return std::abs(alpha.value) * (hi - lo);
    case AlphaKind::linear: {
      double va = alpha.value0;
      double vb = alpha.value0 + alpha.slope * (hi - lo);
      if (va * vb >= 0.0) return std::abs(alpha_integral(lo, hi));
      double root = lo - alpha.value0 / alpha.slope;
      return std::abs(alpha_integral(lo, root)) +
             std::abs(alpha_integral(root, hi));
    }
    case AlphaKind::gaussian_bump:
      // The bump never changes sign.
      return std::abs(alpha_integral(lo, hi));
    case AlphaKind::grid: {
      const auto& s = alpha.samples;
      const std::size_t n = s.size();
      const double h = (hi - lo) / double(n - 1);
      double total = 0.0;
      for (std::size_t i = 0; i + 1 < n; ++i) {
        double p = s[i], q = s[i + 1];
        if (p * q < 0.0)
          total += 0.5 * h * (p * p + q * q) / (std::abs(p) + std::abs(q));
        else
          total += 0.5 * h * (std::abs(p) + std::abs(q));
      }
      return total;
    }
  }
  fail(ErrorCode::invalid_argument, "unknown alpha kind");
}

double Segment::alpha_sup() const {
  switch (alpha.kind) {
    case AlphaKind::zero:
      return 0.0;
    case AlphaKind::constant:
      return std::abs(alpha.value);
    case AlphaKind::linear:
      return std::max(std::abs(alpha.value0),
                      std::abs(alpha.value0 + alpha.slope * (hi - lo)));
    case AlphaKind::gaussian_bump: {
      double nearest = std::clamp(alpha.center, lo, hi);
      double d = (nearest - alpha.center) / alpha.width;
      return std::abs(alpha.amplitude) * std::exp(-0.5 * d * d);
    }
    case AlphaKind::grid: {
      double m = 0.0;
      for (double v : alpha.samples) m = std::max(m, std::abs(v));
      return m;
    }
  }
  fail(ErrorCode::invalid_argument, "unknown alpha kind");
}

Segment Segment::restricted(double a, double b) const {
  const double tol = 1e-12 * std::max(1.0, hi - lo);
  if (a < lo - tol || b > hi + tol || !(a < b))
    fail(ErrorCode::out_of_domain,
         "restriction [" + fmt(a) + ", " + fmt(b) +
             "] is not a sub-interval of [" + fmt(lo) + ", " + fmt(hi) + "]");
  a = std::clamp(a, lo, hi);
  b = std::clamp(b, lo, hi);
  Segment out;
  out.lo = a;
  out.hi = b;
  switch (alpha.kind) {
    case AlphaKind::zero:
    case AlphaKind::constant:
    case AlphaKind::gaussian_bump:
      out.alpha = alpha;
      return out;
    case AlphaKind::linear:
      out.alpha = AlphaSpec::linear(alpha.value0 + alpha.slope * (a - lo),
                                    alpha.slope);
      return out;
    case AlphaKind::grid: {
      const auto& s = alpha.samples;
      const std::size_t n = s.size();
      const double h = (hi - lo) / double(n - 1);
      double ja = std::round((a - lo) / h);
      double jb = std::round((b - lo) / h);
      bool aligned =
          std::abs(a - (lo + ja * h)) <= kNodeTol * (hi - lo) &&
          std::abs(b - (lo + jb * h)) <= kNodeTol * (hi - lo);
      if (aligned && jb > ja) {
        auto ia = std::size_t(ja), ib = std::size_t(jb);
        out.alpha = AlphaSpec::grid(
            std::vector<double>(s.begin() + ia, s.begin() + ib + 1));
        return out;
      }
      // Off-node cut: resample the interpolant at the original density.
      auto m = std::size_t(std::max(2.0, std::ceil((b - a) / h) + 1.0));
      std::vector<double> re(m);
      for (std::size_t i = 0; i < m; ++i) {
        double x = a + (b - a) * double(i) / double(m - 1);
        re[i] = alpha_at(x);
      }
      out.alpha = AlphaSpec::grid(std::move(re));
      return out;
    }
  }
  fail(ErrorCode::invalid_argument, "unknown alpha kind");
}

double ImpedanceProfile::x1() const {
  if (segments.empty())
    fail(ErrorCode::invalid_profile, "profile has no segments");
  return segments.back().hi;
}

void ImpedanceProfile::validate() const {
  if (segments.empty())
    fail(ErrorCode::invalid_profile, "profile has no segments");
  if (!std::isfinite(x0) || !std::isfinite(zeta_left))
    fail(ErrorCode::invalid_profile, "x0 and zeta_left must be finite");
  if (!(zeta_left > 0.0))
    fail(ErrorCode::invalid_profile,
         "zeta_left must be positive, got " + fmt(zeta_left));
  if (segments.front().lo != x0)
    fail(ErrorCode::invalid_profile,
         "first segment must start at x0 = " + fmt(x0));
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& seg = segments[i];
    if (!std::isfinite(seg.lo) || !std::isfinite(seg.hi) || !(seg.lo < seg.hi))
      fail(ErrorCode::invalid_profile,
           "segment " + std::to_string(i) + " has an empty or invalid span");
    if (i > 0 && seg.lo != segments[i - 1].hi)
      fail(ErrorCode::invalid_profile,
           "segment " + std::to_string(i) + " does not start where segment " +
               std::to_string(i - 1) + " ends");
    switch (seg.alpha.kind) {
      case AlphaKind::zero:
        break;
      case AlphaKind::constant:
        if (!std::isfinite(seg.alpha.value))
          fail(ErrorCode::non_finite_alpha,
               "segment " + std::to_string(i) + ": constant alpha not finite");
        break;
      case AlphaKind::linear:
        if (!std::isfinite(seg.alpha.value0) ||
            !std::isfinite(seg.alpha.slope))
          fail(ErrorCode::non_finite_alpha,
               "segment " + std::to_string(i) + ": linear alpha not finite");
        break;
      case AlphaKind::gaussian_bump:
        if (!std::isfinite(seg.alpha.amplitude) ||
            !std::isfinite(seg.alpha.center) ||
            !std::isfinite(seg.alpha.width))
          fail(ErrorCode::non_finite_alpha,
               "segment " + std::to_string(i) + ": bump parameters not finite");
        if (!(seg.alpha.width > 0.0))
          fail(ErrorCode::invalid_profile,
               "segment " + std::to_string(i) + ": bump width must be > 0");
        break;
      case AlphaKind::grid:
        if (seg.alpha.samples.size() < 2)
          fail(ErrorCode::invalid_profile,
               "segment " + std::to_string(i) +
                   ": grid alpha needs at least 2 samples");
        for (double v : seg.alpha.samples)
          if (!std::isfinite(v))
            fail(ErrorCode::non_finite_alpha,
                 "segment " + std::to_string(i) + ": grid sample not finite");
        break;
    }
  }
  if (jumps.size() != segments.size() - 1)
    fail(ErrorCode::invalid_profile,
         "expected " + std::to_string(segments.size() - 1) +
             " jump entries (one per interior breakpoint), got " +
             std::to_string(jumps.size()));
  for (std::size_t i = 0; i < jumps.size(); ++i) {
    if (jumps[i].y != segments[i].hi)
      fail(ErrorCode::invalid_profile,
           "jump " + std::to_string(i) + " at y=" + fmt(jumps[i].y) +
               " is not on a segment boundary");
    if (!std::isfinite(jumps[i].gamma) || !(jumps[i].gamma > 0.0))
      fail(ErrorCode::non_positive_gamma,
           "jump " + std::to_string(i) + ": gamma must be positive, got " +
               fmt(jumps[i].gamma));
  }
}

std::size_t ImpedanceProfile::segment_index(double x) const {
  if (!(x >= x0) || !(x <= x1()))
    fail(ErrorCode::out_of_domain,
         "x=" + fmt(x) + " is outside [" + fmt(x0) + ", " + fmt(x1()) + "]");
  for (std::size_t i = 0; i + 1 < segments.size(); ++i)
    if (x < segments[i].hi) return i;
  return segments.size() - 1;
}

namespace {

// zeta just left of segment `idx`'s start (i.e. zeta(segments[idx].lo + 0)).
double zeta_at_segment_start(const ImpedanceProfile& p, std::size_t idx) {
  double zeta = p.zeta_left;
  for (std::size_t i = 0; i < idx; ++i) {
    zeta *= std::exp(-2.0 * p.segments[i].alpha_integral(p.segments[i].lo,
                                                         p.segments[i].hi));
    zeta /= p.jumps[i].gamma;
  }
  return zeta;
}

double check_zeta(double zeta) {
  if (!std::isfinite(zeta) || !(zeta > 0.0))
    fail(ErrorCode::non_finite_alpha,
         "reconstructed zeta is not finite and positive");
  return zeta;
}

}  // namespace

double zeta_after(const ImpedanceProfile& profile, double x) {
  profile.validate();
  if (!(x >= profile.x0) || !(x < profile.x1()))
    fail(ErrorCode::out_of_domain,
         "x=" + fmt(x) + " has no right limit inside the profile domain");
  std::size_t idx = profile.segment_index(x);
  // At an interior breakpoint the right limit lives in the right segment,
  // which segment_index already selects.
  const Segment& seg = profile.segments[idx];
  double zeta = zeta_at_segment_start(profile, idx);
  zeta *= std::exp(-2.0 * seg.alpha_integral(seg.lo, x));
  return check_zeta(zeta);
}

double zeta_before(const ImpedanceProfile& profile, double x) {
  profile.validate();
  if (!(x > profile.x0) || !(x <= profile.x1()))
    fail(ErrorCode::out_of_domain,
         "x=" + fmt(x) + " has no left limit inside the profile domain");
  // Left limit: at a breakpoint use the segment ending at x.
  std::size_t idx = profile.segments.size() - 1;
  for (std::size_t i = 0; i < profile.segments.size(); ++i) {
    if (x <= profile.segments[i].hi) {
      idx = i;
      break;
    }
  }
  const Segment& seg = profile.segments[idx];
  double zeta = zeta_at_segment_start(profile, idx);
  zeta *= std::exp(-2.0 * seg.alpha_integral(seg.lo, x));
  return check_zeta(zeta);
}

double zeta_at(const ImpedanceProfile& profile, double x) {
  profile.validate();
  if (!(x > profile.x0) || !(x < profile.x1()))
    fail(ErrorCode::out_of_domain,
         "x=" + fmt(x) + " is outside (" + fmt(profile.x0) + ", " +
             fmt(profile.x1()) + ")");
  for (const JumpPoint& j : profile.jumps) {
    if (x == j.y && j.gamma != 1.0)
      fail(ErrorCode::boundary_point,
           "zeta is two-valued at the jump y=" + fmt(j.y) +
               "; use zeta_before/zeta_after");
  }
  return zeta_after(profile, x);
}

Su11Matrix jump_matrix(double gamma) {
  if (!std::isfinite(gamma) || !(gamma > 0.0))
    fail(ErrorCode::non_positive_gamma,
         "gamma must be positive, got " + fmt(gamma));
  double s = 0.5 / std::sqrt(gamma);
  return {Complex(s * (1.0 + gamma), 0.0), Complex(s * (gamma - 1.0), 0.0)};
}

double miura_potential(const Segment& segment, double x) {
  const double tol = 1e-12 * std::max(1.0, segment.hi - segment.lo);
  if (x < segment.lo - tol || x > segment.hi + tol)
    fail(ErrorCode::out_of_domain,
         "x=" + fmt(x) + " is outside the segment [" + fmt(segment.lo) +
             ", " + fmt(segment.hi) + "]");
  double a = segment.alpha_at(x);
  return a * a - segment.alpha_deriv(x);
}

FactorizedProfile factorize(const ImpedanceProfile& profile) {
  profile.validate();
  FactorizedProfile out;
  out.step = profile;
  out.step.zeta_left = 1.0;
  for (Segment& seg : out.step.segments) seg.alpha = AlphaSpec::zero();
  out.ac = profile;
  for (JumpPoint& j : out.ac.jumps) j.gamma = 1.0;
  return out;
}

}  // namespace helm
