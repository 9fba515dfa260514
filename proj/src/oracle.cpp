#include "helm/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace helm {

namespace {

constexpr double kMinStep = 1e-13;
constexpr long long kMaxPieces = 100000;
constexpr int kPicardNodes = 2048;
constexpr int kPicardIterCap = 1000;

struct UvState {
  Complex u, v;  // v = zeta u'
};

// One RK4 step of u' = v/zeta, v' = -sigma^2 zeta u on [x, x+h], with zeta
// evaluated from the running segment's left value zlo at seg.lo.
UvState rk4_step(const Segment& seg, double zlo, double sigma2, UvState s,
                 double x, double h) {
  auto zeta = [&](double t) {
    // The last sub-step's upper evaluation can land a rounding ulp past the
    // segment edge; grid-backed alpha rejects that, so clamp.
    t = std::min(t, seg.hi);
    return zlo * std::exp(-2.0 * seg.alpha_integral(seg.lo, t));
  };
  auto f = [&](double t, const UvState& y) {
    const double z = zeta(t);
    return UvState{y.v / z, -sigma2 * z * y.u};
  };
  const UvState k1 = f(x, s);
  const UvState k2 =
      f(x + 0.5 * h, {s.u + 0.5 * h * k1.u, s.v + 0.5 * h * k1.v});
  const UvState k3 =
      f(x + 0.5 * h, {s.u + 0.5 * h * k2.u, s.v + 0.5 * h * k2.v});
  const UvState k4 = f(x + h, {s.u + h * k3.u, s.v + h * k3.v});
  s.u += h / 6.0 * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
  s.v += h / 6.0 * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
  return s;
}

}  // namespace

std::vector<OdeSample> ode_solve(const ImpedanceProfile& profile, double sigma,
                                 Complex u0, Complex du0,
                                 const std::vector<double>& x_samples,
                                 long long steps) {
  profile.validate();
  if (!std::isfinite(sigma))
    fail(ErrorCode::invalid_argument, "sigma must be finite");
  if (steps < 1)
    fail(ErrorCode::invalid_argument, "step count must be positive");
  const double x0 = profile.x0, x1 = profile.x1();
  for (double x : x_samples) {
    if (!(x >= x0) || !(x <= x1))
      fail(ErrorCode::out_of_domain,
           "sample " + std::to_string(x) + " is outside [" +
               std::to_string(x0) + ", " + std::to_string(x1) + "]");
    for (const JumpPoint& j : profile.jumps)
      if (x == j.y && j.gamma != 1.0)
        fail(ErrorCode::boundary_point,
             "u' is two-valued at the jump y=" + std::to_string(x) +
                 "; sample either side instead");
  }

  // March through the sorted union of samples and breakpoints so every
  // stretch lies inside one segment and ends exactly on each request.
  std::vector<std::size_t> order(x_samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x_samples[a] < x_samples[b];
  });
  std::vector<double> stops;
  for (std::size_t i : order) stops.push_back(x_samples[i]);
  for (const Segment& s : profile.segments) stops.push_back(s.hi);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  const double h_target = (x1 - x0) / double(steps);
  const double sigma2 = sigma * sigma;

  std::vector<OdeSample> out(x_samples.size());
  std::size_t next_sample = 0;  // position in `order`
  auto record_at = [&](double x, const UvState& s, double zeta_here) {
    while (next_sample < order.size() && x_samples[order[next_sample]] == x) {
      out[order[next_sample]] = {s.u, s.v / zeta_here};
      ++next_sample;
    }
  };

  std::size_t seg_i = 0;
  double zlo = profile.zeta_left;  // zeta at the current segment's left end
  UvState st{u0, profile.zeta_left * du0};
  double cur = x0;
  record_at(cur, st, zlo);
  for (double p : stops) {
    if (p <= cur) continue;
    const Segment* seg = &profile.segments[seg_i];
    const double gap = p - cur;
    const long long n = std::max(1LL, std::llround(gap / h_target));
    const double h = gap / double(n);
    if (h < kMinStep)
      fail(ErrorCode::step_underflow,
           "step size " + std::to_string(h) + " fell below " +
               std::to_string(kMinStep));
    for (long long k = 0; k < n; ++k)
      st = rk4_step(*seg, zlo, sigma2, st, cur + double(k) * h, h);
    cur = p;
    const double zeta_here =
        zlo * std::exp(-2.0 * seg->alpha_integral(seg->lo, cur));
    record_at(cur, st, zeta_here);
    if (cur == seg->hi && seg_i + 1 < profile.segments.size()) {
      // (u, v) cross unchanged; zeta restarts divided by the jump ratio.
      zlo = zeta_here / profile.jumps[seg_i].gamma;
      ++seg_i;
    }
  }
  return out;
}

FieldState picard_solve(const Segment& segment, double sigma,
                        const FieldState& a0, double tol, PicardStats* stats) {
  if (!std::isfinite(sigma))
    fail(ErrorCode::invalid_argument, "sigma must be finite");
  if (!(tol > 0.0))
    fail(ErrorCode::invalid_argument, "tolerance must be positive");
  if (a0.x != segment.lo)
    fail(ErrorCode::invalid_argument,
         "the initial state must sit at the segment's left endpoint");

  const double len = segment.length();
  const double rate = std::abs(sigma) + segment.alpha_sup();
  const double load = len * rate;
  if (!std::isfinite(load) || std::ceil(load / 0.5) > double(kMaxPieces))
    fail(ErrorCode::contraction_unachievable,
         "contraction would need more than " + std::to_string(kMaxPieces) +
             " pieces");
  const long long pieces = std::max(1LL, (long long)std::ceil(load / 0.5));
  const double plen = len / double(pieces);
  const double c = plen * rate;

  const Complex isig(0.0, sigma);
  std::array<Complex, 2> a{a0.a, a0.b};
  int worst_iters = 0;
  std::vector<std::array<Complex, 2>> cur(kPicardNodes), nxt(kPicardNodes);
  std::vector<double> alpha(kPicardNodes);
  for (long long p = 0; p < pieces; ++p) {
    const double plo = segment.lo + double(p) * plen;
    const double h = plen / double(kPicardNodes - 1);
    for (int i = 0; i < kPicardNodes; ++i)
      alpha[size_t(i)] =
          segment.alpha_at(std::min(plo + double(i) * h, segment.hi));
    for (int i = 0; i < kPicardNodes; ++i) cur[size_t(i)] = a;

    auto m_apply = [&](int i, const std::array<Complex, 2>& y) {
      return std::array<Complex, 2>{isig * y[0] + alpha[size_t(i)] * y[1],
                                    alpha[size_t(i)] * y[0] - isig * y[1]};
    };
    int iters = 0;
    while (true) {
      ++iters;
      std::array<Complex, 2> acc{0.0, 0.0};
      std::array<Complex, 2> prev = m_apply(0, cur[0]);
      nxt[0] = a;
      double diff = 0.0;
      for (int i = 1; i < kPicardNodes; ++i) {
        const std::array<Complex, 2> here = m_apply(i, cur[size_t(i)]);
        acc[0] += 0.5 * h * (prev[0] + here[0]);
        acc[1] += 0.5 * h * (prev[1] + here[1]);
        prev = here;
        nxt[size_t(i)] = {a[0] - acc[0], a[1] - acc[1]};
        diff = std::max(diff, std::hypot(std::abs(nxt[size_t(i)][0] -
                                                  cur[size_t(i)][0]),
                                         std::abs(nxt[size_t(i)][1] -
                                                  cur[size_t(i)][1])));
      }
      cur.swap(nxt);
      if (diff <= tol || iters >= kPicardIterCap) break;
    }
    worst_iters = std::max(worst_iters, iters);
    a = cur[kPicardNodes - 1];
  }
  if (stats) {
    stats->pieces = int(pieces);
    stats->max_iterations = worst_iters;
    stats->contraction = c;
  }
  return {a[0], a[1], segment.hi, sigma};
}

}  // namespace helm
