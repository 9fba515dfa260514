#include "helm/transfer.hpp"

#include <cmath>
#include <cstring>

namespace helm {

namespace {

void append_bits(std::string& key, const void* data, std::size_t size) {
  key.append(static_cast<const char*>(data), size);
}

void append_double(std::string& key, double v) {
  append_bits(key, &v, sizeof v);
}

std::string cache_key(const Segment& seg, Complex sigma,
                      const EvalSpec& spec) {
  std::string key;
  key.reserve(64 + 8 * seg.alpha.samples.size());
  append_double(key, seg.lo);
  append_double(key, seg.hi);
  char kind = char(seg.alpha.kind);
  append_bits(key, &kind, 1);
  append_double(key, seg.alpha.value);
  append_double(key, seg.alpha.value0);
  append_double(key, seg.alpha.slope);
  append_double(key, seg.alpha.amplitude);
  append_double(key, seg.alpha.center);
  append_double(key, seg.alpha.width);
  for (double s : seg.alpha.samples) append_double(key, s);
  append_double(key, sigma.real());
  append_double(key, sigma.imag());
  char method = char(spec.method);
  append_bits(key, &method, 1);
  long long res = spec.resolution();
  int order = spec.max_order;
  append_bits(key, &res, sizeof res);
  append_bits(key, &order, sizeof order);
  return key;
}

}  // namespace

Su11Matrix g_matrix(const Segment& segment, Complex sigma,
                    const EvalSpec& spec) {
  const HexpValue h = eval_hexp(segment, sigma, spec);
  const Complex phase =
      std::exp(Complex(0.0, -1.0) * segment.length() * sigma);
  return {phase * 0.5 * (h.e_plus + h.e_minus),
          phase * 0.5 * (h.e_plus - h.e_minus)};
}

Su11Matrix g_matrix(const Segment& segment, Complex sigma, HexpMethod method,
                    long long resolution) {
  return g_matrix(segment, sigma, EvalSpec::with(method, resolution));
}

Su11Matrix h_matrix(const Su11Matrix& g) {
  const double det = g.det();
  if (!(std::abs(det - 1.0) <= 1e-6))
    fail(ErrorCode::det_not_one,
         "matrix determinant " + std::to_string(det) +
             " is too far from 1 to invert in the group");
  return g.inverse();
}

namespace {

// Forward chain from state.x to x (state.x <= x), multiplying through
// restricted segment matrices and jump matrices.
Su11Matrix chain_matrix(const ImpedanceProfile& p, double sigma, double from,
                        double to, const EvalSpec& spec, GMatrixCache& cache) {
  Su11Matrix m;  // identity
  std::size_t i = p.segment_index(from);
  // A start exactly at an interior breakpoint belongs to the right segment;
  // segment_index already resolves the tie that way.
  double cursor = from;
  while (true) {
    const Segment& seg = p.segments[i];
    double stop = std::min(seg.hi, to);
    if (stop > cursor) {
      Su11Matrix g;
      if (cursor == seg.lo && stop == seg.hi)
        g = cache.get(seg, Complex(sigma, 0.0), spec);
      else
        g = g_matrix(seg.restricted(cursor, stop), Complex(sigma, 0.0), spec);
      m = mul(g, m);
    }
    cursor = stop;
    if (cursor >= to) break;
    // crossing the jump at seg.hi
    m = mul(jump_matrix(p.jumps[i].gamma), m);
    ++i;
  }
  return m;
}

void check_not_jump(const ImpedanceProfile& p, double x, const char* what) {
  for (const JumpPoint& j : p.jumps)
    if (x == j.y && j.gamma != 1.0)
      fail(ErrorCode::boundary_point,
           std::string(what) + " lies on the jump at y=" + std::to_string(x) +
               "; the field is one-sided there");
}

}  // namespace

FieldState propagate(const ImpedanceProfile& profile, double sigma,
                     const FieldState& a0, double x, const EvalSpec& spec) {
  profile.validate();
  if (sigma == 0.0)
    fail(ErrorCode::sigma_zero,
         "the a/b split is undefined at sigma = 0; use the direct oracle");
  if (!std::isfinite(sigma))
    fail(ErrorCode::invalid_argument, "sigma must be finite and real");
  const double x0 = profile.x0, x1 = profile.x1();
  if (!(a0.x >= x0) || !(a0.x <= x1))
    fail(ErrorCode::out_of_domain, "start point is outside the profile");
  if (!(x >= x0) || !(x <= x1))
    fail(ErrorCode::out_of_domain, "target point is outside the profile");
  check_not_jump(profile, a0.x, "the start point");
  check_not_jump(profile, x, "the target point");

  Su11Matrix m;
  if (x >= a0.x)
    m = chain_matrix(profile, sigma, a0.x, x, spec, default_g_cache());
  else
    m = h_matrix(
        chain_matrix(profile, sigma, x, a0.x, spec, default_g_cache()));
  auto ab = apply(m, a0.a, a0.b);
  return {ab[0], ab[1], x, sigma};
}

WavefieldValue wavefield_u(const ImpedanceProfile& profile, double sigma,
                           Complex u0, Complex du0, double x,
                           const EvalSpec& spec) {
  profile.validate();
  if (sigma == 0.0)
    fail(ErrorCode::sigma_zero,
         "wavefield_u divides by sigma; sigma = 0 belongs to the oracle");
  const double x0 = profile.x0, x1 = profile.x1();
  const Complex isig(0.0, 1.0 / sigma);
  const double rz0 = std::sqrt(zeta_after(profile, x0));
  FieldState a0;
  a0.a = 0.5 * rz0 * (u0 + isig * du0);
  a0.b = 0.5 * rz0 * (u0 - isig * du0);
  a0.x = x0;
  a0.sigma = sigma;

  FieldState st = propagate(profile, sigma, a0, x, spec);
  double zeta_x = (x == x1)   ? zeta_before(profile, x)
                  : (x == x0) ? zeta_after(profile, x)
                              : zeta_at(profile, x);
  const double rz = std::sqrt(zeta_x);
  return {(st.a + st.b) / rz, Complex(0.0, sigma) * (st.b - st.a) / rz};
}

double cosine_expansion(const Segment& segment, double sigma, double x,
                        int max_order, int grid_n) {
  if (x == segment.lo) return 1.0;
  Segment part = segment.restricted(segment.lo, x);
  SeriesResult sr = eval_series(part, Complex(sigma, 0.0), max_order, grid_n);
  const double weight = std::exp(segment.alpha_integral(segment.lo, x));
  const Complex phase = std::exp(Complex(0.0, -(x - segment.lo) * sigma));
  return weight * std::real(phase * sr.value.e_minus);
}

double sine_expansion(const Segment& segment, double sigma, double x,
                      int max_order, int grid_n) {
  if (x == segment.lo) return 0.0;
  Segment part = segment.restricted(segment.lo, x);
  SeriesResult sr = eval_series(part, Complex(sigma, 0.0), max_order, grid_n);
  const double weight = std::exp(segment.alpha_integral(segment.lo, x));
  const Complex phase = std::exp(Complex(0.0, -(x - segment.lo) * sigma));
  return -weight * std::imag(phase * sr.value.e_plus);
}

FieldState step_solution(const ImpedanceProfile& step_profile, double sigma,
                         const FieldState& a0) {
  step_profile.validate();
  if (!std::isfinite(sigma))
    fail(ErrorCode::invalid_argument, "sigma must be finite and real");
  for (std::size_t i = 0; i < step_profile.segments.size(); ++i)
    if (step_profile.segments[i].alpha_sup() > 0.0)
      fail(ErrorCode::non_step_profile,
           "segment " + std::to_string(i) +
               " has alpha != 0; step_solution needs a pure step profile");
  if (a0.x != step_profile.x0)
    fail(ErrorCode::invalid_argument,
         "step_solution starts at x0; propagate handles interior starts");

  Complex a = a0.a, b = a0.b;
  for (std::size_t i = 0; i < step_profile.segments.size(); ++i) {
    const Complex ph =
        std::exp(Complex(0.0, -step_profile.segments[i].length() * sigma));
    a *= ph;
    b *= std::conj(ph);
    if (i < step_profile.jumps.size()) {
      auto ab = apply(jump_matrix(step_profile.jumps[i].gamma), a, b);
      a = ab[0];
      b = ab[1];
    }
  }
  return {a, b, step_profile.x1(), sigma};
}

Su11Matrix high_freq_g(const Segment& segment, Complex sigma) {
  return {std::exp(Complex(0.0, -1.0) * segment.length() * sigma),
          Complex(0.0, 0.0)};
}

Su11Matrix GMatrixCache::get(const Segment& segment, Complex sigma,
                             const EvalSpec& spec) {
  const std::string key = cache_key(segment, sigma, spec);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
  }
  // Compute outside the lock: a concurrent miss on the same key does the work
  // twice and both arrive at the same value.
  Su11Matrix g = g_matrix(segment, sigma, spec);
  std::lock_guard<std::mutex> lock(mu_);
  return map_.emplace(key, g).first->second;
}

std::size_t GMatrixCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return map_.size();
}

void GMatrixCache::clear() {
  std::lock_guard<std::mutex> lock(mu_);
  map_.clear();
}

GMatrixCache& default_g_cache() {
  static GMatrixCache cache;
  return cache;
}

}  // namespace helm
