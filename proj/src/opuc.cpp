#include "helm/opuc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "helm/errors.hpp"

namespace helm {

namespace {

void validate_chain(const VerblunskyChain& chain) {
  if (chain.n != (long long)chain.coeffs.size())
    fail(ErrorCode::invalid_argument,
         "chain.n = " + std::to_string(chain.n) + " but " +
             std::to_string(chain.coeffs.size()) + " coefficients are stored");
  for (std::size_t j = 0; j < chain.coeffs.size(); ++j) {
    const double r = chain.coeffs[j];
    if (!(std::abs(r) < 1.0) || !std::isfinite(r))
      fail(ErrorCode::verblunsky_out_of_range,
           "|r_" + std::to_string(j + 1) + "| = " + std::to_string(std::abs(r)) +
               " is not < 1");
  }
}

void validate_index(const VerblunskyChain& chain, long long j) {
  if (j < 0 || j > chain.n)
    fail(ErrorCode::index_out_of_range,
         "index " + std::to_string(j) + " outside [0, " +
             std::to_string(chain.n) + "]");
}

double modulus_product(const VerblunskyChain& chain) {
  double p = 1.0;
  for (double r : chain.coeffs) p *= 1.0 - r * r;
  return p;
}

}  // namespace

VerblunskyChain chain_from_segment(const Segment& segment, double sigma,
                                   long long n) {
  if (n < 1) fail(ErrorCode::invalid_argument, "n must be >= 1");
  if (!std::isfinite(sigma))
    fail(ErrorCode::invalid_argument, "sigma must be finite");
  VerblunskyChain chain;
  chain.n = n;
  chain.delta = segment.length() / double(n);
  chain.z_ref = std::exp(Complex(0.0, 2.0) * chain.delta * sigma);
  chain.coeffs.resize(std::size_t(n));
  for (long long j = 1; j <= n; ++j) {
    // The last node is pinned to hi so rounding in lo + j delta cannot step
    // outside the segment's domain.
    const double y = (j == n) ? segment.hi : segment.lo + chain.delta * double(j);
    const double r = chain.delta * segment.alpha_at(y);
    if (!(std::abs(r) < 1.0))
      fail(ErrorCode::verblunsky_out_of_range,
           "|r_" + std::to_string(j) + "| = " + std::to_string(std::abs(r)) +
               " is not < 1; n is too small for this alpha");
    chain.coeffs[std::size_t(j - 1)] = r;
  }
  return chain;
}

PolyQuad product_eval(const VerblunskyChain& chain, long long j) {
  validate_chain(chain);
  validate_index(chain, j);
  const Complex z = chain.z_ref;
  // Running product [[p11, p12], [p21, p22]], seeded with [[1, 1], [-1, 1]]
  // and multiplied on the right by [[z, z r], [r, 1]] per step.  The rows
  // carry (Psi, Psi*) and (-Phi, Phi*).
  Complex p11 = 1.0, p12 = 1.0;
  Complex p21 = -1.0, p22 = 1.0;
  for (long long k = 0; k < j; ++k) {
    const double r = chain.coeffs[std::size_t(k)];
    const Complex n11 = p11 * z + p12 * r;
    const Complex n12 = p11 * z * r + p12;
    const Complex n21 = p21 * z + p22 * r;
    const Complex n22 = p21 * z * r + p22;
    p11 = n11;
    p12 = n12;
    p21 = n21;
    p22 = n22;
  }
  PolyQuad q;
  q.psi = p11;
  q.psi_star = p12;
  q.phi = -p21;
  q.phi_star = p22;
  return q;
}

PolyQuad chain_eval(const VerblunskyChain& chain, Complex z, long long j) {
  validate_chain(chain);
  validate_index(chain, j);
  PolyQuad q;
  for (long long k = 0; k < j; ++k) {
    const double r = chain.coeffs[std::size_t(k)];
    const Complex npsi = z * q.psi + r * q.psi_star;
    const Complex npsi_star = q.psi_star + z * r * q.psi;
    const Complex nphi = z * q.phi - r * q.phi_star;
    const Complex nphi_star = q.phi_star - z * r * q.phi;
    q.psi = npsi;
    q.psi_star = npsi_star;
    q.phi = nphi;
    q.phi_star = nphi_star;
  }
  return q;
}

std::pair<Complex, Complex> szego_step(Complex phi, Complex phi_star,
                                       Complex z, double r) {
  return {z * phi - r * phi_star, phi_star - z * r * phi};
}

Complex psi_star_explicit(const VerblunskyChain& chain) {
  validate_chain(chain);
  if (chain.n > 20)
    fail(ErrorCode::n_too_large_for_explicit,
         "explicit tuple sum capped at n = 20, got n = " +
             std::to_string(chain.n));
  const Complex z = chain.z_ref;
  if (z == Complex(0.0, 0.0))
    fail(ErrorCode::invalid_argument, "z_ref must be nonzero");
  // Psi*_n = sum over descending tuples j_1 > ... > j_k of
  // prod r_{j_i} * z^{j_1 - j_2 + j_3 - ...}.  Scanning nu = n..1 and
  // splitting partial tuples by the parity of their length collapses the
  // 2^n terms into two accumulators: an element appended at odd position
  // carries z^{+nu}, at even position z^{-nu}.
  Complex zp = 1.0;
  for (long long k = 0; k < chain.n; ++k) zp *= z;
  Complex s_even = 1.0, s_odd = 0.0;
  for (long long nu = chain.n; nu >= 1; --nu) {
    const double r = chain.coeffs[std::size_t(nu - 1)];
    const Complex ne = s_even + r * (1.0 / zp) * s_odd;
    const Complex no = s_odd + r * zp * s_even;
    s_even = ne;
    s_odd = no;
    zp /= z;
  }
  return s_even + s_odd;
}

double measure_density(const VerblunskyChain& chain, double theta,
                       bool psi_variant) {
  validate_chain(chain);
  const Complex z = std::exp(Complex(0.0, theta));
  const PolyQuad q = chain_eval(chain, z, chain.n);
  // On the circle |Phi*| = |Phi|, and the star polynomial is the zero-free
  // one, so the denominator is bounded away from 0 whenever all |r| < 1.
  const Complex v = psi_variant ? q.psi_star : q.phi_star;
  return modulus_product(chain) / (2.0 * M_PI * std::norm(v));
}

ZeroFreeReport zero_free_check(const VerblunskyChain& chain,
                               ZeroFreeTarget target) {
  validate_chain(chain);
  constexpr long long kGrid = 1 << 14;
  ZeroFreeReport report;
  report.min_modulus = std::numeric_limits<double>::infinity();
  if (target == ZeroFreeTarget::sum)
    report.lower_bound = std::sqrt(2.0) * std::sqrt(modulus_product(chain));

  double total_arg = 0.0;
  Complex first, prev;
  for (long long k = 0; k < kGrid; ++k) {
    const double theta = -M_PI + 2.0 * M_PI * double(k) / double(kGrid);
    const PolyQuad q = chain_eval(chain, std::exp(Complex(0.0, theta)),
                                  chain.n);
    Complex v;
    switch (target) {
      case ZeroFreeTarget::phi_star:
        v = q.phi_star;
        break;
      case ZeroFreeTarget::psi_star:
        v = q.psi_star;
        break;
      case ZeroFreeTarget::sum:
        v = q.psi_star + q.phi_star;
        break;
    }
    const double mod = std::abs(v);
    if (mod == 0.0)
      fail(ErrorCode::winding_nonzero,
           "target vanishes on the circle grid at theta = " +
               std::to_string(theta));
    report.min_modulus = std::min(report.min_modulus, mod);
    if (k == 0)
      first = v;
    else
      total_arg += std::arg(v / prev);
    prev = v;
  }
  total_arg += std::arg(first / prev);
  report.winding = std::llround(total_arg / (2.0 * M_PI));
  if (report.winding != 0)
    fail(ErrorCode::winding_nonzero,
         "winding number " + std::to_string(report.winding) +
             " around 0; the star polynomial has roots inside the circle");
  return report;
}

std::vector<double> phi_coefficients(const VerblunskyChain& chain,
                                     long long j) {
  validate_chain(chain);
  if (chain.n > 12)
    fail(ErrorCode::n_too_large_for_explicit,
         "coefficient recurrence capped at n = 12, got n = " +
             std::to_string(chain.n));
  validate_index(chain, j);
  std::vector<double> c{1.0};
  for (long long k = 0; k < j; ++k) {
    const double r = chain.coeffs[std::size_t(k)];
    const std::size_t deg = c.size() - 1;
    std::vector<double> next(deg + 2, 0.0);
    // Phi' = z Phi - r Phi*; with real coefficients the star reversal is a
    // plain reversal, and the z-shift leaves the leading 1 untouched.
    for (std::size_t i = 0; i <= deg; ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[deg - i];
    }
    c.swap(next);
  }
  return c;
}

}  // namespace helm
