#pragma once

#include <utility>
#include <vector>

#include "helm/profile.hpp"
#include "helm/su11.hpp"

namespace helm {

// Coefficients r_1..r_n of a finite Szego recurrence, together with the grid
// spacing and evaluation point they were sampled at.  For chains built from a
// segment, r_j = delta * alpha(lo + j delta) and z_ref = e^{2 i delta sigma}.
struct VerblunskyChain {
  std::vector<double> coeffs;
  long long n = 0;  // must equal coeffs.size()
  double delta = 0.0;
  Complex z_ref{1.0, 0.0};
};

VerblunskyChain chain_from_segment(const Segment& segment, double sigma,
                                   long long n);

// Values of the two polynomial families and their duals at one point,
// arranged as the entries of the running product [[Psi, Psi*], [-Phi, Phi*]].
struct PolyQuad {
  Complex psi{1.0, 0.0};
  Complex psi_star{1.0, 0.0};
  Complex phi{1.0, 0.0};
  Complex phi_star{1.0, 0.0};
};

// Literal 2x2 product M0 M_1 ... M_j with M0 = [[1,1],[-1,1]] and
// M_j = [[z, z r_j],[r_j, 1]], evaluated at z = chain.z_ref.
PolyQuad product_eval(const VerblunskyChain& chain, long long j);

// Same quantities at an arbitrary point, via the four scalar recurrences
// (used by the measure and zero-freeness routines).
PolyQuad chain_eval(const VerblunskyChain& chain, Complex z, long long j);

// One classical recurrence step: Phi' = z Phi - r Phi*, Phi*' = Phi* -
// z r Phi.  The Psi family satisfies the same step with r negated.
std::pair<Complex, Complex> szego_step(Complex phi, Complex phi_star,
                                       Complex z, double r);

// Psi*_n as the closed sum over descending index tuples with alternating
// phase exponents, collapsed by a parity-indexed dynamic program; an
// implementation independent of the recurrences.  Capped at n <= 20.
Complex psi_star_explicit(const VerblunskyChain& chain);

// Density of the orthogonality measure at angle theta:
// prod(1-r^2) / (2 pi |Phi_n(e^{i theta})|^2), or the Psi variant.
double measure_density(const VerblunskyChain& chain, double theta,
                       bool psi_variant = false);

enum class ZeroFreeTarget { phi_star, psi_star, sum };

// Minimum modulus of the target polynomial over a dense circle grid plus its
// winding number around 0 (argument principle: winding 0 certifies no roots
// in the disk, up to grid resolution).  Nonzero winding raises
// WindingNonzero.  For the sum Psi* + Phi*, lower_bound carries
// sqrt(2) * prod sqrt(1-r^2), which min_modulus should dominate up to grid
// tolerance; for the single families it is left at 0.
struct ZeroFreeReport {
  double min_modulus = 0.0;
  long long winding = 0;
  double lower_bound = 0.0;
};
ZeroFreeReport zero_free_check(const VerblunskyChain& chain,
                               ZeroFreeTarget target);

// Monic coefficient vector (ascending powers) of Phi_j, maintained exactly
// by the coefficient-level recurrence; real because the chain is real.
// Capped at n <= 12; used by the monicity and duality checks.
std::vector<double> phi_coefficients(const VerblunskyChain& chain,
                                     long long j);

}  // namespace helm
