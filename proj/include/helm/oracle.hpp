#pragma once

#include <vector>

#include "helm/profile.hpp"
#include "helm/transfer.hpp"

namespace helm {

struct OdeSample {
  Complex u, du;
};

// Ground-truth integration of (zeta u')' + sigma^2 zeta u = 0 in the
// variables (u, v = zeta u'), both of which stay continuous across jumps; v
// is carried through each jump unchanged and u' = v/zeta is reassembled per
// segment.  Fixed-step RK4 with sub-steps chosen per gap so the marcher
// lands exactly on every requested sample; sigma = 0 integrates the same
// system (v' vanishes).  Results come back in input order.  This routine is
// deliberately independent of the exponential-operator evaluators.
std::vector<OdeSample> ode_solve(const ImpedanceProfile& profile, double sigma,
                                 Complex u0, Complex du0,
                                 const std::vector<double>& x_samples,
                                 long long steps = 4096);

struct PicardStats {
  int pieces = 0;
  int max_iterations = 0;  // worst piece
  double contraction = 0.0;  // largest per-piece contraction factor
};

// Successive approximation for A' = -m A, m = [[i sigma, alpha],[alpha,
// -i sigma]], as the fixed point of A = A0 - int m A.  The segment is split
// into pieces with contraction factor len*(|sigma| + sup|alpha|) <= 1/2, each
// iterated to sup-norm tolerance tol on a fixed trapezoid grid and chained
// left to right.  Also independent of the exponential-operator evaluators.
FieldState picard_solve(const Segment& segment, double sigma,
                        const FieldState& a0, double tol,
                        PicardStats* stats = nullptr);

}  // namespace helm
