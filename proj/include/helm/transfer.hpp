#pragma once

#include <mutex>
#include <string>
#include <unordered_map>

#include "helm/hexp.hpp"
#include "helm/profile.hpp"
#include "helm/su11.hpp"

namespace helm {

// sqrt(zeta)-weighted splitting of the field at one point: u = (a+b)/sqrt(zeta)
// and u' = i sigma (b-a)/sqrt(zeta).  a carries the left-moving part.  The
// split divides by sigma, so sigma = 0 never enters this representation.
struct FieldState {
  Complex a{0.0, 0.0};
  Complex b{0.0, 0.0};
  double x = 0.0;
  double sigma = 0.0;
};

struct WavefieldValue {
  Complex u, du;
};

// Transfer matrix across one AC segment: z = e^{-i L sigma} Cosh,
// w = e^{-i L sigma} Sinh.  For real sigma the result lies in SU(1,1); at
// complex sigma the pair (z, w) is the analytic continuation of those entries
// and the det() invariant no longer applies.
Su11Matrix g_matrix(const Segment& segment, Complex sigma, const EvalSpec& spec);
Su11Matrix g_matrix(const Segment& segment, Complex sigma,
                    HexpMethod method = HexpMethod::ode,
                    long long resolution = 4096);

// Inverse in the group: [[conj z, w], [conj w, z]].  Guards the det = 1
// premise and reports DetNotOne when the input drifted off the group.
Su11Matrix h_matrix(const Su11Matrix& g);

// A(x) = G(y_j, x) J_j ... J_1 G(start, y_1) A(start): alternating product of
// segment matrices and jump matrices.  Real sigma != 0 only; start and target
// must not sit on a jump with gamma != 1 (one-sided values are the caller's
// business).  Backward targets apply the inverse chain.
FieldState propagate(const ImpedanceProfile& profile, double sigma,
                     const FieldState& a0, double x,
                     const EvalSpec& spec = {});

// Wave field from Cauchy data (u0, du0) at x0, via the a/b representation.
WavefieldValue wavefield_u(const ImpedanceProfile& profile, double sigma,
                           Complex u0, Complex du0, double x,
                           const EvalSpec& spec = {});

// Truncated expansions of the two fundamental solutions on a single AC
// segment, used as cross-checks of wavefield_u:
//   cosine solution (u=1, u'=0 at lo):   e^{int alpha} Re(e^{-iX sigma} E_-)
//   sine solution   (u=0, u'=sigma at lo): -e^{int alpha} Im(e^{-iX sigma} E_+)
// with X = x - lo and E evaluated over (lo, x) at series order max_order.
double cosine_expansion(const Segment& segment, double sigma, double x,
                        int max_order, int grid_n);
double sine_expansion(const Segment& segment, double sigma, double x,
                      int max_order, int grid_n);

// Exact solution for a pure step profile (alpha == 0 everywhere): the chain
// collapses to free phases and jump matrices.  Returns the state at x1.
FieldState step_solution(const ImpedanceProfile& step_profile, double sigma,
                         const FieldState& a0);

// Diagonal high-frequency asymptote of a segment's transfer matrix.
Su11Matrix high_freq_g(const Segment& segment, Complex sigma);

// Concurrent insert-if-absent cache for per-segment transfer matrices, keyed
// by segment content, sigma, method and resolution.  Losing a race costs a
// duplicate computation, never a wrong value.
class GMatrixCache {
 public:
  Su11Matrix get(const Segment& segment, Complex sigma, const EvalSpec& spec);
  std::size_t size() const;
  void clear();

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, Su11Matrix> map_;
};

GMatrixCache& default_g_cache();

}  // namespace helm
