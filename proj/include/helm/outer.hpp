#pragma once

#include <string>
#include <vector>

#include "helm/hexp.hpp"
#include "helm/profile.hpp"

namespace helm {

// Sampled |Sech| on a real frequency grid.  Beyond the sampled range the
// modulus is modeled as the constant 1 (log 0 tail), which is exact in the
// limit because |Sech| -> 1 at high frequency; samples should themselves be
// near 1 at the grid ends.  `span` records x1 - x0 of the source profile so
// the transmission phase e^{i span sigma} can be reattached; data read back
// from CSV carries modulus only and leaves it at 0.
struct ModulusData {
  std::vector<double> grid;    // strictly increasing
  std::vector<double> values;  // |Sech| samples, positive
  double span = 0.0;
};

// Quadrature window for the reconstruction integral.
struct OuterSpec {
  double min_imag = 1e-2;     // reconstruction stays this far above the axis
  double half_width = 200.0;  // integrate over [-S, S]
  long long points = 1 << 16;  // trapezoid intervals
};

// Sech(sigma) rebuilt from its boundary modulus alone:
//   exp( (1/(i pi)) Integral log|Sech|(s) (1 + s sigma) / ((s - sigma)(1 + s^2)) ds ).
// Valid because Sech is outer in the upper half plane: it has no zeros and
// no singular factor there, so the modulus on the axis determines it.  The
// integrand takes log|Sech| from the linear interpolant of `data` and 0
// outside its range.
Complex outer_reconstruct(const ModulusData& data, Complex sigma,
                          const OuterSpec& spec = {});

// Evaluator settings the spectrum sampler uses by default: the order
// expansion, which stays accurate at frequencies where fixed-step
// integration has long since lost the phase.
EvalSpec default_spectrum_spec();

// |Sech| of an AC profile sampled over sigma_grid (any finite reals, sign
// unrestricted): the modulus of the transmission coefficient, which a
// far-field power measurement delivers without phase.  Worker threads split
// the grid; results do not depend on the thread count.
ModulusData power_spectrum(const ImpedanceProfile& profile,
                           const std::vector<double>& sigma_grid,
                           const EvalSpec& spec = default_spectrum_spec(),
                           int threads = 1);

// CSV with header "sigma,abs_sech" and %.17g rows.
std::string modulus_csv(const ModulusData& data);
ModulusData modulus_from_csv(const std::string& text);

}  // namespace helm
