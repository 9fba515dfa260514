#pragma once

#include <string>
#include <vector>

#include "helm/hexp.hpp"
#include "helm/profile.hpp"

namespace helm {

// One frequency sample of the S-matrix
//   S = Sech * [[1, e^{2 i sigma x0} Sinh], [-e^{-2 i sigma x0} conj(Sinh), 1]]
// for an absolutely continuous profile.  Both transmissions coincide
// structurally, so a single t is stored; |t|^2 + |r|^2 = 1 on each row.
struct SMatrixEntry {
  double sigma = 0.0;
  Complex t{1.0, 0.0};
  Complex r1{0.0, 0.0};
  Complex r2{0.0, 0.0};
  double unitarity_residual = 0.0;  // max over the two rows
};

// t = Sech, r2 = e^{2 i sigma x0} Tanh, r1 = -e^{-2 i sigma x0}
// conj(Sinh)/Cosh, with Cosh/Sinh composed across all segments.  The phase
// factors are kept explicit so callers can renormalize to x0 = 0 themselves.
// Profiles reaching this point through the alpha parametrization carry no
// bound states, so no Blaschke correction is ever needed here.
SMatrixEntry s_matrix(const ImpedanceProfile& profile, double sigma,
                      const EvalSpec& spec = {});

// Residuals of the two scattering solutions' plane-wave asymptotics.  The
// start states are assembled from s_matrix under `spec`, then pushed through
// a transfer matrix recomputed at doubled resolution, so the residual
// measures numerical consistency instead of an algebraic cancellation:
//   f1: ((r2/t) e^{-i sigma x0}, (1/t) e^{i sigma x0}) -> (0, e^{i sigma x1})
//   f2: (e^{-i sigma x0}, 0) -> ((1/t) e^{-i sigma x1}, (r1/t) e^{i sigma x1})
struct JostReport {
  double f1_residual = 0.0;
  double f2_residual = 0.0;
};
JostReport jost_asymptotics_check(const ImpedanceProfile& profile,
                                  double sigma, const EvalSpec& spec = {});

// Entries for each grid frequency (strictly increasing, positive).  Pure per
// entry; `threads` > 1 distributes frequencies over a bounded pool with the
// output order fixed by the input index.
std::vector<SMatrixEntry> sweep(const ImpedanceProfile& profile,
                                const std::vector<double>& sigma_grid,
                                const EvalSpec& spec = {}, int threads = 1);

// Emission schema shared with the command-line tool; numbers are printed
// with %.17g so identical inputs give byte-identical tables.
const char* smatrix_csv_header();
std::string smatrix_csv_row(const SMatrixEntry& e);
std::string smatrix_json_row(const SMatrixEntry& e);

}  // namespace helm
