#include "helm/scattering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "helm/transfer.hpp"

namespace helm {

namespace {

void require_ac(const ImpedanceProfile& profile) {
  profile.validate();
  for (const JumpPoint& j : profile.jumps)
    if (j.gamma != 1.0)
      fail(ErrorCode::has_jumps,
           "the profile jumps at y=" + std::to_string(j.y) +
               "; the scattering potential would pick up a delta' there");
}

struct CoshSinh {
  Complex ch, sh;
};

// Cosh and Sinh of the whole profile: compose the per-segment transfer
// matrices and strip the accumulated free phase.
CoshSinh total_cosh_sinh(const ImpedanceProfile& profile, double sigma,
                         const EvalSpec& spec) {
  Su11Matrix m;
  for (const Segment& seg : profile.segments)
    m = mul(g_matrix(seg, Complex(sigma, 0.0), spec), m);
  const Complex ph =
      std::exp(Complex(0.0, (profile.x1() - profile.x0) * sigma));
  return {ph * m.z, ph * m.w};
}

EvalSpec doubled(const EvalSpec& spec) {
  EvalSpec fine = spec;
  fine.steps *= 2;
  fine.grid_n *= 2;
  fine.n *= 2;
  return fine;
}

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

SMatrixEntry s_matrix(const ImpedanceProfile& profile, double sigma,
                      const EvalSpec& spec) {
  require_ac(profile);
  if (!std::isfinite(sigma))
    fail(ErrorCode::invalid_argument, "sigma must be finite and real");
  const CoshSinh cs = total_cosh_sinh(profile, sigma, spec);
  const Complex phase0 = std::exp(Complex(0.0, 2.0 * sigma * profile.x0));
  SMatrixEntry e;
  e.sigma = sigma;
  e.t = 1.0 / cs.ch;
  e.r2 = phase0 * cs.sh / cs.ch;
  e.r1 = -std::conj(cs.sh) / (phase0 * cs.ch);
  const double t2 = std::norm(e.t);
  e.unitarity_residual = std::max(std::abs(t2 + std::norm(e.r1) - 1.0),
                                  std::abs(t2 + std::norm(e.r2) - 1.0));
  return e;
}

JostReport jost_asymptotics_check(const ImpedanceProfile& profile,
                                  double sigma, const EvalSpec& spec) {
  const SMatrixEntry s = s_matrix(profile, sigma, spec);
  const double x0 = profile.x0, x1 = profile.x1();
  Su11Matrix m;
  const EvalSpec fine = doubled(spec);
  for (const Segment& seg : profile.segments)
    m = mul(g_matrix(seg, Complex(sigma, 0.0), fine), m);

  const Complex el0 = std::exp(Complex(0.0, -sigma * x0));
  const Complex er0 = std::exp(Complex(0.0, sigma * x0));
  const Complex el1 = std::exp(Complex(0.0, -sigma * x1));
  const Complex er1 = std::exp(Complex(0.0, sigma * x1));

  JostReport rep;
  {
    auto ab = apply(m, (s.r2 / s.t) * el0, (1.0 / s.t) * er0);
    rep.f1_residual = std::max(std::abs(ab[0]), std::abs(ab[1] - er1));
  }
  {
    auto ab = apply(m, el0, Complex(0.0, 0.0));
    rep.f2_residual = std::max(std::abs(ab[0] - (1.0 / s.t) * el1),
                               std::abs(ab[1] - (s.r1 / s.t) * er1));
  }
  return rep;
}

std::vector<SMatrixEntry> sweep(const ImpedanceProfile& profile,
                                const std::vector<double>& sigma_grid,
                                const EvalSpec& spec, int threads) {
  require_ac(profile);
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    if (!(sigma_grid[i] > 0.0))
      fail(ErrorCode::invalid_argument,
           "sweep frequencies must be positive");
    if (i > 0 && !(sigma_grid[i] > sigma_grid[i - 1]))
      fail(ErrorCode::invalid_argument,
           "sweep frequencies must be strictly increasing");
  }
  std::vector<SMatrixEntry> out(sigma_grid.size());
  const int workers =
      std::max(1, std::min<int>(threads, int(sigma_grid.size())));
  if (workers == 1) {
    for (std::size_t i = 0; i < sigma_grid.size(); ++i)
      out[i] = s_matrix(profile, sigma_grid[i], spec);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= sigma_grid.size()) return;
        try {
          out[i] = s_matrix(profile, sigma_grid[i], spec);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return out;
}

const char* smatrix_csv_header() {
  return "sigma,re_t,im_t,abs_t,re_r1,im_r1,re_r2,im_r2,unitarity_residual";
}

std::string smatrix_csv_row(const SMatrixEntry& e) {
  return g17(e.sigma) + "," + g17(e.t.real()) + "," + g17(e.t.imag()) + "," +
         g17(std::abs(e.t)) + "," + g17(e.r1.real()) + "," +
         g17(e.r1.imag()) + "," + g17(e.r2.real()) + "," + g17(e.r2.imag()) +
         "," + g17(e.unitarity_residual);
}

std::string smatrix_json_row(const SMatrixEntry& e) {
  return "{\"sigma\":" + g17(e.sigma) + ",\"re_t\":" + g17(e.t.real()) +
         ",\"im_t\":" + g17(e.t.imag()) + ",\"abs_t\":" + g17(std::abs(e.t)) +
         ",\"re_r1\":" + g17(e.r1.real()) + ",\"im_r1\":" + g17(e.r1.imag()) +
         ",\"re_r2\":" + g17(e.r2.real()) + ",\"im_r2\":" + g17(e.r2.imag()) +
         ",\"unitarity_residual\":" + g17(e.unitarity_residual) + "}";
}

}  // namespace helm
