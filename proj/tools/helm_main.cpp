// Command-line surface over the library: frequency sweeps, wave-field
// tables, convergence studies, spectrum sampling and phase retrieval.
// Every table is emitted with %.17g so identical inputs produce identical
// bytes; diagnostics go to stderr and are silenced by --quiet.
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "helm/errors.hpp"
#include "helm/hexp.hpp"
#include "helm/opuc.hpp"
#include "helm/oracle.hpp"
#include "helm/outer.hpp"
#include "helm/profile_io.hpp"
#include "helm/scattering.hpp"
#include "helm/transfer.hpp"

using namespace helm;

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Usage-level failures (unreadable input, out-of-domain requests) exit 2;
// anything that went wrong while computing exits 3.
int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::parse_error:
    case ErrorCode::invalid_profile:
    case ErrorCode::invalid_argument:
    case ErrorCode::non_positive_gamma:
    case ErrorCode::non_finite_alpha:
    case ErrorCode::out_of_domain:
    case ErrorCode::boundary_point:
    case ErrorCode::sigma_zero:
    case ErrorCode::has_jumps:
    case ErrorCode::non_step_profile:
    case ErrorCode::index_out_of_range:
    case ErrorCode::n_too_large_for_explicit:
    case ErrorCode::order_overflow:
    case ErrorCode::step_count_too_small:
    case ErrorCode::verblunsky_out_of_range:
    case ErrorCode::too_close_to_axis:
    case ErrorCode::non_positive_modulus:
      return 2;
    default:
      return 3;
  }
}

int worker_count() {
  int n = int(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("HELM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1)
      n = int(std::min<long>(n, cap));
  }
  return std::min(n, 64);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::parse_error, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Options common to every subcommand.
struct CommonOpts {
  std::string profile_path;
  std::string method = "ode";
  int steps = 4096;
  int order = 25;
  long long n = 100000;
  double tol = 1e-6;
  std::string format = "csv";
  std::string out;
  bool quiet = false;
};

void attach_common(CLI::App* sub, CommonOpts& opt) {
  sub->add_option("profile", opt.profile_path, "profile JSON file")
      ->required();
  sub->add_option("--method", opt.method,
                  "evaluator: series, ode or opuc (default ode)");
  sub->add_option("--steps", opt.steps,
                  "ode step count / series grid size (default 4096)");
  sub->add_option("--order", opt.order, "series order cap (default 25)");
  sub->add_option("--n", opt.n, "grid product size (default 100000)");
  sub->add_option("--tol", opt.tol,
                  "numerical-failure threshold for invariant residuals "
                  "(default 1e-6)");
  sub->add_option("--format", opt.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", opt.out, "write the table here instead of stdout");
  sub->add_flag("--quiet", opt.quiet, "suppress diagnostics");
}

EvalSpec spec_from(const CommonOpts& opt) {
  EvalSpec spec;
  spec.method = method_from_name(opt.method);
  spec.steps = opt.steps;
  spec.grid_n = opt.steps;
  spec.max_order = opt.order;
  spec.n = opt.n;
  return spec;
}

void emit(const std::string& text, const CommonOpts& opt,
          const std::string& note) {
  if (opt.out.empty()) {
    std::fwrite(text.data(), 1, text.size(), stdout);
  } else {
    std::ofstream out(opt.out, std::ios::binary);
    if (!out)
      fail(ErrorCode::invalid_argument,
           "cannot open '" + opt.out + "' for writing");
    out << text;
  }
  if (!opt.quiet) std::cerr << note << "\n";
}

int run_smatrix(const CommonOpts& opt, double sigma_min, double sigma_max,
                int points) {
  const ImpedanceProfile profile = load_profile(opt.profile_path);
  if (points < 1)
    fail(ErrorCode::invalid_argument, "--points must be >= 1");
  std::vector<double> grid(std::size_t(points), 0.0);
  for (int i = 0; i < points; ++i)
    grid[std::size_t(i)] =
        points == 1 ? sigma_min
                    : sigma_min + (sigma_max - sigma_min) * double(i) /
                                      double(points - 1);
  const std::vector<SMatrixEntry> rows =
      sweep(profile, grid, spec_from(opt), worker_count());
  for (const SMatrixEntry& e : rows)
    if (!(e.unitarity_residual <= opt.tol))
      fail(ErrorCode::non_finite_result,
           "unitarity residual " + g17(e.unitarity_residual) + " at sigma = " +
               g17(e.sigma) + " exceeds --tol " + g17(opt.tol));
  std::string text;
  if (opt.format == "json") {
    text = "{\"rows\":[";
    for (std::size_t i = 0; i < rows.size(); ++i)
      text += (i ? "," : "") + smatrix_json_row(rows[i]);
    text += "]}\n";
  } else {
    text = std::string(smatrix_csv_header()) + "\n";
    for (const SMatrixEntry& e : rows) text += smatrix_csv_row(e) + "\n";
  }
  emit(text, opt, "smatrix: " + std::to_string(rows.size()) + " rows");
  return 0;
}

int run_field(const CommonOpts& opt, double sigma, double xmin, double xmax,
              int points, bool have_window, Complex u0, Complex du0) {
  const ImpedanceProfile profile = load_profile(opt.profile_path);
  if (points < 1)
    fail(ErrorCode::invalid_argument, "--points must be >= 1");
  if (!have_window) {
    xmin = profile.x0;
    xmax = profile.x1();
  }
  const EvalSpec spec = spec_from(opt);
  std::string text;
  const bool json = opt.format == "json";
  text = json ? "{\"rows\":[" : "x,re_u,im_u,re_du,im_du\n";
  for (int i = 0; i < points; ++i) {
    const double x =
        points == 1
            ? xmin
            : xmin + (xmax - xmin) * double(i) / double(points - 1);
    const WavefieldValue v = wavefield_u(profile, sigma, u0, du0, x, spec);
    if (!std::isfinite(v.u.real()) || !std::isfinite(v.u.imag()) ||
        !std::isfinite(v.du.real()) || !std::isfinite(v.du.imag()))
      fail(ErrorCode::non_finite_result,
           "wave field is not finite at x = " + g17(x));
    if (json) {
      text += std::string(i ? "," : "") + "{\"x\":" + g17(x) +
              ",\"re_u\":" + g17(v.u.real()) + ",\"im_u\":" + g17(v.u.imag()) +
              ",\"re_du\":" + g17(v.du.real()) +
              ",\"im_du\":" + g17(v.du.imag()) + "}";
    } else {
      text += g17(x) + "," + g17(v.u.real()) + "," + g17(v.u.imag()) + "," +
              g17(v.du.real()) + "," + g17(v.du.imag()) + "\n";
    }
  }
  if (json) text += "]}\n";
  emit(text, opt, "field: " + std::to_string(points) + " rows");
  return 0;
}

// Total forward transfer pair (z, w) recovered through the public
// propagation interface: A(x1) = (z, -conj(w)) for Cauchy data (1, 0).
Su11Matrix total_pair(const ImpedanceProfile& profile, double sigma,
                      const EvalSpec& spec) {
  FieldState a0;
  a0.a = Complex(1.0);
  a0.b = Complex(0.0);
  a0.x = profile.x0;
  a0.sigma = sigma;
  const FieldState end = propagate(profile, sigma, a0, profile.x1(), spec);
  Su11Matrix m;
  m.z = end.a;
  m.w = -std::conj(end.b);
  return m;
}

int run_converge(const CommonOpts& opt, double sigma,
                 const std::vector<std::string>& methods,
                 const std::vector<long long>& resolutions) {
  const ImpedanceProfile profile = load_profile(opt.profile_path);
  if (resolutions.empty())
    fail(ErrorCode::invalid_argument, "--resolutions must be nonempty");
  EvalSpec ref_spec;
  ref_spec.method = HexpMethod::ode;
  ref_spec.steps = 65536;
  const Su11Matrix ref = total_pair(profile, sigma, ref_spec);

  const bool json = opt.format == "json";
  std::string text = json ? "{\"rows\":[" : "method,resolution,error\n";
  bool first = true;
  for (const std::string& name : methods) {
    const HexpMethod method = method_from_name(name);
    for (long long resolution : resolutions) {
      const Su11Matrix got =
          total_pair(profile, sigma, EvalSpec::with(method, resolution));
      const double err =
          std::max(std::abs(got.z - ref.z), std::abs(got.w - ref.w));
      if (!std::isfinite(err))
        fail(ErrorCode::non_finite_result,
             "non-finite error for " + name + " at resolution " +
                 std::to_string(resolution));
      if (json) {
        text += std::string(first ? "" : ",") + "{\"method\":\"" + name +
                "\",\"resolution\":" + std::to_string(resolution) +
                ",\"error\":" + g17(err) + "}";
      } else {
        text += name + "," + std::to_string(resolution) + "," + g17(err) +
                "\n";
      }
      first = false;
    }
  }
  if (json) text += "]}\n";
  emit(text, opt, "converge: " +
                      std::to_string(methods.size() * resolutions.size()) +
                      " rows");
  return 0;
}

int run_opuc(const CommonOpts& opt, double sigma,
             const std::vector<long long>& n_list) {
  const ImpedanceProfile profile = load_profile(opt.profile_path);
  for (const JumpPoint& j : profile.jumps)
    if (j.gamma != 1.0)
      fail(ErrorCode::has_jumps,
           "the grid product table needs an AC profile");
  if (profile.segments.size() != 1)
    fail(ErrorCode::invalid_argument,
         "the grid product table needs a single segment");
  if (n_list.empty())
    fail(ErrorCode::invalid_argument, "--n-list must be nonempty");
  const Segment& seg = profile.segments.front();
  const HexpValue ref = eval_ode(seg, sigma, 65536);

  const bool json = opt.format == "json";
  std::string text = json ? "{\"rows\":[" : "n,error\n";
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    const VerblunskyChain chain = chain_from_segment(seg, sigma, n_list[i]);
    const PolyQuad q = product_eval(chain, chain.n);
    const double err = std::max(std::abs(q.psi_star - ref.e_plus),
                                std::abs(q.phi_star - ref.e_minus));
    if (!std::isfinite(err))
      fail(ErrorCode::non_finite_result,
           "non-finite error at n = " + std::to_string(n_list[i]));
    if (json) {
      text += std::string(i ? "," : "") + "{\"n\":" +
              std::to_string(n_list[i]) + ",\"error\":" + g17(err) + "}";
    } else {
      text += std::to_string(n_list[i]) + "," + g17(err) + "\n";
    }
  }
  if (json) text += "]}\n";
  emit(text, opt, "opuc: " + std::to_string(n_list.size()) + " rows");
  return 0;
}

int run_outer(const CommonOpts& opt, bool have_sigma, double sigma_re,
              double sigma_im, const std::string& spectrum_in,
              const std::string& spectrum_out, double grid_max,
              double grid_step) {
  ModulusData data;
  if (!spectrum_in.empty()) {
    data = modulus_from_csv(read_file(spectrum_in));
  } else {
    const ImpedanceProfile profile = load_profile(opt.profile_path);
    if (!(grid_step > 0.0) || !(grid_max > 0.0))
      fail(ErrorCode::invalid_argument,
           "--grid-max and --grid-step must be positive");
    std::vector<double> grid;
    const long long half = llround(grid_max / grid_step);
    for (long long i = -half; i <= half; ++i)
      grid.push_back(grid_step * double(i));
    data = power_spectrum(profile, grid, default_spectrum_spec(),
                          worker_count());
  }
  if (!spectrum_out.empty()) {
    std::ofstream out(spectrum_out, std::ios::binary);
    if (!out)
      fail(ErrorCode::invalid_argument,
           "cannot open '" + spectrum_out + "' for writing");
    out << modulus_csv(data);
  }

  const bool json = opt.format == "json";
  std::string text;
  std::string note;
  if (have_sigma) {
    const Complex sigma(sigma_re, sigma_im);
    const Complex sech = outer_reconstruct(data, sigma);
    if (json) {
      text = "{\"sigma_re\":" + g17(sigma_re) + ",\"sigma_im\":" +
             g17(sigma_im) + ",\"re_sech\":" + g17(sech.real()) +
             ",\"im_sech\":" + g17(sech.imag()) + ",\"abs_sech\":" +
             g17(std::abs(sech)) + "}\n";
    } else {
      text = "re_sech,im_sech,abs_sech\n" + g17(sech.real()) + "," +
             g17(sech.imag()) + "," + g17(std::abs(sech)) + "\n";
    }
    note = "outer: reconstructed from " + std::to_string(data.grid.size()) +
           " samples";
  } else if (json) {
    text = "{\"rows\":[";
    for (std::size_t i = 0; i < data.grid.size(); ++i)
      text += std::string(i ? "," : "") + "{\"sigma\":" + g17(data.grid[i]) +
              ",\"abs_sech\":" + g17(data.values[i]) + "}";
    text += "]}\n";
    note = "outer: " + std::to_string(data.grid.size()) + " samples";
  } else {
    text = modulus_csv(data);
    note = "outer: " + std::to_string(data.grid.size()) + " samples";
  }
  emit(text, opt, note);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"impedance transfer-matrix and scattering toolkit"};
  app.require_subcommand(1);

  CommonOpts sm_opt;
  double sm_min = 0.0, sm_max = 0.0;
  int sm_points = 0;
  CLI::App* sm = app.add_subcommand(
      "smatrix", "transmission/reflection sweep over a frequency interval");
  attach_common(sm, sm_opt);
  sm->add_option("--sigma-min", sm_min, "first frequency")->required();
  sm->add_option("--sigma-max", sm_max, "last frequency")->required();
  sm->add_option("--points", sm_points, "grid size")->required();

  CommonOpts fd_opt;
  double fd_sigma = 0.0, fd_xmin = 0.0, fd_xmax = 0.0;
  double fd_u0re = 1.0, fd_u0im = 0.0, fd_du0re = 0.0, fd_du0im = 0.0;
  int fd_points = 101;
  CLI::App* fd = app.add_subcommand(
      "field", "wave field from Cauchy data at the left edge");
  attach_common(fd, fd_opt);
  fd->add_option("--sigma", fd_sigma, "frequency (real, nonzero)")
      ->required();
  CLI::Option* fd_win_lo =
      fd->add_option("--xmin", fd_xmin, "window start (default x0)");
  CLI::Option* fd_win_hi =
      fd->add_option("--xmax", fd_xmax, "window end (default x1)");
  fd_win_lo->needs(fd_win_hi);
  fd_win_hi->needs(fd_win_lo);
  fd->add_option("--points", fd_points, "grid size (default 101)");
  fd->add_option("--u0-re", fd_u0re, "Re u(x0) (default 1)");
  fd->add_option("--u0-im", fd_u0im, "Im u(x0) (default 0)");
  fd->add_option("--du0-re", fd_du0re, "Re u'(x0) (default 0)");
  fd->add_option("--du0-im", fd_du0im, "Im u'(x0) (default 0)");

  CommonOpts cv_opt;
  double cv_sigma = 0.0;
  std::vector<std::string> cv_methods{"ode"};
  std::vector<long long> cv_resolutions{256, 512, 1024, 2048, 4096};
  CLI::App* cv = app.add_subcommand(
      "converge", "error of each evaluator against a high-resolution "
                  "reference, per resolution");
  attach_common(cv, cv_opt);
  cv->add_option("--sigma", cv_sigma, "frequency (real, nonzero)")
      ->required();
  cv->add_option("--methods", cv_methods,
                 "comma-separated evaluators (default ode)")
      ->delimiter(',');
  cv->add_option("--resolutions", cv_resolutions,
                 "comma-separated resolutions (default 256..4096)")
      ->delimiter(',');

  CommonOpts ou_opt;
  double ou_re = 0.0, ou_im = 0.0, ou_gmax = 200.0, ou_gstep = 0.1;
  std::string ou_in, ou_out;
  CLI::App* ou = app.add_subcommand(
      "outer", "sample |Sech| and/or rebuild Sech from its modulus");
  attach_common(ou, ou_opt);
  CLI::Option* ou_re_opt = ou->add_option(
      "--sigma-re", ou_re, "Re sigma of the reconstruction point");
  CLI::Option* ou_im_opt = ou->add_option(
      "--sigma-im", ou_im, "Im sigma of the reconstruction point (>= 1e-2)");
  ou_re_opt->needs(ou_im_opt);
  ou_im_opt->needs(ou_re_opt);
  ou->add_option("--spectrum-in", ou_in,
                 "read the modulus from this CSV instead of sampling");
  ou->add_option("--spectrum-out", ou_out,
                 "also write the sampled modulus CSV here");
  ou->add_option("--grid-max", ou_gmax,
                 "sample frequencies in [-grid-max, grid-max] (default 200)");
  ou->add_option("--grid-step", ou_gstep, "sample spacing (default 0.1)");

  CommonOpts op_opt;
  double op_sigma = 0.0;
  std::vector<long long> op_nlist{1000, 10000, 100000};
  CLI::App* op = app.add_subcommand(
      "opuc", "grid-product convergence table against the ode evaluator");
  attach_common(op, op_opt);
  op->add_option("--sigma", op_sigma, "frequency (real)")->required();
  op->add_option("--n-list", op_nlist,
                 "comma-separated grid sizes (default 1000,10000,100000)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sm->parsed()) return run_smatrix(sm_opt, sm_min, sm_max, sm_points);
    if (fd->parsed())
      return run_field(fd_opt, fd_sigma, fd_xmin, fd_xmax, fd_points,
                       fd_win_lo->count() > 0, Complex(fd_u0re, fd_u0im),
                       Complex(fd_du0re, fd_du0im));
    if (cv->parsed())
      return run_converge(cv_opt, cv_sigma, cv_methods, cv_resolutions);
    if (ou->parsed())
      return run_outer(ou_opt, ou_re_opt->count() > 0, ou_re, ou_im, ou_in,
                       ou_out, ou_gmax, ou_gstep);
    if (op->parsed()) return run_opuc(op_opt, op_sigma, op_nlist);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
