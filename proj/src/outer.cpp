#include "helm/outer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "helm/errors.hpp"
#include "helm/scattering.hpp"

namespace helm {

namespace {

void validate_modulus(const ModulusData& data) {
  if (data.grid.size() != data.values.size())
    fail(ErrorCode::invalid_argument,
         "grid and values carry different sample counts");
  if (data.grid.size() < 2)
    fail(ErrorCode::invalid_argument,
         "modulus data needs at least two samples");
  for (std::size_t i = 0; i < data.grid.size(); ++i) {
    if (!std::isfinite(data.grid[i]))
      fail(ErrorCode::invalid_argument, "non-finite frequency sample");
    if (i > 0 && !(data.grid[i - 1] < data.grid[i]))
      fail(ErrorCode::invalid_argument,
           "frequency grid must be strictly increasing");
    if (!(data.values[i] > 0.0) || !std::isfinite(data.values[i]))
      fail(ErrorCode::non_positive_modulus,
           "|Sech| sample " + std::to_string(i) + " is not positive");
  }
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Complex outer_reconstruct(const ModulusData& data, Complex sigma,
                          const OuterSpec& spec) {
  validate_modulus(data);
  if (!std::isfinite(sigma.real()) || !std::isfinite(sigma.imag()))
    fail(ErrorCode::invalid_argument, "sigma must be finite");
  if (!(sigma.imag() >= spec.min_imag))
    fail(ErrorCode::too_close_to_axis,
         "Im sigma = " + std::to_string(sigma.imag()) +
             " is below the reconstruction floor " +
             std::to_string(spec.min_imag));
  if (spec.points < 2)
    fail(ErrorCode::invalid_argument, "quadrature needs at least 2 intervals");
  if (!(spec.half_width > 0.0))
    fail(ErrorCode::invalid_argument, "half_width must be positive");

  // Precomputed log modulus; the interpolation below is linear in the log,
  // and identically 0 outside the sampled range (constant-1 tail).
  std::vector<double> logv(data.values.size());
  for (std::size_t i = 0; i < logv.size(); ++i)
    logv[i] = std::log(data.values[i]);

  const double S = spec.half_width;
  const long long n = spec.points;
  const double h = 2.0 * S / double(n);
  std::size_t cell = 0;  // marching interpolation cell; s only increases
  Complex sum = 0.0;
  for (long long k = 0; k <= n; ++k) {
    const double s = (k == n) ? S : -S + h * double(k);
    double lv = 0.0;
    if (s > data.grid.front() && s < data.grid.back()) {
      while (data.grid[cell + 1] < s) ++cell;
      const double w =
          (s - data.grid[cell]) / (data.grid[cell + 1] - data.grid[cell]);
      lv = logv[cell] * (1.0 - w) + logv[cell + 1] * w;
    }
    if (lv == 0.0) continue;
    const Complex kern =
        (1.0 + s * sigma) / ((s - sigma) * (1.0 + s * s));
    const double weight = (k == 0 || k == n) ? 0.5 * h : h;
    sum += weight * lv * kern;
  }
  return std::exp(sum / Complex(0.0, M_PI));
}

EvalSpec default_spectrum_spec() {
  EvalSpec spec;
  spec.method = HexpMethod::series;
  spec.grid_n = 2048;
  spec.max_order = 18;
  return spec;
}

ModulusData power_spectrum(const ImpedanceProfile& profile,
                           const std::vector<double>& sigma_grid,
                           const EvalSpec& spec, int threads) {
  if (sigma_grid.empty())
    fail(ErrorCode::invalid_argument, "sigma_grid must be nonempty");
  for (double s : sigma_grid)
    if (!std::isfinite(s))
      fail(ErrorCode::invalid_argument, "sigma_grid entries must be finite");

  ModulusData data;
  data.grid = sigma_grid;
  data.values.resize(sigma_grid.size());
  data.span = profile.x1() - profile.x0;

  auto eval_at = [&](std::size_t i) {
    data.values[i] = std::abs(s_matrix(profile, sigma_grid[i], spec).t);
  };

  const int workers = std::clamp<int>(
      threads, 1, int(std::min<std::size_t>(sigma_grid.size(), 64)));
  if (workers == 1) {
    for (std::size_t i = 0; i < sigma_grid.size(); ++i) eval_at(i);
    return data;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_lock;
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= sigma_grid.size()) return;
        try {
          eval_at(i);
        } catch (...) {
          std::lock_guard<std::mutex> guard(error_lock);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return data;
}

std::string modulus_csv(const ModulusData& data) {
  std::string out = "sigma,abs_sech\n";
  for (std::size_t i = 0; i < data.grid.size(); ++i)
    out += g17(data.grid[i]) + "," + g17(data.values[i]) + "\n";
  return out;
}

ModulusData modulus_from_csv(const std::string& text) {
  ModulusData data;
  std::size_t pos = 0;
  long long line = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string row = text.substr(pos, end - pos);
    pos = end + 1;
    ++line;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty()) continue;
    if (line == 1) {
      if (row != "sigma,abs_sech")
        fail(ErrorCode::parse_error,
             "line 1: expected header 'sigma,abs_sech', got '" + row + "'");
      continue;
    }
    const std::size_t comma = row.find(',');
    if (comma == std::string::npos)
      fail(ErrorCode::parse_error,
           "line " + std::to_string(line) + ": expected 'sigma,abs_sech' row");
    auto parse_field = [line](const std::string& field) {
      std::size_t used = 0;
      double value = 0.0;
      bool ok = !field.empty();
      if (ok) {
        try {
          value = std::stod(field, &used);
        } catch (const std::exception&) {
          ok = false;
        }
      }
      while (ok && used < field.size() && field[used] == ' ') ++used;
      if (!ok || used != field.size())
        fail(ErrorCode::parse_error,
             "line " + std::to_string(line) + ": '" + field +
                 "' is not a number");
      return value;
    };
    data.grid.push_back(parse_field(row.substr(0, comma)));
    data.values.push_back(parse_field(row.substr(comma + 1)));
  }
  if (line == 0)
    fail(ErrorCode::parse_error, "line 1: empty modulus file");
  return data;
}

}  // namespace helm
