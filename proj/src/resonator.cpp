// Copyright 2026 The pcb3d Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pcb3d/resonator.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>

#include <Eigen/Dense>

#include "pcb3d/csv.hpp"
#include "pcb3d/errors.hpp"
#include "pcb3d/levenberg_marquardt.hpp"
#include "pcb3d/units.hpp"

namespace pcb3d {
namespace {

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a <= -kPi ? a + 2.0 * kPi : a;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Least-squares line y = slope * x + intercept.
std::pair<double, double> line_fit(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {slope, my - slope * mx};
}

// Kasa algebraic circle fit; returns centre and radius.
std::pair<Complex, double> circle_fit(std::span<const Complex> z) {
  Eigen::MatrixXd a(static_cast<Eigen::Index>(z.size()), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    a(k, 0) = z[i].real();
    a(k, 1) = z[i].imag();
    a(k, 2) = 1.0;
    b[k] = -std::norm(z[i]);
  }
  const Eigen::Vector3d sol = a.colPivHouseholderQr().solve(b);
  const Complex c(-0.5 * sol[0], -0.5 * sol[1]);
  return {c, std::sqrt(std::max(0.0, std::norm(c) - sol[2]))};
}


NotchParams initial_guess(std::span<const Complex> z, std::span<const double> f) {
  const std::size_t n = z.size();
  const std::size_t wing = std::max<std::size_t>(2, n / 10);

  std::vector<double> wing_idx_f;
  std::vector<double> wing_phase;
  std::vector<double> phase(n);
  phase[0] = std::arg(z[0]);
  for (std::size_t i = 1; i < n; ++i) {
    phase[i] = phase[i - 1] + wrap_angle(std::arg(z[i]) - std::arg(z[i - 1]));
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i < wing || i >= n - wing) {
      wing_idx_f.push_back(f[i]);
      wing_phase.push_back(phase[i]);
    }
  }
  const double delay = -line_fit(wing_idx_f, wing_phase).first / (2.0 * kPi);

  std::vector<Complex> z1(n);
  for (std::size_t i = 0; i < n; ++i) z1[i] = z[i] * std::polar(1.0, 2.0 * kPi * f[i] * delay);

  auto [centre, radius] = circle_fit(z1);
  Complex wing_mean(0.0, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < wing || i >= n - wing) wing_mean += z1[i];
  }
  wing_mean /= static_cast<double>(2 * wing);
  Complex dir = wing_mean - centre;
  const Complex off = std::abs(dir) > 0.0 ? centre + radius * dir / std::abs(dir) : wing_mean;
  const Complex on = 2.0 * centre - off;
  const Complex coupling = 1.0 - on / off;  // (Ql/|Qc|) e^{i phi}

  NotchParams p;
  p.amplitude = std::abs(off);
  p.alpha = std::arg(off);
  p.delay = delay;
  p.phi = std::arg(coupling);
  const double ratio = std::max(std::abs(coupling), 1e-12);

  // 1/v - 1 = 2 i Ql (f/f0 - 1) with v the normalised Lorentzian; use the
  // samples inside its half-power band.
  std::vector<std::pair<double, std::size_t>> weight(n);
  std::vector<double> qy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex v = (1.0 - z1[i] / off) / coupling;
    weight[i] = {std::norm(v), i};
    qy[i] = (1.0 / v - 1.0).imag();
  }
  std::vector<double> xs;
  std::vector<double> ys;
  std::sort(weight.begin(), weight.end(), std::greater<>());
  const double fc = f[n / 2];
  for (std::size_t j = 0; j < n; ++j) {
    if (j >= 3 && weight[j].first < 0.5) break;
    xs.push_back(f[weight[j].second] - fc);
    ys.push_back(qy[weight[j].second]);
  }
  auto [slope, intercept] = line_fit(xs, ys);
  double f0 = fc - intercept / slope;
  double ql = 0.5 * slope * f0;
  if (!(slope > 0.0) || !(f0 > f.front() && f0 < f.back()) || !(ql > 0.0)) {
    std::size_t imin = 0;
    for (std::size_t i = 1; i < n; ++i) {
      if (std::abs(z[i]) < std::abs(z[imin])) imin = i;
    }
    f0 = f[imin];
    ql = f0 / ((f.back() - f.front()) / 10.0);
  }
  p.f0 = f0;
  p.q_loaded = ql;
  p.q_coupling = ql / ratio;
  return p;
}

void check_dip(std::span<const Complex> z) {
  const std::size_t n = z.size();
  const std::size_t wing = std::max<std::size_t>(2, n / 10);
  std::vector<double> wing_mag;
  std::vector<double> diffs;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < wing || i >= n - wing) wing_mag.push_back(std::abs(z[i]));
  }
  for (std::size_t i = 0; i + 1 < wing; ++i) {
    diffs.push_back(std::abs(std::abs(z[i + 1]) - std::abs(z[i])));
    diffs.push_back(std::abs(std::abs(z[n - 1 - i]) - std::abs(z[n - 2 - i])));
  }
  const double level = median(wing_mag);
  // Median absolute successive difference ~ 0.95 sigma for Gaussian noise.
  const double noise = diffs.empty() ? 0.0 : median(diffs) / 0.954;
  double lowest = level;
  for (const auto& s : z) lowest = std::min(lowest, std::abs(s));
  const double range = level - lowest;
  if (!(range > 3.0 * noise) || !(range > 1e-6 * level)) {
    throw FitFailure("no resonance dip found: dynamic range " + std::to_string(range) +
                     " vs noise floor " + std::to_string(noise));
  }
}

Eigen::VectorXd to_vec(const NotchParams& p) {
  Eigen::VectorXd x(NotchParams::kCount);
  x << p.f0, p.q_loaded, p.q_coupling, p.phi, p.amplitude, p.alpha, p.delay;
  return x;
}

NotchParams from_vec(const Eigen::VectorXd& x) {
  return NotchParams{x[0], x[1], x[2], x[3], x[4], x[5], x[6]};
}

}  // namespace

NotchParams NotchResonanceModel::params() const {
  return NotchParams{f0, q_loaded, q_coupling_mag, phi, amplitude, phase_offset, cable_delay};
}

NotchResonanceModel NotchResonanceModel::from_params(const NotchParams& p) {
  return NotchResonanceModel{p.f0, p.q_loaded, p.q_coupling, p.phi, p.amplitude, p.alpha, p.delay};
}

std::vector<Complex> model_s21(const NotchResonanceModel& model, const FrequencyGrid& grid, Exec exec) {
  if (!(model.f0 > 0.0) || !(model.q_loaded > 0.0) || !(model.q_coupling_mag > 0.0)) {
    throw DomainError("notch model needs positive f0, Ql and |Qc|");
  }
  std::vector<Complex> out(grid.size());
  kernels::notch_model(model.params(), grid.points(), out, exec);
  return out;
}

double qi_from_fit(const NotchResonanceModel& model) {
  if (!(model.q_loaded > 0.0) || !(model.q_coupling_mag > 0.0)) {
    throw DomainError("Ql and |Qc| must be positive");
  }
  const double inv = 1.0 / model.q_loaded - std::cos(model.phi) / model.q_coupling_mag;
  if (!(inv > 0.0)) {
    throw DomainError("over-coupled inconsistency: 1/Ql <= cos(phi)/|Qc|");
  }
  return 1.0 / inv;
}

NotchResonanceModel notch_from_qi(double f0, double q_internal, double q_loaded, double phi) {
  if (!(q_loaded < q_internal)) throw DomainError("Ql must be below Qi");
  NotchResonanceModel m;
  m.f0 = f0;
  m.q_loaded = q_loaded;
  m.phi = phi;
  m.q_coupling_mag = std::cos(phi) / (1.0 / q_loaded - 1.0 / q_internal);
  if (!(m.q_coupling_mag > 0.0)) throw DomainError("phi leaves no positive |Qc|");
  return m;
}

ResonanceFit fit_resonance(std::span<const Complex> trace, const FrequencyGrid& grid, Exec exec) {
  if (trace.size() != grid.size()) throw IncompatibleError("trace and grid lengths differ");
  if (trace.size() < 7) throw FitFailure("need at least 7 samples, got " + std::to_string(trace.size()));
  check_dip(trace);

  const auto freqs = grid.points();
  const NotchParams seed = initial_guess(trace, freqs);

  ResidualFn fn = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    const NotchParams p = from_vec(x);
    if (jac) {
      kernels::notch_residual_jacobian(p, freqs, trace, r, *jac, exec);
      return;
    }
    std::vector<Complex> m(freqs.size());
    kernels::notch_model(p, freqs, m, exec);
    const std::size_t n = freqs.size();
    r.resize(static_cast<Eigen::Index>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
      const Complex d = m[i] - trace[i];
      r[static_cast<Eigen::Index>(i)] = d.real();
      r[static_cast<Eigen::Index>(i + n)] = d.imag();
    }
  };

  LmOptions opts;
  opts.max_iterations = 200;
  opts.step_tolerance = 1e-9;
  opts.typical = Eigen::VectorXd::Zero(NotchParams::kCount);
  opts.typical[3] = 1.0;
  opts.typical[5] = 1.0;
  opts.typical[6] = 1.0 / (2.0 * kPi * (freqs.back() - freqs.front()));
  opts.feasible = [](const Eigen::VectorXd& x) {
    return x[0] > 0.0 && x[1] > 0.0 && x[2] > 0.0 && x[4] > 0.0;
  };
  const LmResult lm = levenberg_marquardt(fn, to_vec(seed), opts);

  NotchParams p = from_vec(lm.x);
  p.phi = wrap_angle(p.phi);
  p.alpha = wrap_angle(p.alpha);

  ResonanceFit fit;
  fit.model = NotchResonanceModel::from_params(p);
  try {
    fit.q_internal = qi_from_fit(fit.model);
  } catch (const DomainError& e) {
    throw FitFailure(std::string("fit landed on an unphysical model: ") + e.what());
  }
  fit.residual_rms = std::sqrt(2.0 * lm.cost / static_cast<double>(trace.size())) / p.amplitude;
  fit.covariance_diag.assign(lm.covariance_diag.data(), lm.covariance_diag.data() + lm.covariance_diag.size());
  fit.iterations = lm.iterations;
  fit.converged = lm.converged;
  return fit;
}

std::vector<std::optional<ResonanceFit>> fit_resonance_batch(std::span<const std::vector<Complex>> traces,
                                                             const FrequencyGrid& grid, Exec exec) {
  std::vector<std::optional<ResonanceFit>> out(traces.size());
  const auto count = static_cast<std::ptrdiff_t>(traces.size());
  auto one = [&](std::ptrdiff_t i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = fit_resonance(traces[k], grid, Exec::serial);
    } catch (const FitFailure&) {
      out[k].reset();
    }
  };
  if (exec == Exec::serial) {
    for (std::ptrdiff_t i = 0; i < count; ++i) one(i);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i) one(i);
  }
  return out;
}

S21Samples read_s21_csv(std::istream& in) {
  const csv::Table t = csv::read(in, {"freq_hz", "s21_re", "s21_im"});
  std::vector<double> f;
  S21Samples out;
  for (const auto& row : t.rows) {
    f.push_back(row[0]);
    out.trace.emplace_back(row[1], row[2]);
  }
  out.grid = FrequencyGrid(std::move(f));
  return out;
}

void write_s21_samples_csv(std::ostream& out, const FrequencyGrid& grid, std::span<const Complex> trace) {
  csv::Table t;
  t.header = {"freq_hz", "s21_re", "s21_im"};
  for (std::size_t k = 0; k < grid.size(); ++k) t.rows.push_back({grid[k], trace[k].real(), trace[k].imag()});
  csv::write(out, t);
}

}  // namespace pcb3d
