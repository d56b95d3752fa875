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

#include "pcb3d/rabi.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include "pcb3d/csv.hpp"
#include "pcb3d/errors.hpp"
#include "pcb3d/levenberg_marquardt.hpp"
#include "pcb3d/units.hpp"

namespace pcb3d {
namespace {

using C = std::complex<double>;

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a <= -kPi ? a + 2.0 * kPi : a;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

void QubitSpec::validate() const {
  if (!(f01 > 0.0)) throw DomainError("qubit frequency must be positive");
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw DomainError("coherence times must be positive");
  if (t2 > 2.0 * t1 * (1.0 + 1e-12)) throw DomainError("T2 must not exceed 2 T1");
}

void DriveSpec::validate() const {
  if (!(rabi_rate >= 0.0)) throw DomainError("Rabi rate must be non-negative");
  if (!(duration >= 0.0)) throw DomainError("drive duration must be non-negative");
  if (!(drive_frequency >= 0.0)) throw DomainError("drive frequency must be non-negative");
  if (envelope == Envelope::shaped && !(rise >= 0.0 && 2.0 * rise <= duration)) {
    throw DomainError("shaped pulse needs 0 <= 2 rise <= duration");
  }
}

double DriveSpec::rate_at(double t) const {
  if (t < 0.0 || t > duration) return 0.0;
  if (envelope == Envelope::rectangular || rise <= 0.0) return rabi_rate;
  const double edge = std::min(t, duration - t);
  if (edge >= rise) return rabi_rate;
  const double s = std::sin(0.5 * kPi * edge / rise);
  return rabi_rate * s * s;
}

double rabi_envelope_time(const QubitSpec& qubit) { return 2.0 / (1.0 / qubit.t1 + 1.0 / qubit.t2); }

LindbladModel qubit_drive_model(const QubitSpec& qubit, const DriveSpec& drive) {
  qubit.validate();
  drive.validate();
  const double detuning = drive.drive_frequency > 0.0 ? drive.drive_frequency - qubit.f01 : 0.0;
  MatXc sx(2, 2), sz(2, 2), lower(2, 2);
  sx << 0.0, 1.0, 1.0, 0.0;
  sz << 1.0, 0.0, 0.0, -1.0;
  lower << 0.0, 1.0, 0.0, 0.0;  // |0><1|

  LindbladModel model;
  model.hamiltonian = [=](double t) -> MatXc {
    return (2.0 * kPi) * (0.5 * drive.rate_at(t) * sx - 0.5 * detuning * sz);
  };
  model.jumps.push_back(std::sqrt(1.0 / qubit.t1) * lower);
  const double gphi = std::max(0.0, qubit.dephasing_rate());
  if (gphi > 0.0) model.jumps.push_back(std::sqrt(0.5 * gphi) * sz);
  return model;
}

double rabi_step(const QubitSpec& qubit, const DriveSpec& drive) {
  const double detuning = drive.drive_frequency > 0.0 ? std::abs(drive.drive_frequency - qubit.f01) : 0.0;
  const double rate = std::max(drive.rabi_rate, detuning);
  double h = qubit.t2 / 100.0;
  if (rate > 0.0) h = std::min(h, 1.0 / (100.0 * rate));
  return h;
}

RabiTrace simulate_rabi(const QubitSpec& qubit, const DriveSpec& drive, std::span<const double> times) {
  const LindbladModel model = qubit_drive_model(qubit, drive);
  MatXc rho0 = MatXc::Zero(2, 2);
  rho0(0, 0) = 1.0;
  // integrate through the envelope corners instead of stepping over them
  std::vector<double> edges{drive.duration};
  if (drive.envelope == Envelope::shaped) {
    edges.push_back(drive.rise);
    edges.push_back(drive.duration - drive.rise);
  }
  std::vector<double> grid(times.begin(), times.end());
  std::vector<char> requested(grid.size(), 1);
  for (double e : edges) {
    if (e <= 0.0 || std::find(grid.begin(), grid.end(), e) != grid.end()) continue;
    grid.push_back(e);
    requested.push_back(0);
  }
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid[a] < grid[b]; });
  std::vector<double> sorted;
  sorted.reserve(grid.size());
  for (std::size_t i : order) sorted.push_back(grid[i]);
  if (!std::is_sorted(times.begin(), times.end())) throw DomainError("sample times must be ascending and non-negative");
  const auto states = evolve(model, rho0, sorted, rabi_step(qubit, drive));
  RabiTrace out;
  out.times.assign(times.begin(), times.end());
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (requested[order[k]]) out.excited_population.push_back(states[k](1, 1).real());
  }
  return out;
}

double rabi_model(const RabiFit& fit, double t) {
  const double decay = std::isinf(fit.tau) ? 1.0 : std::exp(-t / fit.tau);
  return fit.amplitude * decay * std::cos(2.0 * kPi * fit.omega * t + fit.phase) + fit.offset;
}

RabiFit fit_rabi(const RabiTrace& trace) {
  const auto& t = trace.times;
  const auto& y = trace.excited_population;
  const std::size_t n = t.size();
  if (n != y.size()) throw DomainError("times and populations differ in length");
  if (n < 8) throw FitFailure("need at least 8 samples");
  const double span = t.back() - t.front();
  if (!(span > 0.0)) throw FitFailure("trace spans no time");

  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  std::vector<double> yc(n);
  double ymax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    yc[i] = y[i] - mean;
    ymax = std::max(ymax, std::abs(yc[i]));
  }

  // Direct DFT of the mean-subtracted trace on a 4x zero-padded frequency grid
  // (works for non-uniform sampling too).
  constexpr int kPad = 4;
  const double df = 1.0 / (kPad * span);
  const auto bins = static_cast<std::size_t>(kPad * static_cast<double>(n) / 2.0);
  std::vector<double> mag(bins);
  std::vector<C> spec(bins);
  for (std::size_t k = 1; k < bins; ++k) {
    C acc(0.0, 0.0);
    const double f = df * static_cast<double>(k);
    for (std::size_t i = 0; i < n; ++i) acc += yc[i] * std::polar(1.0, -2.0 * kPi * f * (t[i] - t.front()));
    spec[k] = acc;
    mag[k] = std::abs(acc);
  }
  std::size_t peak = 1;
  for (std::size_t k = 2; k < bins; ++k) {
    if (mag[k] > mag[peak]) peak = k;
  }
  const double floor = median(std::vector<double>(mag.begin() + 1, mag.end()));
  if (!(ymax > 1e-12) || !(mag[peak] > 4.0 * floor)) {
    throw FitFailure("no dominant spectral peak in Rabi trace");
  }
  double shift = 0.0;
  if (peak > 1 && peak + 1 < bins) {
    const double a = mag[peak - 1], b = mag[peak], c = mag[peak + 1];
    const double den = a - 2.0 * b + c;
    if (den < 0.0) shift = 0.5 * (a - c) / den;
  }
  const double f_init = df * (static_cast<double>(peak) + shift);
  if (f_init * span < 1.0) throw FitFailure("less than one oscillation period in the trace");

  // Envelope: largest |deviation| in each half period, log-linear in time.
  const double half = 0.5 / f_init;
  std::vector<double> et;
  std::vector<double> ev;
  for (double start = t.front(); start < t.back(); start += half) {
    double best = 0.0;
    double when = start;
    for (std::size_t i = 0; i < n; ++i) {
      if (t[i] >= start && t[i] < start + half && std::abs(yc[i]) > best) {
        best = std::abs(yc[i]);
        when = t[i];
      }
    }
    if (best > 0.0) {
      et.push_back(when - t.front());
      ev.push_back(std::log(best));
    }
  }
  double gamma = 0.1 / span;
  double amp = ymax;
  if (et.size() >= 2) {
    const double m = static_cast<double>(et.size());
    const double mt = std::accumulate(et.begin(), et.end(), 0.0) / m;
    const double mv = std::accumulate(ev.begin(), ev.end(), 0.0) / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < et.size(); ++i) {
      sxx += (et[i] - mt) * (et[i] - mt);
      sxy += (et[i] - mt) * (ev[i] - mv);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    if (slope < 0.0) gamma = -slope;
    amp = std::exp(mv - slope * mt);
  }
  // Phase of the DFT bin referenced to t = 0 rather than the first sample.
  const C bin = spec[peak];
  const double phase0 = wrap_angle(std::arg(bin) - 2.0 * kPi * f_init * t.front());

  // Parameters: A, gamma, f, phase, B.
  ResidualFn fn = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
    r.resize(static_cast<Eigen::Index>(n));
    if (jac) jac->resize(static_cast<Eigen::Index>(n), 5);
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      const double e = std::exp(-x[1] * t[i]);
      const double arg = 2.0 * kPi * x[2] * t[i] + x[3];
      const double c = std::cos(arg);
      const double s = std::sin(arg);
      r[k] = x[0] * e * c + x[4] - y[i];
      if (jac) {
        (*jac)(k, 0) = e * c;
        (*jac)(k, 1) = -t[i] * x[0] * e * c;
        (*jac)(k, 2) = -2.0 * kPi * t[i] * x[0] * e * s;
        (*jac)(k, 3) = -x[0] * e * s;
        (*jac)(k, 4) = 1.0;
      }
    }
  };
  Eigen::VectorXd x0(5);
  x0 << amp, gamma, f_init, phase0, mean;
  LmOptions opts;
  opts.typical = Eigen::VectorXd::Zero(5);
  opts.typical[0] = ymax;
  opts.typical[1] = 1.0 / span;
  opts.typical[3] = 1.0;
  opts.typical[4] = 1.0;
  const LmResult lm = levenberg_marquardt(fn, x0, opts);

  RabiFit fit;
  fit.amplitude = lm.x[0];
  fit.phase = lm.x[3];
  if (fit.amplitude < 0.0) {
    fit.amplitude = -fit.amplitude;
    fit.phase += kPi;
  }
  fit.phase = wrap_angle(fit.phase);
  fit.tau = lm.x[1] > 0.0 ? 1.0 / lm.x[1] : std::numeric_limits<double>::infinity();
  fit.omega = std::abs(lm.x[2]);
  if (lm.x[2] < 0.0) fit.phase = wrap_angle(-fit.phase);
  fit.offset = lm.x[4];
  fit.residual_rms = std::sqrt(2.0 * lm.cost / static_cast<double>(n));
  fit.converged = lm.converged;
  return fit;
}

void write_rabi_csv(std::ostream& out, const RabiTrace& trace) {
  csv::Table t;
  t.header = {"time_s", "population"};
  for (std::size_t i = 0; i < trace.times.size(); ++i) t.rows.push_back({trace.times[i], trace.excited_population[i]});
  csv::write(out, t);
}

RabiTrace read_rabi_csv(std::istream& in) {
  const csv::Table t = csv::read(in, {"time_s", "population"});
  RabiTrace out;
  for (const auto& row : t.rows) {
    out.times.push_back(row[0]);
    out.excited_population.push_back(row[1]);
  }
  return out;
}

}  // namespace pcb3d
