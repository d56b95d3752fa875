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

#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <sstream>

#include <Eigen/QR>

#include "pcb3d/errors.hpp"
#include "pcb3d/levenberg_marquardt.hpp"
#include "pcb3d/resonator.hpp"

namespace pcb3d {
namespace {

constexpr double kPiT = 3.14159265358979323846;

NotchResonanceModel cavity(double f0, double qi, double ql, double phi = 0.0) {
  NotchResonanceModel m = notch_from_qi(f0, qi, ql, phi);
  m.amplitude = 0.8;
  m.phase_offset = 0.3;
  m.cable_delay = 40e-9;
  return m;
}

FrequencyGrid grid_for(const NotchResonanceModel& m, std::size_t n = 401, double linewidths = 20.0) {
  const double half = 0.5 * linewidths * m.f0 / m.q_loaded;
  return FrequencyGrid::linspace(m.f0 - half, m.f0 + half, n);
}

// Direct evaluation of the notch formula, written independently of the kernels.
std::vector<Complex> notch_reference(const NotchResonanceModel& m, const FrequencyGrid& g) {
  std::vector<Complex> out;
  const Complex j(0.0, 1.0);
  for (double f : g.points()) {
    const Complex env = m.amplitude * std::exp(j * m.phase_offset) * std::exp(-2.0 * kPiT * j * f * m.cable_delay);
    const Complex dip = (m.q_loaded / m.q_coupling_mag) * std::exp(j * m.phi) /
                        (1.0 + 2.0 * j * m.q_loaded * (f / m.f0 - 1.0));
    out.push_back(env * (1.0 - dip));
  }
  return out;
}

std::vector<Complex> add_noise(std::vector<Complex> z, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  for (auto& v : z) v += Complex(n(rng), n(rng));
  return z;
}

TEST(Resonator, ModelMatchesReferenceFormula) {
  const NotchResonanceModel m = cavity(5.372e9, 62000.0, 20000.0, 0.2);
  const FrequencyGrid g = grid_for(m);
  const auto got = model_s21(m, g);
  const auto want = notch_reference(m, g);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LT(std::abs(got[i] - want[i]), 1e-13);
}

TEST(Resonator, QiFromLoadedAndCoupling) {
  NotchResonanceModel m;
  m.q_loaded = 20000.0;
  m.q_coupling_mag = 30000.0;
  m.phi = 0.0;
  EXPECT_NEAR(qi_from_fit(m), 60000.0, 1e-8);
  m.phi = 0.5;
  EXPECT_NEAR(1.0 / qi_from_fit(m), 1.0 / 20000.0 - std::cos(0.5) / 30000.0, 1e-15);
}

TEST(Resonator, NoiselessRoundTripForPackageCavities) {
  for (auto [f0, qi, ql] : {std::tuple{5.372e9, 62000.0, 20000.0}, std::tuple{5.459e9, 13000.0, 7879.0}}) {
    const NotchResonanceModel m = cavity(f0, qi, ql);
    const FrequencyGrid g = grid_for(m);
    const ResonanceFit fit = fit_resonance(model_s21(m, g), g);
    EXPECT_LT(std::abs(fit.q_internal - qi) / qi, 5e-3);
    EXPECT_LT(std::abs(fit.model.f0 - f0) / f0, 1e-6);
    EXPECT_LT(std::abs(fit.model.q_loaded - ql) / ql, 5e-3);
    EXPECT_TRUE(fit.converged);
  }
}

TEST(Resonator, NoiselessRoundTripOnRandomModels) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double f0 = 4e9 + 4e9 * u(rng);
    const double ql = 2000.0 + 30000.0 * u(rng);
    const double qi = ql * (1.3 + 5.0 * u(rng));
    const double phi = -0.5 + u(rng);
    NotchResonanceModel m = notch_from_qi(f0, qi, ql, phi);
    m.amplitude = 0.1 + u(rng);
    m.phase_offset = -3.0 + 6.0 * u(rng);
    m.cable_delay = 80e-9 * u(rng);
    const FrequencyGrid g = grid_for(m);
    const ResonanceFit fit = fit_resonance(model_s21(m, g), g);
    EXPECT_LT(std::abs(fit.model.f0 - f0) / f0, 1e-6) << trial;
    EXPECT_LT(std::abs(fit.model.q_loaded - ql) / ql, 5e-3) << trial;
    EXPECT_LT(std::abs(fit.model.q_coupling_mag - m.q_coupling_mag) / m.q_coupling_mag, 5e-3) << trial;
    EXPECT_LT(std::abs(fit.q_internal - qi) / qi, 5e-3) << trial;
    EXPECT_LT(std::abs(fit.model.amplitude - m.amplitude) / m.amplitude, 5e-3) << trial;
    EXPECT_LT(std::abs(fit.model.phi - phi), 5e-3) << trial;
    // alpha and tau trade off against each other only through the overall phase.
    const double fc = g[g.size() / 2];
    const double want_phase = m.phase_offset - 2.0 * kPiT * fc * m.cable_delay;
    const double got_phase = fit.model.phase_offset - 2.0 * kPiT * fc * fit.model.cable_delay;
    EXPECT_LT(std::abs(std::remainder(got_phase - want_phase, 2.0 * kPiT)), 5e-3) << trial;
  }
}

TEST(Resonator, NoisyTrialsRecoverQiWithinTenPercent) {
  const auto start = std::chrono::steady_clock::now();
  const NotchResonanceModel m = cavity(5.372e9, 62000.0, 20000.0);
  const FrequencyGrid g = grid_for(m);
  const auto clean = model_s21(m, g);
  int within = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const ResonanceFit fit = fit_resonance(add_noise(clean, 0.01 * m.amplitude, 1000 + trial), g);
    within += std::abs(fit.q_internal - 62000.0) / 62000.0 < 0.10;
  }
  EXPECT_EQ(within, 100);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 10.0);
}

TEST(Resonator, InvariantUnderGlobalPhaseAndScale) {
  const NotchResonanceModel m = cavity(5.459e9, 13000.0, 7879.0, 0.1);
  const FrequencyGrid g = grid_for(m);
  const auto base = add_noise(model_s21(m, g), 0.002, 7);
  const ResonanceFit ref = fit_resonance(base, g);
  for (double theta : {0.7, -2.0, 3.0}) {
    for (double scale : {0.5, 3.0}) {
      std::vector<Complex> z = base;
      for (auto& v : z) v *= scale * std::exp(Complex(0.0, theta));
      const ResonanceFit fit = fit_resonance(z, g);
      EXPECT_NEAR(fit.q_internal / ref.q_internal, 1.0, 1e-6);
      EXPECT_NEAR(fit.model.f0 / ref.model.f0, 1.0, 1e-12);
      EXPECT_NEAR(fit.model.amplitude / ref.model.amplitude, scale, 1e-6 * scale);
    }
  }
}

TEST(Resonator, RejectsBadInput) {
  const FrequencyGrid g = FrequencyGrid::linspace(5e9, 5.1e9, 101);
  std::vector<Complex> flat(g.size(), Complex(0.7, 0.1));
  EXPECT_THROW(fit_resonance(flat, g), FitFailure);
  const FrequencyGrid few = FrequencyGrid::linspace(5e9, 5.1e9, 6);
  EXPECT_THROW(fit_resonance(std::vector<Complex>(6, Complex(1.0, 0.0)), few), FitFailure);
  EXPECT_THROW(fit_resonance(flat, few), IncompatibleError);
  EXPECT_THROW(notch_from_qi(5e9, 1000.0, 2000.0), DomainError);
}

TEST(Resonator, BatchKeepsOrderAndIsolatesFailures) {
  const NotchResonanceModel m = cavity(5.372e9, 62000.0, 20000.0);
  const FrequencyGrid g = grid_for(m);
  std::vector<std::vector<Complex>> traces{model_s21(m, g), std::vector<Complex>(g.size(), Complex(1.0, 0.0)),
                                           add_noise(model_s21(m, g), 0.005, 3)};
  const auto fits = fit_resonance_batch(traces, g);
  ASSERT_EQ(fits.size(), 3u);
  EXPECT_TRUE(fits[0].has_value());
  EXPECT_FALSE(fits[1].has_value());
  ASSERT_TRUE(fits[2].has_value());
  EXPECT_NEAR(fits[2]->q_internal / 62000.0, 1.0, 0.1);
}

TEST(Resonator, CsvRoundTrip) {
  const NotchResonanceModel m = cavity(5.372e9, 62000.0, 20000.0);
  const FrequencyGrid g = grid_for(m, 51);
  const auto z = model_s21(m, g);
  std::stringstream ss;
  write_s21_samples_csv(ss, g, z);
  const S21Samples back = read_s21_csv(ss);
  EXPECT_EQ(back.grid, g);
  ASSERT_EQ(back.trace.size(), z.size());
  for (std::size_t i = 0; i < z.size(); ++i) EXPECT_EQ(back.trace[i], z[i]);
}

// ---- kernels --------------------------------------------------------------

NotchParams sample_params() {
  NotchParams p;
  p.f0 = 5.4e9;
  p.q_loaded = 9000.0;
  p.q_coupling = 15000.0;
  p.phi = 0.3;
  p.amplitude = 0.9;
  p.alpha = -0.4;
  p.delay = 30e-9;
  return p;
}

TEST(Kernels, JacobianMatchesFiniteDifferences) {
  const NotchParams p = sample_params();
  const FrequencyGrid g = FrequencyGrid::linspace(5.397e9, 5.403e9, 41);
  std::vector<Complex> data(g.size(), Complex(0.2, -0.1));
  Eigen::VectorXd r;
  Eigen::MatrixXd jac;
  kernels::serial::notch_residual_jacobian(p, g.points(), data, r, jac);
  const double steps[] = {1.0, 1e-3, 1e-3, 1e-7, 1e-8, 1e-7, 1e-16};
  for (int k = 0; k < NotchParams::kCount; ++k) {
    auto shifted = [&](double h) {
      NotchParams q = p;
      double* v[] = {&q.f0, &q.q_loaded, &q.q_coupling, &q.phi, &q.amplitude, &q.alpha, &q.delay};
      *v[k] += h;
      Eigen::VectorXd rr;
      Eigen::MatrixXd jj;
      kernels::serial::notch_residual_jacobian(q, g.points(), data, rr, jj);
      return rr;
    };
    const Eigen::VectorXd fd = (shifted(steps[k]) - shifted(-steps[k])) / (2.0 * steps[k]);
    const double scale = std::max(1.0, fd.norm());
    EXPECT_LT((fd - jac.col(k)).norm() / scale, 1e-5) << "parameter " << k;
  }
}

TEST(Kernels, SerialAndParallelAreBitwiseEqual) {
  const NotchParams p = sample_params();
  const FrequencyGrid g = FrequencyGrid::linspace(5.39e9, 5.41e9, 4001);
  std::vector<Complex> a(g.size()), b(g.size());
  kernels::serial::notch_model(p, g.points(), a);
  kernels::omp::notch_model(p, g.points(), b);
  EXPECT_TRUE(a == b);

  Eigen::VectorXd ra, rb;
  Eigen::MatrixXd ja, jb;
  kernels::serial::notch_residual_jacobian(p, g.points(), a, ra, ja);
  kernels::omp::notch_residual_jacobian(p, g.points(), a, rb, jb);
  EXPECT_TRUE(ra == rb);
  EXPECT_TRUE(ja == jb);
}

TEST(Kernels, FitIsIndependentOfExecutionMode) {
  const NotchResonanceModel m = cavity(5.372e9, 62000.0, 20000.0);
  const FrequencyGrid g = grid_for(m);
  const auto z = add_noise(model_s21(m, g), 0.01, 5);
  const ResonanceFit s = fit_resonance(z, g, Exec::serial);
  const ResonanceFit p = fit_resonance(z, g, Exec::parallel);
  EXPECT_EQ(s.model.f0, p.model.f0);
  EXPECT_EQ(s.q_internal, p.q_internal);
  EXPECT_EQ(s.iterations, p.iterations);
}

// ---- Levenberg-Marquardt ---------------------------------------------------

TEST(LevenbergMarquardt, SolvesRosenbrock) {
  ResidualFn fn = [](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* j) {
    r.resize(2);
    r << 10.0 * (x[1] - x[0] * x[0]), 1.0 - x[0];
    if (j) {
      j->resize(2, 2);
      *j << -20.0 * x[0], 10.0, -1.0, 0.0;
    }
  };
  Eigen::VectorXd x0(2);
  x0 << -1.2, 1.0;
  const LmResult res = levenberg_marquardt(fn, x0);
  EXPECT_TRUE(res.converged);
  EXPECT_NEAR(res.x[0], 1.0, 1e-8);
  EXPECT_NEAR(res.x[1], 1.0, 1e-8);
}

TEST(LevenbergMarquardt, LinearProblemMatchesQr) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::MatrixXd a(12, 3);
    Eigen::VectorXd b(12);
    for (int i = 0; i < 12; ++i) {
      for (int k = 0; k < 3; ++k) a(i, k) = n(rng);
      b[i] = n(rng);
    }
    ResidualFn fn = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* j) {
      r = a * x - b;
      if (j) *j = a;
    };
    const Eigen::VectorXd want = a.colPivHouseholderQr().solve(b);
    const LmResult res = levenberg_marquardt(fn, Eigen::VectorXd::Zero(3));
    EXPECT_LT((res.x - want).norm(), 1e-7 * (1.0 + want.norm())) << trial;
  }
}

}  // namespace
}  // namespace pcb3d
