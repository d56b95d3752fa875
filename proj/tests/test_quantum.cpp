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

#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "pcb3d/cross_resonance.hpp"
#include "pcb3d/errors.hpp"
#include "pcb3d/lindblad.hpp"
#include "pcb3d/process.hpp"
#include "pcb3d/rabi.hpp"

namespace pcb3d {
namespace {

using Complex = std::complex<double>;

std::vector<double> times(double t_max, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
  return t;
}

// ---- Lindblad -------------------------------------------------------------

TEST(Lindblad, PreservesTraceAndHermiticity) {
  const QubitSpec q{5e9, 2e-6, 1.5e-6};
  const DriveSpec d{4e6, 5.001e9, 3e-6, Envelope::rectangular, 0.0};
  const LindbladModel model = qubit_drive_model(q, d);
  MatXc rho0 = MatXc::Zero(2, 2);
  rho0(0, 0) = 1.0;
  const auto states = evolve(model, rho0, times(3e-6, 31), rabi_step(q, d));
  for (const auto& rho : states) {
    EXPECT_NEAR(std::abs(rho.trace() - Complex(1.0, 0.0)), 0.0, 1e-12);
    EXPECT_LT((rho - rho.adjoint()).norm(), 1e-12);
    Eigen::SelfAdjointEigenSolver<MatXc> es(0.5 * (rho + rho.adjoint()));
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
  }
}

TEST(Lindblad, RejectsBadSampling) {
  const LindbladModel model{[](double) { return MatXc::Zero(2, 2).eval(); }, {}};
  const MatXc rho0 = MatXc::Identity(2, 2) * 0.5;
  const std::vector<double> back{1e-6, 0.5e-6};
  EXPECT_THROW(evolve(model, rho0, back, 1e-9), DomainError);
  EXPECT_THROW(evolve(model, rho0, times(1e-6, 3), 0.0), DomainError);
}

// ---- Rabi -----------------------------------------------------------------

TEST(Rabi, MatchesMatrixExponentialOracle) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double t1 = 0.5e-6 + 20e-6 * u(rng);
    const double t2 = std::min(2.0 * t1, (0.2 + 1.8 * u(rng)) * t1);
    const QubitSpec q{5e9, t1, t2};
    const double rate = 0.5e6 + 10e6 * u(rng);
    const double detuning = u(rng) < 0.5 ? 0.0 : 3e6 * (u(rng) - 0.5);
    const double t_max = (2.0 + 8.0 * u(rng)) / rate;
    const DriveSpec d{rate, detuning == 0.0 ? 0.0 : q.f01 + detuning, t_max, Envelope::rectangular, 0.0};
    const auto ts = times(t_max, 25);
    const RabiTrace tr = simulate_rabi(q, d, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double ref = oracle::bloch_excited(rate, detuning, t1, t2, ts[i]);
      worst = std::max(worst, std::abs(tr.excited_population[i] - ref));
    }
  }
  // RK4 at 100 steps per Rabi period leaves a few 1e-6 of truncation error
  EXPECT_LT(worst, 1e-5);
}

TEST(Rabi, PopulationsStayInUnitIntervalOnRandomDrives) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double t1 = 0.2e-6 + 10e-6 * u(rng);
    const QubitSpec q{4e9 + 2e9 * u(rng), t1, (0.1 + 1.9 * u(rng)) * t1};
    const double duration = 0.2e-6 + 2e-6 * u(rng);
    DriveSpec d{20e6 * u(rng), u(rng) < 0.5 ? 0.0 : q.f01 + 5e6 * (u(rng) - 0.5), duration,
                u(rng) < 0.5 ? Envelope::rectangular : Envelope::shaped, 0.0};
    if (d.envelope == Envelope::shaped) d.rise = 0.5 * duration * u(rng);
    const RabiTrace tr = simulate_rabi(q, d, times(1.2 * duration, 40));
    for (double p : tr.excited_population) {
      EXPECT_GE(p, -1e-9) << trial;
      EXPECT_LE(p, 1.0 + 1e-9) << trial;
    }
  }
}

TEST(Rabi, EnvelopeTimeFromCoherence) {
  EXPECT_DOUBLE_EQ(rabi_envelope_time({5e9, 3.47e-6, 3.47e-6}), 3.47e-6);
  EXPECT_NEAR(rabi_envelope_time({5e9, 10e-6, 5e-6}), 2.0 / (0.1e6 + 0.2e6), 1e-18);
}

TEST(Rabi, StepRespectsRateBound) {
  const QubitSpec q{5e9, 3.47e-6, 3.47e-6};
  const DriveSpec d{25e6, 0.0, 20e-9, Envelope::rectangular, 0.0};
  EXPECT_LE(rabi_step(q, d), 1.0 / (50.0 * 25e6));
  EXPECT_LE(rabi_step(q, d), q.t2 / 100.0);
}

TEST(Rabi, FitRecoversDecayAndFrequencyFromNoisyTraces) {
  const QubitSpec q{5e9, 3.47e-6, 3.47e-6};
  const DriveSpec d{2e6, 0.0, 5e-6, Envelope::rectangular, 0.0};
  const RabiTrace clean = simulate_rabi(q, d, times(5e-6, 501));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 0.01);
    RabiTrace noisy = clean;
    for (auto& p : noisy.excited_population) p += n(rng);
    const RabiFit fit = fit_rabi(noisy);
    EXPECT_LT(std::abs(fit.tau - 3.47e-6) / 3.47e-6, 0.05) << seed;
    EXPECT_LT(std::abs(fit.omega - 2e6) / 2e6, 5e-3) << seed;
    EXPECT_TRUE(fit.converged);
  }
}

TEST(Rabi, FitFailsWithoutOscillation) {
  RabiTrace flat{times(1e-6, 101), std::vector<double>(101, 0.3)};
  EXPECT_THROW(fit_rabi(flat), FitFailure);
  const QubitSpec q{5e9, 3.47e-6, 3.47e-6};
  const DriveSpec d{0.2e6, 0.0, 1e-6, Envelope::rectangular, 0.0};
  EXPECT_THROW(fit_rabi(simulate_rabi(q, d, times(1e-6, 101))), FitFailure);  // a fifth of a period
  EXPECT_THROW(fit_rabi(RabiTrace{times(1e-6, 5), std::vector<double>(5, 0.0)}), FitFailure);
}

TEST(Rabi, CsvRoundTrip) {
  const RabiTrace tr{{0.0, 1e-9, 2e-9}, {0.0, 0.25, 1.0}};
  std::stringstream ss;
  write_rabi_csv(ss, tr);
  EXPECT_EQ(ss.str().substr(0, 16), "time_s,populatio");
  const RabiTrace back = read_rabi_csv(ss);
  EXPECT_EQ(back.times, tr.times);
  EXPECT_EQ(back.excited_population, tr.excited_population);
}

TEST(Rabi, RejectsInvalidSpecs) {
  EXPECT_THROW(QubitSpec({5e9, 1e-6, 3e-6}).validate(), DomainError);
  EXPECT_THROW(QubitSpec({5e9, 0.0, 1e-6}).validate(), DomainError);
  EXPECT_THROW(DriveSpec({1e6, 0.0, 1e-6, Envelope::shaped, 0.6e-6}).validate(), DomainError);
}

// ---- cross resonance --------------------------------------------------------

TwoQubitSystem ideal_system() {
  TwoQubitSystem s = system_from_rates(2.857e6, 4.286e6, 1.0, 1.0);
  return s;
}

// Brute-force scan of the closed-form contrast on a 10 ps grid.
double oracle_gate_time(double r0, double r1, double t0, double t1, double t_max) {
  const double pi = oracle::kPi;
  double best_t = 0.0;
  double best = -1.0;
  for (long i = 0; i * 1e-11 <= t_max; ++i) {
    const double t = static_cast<double>(i) * 1e-11;
    const double p0 = 0.5 * (1.0 - std::exp(-t / t0) * std::cos(2.0 * pi * r0 * t));
    const double p1 = 0.5 * (1.0 - std::exp(-t / t1) * std::cos(2.0 * pi * r1 * t));
    const double c = std::abs(p1 - p0);
    if (c > best + 1e-9) {
      best = c;
      best_t = t;
    }
  }
  return best_t;
}

TEST(CrossResonance, RatesFromDerivedSystem) {
  const TwoQubitSystem s = ideal_system();
  EXPECT_NEAR(s.target_rate(0), 2.857e6, 1e-6);
  EXPECT_NEAR(s.target_rate(1), 4.286e6, 1e-6);
  EXPECT_NEAR(s.zx_rate, 4.286e6 - 2.857e6, 1e-6);
}

TEST(CrossResonance, TargetPopulationClosedForm) {
  TwoQubitSystem s = system_from_rates(2.857e6, 4.286e6, 750e-9, 340e-9);
  const auto ts = times(1e-6, 11);
  for (int c : {0, 1}) {
    const RabiTrace tr = simulate_cr(s, c, ts);
    const double rate = c == 0 ? 2.857e6 : 4.286e6;
    const double tau = c == 0 ? 750e-9 : 340e-9;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double want = 0.5 * (1.0 - std::exp(-ts[i] / tau) * std::cos(2.0 * oracle::kPi * rate * ts[i]));
      EXPECT_NEAR(tr.excited_population[i], want, 1e-12);
    }
  }
}

TEST(CrossResonance, CalibratesPackageGateTime) {
  const CnotCalibration cal = calibrate_cnot(ideal_system(), 1e-6);
  EXPECT_LT(std::abs(cal.gate_time - 350e-9) / 350e-9, 0.02);
  EXPECT_NEAR(cal.gate_time, oracle_gate_time(2.857e6, 4.286e6, 1.0, 1.0, 1e-6), 0.2e-9);
  EXPECT_GT(cal.contrast, 0.99);
}

TEST(CrossResonance, CalibrationAgreesWithScanOnRandomSystems) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double r0 = 1e6 + 4e6 * u(rng);
    const double r1 = r0 * (1.2 + 1.5 * u(rng));
    const double t0 = 0.5e-6 + 5e-6 * u(rng);
    const double t1 = 0.5e-6 + 5e-6 * u(rng);
    const TwoQubitSystem s = system_from_rates(r0, r1, t0, t1);
    const double ref = oracle_gate_time(r0, r1, t0, t1, 1e-6);
    try {
      const CnotCalibration cal = calibrate_cnot(s, 1e-6);
      // gate time is refined to 0.1 ns, which moves the contrast by < 1e-4
      EXPECT_NEAR(cal.contrast, cnot_contrast(s, ref), 2e-4) << trial;
      ++checked;
    } catch (const CalibrationFailure& e) {
      EXPECT_LT(cnot_contrast(s, ref), kCnotContrastThreshold + 1e-6) << trial;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(CrossResonance, ReportsFailureWhenContrastStaysLow) {
  const TwoQubitSystem s = system_from_rates(1e6, 1.05e6, 1.0, 1.0);
  try {
    calibrate_cnot(s, 1e-6);
    FAIL() << "expected CalibrationFailure";
  } catch (const CalibrationFailure& e) {
    EXPECT_LT(e.best_contrast(), kCnotContrastThreshold);
    EXPECT_GT(e.best_time(), 0.0);
  }
}

// ---- process / fidelity -------------------------------------------------------

MatXc random_unitary(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n(0.0, 1.0);
  MatXc z(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) z(i, j) = Complex(n(rng), n(rng));
  }
  Eigen::HouseholderQR<MatXc> qr(z);
  MatXc q = qr.householderQ();
  return q;
}

TEST(Process, AffineLawEndpoints) {
  for (int nq : {1, 2}) {
    const MatXc id = MatXc::Identity(1 << nq, 1 << nq);
    EXPECT_NEAR(average_gate_fidelity(identity_process(nq), id).average_fidelity, 1.0, 1e-14);
    const double d = 1 << nq;
    EXPECT_NEAR(average_gate_fidelity(fully_depolarizing_process(nq), id).average_fidelity, 1.0 / d, 1e-14);
  }
  EXPECT_NEAR(average_gate_fidelity(fully_depolarizing_process(2), cnot_unitary()).average_fidelity, 0.25, 1e-14);
}

TEST(Process, AffineLawOnRandomMixtures) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int nq = 1 + trial % 2;
    const int d = 1 << nq;
    const MatXc uu = random_unitary(rng, d);
    const double p = u(rng);
    ProcessMatrix mix = ptm_from_unitary(uu);
    mix.ptm = p * mix.ptm + (1.0 - p) * fully_depolarizing_process(nq).ptm;
    const auto r = average_gate_fidelity(mix, uu);
    const double f_pro = p + (1.0 - p) / (d * d);
    EXPECT_NEAR(r.process_fidelity, f_pro, 1e-12);
    EXPECT_NEAR(r.average_fidelity, (d * f_pro + 1.0) / (d + 1.0), 1e-12);
  }
}

TEST(Process, RandomChannelsAreCptp) {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const MatXc uu = random_unitary(rng, 2);
    const double g = u(rng);
    // amplitude damping after a random unitary
    auto channel = [&](const MatXc& rho) -> MatXc {
      MatXc k0 = MatXc::Zero(2, 2), k1 = MatXc::Zero(2, 2);
      k0(0, 0) = 1.0;
      k0(1, 1) = std::sqrt(1.0 - g);
      k1(0, 1) = std::sqrt(g);
      const MatXc r = uu * rho * uu.adjoint();
      return k0 * r * k0.adjoint() + k1 * r * k1.adjoint();
    };
    const ProcessMatrix pm = ptm_from_channel(channel, 1);
    EXPECT_LT(trace_preservation_error(pm), 1e-12);
    EXPECT_GE(min_choi_eigenvalue(pm), -1e-12);
  }
}

TEST(Process, SimulatedGatesAreCptp) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double t1 = 0.5e-6 + 10e-6 * u(rng);
    const QubitSpec q{5e9, t1, (0.2 + 1.8 * u(rng)) * t1};
    const double duration = 10e-9 + 40e-9 * u(rng);
    const DriveSpec d{0.5 / duration, 0.0, duration, Envelope::rectangular, 0.0};
    const ProcessMatrix pm = simulate_gate_process(q, d);
    EXPECT_LT(trace_preservation_error(pm), 1e-9) << trial;
    EXPECT_GE(min_choi_eigenvalue(pm), -1e-9) << trial;
  }
  for (int trial = 0; trial < 10; ++trial) {
    const TwoQubitSystem s = system_from_rates(2.857e6, 4.286e6, 0.2e-6 + 2e-6 * u(rng), 0.2e-6 + 2e-6 * u(rng));
    const ProcessMatrix pm = simulate_gate_process(s, 350e-9);
    EXPECT_LT(trace_preservation_error(pm), 1e-9) << trial;
    EXPECT_GE(min_choi_eigenvalue(pm), -1e-9) << trial;
  }
}

TEST(Process, RejectsNonPhysicalProcesses) {
  ProcessMatrix bad = identity_process(1);
  bad.ptm(0, 3) = 0.5;  // breaks trace preservation
  EXPECT_THROW(average_gate_fidelity(bad, MatXc::Identity(2, 2)), DomainError);
  ProcessMatrix amplifying = identity_process(1);
  amplifying.ptm(1, 1) = amplifying.ptm(2, 2) = amplifying.ptm(3, 3) = 1.5;
  EXPECT_THROW(average_gate_fidelity(amplifying, MatXc::Identity(2, 2)), DomainError);
}

TEST(Process, IdealGatesHaveUnitFidelity) {
  const TwoQubitSystem s = ideal_system();
  TwoQubitSystem clean = s;
  clean.control = QubitSpec{5e9, 1.0, 1.0};
  EXPECT_GT(average_gate_fidelity(simulate_gate_process(clean, 350e-9), cnot_unitary()).average_fidelity, 0.999);
  const QubitSpec q{5e9, 1.0, 1.0};
  const DriveSpec d{25e6, 0.0, 20e-9, Envelope::rectangular, 0.0};
  EXPECT_GT(average_gate_fidelity(simulate_gate_process(q, d), not_unitary()).average_fidelity, 0.9999);
}

TEST(Process, PackageGateFidelities) {
  TwoQubitSystem s = system_from_rates(2.857e6, 4.286e6, 750e-9, 340e-9);
  s.control = s.target = QubitSpec{5e9, 3.47e-6, 3.47e-6};
  const double f = average_gate_fidelity(simulate_gate_process(s, 350e-9), cnot_unitary()).average_fidelity;
  EXPECT_GE(f, 0.55);
  EXPECT_LE(f, 0.80);
  const QubitSpec q{5e9, 3.47e-6, 3.47e-6};
  const DriveSpec d{25e6, 0.0, 20e-9, Envelope::rectangular, 0.0};
  EXPECT_GE(average_gate_fidelity(simulate_gate_process(q, d), not_unitary()).average_fidelity, 0.97);
}

}  // namespace
}  // namespace pcb3d
