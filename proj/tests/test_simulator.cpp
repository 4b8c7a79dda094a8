// Copyright 2026 The qmit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmit/simulator.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <doctest.h>

#include "qmit/errors.hpp"
#include "qmit/rng.hpp"

using qmit::DetectorQubit;
using qmit::DetectorSpec;
using qmit::ExperimentSpec;
using qmit::Mode;
using qmit::ShotRecord;

namespace {

DetectorSpec make_detector(int n_qubits, double sigma) {
  DetectorSpec spec;
  spec.qubits.resize(static_cast<size_t>(n_qubits));
  for (auto &q : spec.qubits) {
    q.sigma = sigma;
  }
  return spec;
}

}  // namespace

TEST_CASE("philox reproduces the published reference vectors") {
  // Known-answer tests for philox4x32-10, counter (c0,c1,c2,c3) and key
  // (k0,k1) packed as philox_block(k1k0, c1c0, c2, c3).
  std::array<uint32_t, 4> zero = qmit::philox_block(0, 0, 0, 0);
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);

  std::array<uint32_t, 4> ones = qmit::philox_block(
      0xFFFFFFFFFFFFFFFFull, 0xFFFFFFFFFFFFFFFFull, 0xFFFFFFFFu, 0xFFFFFFFFu);
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);

  std::array<uint32_t, 4> pi = qmit::philox_block(0x299F31D0A4093822ull, 0x85A308D3243F6A88ull,
                                                  0x13198A2Eu, 0x03707344u);
  CHECK(pi[0] == 0xd16cfe09u);
  CHECK(pi[1] == 0x94fdccebu);
  CHECK(pi[2] == 0x5001e420u);
  CHECK(pi[3] == 0x24126ea1u);
}

TEST_CASE("philox-derived variates are deterministic and stream-separated") {
  for (uint64_t shot = 0; shot < 200; shot++) {
    double u = qmit::philox_uniform(42, shot, 0, 1);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(u == qmit::philox_uniform(42, shot, 0, 1));
    CHECK(std::isfinite(qmit::philox_gaussian(42, shot, 0, 1)));
  }
  // Distinct streams, lanes, and seeds give distinct draws for the same shot.
  CHECK(qmit::philox_uniform(42, 7, 0, 0) != qmit::philox_uniform(42, 7, 0, 1));
  CHECK(qmit::philox_uniform(42, 7, 0, 1) != qmit::philox_uniform(42, 7, 1, 1));
  CHECK(qmit::philox_uniform(42, 7, 0, 1) != qmit::philox_uniform(43, 7, 0, 1));
}

TEST_CASE("detector validation rejects degenerate channels") {
  DetectorQubit q;
  CHECK_NOTHROW(q.validate(0));
  DetectorQubit bad = q;
  bad.sigma = 0.0;
  CHECK_THROWS_AS(bad.validate(0), qmit::ContractViolation);
  bad = q;
  bad.sigma = -1.0;
  CHECK_THROWS_AS(bad.validate(0), qmit::ContractViolation);
  bad = q;
  bad.mu1 = bad.mu0;
  CHECK_THROWS_AS(bad.validate(0), qmit::ContractViolation);
  bad = q;
  bad.mu0 = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(bad.validate(0), qmit::ContractViolation);
  bad = q;
  bad.threshold = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(bad.validate(0), qmit::ContractViolation);

  DetectorSpec empty;
  CHECK_THROWS_AS(empty.validate(), qmit::ContractViolation);
}

TEST_CASE("the default threshold is the midpoint of the state means") {
  DetectorQubit q;
  q.mu0 = -3.0;
  q.mu1 = 1.0;
  CHECK(q.effective_threshold() == -1.0);
  q.threshold = 0.25;
  CHECK(q.effective_threshold() == 0.25);
}

TEST_CASE("experiment validation covers truth, weights, and shot counts") {
  ExperimentSpec e;
  e.true_bits = "01";
  e.n_shots = 10;
  CHECK_NOTHROW(e.validate(2));

  ExperimentSpec bad = e;
  bad.n_shots = 0;
  CHECK_THROWS_AS(bad.validate(2), qmit::ContractViolation);
  bad = e;
  bad.true_bits = "012";
  CHECK_THROWS_AS(bad.validate(3), qmit::ContractViolation);
  bad = e;
  CHECK_THROWS_AS(bad.validate(3), qmit::ContractViolation);  // width mismatch
  bad = e;
  bad.true_bits.clear();
  CHECK_THROWS_AS(bad.validate(2), qmit::ContractViolation);  // neither source
  bad = e;
  bad.true_distribution = {{"00", 1.0}};
  CHECK_THROWS_AS(bad.validate(2), qmit::ContractViolation);  // both sources

  ExperimentSpec dist;
  dist.n_shots = 10;
  dist.true_distribution = {{"00", 0.25}, {"11", 0.75}};
  CHECK_NOTHROW(dist.validate(2));
  dist.true_distribution = {{"00", 0.25}, {"11", 0.75 + 1e-6}};
  CHECK_THROWS_AS(dist.validate(2), qmit::ContractViolation);  // weight sum off
  dist.true_distribution = {{"00", 0.25}, {"00", 0.75}};
  CHECK_THROWS_AS(dist.validate(2), qmit::ContractViolation);  // duplicate string
  dist.true_distribution = {{"00", -0.25}, {"11", 1.25}};
  CHECK_THROWS_AS(dist.validate(2), qmit::ContractViolation);  // negative weight
}

TEST_CASE("true_confusion evaluates the Gaussian split exactly") {
  DetectorSpec spec = make_detector(1, 0.5);
  qmit::SingleQubitConfusion c = qmit::true_confusion(spec, 0);
  // Means at -1/+1 with sigma 0.5 put the midpoint threshold two sigma away.
  CHECK(c(0, 0) == doctest::Approx(0.9772498680518208).epsilon(1e-15));
  CHECK(c(1, 1) == doctest::Approx(0.9772498680518208).epsilon(1e-15));
  CHECK(c(1, 0) == doctest::Approx(1.0 - 0.9772498680518208).epsilon(1e-12));
  CHECK(c(0, 0) + c(1, 0) == 1.0);
  CHECK(c(0, 1) + c(1, 1) == 1.0);

  // A threshold sitting on a state mean splits that state exactly in half.
  spec.qubits[0].threshold = -1.0;
  c = qmit::true_confusion(spec, 0);
  CHECK(c(0, 0) == 0.5);
  CHECK(c(1, 0) == 0.5);

  CHECK_THROWS_AS(qmit::true_confusion(spec, 1), qmit::ContractViolation);
  CHECK_THROWS_AS(qmit::true_confusion(spec, -1), qmit::ContractViolation);
}

TEST_CASE("shots are a pure function of the shot index") {
  DetectorSpec spec = make_detector(3, 0.6);
  ExperimentSpec e;
  e.true_bits = "010";
  e.seed = 99;
  e.n_shots = 10;
  std::vector<ShotRecord> short_run = qmit::sample_shots(e, spec);
  e.n_shots = 100;
  std::vector<ShotRecord> long_run = qmit::sample_shots(e, spec);
  REQUIRE(long_run.size() == 100);
  for (size_t s = 0; s < short_run.size(); s++) {
    CHECK(short_run[s].bits == long_run[s].bits);
  }
}

TEST_CASE("shot output is identical for every thread count") {
  DetectorSpec spec = make_detector(4, 0.7);
  ExperimentSpec e;
  e.mode = Mode::analog;
  e.true_bits = "1001";
  e.seed = 1234;
  e.n_shots = 505;
  std::vector<ShotRecord> one = qmit::sample_shots(e, spec, 1);
  std::vector<ShotRecord> three = qmit::sample_shots(e, spec, 3);
  std::vector<ShotRecord> eight = qmit::sample_shots(e, spec, 8);
  REQUIRE(one.size() == three.size());
  REQUIRE(one.size() == eight.size());
  for (size_t s = 0; s < one.size(); s++) {
    CHECK(one[s].q == three[s].q);  // bitwise double equality
    CHECK(one[s].q == eight[s].q);
  }
}

TEST_CASE("binary shots are thresholded analog shots from the same stream") {
  DetectorSpec spec = make_detector(3, 0.8);
  spec.qubits[1].threshold = 0.3;
  ExperimentSpec e;
  e.true_bits = "110";
  e.seed = 77;
  e.n_shots = 400;
  e.mode = Mode::analog;
  std::vector<ShotRecord> analog = qmit::sample_shots(e, spec);
  e.mode = Mode::binary;
  std::vector<ShotRecord> binary = qmit::sample_shots(e, spec);
  REQUIRE(analog.size() == binary.size());
  for (size_t s = 0; s < analog.size(); s++) {
    REQUIRE(analog[s].q.size() == 3);
    REQUIRE(binary[s].bits.size() == 3);
    for (size_t q = 0; q < 3; q++) {
      char expected = analog[s].q[q] >= spec.qubits[q].effective_threshold() ? '1' : '0';
      CHECK(binary[s].bits[q] == expected);
    }
  }
}

TEST_CASE("distribution sampling hits the requested state weights") {
  // A near-noiseless detector reads the true string back verbatim, so the
  // observed fractions estimate the requested distribution directly.
  DetectorSpec spec = make_detector(2, 0.05);
  ExperimentSpec e;
  e.true_distribution = {{"00", 0.25}, {"11", 0.75}};
  e.seed = 5;
  e.n_shots = 4000;
  std::vector<ShotRecord> shots = qmit::sample_shots(e, spec);
  size_t ones = 0;
  for (const auto &rec : shots) {
    if (rec.bits == "11") {
      ones++;
    } else {
      CHECK(rec.bits == "00");
    }
  }
  double fraction = static_cast<double>(ones) / static_cast<double>(e.n_shots);
  CHECK(std::abs(fraction - 0.75) < 0.03);
}

TEST_CASE("calibration records pin the prepared state and stay reproducible") {
  DetectorSpec spec = make_detector(2, 0.5);

  qmit::CalibrationRecord binary = qmit::sample_calibration_record(spec, 0, 0, 500, 11, Mode::binary);
  CHECK(binary.qubit_id == 0);
  CHECK(binary.prepared_state == 0);
  REQUIRE(binary.samples.size() == 500);
  size_t zeros = 0;
  for (double s : binary.samples) {
    CHECK((s == 0.0 || s == 1.0));
    zeros += s == 0.0 ? 1 : 0;
  }
  // Two sigma of separation keeps the error rate near 2.3 percent.
  CHECK(zeros > 450);

  qmit::CalibrationRecord analog = qmit::sample_calibration_record(spec, 0, 1, 2000, 11, Mode::analog);
  double mean = 0.0;
  for (double s : analog.samples) {
    mean += s;
  }
  mean /= static_cast<double>(analog.samples.size());
  CHECK(std::abs(mean - 1.0) < 4.0 * 0.5 / std::sqrt(2000.0));

  // Same arguments, same record; different prepared state, different stream.
  qmit::CalibrationRecord again = qmit::sample_calibration_record(spec, 0, 1, 2000, 11, Mode::analog);
  CHECK(analog.samples == again.samples);
  qmit::CalibrationRecord other = qmit::sample_calibration_record(spec, 0, 0, 2000, 11, Mode::analog);
  CHECK(analog.samples != other.samples);

  CHECK_THROWS_AS(qmit::sample_calibration_record(spec, 5, 0, 10, 1, Mode::binary),
                  qmit::ContractViolation);
  CHECK_THROWS_AS(qmit::sample_calibration_record(spec, 0, 2, 10, 1, Mode::binary),
                  qmit::ContractViolation);
  CHECK_THROWS_AS(qmit::sample_calibration_record(spec, 0, 0, 0, 1, Mode::binary),
                  qmit::ContractViolation);
}

TEST_CASE("success_probability reads the target's mass") {
  std::vector<std::string> strings = {"00", "11"};
  std::vector<double> populations = {0.3, 0.7};
  CHECK(qmit::success_probability(strings, populations, "11") == 0.7);
  CHECK(qmit::success_probability(strings, populations, "01") == 0.0);
  CHECK_THROWS_AS(qmit::success_probability(strings, {0.3}, "00"), qmit::ContractViolation);
}
