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

#include "qmit/calibration.hpp"

#include <cmath>
#include <vector>

#include <doctest.h>

#include "qmit/errors.hpp"

using qmit::CalibrationRecord;
using qmit::ContractViolation;
using qmit::DegenerateCalibration;

namespace {

CalibrationRecord make_record(int qubit, int prepared, std::vector<double> samples) {
  CalibrationRecord rec;
  rec.qubit_id = qubit;
  rec.prepared_state = prepared;
  rec.samples = std::move(samples);
  return rec;
}

CalibrationRecord bit_counts(int qubit, int prepared, int zeros, int ones) {
  std::vector<double> samples;
  samples.insert(samples.end(), static_cast<size_t>(zeros), 0.0);
  samples.insert(samples.end(), static_cast<size_t>(ones), 1.0);
  return make_record(qubit, prepared, std::move(samples));
}

}  // namespace

TEST_CASE("calibration record validation") {
  CHECK_NOTHROW(make_record(0, 0, {0.0, 1.0}).validate());
  CHECK_THROWS_AS(make_record(0, 0, {}).validate(), ContractViolation);
  CHECK_THROWS_AS(make_record(0, 2, {0.0}).validate(), ContractViolation);
  CHECK_THROWS_AS(make_record(0, 0, {std::nan("")}).validate(), ContractViolation);
}

TEST_CASE("calibrate_binary applies add-one smoothing per column") {
  // Prepare-0: 3 correct, 1 flipped out of 4. Prepare-1: 2 correct, 1 flipped
  // out of 3. Smoothed columns are (count + 1) / (n + 2).
  auto c = qmit::calibrate_binary(bit_counts(0, 0, 3, 1), bit_counts(0, 1, 1, 2));
  CHECK(c(0, 0) == 4.0 / 6.0);
  CHECK(c(1, 0) == 2.0 / 6.0);
  CHECK(c(0, 1) == 2.0 / 5.0);
  CHECK(c(1, 1) == 3.0 / 5.0);
}

TEST_CASE("calibrate_binary symmetric hand value") {
  // 90/10 and 10/90 out of 100 each: both diagonal entries are 91/102.
  auto c = qmit::calibrate_binary(bit_counts(3, 0, 90, 10), bit_counts(3, 1, 10, 90));
  CHECK(c(0, 0) == 91.0 / 102.0);
  CHECK(c(1, 1) == 91.0 / 102.0);
  CHECK(c(1, 0) == 11.0 / 102.0);
  CHECK(c(0, 1) == 11.0 / 102.0);
}

TEST_CASE("calibrate_binary keeps probabilities strictly inside (0,1)") {
  // A perfect detector still gets smoothed mass on the impossible outcome.
  auto c = qmit::calibrate_binary(bit_counts(0, 0, 1000, 0), bit_counts(0, 1, 0, 1000));
  CHECK(c(1, 0) == 1.0 / 1002.0);
  CHECK(c(0, 1) == 1.0 / 1002.0);
  CHECK(c(0, 0) < 1.0);
  CHECK(c(1, 0) > 0.0);
}

TEST_CASE("calibrate_binary validates its inputs") {
  // Records must be (prepare-0, prepare-1) for the same qubit.
  CHECK_THROWS_AS(qmit::calibrate_binary(bit_counts(0, 1, 5, 5), bit_counts(0, 0, 5, 5)),
                  ContractViolation);
  CHECK_THROWS_AS(qmit::calibrate_binary(bit_counts(0, 0, 5, 5), bit_counts(1, 1, 5, 5)),
                  ContractViolation);
  // Binary samples must be exactly 0.0 or 1.0.
  CHECK_THROWS_AS(
      qmit::calibrate_binary(make_record(0, 0, {0.0, 0.5}), bit_counts(0, 1, 5, 5)),
      ContractViolation);
}

TEST_CASE("calibrate_analog builds equal-width edges over the pooled range") {
  auto rf = qmit::calibrate_analog(make_record(0, 0, {0.0, 1.0}),
                                   make_record(0, 1, {3.0, 4.0}), 2);
  REQUIRE(rf.bin_edges.size() == 3);
  CHECK(rf.bin_edges[0] == 0.0);
  CHECK(rf.bin_edges[1] == 2.0);
  CHECK(rf.bin_edges[2] == 4.0);
  // Row 0: both samples in bin 0 -> add-one histogram (3/4, 1/4).
  CHECK(rf.lambda[0][0] == 0.75);
  CHECK(rf.lambda[0][1] == 0.25);
  // Row 1: both samples in bin 1 (4.0 clamps into the last bin).
  CHECK(rf.lambda[1][0] == 0.25);
  CHECK(rf.lambda[1][1] == 0.75);
}

TEST_CASE("calibrate_analog pins the outer edges to the sample extremes") {
  auto rf = qmit::calibrate_analog(make_record(2, 0, {-1.3, -0.2, 0.4}),
                                   make_record(2, 1, {0.9, 2.7}), 4);
  REQUIRE(rf.bin_edges.size() == 5);
  CHECK(rf.bin_edges.front() == -1.3);
  CHECK(rf.bin_edges.back() == 2.7);
  for (int t = 0; t < 2; t++) {
    double row = 0.0;
    for (double v : rf.lambda[static_cast<size_t>(t)]) {
      CHECK(v > 0.0);
      row += v;
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("calibrate_analog rejects degenerate and invalid inputs") {
  // Zero-width pooled range cannot support bins.
  CHECK_THROWS_AS(qmit::calibrate_analog(make_record(0, 0, {1.0, 1.0}),
                                         make_record(0, 1, {1.0, 1.0}), 4),
                  DegenerateCalibration);
  CHECK_THROWS_AS(qmit::calibrate_analog(make_record(0, 0, {0.0, 1.0}),
                                         make_record(0, 1, {2.0, 3.0}), 1),
                  ContractViolation);
}

TEST_CASE("calibrate_analog histogram counts land in edge-array bins") {
  // Pooled range [0, 4] with 4 bins: edges 0,1,2,3,4. Samples sitting exactly
  // on edges must go to the upper bin (except the last edge, which clamps).
  auto rf = qmit::calibrate_analog(make_record(0, 0, {0.0, 1.0, 1.5}),
                                   make_record(0, 1, {3.0, 4.0}), 4);
  // Row 0 histogram: bin0 = {0.0}, bin1 = {1.0, 1.5} -> (1+1, 2+1, 0+1, 0+1)/7.
  CHECK(rf.lambda[0][0] == doctest::Approx(2.0 / 7.0).epsilon(1e-15));
  CHECK(rf.lambda[0][1] == doctest::Approx(3.0 / 7.0).epsilon(1e-15));
  CHECK(rf.lambda[0][2] == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  CHECK(rf.lambda[0][3] == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
  // Row 1 histogram: bin3 = {3.0, 4.0} -> (1, 1, 1, 3)/6.
  CHECK(rf.lambda[1][3] == doctest::Approx(3.0 / 6.0).epsilon(1e-15));
  CHECK(rf.lambda[1][0] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}
