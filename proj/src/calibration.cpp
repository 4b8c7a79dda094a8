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

#include <algorithm>
#include <cmath>

#include "qmit/errors.hpp"

namespace qmit {

void CalibrationRecord::validate() const {
  if (samples.empty()) {
    throw ContractViolation("calibration record for qubit " + std::to_string(qubit_id) +
                            " has no samples");
  }
  if (prepared_state != 0 && prepared_state != 1) {
    throw ContractViolation("prepared_state must be 0 or 1, got " +
                            std::to_string(prepared_state));
  }
  for (double s : samples) {
    if (!std::isfinite(s)) {
      throw ContractViolation("calibration sample for qubit " + std::to_string(qubit_id) +
                              " is not finite");
    }
  }
}

static void check_pair(const CalibrationRecord &rec0, const CalibrationRecord &rec1) {
  rec0.validate();
  rec1.validate();
  if (rec0.prepared_state != 0 || rec1.prepared_state != 1) {
    throw ContractViolation("calibration needs a prepare-0 record and a prepare-1 record, "
                            "in that order");
  }
  if (rec0.qubit_id != rec1.qubit_id) {
    throw ContractViolation("calibration records mix qubits " + std::to_string(rec0.qubit_id) +
                            " and " + std::to_string(rec1.qubit_id));
  }
}

SingleQubitConfusion calibrate_binary(const CalibrationRecord &rec0,
                                      const CalibrationRecord &rec1) {
  check_pair(rec0, rec1);
  SingleQubitConfusion c;
  const CalibrationRecord *recs[2] = {&rec0, &rec1};
  for (int prepared = 0; prepared < 2; prepared++) {
    uint64_t ones = 0;
    for (double s : recs[prepared]->samples) {
      if (s != 0.0 && s != 1.0) {
        throw ContractViolation("binary calibration sample must be 0 or 1");
      }
      ones += s == 1.0 ? 1 : 0;
    }
    uint64_t n = recs[prepared]->samples.size();
    // Add-one smoothing keeps every assignment probability strictly positive,
    // so downstream likelihoods never take log of zero for rare outcomes.
    double denom = static_cast<double>(n) + 2.0;
    c.p[0][prepared] = static_cast<double>(n - ones + 1) / denom;
    c.p[1][prepared] = static_cast<double>(ones + 1) / denom;
  }
  c.validate();
  return c;
}

ResponseFunction calibrate_analog(const CalibrationRecord &rec0, const CalibrationRecord &rec1,
                                  int n_bin) {
  check_pair(rec0, rec1);
  if (n_bin < 2) {
    throw ContractViolation("analog calibration needs n_bin >= 2, got " + std::to_string(n_bin));
  }

  double lo = rec0.samples[0];
  double hi = rec0.samples[0];
  for (const auto *rec : {&rec0, &rec1}) {
    for (double s : rec->samples) {
      lo = std::min(lo, s);
      hi = std::max(hi, s);
    }
  }
  if (!(lo < hi)) {
    throw DegenerateCalibration("qubit " + std::to_string(rec0.qubit_id) +
                                ": pooled calibration samples span a zero-width range");
  }

  ResponseFunction rf;
  rf.bin_edges.resize(static_cast<size_t>(n_bin) + 1);
  for (int b = 0; b <= n_bin; b++) {
    // lerp pins the outer edges to the exact sample extremes.
    rf.bin_edges[static_cast<size_t>(b)] =
        std::lerp(lo, hi, static_cast<double>(b) / static_cast<double>(n_bin));
  }

  const CalibrationRecord *recs[2] = {&rec0, &rec1};
  for (int prepared = 0; prepared < 2; prepared++) {
    std::vector<uint64_t> hist(static_cast<size_t>(n_bin), 0);
    for (double s : recs[prepared]->samples) {
      hist[static_cast<size_t>(bin_index(rf, s))] += 1;
    }
    double denom = static_cast<double>(recs[prepared]->samples.size()) +
                   static_cast<double>(n_bin);
    rf.lambda[static_cast<size_t>(prepared)].resize(static_cast<size_t>(n_bin));
    for (int b = 0; b < n_bin; b++) {
      rf.lambda[static_cast<size_t>(prepared)][static_cast<size_t>(b)] =
          static_cast<double>(hist[static_cast<size_t>(b)] + 1) / denom;
    }
  }
  rf.validate();
  return rf;
}

}  // namespace qmit
