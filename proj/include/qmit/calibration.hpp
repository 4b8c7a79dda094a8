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

#ifndef QMIT_CALIBRATION_HPP
#define QMIT_CALIBRATION_HPP

#include <cstdint>
#include <vector>

#include "qmit/noise_model.hpp"

namespace qmit {

// Raw calibration data for one qubit and one prepared basis state: the
// outcomes of repeatedly preparing `prepared_state` and measuring. In binary
// mode samples are assigned bits (0/1); in analog mode they are real signal
// values on the integrated quadrature axis.
struct CalibrationRecord {
  int qubit_id = 0;
  int prepared_state = 0;
  std::vector<double> samples;

  void validate() const;
};

// Estimates a 2x2 confusion matrix from prepare-0 and prepare-1 runs on the
// same qubit. Columns are Laplace-smoothed frequencies (add-one), so every
// entry is strictly inside (0,1) and columns sum to 1 exactly up to rounding.
SingleQubitConfusion calibrate_binary(const CalibrationRecord &rec0,
                                      const CalibrationRecord &rec1);

// Estimates a binned detector response from prepare-0 and prepare-1 analog
// runs. Bin edges are n_bin+1 equal-width points spanning the pooled sample
// range of both records; each row is an add-one-smoothed histogram.
ResponseFunction calibrate_analog(const CalibrationRecord &rec0, const CalibrationRecord &rec1,
                                  int n_bin);

}  // namespace qmit

#endif  // QMIT_CALIBRATION_HPP
