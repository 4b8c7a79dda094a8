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

#include "qmit/metrics.hpp"

#include <cmath>

#include "qmit/errors.hpp"

namespace qmit {

double neumaier_sum(const std::vector<double> &values) {
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  return sum + comp;
}

double total_variation(const std::vector<double> &p, const std::vector<double> &q) {
  if (p.size() != q.size()) {
    throw ContractViolation("total_variation requires vectors of equal length, got " +
                            std::to_string(p.size()) + " and " + std::to_string(q.size()));
  }
  double sum = 0.0;
  for (size_t i = 0; i < p.size(); i++) {
    sum += std::abs(p[i] - q[i]);
  }
  return 0.5 * sum;
}

double total_variation(const std::map<std::string, double> &p,
                       const std::map<std::string, double> &q) {
  double sum = 0.0;
  auto ip = p.begin();
  auto iq = q.begin();
  while (ip != p.end() || iq != q.end()) {
    if (iq == q.end() || (ip != p.end() && ip->first < iq->first)) {
      sum += std::abs(ip->second);
      ++ip;
    } else if (ip == p.end() || iq->first < ip->first) {
      sum += std::abs(iq->second);
      ++iq;
    } else {
      sum += std::abs(ip->second - iq->second);
      ++ip;
      ++iq;
    }
  }
  return 0.5 * sum;
}

}  // namespace qmit
