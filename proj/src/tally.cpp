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

#include "qmit/tally.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include "qmit/errors.hpp"

namespace qmit {

namespace {

using CountMap = std::map<OutcomeKey, uint64_t>;

OutcomeKey key_of_shot(const ShotRecord &shot, const MultiQubitNoiseModel &model) {
  int n = model.n_qubits();
  if (model.mode() == Mode::binary) {
    if (shot.is_analog() || static_cast<int>(shot.bits.size()) != n) {
      throw ContractViolation("binary tally expects " + std::to_string(n) +
                              "-bit shot records, got '" + shot.bits + "' with " +
                              std::to_string(shot.q.size()) + " analog values");
    }
    return key_from_bits(shot.bits);
  }
  if (!shot.is_analog() || static_cast<int>(shot.q.size()) != n) {
    throw ContractViolation("analog tally expects " + std::to_string(n) +
                            " signal values per shot, got " + std::to_string(shot.q.size()));
  }
  if (shot.count != 1) {
    throw ContractViolation("count shortcut is only valid for binary shot records");
  }
  OutcomeKey key(static_cast<size_t>(n));
  for (int q = 0; q < n; q++) {
    key[static_cast<size_t>(q)] =
        static_cast<uint8_t>(bin_index(model.response(q), shot.q[static_cast<size_t>(q)]));
  }
  return key;
}

void count_range(const std::vector<ShotRecord> &shots, size_t begin, size_t end,
                 const MultiQubitNoiseModel &model, CountMap &out) {
  for (size_t s = begin; s < end; s++) {
    if (shots[s].count == 0) {
      throw ContractViolation("shot record with count 0");
    }
    out[key_of_shot(shots[s], model)] += shots[s].count;
  }
}

}  // namespace

OutcomeTally tally_shots(const std::vector<ShotRecord> &shots, const MultiQubitNoiseModel &model,
                         int threads) {
  if (shots.empty()) {
    throw ContractViolation("tally_shots requires at least one shot");
  }
  if (threads < 1) {
    threads = 1;
  }

  // Shard the shot list, count per shard, then merge. Counting is associative
  // and commutative and the merged map is sorted, so the result is identical
  // for every shard layout.
  size_t n_shards = std::min<size_t>(static_cast<size_t>(threads), shots.size());
  std::vector<CountMap> shard_counts(n_shards);
  if (n_shards <= 1) {
    count_range(shots, 0, shots.size(), model, shard_counts[0]);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> failures(n_shards);
    for (size_t w = 0; w < n_shards; w++) {
      size_t begin = shots.size() * w / n_shards;
      size_t end = shots.size() * (w + 1) / n_shards;
      workers.emplace_back([&, w, begin, end] {
        try {
          count_range(shots, begin, end, model, shard_counts[w]);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto &t : workers) {
      t.join();
    }
    for (auto &f : failures) {
      if (f) {
        std::rethrow_exception(f);
      }
    }
  }

  CountMap merged = std::move(shard_counts[0]);
  for (size_t w = 1; w < shard_counts.size(); w++) {
    for (const auto &[key, count] : shard_counts[w]) {
      merged[key] += count;
    }
  }

  OutcomeTally tally;
  tally.mode = model.mode();
  tally.n_qubits = model.n_qubits();
  tally.groups.reserve(merged.size());
  for (auto &[key, count] : merged) {
    tally.n_shots += count;
    tally.groups.push_back(OutcomeGroup{key, count});
  }

  // Project each group onto the active subspace. Binary keys are the strings
  // themselves; analog keys threshold at each qubit's median interior edge.
  std::map<std::string, uint64_t> string_counts;
  std::vector<std::string> group_bits(tally.groups.size());
  for (size_t g = 0; g < tally.groups.size(); g++) {
    const OutcomeKey &key = tally.groups[g].key;
    std::string bits(key.size(), '0');
    if (tally.mode == Mode::binary) {
      bits = bits_from_key(key);
    } else {
      for (size_t q = 0; q < key.size(); q++) {
        int median = model.median_edge_index(static_cast<int>(q));
        bits[q] = key[q] >= median ? '1' : '0';
      }
    }
    string_counts[bits] += tally.groups[g].count;
    group_bits[g] = std::move(bits);
  }

  tally.strings.reserve(string_counts.size());
  tally.string_counts.reserve(string_counts.size());
  for (const auto &[bits, count] : string_counts) {
    tally.strings.push_back(bits);
    tally.string_counts.push_back(count);
  }
  tally.group_string.resize(tally.groups.size());
  for (size_t g = 0; g < tally.groups.size(); g++) {
    auto it = std::lower_bound(tally.strings.begin(), tally.strings.end(), group_bits[g]);
    tally.group_string[g] = static_cast<uint32_t>(it - tally.strings.begin());
  }
  return tally;
}

std::vector<ShotRecord> threshold_shots(const std::vector<ShotRecord> &shots,
                                        const MultiQubitNoiseModel &model) {
  if (model.mode() != Mode::analog) {
    throw ContractViolation("threshold_shots requires an analog model");
  }
  int n = model.n_qubits();
  std::vector<ShotRecord> out;
  out.reserve(shots.size());
  for (const ShotRecord &shot : shots) {
    if (!shot.is_analog() || static_cast<int>(shot.q.size()) != n) {
      throw ContractViolation("threshold_shots expects " + std::to_string(n) +
                              " signal values per shot, got " + std::to_string(shot.q.size()));
    }
    ShotRecord rec;
    rec.bits.resize(static_cast<size_t>(n), '0');
    for (int q = 0; q < n; q++) {
      int bin = bin_index(model.response(q), shot.q[static_cast<size_t>(q)]);
      rec.bits[static_cast<size_t>(q)] = bin >= model.median_edge_index(q) ? '1' : '0';
    }
    rec.count = shot.count;
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<double> empirical_frequencies(const OutcomeTally &tally) {
  if (tally.strings.empty() || tally.n_shots == 0) {
    throw ContractViolation("empirical_frequencies requires a nonempty tally");
  }
  size_t m = tally.strings.size();
  std::vector<double> freq(m);
  double partial = 0.0;
  for (size_t k = 0; k + 1 < m; k++) {
    freq[k] = static_cast<double>(tally.string_counts[k]) / static_cast<double>(tally.n_shots);
    partial += freq[k];
  }
  // Last entry absorbs the rounding so the vector sums to one exactly.
  freq[m - 1] = 1.0 - partial;
  return freq;
}

}  // namespace qmit
