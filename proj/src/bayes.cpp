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

#include "qmit/bayes.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>

#include "qmit/errors.hpp"
#include "qmit/simd/grid_kernels.hpp"

namespace qmit {

const char *to_string(Estimator estimator) {
  return estimator == Estimator::argmax ? "argmax" : "mean";
}

Estimator estimator_from_string(const std::string &name) {
  if (name == "argmax") {
    return Estimator::argmax;
  }
  if (name == "mean") {
    return Estimator::mean;
  }
  throw ContractViolation("unknown estimator '" + name + "', expected 'argmax' or 'mean'");
}

void MitigationConfig::validate() const {
  if (n_p < 3) {
    throw ContractViolation("n_p must be at least 3, got " + std::to_string(n_p));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw ContractViolation("epsilon must be positive and finite");
  }
  if (max_sweeps < 1) {
    throw ContractViolation("max_sweeps must be at least 1");
  }
  if (!(likelihood_floor > 0.0) || !std::isfinite(likelihood_floor)) {
    throw ContractViolation("likelihood_floor must be positive and finite");
  }
}

namespace {

constexpr double kLn2 = 0x1.62e42fefa39efp-1;

// Scratch shared across the pair updates of one sweep. `u` holds the n_p
// grid coordinates plus one trailing slot for the incumbent point.
struct PairWorkspace {
  std::vector<double> u;
  std::vector<double> v;
  std::vector<int64_t> lane_exp;
  std::vector<double> logpost;
  std::vector<simd::GridTask> tasks;
  std::vector<uint32_t> task_group;
  std::vector<double> task_a;
  std::vector<double> task_b;
  std::vector<double> task_c;
  int64_t weighted_binades = 0;

  void reset_grid(int n_p) {
    u.resize(static_cast<size_t>(n_p) + 1);
    for (int k = 0; k < n_p; k++) {
      u[static_cast<size_t>(k)] = static_cast<double>(k) / static_cast<double>(n_p - 1);
    }
    u[static_cast<size_t>(n_p)] = 0.0;
  }
};

// Converts the outcome groups touched by pair (i, j) into kernel tasks.
// Per group: base(u) = max(slope*u + intercept, floor) equals the scaled
// likelihood L_i*t + L_j*(S-t) + C_g at t = S*u, with C_g frozen from the
// current state. Each task is normalized by 2^-e, e = ilogb(T_g) clamped to
// [-1021, 0], so the base is O(1) near the incumbent populations and every
// base stays inside the kernel's normal-number domain (T_g <= 1 makes the
// scale >= 1, so the floor never goes subnormal, and line values <= 1 + T_g
// keep scaled bases far below 2^1022). The e's are accounted in
// weighted_binades. Groups with L_i == L_j contribute a t-independent factor
// and are skipped unless the caller needs true posterior values.
void build_tasks(const MitigationState &state, const OutcomeTally &tally, size_t i, size_t j,
                 double s, double floor, bool keep_constant_tasks, PairWorkspace &ws) {
  size_t n_groups = state.group_count();
  const double *li = state.likelihood.data() + i * n_groups;
  const double *lj = state.likelihood.data() + j * n_groups;
  double ri = state.populations[i];
  double rj = state.populations[j];

  ws.tasks.clear();
  ws.task_group.clear();
  ws.task_a.clear();
  ws.task_b.clear();
  ws.task_c.clear();
  ws.weighted_binades = 0;

  for (size_t g = 0; g < n_groups; g++) {
    double a = li[g];
    double b = lj[g];
    if (!keep_constant_tasks && a == b) {
      continue;
    }
    double total = state.totals[g];
    double c = std::fma(-b, rj, std::fma(-a, ri, total));
    if (c < 0.0) {
      if (c < -1e-12) {
        throw InternalConsistencyError(
            "cached totals are stale: frozen remainder " + std::to_string(c) +
            " for outcome group " + std::to_string(g));
      }
      c = 0.0;
    }
    // Clamp keeps the scale factor representable when T_g is subnormal; the
    // floored comparison is scale-invariant, so this loses nothing.
    int e = total > 0.0 ? std::clamp(std::ilogb(total), -1021, 0) : 0;
    double scale = std::ldexp(1.0, -e);
    simd::GridTask task;
    task.slope = (a - b) * s * scale;
    task.intercept = std::fma(b, s, c) * scale;
    task.floor_value = floor * scale;
    task.weight = tally.groups[g].count;
    ws.tasks.push_back(task);
    ws.task_group.push_back(static_cast<uint32_t>(g));
    ws.task_a.push_back(a);
    ws.task_b.push_back(b);
    ws.task_c.push_back(c);
    ws.weighted_binades += static_cast<int64_t>(task.weight) * e;
  }
}

// Runs the active kernel over n_u grid points. Afterwards the posterior at
// point k is ws.v[k] * 2^(ws.lane_exp[k] + ws.weighted_binades), with every
// mantissa in [1, 2): lanes compare exactly via (lane_exp, v) lexicographic
// order, no matter how many binades apart their products are.
void eval_grid(PairWorkspace &ws, size_t n_u) {
  ws.v.assign(n_u, 1.0);
  ws.lane_exp.assign(n_u, 0);
  const simd::KernelSet &kernels = simd::active_kernels();
  kernels.grid_accumulate(ws.v.data(), ws.lane_exp.data(), ws.u.data(), n_u, ws.tasks.data(),
                          ws.tasks.size());
}

// (mantissa, exponent) representation -> log values. ln(v) is the only
// rounding beyond the grid product itself, so log posteriors are accurate to
// a few ulp of the true line likelihood.
void materialize_log(PairWorkspace &ws, size_t n_u) {
  ws.logpost.resize(n_u);
  for (size_t k = 0; k < n_u; k++) {
    ws.logpost[k] =
        std::log(ws.v[k]) +
        static_cast<double>(ws.lane_exp[k] + ws.weighted_binades) * kLn2;
  }
}

void finalize_posterior(PairPosterior &posterior) {
  const std::vector<double> &lp = posterior.log_posterior;
  size_t best = 0;
  for (size_t k = 1; k < lp.size(); k++) {
    if (lp[k] > lp[best]) {
      best = k;
    }
  }
  posterior.argmax_index = best;

  double shift = lp[best];
  double norm = 0.0;
  double first_moment = 0.0;
  double step = 1.0 / static_cast<double>(lp.size() - 1);
  for (size_t k = 0; k < lp.size(); k++) {
    double w = std::exp(lp[k] - shift);
    norm += w;
    first_moment += w * (static_cast<double>(k) * step);
  }
  double ratio = std::clamp(first_moment / norm, 0.0, 1.0);
  posterior.mean_t = posterior.budget * ratio;
}

void check_state_matches_tally(const MitigationState &state, const OutcomeTally &tally) {
  if (tally.group_count() != state.group_count()) {
    throw ContractViolation("tally has " + std::to_string(tally.group_count()) +
                            " outcome groups but the state caches " +
                            std::to_string(state.group_count()));
  }
}

void check_pair_invariants(const MitigationState &state) {
  double sum = neumaier_sum(state.populations);
  if (std::abs(sum - 1.0) > 1e-12) {
    throw InternalConsistencyError("populations sum to " + std::to_string(sum) +
                                   " after a pair update");
  }
  for (double r : state.populations) {
    if (!(r >= 0.0)) {
      throw InternalConsistencyError("negative population after a pair update");
    }
  }
}

// One pair update in argmax mode: evaluate the grid plus the incumbent point
// t = R_i, move only if some grid point strictly beats the incumbent. The
// strict comparison makes fixed points exact: staying performs no
// floating-point update at all.
bool update_pair_argmax(MitigationState &state, const MitigationConfig &cfg,
                        const OutcomeTally &tally, size_t i, size_t j, double s,
                        PairWorkspace &ws, double *new_ri) {
  size_t n_p = static_cast<size_t>(cfg.n_p);
  ws.u[n_p] = std::min(state.populations[i] / s, 1.0);
  build_tasks(state, tally, i, j, s, cfg.likelihood_floor, false, ws);
  eval_grid(ws, n_p + 1);

  // Exact product comparison: lane x beats lane y iff (exp, mantissa) is
  // lexicographically greater. Ties keep the lower grid index, and a tie
  // with the incumbent keeps the incumbent.
  const double *v = ws.v.data();
  const int64_t *le = ws.lane_exp.data();
  auto greater = [&](size_t x, size_t y) {
    return le[x] != le[y] ? le[x] > le[y] : v[x] > v[y];
  };
  size_t best = 0;
  for (size_t k = 1; k < n_p; k++) {
    if (greater(k, best)) {
      best = k;
    }
  }
  if (!greater(best, n_p)) {
    return false;
  }
  *new_ri = s * ws.u[best];
  return true;
}

void apply_pair_update(MitigationState &state, PairWorkspace &ws, size_t i, size_t j,
                       double new_ri, double new_rj) {
  state.populations[i] = new_ri;
  state.populations[j] = new_rj;
  for (size_t t = 0; t < ws.task_group.size(); t++) {
    state.totals[ws.task_group[t]] =
        std::fma(ws.task_a[t], new_ri, std::fma(ws.task_b[t], new_rj, ws.task_c[t]));
  }
}

void refresh_totals(MitigationState &state) {
  size_t n_groups = state.group_count();
  size_t m = state.string_count();
  std::fill(state.totals.begin(), state.totals.end(), 0.0);
  for (size_t k = 0; k < m; k++) {
    const double *row = state.likelihood.data() + k * n_groups;
    double r = state.populations[k];
    if (r == 0.0) {
      continue;
    }
    for (size_t g = 0; g < n_groups; g++) {
      state.totals[g] += row[g] * r;
    }
  }
}

}  // namespace

MitigationState MitigationState::initialize(const OutcomeTally &tally,
                                            const MultiQubitNoiseModel &model,
                                            const MitigationConfig &cfg) {
  cfg.validate();
  if (tally.strings.empty() || tally.groups.empty()) {
    throw ContractViolation("cannot mitigate an empty tally");
  }
  if (tally.mode != model.mode()) {
    throw ContractViolation(std::string("mode mismatch: tally is ") + to_string(tally.mode) +
                            " but the detector model is " + to_string(model.mode()));
  }
  if (tally.n_qubits != model.n_qubits()) {
    throw ContractViolation("tally spans " + std::to_string(tally.n_qubits) +
                            " qubits but the detector model has " +
                            std::to_string(model.n_qubits()));
  }

  size_t m = tally.string_count();
  size_t n_groups = tally.group_count();
  uint64_t cache_bytes = static_cast<uint64_t>(m + 2) * n_groups * sizeof(double);
  if (cache_bytes > cfg.memory_budget_bytes) {
    throw ResourceError("likelihood cache for G=" + std::to_string(n_groups) +
                        " outcome groups x M=" + std::to_string(m) + " strings needs " +
                        std::to_string(cache_bytes) + " bytes, over the budget of " +
                        std::to_string(cfg.memory_budget_bytes));
  }

  MitigationState state;
  state.active = tally.strings;
  state.populations = empirical_frequencies(tally);
  state.trace.epsilon = cfg.epsilon;

  int n_qubits = model.n_qubits();

  // Per-qubit lookup: entry[key] = {P(key | true 0), P(key | true 1)}, with
  // key an assigned bit (binary) or a bin index (analog).
  std::vector<std::array<double, 2>> table;
  std::vector<size_t> table_offset(static_cast<size_t>(n_qubits));
  for (int q = 0; q < n_qubits; q++) {
    table_offset[static_cast<size_t>(q)] = table.size();
    if (model.mode() == Mode::binary) {
      const SingleQubitConfusion &c = model.confusions()[static_cast<size_t>(q)];
      table.push_back({c.p[0][0], c.p[0][1]});
      table.push_back({c.p[1][0], c.p[1][1]});
    } else {
      const ResponseFunction &rf = model.responses()[static_cast<size_t>(q)];
      for (int bin = 0; bin < rf.n_bin(); bin++) {
        table.push_back({rf.lambda[0][static_cast<size_t>(bin)],
                         rf.lambda[1][static_cast<size_t>(bin)]});
      }
    }
  }

  std::vector<uint8_t> key_flat(n_groups * static_cast<size_t>(n_qubits));
  for (size_t g = 0; g < n_groups; g++) {
    std::memcpy(key_flat.data() + g * static_cast<size_t>(n_qubits), tally.groups[g].key.data(),
                static_cast<size_t>(n_qubits));
  }

  state.likelihood.resize(m * n_groups);
  for (size_t k = 0; k < m; k++) {
    const std::string &bits = state.active[k];
    std::vector<uint8_t> bit(static_cast<size_t>(n_qubits));
    for (int q = 0; q < n_qubits; q++) {
      bit[static_cast<size_t>(q)] = static_cast<uint8_t>(bits[static_cast<size_t>(q)] - '0');
    }
    double *row = state.likelihood.data() + k * n_groups;
    for (size_t g = 0; g < n_groups; g++) {
      const uint8_t *key = key_flat.data() + g * static_cast<size_t>(n_qubits);
      double acc = 1.0;
      for (int q = 0; q < n_qubits; q++) {
        acc *= table[table_offset[static_cast<size_t>(q)] + key[q]][bit[static_cast<size_t>(q)]];
      }
      row[g] = acc;
    }
  }

  state.totals.assign(n_groups, 0.0);
  refresh_totals(state);
  for (size_t g = 0; g < n_groups; g++) {
    if (!(state.totals[g] > 0.0)) {
      throw DegenerateCalibration(
          "outcome group " + std::to_string(g) +
          " has zero probability under every observed string; the detector model assigns "
          "impossible outcomes");
    }
  }
  return state;
}

PairPosterior pair_log_posterior(const MitigationState &state, size_t i, size_t j,
                                 const MitigationConfig &cfg, const OutcomeTally &tally) {
  cfg.validate();
  check_state_matches_tally(state, tally);
  size_t m = state.string_count();
  if (i >= m || j >= m || i == j) {
    throw ContractViolation("pair (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") is not a valid pair of distinct active indices (M = " +
                            std::to_string(m) + ")");
  }

  PairWorkspace ws;
  ws.reset_grid(cfg.n_p);
  size_t n_p = static_cast<size_t>(cfg.n_p);
  double s = state.populations[i] + state.populations[j];
  build_tasks(state, tally, i, j, s, cfg.likelihood_floor, true, ws);
  eval_grid(ws, n_p);
  materialize_log(ws, n_p);

  PairPosterior posterior;
  posterior.i = i;
  posterior.j = j;
  posterior.budget = s;
  posterior.log_posterior = std::move(ws.logpost);
  finalize_posterior(posterior);
  return posterior;
}

std::pair<double, double> estimate_pair(const PairPosterior &posterior, Estimator estimator) {
  if (posterior.log_posterior.size() < 2) {
    throw ContractViolation("pair posterior grid is not populated");
  }
  double t;
  if (estimator == Estimator::argmax) {
    double u = static_cast<double>(posterior.argmax_index) /
               static_cast<double>(posterior.log_posterior.size() - 1);
    t = posterior.budget * u;
  } else {
    t = posterior.mean_t;
  }
  return {t, posterior.budget - t};
}

double sweep(MitigationState &state, const MitigationConfig &cfg, const OutcomeTally &tally) {
  cfg.validate();
  check_state_matches_tally(state, tally);
  auto start = std::chrono::steady_clock::now();

  size_t m = state.string_count();
  double tv = 0.0;
  if (m >= 2) {
    std::vector<double> before = state.populations;

    // Pair order for the whole sweep, frozen now: descending population,
    // ties broken lexicographically by bitstring.
    std::vector<uint32_t> order(m);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](uint32_t x, uint32_t y) {
      if (state.populations[x] != state.populations[y]) {
        return state.populations[x] > state.populations[y];
      }
      return state.active[x] < state.active[y];
    });

    PairWorkspace ws;
    ws.reset_grid(cfg.n_p);
    for (size_t a = 0; a < m; a++) {
      for (size_t b = a + 1; b < m; b++) {
        size_t i = order[a];
        size_t j = order[b];
        double ri = state.populations[i];
        double rj = state.populations[j];
        double s = ri + rj;

        double new_ri = ri;
        bool moved = false;
        if (s != 0.0) {
          // An empty pair stays an empty pair: the grid would collapse to a
          // single point, so skipping is exact, and it is the common case
          // once early updates have cleared spurious strings.
          if (cfg.estimator == Estimator::argmax) {
            moved = update_pair_argmax(state, cfg, tally, i, j, s, ws, &new_ri);
          } else {
            PairPosterior posterior = pair_log_posterior(state, i, j, cfg, tally);
            new_ri = estimate_pair(posterior, Estimator::mean).first;
            build_tasks(state, tally, i, j, s, cfg.likelihood_floor, false, ws);
            moved = new_ri != ri;
          }
        }
        if (moved) {
          apply_pair_update(state, ws, i, j, new_ri, s - new_ri);
        }
        if (cfg.record_pair_trace) {
          state.pair_tv.push_back(
              0.5 * (std::abs(state.populations[i] - ri) + std::abs(state.populations[j] - rj)));
        }
        if (cfg.check_invariants) {
          check_pair_invariants(state);
        }
      }
    }

    tv = total_variation(before, state.populations);

    // Each update preserves R_i + R_j up to one rounding of S; cap the
    // accumulated drift without disturbing exact fixed points.
    double sum = neumaier_sum(state.populations);
    if (std::abs(sum - 1.0) > 1e-13) {
      for (double &r : state.populations) {
        r /= sum;
      }
    }

    // Prune strings whose population hit an endpoint exactly.
    size_t n_groups = state.group_count();
    size_t out = 0;
    for (size_t k = 0; k < m; k++) {
      if (state.populations[k] == 0.0) {
        continue;
      }
      if (out != k) {
        state.active[out] = std::move(state.active[k]);
        state.populations[out] = state.populations[k];
        std::memmove(state.likelihood.data() + out * n_groups,
                     state.likelihood.data() + k * n_groups, n_groups * sizeof(double));
      }
      out++;
    }
    state.active.resize(out);
    state.populations.resize(out);
    state.likelihood.resize(out * n_groups);
    refresh_totals(state);
  }

  state.sweeps += 1;
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  state.trace.sweeps.push_back(SweepRecord{state.sweeps, tv, state.string_count(), seconds});
  return tv;
}

MitigationResult mitigate(const OutcomeTally &tally, const MultiQubitNoiseModel &model,
                          const MitigationConfig &cfg) {
  MitigationState state = MitigationState::initialize(tally, model, cfg);
  double tv = std::numeric_limits<double>::infinity();
  while (state.sweeps < cfg.max_sweeps) {
    tv = sweep(state, cfg, tally);
    if (tv < cfg.epsilon) {
      break;
    }
  }
  MitigationResult result;
  result.strings = std::move(state.active);
  result.populations = std::move(state.populations);
  result.sweeps = state.sweeps;
  result.trace = std::move(state.trace);
  result.trace.converged = tv < cfg.epsilon;
  result.pair_tv = std::move(state.pair_tv);
  return result;
}

std::map<std::string, double> brute_force_posterior(const OutcomeTally &tally,
                                                    const MultiQubitNoiseModel &model,
                                                    int grid_resolution) {
  if (grid_resolution < 2 || grid_resolution > 201) {
    throw ContractViolation("brute_force_posterior grid_resolution must be in [2, 201]");
  }
  MitigationConfig cfg;
  MitigationState state = MitigationState::initialize(tally, model, cfg);
  size_t m = state.string_count();
  if (m > 3) {
    throw ContractViolation("brute_force_posterior is a test oracle limited to M <= 3, got M = " +
                            std::to_string(m));
  }

  size_t n_groups = state.group_count();
  const double *like = state.likelihood.data();
  const double floor = cfg.likelihood_floor;
  auto log_likelihood = [&](const double *rho) {
    double ll = 0.0;
    for (size_t g = 0; g < n_groups; g++) {
      double p = 0.0;
      for (size_t k = 0; k < m; k++) {
        p += like[k * n_groups + g] * rho[k];
      }
      ll += static_cast<double>(tally.groups[g].count) * std::log(std::max(p, floor));
    }
    return ll;
  };

  std::map<std::string, double> result;
  if (m == 1) {
    result[state.active[0]] = 1.0;
    return result;
  }

  double denom = static_cast<double>(grid_resolution - 1);
  double best_ll = -std::numeric_limits<double>::infinity();
  std::array<double, 3> best{0.0, 0.0, 0.0};
  if (m == 2) {
    for (int k = 0; k < grid_resolution; k++) {
      double rho[2] = {static_cast<double>(k) / denom, 0.0};
      rho[1] = 1.0 - rho[0];
      double ll = log_likelihood(rho);
      if (ll > best_ll) {
        best_ll = ll;
        best = {rho[0], rho[1], 0.0};
      }
    }
  } else {
    for (int k = 0; k < grid_resolution; k++) {
      for (int l = 0; l + k < grid_resolution; l++) {
        double rho[3] = {static_cast<double>(k) / denom, static_cast<double>(l) / denom, 0.0};
        rho[2] = std::max(1.0 - rho[0] - rho[1], 0.0);
        double ll = log_likelihood(rho);
        if (ll > best_ll) {
          best_ll = ll;
          best = {rho[0], rho[1], rho[2]};
        }
      }
    }
  }
  for (size_t k = 0; k < m; k++) {
    result[state.active[k]] = best[k];
  }
  return result;
}

}  // namespace qmit
