#include "stlplan/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace stlplan {

void OptimizerParams::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be non-negative");
  if (max_iterations < 1) throw std::invalid_argument("at least one iteration is required");
  if (starts < 1) throw std::invalid_argument("at least one start is required");
  if (!(initial_step > 0.0) || !(step_growth >= 1.0) || !(step_shrink > 0.0 && step_shrink < 1.0)) {
    throw std::invalid_argument("invalid step size schedule");
  }
  if (!(velocity_penalty >= 0.0) || !(energy_weight >= 0.0)) throw std::invalid_argument("weights must be non-negative");
}

std::size_t worker_count(std::size_t requested) {
  std::size_t n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("PLANNER_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return std::max<std::size_t>(n, 1);
}

RobustnessReport certify(const Formula& formula, const Trajectory& traj, double beta, double epsilon) {
  const Signal sig = traj.to_signal();
  check_evaluable(formula, sig, 0);
  RobustnessReport r;
  r.beta = beta;
  r.epsilon = epsilon;
  r.exact = eval_exact(formula, sig, 0);
  r.smooth = eval_smooth(formula, sig, 0, beta);
  r.satisfied = r.exact >= epsilon;
  if (formula->kind == NodeKind::kConjunction) {
    for (std::size_t i = 0; i < formula->children.size(); ++i) {
      const auto& ch = formula->children[i];
      r.top_level.push_back({ch->label.empty() ? fmt::format("#{}", i) : ch->label, eval_exact(ch, sig, 0)});
    }
  } else {
    r.top_level.push_back({formula->label.empty() ? "#0" : formula->label, r.exact});
  }
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& c : r.top_level) {
    if (c.exact < lowest) {
      lowest = c.exact;
      r.binding = c.label;
    }
  }
  r.clauses = clause_breakdown(formula, sig);
  return r;
}

ObjectiveEval objective(const Formula& formula, const MissionSpec& spec, const std::vector<std::vector<Vec3>>& accel,
                        const OptimizerParams& params, bool with_gradient) {
  const Trajectory traj = propagate(spec, accel);
  const Signal sig = traj.to_signal();
  const double dt = spec.dt;
  const std::size_t n = traj.steps();
  ObjectiveEval out;

  SmoothGradient sg;
  if (with_gradient) {
    sg = grad_smooth(formula, sig, 0, params.beta);
    out.smooth = sg.value;
  } else {
    out.smooth = eval_smooth(formula, sig, 0, params.beta);
  }
  out.value = out.smooth;

  if (with_gradient) out.gradient.assign(accel.size(), std::vector<Vec3>(n, Vec3{}));
  std::vector<double> gp(n + 1), gv(n + 1);
  for (std::size_t d = 0; d < accel.size(); ++d) {
    const auto& veh = spec.vehicles[d];
    const auto& vt = traj.vehicles[d];
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t k = 0; k <= n; ++k) {
        const double v = vt.v[k][j];
        const double over = std::max(0.0, v - veh.velocity_upper[j]);
        const double under = std::max(0.0, veh.velocity_lower[j] - v);
        out.value -= params.velocity_penalty * (over * over + under * under);
        if (with_gradient) {
          gp[k] = sg.gradient.at(channel_index(d, kPosChannel + j), k);
          gv[k] = sg.gradient.at(channel_index(d, kVelChannel + j), k) -
                  2.0 * params.velocity_penalty * (over - under);
        }
      }
      for (std::size_t k = 0; k < n; ++k) out.value -= params.energy_weight * accel[d][k][j] * accel[d][k][j];
      if (!with_gradient) continue;
      // p_k depends on a_i (i < k) through dt^2 (k - i - 1/2), v_k through dt.
      double s_p = 0.0, s_kp = 0.0, s_v = 0.0;
      for (std::size_t i = n; i-- > 0;) {
        const double k = static_cast<double>(i + 1);
        s_p += gp[i + 1];
        s_kp += k * gp[i + 1];
        s_v += gv[i + 1];
        const double ii = static_cast<double>(i) + 0.5;
        out.gradient[d][i][j] = dt * dt * (s_kp - ii * s_p) + dt * s_v -
                                2.0 * params.energy_weight * accel[d][i][j];
      }
    }
  }
  return out;
}

namespace {

using Accel = std::vector<std::vector<Vec3>>;

void project(const MissionSpec& spec, Accel& a) {
  for (std::size_t d = 0; d < a.size(); ++d) {
    const auto& veh = spec.vehicles[d];
    for (auto& s : a[d]) {
      for (int j = 0; j < 3; ++j) s[j] = std::clamp(s[j], veh.accel_lower[j], veh.accel_upper[j]);
    }
  }
}

struct StartOutcome {
  StartSummary summary;
  Accel best;
  double best_exact = -std::numeric_limits<double>::infinity();
  bool have = false;
};

StartOutcome run_start(const Formula& formula, const MissionSpec& spec, const Accel& warm, const OptimizerParams& params,
                       std::size_t index) {
  StartOutcome out;
  out.summary.index = index;
  Accel a = warm;
  double min_bound = std::numeric_limits<double>::infinity();
  for (const auto& veh : spec.vehicles) {
    for (int j = 0; j < 3; ++j) min_bound = std::min({min_bound, veh.accel_upper[j], -veh.accel_lower[j]});
  }
  if (index > 0) {
    std::mt19937_64 rng(params.seed + index);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (std::size_t d = 0; d < a.size(); ++d) {
      const auto& veh = spec.vehicles[d];
      for (auto& s : a[d]) {
        for (int j = 0; j < 3; ++j) s[j] += 0.1 * std::max(veh.accel_upper[j], -veh.accel_lower[j]) * unit(rng);
      }
    }
    project(spec, a);
  }

  auto consider = [&](const Accel& cand) {
    const Trajectory t = propagate(spec, cand);
    if (velocity_violation(spec, t) > 1e-9) return;
    const double e = eval_exact(formula, t.to_signal(), 0);
    if (!out.have || e > out.best_exact) {
      out.best_exact = e;
      out.best = cand;
      out.have = true;
    }
  };
  consider(a);
  out.summary.initial_exact = out.have ? out.best_exact : -std::numeric_limits<double>::infinity();

  ObjectiveEval cur = objective(formula, spec, a, params, true);
  double eta = params.initial_step * (std::isfinite(min_bound) ? min_bound : 1.0);
  std::size_t it = 0;
  for (; it < params.max_iterations; ++it) {
    double gmax = 0.0;
    for (const auto& gd : cur.gradient) {
      for (const auto& g : gd) gmax = std::max({gmax, std::abs(g[0]), std::abs(g[1]), std::abs(g[2])});
    }
    if (!(gmax > 0.0) || !std::isfinite(gmax)) break;
    bool accepted = false;
    Accel trial;
    for (std::size_t bt = 0; bt <= params.max_backtracks; ++bt) {
      trial = a;
      for (std::size_t d = 0; d < a.size(); ++d) {
        for (std::size_t k = 0; k < a[d].size(); ++k) {
          for (int j = 0; j < 3; ++j) trial[d][k][j] += eta * cur.gradient[d][k][j] / gmax;
        }
      }
      project(spec, trial);
      const ObjectiveEval val = objective(formula, spec, trial, params, false);
      if (val.value > cur.value) {
        accepted = true;
        eta *= params.step_growth;
        break;
      }
      eta *= params.step_shrink;
    }
    if (!accepted) break;
    a = std::move(trial);
    cur = objective(formula, spec, a, params, true);
    consider(a);
  }
  out.summary.iterations = it;
  out.summary.final_smooth = cur.smooth;
  out.summary.best_exact = out.best_exact;
  return out;
}

}  // namespace

OptimizeResult optimize(const Formula& formula, const MissionSpec& spec, const Trajectory& warm,
                        const OptimizerParams& params) {
  params.validate();
  check_evaluable(formula, warm.to_signal(), 0);
  Accel warm_a;
  for (const auto& vt : warm.vehicles) warm_a.push_back(vt.a);

  std::vector<StartOutcome> outcomes(params.starts);
  const std::size_t workers = std::min(worker_count(params.threads), params.starts);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < params.starts; i = next++) outcomes[i] = run_start(formula, spec, warm_a, params, i);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  OptimizeResult res;
  // The unperturbed warm start competes as well.
  Accel best = warm_a;
  double best_exact = eval_exact(formula, warm.to_signal(), 0);
  bool warm_ok = velocity_violation(spec, warm) <= 1e-9;
  if (!warm_ok) best_exact = -std::numeric_limits<double>::infinity();
  res.best_start = SIZE_MAX;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    res.starts.push_back(outcomes[i].summary);
    if (outcomes[i].have && outcomes[i].best_exact > best_exact) {
      best_exact = outcomes[i].best_exact;
      best = outcomes[i].best;
      res.best_start = i;
    }
  }
  if (res.best_start == SIZE_MAX) res.best_start = 0;
  res.trajectory = propagate(spec, best);
  res.report = certify(formula, res.trajectory, params.beta, params.epsilon);
  return res;
}

}  // namespace stlplan
