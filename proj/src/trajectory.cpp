#include "stlplan/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stlplan/motion.hpp"

namespace stlplan {

Signal Trajectory::to_signal() const {
  const std::size_t n = steps() + 1;
  Signal s(dt, fleet_channel_names(vehicles.size()), n);
  for (std::size_t d = 0; d < vehicles.size(); ++d) {
    const auto& vt = vehicles[d];
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < 3; ++j) {
        s.at(channel_index(d, kPosChannel + j), k) = vt.p[k][j];
        s.at(channel_index(d, kVelChannel + j), k) = vt.v[k][j];
      }
      s.at(channel_index(d, kCapChannel), k) = vt.c.empty() ? 0.0 : static_cast<double>(vt.c[k]);
    }
  }
  return s;
}

VehicleTrajectory rollout(const Vec3& p0, const Vec3& v0, const std::vector<Vec3>& accel, double dt) {
  VehicleTrajectory out;
  out.a = accel;
  out.p.reserve(accel.size() + 1);
  out.v.reserve(accel.size() + 1);
  Vec3 p = p0;
  Vec3 v = v0;
  out.p.push_back(p);
  out.v.push_back(v);
  for (const auto& a : accel) {
    integrate(p, v, a, dt);
    out.p.push_back(p);
    out.v.push_back(v);
  }
  return out;
}

std::vector<int> derive_capacity(const MissionSpec& spec, std::size_t vehicle, const std::vector<Vec3>& p,
                                 std::vector<Visit>* visits) {
  const int full = spec.vehicles.at(vehicle).capacity;
  const std::size_t need_ins = install_steps(spec) + 1;
  const std::size_t need_rs = refill_steps(spec) + 1;
  const std::size_t n = p.size();
  std::vector<int> c(n, 0);
  if (n == 0) return c;
  c[0] = start_capacity(spec, vehicle);

  constexpr std::size_t kOutside = SIZE_MAX;
  std::size_t target = kOutside;
  std::size_t target_start = 0;
  int c_at_entry = 0;
  std::vector<std::optional<std::size_t>> station_start(spec.stations.size());
  std::vector<Visit> log;

  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) {
      c[k] = c[k - 1];
      if (target != kOutside && !spec.targets[target].box.contains(p[k])) {
        const bool counted = k - target_start >= need_ins && c_at_entry > 0;
        if (counted) c[k] = std::max(0, c[k] - 1);
        log.push_back({Visit::Kind::kTarget, target, target_start, k - 1, counted});
        target = kOutside;
      }
      for (std::size_t s = 0; s < spec.stations.size(); ++s) {
        if (station_start[s] && !spec.stations[s].box.contains(p[k])) {
          const bool counted = k - *station_start[s] >= need_rs;
          if (counted) c[k] = full;
          log.push_back({Visit::Kind::kStation, s, *station_start[s], k - 1, counted});
          station_start[s].reset();
        }
      }
    }
    if (target == kOutside) {
      for (std::size_t q = 0; q < spec.targets.size(); ++q) {
        if (spec.targets[q].box.contains(p[k])) {
          target = q;
          target_start = k;
          c_at_entry = c[k];
          break;
        }
      }
    }
    for (std::size_t s = 0; s < spec.stations.size(); ++s) {
      if (!station_start[s] && spec.stations[s].box.contains(p[k])) station_start[s] = k;
    }
  }
  if (target != kOutside) log.push_back({Visit::Kind::kTarget, target, target_start, n - 1, n - target_start >= need_ins && c_at_entry > 0});
  for (std::size_t s = 0; s < spec.stations.size(); ++s) {
    if (station_start[s]) log.push_back({Visit::Kind::kStation, s, *station_start[s], n - 1, n - *station_start[s] >= need_rs});
  }
  if (visits) {
    std::stable_sort(log.begin(), log.end(), [](const Visit& a, const Visit& b) { return a.first < b.first; });
    *visits = std::move(log);
  }
  return c;
}

int effective_capacity(const MissionSpec& spec, std::size_t vehicle, const std::vector<Vec3>& p, std::size_t k) {
  const std::vector<Vec3> prefix(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(k + 1));
  std::vector<Visit> visits;
  int c = derive_capacity(spec, vehicle, prefix, &visits).back();
  for (const auto& v : visits) {
    if (v.last != k || !v.counted) continue;
    if (v.kind == Visit::Kind::kTarget) c = std::max(0, c - 1);
    else c = spec.vehicles[vehicle].capacity;
  }
  return c;
}

Trajectory propagate(const MissionSpec& spec, const std::vector<std::vector<Vec3>>& accel) {
  if (accel.size() != spec.vehicles.size()) throw std::invalid_argument("one acceleration sequence per vehicle expected");
  Trajectory t;
  t.dt = spec.dt;
  for (std::size_t d = 0; d < accel.size(); ++d) {
    if (accel[d].size() != accel.front().size()) throw std::invalid_argument("acceleration sequences differ in length");
    t.vehicles.push_back(rollout(start_position(spec, d), start_velocity(spec, d), accel[d], spec.dt));
  }
  refresh_capacity(spec, t);
  return t;
}

void refresh_capacity(const MissionSpec& spec, Trajectory& traj) {
  for (std::size_t d = 0; d < traj.vehicles.size(); ++d) traj.vehicles[d].c = derive_capacity(spec, d, traj.vehicles[d].p);
}

double dynamics_residual(const Trajectory& traj) {
  double worst = 0.0;
  const double dt = traj.dt;
  for (const auto& vt : traj.vehicles) {
    for (std::size_t k = 0; k < vt.a.size(); ++k) {
      for (int j = 0; j < 3; ++j) {
        const double pv = vt.p[k][j] + vt.v[k][j] * dt + 0.5 * vt.a[k][j] * dt * dt;
        const double vv = vt.v[k][j] + vt.a[k][j] * dt;
        worst = std::max({worst, std::abs(vt.p[k + 1][j] - pv), std::abs(vt.v[k + 1][j] - vv)});
      }
    }
  }
  return worst;
}

bool accelerations_within(const MissionSpec& spec, const Trajectory& traj) {
  for (std::size_t d = 0; d < traj.vehicles.size(); ++d) {
    const auto& veh = spec.vehicles[d];
    for (const auto& a : traj.vehicles[d].a) {
      for (int j = 0; j < 3; ++j) {
        if (!(a[j] >= veh.accel_lower[j] && a[j] <= veh.accel_upper[j])) return false;
      }
    }
  }
  return true;
}

double velocity_violation(const MissionSpec& spec, const Trajectory& traj) {
  double worst = 0.0;
  for (std::size_t d = 0; d < traj.vehicles.size(); ++d) {
    const auto& veh = spec.vehicles[d];
    for (const auto& v : traj.vehicles[d].v) {
      for (int j = 0; j < 3; ++j) {
        worst = std::max({worst, v[j] - veh.velocity_upper[j], veh.velocity_lower[j] - v[j]});
      }
    }
  }
  return worst;
}

double min_pairwise_distance(const Trajectory& traj) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = traj.steps() + 1;
  for (std::size_t a = 0; a < traj.vehicles.size(); ++a) {
    for (std::size_t b = a + 1; b < traj.vehicles.size(); ++b) {
      for (std::size_t k = 0; k < n; ++k) best = std::min(best, distance(traj.vehicles[a].p[k], traj.vehicles[b].p[k]));
    }
  }
  return best;
}

std::vector<Installation> installations(const MissionSpec& spec, const Trajectory& traj) {
  std::vector<Installation> out;
  for (std::size_t d = 0; d < traj.vehicles.size(); ++d) {
    std::vector<Visit> visits;
    derive_capacity(spec, d, traj.vehicles[d].p, &visits);
    for (const auto& v : visits) {
      if (v.kind == Visit::Kind::kTarget && v.counted) out.push_back({v.region, d, v.first, v.last});
    }
  }
  std::sort(out.begin(), out.end(), [](const Installation& a, const Installation& b) {
    return a.first != b.first ? a.first < b.first : a.vehicle < b.vehicle;
  });
  return out;
}

}  // namespace stlplan
