#pragma once

// Exhaustive routing oracle for tiny instances. Works from raw coordinates
// with its own integer micrometer weights; shares nothing with the solver.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using P3 = std::array<double, 3>;

struct Instance {
  std::vector<P3> depots;  // one per vehicle
  std::vector<P3> stations;
  std::vector<P3> targets;
  int capacity = 1;
};

inline constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::max() / 4;

inline std::int64_t w_um(const P3& a, const P3& b) {
  return std::llround(std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                                (a[2] - b[2]) * (a[2] - b[2])) * 1e6);
}

// Cheapest open path start -> all targets of `mask` in some order -> some station.
// With from_station the start is any station as well.
inline std::int64_t best_trip(const Instance& in, const std::optional<P3>& start, unsigned mask) {
  std::vector<int> order;
  for (int t = 0; t < static_cast<int>(in.targets.size()); ++t) {
    if (mask & (1u << t)) order.push_back(t);
  }
  std::int64_t best = kNone;
  std::vector<P3> starts;
  if (start) starts.push_back(*start);
  else starts = in.stations;
  do {
    std::int64_t inner = 0;
    for (std::size_t k = 1; k < order.size(); ++k) inner += w_um(in.targets[order[k - 1]], in.targets[order[k]]);
    for (const auto& s : starts) {
      for (const auto& e : in.stations) {
        const std::int64_t c = w_um(s, in.targets[order.front()]) + inner + w_um(in.targets[order.back()], e);
        best = std::min(best, c);
      }
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// Optimal total length, or kNone when no feasible routing exists.
inline std::int64_t optimum(const Instance& in, bool idle_allowed) {
  const int nt = static_cast<int>(in.targets.size());
  const int nd = static_cast<int>(in.depots.size());
  const unsigned full = (1u << nt) - 1;
  if (nt == 0) return 0;

  std::vector<std::int64_t> station_trip(full + 1, kNone);
  std::vector<std::vector<std::int64_t>> depot_trip(nd, std::vector<std::int64_t>(full + 1, kNone));
  for (unsigned b = 1; b <= full; ++b) {
    if (__builtin_popcount(b) > in.capacity) continue;
    station_trip[b] = best_trip(in, std::nullopt, b);
    for (int d = 0; d < nd; ++d) depot_trip[d][b] = best_trip(in, in.depots[d], b);
  }

  // Per vehicle: split the assigned set into trips; exactly one starts at the depot.
  std::vector<std::vector<std::int64_t>> vehicle_cost(nd, std::vector<std::int64_t>(full + 1, kNone));
  for (int d = 0; d < nd; ++d) {
    std::vector<std::int64_t> f0(full + 1, kNone), f1(full + 1, kNone);
    f0[0] = 0;
    for (unsigned m = 1; m <= full; ++m) {
      const unsigned low = m & (~m + 1);
      for (unsigned b = m; b; b = (b - 1) & m) {
        if (!(b & low) || station_trip[b] >= kNone) continue;
        const unsigned rest = m & ~b;
        if (f0[rest] < kNone) f0[m] = std::min(f0[m], station_trip[b] + f0[rest]);
        if (f1[rest] < kNone) f1[m] = std::min(f1[m], station_trip[b] + f1[rest]);
        if (f0[rest] < kNone && depot_trip[d][b] < kNone) f1[m] = std::min(f1[m], depot_trip[d][b] + f0[rest]);
      }
    }
    vehicle_cost[d] = f1;
    vehicle_cost[d][0] = idle_allowed ? 0 : kNone;
  }

  // Every assignment of targets to vehicles.
  std::int64_t best = kNone;
  std::vector<int> owner(nt, 0);
  for (;;) {
    std::vector<unsigned> masks(nd, 0);
    for (int t = 0; t < nt; ++t) masks[owner[t]] |= 1u << t;
    std::int64_t total = 0;
    for (int d = 0; d < nd && total < kNone; ++d) {
      total = vehicle_cost[d][masks[d]] >= kNone ? kNone : total + vehicle_cost[d][masks[d]];
    }
    best = std::min(best, total);
    int k = 0;
    while (k < nt && ++owner[k] == nd) owner[k++] = 0;
    if (k == nt) break;
  }
  return best;
}

// A random feasible routing in oracle terms: per vehicle, ordered trips of
// (start facility, targets, end facility) with facility ids -1-d for depot d
// and s >= 0 for stations. Requires at least one station.
struct RandomTrip {
  int start;
  std::vector<int> targets;
  int end;
};

inline std::vector<std::vector<RandomTrip>> random_routing(const Instance& in, bool idle_allowed, std::mt19937_64& rng) {
  const int nt = static_cast<int>(in.targets.size());
  const int nd = static_cast<int>(in.depots.size());
  std::vector<std::vector<int>> assigned(nd);
  std::vector<int> perm(nt);
  for (int t = 0; t < nt; ++t) perm[t] = t;
  std::shuffle(perm.begin(), perm.end(), rng);
  int k = 0;
  if (!idle_allowed) {
    for (int d = 0; d < nd; ++d) assigned[d].push_back(perm[k++]);
  }
  for (; k < nt; ++k) assigned[rng() % nd].push_back(perm[k]);
  std::vector<std::vector<RandomTrip>> out(nd);
  const int ns = static_cast<int>(in.stations.size());
  for (int d = 0; d < nd; ++d) {
    std::size_t pos = 0;
    while (pos < assigned[d].size()) {
      const std::size_t load = 1 + rng() % static_cast<std::size_t>(in.capacity);
      RandomTrip trip;
      trip.start = out[d].empty() ? -1 - d : static_cast<int>(rng() % ns);
      for (std::size_t j = 0; j < load && pos < assigned[d].size(); ++j) trip.targets.push_back(assigned[d][pos++]);
      trip.end = static_cast<int>(rng() % ns);
      out[d].push_back(std::move(trip));
    }
  }
  return out;
}

}  // namespace oracle
