#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stlplan/mission.hpp"

namespace stlplan {

/// Undirected two-index capacitated routing model. Vertices are ordered
/// facilities first (one depot vertex per vehicle, then refilling stations),
/// then targets. Edge variables z(i,j|d) live on every unordered vertex pair
/// for every vehicle; pairs that cannot be used carry an upper bound of 0.
class RoutingModel {
 public:
  enum class VertexKind { kDepot, kStation, kTarget };

  struct Vertex {
    VertexKind kind;
    std::string name;
    Vec3 position;
    std::size_t region = 0;  // index into depots/stations/targets of the spec
  };

  struct Edge {
    std::size_t i;
    std::size_t j;  // i < j
  };

  RoutingModel(std::vector<Vertex> vertices, std::size_t vehicles, int capacity);

  std::size_t vehicle_count() const { return vehicles_; }
  int capacity() const { return capacity_; }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::size_t>& targets() const { return targets_; }
  const std::vector<std::size_t>& stations() const { return stations_; }
  std::size_t depot_vertex(std::size_t d) const { return depots_[d]; }
  bool is_target(std::size_t v) const { return vertices_[v].kind == VertexKind::kTarget; }
  bool is_facility(std::size_t v) const { return !is_target(v); }

  /// Weight in integer micrometers; objective arithmetic is exact in this unit.
  std::int64_t weight_um(std::size_t i, std::size_t j) const { return weights_[i * vertices_.size() + j]; }
  double weight(std::size_t i, std::size_t j) const { return static_cast<double>(weight_um(i, j)) * 1e-6; }

  std::size_t edge_index(std::size_t i, std::size_t j) const;
  std::size_t z_index(std::size_t d, std::size_t edge) const { return d * edges_.size() + edge; }
  std::size_t y_index(std::size_t d, std::size_t target_pos) const {
    return vehicles_ * edges_.size() + d * targets_.size() + target_pos;
  }
  std::size_t variable_count() const { return vehicles_ * (edges_.size() + targets_.size()); }
  std::size_t z_count() const { return vehicles_ * edges_.size(); }

  /// 0, 1 or 2 depending on which endpoints are facilities and who owns them.
  int z_upper(std::size_t d, std::size_t edge) const;

  /// Depot degree is an equality when every vehicle can be given a target;
  /// otherwise a vehicle may stay idle.
  bool strict_depot_degree() const { return targets_.size() >= vehicles_; }

 private:
  std::vector<Vertex> vertices_;
  std::size_t vehicles_;
  int capacity_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> edge_lookup_;
  std::vector<std::size_t> depots_;
  std::vector<std::size_t> stations_;
  std::vector<std::size_t> targets_;
  std::vector<std::int64_t> weights_;
};

/// Rounded capacity bound: fewest full magazines covering `subset_size` targets.
std::int64_t lower_bound_h(std::int64_t subset_size, std::int64_t capacity);

/// Builds the routing model for a mission. A vehicle with an explicit initial
/// state is placed where it would come to rest after braking.
RoutingModel build_model(const MissionSpec& spec, std::vector<std::string>* warnings = nullptr);

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kBudgetExhausted };
const char* to_string(SolveStatus s);

/// Facility -> targets -> facility segment, as vertex indices.
struct Trip {
  std::size_t start = 0;
  std::vector<std::size_t> targets;
  std::size_t end = 0;
};

struct VehicleRoute {
  std::vector<Trip> trips;  // in flight order; the first starts at the depot
  std::vector<std::size_t> stops() const;
};

struct RouteSolution {
  SolveStatus status = SolveStatus::kBudgetExhausted;
  std::int64_t objective_um = 0;
  double objective = 0.0;       // meters
  double bound = 0.0;           // best proven lower bound, meters
  double gap = 0.0;             // (objective - bound) / max(objective, 1e-9)
  std::vector<VehicleRoute> routes;
  std::vector<int> z;           // integral edge values, indexed like RoutingModel::z_index
  std::string infeasibility_hint;

  // Search statistics.
  double root_bound = 0.0;
  std::size_t nodes = 0;
  std::vector<std::vector<std::size_t>> cuts;  // target vertex subsets of every added cut
  std::vector<double> node_bounds_trace;       // (parent bound, child bound) pairs flattened
};

struct SolveBudget {
  std::size_t node_limit = 200000;
  std::chrono::milliseconds time_limit{60000};
};

/// Best-first branch-and-bound over the LP relaxation with lazily separated
/// rounded-capacity / connectivity cuts.
RouteSolution solve(const RoutingModel& model, const SolveBudget& budget = {});

/// Re-verifies degree, linkage, depot, capacity and connectivity constraints
/// of a solution from its z values and routes. Empty result means valid.
std::vector<std::string> check_solution(const RoutingModel& model, const RouteSolution& sol);

/// Sum of z(i,j|d) over edges crossing the boundary of `subset` (all vehicles).
std::int64_t boundary_flow(const RoutingModel& model, const std::vector<int>& z, const std::vector<std::size_t>& subset);

}  // namespace stlplan
