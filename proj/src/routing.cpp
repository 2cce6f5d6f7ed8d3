#include "stlplan/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "stlplan/lp.hpp"
#include "stlplan/motion.hpp"

namespace stlplan {

RoutingModel::RoutingModel(std::vector<Vertex> vertices, std::size_t vehicles, int capacity)
    : vertices_(std::move(vertices)), vehicles_(vehicles), capacity_(capacity) {
  if (capacity_ < 1) throw std::invalid_argument("routing capacity must be at least 1");
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    switch (vertices_[v].kind) {
      case VertexKind::kDepot:
        if (!stations_.empty() || !targets_.empty()) throw std::invalid_argument("depot vertices must come first");
        depots_.push_back(v);
        break;
      case VertexKind::kStation:
        if (!targets_.empty()) throw std::invalid_argument("station vertices must precede targets");
        stations_.push_back(v);
        break;
      case VertexKind::kTarget: targets_.push_back(v); break;
    }
  }
  if (depots_.size() != vehicles_) throw std::invalid_argument("routing model needs exactly one depot vertex per vehicle");

  const std::size_t nv = vertices_.size();
  edge_lookup_.assign(nv * nv, SIZE_MAX);
  for (std::size_t i = 0; i < nv; ++i) {
    for (std::size_t j = i + 1; j < nv; ++j) {
      edge_lookup_[i * nv + j] = edge_lookup_[j * nv + i] = edges_.size();
      edges_.push_back({i, j});
    }
  }
  weights_.assign(nv * nv, 0);
  for (std::size_t i = 0; i < nv; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      weights_[i * nv + j] = std::llround(distance(vertices_[i].position, vertices_[j].position) * 1e6);
    }
  }
}

std::size_t RoutingModel::edge_index(std::size_t i, std::size_t j) const {
  const std::size_t e = edge_lookup_[i * vertices_.size() + j];
  if (e == SIZE_MAX) throw std::out_of_range("no edge between identical vertices");
  return e;
}

int RoutingModel::z_upper(std::size_t d, std::size_t edge) const {
  const auto [i, j] = edges_[edge];
  const bool fi = is_facility(i);
  const bool fj = is_facility(j);
  if (fi && fj) return 0;
  if (!fi && !fj) return 1;
  const std::size_t f = fi ? i : j;
  if (vertices_[f].kind == VertexKind::kDepot) return f == depots_[d] ? 1 : 0;
  return 2;
}

std::int64_t lower_bound_h(std::int64_t subset_size, std::int64_t capacity) {
  if (capacity < 1) throw std::invalid_argument("capacity must be at least 1");
  if (subset_size <= 0) return 0;
  return (subset_size + capacity - 1) / capacity;
}

RoutingModel build_model(const MissionSpec& spec, std::vector<std::string>* warnings) {
  require_valid(spec);
  std::vector<RoutingModel::Vertex> vertices;
  int capacity = std::numeric_limits<int>::max();
  bool heterogeneous = false;
  for (std::size_t d = 0; d < spec.vehicles.size(); ++d) {
    const auto& v = spec.vehicles[d];
    Vec3 pos = spec.depots[v.depot].box.centroid();
    if (v.initial) pos = stopping_point(v.initial->position, v.initial->velocity, v, spec.dt);
    vertices.push_back({RoutingModel::VertexKind::kDepot, fmt::format("depot/v{}", d), pos, v.depot});
    if (d > 0 && v.capacity != capacity) heterogeneous = true;
    capacity = std::min(capacity, v.capacity);
  }
  for (std::size_t s = 0; s < spec.stations.size(); ++s) {
    vertices.push_back({RoutingModel::VertexKind::kStation, spec.stations[s].name, spec.stations[s].box.centroid(), s});
  }
  for (std::size_t t = 0; t < spec.targets.size(); ++t) {
    vertices.push_back({RoutingModel::VertexKind::kTarget, spec.targets[t].name, spec.targets[t].box.centroid(), t});
  }

  if (warnings) {
    if (heterogeneous) warnings->push_back(fmt::format("heterogeneous capacities; routing uses the smallest ({})", capacity));
    std::int64_t deliverable = 0;
    for (std::size_t d = 0; d < spec.vehicles.size(); ++d) {
      if (spec.stations.empty()) {
        deliverable += start_capacity(spec, d);
      } else if (spec.horizon > 0.0 && spec.install_time > 0.0) {
        deliverable += static_cast<std::int64_t>(spec.horizon / spec.install_time);
      } else {
        deliverable = std::numeric_limits<std::int64_t>::max() / 2;
      }
    }
    if (static_cast<std::int64_t>(spec.targets.size()) > deliverable) {
      warnings->push_back(fmt::format("{} targets exceed the {} installations the fleet can deliver; the model is likely infeasible",
                                      spec.targets.size(), deliverable));
    }
  }
  return RoutingModel(std::move(vertices), spec.vehicles.size(), capacity);
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kBudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

std::vector<std::size_t> VehicleRoute::stops() const {
  std::vector<std::size_t> out;
  for (const auto& t : trips) {
    if (out.empty() || out.back() != t.start) out.push_back(t.start);
    out.insert(out.end(), t.targets.begin(), t.targets.end());
    out.push_back(t.end);
  }
  return out;
}

std::int64_t boundary_flow(const RoutingModel& model, const std::vector<int>& z, const std::vector<std::size_t>& subset) {
  std::vector<char> in(model.vertices().size(), 0);
  for (auto v : subset) in[v] = 1;
  std::int64_t flow = 0;
  for (std::size_t d = 0; d < model.vehicle_count(); ++d) {
    for (std::size_t e = 0; e < model.edges().size(); ++e) {
      const auto [i, j] = model.edges()[e];
      if (in[i] != in[j]) flow += z[model.z_index(d, e)];
    }
  }
  return flow;
}

namespace {

constexpr double kIntTol = 1e-6;

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// Target components of the support graph (edge weight summed over vehicles).
std::vector<std::vector<std::size_t>> target_components(const RoutingModel& model, const std::vector<double>& edge_sum) {
  UnionFind uf(model.vertices().size());
  for (std::size_t e = 0; e < model.edges().size(); ++e) {
    const auto [i, j] = model.edges()[e];
    if (model.is_target(i) && model.is_target(j) && edge_sum[e] > kIntTol) uf.unite(i, j);
  }
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (auto t : model.targets()) groups[uf.find(t)].push_back(t);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  return out;
}

class BranchAndBound {
 public:
  BranchAndBound(const RoutingModel& model, const SolveBudget& budget) : model_(model), budget_(budget) {}

  RouteSolution run();

 private:
  struct BoundChange {
    std::size_t var;
    double lo;
    double hi;
  };
  struct Node {
    std::vector<BoundChange> changes;
    double bound;
    std::size_t depth;
    std::size_t id;
  };
  struct NodeOrder {
    bool operator()(const Node& a, const Node& b) const {
      if (a.bound != b.bound) return a.bound > b.bound;
      if (a.depth != b.depth) return a.depth < b.depth;
      return a.id > b.id;
    }
  };

  void build_base();
  std::vector<std::vector<std::size_t>> separate(const std::vector<double>& x);
  void add_cut(std::vector<std::size_t> subset);
  std::size_t pick_branch_var(const std::vector<double>& x) const;
  std::vector<VehicleRoute> extract_routes(const std::vector<int>& z) const;

  const RoutingModel& model_;
  SolveBudget budget_;
  lp::Problem base_;
  std::set<std::vector<std::size_t>> cut_set_;
  RouteSolution sol_;
  std::int64_t incumbent_um_ = std::numeric_limits<std::int64_t>::max();
  std::vector<int> incumbent_z_;
};

void BranchAndBound::build_base() {
  const auto& edges = model_.edges();
  const auto& targets = model_.targets();
  const std::size_t fleet = model_.vehicle_count();
  for (std::size_t d = 0; d < fleet; ++d) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      base_.add_variable(model_.weight(edges[e].i, edges[e].j), 0.0, model_.z_upper(d, e));
    }
  }
  for (std::size_t d = 0; d < fleet; ++d) {
    for (std::size_t t = 0; t < targets.size(); ++t) base_.add_variable(0.0, 0.0, 1.0);
  }

  for (std::size_t t = 0; t < targets.size(); ++t) {
    lp::Row row{{}, lp::Sense::kEqual, 2.0, "target-degree"};
    for (std::size_t d = 0; d < fleet; ++d) {
      for (std::size_t i = 0; i < model_.vertices().size(); ++i) {
        if (i != targets[t]) row.coeffs.emplace_back(model_.z_index(d, model_.edge_index(i, targets[t])), 1.0);
      }
    }
    base_.rows.push_back(std::move(row));
  }
  for (std::size_t t = 0; t < targets.size(); ++t) {
    for (std::size_t d = 0; d < fleet; ++d) {
      lp::Row row{{}, lp::Sense::kEqual, 0.0, "vehicle-linkage"};
      for (std::size_t i = 0; i < model_.vertices().size(); ++i) {
        if (i != targets[t]) row.coeffs.emplace_back(model_.z_index(d, model_.edge_index(i, targets[t])), 1.0);
      }
      row.coeffs.emplace_back(model_.y_index(d, t), -2.0);
      base_.rows.push_back(std::move(row));
    }
  }
  const bool strict = model_.strict_depot_degree();
  for (std::size_t d = 0; d < fleet; ++d) {
    lp::Row row{{}, strict ? lp::Sense::kEqual : lp::Sense::kLessEqual, 1.0, "depot-departure"};
    for (auto t : targets) row.coeffs.emplace_back(model_.z_index(d, model_.edge_index(model_.depot_vertex(d), t)), 1.0);
    if (!strict) {
      // A vehicle serving any target must leave its depot.
      for (std::size_t t = 0; t < targets.size(); ++t) {
        lp::Row link{row.coeffs, lp::Sense::kGreaterEqual, 0.0, "depot-departure"};
        for (auto& c : link.coeffs) c.second = 1.0;
        link.coeffs.emplace_back(model_.y_index(d, t), -1.0);
        base_.rows.push_back(std::move(link));
      }
    }
    base_.rows.push_back(std::move(row));
  }
}

void BranchAndBound::add_cut(std::vector<std::size_t> subset) {
  std::vector<char> in(model_.vertices().size(), 0);
  for (auto v : subset) in[v] = 1;
  lp::Row row{{}, lp::Sense::kGreaterEqual,
              2.0 * static_cast<double>(lower_bound_h(static_cast<std::int64_t>(subset.size()), model_.capacity())),
              "capacity-connectivity"};
  for (std::size_t d = 0; d < model_.vehicle_count(); ++d) {
    for (std::size_t e = 0; e < model_.edges().size(); ++e) {
      const auto [i, j] = model_.edges()[e];
      if (in[i] != in[j] && model_.z_upper(d, e) > 0) row.coeffs.emplace_back(model_.z_index(d, e), 1.0);
    }
  }
  base_.rows.push_back(std::move(row));
  sol_.cuts.push_back(subset);
  cut_set_.insert(std::move(subset));
}

std::vector<std::vector<std::size_t>> BranchAndBound::separate(const std::vector<double>& x) {
  const auto& edges = model_.edges();
  std::vector<double> edge_sum(edges.size(), 0.0);
  for (std::size_t d = 0; d < model_.vehicle_count(); ++d) {
    for (std::size_t e = 0; e < edges.size(); ++e) edge_sum[e] += x[model_.z_index(d, e)];
  }
  auto candidates = target_components(model_, edge_sum);
  if (candidates.size() > 1) candidates.push_back(model_.targets());

  std::vector<std::vector<std::size_t>> violated;
  std::vector<char> in(model_.vertices().size(), 0);
  for (auto& s : candidates) {
    std::fill(in.begin(), in.end(), 0);
    for (auto v : s) in[v] = 1;
    double flow = 0.0;
    for (std::size_t e = 0; e < edges.size(); ++e) {
      if (in[edges[e].i] != in[edges[e].j]) flow += edge_sum[e];
    }
    const double need = 2.0 * static_cast<double>(lower_bound_h(static_cast<std::int64_t>(s.size()), model_.capacity()));
    if (flow < need - kIntTol && !cut_set_.count(s)) violated.push_back(s);
  }
  return violated;
}

std::size_t BranchAndBound::pick_branch_var(const std::vector<double>& x) const {
  // Most fractional; ties by lexicographic (i, j, d) for z, then (target, d) for y.
  std::size_t best = SIZE_MAX;
  double best_score = kIntTol;
  const std::size_t ne = model_.edges().size();
  for (std::size_t e = 0; e < ne; ++e) {
    for (std::size_t d = 0; d < model_.vehicle_count(); ++d) {
      const double v = x[model_.z_index(d, e)];
      const double frac = v - std::floor(v);
      const double score = std::min(frac, 1.0 - frac);
      if (score > best_score + 1e-12) {
        best_score = score;
        best = model_.z_index(d, e);
      }
    }
  }
  if (best != SIZE_MAX) return best;
  for (std::size_t t = 0; t < model_.targets().size(); ++t) {
    for (std::size_t d = 0; d < model_.vehicle_count(); ++d) {
      const double v = x[model_.y_index(d, t)];
      const double score = std::min(v - std::floor(v), std::ceil(v) - v);
      if (score > best_score + 1e-12) {
        best_score = score;
        best = model_.y_index(d, t);
      }
    }
  }
  return best;
}

std::vector<VehicleRoute> BranchAndBound::extract_routes(const std::vector<int>& z) const {
  const std::size_t nv = model_.vertices().size();
  std::vector<VehicleRoute> routes(model_.vehicle_count());
  for (std::size_t d = 0; d < model_.vehicle_count(); ++d) {
    std::vector<int> mult(nv * nv, 0);
    for (std::size_t e = 0; e < model_.edges().size(); ++e) {
      const auto [i, j] = model_.edges()[e];
      mult[i * nv + j] = mult[j * nv + i] = z[model_.z_index(d, e)];
    }
    auto take = [&](std::size_t a, std::size_t b) {
      --mult[a * nv + b];
      --mult[b * nv + a];
    };
    auto walk = [&](std::size_t from, std::size_t first) {
      Trip trip;
      trip.start = from;
      take(from, first);
      std::size_t cur = first;
      trip.targets.push_back(cur);
      for (;;) {
        std::size_t next = SIZE_MAX;
        for (std::size_t n = 0; n < nv; ++n) {
          if (mult[cur * nv + n] > 0) {
            next = n;
            break;
          }
        }
        if (next == SIZE_MAX) throw std::logic_error("dangling trip in integral routing solution");
        take(cur, next);
        if (model_.is_facility(next)) {
          trip.end = next;
          return trip;
        }
        trip.targets.push_back(next);
        cur = next;
      }
    };

    std::vector<Trip> pending;
    const std::size_t depot = model_.depot_vertex(d);
    std::optional<Trip> first;
    for (auto t : model_.targets()) {
      if (mult[depot * nv + t] > 0) {
        first = walk(depot, t);
        break;
      }
    }
    for (std::size_t f = 0; f < nv; ++f) {
      if (!model_.is_facility(f)) continue;
      for (auto t : model_.targets()) {
        while (mult[f * nv + t] > 0) pending.push_back(walk(f, t));
      }
    }
    if (!first) {
      if (!pending.empty()) throw std::logic_error("vehicle serves targets without leaving its depot");
      continue;
    }
    auto& route = routes[d].trips;
    route.push_back(*first);
    // Chain the remaining trips, preferring ones that start where we are.
    while (!pending.empty()) {
      const std::size_t here = route.back().end;
      std::size_t pick = SIZE_MAX;
      for (std::size_t k = 0; k < pending.size() && pick == SIZE_MAX; ++k) {
        if (pending[k].start == here || pending[k].end == here) pick = k;
      }
      if (pick == SIZE_MAX) {
        std::int64_t best = std::numeric_limits<std::int64_t>::max();
        for (std::size_t k = 0; k < pending.size(); ++k) {
          const std::int64_t w = std::min(model_.weight_um(here, pending[k].start), model_.weight_um(here, pending[k].end));
          if (w < best) {
            best = w;
            pick = k;
          }
        }
      }
      Trip trip = pending[pick];
      pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(pick));
      const bool reverse = trip.start != here &&
                           (trip.end == here || model_.weight_um(here, trip.end) < model_.weight_um(here, trip.start));
      if (reverse) {
        std::swap(trip.start, trip.end);
        std::reverse(trip.targets.begin(), trip.targets.end());
      }
      route.push_back(std::move(trip));
    }
  }
  return routes;
}

RouteSolution BranchAndBound::run() {
  const auto started = std::chrono::steady_clock::now();
  const std::size_t nz = model_.z_count();
  sol_.z.assign(nz, 0);
  sol_.routes.assign(model_.vehicle_count(), {});

  if (model_.targets().empty()) {
    sol_.status = SolveStatus::kOptimal;
    return sol_;
  }
  build_base();

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  std::size_t next_id = 0;
  open.push({{}, -lp::kInf, 0, next_id++});
  bool budget_hit = false;
  double open_bound_at_stop = lp::kInf;

  while (!open.empty()) {
    const auto elapsed = std::chrono::steady_clock::now() - started;
    if (sol_.nodes >= budget_.node_limit || elapsed > budget_.time_limit) {
      budget_hit = true;
      open_bound_at_stop = open.top().bound;
      break;
    }
    Node node = open.top();
    open.pop();
    const double incumbent_m = static_cast<double>(incumbent_um_) * 1e-6;
    if (incumbent_um_ != std::numeric_limits<std::int64_t>::max() && node.bound >= incumbent_m - 0.5e-6) continue;
    ++sol_.nodes;

    lp::Problem prob = base_;
    for (const auto& c : node.changes) {
      prob.lower[c.var] = std::max(prob.lower[c.var], c.lo);
      prob.upper[c.var] = std::min(prob.upper[c.var], c.hi);
    }

    std::optional<lp::Result> res;
    for (;;) {
      prob.rows.resize(base_.rows.size());
      std::copy(base_.rows.begin(), base_.rows.end(), prob.rows.begin());
      lp::Result r = lp::solve(prob);
      if (r.status != lp::Status::kOptimal) {
        if (node.id == 0) {
          std::set<std::string> fam;
          for (auto i : r.infeasible_rows) fam.insert(prob.rows[i].family);
          std::string hint = fmt::format("root relaxation {}", lp::to_string(r.status));
          if (!fam.empty()) {
            hint += "; violated families:";
            for (const auto& f : fam) hint += " " + f;
          }
          sol_.infeasibility_hint = hint;
        }
        break;
      }
      if (node.id == 0) sol_.root_bound = r.objective;
      auto cuts = separate(r.x);
      if (cuts.empty()) {
        res = std::move(r);
        break;
      }
      for (auto& c : cuts) add_cut(std::move(c));
    }
    if (!res) continue;

    if (node.id != 0) {
      sol_.node_bounds_trace.push_back(node.bound);
      sol_.node_bounds_trace.push_back(res->objective);
    }
    if (incumbent_um_ != std::numeric_limits<std::int64_t>::max() &&
        res->objective >= static_cast<double>(incumbent_um_) * 1e-6 - 0.5e-6) {
      continue;
    }

    const std::size_t var = pick_branch_var(res->x);
    if (var == SIZE_MAX) {
      std::vector<int> z(nz);
      std::int64_t obj = 0;
      for (std::size_t d = 0; d < model_.vehicle_count(); ++d) {
        for (std::size_t e = 0; e < model_.edges().size(); ++e) {
          const int v = static_cast<int>(std::lround(res->x[model_.z_index(d, e)]));
          z[model_.z_index(d, e)] = v;
          obj += v * model_.weight_um(model_.edges()[e].i, model_.edges()[e].j);
        }
      }
      if (obj < incumbent_um_) {
        incumbent_um_ = obj;
        incumbent_z_ = std::move(z);
      }
      continue;
    }

    const double v = res->x[var];
    Node down{node.changes, res->objective, node.depth + 1, next_id++};
    down.changes.push_back({var, -lp::kInf, std::floor(v)});
    Node up{std::move(node.changes), res->objective, node.depth + 1, next_id++};
    up.changes.push_back({var, std::ceil(v), lp::kInf});
    open.push(std::move(down));
    open.push(std::move(up));
  }

  const bool have = incumbent_um_ != std::numeric_limits<std::int64_t>::max();
  if (have) {
    sol_.objective_um = incumbent_um_;
    sol_.objective = static_cast<double>(incumbent_um_) * 1e-6;
    sol_.z = incumbent_z_;
    sol_.routes = extract_routes(sol_.z);
  }
  if (!budget_hit) {
    sol_.status = have ? SolveStatus::kOptimal : SolveStatus::kInfeasible;
    sol_.bound = sol_.objective;
    if (!have && sol_.infeasibility_hint.empty()) {
      sol_.infeasibility_hint = "no integral assignment satisfies the capacity-connectivity cuts";
    }
  } else {
    sol_.status = have ? SolveStatus::kFeasible : SolveStatus::kBudgetExhausted;
    sol_.bound = have ? std::min(open_bound_at_stop, sol_.objective) : open_bound_at_stop;
  }
  sol_.gap = have ? (sol_.objective - sol_.bound) / std::max(sol_.objective, 1e-9) : lp::kInf;
  return sol_;
}

}  // namespace

RouteSolution solve(const RoutingModel& model, const SolveBudget& budget) {
  BranchAndBound bb(model, budget);
  return bb.run();
}

std::vector<std::string> check_solution(const RoutingModel& model, const RouteSolution& sol) {
  std::vector<std::string> out;
  const auto& edges = model.edges();
  const auto& verts = model.vertices();
  const std::size_t nv = verts.size();
  if (sol.z.size() != model.z_count()) {
    out.push_back("edge vector has the wrong size");
    return out;
  }
  for (std::size_t d = 0; d < model.vehicle_count(); ++d) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      const int v = sol.z[model.z_index(d, e)];
      if (v < 0 || v > model.z_upper(d, e)) {
        out.push_back(fmt::format("z({},{}|{}) = {} outside [0,{}]", edges[e].i, edges[e].j, d, v, model.z_upper(d, e)));
      }
    }
  }

  // Degrees per vehicle and vertex.
  std::vector<std::int64_t> deg(model.vehicle_count() * nv, 0);
  for (std::size_t d = 0; d < model.vehicle_count(); ++d) {
    for (std::size_t e = 0; e < edges.size(); ++e) {
      deg[d * nv + edges[e].i] += sol.z[model.z_index(d, e)];
      deg[d * nv + edges[e].j] += sol.z[model.z_index(d, e)];
    }
  }
  std::vector<std::int64_t> served(model.vehicle_count(), 0);
  for (auto t : model.targets()) {
    std::int64_t total = 0;
    for (std::size_t d = 0; d < model.vehicle_count(); ++d) {
      const auto k = deg[d * nv + t];
      total += k;
      if (k != 0 && k != 2) out.push_back(fmt::format("target '{}' has degree {} under vehicle {}", verts[t].name, k, d));
      if (k == 2) ++served[d];
    }
    if (total != 2) out.push_back(fmt::format("target '{}' has total degree {}", verts[t].name, total));
  }
  for (std::size_t d = 0; d < model.vehicle_count(); ++d) {
    std::int64_t leave = 0;
    for (auto t : model.targets()) leave += sol.z[model.z_index(d, model.edge_index(model.depot_vertex(d), t))];
    const bool ok = model.strict_depot_degree() ? leave == 1 : (served[d] > 0 ? leave == 1 : leave == 0);
    if (!ok) out.push_back(fmt::format("vehicle {} leaves its depot {} times", d, leave));
  }

  // Capacity / connectivity over every target component and the whole target set.
  std::vector<double> edge_sum(edges.size(), 0.0);
  for (std::size_t d = 0; d < model.vehicle_count(); ++d) {
    for (std::size_t e = 0; e < edges.size(); ++e) edge_sum[e] += sol.z[model.z_index(d, e)];
  }
  auto comps = target_components(model, edge_sum);
  comps.push_back(model.targets());
  for (const auto& s : comps) {
    const auto flow = boundary_flow(model, sol.z, s);
    const auto need = 2 * lower_bound_h(static_cast<std::int64_t>(s.size()), model.capacity());
    if (flow < need) out.push_back(fmt::format("target set of size {} has boundary flow {} < {}", s.size(), flow, need));
  }

  // Routes must realise exactly the edge multiset.
  std::vector<int> rebuilt(model.z_count(), 0);
  std::vector<int> visits(nv, 0);
  std::int64_t objective = 0;
  for (std::size_t d = 0; d < sol.routes.size() && d < model.vehicle_count(); ++d) {
    const auto& trips = sol.routes[d].trips;
    if (!trips.empty() && trips.front().start != model.depot_vertex(d)) {
      out.push_back(fmt::format("route of vehicle {} does not start at its depot", d));
    }
    for (const auto& trip : trips) {
      if (static_cast<int>(trip.targets.size()) > model.capacity()) {
        out.push_back(fmt::format("vehicle {} trip carries {} > capacity {}", d, trip.targets.size(), model.capacity()));
      }
      if (trip.targets.empty() || !model.is_facility(trip.start) || !model.is_facility(trip.end)) {
        out.push_back(fmt::format("vehicle {} has a malformed trip", d));
        continue;
      }
      std::size_t prev = trip.start;
      for (auto t : trip.targets) {
        ++visits[t];
        rebuilt[model.z_index(d, model.edge_index(prev, t))] += 1;
        objective += model.weight_um(prev, t);
        prev = t;
      }
      rebuilt[model.z_index(d, model.edge_index(prev, trip.end))] += 1;
      objective += model.weight_um(prev, trip.end);
    }
  }
  for (auto t : model.targets()) {
    if (visits[t] != 1) out.push_back(fmt::format("target '{}' appears {} times in the routes", verts[t].name, visits[t]));
  }
  if (rebuilt != sol.z) out.push_back("routes do not reproduce the edge values");
  if (sol.status == SolveStatus::kOptimal || sol.status == SolveStatus::kFeasible) {
    if (objective != sol.objective_um) {
      out.push_back(fmt::format("route length {} um differs from objective {} um", objective, sol.objective_um));
    }
  }
  return out;
}

}  // namespace stlplan
