#include "stlplan/io.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace stlplan::io {

using nlohmann::json;
using nlohmann::ordered_json;

FormatError::FormatError(std::vector<std::string> issues)
    : std::runtime_error([&] {
        std::string msg = "invalid document:";
        for (const auto& i : issues) msg += "\n  " + i;
        return msg;
      }()),
      issues_(std::move(issues)) {}

void OptimizerOverrides::apply(OptimizerParams& p) const {
  if (beta) p.beta = *beta;
  if (max_iterations) p.max_iterations = *max_iterations;
  if (starts) p.starts = *starts;
  if (seed) p.seed = *seed;
  if (velocity_penalty) p.velocity_penalty = *velocity_penalty;
  if (energy_weight) p.energy_weight = *energy_weight;
}

namespace {

// Schema walker that records every problem instead of stopping at the first.
class Reader {
 public:
  std::vector<std::string> issues;

  void fail(const std::string& path, const std::string& what) { issues.push_back(fmt::format("{}: {}", path, what)); }

  bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) {
      fail(path, "expected an object");
      return false;
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
      if (!ok.count(key)) fail(path, fmt::format("unknown field '{}'", key));
    }
    return true;
  }

  const json* field(const json& j, const std::string& path, const char* key, bool required) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    if (it == j.end()) {
      if (required) fail(path, fmt::format("missing field '{}'", key));
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& j, const std::string& path, const char* key, bool required) {
    const json* v = field(j, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      fail(path + "." + key, "expected a number");
      return std::nullopt;
    }
    return v->get<double>();
  }

  std::optional<std::int64_t> integer(const json& j, const std::string& path, const char* key, bool required) {
    const json* v = field(j, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      fail(path + "." + key, "expected an integer");
      return std::nullopt;
    }
    return v->get<std::int64_t>();
  }

  std::optional<std::string> string(const json& j, const std::string& path, const char* key, bool required) {
    const json* v = field(j, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      fail(path + "." + key, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<Vec3> vec3(const json& j, const std::string& path, const char* key, bool required) {
    const json* v = field(j, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_array() || v->size() != 3 || !(*v)[0].is_number() || !(*v)[1].is_number() || !(*v)[2].is_number()) {
      fail(path + "." + key, "expected an array of 3 numbers");
      return std::nullopt;
    }
    return Vec3{(*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<double>()};
  }

  std::optional<Box3> box(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!object(j, path, allowed)) return std::nullopt;
    auto lo = vec3(j, path, "lower", true);
    auto hi = vec3(j, path, "upper", true);
    if (!lo || !hi) return std::nullopt;
    return Box3{*lo, *hi};
  }

  std::vector<Region> regions(const json& root, const char* key) {
    std::vector<Region> out;
    const json* arr = field(root, "mission", key, false);
    if (!arr) return out;
    if (!arr->is_array()) {
      fail(fmt::format("mission.{}", key), "expected an array");
      return out;
    }
    for (std::size_t i = 0; i < arr->size(); ++i) {
      const std::string path = fmt::format("mission.{}[{}]", key, i);
      const json& r = (*arr)[i];
      auto b = box(r, path, {"name", "lower", "upper"});
      auto name = string(r, path, "name", true);
      if (b && name) out.push_back({*name, *b});
    }
    return out;
  }
};

json vec_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

ordered_json box_json(const Box3& b) {
  ordered_json j;
  j["lower"] = vec_json(b.lower);
  j["upper"] = vec_json(b.upper);
  return j;
}

ordered_json region_json(const Region& r) {
  ordered_json j;
  j["name"] = r.name;
  j["lower"] = vec_json(r.box.lower);
  j["upper"] = vec_json(r.box.upper);
  return j;
}

}  // namespace

MissionFile parse_mission_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError({fmt::format("malformed JSON: {}", e.what())});
  }
  Reader rd;
  MissionFile mf;
  MissionSpec& s = mf.spec;
  if (!rd.object(root, "mission",
                 {"version", "workspace", "obstacles", "targets", "stations", "depots", "vehicles", "horizon",
                  "horizon_scale", "install_time", "refill_time", "separation", "dt", "epsilon", "optimizer",
                  "events"})) {
    throw FormatError(rd.issues);
  }
  if (auto v = rd.integer(root, "mission", "version", true); v && *v != kMissionVersion) {
    rd.fail("mission.version", fmt::format("unsupported version {} (expected {})", *v, kMissionVersion));
  }
  if (const json* ws = rd.field(root, "mission", "workspace", true)) {
    if (auto b = rd.box(*ws, "mission.workspace", {"lower", "upper"})) s.workspace = *b;
  }
  s.obstacles = rd.regions(root, "obstacles");
  s.targets = rd.regions(root, "targets");
  s.stations = rd.regions(root, "stations");
  s.depots = rd.regions(root, "depots");

  if (const json* arr = rd.field(root, "mission", "vehicles", true)) {
    if (!arr->is_array()) rd.fail("mission.vehicles", "expected an array");
    for (std::size_t i = 0; arr->is_array() && i < arr->size(); ++i) {
      const std::string path = fmt::format("mission.vehicles[{}]", i);
      const json& vj = (*arr)[i];
      if (!rd.object(vj, path,
                     {"name", "depot", "capacity", "velocity_lower", "velocity_upper", "accel_lower", "accel_upper",
                      "home", "initial"})) {
        continue;
      }
      VehicleSpec v;
      v.name = rd.string(vj, path, "name", false).value_or(fmt::format("v{}", i));
      if (auto d = rd.integer(vj, path, "depot", true)) {
        if (*d < 0) rd.fail(path + ".depot", "must be non-negative");
        else v.depot = static_cast<std::size_t>(*d);
      }
      if (auto c = rd.integer(vj, path, "capacity", true)) v.capacity = static_cast<int>(*c);
      if (auto x = rd.vec3(vj, path, "velocity_lower", true)) v.velocity_lower = *x;
      if (auto x = rd.vec3(vj, path, "velocity_upper", true)) v.velocity_upper = *x;
      if (auto x = rd.vec3(vj, path, "accel_lower", true)) v.accel_lower = *x;
      if (auto x = rd.vec3(vj, path, "accel_upper", true)) v.accel_upper = *x;
      if (const json* h = rd.field(vj, path, "home", false)) v.home = rd.box(*h, path + ".home", {"lower", "upper"});
      if (const json* ini = rd.field(vj, path, "initial", false)) {
        const std::string ip = path + ".initial";
        if (rd.object(*ini, ip, {"position", "velocity", "capacity"})) {
          InitialState st;
          if (auto x = rd.vec3(*ini, ip, "position", true)) st.position = *x;
          if (auto x = rd.vec3(*ini, ip, "velocity", true)) st.velocity = *x;
          if (auto c = rd.integer(*ini, ip, "capacity", true)) st.capacity = static_cast<int>(*c);
          v.initial = st;
        }
      }
      s.vehicles.push_back(std::move(v));
    }
  }

  s.horizon = rd.number(root, "mission", "horizon", false).value_or(0.0);
  s.horizon_scale = rd.number(root, "mission", "horizon_scale", false);
  s.install_time = rd.number(root, "mission", "install_time", true).value_or(0.0);
  s.refill_time = rd.number(root, "mission", "refill_time", true).value_or(0.0);
  s.separation = rd.number(root, "mission", "separation", true).value_or(0.0);
  if (auto dt = rd.number(root, "mission", "dt", false)) s.dt = *dt;
  if (auto eps = rd.number(root, "mission", "epsilon", false)) s.epsilon = *eps;

  if (const json* opt = rd.field(root, "mission", "optimizer", false)) {
    const std::string p = "mission.optimizer";
    if (rd.object(*opt, p, {"beta", "max_iterations", "starts", "seed", "velocity_penalty", "energy_weight"})) {
      auto& o = mf.optimizer;
      o.beta = rd.number(*opt, p, "beta", false);
      if (auto x = rd.integer(*opt, p, "max_iterations", false)) o.max_iterations = static_cast<std::size_t>(std::max<std::int64_t>(*x, 0));
      if (auto x = rd.integer(*opt, p, "starts", false)) o.starts = static_cast<std::size_t>(std::max<std::int64_t>(*x, 0));
      if (auto x = rd.integer(*opt, p, "seed", false)) o.seed = static_cast<std::uint64_t>(*x);
      o.velocity_penalty = rd.number(*opt, p, "velocity_penalty", false);
      o.energy_weight = rd.number(*opt, p, "energy_weight", false);
    }
  }
  if (const json* ev = rd.field(root, "mission", "events", false)) {
    if (!ev->is_array()) rd.fail("mission.events", "expected an array");
    for (std::size_t i = 0; ev->is_array() && i < ev->size(); ++i) {
      const std::string p = fmt::format("mission.events[{}]", i);
      if (!rd.object((*ev)[i], p, {"step", "vehicle", "mode"})) continue;
      auto step = rd.integer((*ev)[i], p, "step", true);
      auto veh = rd.integer((*ev)[i], p, "vehicle", true);
      auto mode = rd.string((*ev)[i], p, "mode", true);
      if (step && *step < 0) rd.fail(p + ".step", "must be non-negative");
      if (veh && *veh < 0) rd.fail(p + ".vehicle", "must be non-negative");
      if (!step || !veh || !mode || *step < 0 || *veh < 0) continue;
      try {
        mf.events.push_back({static_cast<std::size_t>(*step), static_cast<std::size_t>(*veh), failure_mode_from_string(*mode)});
      } catch (const std::invalid_argument& e) {
        rd.fail(p + ".mode", e.what());
      }
    }
  }

  if (!rd.issues.empty()) throw FormatError(rd.issues);
  require_valid(s);
  return mf;
}

MissionFile parse_mission(const std::string& path) { return parse_mission_text(read_file(path)); }

std::string serialize_mission(const MissionSpec& s) {
  ordered_json j;
  j["version"] = kMissionVersion;
  j["workspace"] = box_json(s.workspace);
  auto regions = [](const std::vector<Region>& rs) {
    ordered_json a = ordered_json::array();
    for (const auto& r : rs) a.push_back(region_json(r));
    return a;
  };
  j["obstacles"] = regions(s.obstacles);
  j["targets"] = regions(s.targets);
  j["stations"] = regions(s.stations);
  j["depots"] = regions(s.depots);
  ordered_json vs = ordered_json::array();
  for (const auto& v : s.vehicles) {
    ordered_json vj;
    vj["name"] = v.name;
    vj["depot"] = v.depot;
    vj["capacity"] = v.capacity;
    vj["velocity_lower"] = vec_json(v.velocity_lower);
    vj["velocity_upper"] = vec_json(v.velocity_upper);
    vj["accel_lower"] = vec_json(v.accel_lower);
    vj["accel_upper"] = vec_json(v.accel_upper);
    if (v.home) vj["home"] = box_json(*v.home);
    if (v.initial) {
      ordered_json ini;
      ini["position"] = vec_json(v.initial->position);
      ini["velocity"] = vec_json(v.initial->velocity);
      ini["capacity"] = v.initial->capacity;
      vj["initial"] = ini;
    }
    vs.push_back(vj);
  }
  j["vehicles"] = vs;
  if (s.horizon > 0.0) j["horizon"] = s.horizon;
  if (s.horizon_scale) j["horizon_scale"] = *s.horizon_scale;
  j["install_time"] = s.install_time;
  j["refill_time"] = s.refill_time;
  j["separation"] = s.separation;
  j["dt"] = s.dt;
  j["epsilon"] = s.epsilon;
  return j.dump(2) + "\n";
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(line);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const auto r = std::from_chars(t.data(), t.data() + t.size(), out);
  return r.ec == std::errc() && r.ptr == t.data() + t.size();
}

}  // namespace

std::vector<FailureEvent> parse_events_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::string> issues;
  std::vector<FailureEvent> out;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (!header) {
      if (t != "step,vehicle,mode") issues.push_back(fmt::format("line {}: expected header 'step,vehicle,mode'", lineno));
      header = true;
      continue;
    }
    const auto cols = split(t, ',');
    if (cols.size() != 3) {
      issues.push_back(fmt::format("line {}: expected 3 columns", lineno));
      continue;
    }
    FailureEvent e;
    if (!parse_number(cols[0], e.step)) issues.push_back(fmt::format("line {}: malformed step '{}'", lineno, cols[0]));
    if (!parse_number(cols[1], e.vehicle)) issues.push_back(fmt::format("line {}: malformed vehicle '{}'", lineno, cols[1]));
    try {
      e.mode = failure_mode_from_string(trim(cols[2]));
    } catch (const std::invalid_argument& ex) {
      issues.push_back(fmt::format("line {}: {}", lineno, ex.what()));
    }
    out.push_back(e);
  }
  if (!header) issues.push_back("missing header 'step,vehicle,mode'");
  if (!issues.empty()) throw FormatError(issues);
  return out;
}

std::vector<FailureEvent> parse_events(const std::string& path) { return parse_events_text(read_file(path)); }

std::string format_double(double x) {
  if (x == 0.0) return "0";  // folds -0
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t step_offset,
                          const std::vector<std::size_t>* last_step) {
  os << kTrajectorySchema << " dt=" << format_double(traj.dt) << "\n" << kTrajectoryHeader << "\n";
  const std::size_t n = traj.steps();
  for (std::size_t d = 0; d < traj.vehicles.size(); ++d) {
    const auto& vt = traj.vehicles[d];
    const std::size_t last = last_step ? std::min((*last_step)[d], n) : n;
    for (std::size_t k = 0; k <= last; ++k) {
      const Vec3 a = k < n ? vt.a[k] : Vec3{};
      os << d << ',' << k + step_offset << ',' << format_double(static_cast<double>(k + step_offset) * traj.dt);
      for (int j = 0; j < 3; ++j) os << ',' << format_double(vt.p[k][j]);
      for (int j = 0; j < 3; ++j) os << ',' << format_double(vt.v[k][j]);
      for (int j = 0; j < 3; ++j) os << ',' << format_double(a[j]);
      os << ',' << (vt.c.empty() ? 0 : vt.c[k]) << "\n";
    }
  }
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  write_trajectory_csv(os, traj);
  return os.str();
}

Trajectory read_trajectory_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::string> issues;
  Trajectory t;
  if (!std::getline(is, line) || line.rfind(kTrajectorySchema, 0) != 0) throw FormatError({"missing schema line"});
  const auto pos = line.find("dt=");
  if (pos == std::string::npos || !parse_number(line.substr(pos + 3), t.dt) || !(t.dt > 0.0)) {
    throw FormatError({"schema line lacks a valid dt"});
  }
  if (!std::getline(is, line) || trim(line) != kTrajectoryHeader) throw FormatError({"unexpected column header"});
  struct Row {
    std::size_t d, k;
    double vals[9];
    int c;
  };
  std::vector<Row> rows;
  std::size_t lineno = 2;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto cols = split(trim(line), ',');
    Row r{};
    double tt = 0.0;
    bool ok = cols.size() == 13 && parse_number(cols[0], r.d) && parse_number(cols[1], r.k) && parse_number(cols[2], tt) &&
              parse_number(cols[12], r.c);
    for (int i = 0; ok && i < 9; ++i) ok = parse_number(cols[3 + i], r.vals[i]);
    if (!ok) {
      issues.push_back(fmt::format("line {}: malformed row", lineno));
      continue;
    }
    rows.push_back(r);
  }
  if (!issues.empty()) throw FormatError(issues);
  std::size_t fleet = 0, steps = 0;
  for (const auto& r : rows) {
    fleet = std::max(fleet, r.d + 1);
    steps = std::max(steps, r.k);
  }
  t.vehicles.assign(fleet, {});
  for (auto& vt : t.vehicles) {
    vt.p.assign(steps + 1, Vec3{});
    vt.v.assign(steps + 1, Vec3{});
    vt.a.assign(steps, Vec3{});
    vt.c.assign(steps + 1, 0);
  }
  std::vector<std::vector<char>> seen(fleet, std::vector<char>(steps + 1, 0));
  for (const auto& r : rows) {
    auto& vt = t.vehicles[r.d];
    if (seen[r.d][r.k]++) issues.push_back(fmt::format("duplicate row for vehicle {} step {}", r.d, r.k));
    vt.p[r.k] = {r.vals[0], r.vals[1], r.vals[2]};
    vt.v[r.k] = {r.vals[3], r.vals[4], r.vals[5]};
    if (r.k < steps) vt.a[r.k] = {r.vals[6], r.vals[7], r.vals[8]};
    vt.c[r.k] = r.c;
  }
  for (std::size_t d = 0; d < fleet; ++d) {
    for (std::size_t k = 0; k <= steps; ++k) {
      if (!seen[d][k]) issues.push_back(fmt::format("missing row for vehicle {} step {}", d, k));
    }
  }
  if (!issues.empty()) throw FormatError(issues);
  return t;
}

std::string route_json(const RoutingModel& model, const RouteSolution& sol, const Schedule* schedule,
                       const std::vector<std::string>& warnings) {
  ordered_json j;
  j["status"] = to_string(sol.status);
  j["objective"] = sol.objective;
  j["bound"] = sol.bound;
  j["gap"] = std::isfinite(sol.gap) ? json(sol.gap) : json(nullptr);
  j["root_bound"] = sol.root_bound;
  j["nodes"] = sol.nodes;
  j["cuts"] = sol.cuts.size();
  if (!sol.infeasibility_hint.empty()) j["infeasibility_hint"] = sol.infeasibility_hint;
  j["capacity"] = model.capacity();
  ordered_json verts = ordered_json::array();
  for (const auto& v : model.vertices()) {
    ordered_json vj;
    vj["name"] = v.name;
    vj["kind"] = v.kind == RoutingModel::VertexKind::kDepot ? "depot"
                 : v.kind == RoutingModel::VertexKind::kStation ? "station" : "target";
    vj["position"] = vec_json(v.position);
    verts.push_back(vj);
  }
  j["vertices"] = verts;
  ordered_json w = ordered_json::array();
  for (std::size_t a = 0; a < model.vertices().size(); ++a) {
    ordered_json row = ordered_json::array();
    for (std::size_t b = 0; b < model.vertices().size(); ++b) row.push_back(model.weight(a, b));
    w.push_back(row);
  }
  j["weights"] = w;
  ordered_json routes = ordered_json::array();
  for (std::size_t d = 0; d < sol.routes.size(); ++d) {
    ordered_json rj;
    rj["vehicle"] = d;
    ordered_json trips = ordered_json::array();
    for (const auto& t : sol.routes[d].trips) {
      ordered_json tj;
      tj["start"] = model.vertices()[t.start].name;
      ordered_json tg = ordered_json::array();
      for (auto v : t.targets) tg.push_back(model.vertices()[v].name);
      tj["targets"] = tg;
      tj["end"] = model.vertices()[t.end].name;
      tj["load"] = t.targets.size();
      trips.push_back(tj);
    }
    rj["trips"] = trips;
    routes.push_back(rj);
  }
  j["routes"] = routes;
  if (schedule) {
    ordered_json sj = ordered_json::array();
    for (std::size_t d = 0; d < schedule->vehicles.size(); ++d) {
      const auto& vs = schedule->vehicles[d];
      ordered_json vj;
      vj["vehicle"] = d;
      vj["braking_steps"] = vs.braking.size();
      ordered_json stops = ordered_json::array();
      for (const auto& s : vs.stops) {
        ordered_json st;
        st["kind"] = to_string(s.kind);
        st["region"] = s.region;
        st["position"] = vec_json(s.position);
        st["arrival"] = s.arrival;
        st["dwell"] = s.dwell;
        st["capacity"] = s.capacity;
        stops.push_back(st);
      }
      vj["stops"] = stops;
      vj["home"] = box_json(vs.home);
      vj["required_steps"] = vs.required_steps;
      sj.push_back(vj);
    }
    ordered_json sched;
    sched["required_steps"] = schedule->required_steps;
    sched["route_distance"] = schedule->route_distance;
    sched["extra_distance"] = schedule->extra_distance;
    sched["vehicles"] = sj;
    j["schedule"] = sched;
  }
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

std::string report_json(const RobustnessReport& r, const std::optional<Overflow>& overflow,
                        const std::vector<std::string>& warnings) {
  ordered_json j;
  j["satisfied"] = r.satisfied;
  j["exact"] = r.exact;
  j["smooth"] = r.smooth;
  j["beta"] = r.beta;
  j["epsilon"] = r.epsilon;
  j["binding"] = r.binding;
  ordered_json top = ordered_json::array();
  for (const auto& c : r.top_level) {
    ordered_json cj;
    cj["label"] = c.label;
    cj["exact"] = c.exact;
    top.push_back(cj);
  }
  j["top_level"] = top;
  ordered_json clauses = ordered_json::array();
  for (const auto& c : r.clauses) {
    ordered_json cj;
    cj["node"] = c.node_id;
    cj["label"] = c.label;
    cj["exact"] = c.value;
    clauses.push_back(cj);
  }
  j["clauses"] = clauses;
  if (overflow) {
    ordered_json o;
    o["required_steps"] = overflow->required_steps;
    o["minimal_horizon"] = overflow->minimal_horizon;
    j["overflow"] = o;
  } else {
    j["overflow"] = nullptr;
  }
  j["warnings"] = warnings;
  return j.dump(2) + "\n";
}

std::string plot_data(const Trajectory& traj, const RobustnessReport& report) {
  std::ostringstream os;
  const std::size_t n = traj.steps();
  bool first = true;
  auto block = [&](const std::string& title) {
    if (!first) os << "\n\n";
    first = false;
    os << "# " << title << "\n";
  };
  for (std::size_t d = 0; d < traj.vehicles.size(); ++d) {
    block(fmt::format("position vehicle {}: t px py pz", d));
    for (std::size_t k = 0; k <= n; ++k) {
      const auto& p = traj.vehicles[d].p[k];
      os << format_double(static_cast<double>(k) * traj.dt) << ' ' << format_double(p[0]) << ' ' << format_double(p[1])
         << ' ' << format_double(p[2]) << "\n";
    }
  }
  if (traj.vehicles.size() > 1) {
    std::string cols;
    for (std::size_t a = 0; a < traj.vehicles.size(); ++a) {
      for (std::size_t b = a + 1; b < traj.vehicles.size(); ++b) cols += fmt::format(" d{}{}", a, b);
    }
    block("pairwise distance: t" + cols);
    for (std::size_t k = 0; k <= n; ++k) {
      os << format_double(static_cast<double>(k) * traj.dt);
      for (std::size_t a = 0; a < traj.vehicles.size(); ++a) {
        for (std::size_t b = a + 1; b < traj.vehicles.size(); ++b) {
          os << ' ' << format_double(distance(traj.vehicles[a].p[k], traj.vehicles[b].p[k]));
        }
      }
      os << "\n";
    }
  }
  block("clause robustness: index label exact");
  for (std::size_t i = 0; i < report.top_level.size(); ++i) {
    os << i << " \"" << report.top_level[i].label << "\" " << format_double(report.top_level[i].exact) << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error(fmt::format("cannot write '{}'", path));
  f << content;
  if (!f) throw std::runtime_error(fmt::format("failed writing '{}'", path));
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError({fmt::format("cannot read '{}'", path)});
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace stlplan::io
