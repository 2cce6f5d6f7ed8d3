#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "stlplan/mission.hpp"
#include "stlplan/optimizer.hpp"
#include "stlplan/planner.hpp"
#include "stlplan/routing.hpp"
#include "stlplan/schedule.hpp"
#include "stlplan/simulator.hpp"
#include "stlplan/trajectory.hpp"

namespace stlplan::io {

inline constexpr int kMissionVersion = 1;
inline constexpr const char* kTrajectoryHeader = "vehicle,step,t,px,py,pz,vx,vy,vz,ax,ay,az,c";
inline constexpr const char* kTrajectorySchema = "# stlplan-trajectory v1";

/// Malformed document or schema violations; carries every problem found.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

/// Optimizer fields a mission file may override.
struct OptimizerOverrides {
  std::optional<double> beta;
  std::optional<std::size_t> max_iterations;
  std::optional<std::size_t> starts;
  std::optional<std::uint64_t> seed;
  std::optional<double> velocity_penalty;
  std::optional<double> energy_weight;
  void apply(OptimizerParams& p) const;
};

struct MissionFile {
  MissionSpec spec;
  OptimizerOverrides optimizer;
  std::vector<FailureEvent> events;
};

/// Parses and validates. Throws FormatError listing every schema problem, or
/// ValidationError listing every geometric/semantic one.
MissionFile parse_mission_text(const std::string& text);
MissionFile parse_mission(const std::string& path);

/// Canonical document; parse_mission_text(serialize) reproduces the spec.
std::string serialize_mission(const MissionSpec& spec);

/// Event script: header "step,vehicle,mode", one event per line.
std::vector<FailureEvent> parse_events_text(const std::string& text);
std::vector<FailureEvent> parse_events(const std::string& path);

/// Shortest round-trip decimal form.
std::string format_double(double x);

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::size_t step_offset = 0,
                          const std::vector<std::size_t>* last_step = nullptr);
std::string trajectory_csv(const Trajectory& traj);
/// Reads a CSV written by write_trajectory_csv (every vehicle over every step).
Trajectory read_trajectory_csv(const std::string& text);

std::string route_json(const RoutingModel& model, const RouteSolution& sol, const Schedule* schedule,
                       const std::vector<std::string>& warnings);
std::string report_json(const RobustnessReport& report, const std::optional<Overflow>& overflow,
                        const std::vector<std::string>& warnings);
/// gnuplot data: per-axis position blocks, pairwise distance block, clause bars.
std::string plot_data(const Trajectory& traj, const RobustnessReport& report);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace stlplan::io
