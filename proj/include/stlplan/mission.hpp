#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace stlplan {

using Vec3 = std::array<double, 3>;

double distance(const Vec3& a, const Vec3& b);

/// Axis-aligned box, bounds in meters.
struct Box3 {
  Vec3 lower{};
  Vec3 upper{};

  bool valid() const;
  Vec3 centroid() const;
  Vec3 extent() const;
  /// Signed distance-to-face margin: min over the six half-spaces; positive inside.
  double margin(const Vec3& p) const;
  bool contains(const Vec3& p) const { return margin(p) > 0.0; }
  bool contains(const Box3& other) const;
  /// Open-interior overlap.
  bool overlaps(const Box3& other) const;

  friend bool operator==(const Box3&, const Box3&) = default;
};

struct Region {
  std::string name;
  Box3 box;
  friend bool operator==(const Region&, const Region&) = default;
};

/// Explicit starting state, used when a vehicle resumes mid-mission.
struct InitialState {
  Vec3 position{};
  Vec3 velocity{};
  int capacity = 0;
  friend bool operator==(const InitialState&, const InitialState&) = default;
};

struct VehicleSpec {
  std::string name;
  std::size_t depot = 0;  // index into MissionSpec::depots
  int capacity = 1;       // diverters per full magazine
  Vec3 velocity_lower{};
  Vec3 velocity_upper{};
  Vec3 accel_lower{};
  Vec3 accel_upper{};
  std::optional<Box3> home;
  std::optional<InitialState> initial;

  friend bool operator==(const VehicleSpec&, const VehicleSpec&) = default;
};

/// Declarative scenario. Times in seconds, lengths in meters.
struct MissionSpec {
  Box3 workspace;
  std::vector<Region> obstacles;
  std::vector<Region> targets;
  std::vector<Region> stations;
  std::vector<Region> depots;
  std::vector<VehicleSpec> vehicles;

  double horizon = 0.0;                 // T_N; 0 means "derive from horizon_scale"
  std::optional<double> horizon_scale;  // T_N = scale * warm-start makespan
  double install_time = 0.0;
  double refill_time = 0.0;
  double separation = 1.0;
  double dt = 0.5;
  double epsilon = 0.1;

  friend bool operator==(const MissionSpec&, const MissionSpec&) = default;
};

/// Carries every violated invariant, not only the first.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> issues);
  const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

std::vector<std::string> validate(const MissionSpec& spec);
void require_valid(const MissionSpec& spec);

/// Starting position of vehicle d: explicit initial state or depot centroid.
Vec3 start_position(const MissionSpec& spec, std::size_t d);
Vec3 start_velocity(const MissionSpec& spec, std::size_t d);
int start_capacity(const MissionSpec& spec, std::size_t d);

// Time discretisation: interval upper bounds round down, lower bounds up.
std::size_t steps_floor(double seconds, double dt);
std::size_t steps_ceil(double seconds, double dt);
std::size_t horizon_steps(const MissionSpec& spec);
std::size_t install_steps(const MissionSpec& spec);
std::size_t refill_steps(const MissionSpec& spec);

// Joint fleet signal layout: per vehicle px, py, pz, vx, vy, vz, c.
inline constexpr std::size_t kChannelsPerVehicle = 7;
inline constexpr std::size_t kPosChannel = 0;
inline constexpr std::size_t kVelChannel = 3;
inline constexpr std::size_t kCapChannel = 6;

std::string channel_name(std::size_t vehicle, std::size_t slot);
inline std::size_t channel_index(std::size_t vehicle, std::size_t slot) {
  return vehicle * kChannelsPerVehicle + slot;
}
std::vector<std::string> fleet_channel_names(std::size_t vehicles);

}  // namespace stlplan
