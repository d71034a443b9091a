#pragma once
//
// 2D world and animat body: objects, perception, motion, consumption and the
// slow dynamics of the internal states.
//

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ibenet/cognitive.hpp"
#include "ibenet/network.hpp"

namespace ibenet {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
  bool operator==(const Vec2&) const = default;
};

inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

enum class ObjectKind { Food, Water, Grass, Blob, Obstacle, Spot };

std::string_view to_string(ObjectKind kind);
ObjectKind parse_object_kind(std::string_view name);
bool is_consumable(ObjectKind kind);

inline constexpr double kUnlimitedStock = std::numeric_limits<double>::infinity();

struct WorldObject {
  int id = -1;  // assigned by make_world / insertion when negative
  ObjectKind kind = ObjectKind::Food;
  Vec2 position;
  double radius = 0.0;
  double quality = 1.0;
  double stock = kUnlimitedStock;
};

struct AnimatState {
  Vec2 position;
  double heading = 0.0;
  double hunger = 0.0;
  double thirst = 0.0;
  double fatigue = 0.0;
  double strength = 1.0;
  double lucidity = 1.0;
  double v_max = 1.0;
};

struct Rates {
  double hunger = 0.002;
  double thirst = 0.002;
  double eat = 0.05;
  double drink = 0.05;
  double fatigue = 0.002;
  double rest = 0.03;
  double quality = 0.005;
};

struct Bounds {
  Vec2 min{0.0, 0.0};
  Vec2 max{100.0, 100.0};

  bool contains(Vec2 p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
};

struct WorldParams {
  Bounds bounds;
  double perception_radius = 20.0;  // at full lucidity
  double contact_range = 1.0;
  Rates rates;
};

enum class EventOp { Insert, Remove };

struct ScheduledEvent {
  std::int64_t tick = 0;
  EventOp op = EventOp::Insert;
  WorldObject object;  // Remove matches object.id
  bool applied = false;
};

/// Deterministic uniform source on top of mt19937_64; the mapping to doubles
/// is fixed here so trajectories do not depend on the standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}
  double uniform(double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

struct ActionOutcome {
  bool fault = false;  // consummatory action with nothing in contact range
  double moved = 0.0;
  double consumed = 0.0;
  double quality = 0.0;
  std::optional<int> consumed_object;
};

struct WorldState {
  WorldParams params;
  std::vector<WorldObject> objects;
  AnimatState animat;
  std::int64_t tick = 0;
  std::uint64_t rng_seed = 0;
  Rng rng;
  std::vector<ScheduledEvent> events;
  int next_object_id = 0;
};

/// Validates and assembles a world at tick 0, applying tick-0 events.
WorldState make_world(const WorldParams& params, const AnimatState& animat,
                      std::vector<WorldObject> objects, std::vector<ScheduledEvent> events,
                      std::uint64_t seed);

/// quality * max(0, 1 - d/R); zero at and beyond R.
double perceived_certainty(double quality, double distance, double radius);

double surface_distance(Vec2 from, const WorldObject& obj);

SensorFrame sense(const WorldState& world);

ActionOutcome apply_action(WorldState& world, const PotentialAction& action);

AnimatState update_internal_states(const AnimatState& animat, const PotentialAction& action,
                                   const ActionOutcome& outcome, const Rates& rates);

/// Applies pending events, the action and internal-state dynamics, drops
/// exhausted consumables, advances the tick and then applies the events
/// scheduled for the new tick, so sense() at tick t already sees them.
ActionOutcome world_step(WorldState& world, const PotentialAction& action);

const WorldObject* find_object(const WorldState& world, int id);

}  // namespace ibenet
