#include "ibenet/animat.hpp"

#include <algorithm>
#include <array>
#include <numbers>

namespace ibenet {

namespace {

constexpr std::array<std::string_view, 6> kKindNames = {"food", "water", "grass",
                                                         "blob", "obstacle", "spot"};
constexpr double kDeg = std::numbers::pi / 180.0;
constexpr int kResolveIterations = 4;

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void require_unit(double v, const std::string& what) {
  if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(what + " must lie in [0,1]");
}

double perception_range(const WorldState& world) {
  return world.params.perception_radius * world.animat.lucidity;
}

bool eats(ObjectKind kind) { return kind == ObjectKind::Food || kind == ObjectKind::Grass; }

// Strongest currently perceived object of `kind`.
const WorldObject* strongest_perceived(const WorldState& world, ObjectKind kind) {
  const double range = perception_range(world);
  const WorldObject* best = nullptr;
  double best_c = 0.0;
  for (const auto& obj : world.objects) {
    if (obj.kind != kind) continue;
    const double c =
        perceived_certainty(obj.quality, surface_distance(world.animat.position, obj), range);
    if (c > best_c) {
      best = &obj;
      best_c = c;
    }
  }
  return best;
}

const WorldObject* nearest_perceived(const WorldState& world, ObjectKind kind) {
  const double range = perception_range(world);
  const WorldObject* best = nullptr;
  double best_d = range;
  for (const auto& obj : world.objects) {
    if (obj.kind != kind) continue;
    const double d = surface_distance(world.animat.position, obj);
    if (d < best_d) {
      best = &obj;
      best_d = d;
    }
  }
  return best;
}

const WorldObject* resolve_target(const WorldState& world, const PotentialAction& action,
                                  ObjectKind kind, bool strongest) {
  if (action.target_object) {
    const auto* obj = find_object(world, *action.target_object);
    if (obj != nullptr && obj->kind == kind) return obj;
  }
  return strongest ? strongest_perceived(world, kind) : nearest_perceived(world, kind);
}

double bearing_to(Vec2 from, const WorldObject& obj) {
  const Vec2 d = obj.position - from;
  return std::atan2(d.y, d.x);
}

bool inside_obstacle(const WorldState& world, Vec2 p) {
  return std::any_of(world.objects.begin(), world.objects.end(), [&](const auto& obj) {
    return obj.kind == ObjectKind::Obstacle && (p - obj.position).norm() < obj.radius;
  });
}

// Moves the animat, slides it out of obstacles and keeps it inside bounds.
// Returns true when the bounds clipped the motion.
bool move(WorldState& world, double distance) {
  auto& a = world.animat;
  Vec2 p = a.position + unit(a.heading) * distance;
  const auto& b = world.params.bounds;
  bool clipped = false;
  for (int iter = 0; iter < kResolveIterations; ++iter) {
    for (const auto& obj : world.objects) {
      if (obj.kind != ObjectKind::Obstacle || obj.radius <= 0.0) continue;
      const Vec2 off = p - obj.position;
      const double r = off.norm();
      if (r >= obj.radius) continue;
      const Vec2 dir = r > 0.0 ? off * (1.0 / r) : unit(a.heading + std::numbers::pi);
      p = obj.position + dir * (obj.radius * (1.0 + 1e-9));
    }
    const Vec2 q{std::clamp(p.x, b.min.x, b.max.x), std::clamp(p.y, b.min.y, b.max.y)};
    if (q == p) break;
    clipped = true;
    p = q;
  }
  // Wedged between an obstacle and a wall (or two obstacles): stay put.
  if (inside_obstacle(world, p) || !b.contains(p)) return true;
  a.position = p;
  return clipped;
}

void reflect_heading_at_bounds(WorldState& world) {
  auto& a = world.animat;
  const auto& b = world.params.bounds;
  Vec2 h = unit(a.heading);
  if ((a.position.x <= b.min.x && h.x < 0) || (a.position.x >= b.max.x && h.x > 0)) h.x = -h.x;
  if ((a.position.y <= b.min.y && h.y < 0) || (a.position.y >= b.max.y && h.y > 0)) h.y = -h.y;
  a.heading = std::atan2(h.y, h.x);
}

ActionOutcome consume(WorldState& world, const PotentialAction& action, bool eating) {
  ActionOutcome out;
  const double rate = eating ? world.params.rates.eat : world.params.rates.drink;
  const double contact = world.params.contact_range;
  const Vec2 here = world.animat.position;
  auto matches = [&](const WorldObject& obj) {
    return (eating ? eats(obj.kind) : obj.kind == ObjectKind::Water) &&
           surface_distance(here, obj) <= contact && obj.stock > 0.0;
  };

  WorldObject* source = nullptr;
  for (auto& obj : world.objects) {
    if (!matches(obj)) continue;
    if (action.target_object && obj.id == *action.target_object) {
      source = &obj;
      break;
    }
    if (source == nullptr ||
        surface_distance(here, obj) < surface_distance(here, *source)) {
      source = &obj;
    }
  }
  if (source == nullptr) {
    out.fault = true;
    return out;
  }
  out.consumed = std::min(source->stock, rate);
  source->stock -= out.consumed;
  out.quality = source->quality;
  out.consumed_object = source->id;
  return out;
}

void apply_due_events(WorldState& world) {
  for (auto& ev : world.events) {
    if (ev.applied || ev.tick > world.tick) continue;
    ev.applied = true;
    if (ev.op == EventOp::Insert) {
      WorldObject obj = ev.object;
      if (obj.id < 0) obj.id = world.next_object_id++;
      world.next_object_id = std::max(world.next_object_id, obj.id + 1);
      world.objects.push_back(obj);
    } else {
      std::erase_if(world.objects, [&](const auto& o) { return o.id == ev.object.id; });
    }
  }
}

void validate_object(const WorldObject& obj, const std::string& where) {
  require_unit(obj.quality, where + ".quality");
  if (!(obj.radius >= 0.0)) throw ConfigError(where + ".radius must be >= 0");
  if (!(obj.stock >= 0.0)) throw ConfigError(where + ".stock must be >= 0");
  if (obj.kind == ObjectKind::Grass && obj.quality > 0.5) {
    throw ConfigError(where + ": grass quality must not exceed 0.5");
  }
}

}  // namespace

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

std::string_view to_string(ObjectKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

ObjectKind parse_object_kind(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<ObjectKind>(i);
  }
  throw ConfigError("unknown object kind '" + std::string(name) + "'");
}

bool is_consumable(ObjectKind kind) {
  return kind == ObjectKind::Food || kind == ObjectKind::Water || kind == ObjectKind::Grass;
}

double Rng::uniform(double lo, double hi) {
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

WorldState make_world(const WorldParams& params, const AnimatState& animat,
                      std::vector<WorldObject> objects, std::vector<ScheduledEvent> events,
                      std::uint64_t seed) {
  const auto& b = params.bounds;
  if (!(b.min.x < b.max.x && b.min.y < b.max.y)) throw ConfigError("world.bounds are empty");
  if (!(params.perception_radius > 0.0)) throw ConfigError("world.perception_radius must be > 0");
  if (!(params.contact_range > 0.0)) throw ConfigError("world.contact_range must be > 0");
  if (!b.contains(animat.position)) throw ConfigError("animat.position lies outside the bounds");
  require_unit(animat.hunger, "animat.hunger");
  require_unit(animat.thirst, "animat.thirst");
  require_unit(animat.fatigue, "animat.fatigue");
  require_unit(animat.strength, "animat.strength");
  require_unit(animat.lucidity, "animat.lucidity");
  if (!(animat.v_max > 0.0)) throw ConfigError("animat.v_max must be > 0");

  WorldState w;
  w.params = params;
  w.animat = animat;
  w.rng_seed = seed;
  w.rng = Rng(seed);
  for (const auto& o : objects) w.next_object_id = std::max(w.next_object_id, o.id + 1);
  for (std::size_t i = 0; i < objects.size(); ++i) {
    auto& obj = objects[i];
    const std::string where = "objects[" + std::to_string(i) + "]";
    validate_object(obj, where);
    if (!is_consumable(obj.kind)) obj.stock = kUnlimitedStock;
    if ((animat.position - obj.position).norm() <= obj.radius) {
      throw ConfigError(where + " overlaps the animat spawn point");
    }
    if (obj.id < 0) obj.id = w.next_object_id++;
  }
  for (std::size_t i = 0; i < events.size(); ++i) {
    auto& ev = events[i];
    if (ev.tick < 0) throw ConfigError("events[" + std::to_string(i) + "].tick must be >= 0");
    if (ev.op == EventOp::Insert) {
      validate_object(ev.object, "events[" + std::to_string(i) + "].object");
      if (!is_consumable(ev.object.kind)) ev.object.stock = kUnlimitedStock;
    }
  }
  w.objects = std::move(objects);
  w.events = std::move(events);
  apply_due_events(w);
  return w;
}

double perceived_certainty(double quality, double distance, double radius) {
  if (!(radius > 0.0)) return 0.0;
  return quality * std::max(0.0, 1.0 - distance / radius);
}

double surface_distance(Vec2 from, const WorldObject& obj) {
  return std::max(0.0, (obj.position - from).norm() - obj.radius);
}

const WorldObject* find_object(const WorldState& world, int id) {
  const auto it = std::find_if(world.objects.begin(), world.objects.end(),
                               [id](const auto& o) { return o.id == id; });
  return it == world.objects.end() ? nullptr : &*it;
}

SensorFrame sense(const WorldState& world) {
  SensorFrame frame;
  const double range = perception_range(world);
  const Vec2 here = world.animat.position;
  for (const auto& obj : world.objects) {
    const double d = surface_distance(here, obj);
    const double c = perceived_certainty(obj.quality, d, range);
    if (c <= 0.0) continue;
    frame.external.push_back({std::string(to_string(obj.kind)), obj.id, c, bearing_to(here, obj), d});
  }
  // Strongest first; equal strength falls back to object id.
  std::stable_sort(frame.external.begin(), frame.external.end(), [](const auto& a, const auto& b) {
    return a.certainty != b.certainty ? a.certainty > b.certainty : a.object_id < b.object_id;
  });
  frame.internal = {{"hunger", world.animat.hunger},
                    {"thirst", world.animat.thirst},
                    {"fatigue", world.animat.fatigue}};
  return frame;
}

ActionOutcome apply_action(WorldState& world, const PotentialAction& action) {
  auto& a = world.animat;
  const double speed = a.v_max * a.strength;
  const Vec2 start = a.position;
  ActionOutcome out;

  switch (action.kind) {
    case ActionKind::Wander:
      a.heading = wrap_angle(a.heading + world.rng.uniform(-30.0 * kDeg, 30.0 * kDeg));
      if (move(world, 0.5 * speed)) reflect_heading_at_bounds(world);
      break;
    case ActionKind::ExploreFor:
      a.heading = wrap_angle(a.heading + world.rng.uniform(-10.0 * kDeg, 10.0 * kDeg));
      if (move(world, speed)) reflect_heading_at_bounds(world);
      break;
    case ActionKind::Approach: {
      const auto* target =
          resolve_target(world, action, parse_object_kind(action.target_kind), true);
      if (target == nullptr) break;
      a.heading = bearing_to(a.position, *target);
      move(world, std::min(speed, surface_distance(a.position, *target)));
      break;
    }
    case ActionKind::Runaway: {
      if (const auto* blob = resolve_target(world, action, ObjectKind::Blob, true)) {
        a.heading = wrap_angle(bearing_to(a.position, *blob) + std::numbers::pi);
      }
      move(world, speed);
      break;
    }
    case ActionKind::AvoidObstacles: {
      if (const auto* obs = resolve_target(world, action, ObjectKind::Obstacle, false)) {
        const double b = bearing_to(a.position, *obs);
        const double left = wrap_angle(b + std::numbers::pi / 2);
        const double right = wrap_angle(b - std::numbers::pi / 2);
        a.heading = std::abs(wrap_angle(left - a.heading)) <= std::abs(wrap_angle(right - a.heading))
                        ? left
                        : right;
      }
      move(world, speed);
      break;
    }
    case ActionKind::Eat:
      out = consume(world, action, true);
      break;
    case ActionKind::Drink:
      out = consume(world, action, false);
      break;
    case ActionKind::Rest:
      break;
  }
  out.moved = (a.position - start).norm();
  return out;
}

AnimatState update_internal_states(const AnimatState& animat, const PotentialAction& action,
                                   const ActionOutcome& outcome, const Rates& rates) {
  AnimatState s = animat;
  const double satisfied = outcome.consumed * outcome.quality;
  s.hunger += rates.hunger;
  s.thirst += rates.thirst;
  if (action.kind == ActionKind::Eat) s.hunger -= satisfied;
  if (action.kind == ActionKind::Drink) s.thirst -= satisfied;
  s.fatigue += rates.fatigue * (outcome.moved / s.v_max);
  if (action.kind == ActionKind::Rest) s.fatigue -= rates.rest;
  s.hunger = clamp01(s.hunger);
  s.thirst = clamp01(s.thirst);
  s.fatigue = clamp01(s.fatigue);
  s.strength = clamp01(s.strength + rates.quality * (0.5 - s.hunger));
  s.lucidity = clamp01(s.lucidity + rates.quality * (0.5 - std::max(s.thirst, s.fatigue)));
  return s;
}

ActionOutcome world_step(WorldState& world, const PotentialAction& action) {
  apply_due_events(world);
  const auto outcome = apply_action(world, action);
  world.animat = update_internal_states(world.animat, action, outcome, world.params.rates);
  std::erase_if(world.objects,
                [](const auto& o) { return is_consumable(o.kind) && o.stock <= 0.0; });
  ++world.tick;
  apply_due_events(world);
  return outcome;
}

}  // namespace ibenet
