#include <fstream>
#include <set>
#include <sstream>

#include "ibenet/harness.hpp"
#include "json.hpp"

namespace ibenet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw LoadError(path + ": " + what);
}

// Field access with the JSON path carried along for error messages.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  void allow_only(std::initializer_list<const char*> keys) const {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, v] : j_.items()) {
      if (!allowed.contains(k)) fail(child(k), "unknown field");
    }
  }

  bool has(const char* key) const { return j_.contains(key); }
  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json& at(const char* key) const {
    if (!j_.contains(key)) fail(child(key), "missing required field");
    return j_.at(key);
  }

  double number(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number()) fail(child(key), "expected a number");
    return v.get<double>();
  }
  double number(const char* key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::int64_t integer(const char* key) const {
    const auto& v = at(key);
    if (!v.is_number_integer()) fail(child(key), "expected an integer");
    return v.get<std::int64_t>();
  }

  std::string text(const char* key) const {
    const auto& v = at(key);
    if (!v.is_string()) fail(child(key), "expected a string");
    return v.get<std::string>();
  }
  std::string text(const char* key, std::string fallback) const {
    return has(key) ? text(key) : fallback;
  }

  Node object(const char* key) const { return {at(key), child(key)}; }

  const json& array(const char* key) const {
    const auto& v = at(key);
    if (!v.is_array()) fail(child(key), "expected an array");
    return v;
  }

  Vec2 point(const char* key) const {
    const auto& v = array(key);
    if (v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      fail(child(key), "expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  const std::string& path() const { return path_; }
  const json& raw() const { return j_; }

 private:
  const json& j_;
  std::string path_;
};

std::map<std::string, double> number_map(const Node& n) {
  std::map<std::string, double> out;
  for (const auto& [k, v] : n.raw().items()) {
    if (!v.is_number()) fail(n.child(k), "expected a number");
    out[k] = v.get<double>();
  }
  return out;
}

CongruenceBehaviour parse_drive(const Node& n) {
  n.allow_only({"id", "couplings", "consummatory"});
  CongruenceBehaviour d;
  d.drive_id = n.text("id");
  d.couplings = number_map(n.object("couplings"));
  const std::string fallback =
      d.drive_id == "thirst" ? "drink" : d.drive_id == "fatigue" ? "rest" : "eat";
  d.consummatory = n.text("consummatory", fallback);
  return d;
}

NetworkConfig parse_network(const Node& n) {
  n.allow_only({"alpha", "alpha_overrides", "lambda", "rho", "contact_range", "g_runaway",
                "g_avoid", "drives"});
  NetworkConfig c;
  c.alpha = n.number("alpha");
  if (n.has("alpha_overrides")) c.alpha_overrides = number_map(n.object("alpha_overrides"));
  c.lambda = n.number("lambda", c.lambda);
  c.rho = n.number("rho", c.rho);
  c.contact_range = n.number("contact_range", c.contact_range);
  c.g_runaway = n.number("g_runaway", c.g_runaway);
  c.g_avoid = n.number("g_avoid", c.g_avoid);
  const auto& drives = n.array("drives");
  for (std::size_t i = 0; i < drives.size(); ++i) {
    c.drives.push_back(parse_drive(Node(drives[i], n.child("drives") + "[" + std::to_string(i) + "]")));
  }
  return c;
}

Rates parse_rates(const Node& n) {
  n.allow_only({"hunger", "thirst", "eat", "drink", "fatigue", "rest", "quality"});
  Rates r;
  r.hunger = n.number("hunger", r.hunger);
  r.thirst = n.number("thirst", r.thirst);
  r.eat = n.number("eat", r.eat);
  r.drink = n.number("drink", r.drink);
  r.fatigue = n.number("fatigue", r.fatigue);
  r.rest = n.number("rest", r.rest);
  r.quality = n.number("quality", r.quality);
  for (double v : {r.hunger, r.thirst, r.eat, r.drink, r.fatigue, r.rest, r.quality}) {
    if (!(v >= 0.0)) fail(n.path(), "rates must be >= 0");
  }
  return r;
}

WorldParams parse_world(const Node& n) {
  n.allow_only({"bounds", "perception_radius", "rates"});
  WorldParams w;
  const auto& b = n.array("bounds");
  if (b.size() != 4) fail(n.child("bounds"), "expected [xmin, ymin, xmax, ymax]");
  for (const auto& v : b) {
    if (!v.is_number()) fail(n.child("bounds"), "expected numbers");
  }
  w.bounds = {{b[0].get<double>(), b[1].get<double>()}, {b[2].get<double>(), b[3].get<double>()}};
  w.perception_radius = n.number("perception_radius", w.perception_radius);
  if (n.has("rates")) w.rates = parse_rates(n.object("rates"));
  return w;
}

AnimatState parse_animat(const Node& n) {
  n.allow_only({"position", "heading", "hunger", "thirst", "fatigue", "strength", "lucidity",
                "v_max"});
  AnimatState a;
  a.position = n.point("position");
  a.heading = n.number("heading", 0.0);
  a.hunger = n.number("hunger", 0.0);
  a.thirst = n.number("thirst", 0.0);
  a.fatigue = n.number("fatigue", 0.0);
  a.strength = n.number("strength", 1.0);
  a.lucidity = n.number("lucidity", 1.0);
  a.v_max = n.number("v_max", 1.0);
  return a;
}

WorldObject parse_object(const Node& n) {
  n.allow_only({"id", "kind", "position", "radius", "quality", "stock"});
  WorldObject o;
  if (n.has("id")) o.id = static_cast<int>(n.integer("id"));
  try {
    o.kind = parse_object_kind(n.text("kind"));
  } catch (const ConfigError& e) {
    fail(n.child("kind"), e.what());
  }
  o.position = n.point("position");
  o.radius = n.number("radius", 0.0);
  o.quality = n.number("quality", 1.0);
  o.stock = n.number("stock", kUnlimitedStock);
  return o;
}

ScheduledEvent parse_event(const Node& n) {
  n.allow_only({"tick", "op", "object", "id"});
  ScheduledEvent ev;
  ev.tick = n.integer("tick");
  const auto op = n.text("op");
  if (op == "insert") {
    ev.op = EventOp::Insert;
    ev.object = parse_object(n.object("object"));
  } else if (op == "remove") {
    ev.op = EventOp::Remove;
    ev.object.id = static_cast<int>(n.integer("id"));
  } else {
    fail(n.child("op"), "expected insert or remove");
  }
  return ev;
}

}  // namespace

void Scenario::validate() const {
  if (max_ticks <= 0) fail("max_ticks", "must be > 0");
  if (seeds.empty()) fail("seeds", "must not be empty");
  try {
    network.validate();
  } catch (const ConfigError& e) {
    fail("network", e.what());
  }
  for (std::size_t i = 0; i < network.drives.size(); ++i) {
    for (const auto& [kind, fa] : network.drives[i].couplings) {
      try {
        parse_object_kind(kind);
      } catch (const ConfigError&) {
        fail("network.drives[" + std::to_string(i) + "].couplings." + kind, "unknown stimulus kind");
      }
    }
  }
  try {
    parse_object_kind(rtime.stimulus);
  } catch (const ConfigError&) {
    fail("rtime.stimulus", "unknown stimulus kind '" + rtime.stimulus + "'");
  }
  try {
    make_world(world, animat, objects, events, seeds.front());
  } catch (const ConfigError& e) {
    fail("world", e.what());
  }
}

Scenario parse_scenario(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("<document>", e.what());
  }
  const Node root(j, "");
  root.allow_only({"name", "max_ticks", "seeds", "rtime", "network", "world", "animat", "objects",
                   "events"});
  Scenario s;
  s.name = root.text("name");
  s.max_ticks = root.integer("max_ticks");
  for (const auto& v : root.array("seeds")) {
    if (!v.is_number_unsigned()) fail("seeds", "expected non-negative integers");
    s.seeds.push_back(v.get<std::uint64_t>());
  }
  if (root.has("rtime")) {
    const auto q = root.object("rtime");
    q.allow_only({"stimulus", "action"});
    s.rtime = {q.text("stimulus"), q.text("action")};
  }
  s.network = parse_network(root.object("network"));
  s.world = parse_world(root.object("world"));
  s.world.contact_range = s.network.contact_range;
  s.animat = parse_animat(root.object("animat"));
  if (root.has("objects")) {
    const auto& objs = root.array("objects");
    for (std::size_t i = 0; i < objs.size(); ++i) {
      s.objects.push_back(parse_object(Node(objs[i], "objects[" + std::to_string(i) + "]")));
    }
  }
  if (root.has("events")) {
    const auto& evs = root.array("events");
    for (std::size_t i = 0; i < evs.size(); ++i) {
      s.events.push_back(parse_event(Node(evs[i], "events[" + std::to_string(i) + "]")));
    }
  }
  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string() + ": cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const LoadError& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
}

}  // namespace ibenet
