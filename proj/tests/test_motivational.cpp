#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "ibenet/motivational.hpp"

using namespace ibenet;

namespace {

CongruenceBehaviour hunger(double alpha) {
  return {"hunger", alpha, {{"food", 1.0}, {"grass", 0.5}}, "eat"};
}

CongruenceBehaviour thirst(double alpha) { return {"thirst", alpha, {{"water", 1.0}}, "drink"}; }

SolutionElement elem(std::string id, LevelId level, double c, std::string kind = {}) {
  SolutionElement e;
  e.id = std::move(id);
  e.level = level;
  e.certainty = Certainty(c);
  if (!kind.empty()) e.attrs["kind"] = kind;
  return e;
}

NodeState motivational_node(const std::vector<CongruenceBehaviour>& drives, double lambda) {
  NodeState m(NodeId::Motivational);
  m.behaviours.push_back(make_congruence_behaviour(drives));
  m.behaviours.push_back(make_preference_selector(drives, lambda));
  return m;
}

}  // namespace

TEST_CASE("evaluate_congruence examples") {
  CHECK(evaluate_congruence(hunger(0.7), 0.0, {{"food", 0.9}, {"grass", 0.4}}, 0.0) == 0.0);
  CHECK(evaluate_congruence({"hunger", 0.5, {{"food", 1.0}}, "eat"}, 0.8, {{"food", 0.6}}, 0.1) ==
        doctest::Approx(0.98).epsilon(1e-12));
  CHECK(evaluate_congruence(hunger(1.0), 0.7, {{"food", 0.0}, {"grass", 0.0}}, 0.0) ==
        doctest::Approx(0.7).epsilon(1e-15));
  // The congruence is not clamped here.
  CHECK(evaluate_congruence(hunger(1.0), 1.0, {{"food", 1.0}}, 0.3) == doctest::Approx(2.3));
}

TEST_CASE("evaluate_congruence input handling") {
  std::vector<std::string> ignored;
  const double v = evaluate_congruence(thirst(0.0), 0.5, {{"water", 0.4}, {"food", 0.9}}, 0.0,
                                       &ignored);
  CHECK(v == doctest::Approx(0.2));
  CHECK(ignored == std::vector<std::string>{"food"});

  CHECK_THROWS_AS(evaluate_congruence(thirst(0.0), 1.2, {}, 0.0), InputError);
  CHECK_THROWS_AS(evaluate_congruence(thirst(0.0), 0.5, {{"water", -0.1}}, 0.0), InputError);
  CHECK_THROWS_AS(evaluate_congruence(thirst(0.0), 0.5, {}, 1.5), InputError);
}

TEST_CASE("congruence_condition") {
  CHECK_FALSE(congruence_condition(hunger(0.0), 0.9, {{"food", 0.0}}));
  CHECK(congruence_condition(hunger(0.9), 0.9, {{"food", 0.0}}));
  CHECK_FALSE(congruence_condition(hunger(0.9), 0.0, {{"food", 1.0}}));
  CHECK(congruence_condition(hunger(0.0), 0.9, {{"grass", 0.2}}));
  // Signals not coupled to the drive do not satisfy the alpha = 0 branch.
  CHECK_FALSE(congruence_condition(hunger(0.0), 0.9, {{"water", 1.0}}));
}

TEST_CASE("behaviour validation") {
  CHECK_NOTHROW(hunger(0.3).validate());
  CHECK_THROWS_AS(hunger(1.5).validate(), ConfigError);
  CHECK_THROWS_AS(hunger(-0.1).validate(), ConfigError);
  CHECK_THROWS_AS((CongruenceBehaviour{"hunger", 0.1, {}, "eat"}.validate()), ConfigError);
  CHECK_THROWS_AS((CongruenceBehaviour{"hunger", 0.1, {{"food", -1.0}}, "eat"}.validate()),
                  ConfigError);
  CHECK_THROWS_AS((CongruenceBehaviour{"hunger", 0.1, {{"food", 1.0}}, "sleep"}.validate()),
                  ConfigError);
  CHECK(hunger(0.0).primary_stimulus() == "food");
  CHECK((CongruenceBehaviour{"x", 0, {{"b", 1.0}, {"a", 1.0}}, "eat"}.primary_stimulus()) == "a");
}

TEST_CASE("update_drive") {
  const DriveState d{"hunger", Certainty{}, 0.3};
  CHECK(update_drive(d, Certainty(0.8), Certainty(0.5)).value.value() == doctest::Approx(0.24));
  for (double lambda : {0.0, 0.3, 0.9}) {
    for (double prev : {0.0, 0.4, 1.0}) {
      CHECK(update_drive({"h", Certainty(0.7), lambda}, Certainty(prev), Certainty(0.0))
                .value.value() == 0.0);
    }
  }
  CHECK(update_drive(d, Certainty(0.0), Certainty(1.0)).value.value() == 0.0);
}

TEST_CASE("select_consummatory_preference") {
  const std::vector<CongruentElement> two{{"hunger", Certainty(0.98)}, {"thirst", Certainty(0.31)}};
  CHECK(select_consummatory_preference(two) == "hunger");
  CHECK_FALSE(select_consummatory_preference({}).has_value());
  const std::vector<CongruentElement> zeros{{"hunger", Certainty(0.0)}, {"thirst", Certainty(0.0)}};
  CHECK_FALSE(select_consummatory_preference(zeros).has_value());
  const std::vector<CongruentElement> tie{{"eat", Certainty(0.5)}, {"drink", Certainty(0.5)}};
  CHECK(select_consummatory_preference(tie) == "drink");
}

TEST_CASE("aggregate_stimuli keeps the strongest instance per kind") {
  const std::vector<SolutionElement> p{
      elem("food#1", CognitiveLevel::PerceptualPersistents, 0.3, "food"),
      elem("food#2", CognitiveLevel::PerceptualPersistents, 0.6, "food"),
      elem("water#3", CognitiveLevel::PerceptualPersistents, 0.2, "water")};
  const auto s = aggregate_stimuli(p);
  CHECK(s.size() == 2);
  CHECK(s.at("food") == 0.6);
  CHECK(s.at("water") == 0.2);
}

TEST_CASE("gating property at alpha = 0") {
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution zero(0.25);
  int violations = 0;
  for (int i = 0; i < 10000; ++i) {
    CongruenceBehaviour b{"d", 0.0, {}, "eat"};
    StimulusSignals s;
    double coupled = 0.0;
    const int n = 1 + i % 4;
    for (int j = 0; j < n; ++j) {
      const std::string k = "s" + std::to_string(j);
      b.couplings[k] = zero(gen) ? 0.0 : u(gen);
      s[k] = zero(gen) ? 0.0 : u(gen);
      coupled += b.couplings[k] * s[k];
    }
    const double o_e = zero(gen) ? 0.0 : u(gen);
    const bool positive = evaluate_congruence(b, o_e, s, 0.0) > 0.0;
    if (positive != (o_e > 0.0 && coupled > 0.0)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("monotonicity in every input") {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    CongruenceBehaviour b{"d", u(gen), {{"a", 2.0 * u(gen)}, {"b", u(gen)}}, "eat"};
    StimulusSignals s{{"a", u(gen)}, {"b", u(gen)}};
    const double o_e = u(gen), o_d = u(gen);
    const double base = evaluate_congruence(b, o_e, s, o_d);

    const double up_e = o_e + (1.0 - o_e) * u(gen);
    CHECK(evaluate_congruence(b, up_e, s, o_d) >= base);
    const double up_d = o_d + (1.0 - o_d) * u(gen);
    CHECK(evaluate_congruence(b, o_e, s, up_d) >= base);
    auto s2 = s;
    s2["b"] += (1.0 - s2["b"]) * u(gen);
    CHECK(evaluate_congruence(b, o_e, s2, o_d) >= base);
    auto b2 = b;
    b2.alpha += (1.0 - b2.alpha) * u(gen);
    CHECK(evaluate_congruence(b2, o_e, s, o_d) >= base);
  }
}

TEST_CASE("selector is invariant under positive rescaling") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    std::vector<CongruentElement> c;
    const int n = 1 + i % 5;
    for (int k = 0; k < n; ++k) {
      // Coarse grid so ties actually occur.
      c.push_back({"d" + std::to_string(k), Certainty(std::round(u(gen) * 8.0) / 10.0)});
    }
    const double scale = 0.05 + 1.2 * u(gen);
    auto scaled = c;
    for (auto& e : scaled) e.certainty = Certainty(e.certainty.value() * scale);
    CHECK(select_consummatory_preference(c) == select_consummatory_preference(scaled));
  }
}

TEST_CASE("congruence behaviour on the node") {
  const std::vector<CongruenceBehaviour> drives{hunger(0.5), thirst(0.5)};
  auto m = motivational_node(drives, 0.3);
  post_element(m, elem("hunger", MotivationalLevel::InternalPerceptions, 0.8));
  post_element(m, elem("thirst", MotivationalLevel::InternalPerceptions, 0.2));
  post_element(m, elem("food#4", MotivationalLevel::ExternalPerceptions, 0.6, "food"));
  run_cycle(m, {});

  const auto* c = find_element(m, MotivationalLevel::Congruents, "hunger");
  REQUIRE(c != nullptr);
  CHECK(c->certainty.value() == doctest::Approx(0.8 * (0.5 + 0.6)));
  const auto* t = find_element(m, MotivationalLevel::Congruents, "thirst");
  REQUIRE(t != nullptr);
  CHECK(t->certainty.value() == doctest::Approx(0.1));

  const auto* pref = find_element(m, MotivationalLevel::Drive, kPreferenceElement);
  REQUIRE(pref != nullptr);
  CHECK(pref->text("drive") == "hunger");
  CHECK(find_element(m, MotivationalLevel::Drive, "hunger")->certainty.value() ==
        doctest::Approx(0.3 * 0.88));
  CHECK(find_element(m, MotivationalLevel::Drive, "thirst")->certainty.value() ==
        doctest::Approx(0.03));

  // Next cycle: the drive feeds back and the stored value is clamped.
  run_cycle(m, {});
  c = find_element(m, MotivationalLevel::Congruents, "hunger");
  CHECK(c->number("raw") == doctest::Approx(0.88 + 0.264));
  CHECK(c->certainty.value() == 1.0);
}

TEST_CASE("satiety: a zero need yields a zero congruent under any history") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double alpha : {0.0, 0.4, 1.0}) {
    auto m = motivational_node({hunger(alpha)}, 0.3);
    for (int t = 0; t < 300; ++t) {
      const double need = (t % 7 == 3) ? 0.0 : u(gen);
      clear_level(m, MotivationalLevel::InternalPerceptions);
      post_element(m, elem("hunger", MotivationalLevel::InternalPerceptions, need));
      clear_level(m, MotivationalLevel::ExternalPerceptions);
      post_element(m, elem("food#1", MotivationalLevel::ExternalPerceptions, u(gen), "food"));
      run_cycle(m, {});
      const auto* c = find_element(m, MotivationalLevel::Congruents, "hunger");
      const double certainty = c == nullptr ? 0.0 : c->certainty.value();
      if (need == 0.0) {
        CHECK(certainty == 0.0);
        // The drive is gated too, so the next satisfied cycle starts clean.
        const auto* d = find_element(m, MotivationalLevel::Drive, "hunger");
        CHECK((d == nullptr || d->certainty.value() == 0.0));
      }
    }
  }
}

TEST_CASE("stored certainty matches an independent recomputation") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<CongruenceBehaviour> drives{hunger(0.35), thirst(0.35)};
  auto m = motivational_node(drives, 0.3);
  for (int t = 0; t < 500; ++t) {
    std::map<std::string, double> prev_drive;
    for (const char* id : {"hunger", "thirst"}) {
      const auto* d = find_element(m, MotivationalLevel::Drive, id);
      prev_drive[id] = d == nullptr ? 0.0 : d->certainty.value();
    }
    const double h = u(gen), w = u(gen), food = u(gen), grass = u(gen), water = u(gen);
    clear_level(m, MotivationalLevel::InternalPerceptions);
    post_element(m, elem("hunger", MotivationalLevel::InternalPerceptions, h));
    post_element(m, elem("thirst", MotivationalLevel::InternalPerceptions, w));
    clear_level(m, MotivationalLevel::ExternalPerceptions);
    post_element(m, elem("a", MotivationalLevel::ExternalPerceptions, food, "food"));
    post_element(m, elem("b", MotivationalLevel::ExternalPerceptions, grass, "grass"));
    post_element(m, elem("c", MotivationalLevel::ExternalPerceptions, water, "water"));
    run_cycle(m, {});

    const double expect_h = std::clamp(prev_drive["hunger"] + h * (grass * 0.5 + 0.35 + food), 0.0, 1.0);
    const double expect_w = std::clamp(w * (0.35 + water) + prev_drive["thirst"], 0.0, 1.0);
    CHECK(std::abs(find_element(m, MotivationalLevel::Congruents, "hunger")->certainty.value() -
                   expect_h) <= 1e-9);
    CHECK(std::abs(find_element(m, MotivationalLevel::Congruents, "thirst")->certainty.value() -
                   expect_w) <= 1e-9);
  }
}
