#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "doctest.h"

#include "cocoa_abm/domain.hpp"

using namespace cocoa_abm;

namespace {

std::string error_of(const ScenarioConfig& cfg) {
  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("default config passes validation") {
  const ScenarioConfig cfg = default_config();
  CHECK_NOTHROW(validate_config(cfg));
  CHECK(cfg.population() == 999);
  CHECK(cfg.max_days == 45);
  CHECK(cfg.n_initial_infected == 10);
  CHECK(cfg.facilities.size() == 9);
  CHECK(cfg.ward_capacity == 0);
  CHECK(cfg.beta == 0.00006);
  CHECK(cfg.gamma0 == 0.1);
  CHECK(cfg.gamma1 == 0.02);
  CHECK(cfg.hospital_prob == 0.8);
  CHECK(cfg.sick_outing_reduction == 0.3);
  CHECK(cfg.incubation_set == std::vector<int>{3, 5, 7});
  CHECK(cfg.infectious_set == std::vector<int>{8, 10, 12});
  CHECK(cfg.app.usage_rate == 0.0);
}

TEST_CASE("validation names the violated invariant") {
  ScenarioConfig cfg = default_config();
  cfg.max_days = 0;
  CHECK(error_of(cfg) == "max_days < 1");

  cfg = default_config();
  cfg.beta = 1.5;
  CHECK(error_of(cfg) == "beta out of [0,1]");

  cfg = default_config();
  cfg.gamma0 = 0.01;  // below gamma1
  CHECK(error_of(cfg) == "gamma0 < gamma1");

  cfg = default_config();
  cfg.n_initial_infected = 1000;
  CHECK(error_of(cfg) == "n_initial_infected > population");

  cfg = default_config();
  cfg.stay_time[0].lo_steps = 0;
  CHECK(error_of(cfg) == "stay_time lo < 1");

  cfg = default_config();
  cfg.depart_time[1].mean_step = 144.0;
  CHECK(error_of(cfg) == "depart_time mean out of [0,143]");

  cfg = default_config();
  cfg.facilities.erase(
      std::remove_if(cfg.facilities.begin(), cfg.facilities.end(),
                     [](const Facility& f) {
                       return f.kind == FacilityKind::School;
                     }),
      cfg.facilities.end());
  CHECK(error_of(cfg) == "no facility of kind School");

  cfg = default_config();
  cfg.facilities[3].id = 7;
  CHECK(error_of(cfg) == "facility ids must be 0..n-1 in order");

  cfg = default_config();
  cfg.travel_speed = 0.0;
  CHECK(error_of(cfg) == "travel_speed <= 0");

  cfg = default_config();
  cfg.incubation_set.clear();
  CHECK(error_of(cfg) == "incubation_set empty");
}

TEST_CASE("build_population lays out three agents per house") {
  const ScenarioConfig cfg = default_config();
  const Population pop = build_population(cfg, 1);
  REQUIRE(pop.agents.size() == 999);
  REQUIRE(pop.houses.size() == 333);

  for (std::size_t i = 0; i < pop.agents.size(); ++i) {
    const Agent& a = pop.agents[i];
    CHECK(a.id == static_cast<int>(i));
    CHECK(a.house_id == static_cast<int>(i) / 3);
    const auto role = static_cast<AgentRole>(i % 3);
    CHECK(a.role == role);
    const Facility& f = cfg.facilities[static_cast<std::size_t>(a.facility_id)];
    CHECK(f.kind == facility_kind_for(role));
    const House& h = pop.houses[static_cast<std::size_t>(a.house_id)];
    CHECK(a.position.x == h.position.x);
    CHECK(a.position.y == h.position.y);
    CHECK(a.days_in_state == 0);
    CHECK((a.incubation_days == 3 || a.incubation_days == 5 ||
           a.incubation_days == 7));
    CHECK((a.infectious_days == 8 || a.infectious_days == 10 ||
           a.infectious_days == 12));
    const GoOutRange& g =
        cfg.go_out_prob_range[static_cast<std::size_t>(role)];
    CHECK(a.base_go_out_prob >= g.lo);
    CHECK(a.base_go_out_prob <= g.hi);
    CHECK_FALSE(a.hospitalized);
    CHECK_FALSE(a.notified_until_day.has_value());
  }

  int infected = 0;
  for (const Agent& a : pop.agents) {
    if (a.state == InfectionState::I) {
      ++infected;
    } else {
      CHECK(a.state == InfectionState::S);
    }
  }
  CHECK(infected == 10);

  for (const House& h : pop.houses) {
    CHECK(h.position.x >= kWorldMin);
    CHECK(h.position.x <= kWorldMax);
    CHECK(h.position.y >= kWorldMin);
    CHECK(h.position.y <= kWorldMax);
  }
}

TEST_CASE("app user count is round(usage_rate * population)") {
  ScenarioConfig cfg = default_config();
  auto count_users = [&](double rate, std::uint64_t seed) {
    cfg.app.usage_rate = rate;
    const Population pop = build_population(cfg, seed);
    int n = 0;
    for (const Agent& a : pop.agents) n += a.app_user ? 1 : 0;
    return n;
  };
  CHECK(count_users(0.0, 1) == 0);
  CHECK(count_users(1.0, 1) == 999);
  CHECK(count_users(0.2, 1) == 200);  // round(199.8)
  CHECK(count_users(0.2, 2) == 200);
  CHECK(count_users(0.5, 3) == 500);  // round(499.5)
}

TEST_CASE("initial infector registration follows p3 when they use the app") {
  ScenarioConfig cfg = default_config();
  cfg.app = AppParams{1.0, 0.6, 1.0};
  Population pop = build_population(cfg, 5);
  for (const Agent& a : pop.agents) {
    if (a.state == InfectionState::I) CHECK(a.registered);
  }

  cfg.app.registration_rate = 0.0;
  pop = build_population(cfg, 5);
  for (const Agent& a : pop.agents) CHECK_FALSE(a.registered);

  cfg.app.usage_rate = 0.0;
  cfg.app.registration_rate = 1.0;
  pop = build_population(cfg, 5);
  for (const Agent& a : pop.agents) CHECK_FALSE(a.registered);
}

TEST_CASE("population construction is reproducible") {
  const ScenarioConfig cfg = default_config();
  const Population a = build_population(cfg, 77);
  const Population b = build_population(cfg, 77);
  REQUIRE(a.agents.size() == b.agents.size());
  for (std::size_t i = 0; i < a.agents.size(); ++i) {
    CHECK(a.agents[i].state == b.agents[i].state);
    CHECK(a.agents[i].facility_id == b.agents[i].facility_id);
    CHECK(a.agents[i].base_go_out_prob == b.agents[i].base_go_out_prob);
    CHECK(a.agents[i].incubation_days == b.agents[i].incubation_days);
    CHECK(a.agents[i].infectious_days == b.agents[i].infectious_days);
    CHECK(a.agents[i].app_user == b.agents[i].app_user);
  }
  for (std::size_t i = 0; i < a.houses.size(); ++i) {
    CHECK(a.houses[i].position.x == b.houses[i].position.x);
    CHECK(a.houses[i].position.y == b.houses[i].position.y);
  }

  const Population c = build_population(cfg, 78);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.houses.size(); ++i) {
    if (a.houses[i].position.x != c.houses[i].position.x) any_diff = true;
  }
  CHECK(any_diff);
}

TEST_CASE("initial infectors vary with the seed") {
  const ScenarioConfig cfg = default_config();
  auto infectors = [&](std::uint64_t seed) {
    std::set<int> ids;
    for (const Agent& a : build_population(cfg, seed).agents) {
      if (a.state == InfectionState::I) ids.insert(a.id);
    }
    return ids;
  };
  CHECK(infectors(1) != infectors(2));
}

TEST_CASE("baseline config file matches the built-in defaults") {
  const ScenarioConfig from_file = config_from_json_file(
      std::string(COCOA_ABM_SOURCE_DIR) + "/configs/baseline.json");
  CHECK(config_to_json(from_file) == config_to_json(default_config()));
  CHECK(config_hash(from_file) == config_hash(default_config()));
}

TEST_CASE("json surface speaks percent and HH:MM") {
  const ScenarioConfig cfg = config_from_json(R"({
    "beta": 0.006,
    "gamma0": 10,
    "depart_time": {"OfficeWorker": {"mean": "8:30", "std": "1:30"}},
    "stay_time": {"Homemaker": ["0:10", "0:30"]}
  })");
  CHECK(cfg.beta == doctest::Approx(0.00006).epsilon(1e-12));
  CHECK(cfg.gamma0 == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(cfg.depart_time[0].mean_step == doctest::Approx(51.0));
  CHECK(cfg.depart_time[0].std_step == doctest::Approx(9.0));
  CHECK(cfg.stay_time[1].lo_steps == 1);
  CHECK(cfg.stay_time[1].hi_steps == 3);
  CHECK(cfg.max_days == 45);  // untouched fields keep their defaults
}

TEST_CASE("json rejects malformed input") {
  CHECK_THROWS_AS(config_from_json("{"), ConfigError);
  CHECK_THROWS_AS(config_from_json("[1,2]"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"no_such_field": 1})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"beta": 101})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"beta": -1})"), ConfigError);
  CHECK_THROWS_AS(
      config_from_json(R"({"depart_time": {"Student": {"mean": "8:35", "std": "1:30"}}})"),
      ConfigError);
  CHECK_THROWS_AS(
      config_from_json(R"({"stay_time": {"Student": ["5:03", "6:00"]}})"),
      ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"gamma0": 1})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_file("/no/such/config.json"),
                  ConfigError);
}

TEST_CASE("json serialization is canonical and idempotent") {
  ScenarioConfig cfg = default_config();
  cfg.app = AppParams{0.4, 0.6, 0.8};
  cfg.beta = 0.000117;
  const std::string once = config_to_json(cfg);
  const std::string twice = config_to_json(config_from_json(once));
  CHECK(once == twice);
  CHECK(config_hash(cfg) == config_hash(config_from_json(once)));
  CHECK(config_hash(cfg) != config_hash(default_config()));
}

TEST_CASE("role and facility kind names round trip") {
  CHECK(std::string(to_string(AgentRole::OfficeWorker)) == "OfficeWorker");
  CHECK(std::string(to_string(FacilityKind::Shop)) == "Shop");
  CHECK(std::string(to_string(InfectionState::S)) == "S");
  CHECK(facility_kind_for(AgentRole::OfficeWorker) == FacilityKind::Company);
  CHECK(facility_kind_for(AgentRole::Homemaker) == FacilityKind::Shop);
  CHECK(facility_kind_for(AgentRole::Student) == FacilityKind::School);
}
