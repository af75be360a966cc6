#include <cmath>

#include "doctest.h"

#include "cocoa_abm/mobility.hpp"

using namespace cocoa_abm;

TEST_CASE("effective outing probability subtracts the active penalties") {
  using doctest::Approx;
  CHECK(effective_go_out_probability(0.995, InfectionState::S, false, 0.3,
                                     false, 0.6) == 0.995);
  CHECK(effective_go_out_probability(0.995, InfectionState::I, false, 0.3,
                                     false, 0.6) == Approx(0.695));
  CHECK(effective_go_out_probability(0.995, InfectionState::S, false, 0.3,
                                     true, 0.6) == Approx(0.395));
  CHECK(effective_go_out_probability(0.995, InfectionState::I, false, 0.3,
                                     true, 0.6) == Approx(0.095));
  CHECK(effective_go_out_probability(0.5, InfectionState::I, false, 0.3, true,
                                     0.6) == 0.0);
  CHECK(effective_go_out_probability(0.9, InfectionState::I, true, 0.3, false,
                                     0.6) == 0.0);
  CHECK(effective_go_out_probability(0.9, InfectionState::D, false, 0.0, false,
                                     0.0) == 0.0);
  CHECK(effective_go_out_probability(0.9, InfectionState::E, false, 0.3, false,
                                     0.6) == 0.9);
}

namespace {

Agent make_agent(AgentRole role, double go_out_prob) {
  Agent a;
  a.role = role;
  a.base_go_out_prob = go_out_prob;
  return a;
}

}  // namespace

TEST_CASE("plan_day draw accounting") {
  const ScenarioConfig cfg = default_config();

  Agent homebody = make_agent(AgentRole::OfficeWorker, 0.0);
  RngStream s1(1, RngDomain::Schedule, 0);
  const DayPlan stay = plan_day(homebody, 1, cfg, s1);
  CHECK_FALSE(stay.goes_out);
  CHECK(s1.counter() == 1);

  Agent commuter = make_agent(AgentRole::OfficeWorker, 1.0);
  RngStream s2(1, RngDomain::Schedule, 0);
  const DayPlan go = plan_day(commuter, 1, cfg, s2);
  CHECK(go.goes_out);
  CHECK(s2.counter() == 4);  // 1 outing + 2 gaussian + 1 stay
  CHECK(go.depart_step >= 0);
  CHECK(go.depart_step <= 143);
  CHECK(go.stay_steps >= cfg.stay_time[0].lo_steps);
  CHECK(go.stay_steps <= cfg.stay_time[0].hi_steps);
  CHECK(go.phase == TripPhase::AtHome);
}

TEST_CASE("departure times cluster around the configured mean") {
  const ScenarioConfig cfg = default_config();
  Agent a = make_agent(AgentRole::Homemaker, 1.0);
  RngStream s(7, RngDomain::Schedule, 3);
  double sum = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) {
    const DayPlan p = plan_day(a, 1, cfg, s);
    REQUIRE(p.goes_out);
    REQUIRE(p.depart_step >= 0);
    REQUIRE(p.depart_step <= 143);
    REQUIRE(p.stay_steps >= 1);
    REQUIRE(p.stay_steps <= 3);
    sum += p.depart_step;
  }
  CHECK(std::abs(sum / n - 63.0) < 1.0);  // 10:30 in steps, std 9
}

TEST_CASE("departure clamps to the day") {
  ScenarioConfig cfg = default_config();
  cfg.depart_time[0] = DepartTime{0.0, 0.5};
  Agent a = make_agent(AgentRole::OfficeWorker, 1.0);
  RngStream s(3, RngDomain::Schedule, 1);
  for (int i = 0; i < 500; ++i) {
    const DayPlan p = plan_day(a, 1, cfg, s);
    CHECK(p.depart_step >= 0);
    CHECK(p.depart_step <= 143);
  }
}

TEST_CASE("round trip through the phase machine") {
  const Vec2 home{0.0, 0.0};
  const Vec2 facility{250.0, 0.0};
  const double speed = 100.0;

  Agent a;
  a.position = home;
  a.plan = DayPlan{true, 10, 4, TripPhase::AtHome, 0};

  for (int step = 0; step < 10; ++step) {
    advance_position(a, home, facility, step, speed);
    CHECK(a.position.x == 0.0);
    CHECK(a.plan->phase == TripPhase::AtHome);
  }

  advance_position(a, home, facility, 10, speed);  // travel tick 1
  CHECK(a.position.x == doctest::Approx(100.0));
  CHECK(a.plan->phase == TripPhase::Outbound);
  advance_position(a, home, facility, 11, speed);  // travel tick 2
  CHECK(a.position.x == doctest::Approx(200.0));
  advance_position(a, home, facility, 12, speed);  // snap to the facility
  CHECK(a.position.x == 250.0);
  CHECK(a.plan->phase == TripPhase::AtFacility);
  CHECK(a.plan->stay_remaining == 3);  // arrival tick already counted

  for (int k = 0; k < 3; ++k) {
    advance_position(a, home, facility, 13 + k, speed);
    CHECK(a.position.x == 250.0);
    CHECK(a.plan->phase == TripPhase::AtFacility);
  }

  advance_position(a, home, facility, 16, speed);  // homeward tick 1
  CHECK(a.position.x == doctest::Approx(150.0));
  CHECK(a.plan->phase == TripPhase::Inbound);
  advance_position(a, home, facility, 17, speed);
  CHECK(a.position.x == doctest::Approx(50.0));
  advance_position(a, home, facility, 18, speed);
  CHECK(a.position.x == 0.0);
  CHECK_FALSE(a.plan.has_value());  // plan cleared at the door

  // travel time either way was ceil(250 / 100) = 3 ticks
}

TEST_CASE("stay of one tick turns around immediately") {
  const Vec2 home{0.0, 0.0};
  const Vec2 facility{50.0, 0.0};
  Agent a;
  a.position = home;
  a.plan = DayPlan{true, 0, 1, TripPhase::AtHome, 0};

  advance_position(a, home, facility, 0, 100.0);  // arrives, stays this tick
  CHECK(a.position.x == 50.0);
  CHECK(a.plan->phase == TripPhase::AtFacility);
  CHECK(a.plan->stay_remaining == 0);
  advance_position(a, home, facility, 1, 100.0);  // straight home
  CHECK(a.position.x == 0.0);
  CHECK_FALSE(a.plan.has_value());
}

TEST_CASE("diagonal travel advances speed units per tick") {
  const Vec2 home{0.0, 0.0};
  const Vec2 facility{300.0, 400.0};  // distance 500
  Agent a;
  a.position = home;
  a.plan = DayPlan{true, 0, 1, TripPhase::AtHome, 0};

  advance_position(a, home, facility, 0, 100.0);
  CHECK(distance(home, a.position) == doctest::Approx(100.0));
  CHECK(a.position.x == doctest::Approx(60.0));
  CHECK(a.position.y == doctest::Approx(80.0));
  for (int step = 1; step < 5; ++step) {
    advance_position(a, home, facility, step, 100.0);
  }
  CHECK(a.position.x == 300.0);
  CHECK(a.position.y == 400.0);
}

TEST_CASE("an agent with no plan or a stay-home plan sits at home") {
  const Vec2 home{10.0, 20.0};
  const Vec2 facility{500.0, 500.0};
  Agent a;
  a.position = Vec2{99.0, 99.0};
  advance_position(a, home, facility, 5, 100.0);
  CHECK(a.position.x == 10.0);
  CHECK(a.position.y == 20.0);

  a.plan = DayPlan{false, 0, 1, TripPhase::AtHome, 0};
  a.position = Vec2{99.0, 99.0};
  advance_position(a, home, facility, 5, 100.0);
  CHECK(a.position.x == 10.0);
  CHECK(a.plan.has_value());  // stay-home plans persist until the next day
}

TEST_CASE("positions stay inside the world") {
  const Vec2 home{0.0, 0.0};
  const Vec2 facility{1000.0, 1000.0};
  Agent a;
  a.position = home;
  a.plan = DayPlan{true, 0, 2, TripPhase::AtHome, 0};
  for (int step = 0; step < 40; ++step) {
    advance_position(a, home, facility, step, 97.3);
    CHECK(a.position.x >= kWorldMin);
    CHECK(a.position.x <= kWorldMax);
    CHECK(a.position.y >= kWorldMin);
    CHECK(a.position.y <= kWorldMax);
    if (!a.plan) break;
  }
  CHECK_FALSE(a.plan.has_value());
}
