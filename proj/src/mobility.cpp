#include "cocoa_abm/mobility.hpp"

#include <algorithm>
#include <cmath>

#include "cocoa_abm/appmodel.hpp"

namespace cocoa_abm {

double effective_go_out_probability(double base, InfectionState state,
                                    bool hospitalized, double sick_reduction,
                                    bool notified_active,
                                    double outing_reduction) {
  if (hospitalized || state == InfectionState::D) return 0.0;
  double p = base;
  if (state == InfectionState::I) p -= sick_reduction;
  if (notified_active) p -= outing_reduction;
  return std::clamp(p, 0.0, 1.0);
}

DayPlan plan_day(const Agent& agent, int day, const ScenarioConfig& config,
                 RngStream& schedule_stream) {
  DayPlan plan;
  const double p = effective_go_out_probability(
      agent.base_go_out_prob, agent.state, agent.hospitalized,
      config.sick_outing_reduction, is_notification_active(agent, day),
      config.app.outing_reduction);
  plan.goes_out = schedule_stream.next_bernoulli(p);
  if (!plan.goes_out) return plan;
  const auto role = static_cast<std::size_t>(agent.role);
  const DepartTime& dt = config.depart_time[role];
  const double g = schedule_stream.next_gaussian(dt.mean_step, dt.std_step);
  plan.depart_step = std::clamp(static_cast<int>(std::llround(g)), 0,
                                kStepsPerDay - 1);
  const StayRange& st = config.stay_time[role];
  plan.stay_steps = schedule_stream.next_uniform_int(st.lo_steps, st.hi_steps);
  plan.phase = TripPhase::AtHome;
  plan.stay_remaining = 0;
  return plan;
}

namespace {

// One step of straight-line travel; true once the target is reached.
bool move_toward(Agent& a, Vec2 target, double speed) {
  const double d = distance(a.position, target);
  if (d <= speed) {
    a.position = target;
    return true;
  }
  const double f = speed / d;
  a.position.x = std::clamp(a.position.x + (target.x - a.position.x) * f,
                            kWorldMin, kWorldMax);
  a.position.y = std::clamp(a.position.y + (target.y - a.position.y) * f,
                            kWorldMin, kWorldMax);
  return false;
}

}  // namespace

void advance_position(Agent& agent, Vec2 home, Vec2 facility, int step_of_day,
                      double travel_speed) {
  if (!agent.plan) {
    agent.position = home;
    return;
  }
  DayPlan& p = *agent.plan;
  if (!p.goes_out) {
    agent.position = home;
    return;
  }
  switch (p.phase) {
    case TripPhase::AtHome:
      if (step_of_day < p.depart_step) {
        agent.position = home;
        return;
      }
      p.phase = TripPhase::Outbound;
      [[fallthrough]];
    case TripPhase::Outbound:
      if (move_toward(agent, facility, travel_speed)) {
        p.phase = TripPhase::AtFacility;
        p.stay_remaining = p.stay_steps - 1;  // arrival tick counts as a stay tick
      }
      return;
    case TripPhase::AtFacility:
      if (p.stay_remaining > 0) {
        --p.stay_remaining;
        return;
      }
      p.phase = TripPhase::Inbound;
      [[fallthrough]];
    case TripPhase::Inbound:
      if (move_toward(agent, home, travel_speed)) agent.plan.reset();
      return;
  }
}

}  // namespace cocoa_abm
