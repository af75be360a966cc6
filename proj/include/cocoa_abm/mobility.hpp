#pragma once

#include "cocoa_abm/domain.hpp"
#include "cocoa_abm/rng.hpp"

namespace cocoa_abm {

// Today's outing probability: the base rate minus the sickness reduction
// (while infectious and not in a ward) minus the app reduction (while a
// notification window is active), clamped to [0,1]. Hospitalized and dead
// agents never go out.
double effective_go_out_probability(double base, InfectionState state,
                                    bool hospitalized, double sick_reduction,
                                    bool notified_active,
                                    double outing_reduction);

// Draws one day's plan from the agent's schedule stream. Consumes 1 tick for
// the outing decision; a positive decision consumes 2 more for the departure
// time (Gaussian, rounded and clamped to [0,143]) and 1 for the stay length.
DayPlan plan_day(const Agent& agent, int day, const ScenarioConfig& config,
                 RngStream& schedule_stream);

// One step of the phase machine. At home until the departure step, then
// straight-line travel at travel_speed units per step (snapping to the
// destination when the remaining distance fits in one step), stay_steps ticks
// at the facility counting the arrival tick, straight-line travel home, at
// home again. Clears agent.plan once the round trip completes.
void advance_position(Agent& agent, Vec2 home, Vec2 facility, int step_of_day,
                      double travel_speed);

}  // namespace cocoa_abm
