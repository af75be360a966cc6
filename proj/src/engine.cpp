#include "cocoa_abm/engine.hpp"

#include <ostream>
#include <string>

#include "cocoa_abm/epidemic.hpp"
#include "cocoa_abm/io.hpp"
#include "cocoa_abm/mobility.hpp"

namespace cocoa_abm {

Simulation::Simulation(ScenarioConfig config, std::uint64_t seed,
                       RunOptions opts)
    : config_(validate_config(config)), seed_(seed), opts_(opts) {
  population_ = build_population(config_, seed_);
  const int n = config_.population();
  streams_.reserve(static_cast<std::size_t>(n));
  for (int id = 0; id < n; ++id) {
    const auto eid = static_cast<std::uint64_t>(id);
    streams_.push_back(AgentStreams{
        derive_stream(seed_, RngDomain::Schedule, eid),
        derive_stream(seed_, RngDomain::Epidemic, eid),
        derive_stream(seed_, RngDomain::Hospital, eid),
        derive_stream(seed_, RngDomain::App, eid),
    });
  }
  records_.reserve(static_cast<std::size_t>(config_.max_days));
}

void Simulation::run_day() {
  if (done()) return;
  new_infections_today_ = 0;
  notifications_today_ = 0;
  day_process();
  for (int step = 0; step < kStepsPerDay; ++step) step_process(step);
  record_day();
  ++day_;
}

void Simulation::run_to_end() {
  while (!done()) run_day();
}

void Simulation::day_process() {
  auto& agents = population_.agents;
  const int n = static_cast<int>(agents.size());

  // State-duration transitions. Each agent is examined once against the
  // state it held at day start, so an E->I agent is not aged again today.
  for (int id = 0; id < n; ++id) {
    Agent& a = agents[static_cast<std::size_t>(id)];
    if (a.state == InfectionState::E) {
      ++a.days_in_state;
      if (day_transition_E(a.days_in_state, a.incubation_days) ==
          InfectionState::I) {
        a.state = InfectionState::I;
        a.days_in_state = 0;
        maybe_register(a, config_.app.registration_rate,
                       streams_[static_cast<std::size_t>(id)].app);
      }
    } else if (a.state == InfectionState::I) {
      ++a.days_in_state;
      if (a.days_in_state == a.infectious_days) {
        const double u =
            streams_[static_cast<std::size_t>(id)].epidemic.next_uniform();
        const InfectionState next =
            day_transition_I(a.days_in_state, a.infectious_days,
                             a.hospitalized, config_.gamma0, config_.gamma1, u);
        if (a.hospitalized) {
          a.hospitalized = false;
          --beds_in_use_;
          a.position = population_.houses[static_cast<std::size_t>(
                                              a.house_id)].position;
        }
        a.registered = false;
        a.state = next;
        a.days_in_state = 0;
        if (next == InfectionState::D) {
          a.position = population_.houses[static_cast<std::size_t>(
                                              a.house_id)].position;
          a.plan.reset();
        }
      }
    }
  }

  // Hospital attempts, retried daily while infectious and out of a ward.
  for (int id = 0; id < n; ++id) {
    Agent& a = agents[static_cast<std::size_t>(id)];
    if (a.state != InfectionState::I || a.hospitalized) continue;
    const bool wants = streams_[static_cast<std::size_t>(id)]
                           .hospital.next_bernoulli(config_.hospital_prob);
    if (wants && beds_in_use_ < config_.ward_capacity) {
      a.hospitalized = true;
      ++beds_in_use_;
      a.plan.reset();
    }
  }

  // Outing plans. Agents still on yesterday's round trip keep it; everyone
  // else alive and out of a ward draws today's plan.
  for (int id = 0; id < n; ++id) {
    Agent& a = agents[static_cast<std::size_t>(id)];
    if (a.state == InfectionState::D || a.hospitalized) continue;
    const bool mid_trip = a.plan.has_value() && a.plan->goes_out;
    if (!mid_trip) {
      a.plan = plan_day(a, day_, config_,
                        streams_[static_cast<std::size_t>(id)].schedule);
    }
  }
}

void Simulation::step_process(int step_of_day) {
  auto& agents = population_.agents;

  for (Agent& a : agents) {
    if (a.state == InfectionState::D || a.hospitalized) continue;
    if (!a.plan.has_value() || !a.plan->goes_out) continue;
    advance_position(
        a, population_.houses[static_cast<std::size_t>(a.house_id)].position,
        config_.facilities[static_cast<std::size_t>(a.facility_id)].location,
        step_of_day, config_.travel_speed);
  }

  contacts_for_step(agents, config_.contact_radius, day_, step_of_day,
                    contact_buffers_, events_);
  if (events_.empty()) return;

  // One Bernoulli(beta) per contacted susceptible; events are sorted by
  // other_id, so each run of equal ids collapses to a single draw.
  std::size_t i = 0;
  while (i < events_.size()) {
    const int other = events_[i].other_id;
    do {
      ++i;
    } while (i < events_.size() && events_[i].other_id == other);
    Agent& a = agents[static_cast<std::size_t>(other)];
    if (a.state != InfectionState::S) continue;
    const double u =
        streams_[static_cast<std::size_t>(other)].epidemic.next_uniform();
    if (step_transition_S(true, config_.beta, u) == InfectionState::E) {
      a.state = InfectionState::E;
      a.days_in_state = 0;
      ++new_infections_today_;
    }
  }

  notifications_today_ += process_contacts(
      events_, agents, day_, config_.notification_days,
      opts_.record_contact_log ? &contact_log_ : nullptr);
}

void Simulation::record_day() {
  DailyRecord r;
  r.day = day_;
  int active = 0;
  for (const Agent& a : population_.agents) {
    ++r.counts[static_cast<std::size_t>(a.state)];
    if (is_notification_active(a, day_)) ++active;
  }
  r.n_ip = r.count(InfectionState::E) + r.count(InfectionState::I) +
           r.count(InfectionState::R) + r.count(InfectionState::D);
  r.new_infections = new_infections_today_;
  r.notifications_issued = notifications_today_;
  r.hospitalized = beds_in_use_;
  r.active_notified = active;
  records_.push_back(r);
  if (opts_.record_contact_log) {
    prune_contact_log(contact_log_, day_, config_.notification_days);
  }
}

RunResult Simulation::result() const {
  RunResult res;
  res.seed = seed_;
  res.app = config_.app;
  res.days = records_;
  res.contact_log = contact_log_;
  return res;
}

RunResult run_simulation(const ScenarioConfig& config, std::uint64_t seed,
                         const RunOptions& opts) {
  Simulation sim(config, seed, opts);
  sim.run_to_end();
  return sim.result();
}

std::string run_csv_header() {
  return "seed,p1,p2,p3,day,S,E,I,R,D,n_ip,new_infections,"
         "notifications_issued,hospitalized";
}

void write_run_rows(std::ostream& os, const RunResult& result) {
  const std::string prefix =
      std::to_string(result.seed) + ',' + format_double(result.app.usage_rate) +
      ',' + format_double(result.app.outing_reduction) + ',' +
      format_double(result.app.registration_rate) + ',';
  for (const DailyRecord& d : result.days) {
    os << prefix << d.day << ',' << d.count(InfectionState::S) << ','
       << d.count(InfectionState::E) << ',' << d.count(InfectionState::I)
       << ',' << d.count(InfectionState::R) << ','
       << d.count(InfectionState::D) << ',' << d.n_ip << ','
       << d.new_infections << ',' << d.notifications_issued << ','
       << d.hospitalized << '\n';
  }
}

void write_run_csv(std::ostream& os, const RunResult& result) {
  os << run_csv_header() << '\n';
  write_run_rows(os, result);
}

}  // namespace cocoa_abm
