#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cocoa_abm/appmodel.hpp"
#include "cocoa_abm/contact.hpp"
#include "cocoa_abm/domain.hpp"
#include "cocoa_abm/rng.hpp"

namespace cocoa_abm {

// End-of-day snapshot. n_ip is the cumulative ever-infected count
// (E + I + R + D); new_infections counts this day's S->E transitions.
struct DailyRecord {
  int day = 0;
  std::array<int, kNumStates> counts{};  // indexed by InfectionState
  int n_ip = 0;
  int new_infections = 0;
  int notifications_issued = 0;
  int hospitalized = 0;
  int active_notified = 0;

  int count(InfectionState s) const {
    return counts[static_cast<std::size_t>(s)];
  }
};

struct RunResult {
  std::uint64_t seed = 0;
  AppParams app;
  std::vector<DailyRecord> days;  // days[0] is day 1
  std::vector<ContactLogEntry> contact_log;  // only when requested

  long long final_n_ip() const {
    return days.empty() ? 0 : days.back().n_ip;
  }
};

struct RunOptions {
  // The audit log can run to millions of entries in app-heavy scenarios, so
  // sweeps leave it off.
  bool record_contact_log = false;
};

// One full run, stepable a day at a time so tests can inspect agents between
// days. Identical (config, seed) inputs give bit-identical results; every
// per-agent loop goes in ascending agent id.
class Simulation {
 public:
  Simulation(ScenarioConfig config, std::uint64_t seed, RunOptions opts = {});

  void run_day();  // one 1-day process plus 144 1-step processes
  void run_to_end();

  bool done() const { return day_ > config_.max_days; }
  int days_completed() const { return day_ - 1; }
  int beds_in_use() const { return beds_in_use_; }

  const ScenarioConfig& config() const { return config_; }
  const std::vector<Agent>& agents() const { return population_.agents; }
  const std::vector<House>& houses() const { return population_.houses; }
  const std::vector<DailyRecord>& records() const { return records_; }
  const std::vector<ContactLogEntry>& contact_log() const {
    return contact_log_;
  }

  RunResult result() const;

 private:
  struct AgentStreams {
    RngStream schedule;
    RngStream epidemic;
    RngStream hospital;
    RngStream app;
  };

  void day_process();
  void step_process(int step_of_day);
  void record_day();

  ScenarioConfig config_;
  std::uint64_t seed_ = 0;
  RunOptions opts_;
  Population population_;
  std::vector<AgentStreams> streams_;
  int day_ = 1;  // day currently being simulated, 1-based
  int beds_in_use_ = 0;
  int new_infections_today_ = 0;
  int notifications_today_ = 0;
  std::vector<DailyRecord> records_;
  std::vector<ContactLogEntry> contact_log_;
  ContactBuffers contact_buffers_;
  std::vector<ContactEvent> events_;
};

RunResult run_simulation(const ScenarioConfig& config, std::uint64_t seed,
                         const RunOptions& opts = {});

// CSV, one row per day:
// seed,p1,p2,p3,day,S,E,I,R,D,n_ip,new_infections,notifications_issued,hospitalized
std::string run_csv_header();
void write_run_rows(std::ostream& os, const RunResult& result);
void write_run_csv(std::ostream& os, const RunResult& result);

}  // namespace cocoa_abm
