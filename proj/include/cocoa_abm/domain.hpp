#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cocoa_abm/rng.hpp"

namespace cocoa_abm {

// The world is a [0,1000]^2 plane; the clock ticks in 10-minute steps,
// 144 steps to a day.
inline constexpr double kWorldMin = 0.0;
inline constexpr double kWorldMax = 1000.0;
inline constexpr int kStepsPerDay = 144;

enum class InfectionState : std::uint8_t { S, E, I, R, D };
enum class AgentRole : std::uint8_t { OfficeWorker, Homemaker, Student };
enum class FacilityKind : std::uint8_t { Company, Shop, School };

inline constexpr int kNumRoles = 3;
inline constexpr int kNumStates = 5;

const char* to_string(InfectionState s);
const char* to_string(AgentRole r);
const char* to_string(FacilityKind k);

// Office workers commute to companies, homemakers to shops, students to
// schools.
FacilityKind facility_kind_for(AgentRole role);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(Vec2 a, Vec2 b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

enum class TripPhase : std::uint8_t { AtHome, Outbound, AtFacility, Inbound };

struct DayPlan {
  bool goes_out = false;
  int depart_step = 0;   // step-of-day in [0,143]
  int stay_steps = 1;    // steps spent at the facility (>= 1)
  TripPhase phase = TripPhase::AtHome;
  int stay_remaining = 0;  // ticks left at the facility once arrived
};

struct Agent {
  int id = 0;
  AgentRole role = AgentRole::OfficeWorker;
  int house_id = 0;
  int facility_id = 0;  // index into ScenarioConfig::facilities, fixed at init
  InfectionState state = InfectionState::S;
  int days_in_state = 0;
  int incubation_days = 0;   // E -> I after this many elapsed days
  int infectious_days = 0;   // I -> R/D after this many elapsed days
  double base_go_out_prob = 0.0;
  bool hospitalized = false;
  bool app_user = false;
  bool registered = false;  // infection reported through the app, I-state only
  std::optional<int> notified_until_day;
  Vec2 position;
  std::optional<DayPlan> plan;
};

struct House {
  int id = 0;
  Vec2 position;
};

struct Facility {
  int id = 0;
  FacilityKind kind = FacilityKind::Company;
  Vec2 location;
};

// The three knobs of the contact-confirming app: how many people run it, how
// strongly a notification curbs outings, and how reliably infections get
// registered.
struct AppParams {
  double usage_rate = 0.0;
  double outing_reduction = 0.0;
  double registration_rate = 0.0;
};

struct GoOutRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct DepartTime {
  double mean_step = 0.0;  // step-of-day units
  double std_step = 0.0;
};

struct StayRange {
  int lo_steps = 1;
  int hi_steps = 1;
};

// Probabilities are stored as fractions in [0,1]; the JSON surface speaks
// percent and "HH:MM" and converts on the way in/out.
struct ScenarioConfig {
  int max_days = 0;            // simulated days
  int n_houses = 0;            // 3 agents per house
  int n_initial_infected = 0;  // agents starting in state I
  std::vector<Facility> facilities;
  int ward_capacity = 0;  // isolation beds; 0 disables hospitalization
  std::array<GoOutRange, kNumRoles> go_out_prob_range{};  // indexed by role
  std::array<DepartTime, kNumRoles> depart_time{};
  std::array<StayRange, kNumRoles> stay_time{};
  double hospital_prob = 0.0;          // daily chance an I agent seeks a bed
  double sick_outing_reduction = 0.0;  // subtracted while I and not in a ward
  double beta = 0.0;                   // per-step infection probability
  double gamma0 = 0.0;                 // fatality, no ward
  double gamma1 = 0.02;                // fatality, in a ward
  std::vector<int> incubation_set;     // per-agent uniform pick
  std::vector<int> infectious_set;
  AppParams app;
  double travel_speed = 100.0;  // distance units per step
  double contact_radius = 1.0;
  int notification_days = 14;  // notification effect + contact log retention
  double slope_epsilon = 0.01;  // dead-band for growth classification

  int population() const { return 3 * n_houses; }
};

struct Population {
  std::vector<Agent> agents;
  std::vector<House> houses;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Returns the config unchanged if every invariant holds, otherwise throws
// ConfigError naming the first violated invariant.
ScenarioConfig validate_config(const ScenarioConfig& raw);

// Deterministic population construction. Consumes the Init domain (houses,
// facility assignment, outing probabilities, durations, initial infectors)
// and the App domain (app-user selection, onset registration of initial
// infectors); see domain.cpp for the exact draw order.
Population build_population(const ScenarioConfig& config,
                            std::uint64_t master_seed);

// Stock configuration: 333 houses (999 agents), 45 days, 9 facilities,
// 10 initial infectors, no ward capacity, app disabled.
ScenarioConfig default_config();

// JSON document in external units (percent probabilities, "HH:MM" times).
// Field names match the struct one-to-one.
ScenarioConfig config_from_json(const std::string& text);
ScenarioConfig config_from_json_file(const std::string& path);
std::string config_to_json(const ScenarioConfig& config);

// FNV-1a 64 over the canonical JSON serialization, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

}  // namespace cocoa_abm
