#include "cocoa_abm/domain.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "cocoa_abm/io.hpp"

namespace cocoa_abm {

const char* to_string(InfectionState s) {
  switch (s) {
    case InfectionState::S: return "S";
    case InfectionState::E: return "E";
    case InfectionState::I: return "I";
    case InfectionState::R: return "R";
    case InfectionState::D: return "D";
  }
  return "?";
}

const char* to_string(AgentRole r) {
  switch (r) {
    case AgentRole::OfficeWorker: return "OfficeWorker";
    case AgentRole::Homemaker: return "Homemaker";
    case AgentRole::Student: return "Student";
  }
  return "?";
}

const char* to_string(FacilityKind k) {
  switch (k) {
    case FacilityKind::Company: return "Company";
    case FacilityKind::Shop: return "Shop";
    case FacilityKind::School: return "School";
  }
  return "?";
}

FacilityKind facility_kind_for(AgentRole role) {
  switch (role) {
    case AgentRole::OfficeWorker: return FacilityKind::Company;
    case AgentRole::Homemaker: return FacilityKind::Shop;
    case AgentRole::Student: return FacilityKind::School;
  }
  return FacilityKind::Company;
}

namespace {

constexpr AgentRole kRoles[kNumRoles] = {
    AgentRole::OfficeWorker, AgentRole::Homemaker, AgentRole::Student};

bool in01(double v) { return v >= 0.0 && v <= 1.0; }

bool in_world(Vec2 p) {
  return p.x >= kWorldMin && p.x <= kWorldMax && p.y >= kWorldMin &&
         p.y <= kWorldMax;
}

}  // namespace

ScenarioConfig validate_config(const ScenarioConfig& raw) {
  const ScenarioConfig& c = raw;
  if (c.max_days < 1) throw ConfigError("max_days < 1");
  if (c.n_houses < 1) throw ConfigError("n_houses < 1");
  if (c.n_initial_infected < 0) throw ConfigError("n_initial_infected < 0");
  if (c.n_initial_infected > c.population()) {
    throw ConfigError("n_initial_infected > population");
  }
  if (c.facilities.empty()) throw ConfigError("facilities empty");
  for (std::size_t i = 0; i < c.facilities.size(); ++i) {
    if (c.facilities[i].id != static_cast<int>(i)) {
      throw ConfigError("facility ids must be 0..n-1 in order");
    }
    if (!in_world(c.facilities[i].location)) {
      throw ConfigError("facility location out of [0,1000]^2");
    }
  }
  for (AgentRole role : kRoles) {
    const FacilityKind kind = facility_kind_for(role);
    const bool any = std::any_of(
        c.facilities.begin(), c.facilities.end(),
        [kind](const Facility& f) { return f.kind == kind; });
    if (!any) {
      throw ConfigError(std::string("no facility of kind ") + to_string(kind));
    }
  }
  if (c.ward_capacity < 0) throw ConfigError("ward_capacity < 0");
  for (int r = 0; r < kNumRoles; ++r) {
    const GoOutRange& g = c.go_out_prob_range[r];
    if (!in01(g.lo) || !in01(g.hi)) {
      throw ConfigError("go_out_prob_range out of [0,1]");
    }
    if (g.lo > g.hi) throw ConfigError("go_out_prob_range lo > hi");
    const DepartTime& d = c.depart_time[r];
    if (d.mean_step < 0.0 || d.mean_step > kStepsPerDay - 1) {
      throw ConfigError("depart_time mean out of [0,143]");
    }
    if (d.std_step < 0.0) throw ConfigError("depart_time std < 0");
    const StayRange& s = c.stay_time[r];
    if (s.lo_steps < 1) throw ConfigError("stay_time lo < 1");
    if (s.lo_steps > s.hi_steps) throw ConfigError("stay_time lo > hi");
  }
  if (!in01(c.hospital_prob)) throw ConfigError("hospital_prob out of [0,1]");
  if (!in01(c.sick_outing_reduction)) {
    throw ConfigError("sick_outing_reduction out of [0,1]");
  }
  if (!in01(c.beta)) throw ConfigError("beta out of [0,1]");
  if (!in01(c.gamma0)) throw ConfigError("gamma0 out of [0,1]");
  if (!in01(c.gamma1)) throw ConfigError("gamma1 out of [0,1]");
  if (c.gamma0 < c.gamma1) throw ConfigError("gamma0 < gamma1");
  if (c.incubation_set.empty()) throw ConfigError("incubation_set empty");
  for (int d : c.incubation_set) {
    if (d < 1) throw ConfigError("incubation_set value < 1");
  }
  if (c.infectious_set.empty()) throw ConfigError("infectious_set empty");
  for (int d : c.infectious_set) {
    if (d < 1) throw ConfigError("infectious_set value < 1");
  }
  if (!in01(c.app.usage_rate)) throw ConfigError("usage_rate out of [0,1]");
  if (!in01(c.app.outing_reduction)) {
    throw ConfigError("outing_reduction out of [0,1]");
  }
  if (!in01(c.app.registration_rate)) {
    throw ConfigError("registration_rate out of [0,1]");
  }
  if (!(c.travel_speed > 0.0)) throw ConfigError("travel_speed <= 0");
  if (!(c.contact_radius > 0.0)) throw ConfigError("contact_radius <= 0");
  if (c.notification_days < 1) throw ConfigError("notification_days < 1");
  if (c.slope_epsilon < 0.0) throw ConfigError("slope_epsilon < 0");
  return c;
}

// Draw order, all loops in ascending id:
//   Init stream (global): house coordinates (x,y per house); facility pick
//   per agent; base_go_out_prob per agent; incubation then infectious pick
//   per agent; partial Fisher-Yates for the initial infectors.
//   App stream (global): partial Fisher-Yates for the app users.
//   App stream (per agent): one registration draw for each initial infector
//   that is an app user.
// Init consumption never depends on the app parameters, so any two configs
// differing only in `app` build identical houses, schedules, and infectors.
Population build_population(const ScenarioConfig& config,
                            std::uint64_t master_seed) {
  const ScenarioConfig c = validate_config(config);
  const int n = c.population();

  Population pop;
  pop.houses.resize(c.n_houses);
  pop.agents.resize(n);

  RngStream init =
      derive_stream(master_seed, RngDomain::Init, kGlobalEntity);

  for (int h = 0; h < c.n_houses; ++h) {
    const double x = kWorldMin + init.next_uniform() * (kWorldMax - kWorldMin);
    const double y = kWorldMin + init.next_uniform() * (kWorldMax - kWorldMin);
    pop.houses[h] = House{h, Vec2{x, y}};
  }

  for (int id = 0; id < n; ++id) {
    Agent& a = pop.agents[id];
    a.id = id;
    a.house_id = id / 3;
    a.role = kRoles[id % 3];
    a.position = pop.houses[a.house_id].position;
  }

  std::array<std::vector<int>, kNumRoles> by_kind;
  for (const Facility& f : c.facilities) {
    by_kind[static_cast<std::size_t>(f.kind)].push_back(f.id);
  }
  for (int id = 0; id < n; ++id) {
    Agent& a = pop.agents[id];
    const auto& list =
        by_kind[static_cast<std::size_t>(facility_kind_for(a.role))];
    a.facility_id =
        list[init.next_uniform_int(0, static_cast<int>(list.size()) - 1)];
  }

  for (int id = 0; id < n; ++id) {
    Agent& a = pop.agents[id];
    const GoOutRange& r = c.go_out_prob_range[static_cast<std::size_t>(a.role)];
    a.base_go_out_prob = r.lo + init.next_uniform() * (r.hi - r.lo);
  }

  for (int id = 0; id < n; ++id) {
    Agent& a = pop.agents[id];
    a.incubation_days = c.incubation_set[init.next_uniform_int(
        0, static_cast<int>(c.incubation_set.size()) - 1)];
    a.infectious_days = c.infectious_set[init.next_uniform_int(
        0, static_cast<int>(c.infectious_set.size()) - 1)];
  }

  std::vector<int> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  for (int k = 0; k < c.n_initial_infected; ++k) {
    const int j = init.next_uniform_int(k, n - 1);
    std::swap(ids[k], ids[j]);
    Agent& a = pop.agents[ids[k]];
    a.state = InfectionState::I;
    a.days_in_state = 0;
  }

  const int n_users =
      static_cast<int>(std::llround(c.app.usage_rate * n));
  RngStream app_global =
      derive_stream(master_seed, RngDomain::App, kGlobalEntity);
  std::iota(ids.begin(), ids.end(), 0);
  for (int k = 0; k < n_users; ++k) {
    const int j = app_global.next_uniform_int(k, n - 1);
    std::swap(ids[k], ids[j]);
    pop.agents[ids[k]].app_user = true;
  }

  for (int id = 0; id < n; ++id) {
    Agent& a = pop.agents[id];
    if (a.state == InfectionState::I && a.app_user) {
      RngStream s = derive_stream(master_seed, RngDomain::App,
                                  static_cast<std::uint64_t>(id));
      a.registered = s.next_bernoulli(c.app.registration_rate);
    }
  }

  return pop;
}

ScenarioConfig default_config() {
  ScenarioConfig c;
  c.max_days = 45;
  c.n_houses = 333;
  c.n_initial_infected = 10;
  c.facilities = {
      {0, FacilityKind::Company, {200.0, 800.0}},
      {1, FacilityKind::Company, {500.0, 500.0}},
      {2, FacilityKind::Company, {800.0, 100.0}},
      {3, FacilityKind::Shop, {200.0, 500.0}},
      {4, FacilityKind::Shop, {500.0, 100.0}},
      {5, FacilityKind::Shop, {800.0, 800.0}},
      {6, FacilityKind::School, {200.0, 100.0}},
      {7, FacilityKind::School, {500.0, 800.0}},
      {8, FacilityKind::School, {800.0, 500.0}},
  };
  c.ward_capacity = 0;
  c.go_out_prob_range[0] = {0.99, 1.0};
  c.go_out_prob_range[1] = {0.50, 1.0};
  c.go_out_prob_range[2] = {0.99, 1.0};
  c.depart_time[0] = {51.0, 9.0};  // 8:30 +- 1:30
  c.depart_time[1] = {63.0, 9.0};  // 10:30 +- 1:30
  c.depart_time[2] = {51.0, 9.0};  // 8:30 +- 1:30
  c.stay_time[0] = {36, 48};  // 6:00 .. 8:00
  c.stay_time[1] = {1, 3};    // 0:10 .. 0:30
  c.stay_time[2] = {30, 36};  // 5:00 .. 6:00
  c.hospital_prob = 0.8;
  c.sick_outing_reduction = 0.3;
  c.beta = 0.00006;
  c.gamma0 = 0.10;
  c.gamma1 = 0.02;
  c.incubation_set = {3, 5, 7};
  c.infectious_set = {8, 10, 12};
  c.app = AppParams{0.0, 0.0, 0.0};
  c.travel_speed = 100.0;
  c.contact_radius = 1.0;
  c.notification_days = 14;
  c.slope_epsilon = 0.01;
  return c;
}

namespace {

using nlohmann::json;

AgentRole role_from_string(const std::string& s) {
  if (s == "OfficeWorker") return AgentRole::OfficeWorker;
  if (s == "Homemaker") return AgentRole::Homemaker;
  if (s == "Student") return AgentRole::Student;
  throw ConfigError("unknown role: " + s);
}

FacilityKind kind_from_string(const std::string& s) {
  if (s == "Company") return FacilityKind::Company;
  if (s == "Shop") return FacilityKind::Shop;
  if (s == "School") return FacilityKind::School;
  throw ConfigError("unknown facility kind: " + s);
}

int steps_from_hhmm(const std::string& s) {
  const std::size_t colon = s.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= s.size()) {
    throw ConfigError("time must be \"HH:MM\": " + s);
  }
  int hours = 0, minutes = 0;
  try {
    hours = std::stoi(s.substr(0, colon));
    minutes = std::stoi(s.substr(colon + 1));
  } catch (const std::exception&) {
    throw ConfigError("time must be \"HH:MM\": " + s);
  }
  if (hours < 0 || minutes < 0 || minutes >= 60) {
    throw ConfigError("time out of range: " + s);
  }
  const int total = hours * 60 + minutes;
  if (total % 10 != 0) {
    throw ConfigError("time not a multiple of 10 minutes: " + s);
  }
  return total / 10;
}

std::string hhmm_from_steps(double steps) {
  const long long minutes = std::llround(steps) * 10;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld:%02lld", minutes / 60, minutes % 60);
  return buf;
}

double frac_from_pct(double pct, const char* field) {
  if (pct < 0.0 || pct > 100.0) {
    throw ConfigError(std::string(field) + " out of [0,100] percent");
  }
  return pct / 100.0;
}

const char* const kKnownKeys[] = {
    "max_days",       "n_houses",     "n_initial_infected",
    "facilities",     "ward_capacity", "go_out_prob_range",
    "depart_time",    "stay_time",    "hospital_prob",
    "sick_outing_reduction",          "beta",
    "gamma0",         "gamma1",       "incubation_set",
    "infectious_set", "app",          "travel_speed",
    "contact_radius", "notification_days",
    "slope_epsilon",
};

}  // namespace

ScenarioConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& item : j.items()) {
    const bool known =
        std::any_of(std::begin(kKnownKeys), std::end(kKnownKeys),
                    [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError("unknown config field: " + item.key());
  }

  ScenarioConfig c = default_config();
  try {
    if (j.contains("max_days")) c.max_days = j.at("max_days").get<int>();
    if (j.contains("n_houses")) c.n_houses = j.at("n_houses").get<int>();
    if (j.contains("n_initial_infected")) {
      c.n_initial_infected = j.at("n_initial_infected").get<int>();
    }
    if (j.contains("facilities")) {
      c.facilities.clear();
      int idx = 0;
      for (const json& f : j.at("facilities")) {
        Facility fac;
        fac.id = f.contains("id") ? f.at("id").get<int>() : idx;
        fac.kind = kind_from_string(f.at("kind").get<std::string>());
        fac.location.x = f.at("location").at(0).get<double>();
        fac.location.y = f.at("location").at(1).get<double>();
        c.facilities.push_back(fac);
        ++idx;
      }
    }
    if (j.contains("ward_capacity")) {
      c.ward_capacity = j.at("ward_capacity").get<int>();
    }
    if (j.contains("go_out_prob_range")) {
      const json& g = j.at("go_out_prob_range");
      for (const auto& item : g.items()) role_from_string(item.key());
      for (int r = 0; r < kNumRoles; ++r) {
        if (!g.contains(to_string(kRoles[r]))) continue;
        const json& range = g.at(to_string(kRoles[r]));
        c.go_out_prob_range[r].lo =
            frac_from_pct(range.at(0).get<double>(), "go_out_prob_range");
        c.go_out_prob_range[r].hi =
            frac_from_pct(range.at(1).get<double>(), "go_out_prob_range");
      }
    }
    if (j.contains("depart_time")) {
      const json& g = j.at("depart_time");
      for (const auto& item : g.items()) role_from_string(item.key());
      for (int r = 0; r < kNumRoles; ++r) {
        if (!g.contains(to_string(kRoles[r]))) continue;
        const json& t = g.at(to_string(kRoles[r]));
        c.depart_time[r].mean_step =
            steps_from_hhmm(t.at("mean").get<std::string>());
        c.depart_time[r].std_step =
            steps_from_hhmm(t.at("std").get<std::string>());
      }
    }
    if (j.contains("stay_time")) {
      const json& g = j.at("stay_time");
      for (const auto& item : g.items()) role_from_string(item.key());
      for (int r = 0; r < kNumRoles; ++r) {
        if (!g.contains(to_string(kRoles[r]))) continue;
        const json& t = g.at(to_string(kRoles[r]));
        c.stay_time[r].lo_steps = steps_from_hhmm(t.at(0).get<std::string>());
        c.stay_time[r].hi_steps = steps_from_hhmm(t.at(1).get<std::string>());
      }
    }
    if (j.contains("hospital_prob")) {
      c.hospital_prob =
          frac_from_pct(j.at("hospital_prob").get<double>(), "hospital_prob");
    }
    if (j.contains("sick_outing_reduction")) {
      c.sick_outing_reduction =
          frac_from_pct(j.at("sick_outing_reduction").get<double>(),
                        "sick_outing_reduction");
    }
    if (j.contains("beta")) {
      c.beta = frac_from_pct(j.at("beta").get<double>(), "beta");
    }
    if (j.contains("gamma0")) {
      c.gamma0 = frac_from_pct(j.at("gamma0").get<double>(), "gamma0");
    }
    if (j.contains("gamma1")) {
      c.gamma1 = frac_from_pct(j.at("gamma1").get<double>(), "gamma1");
    }
    if (j.contains("incubation_set")) {
      c.incubation_set = j.at("incubation_set").get<std::vector<int>>();
    }
    if (j.contains("infectious_set")) {
      c.infectious_set = j.at("infectious_set").get<std::vector<int>>();
    }
    if (j.contains("app")) {
      const json& a = j.at("app");
      for (const auto& item : a.items()) {
        if (item.key() != "usage_rate" && item.key() != "outing_reduction" &&
            item.key() != "registration_rate") {
          throw ConfigError("unknown config field: app." + item.key());
        }
      }
      if (a.contains("usage_rate")) {
        c.app.usage_rate =
            frac_from_pct(a.at("usage_rate").get<double>(), "usage_rate");
      }
      if (a.contains("outing_reduction")) {
        c.app.outing_reduction = frac_from_pct(
            a.at("outing_reduction").get<double>(), "outing_reduction");
      }
      if (a.contains("registration_rate")) {
        c.app.registration_rate = frac_from_pct(
            a.at("registration_rate").get<double>(), "registration_rate");
      }
    }
    if (j.contains("travel_speed")) {
      c.travel_speed = j.at("travel_speed").get<double>();
    }
    if (j.contains("contact_radius")) {
      c.contact_radius = j.at("contact_radius").get<double>();
    }
    if (j.contains("notification_days")) {
      c.notification_days = j.at("notification_days").get<int>();
    }
    if (j.contains("slope_epsilon")) {
      c.slope_epsilon = j.at("slope_epsilon").get<double>();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  return validate_config(c);
}

ScenarioConfig config_from_json_file(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  return config_from_json(text);
}

std::string config_to_json(const ScenarioConfig& config) {
  json j;
  j["max_days"] = config.max_days;
  j["n_houses"] = config.n_houses;
  j["n_initial_infected"] = config.n_initial_infected;
  json facs = json::array();
  for (const Facility& f : config.facilities) {
    facs.push_back({{"id", f.id},
                    {"kind", to_string(f.kind)},
                    {"location", {f.location.x, f.location.y}}});
  }
  j["facilities"] = facs;
  j["ward_capacity"] = config.ward_capacity;
  for (int r = 0; r < kNumRoles; ++r) {
    const char* role = to_string(kRoles[r]);
    j["go_out_prob_range"][role] = {config.go_out_prob_range[r].lo * 100.0,
                                    config.go_out_prob_range[r].hi * 100.0};
    j["depart_time"][role] = {
        {"mean", hhmm_from_steps(config.depart_time[r].mean_step)},
        {"std", hhmm_from_steps(config.depart_time[r].std_step)}};
    j["stay_time"][role] = {hhmm_from_steps(config.stay_time[r].lo_steps),
                            hhmm_from_steps(config.stay_time[r].hi_steps)};
  }
  j["hospital_prob"] = config.hospital_prob * 100.0;
  j["sick_outing_reduction"] = config.sick_outing_reduction * 100.0;
  j["beta"] = config.beta * 100.0;
  j["gamma0"] = config.gamma0 * 100.0;
  j["gamma1"] = config.gamma1 * 100.0;
  j["incubation_set"] = config.incubation_set;
  j["infectious_set"] = config.infectious_set;
  j["app"] = {{"usage_rate", config.app.usage_rate * 100.0},
              {"outing_reduction", config.app.outing_reduction * 100.0},
              {"registration_rate", config.app.registration_rate * 100.0}};
  j["travel_speed"] = config.travel_speed;
  j["contact_radius"] = config.contact_radius;
  j["notification_days"] = config.notification_days;
  j["slope_epsilon"] = config.slope_epsilon;
  return j.dump(2) + "\n";
}

std::string config_hash(const ScenarioConfig& config) {
  const std::uint64_t h = fnv1a64(config_to_json(config));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cocoa_abm
