#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cocoa_abm/analysis.hpp"
#include "cocoa_abm/domain.hpp"
#include "cocoa_abm/engine.hpp"
#include "cocoa_abm/epidemic.hpp"
#include "cocoa_abm/version.hpp"

namespace py = pybind11;
using namespace cocoa_abm;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Agent-based SEIR+D simulator with a contact-confirming app";
  m.attr("__version__") = kVersion;

  py::enum_<InfectionState>(m, "InfectionState")
      .value("S", InfectionState::S)
      .value("E", InfectionState::E)
      .value("I", InfectionState::I)
      .value("R", InfectionState::R)
      .value("D", InfectionState::D);

  py::enum_<AgentRole>(m, "AgentRole")
      .value("OfficeWorker", AgentRole::OfficeWorker)
      .value("Homemaker", AgentRole::Homemaker)
      .value("Student", AgentRole::Student);

  py::enum_<GrowthLabel>(m, "GrowthLabel")
      .value("Exponential", GrowthLabel::Exponential)
      .value("Linear", GrowthLabel::Linear)
      .value("Logarithmic", GrowthLabel::Logarithmic);

  py::class_<AppParams>(m, "AppParams")
      .def(py::init<>())
      .def(py::init([](double p1, double p2, double p3) {
             return AppParams{p1, p2, p3};
           }),
           py::arg("usage_rate"), py::arg("outing_reduction"),
           py::arg("registration_rate"))
      .def_readwrite("usage_rate", &AppParams::usage_rate)
      .def_readwrite("outing_reduction", &AppParams::outing_reduction)
      .def_readwrite("registration_rate", &AppParams::registration_rate)
      .def("__repr__", [](const AppParams& a) {
        return "AppParams(" + std::to_string(a.usage_rate) + ", " +
               std::to_string(a.outing_reduction) + ", " +
               std::to_string(a.registration_rate) + ")";
      });

  py::class_<ScenarioConfig>(m, "ScenarioConfig")
      .def(py::init<>())
      .def_readwrite("max_days", &ScenarioConfig::max_days)
      .def_readwrite("n_houses", &ScenarioConfig::n_houses)
      .def_readwrite("n_initial_infected", &ScenarioConfig::n_initial_infected)
      .def_readwrite("ward_capacity", &ScenarioConfig::ward_capacity)
      .def_readwrite("hospital_prob", &ScenarioConfig::hospital_prob)
      .def_readwrite("sick_outing_reduction",
                     &ScenarioConfig::sick_outing_reduction)
      .def_readwrite("beta", &ScenarioConfig::beta)
      .def_readwrite("gamma0", &ScenarioConfig::gamma0)
      .def_readwrite("gamma1", &ScenarioConfig::gamma1)
      .def_readwrite("app", &ScenarioConfig::app)
      .def_readwrite("travel_speed", &ScenarioConfig::travel_speed)
      .def_readwrite("contact_radius", &ScenarioConfig::contact_radius)
      .def_readwrite("notification_days", &ScenarioConfig::notification_days)
      .def_readwrite("slope_epsilon", &ScenarioConfig::slope_epsilon)
      .def_property_readonly("population", &ScenarioConfig::population);

  m.def("default_config", &default_config);
  m.def("config_from_json", &config_from_json, py::arg("text"));
  m.def("config_from_json_file", &config_from_json_file, py::arg("path"));
  m.def("config_to_json", &config_to_json, py::arg("config"));
  m.def("config_hash", &config_hash, py::arg("config"));
  m.def("validate_config", &validate_config, py::arg("config"));

  py::class_<DailyRecord>(m, "DailyRecord")
      .def_readonly("day", &DailyRecord::day)
      .def_readonly("n_ip", &DailyRecord::n_ip)
      .def_readonly("new_infections", &DailyRecord::new_infections)
      .def_readonly("notifications_issued", &DailyRecord::notifications_issued)
      .def_readonly("hospitalized", &DailyRecord::hospitalized)
      .def_readonly("active_notified", &DailyRecord::active_notified)
      .def("count", &DailyRecord::count, py::arg("state"))
      .def_property_readonly(
          "S", [](const DailyRecord& r) { return r.count(InfectionState::S); })
      .def_property_readonly(
          "E", [](const DailyRecord& r) { return r.count(InfectionState::E); })
      .def_property_readonly(
          "I", [](const DailyRecord& r) { return r.count(InfectionState::I); })
      .def_property_readonly(
          "R", [](const DailyRecord& r) { return r.count(InfectionState::R); })
      .def_property_readonly(
          "D", [](const DailyRecord& r) { return r.count(InfectionState::D); });

  py::class_<ContactLogEntry>(m, "ContactLogEntry")
      .def_readonly("day", &ContactLogEntry::day)
      .def_readonly("step", &ContactLogEntry::step)
      .def_readonly("infector_id", &ContactLogEntry::infector_id)
      .def_readonly("other_id", &ContactLogEntry::other_id)
      .def_readonly("notified", &ContactLogEntry::notified);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("seed", &RunResult::seed)
      .def_readonly("app", &RunResult::app)
      .def_readonly("days", &RunResult::days)
      .def_readonly("contact_log", &RunResult::contact_log)
      .def("final_n_ip", &RunResult::final_n_ip);

  m.def(
      "run_simulation",
      [](const ScenarioConfig& config, std::uint64_t seed,
         bool record_contact_log) {
        RunOptions opts;
        opts.record_contact_log = record_contact_log;
        return run_simulation(config, seed, opts);
      },
      py::arg("config"), py::arg("seed"), py::arg("record_contact_log") = false,
      py::call_guard<py::gil_scoped_release>());

  py::class_<Agent>(m, "Agent")
      .def_readonly("id", &Agent::id)
      .def_readonly("role", &Agent::role)
      .def_readonly("house_id", &Agent::house_id)
      .def_readonly("facility_id", &Agent::facility_id)
      .def_readonly("state", &Agent::state)
      .def_readonly("incubation_days", &Agent::incubation_days)
      .def_readonly("infectious_days", &Agent::infectious_days)
      .def_readonly("base_go_out_prob", &Agent::base_go_out_prob)
      .def_readonly("app_user", &Agent::app_user)
      .def_property_readonly("position", [](const Agent& a) {
        return py::make_tuple(a.position.x, a.position.y);
      });

  py::class_<Population>(m, "Population")
      .def_readonly("agents", &Population::agents)
      .def_property_readonly("n_houses", [](const Population& p) {
        return p.houses.size();
      });

  m.def("build_population", &build_population, py::arg("config"),
        py::arg("master_seed"));

  py::class_<TrendFit>(m, "TrendFit")
      .def_readonly("w", &TrendFit::w)
      .def_readonly("b", &TrendFit::b)
      .def_readonly("label", &TrendFit::label);

  m.def("daily_increments", &daily_increments, py::arg("n_ip"));
  m.def(
      "fit_slope",
      [](const std::vector<double>& increments) {
        return fit_slope(increments);
      },
      py::arg("increments"));
  m.def("classify_growth", &classify_growth, py::arg("w"), py::arg("epsilon"));
  m.def("fit_trend", &fit_trend, py::arg("n_ip"), py::arg("epsilon"));

  py::class_<KernelInputs>(m, "KernelInputs")
      .def(py::init([](InfectionState state, bool contact, int days_in_state,
                       bool hospitalized) {
             return KernelInputs{state, contact, days_in_state, hospitalized};
           }),
           py::arg("state"), py::arg("contact") = false,
           py::arg("days_in_state") = 0, py::arg("hospitalized") = false);

  py::class_<KernelParams>(m, "KernelParams")
      .def(py::init([](double beta, double gamma0, double gamma1,
                       int incubation_days, int infectious_days) {
             return KernelParams{beta, gamma0, gamma1, incubation_days,
                                 infectious_days};
           }),
           py::arg("beta"), py::arg("gamma0"), py::arg("gamma1"),
           py::arg("incubation_days"), py::arg("infectious_days"));

  m.def("kernel_distribution", &kernel_distribution, py::arg("inputs"),
        py::arg("params"));
}
