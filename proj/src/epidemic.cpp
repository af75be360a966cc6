#include "cocoa_abm/epidemic.hpp"

namespace cocoa_abm {

InfectionState step_transition_S(bool contact, double beta, double u) {
  return (contact && u < beta) ? InfectionState::E : InfectionState::S;
}

InfectionState day_transition_E(int days_in_state, int incubation_days) {
  return days_in_state == incubation_days ? InfectionState::I
                                          : InfectionState::E;
}

InfectionState day_transition_I(int days_in_state, int infectious_days,
                                bool hospitalized, double gamma0,
                                double gamma1, double u) {
  if (days_in_state != infectious_days) return InfectionState::I;
  const double gamma = hospitalized ? gamma1 : gamma0;
  return u < gamma ? InfectionState::D : InfectionState::R;
}

std::map<InfectionState, double> kernel_distribution(
    const KernelInputs& inputs, const KernelParams& params) {
  switch (inputs.state) {
    case InfectionState::S:
      if (inputs.contact) {
        return {{InfectionState::S, 1.0 - params.beta},
                {InfectionState::E, params.beta}};
      }
      return {{InfectionState::S, 1.0}};
    case InfectionState::E:
      if (inputs.days_in_state == params.incubation_days) {
        return {{InfectionState::I, 1.0}};
      }
      return {{InfectionState::E, 1.0}};
    case InfectionState::I: {
      if (inputs.days_in_state != params.infectious_days) {
        return {{InfectionState::I, 1.0}};
      }
      const double gamma = inputs.hospitalized ? params.gamma1 : params.gamma0;
      return {{InfectionState::R, 1.0 - gamma}, {InfectionState::D, gamma}};
    }
    case InfectionState::R:
      return {{InfectionState::R, 1.0}};
    case InfectionState::D:
      return {{InfectionState::D, 1.0}};
  }
  return {};
}

}  // namespace cocoa_abm
