#pragma once

#include <map>

#include "cocoa_abm/domain.hpp"

namespace cocoa_abm {

// Inputs the transition kernel conditions on: current state, contact with an
// infectious agent this step, whole days elapsed in the current state, and
// ward status.
struct KernelInputs {
  InfectionState state = InfectionState::S;
  bool contact = false;
  int days_in_state = 0;
  bool hospitalized = false;
};

struct KernelParams {
  double beta = 0.0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  int incubation_days = 0;
  int infectious_days = 0;
};

// Per-step draw for a susceptible agent. One Bernoulli(beta) per step however
// many infectious agents are in range; contact is binary.
InfectionState step_transition_S(bool contact, double beta, double u);

// Day-boundary transition out of E: deterministic once the incubation period
// has elapsed.
InfectionState day_transition_E(int days_in_state, int incubation_days);

// Day-boundary transition out of I: on the final infectious day the agent
// dies with probability gamma1 if hospitalized, gamma0 otherwise, and
// recovers with the complement.
InfectionState day_transition_I(int days_in_state, int infectious_days,
                                bool hospitalized, double gamma0,
                                double gamma1, double u);

// Exact transition distribution for the given conditions. R and D are point
// masses on themselves. Every returned row sums to 1 exactly.
std::map<InfectionState, double> kernel_distribution(
    const KernelInputs& inputs, const KernelParams& params);

}  // namespace cocoa_abm
