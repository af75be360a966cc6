#pragma once

#include <iosfwd>
#include <vector>

#include "cocoa_abm/contact.hpp"
#include "cocoa_abm/domain.hpp"
#include "cocoa_abm/rng.hpp"

namespace cocoa_abm {

// Contact between two app users, kept for the retention window. `notified`
// records whether the infector was registered at contact time, i.e. whether
// the event actually raised a notification.
struct ContactLogEntry {
  int day = 0;
  int step = 0;
  int infector_id = 0;
  int other_id = 0;
  bool notified = false;
};

// True while the agent's notification window covers `day` (inclusive).
bool is_notification_active(const Agent& agent, int day);

// One registration draw at state-I onset. Non-users return false without
// consuming a draw; users draw Bernoulli(registration_rate) from their app
// stream. Stores the outcome in agent.registered.
bool maybe_register(Agent& agent, double registration_rate,
                    RngStream& app_stream);

// Applies one step's contact events to the app: when infector and other both
// run the app and the infector is registered, the other's notification window
// is set (or refreshed) to day + notification_days. Events between two app
// users are appended to `log` (when given) whether or not they notified.
// Returns the number of notifying events.
int process_contacts(const std::vector<ContactEvent>& events,
                     std::vector<Agent>& agents, int day,
                     int notification_days,
                     std::vector<ContactLogEntry>* log);

// Drops log entries older than the retention window: an entry from day d is
// kept while day - d < notification_days.
void prune_contact_log(std::vector<ContactLogEntry>& log, int day,
                       int notification_days);

// CSV export: day,step,infector_id,other_id,notified
void write_contact_log_csv(std::ostream& os,
                           const std::vector<ContactLogEntry>& log);

}  // namespace cocoa_abm
