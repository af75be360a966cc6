#include "cocoa_abm/appmodel.hpp"

#include <algorithm>
#include <ostream>

namespace cocoa_abm {

bool is_notification_active(const Agent& agent, int day) {
  return agent.notified_until_day.has_value() &&
         day <= *agent.notified_until_day;
}

bool maybe_register(Agent& agent, double registration_rate,
                    RngStream& app_stream) {
  if (!agent.app_user) {
    agent.registered = false;
    return false;
  }
  agent.registered = app_stream.next_bernoulli(registration_rate);
  return agent.registered;
}

int process_contacts(const std::vector<ContactEvent>& events,
                     std::vector<Agent>& agents, int day,
                     int notification_days,
                     std::vector<ContactLogEntry>* log) {
  int notifying = 0;
  for (const ContactEvent& ev : events) {
    const Agent& infector = agents[static_cast<std::size_t>(ev.infector_id)];
    Agent& other = agents[static_cast<std::size_t>(ev.other_id)];
    if (!infector.app_user || !other.app_user) continue;
    const bool notifies = infector.registered;
    if (notifies) {
      other.notified_until_day = day + notification_days;
      ++notifying;
    }
    if (log) {
      log->push_back(
          ContactLogEntry{ev.day, ev.step, ev.infector_id, ev.other_id,
                          notifies});
    }
  }
  return notifying;
}

void prune_contact_log(std::vector<ContactLogEntry>& log, int day,
                       int notification_days) {
  const auto first_kept =
      std::find_if(log.begin(), log.end(), [&](const ContactLogEntry& e) {
        return day - e.day < notification_days;
      });
  log.erase(log.begin(), first_kept);
}

void write_contact_log_csv(std::ostream& os,
                           const std::vector<ContactLogEntry>& log) {
  os << "day,step,infector_id,other_id,notified\n";
  for (const ContactLogEntry& e : log) {
    os << e.day << ',' << e.step << ',' << e.infector_id << ',' << e.other_id
       << ',' << (e.notified ? 1 : 0) << '\n';
  }
}

}  // namespace cocoa_abm
