#include "cocoa_abm/contact.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace cocoa_abm {

void SpatialIndex::build(const std::vector<IndexedPosition>& positions,
                         double cell_size) {
  cell_size_ = cell_size;
  entries_.assign(positions.begin(), positions.end());
  const std::size_t n = entries_.size();
  entry_next_.assign(n, -1);
  if (n == 0) {
    slot_keys_.clear();
    slot_heads_.clear();
    slot_mask_ = 0;
    near_keys_.clear();
    near_mask_ = 0;
    min_cx_ = max_cx_ = min_cy_ = max_cy_ = 0;
    return;
  }

  const std::size_t nslots = std::bit_ceil(std::max<std::size_t>(8, n * 2));
  slot_keys_.assign(nslots, kEmptySlot);
  slot_heads_.assign(nslots, -1);
  slot_mask_ = nslots - 1;

  min_cx_ = min_cy_ = std::numeric_limits<std::int64_t>::max();
  max_cx_ = max_cy_ = std::numeric_limits<std::int64_t>::min();

  std::size_t distinct = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::int64_t cx = cell_coord(entries_[i].pos.x);
    const std::int64_t cy = cell_coord(entries_[i].pos.y);
    min_cx_ = std::min(min_cx_, cx);
    max_cx_ = std::max(max_cx_, cx);
    min_cy_ = std::min(min_cy_, cy);
    max_cy_ = std::max(max_cy_, cy);
    const std::uint64_t key = pack_cell(cx, cy);
    std::size_t slot = probe_start(key);
    while (slot_keys_[slot] != kEmptySlot && slot_keys_[slot] != key) {
      slot = (slot + 1) & slot_mask_;
    }
    if (slot_keys_[slot] == kEmptySlot) {
      slot_keys_[slot] = key;
      ++distinct;
    }
    entry_next_[i] = slot_heads_[slot];
    slot_heads_[slot] = static_cast<int>(i);
  }

  const std::size_t nnear =
      std::bit_ceil(std::max<std::size_t>(16, distinct * 9 * 2));
  near_keys_.assign(nnear, kEmptySlot);
  near_mask_ = nnear - 1;
  for (std::size_t s = 0; s < nslots; ++s) {
    if (slot_keys_[s] == kEmptySlot) continue;
    const auto cx = static_cast<std::int64_t>(
        static_cast<std::int32_t>(slot_keys_[s] >> 32));
    const auto cy = static_cast<std::int64_t>(
        static_cast<std::int32_t>(slot_keys_[s] & 0xFFFFFFFFULL));
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const std::uint64_t key = pack_cell(cx + dx, cy + dy);
        std::uint64_t h = key * 0x9E3779B97F4A7C15ULL;
        h ^= h >> 29;
        std::size_t slot = static_cast<std::size_t>(h) & near_mask_;
        while (near_keys_[slot] != kEmptySlot && near_keys_[slot] != key) {
          slot = (slot + 1) & near_mask_;
        }
        near_keys_[slot] = key;
      }
    }
  }
}

SpatialIndex build_index(const std::vector<IndexedPosition>& positions,
                         double cell_size) {
  SpatialIndex index;
  index.build(positions, cell_size);
  return index;
}

void contacts_for_step(const std::vector<Agent>& agents, double contact_radius,
                       int day, int step, ContactBuffers& buffers,
                       std::vector<ContactEvent>& out) {
  out.clear();
  buffers.infectious.clear();
  for (const Agent& a : agents) {
    if (a.state == InfectionState::I && !a.hospitalized) {
      buffers.infectious.push_back({a.id, a.position});
    }
  }
  if (buffers.infectious.empty()) {
    buffers.index.build(buffers.infectious, contact_radius);
    return;
  }
  buffers.index.build(buffers.infectious, contact_radius);

  for (const Agent& a : agents) {
    if (a.state == InfectionState::D || a.hospitalized) continue;
    if (!buffers.index.any_near(a.position)) continue;
    buffers.index.for_each_within(
        a.position, contact_radius, [&](const IndexedPosition& e) {
          if (e.id != a.id) out.push_back(ContactEvent{e.id, a.id, day, step});
        });
  }
  std::sort(out.begin(), out.end(),
            [](const ContactEvent& a, const ContactEvent& b) {
              if (a.other_id != b.other_id) return a.other_id < b.other_id;
              return a.infector_id < b.infector_id;
            });
}

std::vector<ContactEvent> contacts_for_step(const std::vector<Agent>& agents,
                                            double contact_radius, int day,
                                            int step) {
  ContactBuffers buffers;
  std::vector<ContactEvent> out;
  contacts_for_step(agents, contact_radius, day, step, buffers, out);
  return out;
}

}  // namespace cocoa_abm
