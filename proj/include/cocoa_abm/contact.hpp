#pragma once

#include <cstdint>
#include <vector>

#include "cocoa_abm/domain.hpp"

namespace cocoa_abm {

// One qualifying proximity: infector (state I, out of ward, alive) and any
// other live out-of-ward agent within contact_radius at this step.
struct ContactEvent {
  int infector_id = 0;
  int other_id = 0;
  int day = 0;
  int step = 0;
};

struct IndexedPosition {
  int id = 0;
  Vec2 pos;
};

// Uniform grid over the indexed agents, cell edge = contact_radius. Open
// addressing keyed by cell so a query is a handful of probes; rebuilt every
// step over the infectious agents only, which keeps it tiny.
class SpatialIndex {
 public:
  void build(const std::vector<IndexedPosition>& positions, double cell_size);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  double cell_size() const { return cell_size_; }

  // Entries of one cell, walked via the per-cell chain.
  template <typename Fn>
  void for_each_in_cell(std::int64_t cx, std::int64_t cy, Fn&& fn) const {
    if (slot_keys_.empty()) return;
    const std::uint64_t key = pack_cell(cx, cy);
    std::size_t slot = probe_start(key);
    while (slot_keys_[slot] != kEmptySlot) {
      if (slot_keys_[slot] == key) {
        for (int e = slot_heads_[slot]; e >= 0; e = entry_next_[e]) {
          fn(entries_[e]);
        }
        return;
      }
      slot = (slot + 1) & slot_mask_;
    }
  }

  // True iff some indexed entry lies in the 3x3 cell neighborhood of pos.
  // One probe into the dilated-occupancy set, so the common miss is cheap.
  bool any_near(Vec2 pos) const {
    if (near_keys_.empty()) return false;
    const std::uint64_t key = pack_cell(cell_coord(pos.x), cell_coord(pos.y));
    std::uint64_t h = key * 0x9E3779B97F4A7C15ULL;
    h ^= h >> 29;
    std::size_t slot = static_cast<std::size_t>(h) & near_mask_;
    while (near_keys_[slot] != kEmptySlot) {
      if (near_keys_[slot] == key) return true;
      slot = (slot + 1) & near_mask_;
    }
    return false;
  }

  // All indexed entries within `radius` of pos (boundary inclusive), via the
  // 3x3 cell neighborhood.
  template <typename Fn>
  void for_each_within(Vec2 pos, double radius, Fn&& fn) const {
    if (entries_.empty()) return;
    const std::int64_t cx = cell_coord(pos.x);
    const std::int64_t cy = cell_coord(pos.y);
    if (cx + 1 < min_cx_ || cx - 1 > max_cx_ || cy + 1 < min_cy_ ||
        cy - 1 > max_cy_) {
      return;
    }
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        for_each_in_cell(cx + dx, cy + dy, [&](const IndexedPosition& e) {
          if (distance(e.pos, pos) <= radius) fn(e);
        });
      }
    }
  }

  std::int64_t cell_coord(double v) const {
    return static_cast<std::int64_t>(std::floor(v / cell_size_));
  }

 private:
  static constexpr std::uint64_t kEmptySlot = ~std::uint64_t{0};

  static std::uint64_t pack_cell(std::int64_t cx, std::int64_t cy) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(cx)) << 32) |
           static_cast<std::uint64_t>(static_cast<std::uint32_t>(cy));
  }

  std::size_t probe_start(std::uint64_t key) const {
    std::uint64_t h = key * 0x9E3779B97F4A7C15ULL;
    h ^= h >> 29;
    return static_cast<std::size_t>(h) & slot_mask_;
  }

  double cell_size_ = 1.0;
  std::vector<IndexedPosition> entries_;
  std::vector<int> entry_next_;
  std::vector<std::uint64_t> slot_keys_;
  std::vector<int> slot_heads_;
  std::size_t slot_mask_ = 0;
  std::vector<std::uint64_t> near_keys_;  // occupied cells dilated by 1
  std::size_t near_mask_ = 0;
  std::int64_t min_cx_ = 0, max_cx_ = 0, min_cy_ = 0, max_cy_ = 0;
};

SpatialIndex build_index(const std::vector<IndexedPosition>& positions,
                         double cell_size);

// Scratch buffers so the per-step query allocates nothing in steady state.
struct ContactBuffers {
  SpatialIndex index;
  std::vector<IndexedPosition> infectious;
};

// All contact events for the current step, sorted by (other_id, infector_id).
// The index holds infectious agents only; every other live out-of-ward agent
// queries its 3x3 neighborhood. Dead and hospitalized agents appear on
// neither side.
void contacts_for_step(const std::vector<Agent>& agents, double contact_radius,
                       int day, int step, ContactBuffers& buffers,
                       std::vector<ContactEvent>& out);

std::vector<ContactEvent> contacts_for_step(const std::vector<Agent>& agents,
                                            double contact_radius, int day,
                                            int step);

}  // namespace cocoa_abm
