#pragma once

#include <cstdint>
#include <vector>

#include "stam/error.h"

namespace stam {

/// Dense scatter workspace: a value array plus the coordinate list (wlist)
/// and guard flags (wflag) that track which entries have been inserted.
/// Reset walks only the inserted coordinates, so its cost is proportional to
/// the number of insertions, not the workspace size.
class Workspace {
 public:
  explicit Workspace(std::vector<int64_t> dimensions);

  int64_t size() const { return (int64_t)vals_.size(); }
  int64_t nnz() const { return (int64_t)wlist_.size(); }
  const std::vector<int64_t>& dimensions() const { return dimensions_; }
  const std::vector<int64_t>& insertedCoords() const { return wlist_; }

  int64_t linearize(const std::vector<int64_t>& coords) const;

  /// Combines `value` into the entry (accumulate adds, otherwise assigns)
  /// and records the coordinate in wlist unless the guard flag is already
  /// set.
  void insert(int64_t coord, double value, bool accumulate);

  /// Marks the coordinate as present without touching its value (assembly
  /// kernels maintain only the index).
  void mark(int64_t coord);

  double value(int64_t coord) const;
  bool present(int64_t coord) const { return wflag_[coord]; }

  /// Yields (coordinate, value) for the inserted entries, sorted by
  /// coordinate iff `sort`, then resets the workspace.
  std::vector<std::pair<int64_t, double>> drain(bool sort);

  /// Zeroes the touched values and guard flags and clears wlist.
  void reset();

  /// Entries touched by insert/mark/reset since construction; used by tests
  /// to confirm reset cost is proportional to insertions.
  int64_t touchedEntries() const { return touched_; }

  /// Throws unless every guard flag is clear and every value is zero at the
  /// previously inserted coordinates (the reset invariant).
  void checkClean() const;

 private:
  void boundsCheck(int64_t coord) const;

  std::vector<int64_t> dimensions_;
  std::vector<double> vals_;
  std::vector<bool> wflag_;
  std::vector<int64_t> wlist_;
  int64_t touched_ = 0;
};

}  // namespace stam
