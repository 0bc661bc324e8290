#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "stam/format.h"

namespace stam {

/// Tensor values plus the sparse index structures of its compressed levels.
/// Levels nest by the format's mode ordering: positions of level d subdivide
/// the positions of level d-1.  Dense levels are implicit (position
/// arithmetic); compressed levels carry pos/idx arrays in the usual
/// CSR-generalized form.  Storage is immutable once built.
class TensorStorage {
 public:
  struct Level {
    ModeFormat format;
    std::vector<int64_t> pos;  // empty for dense levels
    std::vector<int64_t> idx;  // empty for dense levels
  };

  TensorStorage() = default;
  /// Empty storage: zero-filled for an all-dense format, zero stored entries
  /// otherwise.
  TensorStorage(std::vector<int64_t> dimensions, TensorFormat format);

  int order() const { return (int)dimensions_.size(); }
  const std::vector<int64_t>& dimensions() const { return dimensions_; }
  const TensorFormat& format() const { return format_; }
  const Level& level(int d) const { return levels_[d]; }
  const std::vector<double>& vals() const { return vals_; }
  std::vector<double>& vals() { return vals_; }

  /// Dimension of storage level d (the dimension of the mode stored there).
  int64_t levelDimension(int d) const;

  /// Number of positions at level d given the position count of level d-1.
  int64_t levelSize(int d) const;

  /// Number of stored components (length of the value array).
  int64_t storedCount() const { return (int64_t)vals_.size(); }

  /// Position of the component at `coords` (mode order), or nullopt if the
  /// coordinate is not stored.  Dense levels use position arithmetic;
  /// ordered compressed levels binary search, unordered ones scan.
  std::optional<int64_t> locate(const std::vector<int64_t>& coords) const;

  /// Child position range of compressed level d under parent position, as
  /// [begin, end) into that level's idx array.  Level d must be compressed.
  std::pair<int64_t, int64_t> positionRange(int d, int64_t parentPos) const;

  /// Coordinate stored at `position` of compressed level d.
  int64_t coordinate(int d, int64_t position) const;

  /// Throws if any pos/idx/vals invariant is violated (monotone pos arrays,
  /// coordinate bounds, ordering of ordered levels, value array length).
  void validate() const;

  /// All stored coordinates with their values, in storage order.
  std::vector<std::pair<std::vector<int64_t>, double>> entries() const;

 private:
  friend class TensorBuilder;

  std::vector<int64_t> dimensions_;
  TensorFormat format_;
  std::vector<Level> levels_;
  std::vector<double> vals_;
};

/// Yields the (coordinate, position) pairs of one storage level under a
/// parent position: stored coordinates for compressed levels, 0..dim-1 for
/// dense levels.
std::vector<std::pair<int64_t, int64_t>> iterateLevel(
    const TensorStorage& storage, int level, int64_t parentPos);

/// Append-only assembler for TensorStorage.  Components must arrive in
/// nondecreasing lexicographic order of their level coordinates; duplicates
/// are combined by addition.  Index and value arrays grow by repeated
/// doubling and the builder tracks the bytes it allocates.
class TensorBuilder {
 public:
  TensorBuilder(std::vector<int64_t> dimensions, TensorFormat format);

  /// Appends one component; `coords` are in mode order.
  void append(const std::vector<int64_t>& coords, double value);

  /// Appends a run of (coordinate, value) entries for the innermost level
  /// under the given outer coordinates, in the order they should be stored.
  void appendRow(const std::vector<int64_t>& outerCoords,
                 const std::vector<std::pair<int64_t, double>>& entries);

  TensorStorage finalize();

  int64_t bytesAllocated() const { return bytesAllocated_; }

 private:
  void grow(std::vector<int64_t>& arr, int64_t needed);
  void growVals(int64_t needed);
  void closeLevels(int changedLevel);

  std::vector<int64_t> dimensions_;
  TensorFormat format_;
  std::vector<TensorStorage::Level> levels_;
  std::vector<int64_t> levelCount_;   // entries appended per level so far
  std::vector<double> vals_;
  int64_t valsCount_ = 0;
  std::vector<int64_t> last_;         // level coords of last append
  bool empty_ = true;
  bool finalized_ = false;
  int64_t bytesAllocated_ = 0;
};

/// Packs unordered COO triples (mode-order coordinates) into storage of the
/// given format.  Duplicate coordinates are summed.
TensorStorage fromCoo(
    std::vector<int64_t> dimensions, TensorFormat format,
    std::vector<std::pair<std::vector<int64_t>, double>> entries);

}  // namespace stam
