#include "stam/storage.h"

#include <algorithm>
#include <sstream>

#include "stam/error.h"

namespace stam {

static int64_t product(const std::vector<int64_t>& dims) {
  int64_t p = 1;
  for (int64_t d : dims) p *= d;
  return p;
}

TensorStorage::TensorStorage(std::vector<int64_t> dimensions,
                             TensorFormat format)
    : dimensions_(std::move(dimensions)), format_(std::move(format)) {
  if (dimensions_.empty()) {
    fail(ErrorCode::OrderMismatch, "tensor must have at least one dimension");
  }
  if ((int)dimensions_.size() != format_.order()) {
    fail(ErrorCode::OrderMismatch,
         "format order does not match number of dimensions");
  }
  for (int64_t dim : dimensions_) {
    if (dim <= 0) {
      fail(ErrorCode::DimensionMismatch, "dimensions must be positive");
    }
  }
  levels_.resize(order());
  int64_t positions = 1;
  for (int d = 0; d < order(); d++) {
    levels_[d].format = format_.levelFormat(d);
    if (levels_[d].format.kind == ModeKind::Dense) {
      positions *= levelDimension(d);
    } else {
      levels_[d].pos.assign(positions + 1, 0);
      positions = 0;
    }
  }
  vals_.assign(positions, 0.0);
}

int64_t TensorStorage::levelDimension(int d) const {
  return dimensions_[format_.levelMode(d)];
}

int64_t TensorStorage::levelSize(int d) const {
  if (d < 0) return 1;
  if (levels_[d].format.kind == ModeKind::Dense) {
    return levelSize(d - 1) * levelDimension(d);
  }
  return (int64_t)levels_[d].idx.size();
}

std::optional<int64_t> TensorStorage::locate(
    const std::vector<int64_t>& coords) const {
  if ((int)coords.size() != order()) {
    fail(ErrorCode::ArityMismatch, "locate: wrong number of coordinates");
  }
  int64_t p = 0;
  for (int d = 0; d < order(); d++) {
    int64_t c = coords[format_.levelMode(d)];
    if (c < 0 || c >= levelDimension(d)) {
      fail(ErrorCode::OutOfRange, "locate: coordinate out of range");
    }
    const Level& level = levels_[d];
    if (level.format.kind == ModeKind::Dense) {
      p = p * levelDimension(d) + c;
    } else {
      auto [begin, end] = positionRange(d, p);
      const int64_t* first = level.idx.data() + begin;
      const int64_t* last = level.idx.data() + end;
      if (level.format.ordered) {
        const int64_t* it = std::lower_bound(first, last, c);
        if (it == last || *it != c) return std::nullopt;
        p = it - level.idx.data();
      } else {
        const int64_t* it = std::find(first, last, c);
        if (it == last) return std::nullopt;
        p = it - level.idx.data();
      }
    }
  }
  return p;
}

std::pair<int64_t, int64_t> TensorStorage::positionRange(
    int d, int64_t parentPos) const {
  const Level& level = levels_[d];
  STAM_IASSERT(level.format.kind == ModeKind::Compressed,
               "positionRange on dense level");
  STAM_IASSERT(parentPos >= 0 && parentPos + 1 < (int64_t)level.pos.size(),
               "invalid parent position");
  return {level.pos[parentPos], level.pos[parentPos + 1]};
}

int64_t TensorStorage::coordinate(int d, int64_t position) const {
  return levels_[d].idx[position];
}

void TensorStorage::validate() const {
  int64_t positions = 1;
  for (int d = 0; d < order(); d++) {
    const Level& level = levels_[d];
    if (level.format.kind == ModeKind::Dense) {
      if (!level.pos.empty() || !level.idx.empty()) {
        fail(ErrorCode::Internal, "dense level carries pos/idx arrays");
      }
      positions *= levelDimension(d);
      continue;
    }
    if ((int64_t)level.pos.size() != positions + 1) {
      fail(ErrorCode::Internal, "pos array length != parent positions + 1");
    }
    if (level.pos.front() != 0) fail(ErrorCode::Internal, "pos[0] != 0");
    for (size_t k = 1; k < level.pos.size(); k++) {
      if (level.pos[k] < level.pos[k - 1]) {
        fail(ErrorCode::Internal, "pos array is not nondecreasing");
      }
    }
    if (level.pos.back() != (int64_t)level.idx.size()) {
      fail(ErrorCode::Internal, "pos[last] != length(idx)");
    }
    int64_t dim = levelDimension(d);
    for (int64_t e : level.idx) {
      if (e < 0 || e >= dim) {
        fail(ErrorCode::Internal, "idx entry out of range");
      }
    }
    if (level.format.ordered) {
      for (size_t k = 0; k + 1 < level.pos.size(); k++) {
        for (int64_t p = level.pos[k] + 1; p < level.pos[k + 1]; p++) {
          if (level.idx[p - 1] >= level.idx[p]) {
            fail(ErrorCode::Internal,
                 "coordinates not strictly increasing in ordered level");
          }
        }
      }
    }
    positions = (int64_t)level.idx.size();
  }
  if ((int64_t)vals_.size() != positions) {
    fail(ErrorCode::Internal, "value array length != last level positions");
  }
}

static void collectEntries(
    const TensorStorage& storage, int d, int64_t parentPos,
    std::vector<int64_t>& coords,
    std::vector<std::pair<std::vector<int64_t>, double>>& out) {
  for (auto [c, p] : iterateLevel(storage, d, parentPos)) {
    coords[storage.format().levelMode(d)] = c;
    if (d + 1 == storage.order()) {
      out.emplace_back(coords, storage.vals()[p]);
    } else {
      collectEntries(storage, d + 1, p, coords, out);
    }
  }
}

std::vector<std::pair<std::vector<int64_t>, double>> TensorStorage::entries()
    const {
  std::vector<std::pair<std::vector<int64_t>, double>> out;
  std::vector<int64_t> coords(order());
  collectEntries(*this, 0, 0, coords, out);
  return out;
}

std::vector<std::pair<int64_t, int64_t>> iterateLevel(
    const TensorStorage& storage, int level, int64_t parentPos) {
  if (level < 0 || level >= storage.order()) {
    fail(ErrorCode::OutOfRange, "invalid level index");
  }
  std::vector<std::pair<int64_t, int64_t>> out;
  const auto& lvl = storage.level(level);
  if (lvl.format.kind == ModeKind::Dense) {
    int64_t dim = storage.levelDimension(level);
    out.reserve(dim);
    for (int64_t c = 0; c < dim; c++) {
      out.emplace_back(c, parentPos * dim + c);
    }
  } else {
    auto [begin, end] = storage.positionRange(level, parentPos);
    out.reserve(end - begin);
    for (int64_t p = begin; p < end; p++) {
      out.emplace_back(lvl.idx[p], p);
    }
  }
  return out;
}

// --- TensorBuilder ---------------------------------------------------------

static constexpr int64_t kInitialCapacity = 1024;

TensorBuilder::TensorBuilder(std::vector<int64_t> dimensions,
                             TensorFormat format)
    : dimensions_(std::move(dimensions)), format_(std::move(format)) {
  if ((int)dimensions_.size() != format_.order()) {
    fail(ErrorCode::OrderMismatch,
         "format order does not match number of dimensions");
  }
  int order = format_.order();
  levels_.resize(order);
  levelCount_.assign(order, 0);
  last_.assign(order, -1);
  for (int d = 0; d < order; d++) {
    levels_[d].format = format_.levelFormat(d);
    if (levels_[d].format.kind == ModeKind::Compressed) {
      levels_[d].pos.push_back(0);
    }
  }
  if (format_.allDense()) {
    int64_t total = product(dimensions_);
    vals_.assign(total, 0.0);
    valsCount_ = total;
    bytesAllocated_ += total * (int64_t)sizeof(double);
  }
}

void TensorBuilder::grow(std::vector<int64_t>& arr, int64_t needed) {
  if ((int64_t)arr.capacity() >= needed) return;
  int64_t cap = std::max<int64_t>(kInitialCapacity, arr.capacity());
  while (cap < needed) cap *= 2;
  bytesAllocated_ += (cap - (int64_t)arr.capacity()) * (int64_t)sizeof(int64_t);
  arr.reserve(cap);
}

void TensorBuilder::growVals(int64_t needed) {
  if ((int64_t)vals_.capacity() < needed) {
    int64_t cap = std::max<int64_t>(kInitialCapacity, vals_.capacity());
    while (cap < needed) cap *= 2;
    bytesAllocated_ += (cap - (int64_t)vals_.capacity()) *
                       (int64_t)sizeof(double);
    vals_.reserve(cap);
  }
  if ((int64_t)vals_.size() < needed) vals_.resize(needed, 0.0);
}

void TensorBuilder::append(const std::vector<int64_t>& coords, double value) {
  STAM_IASSERT(!finalized_, "append after finalize");
  int order = format_.order();
  if ((int)coords.size() != order) {
    fail(ErrorCode::ArityMismatch, "append: wrong number of coordinates");
  }
  std::vector<int64_t> levelCoords(order);
  for (int d = 0; d < order; d++) {
    int64_t c = coords[format_.levelMode(d)];
    if (c < 0 || c >= dimensions_[format_.levelMode(d)]) {
      fail(ErrorCode::OutOfRange, "append: coordinate out of range");
    }
    levelCoords[d] = c;
  }

  int firstDiff = 0;
  if (!empty_) {
    while (firstDiff < order && levelCoords[firstDiff] == last_[firstDiff]) {
      firstDiff++;
    }
    if (firstDiff < order && levelCoords[firstDiff] < last_[firstDiff]) {
      std::ostringstream msg;
      msg << "component (";
      for (int d = 0; d < order; d++) {
        msg << (d ? "," : "") << coords[d];
      }
      msg << ") appended after a later coordinate";
      fail(ErrorCode::AppendOutOfOrder, msg.str());
    }
  }

  if (!empty_ && firstDiff == order) {
    // Exact duplicate: combine by addition.
    if (levels_[order - 1].format.kind == ModeKind::Compressed) {
      vals_[levelCount_[order - 1] - 1] += value;
    } else {
      int64_t p = 0;
      for (int d = 0; d < order; d++) {
        if (levels_[d].format.kind == ModeKind::Dense) {
          p = p * dimensions_[format_.levelMode(d)] + levelCoords[d];
        } else {
          p = levelCount_[d] - 1;
        }
      }
      vals_[p] += value;
    }
    return;
  }

  int64_t p = 0;  // parent position while descending
  for (int d = 0; d < order; d++) {
    TensorStorage::Level& level = levels_[d];
    if (level.format.kind == ModeKind::Dense) {
      p = p * dimensions_[format_.levelMode(d)] + levelCoords[d];
      continue;
    }
    if (d < firstDiff && !empty_) {
      p = levelCount_[d] - 1;
      continue;
    }
    // New entry under parent position p; close any parents we skipped.
    grow(level.pos, p + 2);
    while ((int64_t)level.pos.size() - 1 < p) {
      level.pos.push_back(levelCount_[d]);
    }
    grow(level.idx, levelCount_[d] + 1);
    level.idx.push_back(levelCoords[d]);
    levelCount_[d]++;
    p = levelCount_[d] - 1;
  }

  if (levels_[order - 1].format.kind == ModeKind::Compressed) {
    growVals(valsCount_ + 1);
    vals_[valsCount_++] = value;
  } else {
    growVals(p + 1);
    vals_[p] = value;
    valsCount_ = std::max(valsCount_, p + 1);
  }

  last_ = levelCoords;
  empty_ = false;
}

void TensorBuilder::appendRow(
    const std::vector<int64_t>& outerCoords,
    const std::vector<std::pair<int64_t, double>>& entries) {
  int order = format_.order();
  if ((int)outerCoords.size() != order - 1) {
    fail(ErrorCode::ArityMismatch, "appendRow: wrong number of outer coords");
  }
  std::vector<int64_t> coords(order);
  for (int d = 0; d + 1 < order; d++) {
    coords[format_.levelMode(d)] = outerCoords[d];
  }
  for (const auto& [c, v] : entries) {
    coords[format_.levelMode(order - 1)] = c;
    append(coords, v);
  }
}

TensorStorage TensorBuilder::finalize() {
  STAM_IASSERT(!finalized_, "finalize called twice");
  finalized_ = true;
  int order = format_.order();
  // Close trailing parent positions of every compressed level.
  int64_t positions = 1;
  for (int d = 0; d < order; d++) {
    TensorStorage::Level& level = levels_[d];
    if (level.format.kind == ModeKind::Dense) {
      positions *= dimensions_[format_.levelMode(d)];
      continue;
    }
    grow(level.pos, positions + 1);
    while ((int64_t)level.pos.size() < positions + 1) {
      level.pos.push_back(levelCount_[d]);
    }
    positions = levelCount_[d];
  }
  if (levels_[order - 1].format.kind == ModeKind::Dense) {
    growVals(positions);
    vals_.resize(positions);
  } else {
    vals_.resize(valsCount_);
  }

  TensorStorage storage;
  storage.dimensions_ = dimensions_;
  storage.format_ = format_;
  storage.levels_ = std::move(levels_);
  storage.vals_ = std::move(vals_);
  storage.validate();
  return storage;
}

TensorStorage fromCoo(
    std::vector<int64_t> dimensions, TensorFormat format,
    std::vector<std::pair<std::vector<int64_t>, double>> entries) {
  std::vector<int> ordering = format.modeOrdering();
  std::sort(entries.begin(), entries.end(),
            [&](const auto& a, const auto& b) {
              for (int mode : ordering) {
                if (a.first[mode] != b.first[mode]) {
                  return a.first[mode] < b.first[mode];
                }
              }
              return false;
            });
  TensorBuilder builder(std::move(dimensions), std::move(format));
  for (const auto& [coords, value] : entries) {
    builder.append(coords, value);
  }
  return builder.finalize();
}

}  // namespace stam
