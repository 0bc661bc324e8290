#include "stam/workspace.h"

#include <algorithm>

namespace stam {

Workspace::Workspace(std::vector<int64_t> dimensions)
    : dimensions_(std::move(dimensions)) {
  int64_t total = 1;
  for (int64_t d : dimensions_) {
    STAM_IASSERT(d > 0, "workspace dimensions must be positive");
    total *= d;
  }
  vals_.assign(total, 0.0);
  wflag_.assign(total, false);
}

int64_t Workspace::linearize(const std::vector<int64_t>& coords) const {
  STAM_IASSERT(coords.size() == dimensions_.size(),
               "workspace coordinate arity mismatch");
  int64_t p = 0;
  for (size_t d = 0; d < dimensions_.size(); d++) {
    p = p * dimensions_[d] + coords[d];
  }
  return p;
}

void Workspace::boundsCheck(int64_t coord) const {
  if (coord < 0 || coord >= size()) {
    fail(ErrorCode::OutOfRange, "workspace coordinate out of range");
  }
}

void Workspace::insert(int64_t coord, double value, bool accumulate) {
  boundsCheck(coord);
  if (accumulate) {
    vals_[coord] += value;
  } else {
    vals_[coord] = value;
  }
  touched_++;
  if (!wflag_[coord]) {
    wflag_[coord] = true;
    wlist_.push_back(coord);
  }
}

void Workspace::mark(int64_t coord) {
  boundsCheck(coord);
  touched_++;
  if (!wflag_[coord]) {
    wflag_[coord] = true;
    wlist_.push_back(coord);
  }
}

double Workspace::value(int64_t coord) const {
  boundsCheck(coord);
  return vals_[coord];
}

std::vector<std::pair<int64_t, double>> Workspace::drain(bool sort) {
  if (sort) std::sort(wlist_.begin(), wlist_.end());
  std::vector<std::pair<int64_t, double>> out;
  out.reserve(wlist_.size());
  for (int64_t c : wlist_) {
    out.emplace_back(c, vals_[c]);
  }
  reset();
  return out;
}

void Workspace::reset() {
  for (int64_t c : wlist_) {
    vals_[c] = 0.0;
    wflag_[c] = false;
    touched_++;
  }
  wlist_.clear();
}

void Workspace::checkClean() const {
  for (size_t c = 0; c < wflag_.size(); c++) {
    if (wflag_[c] || vals_[c] != 0.0) {
      fail(ErrorCode::Internal, "workspace not clean after reset");
    }
  }
  if (!wlist_.empty()) {
    fail(ErrorCode::Internal, "workspace wlist not empty after reset");
  }
}

}  // namespace stam
