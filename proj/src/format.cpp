#include "stam/format.h"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "stam/error.h"

namespace stam {

TensorFormat::TensorFormat(std::vector<ModeFormat> modeFormats)
    : modeFormats_(std::move(modeFormats)),
      modeOrdering_(modeFormats_.size()) {
  std::iota(modeOrdering_.begin(), modeOrdering_.end(), 0);
}

TensorFormat::TensorFormat(std::vector<ModeFormat> modeFormats,
                           std::vector<int> modeOrdering)
    : modeFormats_(std::move(modeFormats)),
      modeOrdering_(std::move(modeOrdering)) {
  if (modeOrdering_.size() != modeFormats_.size()) {
    fail(ErrorCode::OrderMismatch,
         "mode ordering length does not match number of mode formats");
  }
  std::vector<bool> seen(modeOrdering_.size(), false);
  for (int mode : modeOrdering_) {
    if (mode < 0 || mode >= (int)modeOrdering_.size() || seen[mode]) {
      fail(ErrorCode::OrderMismatch, "mode ordering is not a permutation");
    }
    seen[mode] = true;
  }
}

const ModeFormat& TensorFormat::levelFormat(int level) const {
  STAM_IASSERT(level >= 0 && level < order(), "level out of range");
  return modeFormats_[level];
}

int TensorFormat::levelMode(int level) const {
  STAM_IASSERT(level >= 0 && level < order(), "level out of range");
  return modeOrdering_[level];
}

bool TensorFormat::allDense() const {
  return std::all_of(modeFormats_.begin(), modeFormats_.end(),
                     [](const ModeFormat& f) {
                       return f.kind == ModeKind::Dense;
                     });
}

bool TensorFormat::ordered() const {
  return std::all_of(modeFormats_.begin(), modeFormats_.end(),
                     [](const ModeFormat& f) {
                       return f.kind == ModeKind::Dense || f.ordered;
                     });
}

std::string TensorFormat::str() const {
  std::ostringstream out;
  out << "{";
  for (int d = 0; d < order(); d++) {
    if (d > 0) out << ",";
    out << (modeFormats_[d].kind == ModeKind::Dense ? "dense" : "compressed");
  }
  out << "}";
  bool identity = true;
  for (int d = 0; d < order(); d++) identity &= (modeOrdering_[d] == d);
  if (!identity) {
    out << "(";
    for (int d = 0; d < order(); d++) {
      if (d > 0) out << ",";
      out << modeOrdering_[d];
    }
    out << ")";
  }
  return out.str();
}

TensorFormat denseFormat(int order) {
  return TensorFormat(std::vector<ModeFormat>(order, dense()));
}

TensorFormat csr() { return TensorFormat({dense(), compressed()}); }

TensorFormat csc() {
  return TensorFormat({dense(), compressed()}, {1, 0});
}

TensorFormat dcsr() { return TensorFormat({compressed(), compressed()}); }

TensorFormat csf(int order) {
  std::vector<ModeFormat> formats(order, compressed());
  formats[0] = dense();
  return TensorFormat(std::move(formats));
}

TensorFormat formatFromName(const std::string& name, int order) {
  if (name == "dense") return denseFormat(order);
  if (name == "csf") return csf(order);
  if (name == "csr" || name == "csc" || name == "dcsr") {
    if (order != 2) {
      fail(ErrorCode::OrderMismatch, name + " requires an order-2 tensor");
    }
    if (name == "csr") return csr();
    if (name == "csc") return csc();
    return dcsr();
  }
  fail(ErrorCode::Parse, "unknown format name: " + name);
}

}  // namespace stam
