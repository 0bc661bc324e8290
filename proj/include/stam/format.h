#pragma once

#include <string>
#include <vector>

namespace stam {

enum class ModeKind { Dense, Compressed };

/// Storage format of one tensor mode (level).  Dense levels support O(1)
/// locate by coordinate; compressed levels store only the coordinates that
/// are present and, when ordered, keep them sorted within each position
/// range.
struct ModeFormat {
  ModeKind kind = ModeKind::Dense;
  bool ordered = true;

  bool operator==(const ModeFormat&) const = default;
};

inline ModeFormat dense() { return {ModeKind::Dense, true}; }
inline ModeFormat compressed(bool ordered = true) {
  return {ModeKind::Compressed, ordered};
}

/// Per-mode level formats plus the order the modes are stored in.  Level d
/// of the storage holds mode modeOrdering[d]; (0,1) for a row-major matrix,
/// (1,0) for column-major.
class TensorFormat {
 public:
  TensorFormat() = default;
  explicit TensorFormat(std::vector<ModeFormat> modeFormats);
  TensorFormat(std::vector<ModeFormat> modeFormats,
               std::vector<int> modeOrdering);

  int order() const { return (int)modeFormats_.size(); }

  /// Format of storage level d (after mode reordering).
  const ModeFormat& levelFormat(int level) const;
  /// Mode stored at level d.
  int levelMode(int level) const;
  const std::vector<int>& modeOrdering() const { return modeOrdering_; }

  bool allDense() const;
  /// True when every compressed level keeps coordinates sorted.
  bool ordered() const;

  std::string str() const;

  bool operator==(const TensorFormat&) const = default;

 private:
  std::vector<ModeFormat> modeFormats_;  // by storage level
  std::vector<int> modeOrdering_;        // level -> mode
};

TensorFormat denseFormat(int order);
TensorFormat csr();
TensorFormat csc();
TensorFormat dcsr();
/// First mode dense, remaining modes compressed ordered.
TensorFormat csf(int order);

/// Parses "dense", "csr", "csc", "dcsr" or "csf"; order disambiguates dense
/// and csf, which exist for any order.
TensorFormat formatFromName(const std::string& name, int order);

}  // namespace stam
