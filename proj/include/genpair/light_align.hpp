#pragma once

#include "genpair/alignment.hpp"
#include "genpair/packed_sequence.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace genpair {

/// Per-base equality bitset between a read and a shifted reference window.
class HammingMask {
public:
  HammingMask() = default;
  HammingMask(std::size_t length, std::vector<std::uint64_t> words)
      : length_(length), words_(std::move(words)) {}

  std::size_t size() const noexcept { return length_; }
  bool test(std::size_t i) const noexcept { return (words_[i / 64] >> (i % 64)) & 1u; }
  std::size_t count() const noexcept;
  /// Length of the run of 1s starting at bit 0.
  std::size_t leading_ones() const noexcept;
  /// Length of the run of 1s ending at bit size()-1.
  std::size_t trailing_ones() const noexcept;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

private:
  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Bit i is set iff read[i] == window[i + shift], neither base is N and i + shift is inside
/// the window. Computed 32 bases at a time on the packed words.
HammingMask hamming_mask(const PackedSequence& read, const PackedSequence& window, int shift);

/// Number of shifted masks needed to cover edit runs of up to max_edits bases.
constexpr std::size_t count_masks_needed(std::size_t max_edits) noexcept { return 2 * max_edits + 1; }

enum class EditKind : std::uint8_t { Exact, Mismatches, Insertion, Deletion };

struct EditHypothesis {
  EditKind kind = EditKind::Exact;
  std::uint32_t count = 0;    // mismatches, or gap run length
  std::uint32_t position = 0; // read offset of the first edit (gap: bases before the gap)
  friend bool operator==(const EditHypothesis&, const EditHypothesis&) = default;
};

struct LightResult {
  EditHypothesis hypothesis;
  Alignment alignment; // ref_start is relative to the window
};

/**
 * DP-free alignment of reads that carry a single edit type.
 *
 * The window is the reference around a candidate start with kPad extra bases on each side,
 * so the read's nominal placement begins at window offset kPad. Hypotheses are tried in
 * descending score order:
 *
 *   exact, 1 mismatch, 1 deletion, 2-base deletion, 1 insertion, 3-base deletion,
 *   2 mismatches, 4-base deletion, 2-base insertion, 5-base deletion
 *
 * and the first one that reproduces the read exactly somewhere in the window is returned.
 * Any alignment outside this list scores strictly lower than every entry in it, so an
 * accepted result always has the affine-gap optimum score for (read, window).
 */
class LightAligner {
public:
  static constexpr int kPad = 5;
  static constexpr std::uint32_t kMaxMismatches = 2;
  static constexpr std::uint32_t kMaxInsertion = 2;
  static constexpr std::uint32_t kMaxDeletion = 5;

  explicit LightAligner(ScoringScheme scheme = {}) : scheme_(scheme) {}

  /// Throws WindowTooShort unless window.size() == read.size() + 2 * kPad.
  std::optional<LightResult> classify(const PackedSequence& read, const PackedSequence& window) const;

  /// Score of a hypothesis for a read of the given length.
  int hypothesis_score(EditKind kind, std::uint32_t count, std::size_t read_len) const noexcept;

private:
  ScoringScheme scheme_;
};

std::optional<LightResult> classify(const PackedSequence& read, const PackedSequence& window,
                                    const ScoringScheme& scheme = {});

} // namespace genpair
