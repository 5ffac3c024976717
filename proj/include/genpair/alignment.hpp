#pragma once

#include "genpair/packed_sequence.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace genpair {

/// Affine-gap scores. A gap of length k costs gap_open + k * gap_extend.
struct ScoringScheme {
  int match = 2;
  int mismatch = 8;
  int gap_open = 12;
  int gap_extend = 2;

  int gap_cost(int length) const noexcept { return gap_open + length * gap_extend; }
};

enum class CigarOpKind : char { Match = '=', Mismatch = 'X', Insertion = 'I', Deletion = 'D' };

struct CigarOp {
  std::uint32_t length;
  CigarOpKind op;
  friend bool operator==(const CigarOp&, const CigarOp&) = default;
};

class Cigar {
public:
  Cigar() = default;

  /// Appends, merging with the previous run when the op repeats.
  void push(CigarOpKind op, std::uint32_t length = 1);
  void reverse();

  const std::vector<CigarOp>& ops() const noexcept { return ops_; }
  bool empty() const noexcept { return ops_.empty(); }

  std::size_t read_length() const noexcept;
  std::size_t ref_length() const noexcept;

  /// "=/X" form, or legacy "M" form with matches and mismatches merged.
  std::string to_string(bool extended = true) const;
  static Cigar parse(std::string_view text);

  friend bool operator==(const Cigar&, const Cigar&) = default;

private:
  std::vector<CigarOp> ops_;
};

enum class AlignMethod : std::uint8_t { Exact, Light, DP };

constexpr char method_tag(AlignMethod m) noexcept {
  return m == AlignMethod::Exact ? 'E' : m == AlignMethod::Light ? 'L' : 'D';
}

struct Alignment {
  int score = 0;
  Cigar cigar;
  /// First consumed reference base, in the coordinates of the sequence the read was aligned to.
  std::uint64_t ref_start = 0;
  AlignMethod method = AlignMethod::DP;
};

/// Score implied by a CIGAR under the scheme.
int score_cigar(const Cigar& cigar, const ScoringScheme& scheme) noexcept;

/// True when replaying the CIGAR from window[ref_start] reproduces the read: '=' columns
/// match (neither base N), 'X' columns differ, and lengths are consistent.
bool cigar_reconstructs(const Cigar& cigar, const PackedSequence& read, const PackedSequence& window,
                        std::uint64_t ref_start) noexcept;

/// Base equality as used by every aligner: N never matches anything.
inline bool bases_match(const PackedSequence& a, std::size_t i, const PackedSequence& b, std::size_t j) noexcept {
  return !a.is_n(i) && !b.is_n(j) && a.code(i) == b.code(j);
}

} // namespace genpair
