#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace genpair {

static_assert(std::endian::native == std::endian::little,
              "packed byte views assume a little-endian host");

/// 2-bit nucleotide code: A=0, C=1, G=2, T=3.
enum class Base : std::uint8_t { A = 0, C = 1, G = 2, T = 3 };

constexpr std::uint8_t complement(std::uint8_t code) noexcept { return code ^ 3u; }
constexpr Base complement(Base b) noexcept {
  return static_cast<Base>(complement(static_cast<std::uint8_t>(b)));
}

constexpr char code_to_char(std::uint8_t code) noexcept { return "ACGT"[code & 3u]; }

/// Returns the 2-bit code for A/C/G/T (either case), 4 for N/n and -1 for anything else.
constexpr int char_to_code(char c) noexcept {
  switch (c) {
  case 'A': case 'a': return 0;
  case 'C': case 'c': return 1;
  case 'G': case 'g': return 2;
  case 'T': case 't': return 3;
  case 'N': case 'n': return 4;
  default: return -1;
  }
}

/**
 * DNA sequence packed at 2 bits per base with a separate ambiguity mask.
 *
 * Base i lives in bits [2*(i%32), 2*(i%32)+2) of word i/32, so the little-endian byte
 * view puts the first base in the low-order bits of byte 0. Masked (N) positions store
 * code 0. Unused trailing bits are always zero.
 */
class PackedSequence {
public:
  static constexpr std::size_t kBasesPerWord = 32;

  PackedSequence() = default;

  /// Encodes ACGTN text (case-insensitive). Throws InvalidBase on anything else.
  static PackedSequence encode(std::string_view text);

  std::size_t size() const noexcept { return length_; }
  bool empty() const noexcept { return length_ == 0; }

  std::uint8_t code(std::size_t i) const noexcept {
    return static_cast<std::uint8_t>((codes_[i / kBasesPerWord] >> (2 * (i % kBasesPerWord))) & 3u);
  }
  bool is_n(std::size_t i) const noexcept { return (n_mask_[i / 64] >> (i % 64)) & 1u; }
  char at(std::size_t i) const noexcept { return is_n(i) ? 'N' : code_to_char(code(i)); }

  bool has_n() const noexcept { return n_count_ != 0; }
  std::size_t n_count() const noexcept { return n_count_; }
  /// True when any base in [pos, pos+len) is masked.
  bool has_n(std::size_t pos, std::size_t len) const noexcept;

  void push_back(std::uint8_t code);
  void push_back_n();
  void reserve(std::size_t bases);

  std::string decode() const;
  PackedSequence subsequence(std::size_t pos, std::size_t len) const;
  PackedSequence reverse_complement() const;

  /// 32 bases starting at pos in 2-bit lanes; bases past the end read as zero.
  std::uint64_t code_word(std::size_t pos) const noexcept;
  /// 64 ambiguity bits starting at pos; bits past the end read as zero.
  std::uint64_t n_word(std::size_t pos) const noexcept;

  /// Writes the canonical packing of [pos, pos+len) into out (ceil(len/4) bytes, pad bits zero).
  void copy_packed(std::size_t pos, std::size_t len, std::span<std::uint8_t> out) const noexcept;

  /// The first ceil(size/4) bytes of the payload.
  std::span<const std::uint8_t> packed_bytes() const noexcept {
    return {reinterpret_cast<const std::uint8_t*>(codes_.data()), (length_ + 3) / 4};
  }

  std::span<const std::uint64_t> code_words() const noexcept { return codes_; }
  std::span<const std::uint64_t> n_words() const noexcept { return n_mask_; }

  /// Rebuilds a sequence from raw words (used by deserialization).
  static PackedSequence from_words(std::size_t length, std::vector<std::uint64_t> codes,
                                   std::vector<std::uint64_t> n_mask);

  friend bool operator==(const PackedSequence& a, const PackedSequence& b) noexcept {
    return a.length_ == b.length_ && a.codes_ == b.codes_ && a.n_mask_ == b.n_mask_;
  }

private:
  std::size_t length_ = 0;
  std::size_t n_count_ = 0;
  std::vector<std::uint64_t> codes_;
  std::vector<std::uint64_t> n_mask_;
};

} // namespace genpair
