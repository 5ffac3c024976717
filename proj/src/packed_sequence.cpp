#include "genpair/packed_sequence.hpp"

#include "genpair/error.hpp"

#include <algorithm>
#include <cstring>

namespace genpair {

namespace {

std::size_t words_for(std::size_t bases, std::size_t per_word) { return (bases + per_word - 1) / per_word; }

/// Reads 64 bits starting at an arbitrary bit offset of a word array, zero past the end.
std::uint64_t extract_bits(std::span<const std::uint64_t> words, std::size_t bit) noexcept {
  const std::size_t w = bit / 64;
  const unsigned sh = static_cast<unsigned>(bit % 64);
  if (w >= words.size()) {
    return 0;
  }
  std::uint64_t lo = words[w] >> sh;
  if (sh != 0 && w + 1 < words.size()) {
    lo |= words[w + 1] << (64 - sh);
  }
  return lo;
}

} // namespace

PackedSequence PackedSequence::encode(std::string_view text) {
  PackedSequence s;
  s.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const int c = char_to_code(text[i]);
    if (c < 0) {
      throw InvalidBase(i, text[i]);
    }
    if (c == 4) {
      s.push_back_n();
    } else {
      s.push_back(static_cast<std::uint8_t>(c));
    }
  }
  return s;
}

void PackedSequence::reserve(std::size_t bases) {
  codes_.reserve(words_for(bases, kBasesPerWord));
  n_mask_.reserve(words_for(bases, 64));
}

void PackedSequence::push_back(std::uint8_t code) {
  if (length_ % kBasesPerWord == 0) {
    codes_.push_back(0);
  }
  if (length_ % 64 == 0) {
    n_mask_.push_back(0);
  }
  codes_.back() |= static_cast<std::uint64_t>(code & 3u) << (2 * (length_ % kBasesPerWord));
  ++length_;
}

void PackedSequence::push_back_n() {
  push_back(0);
  n_mask_.back() |= std::uint64_t{1} << ((length_ - 1) % 64);
  ++n_count_;
}

bool PackedSequence::has_n(std::size_t pos, std::size_t len) const noexcept {
  if (n_count_ == 0 || len == 0) {
    return false;
  }
  const std::size_t end = std::min(pos + len, length_);
  for (std::size_t p = pos; p < end; p += 64) {
    std::uint64_t bits = n_word(p);
    const std::size_t span = end - p;
    if (span < 64) {
      bits &= (std::uint64_t{1} << span) - 1;
    }
    if (bits != 0) {
      return true;
    }
  }
  return false;
}

std::string PackedSequence::decode() const {
  std::string out(length_, 'A');
  for (std::size_t i = 0; i < length_; ++i) {
    out[i] = at(i);
  }
  return out;
}

PackedSequence PackedSequence::subsequence(std::size_t pos, std::size_t len) const {
  pos = std::min(pos, length_);
  len = std::min(len, length_ - pos);
  PackedSequence s;
  s.length_ = len;
  s.codes_.resize(words_for(len, kBasesPerWord));
  s.n_mask_.resize(words_for(len, 64));
  for (std::size_t w = 0; w < s.codes_.size(); ++w) {
    s.codes_[w] = code_word(pos + w * kBasesPerWord);
  }
  for (std::size_t w = 0; w < s.n_mask_.size(); ++w) {
    s.n_mask_[w] = n_word(pos + w * 64);
  }
  if (len % kBasesPerWord != 0) {
    s.codes_.back() &= (std::uint64_t{1} << (2 * (len % kBasesPerWord))) - 1;
  }
  if (len % 64 != 0) {
    s.n_mask_.back() &= (std::uint64_t{1} << (len % 64)) - 1;
  }
  for (auto w : s.n_mask_) {
    s.n_count_ += static_cast<std::size_t>(std::popcount(w));
  }
  return s;
}

PackedSequence PackedSequence::reverse_complement() const {
  PackedSequence s;
  s.reserve(length_);
  for (std::size_t i = length_; i-- > 0;) {
    if (is_n(i)) {
      s.push_back_n();
    } else {
      s.push_back(complement(code(i)));
    }
  }
  return s;
}

std::uint64_t PackedSequence::code_word(std::size_t pos) const noexcept {
  return extract_bits(codes_, 2 * pos);
}

std::uint64_t PackedSequence::n_word(std::size_t pos) const noexcept {
  return extract_bits(n_mask_, pos);
}

void PackedSequence::copy_packed(std::size_t pos, std::size_t len,
                                 std::span<std::uint8_t> out) const noexcept {
  const std::size_t nbytes = (len + 3) / 4;
  std::size_t written = 0;
  for (std::size_t base = 0; base < len; base += kBasesPerWord) {
    std::uint64_t w = code_word(pos + base);
    const std::size_t remaining = len - base;
    if (remaining < kBasesPerWord) {
      w &= (std::uint64_t{1} << (2 * remaining)) - 1;
    }
    const std::size_t chunk = std::min<std::size_t>(8, nbytes - written);
    std::memcpy(out.data() + written, &w, chunk);
    written += chunk;
  }
}

PackedSequence PackedSequence::from_words(std::size_t length, std::vector<std::uint64_t> codes,
                                          std::vector<std::uint64_t> n_mask) {
  if (codes.size() != words_for(length, kBasesPerWord) || n_mask.size() != words_for(length, 64)) {
    throw Error("packed sequence word counts do not match its length");
  }
  PackedSequence s;
  s.length_ = length;
  s.codes_ = std::move(codes);
  s.n_mask_ = std::move(n_mask);
  for (auto w : s.n_mask_) {
    s.n_count_ += static_cast<std::size_t>(std::popcount(w));
  }
  return s;
}

} // namespace genpair
