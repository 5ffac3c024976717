#include "genpair/seeding.hpp"

#include "genpair/error.hpp"
#include "genpair/xxhash32.hpp"

#include <array>

namespace genpair {

void SeedConfig::validate() const {
  if (seed_len == 0) {
    throw ConfigError("seed length must be at least 1");
  }
  if (hash_bits < 16 || hash_bits > 32) {
    throw ConfigError("hash bits must lie in [16, 32], got " + std::to_string(hash_bits));
  }
}

std::vector<SeedSlot> seed_slots(std::size_t read_len, const SeedConfig& cfg) {
  if (read_len < cfg.seed_len) {
    throw ReadTooShort(read_len, cfg.seed_len);
  }
  const auto span = static_cast<std::uint32_t>(read_len - cfg.seed_len);
  std::vector<SeedSlot> slots{{Slot::First, 0}};
  for (SeedSlot s : {SeedSlot{Slot::Middle, span / 2}, SeedSlot{Slot::Last, span}}) {
    if (s.offset != slots.back().offset) {
      slots.push_back(s);
    }
  }
  return slots;
}

std::uint32_t hash_window(const PackedSequence& seq, std::size_t pos, const SeedConfig& cfg) noexcept {
  const std::size_t nbytes = (cfg.seed_len + 3) / 4;
  std::array<std::uint8_t, 64> small{};
  if (nbytes <= small.size()) {
    seq.copy_packed(pos, cfg.seed_len, small);
    return xxhash32({small.data(), nbytes}, cfg.hash_seed) & cfg.bucket_mask();
  }
  std::vector<std::uint8_t> big(nbytes + 8);
  seq.copy_packed(pos, cfg.seed_len, big);
  return xxhash32({big.data(), nbytes}, cfg.hash_seed) & cfg.bucket_mask();
}

std::uint32_t hash_seed(const PackedSequence& seq, std::size_t pos, const SeedConfig& cfg) {
  if (pos + cfg.seed_len > seq.size()) {
    throw Error("seed window runs past the end of the sequence");
  }
  if (seq.has_n(pos, cfg.seed_len)) {
    throw ContainsN();
  }
  return hash_window(seq, pos, cfg);
}

std::uint32_t hash_seed(const PackedSequence& window, const SeedConfig& cfg) {
  if (window.size() != cfg.seed_len) {
    throw Error("seed window length differs from the configured seed length");
  }
  return hash_seed(window, 0, cfg);
}

std::vector<ReadSeed> extract_seeds(const PackedSequence& oriented_read, Strand strand, Mate mate,
                                    const SeedConfig& cfg) {
  std::vector<ReadSeed> out;
  if (oriented_read.size() < cfg.seed_len) {
    return out;
  }
  for (const SeedSlot& s : seed_slots(oriented_read.size(), cfg)) {
    if (oriented_read.has_n(s.offset, cfg.seed_len)) {
      continue;
    }
    out.push_back({hash_window(oriented_read, s.offset, cfg), s, strand, mate});
  }
  return out;
}

std::vector<ReadSeed> extract_read_seeds(const ReadPair& pair, const SeedConfig& cfg) {
  std::vector<ReadSeed> out;
  out.reserve(12);
  for (Mate mate : {Mate::R1, Mate::R2}) {
    const PackedSequence& read = mate == Mate::R1 ? pair.read1 : pair.read2;
    auto fwd = extract_seeds(read, Strand::Fwd, mate, cfg);
    auto rev = extract_seeds(read.reverse_complement(), Strand::Rev, mate, cfg);
    out.insert(out.end(), fwd.begin(), fwd.end());
    out.insert(out.end(), rev.begin(), rev.end());
  }
  return out;
}

} // namespace genpair
