#pragma once

#include "genpair/io.hpp"
#include "genpair/packed_sequence.hpp"

#include <cstdint>
#include <vector>

namespace genpair {

enum class Strand : std::uint8_t { Fwd = 0, Rev = 1 };
enum class Mate : std::uint8_t { R1 = 0, R2 = 1 };

constexpr Strand opposite(Strand s) noexcept { return s == Strand::Fwd ? Strand::Rev : Strand::Fwd; }

struct SeedConfig {
  std::uint32_t seed_len = 50;
  std::uint32_t hash_bits = 28;
  std::uint32_t hash_seed = 0;

  std::uint32_t bucket_mask() const noexcept {
    return hash_bits >= 32 ? 0xFFFFFFFFu : (std::uint32_t{1} << hash_bits) - 1;
  }
  std::uint64_t bucket_count() const noexcept { return std::uint64_t{1} << hash_bits; }

  /// Throws ConfigError when seed_len is zero or hash_bits is outside [16, 32].
  void validate() const;

  friend bool operator==(const SeedConfig&, const SeedConfig&) = default;
};

enum class Slot : std::uint8_t { First = 0, Middle = 1, Last = 2 };

constexpr std::uint8_t slot_bit(Slot s) noexcept { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(s)); }

struct SeedSlot {
  Slot slot;
  std::uint32_t offset;
  friend bool operator==(const SeedSlot&, const SeedSlot&) = default;
};

/// First, middle and last seed positions of a read; coinciding offsets collapse to one slot.
/// Throws ReadTooShort when read_len < seed_len.
std::vector<SeedSlot> seed_slots(std::size_t read_len, const SeedConfig& cfg);

/// Bucket key of the seed_len-base window at `pos`: XXH32 of the packed window bytes,
/// masked to hash_bits. Throws ContainsN if the window has an ambiguous base.
std::uint32_t hash_seed(const PackedSequence& seq, std::size_t pos, const SeedConfig& cfg);
/// Same, for a sequence that is exactly one window long.
std::uint32_t hash_seed(const PackedSequence& window, const SeedConfig& cfg);

/// hash_seed without the N check, for hot loops that have already excluded N windows.
std::uint32_t hash_window(const PackedSequence& seq, std::size_t pos, const SeedConfig& cfg) noexcept;

struct ReadSeed {
  std::uint32_t hash;
  SeedSlot slot;
  Strand strand;
  Mate mate;
  friend bool operator==(const ReadSeed&, const ReadSeed&) = default;
};

/// All seeds of a read in one orientation. Slots overlapping an N are skipped; reads
/// shorter than the seed yield nothing.
std::vector<ReadSeed> extract_seeds(const PackedSequence& oriented_read, Strand strand, Mate mate,
                                    const SeedConfig& cfg);

/// Seeds for both mates on both strands, at most 12.
std::vector<ReadSeed> extract_read_seeds(const ReadPair& pair, const SeedConfig& cfg);

} // namespace genpair
