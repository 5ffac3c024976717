#pragma once

#include "genpair/reference.hpp"
#include "genpair/seeding.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace genpair {

/**
 * Hash index over every seed_len-mer of a reference.
 *
 * The seed table holds 2^hash_bits + 1 prefix offsets into the location table, so bucket h
 * is the contiguous, ascending run location_table[seed_table[h], seed_table[h+1]).
 * Buckets that collected more than filter_threshold locations are emptied entirely.
 */
class SeedMap {
public:
  static constexpr std::uint32_t kDefaultFilterThreshold = 500;
  static constexpr std::uint32_t kFormatVersion = 1;

  SeedMap() = default;

  /// Indexes every N-free window that lies inside a single reference record.
  /// Throws EmptyReference when the reference has no bases.
  static SeedMap build(const Reference& ref, const SeedConfig& cfg,
                       std::uint32_t filter_threshold = kDefaultFilterThreshold);

  std::span<const std::uint64_t> query(std::uint32_t hash) const noexcept {
    return {location_table_.data() + seed_table_[hash], location_table_.data() + seed_table_[hash + 1]};
  }

  const SeedConfig& config() const noexcept { return cfg_; }
  std::uint32_t filter_threshold() const noexcept { return filter_threshold_; }
  const RefMeta& ref_meta() const noexcept { return meta_; }

  std::span<const std::uint64_t> seed_table() const noexcept { return seed_table_; }
  std::span<const std::uint64_t> location_table() const noexcept { return location_table_; }

  /// Known only for maps built in this process; the file format does not carry them.
  std::optional<std::uint64_t> filtered_bucket_count() const noexcept { return filtered_buckets_; }
  std::optional<std::uint64_t> prefilter_location_count() const noexcept { return prefilter_locations_; }

  void save(const std::filesystem::path& path) const;
  /// Throws BadMagic, VersionMismatch, Truncated or ChecksumMismatch.
  static SeedMap load(const std::filesystem::path& path);

private:
  SeedConfig cfg_;
  std::uint32_t filter_threshold_ = kDefaultFilterThreshold;
  RefMeta meta_;
  std::vector<std::uint64_t> seed_table_{0, 0};
  std::vector<std::uint64_t> location_table_;
  std::optional<std::uint64_t> filtered_buckets_;
  std::optional<std::uint64_t> prefilter_locations_;
};

struct IndexStats {
  std::uint64_t buckets_nonempty = 0;
  std::uint64_t total_locations = 0;
  double mean_locations_per_nonempty_bucket = 0.0;
  std::optional<std::uint64_t> filtered_bucket_count;
  std::optional<std::uint64_t> prefilter_total_locations;
  /// histogram[k] counts non-empty buckets whose size lies in [2^k, 2^(k+1)).
  std::vector<std::uint64_t> histogram;
};

IndexStats index_stats(const SeedMap& map);

} // namespace genpair
