#pragma once

#include "genpair/alignment.hpp"
#include "genpair/candidates.hpp"
#include "genpair/dp_align.hpp"
#include "genpair/io.hpp"
#include "genpair/light_align.hpp"
#include "genpair/reference.hpp"
#include "genpair/seed_map.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>

namespace genpair {

enum class Outcome : std::uint8_t { MappedLight, MappedDP, FallbackFull };
enum class FallbackReason : std::uint8_t { None, SeedmapMiss, AdjacencyFail };

struct PairMapping {
  std::string pair_id;
  Outcome outcome = Outcome::FallbackFull;
  FallbackReason reason = FallbackReason::None;
  /// ref_start is a global reference coordinate.
  std::optional<Alignment> a1;
  std::optional<Alignment> a2;
  Strand strand1 = Strand::Fwd;
  Strand strand2 = Strand::Rev;
  /// Rightmost end minus leftmost start; positive when mate 1 is the leftmost mate.
  std::int64_t tlen = 0;
  int mapq = 0;
};

struct RunStats {
  std::uint64_t pairs_total = 0;
  std::uint64_t seedmap_miss = 0;
  std::uint64_t adjacency_fail = 0;
  std::uint64_t lightalign_fail = 0; // pairs that needed the DP fallback
  std::uint64_t mapped_light = 0;
  std::uint64_t mapped_dp = 0;

  void add(const PairMapping& m);
  void merge(const RunStats& other);

  double fraction(std::uint64_t count) const noexcept {
    return pairs_total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(pairs_total);
  }
  double seedmap_miss_fraction() const noexcept { return fraction(seedmap_miss); }
  double adjacency_fail_fraction() const noexcept { return fraction(adjacency_fail); }
  double lightalign_fail_fraction() const noexcept { return fraction(lightalign_fail); }
  double mapped_light_fraction() const noexcept { return fraction(mapped_light); }
  double mapped_dp_fraction() const noexcept { return fraction(mapped_dp); }
};

/// 60 for unique or clearly separated hits, 3 per score point of separation otherwise.
int mapq(int best, std::optional<int> second_best) noexcept;

/**
 * Maps read pairs: seed lookup, paired-adjacency filter, light alignment, then DP fallback.
 * Immutable and shareable across threads; each thread passes its own DpAligner.
 */
class PairMapper {
public:
  PairMapper(const SeedMap& map, const Reference& ref, MapConfig cfg = {}, ScoringScheme scheme = {},
             DpConfig dp = {});

  PairMapping map(const ReadPair& pair, DpAligner& scratch) const;
  PairMapping map(const ReadPair& pair) const {
    DpAligner scratch;
    return map(pair, scratch);
  }

  const SeedMap& seed_map() const noexcept { return map_; }
  const Reference& reference() const noexcept { return ref_; }
  const MapConfig& config() const noexcept { return cfg_; }
  const DpConfig& dp_config() const noexcept { return dp_; }

  /// Light alignment of an oriented read at a candidate start; empty when rejected or when
  /// the padded window would leave the candidate's reference record.
  std::optional<Alignment> light_at(const PackedSequence& oriented, std::uint64_t start) const;
  /// DP alignment of an oriented read around a candidate start (window clamped to the record).
  std::optional<Alignment> dp_at(const PackedSequence& oriented, std::uint64_t start, DpAligner& scratch) const;

private:
  const SeedMap& map_;
  const Reference& ref_;
  MapConfig cfg_;
  ScoringScheme scheme_;
  DpConfig dp_;
  LightAligner light_;
};

PairMapping map_pair(const ReadPair& pair, const SeedMap& map, const Reference& ref, const MapConfig& cfg = {},
                     const ScoringScheme& scheme = {}, const DpConfig& dp = {});

/// Destination for pairs the mapper could not place.
class ResidualSink {
public:
  virtual ~ResidualSink() = default;
  virtual void write(const ReadPair& pair) = 0;
};

/// Writes <prefix>_1.fq.gz and <prefix>_2.fq.gz.
class FastqResidualWriter final : public ResidualSink {
public:
  explicit FastqResidualWriter(const std::string& prefix, bool gzip = true);
  void write(const ReadPair& pair) override;
  void close();

  std::filesystem::path path1() const { return path1_; }
  std::filesystem::path path2() const { return path2_; }

private:
  std::filesystem::path path1_;
  std::filesystem::path path2_;
  TextSink out1_;
  TextSink out2_;
  std::string buf1_;
  std::string buf2_;
};

struct RunOptions {
  unsigned threads = 1;
  std::size_t batch_size = 4096;
  bool extended_cigar = true;
  std::string pg_command_line;
  std::string pg_description;
};

/// Maps every pair from `pairs` in input order, writing SAM to `sam` and unplaced pairs to
/// `residual` (may be null). Output is identical for any thread count.
RunStats run(PairSource& pairs, const PairMapper& mapper, const RunOptions& opts, std::ostream& sam,
             ResidualSink* residual);

} // namespace genpair
