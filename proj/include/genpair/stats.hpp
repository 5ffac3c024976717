#pragma once

#include "genpair/alignment.hpp"
#include "genpair/candidates.hpp"
#include "genpair/dp_align.hpp"
#include "genpair/io.hpp"
#include "genpair/reference.hpp"
#include "genpair/seed_map.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace genpair {

/// Edit class of one mate's DP alignment.
enum class EditClass : std::uint8_t {
  Exact,
  Mismatches,  // 1-2 mismatches, no gaps
  Insertion,   // one run of 1-2 inserted bases, nothing else
  Deletion,    // one run of 1-5 deleted bases, nothing else
  Other,       // mixed types or beyond the single-type limits
};

const char* edit_class_name(EditClass c) noexcept;

/// Classifies a read-end-to-end CIGAR against the single-edit-type table limits.
EditClass classify_cigar(const Cigar& cigar) noexcept;

struct ObservationReport {
  std::uint64_t pairs = 0;
  /// Pairs whose mates both have an exact slot hit at mutually compatible loci.
  std::uint64_t seed_match_pairs = 0;

  std::uint64_t seeds_queried = 0;
  std::uint64_t seeds_with_hits = 0;
  std::uint64_t seed_locations = 0;

  std::uint64_t mapped_pairs = 0;
  /// Mapped pairs whose two mates are each exact or single-type within table limits.
  std::uint64_t single_type_pairs = 0;
  /// Per-mate edit class counts over mapped pairs.
  std::array<std::uint64_t, 5> mate_classes{};

  /// min(score1, score2) -> number of mapped pairs.
  std::map<int, std::uint64_t> min_score_counts;

  void merge(const ObservationReport& other);

  double seed_match_fraction() const noexcept;
  /// Mean locations per queried seed that had at least one location.
  double mean_locations_per_hit_seed() const noexcept;
  /// Mean locations over every queried seed, including those without hits.
  double mean_locations_per_seed() const noexcept;
  /// Single-type pairs over all pairs; unmapped pairs count as not single-type.
  double single_type_fraction() const noexcept;
  double single_type_fraction_of_mapped() const noexcept;
  /// (score, cumulative fraction) ascending in score; ends at 1 when any pair mapped.
  std::vector<std::pair<int, double>> min_score_cdf() const;

  std::string to_json() const;
  void write_cdf_csv(std::ostream& out) const;
};

struct ObservationOptions {
  MapConfig map;
  ScoringScheme scheme;
  DpConfig dp;
  unsigned threads = 1;
  std::size_t batch_size = 4096;
};

/// Dataset statistics behind the seeding, filtering and edit-type observations. Edit classes
/// come from fresh DP alignments at each mapped pair's best placement.
ObservationReport observation_report(PairSource& pairs, const SeedMap& map, const Reference& ref,
                                     const ObservationOptions& opts = {});

} // namespace genpair
