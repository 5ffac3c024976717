#pragma once

#include "genpair/io.hpp"
#include "genpair/seed_map.hpp"
#include "genpair/seeding.hpp"

#include <cstdint>
#include <vector>

namespace genpair {

/// A projected placement of a read's first base on the forward reference.
struct Candidate {
  std::uint64_t start = 0;
  Strand strand = Strand::Fwd;
  std::uint8_t slot_mask = 0; // bit per Slot that voted for this start
  Mate mate = Mate::R1;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct PairCandidate {
  Candidate c1;
  Candidate c2;
  std::uint64_t span = 0; // outermost end minus outermost start

  std::uint64_t min_start() const noexcept { return std::min(c1.start, c2.start); }
  int votes() const noexcept;

  friend bool operator==(const PairCandidate&, const PairCandidate&) = default;
};

struct MapConfig {
  std::uint64_t delta = 500;
  std::size_t max_pair_candidates = 16;

  void validate() const;
};

/// Seed hits of one read on both strands, projected to read starts, merged by (start, strand)
/// and sorted. Reverse-strand candidates place the reverse-complemented read. Projections that
/// fall off a reference record are dropped.
std::vector<Candidate> candidates_for_read(const PackedSequence& read, Mate mate, const SeedMap& map);

/// Mate placements on opposite strands whose starts lie within delta of each other.
///
/// Two-pointer sweep over start-sorted lists. When more than max_pair_candidates qualify,
/// keeps the ones with the most seed votes, then the smallest span, then the smallest start.
/// The result is ordered by (min start, c1.start, c2.start, c1.strand).
std::vector<PairCandidate> pair_filter(const std::vector<Candidate>& cands1,
                                       const std::vector<Candidate>& cands2, std::size_t read1_len,
                                       std::size_t read2_len, const MapConfig& cfg);

/// Ordering used to choose which pair candidates survive truncation (best first).
bool pair_preference_less(const PairCandidate& a, const PairCandidate& b) noexcept;
/// Output ordering of pair_filter.
bool pair_output_less(const PairCandidate& a, const PairCandidate& b) noexcept;

std::uint64_t pair_span(const Candidate& c1, const Candidate& c2, std::size_t read1_len,
                        std::size_t read2_len) noexcept;

/// Fraction of pairs for which pair_filter finds at least one placement.
double seed_match_rate(PairSource& pairs, const SeedMap& map, const MapConfig& cfg);

} // namespace genpair
