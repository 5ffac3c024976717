#include "genpair/candidates.hpp"

#include "genpair/error.hpp"

#include <algorithm>
#include <bit>
#include <tuple>

namespace genpair {

int PairCandidate::votes() const noexcept {
  return std::popcount(static_cast<unsigned>(c1.slot_mask)) + std::popcount(static_cast<unsigned>(c2.slot_mask));
}

void MapConfig::validate() const {
  if (delta == 0) {
    throw ConfigError("delta must be at least 1");
  }
  if (max_pair_candidates == 0) {
    throw ConfigError("max pair candidates must be at least 1");
  }
}

namespace {

struct ProjectedList {
  std::span<const std::uint64_t> hits;
  std::uint32_t offset;
  std::uint8_t bit;
  std::size_t i = 0;
};

void collect_strand(const PackedSequence& oriented, Strand strand, Mate mate, const SeedMap& map,
                    std::vector<Candidate>& out) {
  const SeedConfig& cfg = map.config();
  const RefMeta& meta = map.ref_meta();
  const std::size_t len = oriented.size();

  std::vector<ProjectedList> lists;
  for (const ReadSeed& seed : extract_seeds(oriented, strand, mate, cfg)) {
    lists.push_back({map.query(seed.hash), seed.slot.offset, slot_bit(seed.slot.slot)});
  }

  // k-way merge of at most three ascending lists; equal projections coalesce.
  while (true) {
    ProjectedList* best = nullptr;
    std::uint64_t best_start = 0;
    for (auto& l : lists) {
      // Skip hits whose projection would start before the reference.
      while (l.i < l.hits.size() && l.hits[l.i] < l.offset) {
        ++l.i;
      }
      if (l.i == l.hits.size()) {
        continue;
      }
      const std::uint64_t s = l.hits[l.i] - l.offset;
      if (best == nullptr || s < best_start) {
        best = &l;
        best_start = s;
      }
    }
    if (best == nullptr) {
      break;
    }
    std::uint8_t mask = 0;
    for (auto& l : lists) {
      if (l.i < l.hits.size() && l.hits[l.i] >= l.offset && l.hits[l.i] - l.offset == best_start) {
        mask |= l.bit;
        ++l.i;
      }
    }
    if (best_start + len > meta.total_length()) {
      continue;
    }
    const std::size_t rec = meta.sequence_of(best_start);
    if (best_start + len > meta.end(rec)) {
      continue;
    }
    out.push_back({best_start, strand, mask, mate});
  }
}

} // namespace

std::vector<Candidate> candidates_for_read(const PackedSequence& read, Mate mate, const SeedMap& map) {
  std::vector<Candidate> fwd;
  std::vector<Candidate> rev;
  if (read.size() < map.config().seed_len) {
    return fwd;
  }
  collect_strand(read, Strand::Fwd, mate, map, fwd);
  collect_strand(read.reverse_complement(), Strand::Rev, mate, map, rev);
  std::vector<Candidate> out(fwd.size() + rev.size());
  std::merge(fwd.begin(), fwd.end(), rev.begin(), rev.end(), out.begin(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.start, a.strand) < std::tie(b.start, b.strand);
  });
  return out;
}

std::uint64_t pair_span(const Candidate& c1, const Candidate& c2, std::size_t read1_len,
                        std::size_t read2_len) noexcept {
  const std::uint64_t lo = std::min(c1.start, c2.start);
  const std::uint64_t hi = std::max(c1.start + read1_len, c2.start + read2_len);
  return hi - lo;
}

bool pair_output_less(const PairCandidate& a, const PairCandidate& b) noexcept {
  return std::make_tuple(a.min_start(), a.c1.start, a.c2.start, a.c1.strand) <
         std::make_tuple(b.min_start(), b.c1.start, b.c2.start, b.c1.strand);
}

bool pair_preference_less(const PairCandidate& a, const PairCandidate& b) noexcept {
  if (a.votes() != b.votes()) {
    return a.votes() > b.votes();
  }
  if (a.span != b.span) {
    return a.span < b.span;
  }
  return pair_output_less(a, b);
}

std::vector<PairCandidate> pair_filter(const std::vector<Candidate>& cands1,
                                       const std::vector<Candidate>& cands2, std::size_t read1_len,
                                       std::size_t read2_len, const MapConfig& cfg) {
  // Split mate 2 by strand so each sweep only visits compatible partners.
  std::vector<Candidate> by_strand[2];
  for (const auto& c : cands2) {
    by_strand[static_cast<int>(c.strand)].push_back(c);
  }
  std::size_t lo[2] = {0, 0};
  std::size_t hi[2] = {0, 0};

  std::vector<PairCandidate> out;
  for (const Candidate& c1 : cands1) {
    const int want = static_cast<int>(opposite(c1.strand));
    const auto& list = by_strand[want];
    const std::uint64_t window_lo = c1.start >= cfg.delta ? c1.start - cfg.delta : 0;
    const std::uint64_t window_hi = c1.start + cfg.delta;
    std::size_t& l = lo[want];
    std::size_t& h = hi[want];
    while (l < list.size() && list[l].start < window_lo) {
      ++l;
    }
    h = std::max(h, l);
    while (h < list.size() && list[h].start <= window_hi) {
      ++h;
    }
    for (std::size_t j = l; j < h; ++j) {
      out.push_back({c1, list[j], pair_span(c1, list[j], read1_len, read2_len)});
    }
  }

  if (out.size() > cfg.max_pair_candidates) {
    std::nth_element(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(cfg.max_pair_candidates), out.end(),
                     pair_preference_less);
    out.resize(cfg.max_pair_candidates);
  }
  std::sort(out.begin(), out.end(), pair_output_less);
  return out;
}

double seed_match_rate(PairSource& pairs, const SeedMap& map, const MapConfig& cfg) {
  std::uint64_t total = 0;
  std::uint64_t hit = 0;
  while (auto pair = pairs.next()) {
    ++total;
    const auto c1 = candidates_for_read(pair->read1, Mate::R1, map);
    const auto c2 = candidates_for_read(pair->read2, Mate::R2, map);
    if (!c1.empty() && !c2.empty() &&
        !pair_filter(c1, c2, pair->read1.size(), pair->read2.size(), cfg).empty()) {
      ++hit;
    }
  }
  return total == 0 ? 0.0 : static_cast<double>(hit) / static_cast<double>(total);
}

} // namespace genpair
