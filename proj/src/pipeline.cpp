#include "genpair/pipeline.hpp"

#include "genpair/error.hpp"
#include "genpair/sam.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <thread>
#include <tuple>

namespace genpair {

void RunStats::add(const PairMapping& m) {
  ++pairs_total;
  switch (m.outcome) {
  case Outcome::MappedLight: ++mapped_light; break;
  case Outcome::MappedDP:
    ++mapped_dp;
    ++lightalign_fail;
    break;
  case Outcome::FallbackFull:
    if (m.reason == FallbackReason::SeedmapMiss) {
      ++seedmap_miss;
    } else {
      ++adjacency_fail;
    }
    break;
  }
}

void RunStats::merge(const RunStats& o) {
  pairs_total += o.pairs_total;
  seedmap_miss += o.seedmap_miss;
  adjacency_fail += o.adjacency_fail;
  lightalign_fail += o.lightalign_fail;
  mapped_light += o.mapped_light;
  mapped_dp += o.mapped_dp;
}

int mapq(int best, std::optional<int> second_best) noexcept {
  if (!second_best) {
    return 60;
  }
  const int gap = best - *second_best;
  if (gap >= 20) {
    return 60;
  }
  return std::clamp(3 * gap, 0, 60);
}

PairMapper::PairMapper(const SeedMap& map, const Reference& ref, MapConfig cfg, ScoringScheme scheme, DpConfig dp)
    : map_(map), ref_(ref), cfg_(cfg), scheme_(scheme), dp_(dp), light_(scheme) {
  cfg_.validate();
  if (!(map.ref_meta().lengths() == ref.meta().lengths()) || !(map.ref_meta().names() == ref.meta().names())) {
    throw ConfigError("index was built from a different reference");
  }
  dp_.scheme = scheme;
}

std::optional<Alignment> PairMapper::light_at(const PackedSequence& oriented, std::uint64_t start) const {
  const RefMeta& meta = ref_.meta();
  const std::uint64_t pad = LightAligner::kPad;
  const std::size_t rec = meta.sequence_of(start);
  if (start < meta.start(rec) + pad || start + oriented.size() + pad > meta.end(rec)) {
    return std::nullopt;
  }
  const PackedSequence window = ref_.sequence().subsequence(start - pad, oriented.size() + 2 * pad);
  auto hit = light_.classify(oriented, window);
  if (!hit) {
    return std::nullopt;
  }
  hit->alignment.ref_start += start - pad;
  return std::move(hit->alignment);
}

std::optional<Alignment> PairMapper::dp_at(const PackedSequence& oriented, std::uint64_t start,
                                           DpAligner& scratch) const {
  const RefMeta& meta = ref_.meta();
  const auto pad = static_cast<std::uint64_t>(std::max(dp_.pad, 0));
  const std::size_t rec = meta.sequence_of(start);
  const std::uint64_t lo = start >= meta.start(rec) + pad ? start - pad : meta.start(rec);
  const std::uint64_t hi = std::min(meta.end(rec), start + oriented.size() + pad);
  if (hi <= lo || hi - lo < oriented.size()) {
    return std::nullopt;
  }
  const PackedSequence window = ref_.sequence().subsequence(lo, hi - lo);
  Alignment aln = scratch.glocal_auto(oriented, window, dp_);
  aln.ref_start += lo;
  return aln;
}

namespace {

struct Placement {
  Alignment a1;
  Alignment a2;
  Strand s1;
  Strand s2;
  int sum = 0;
  std::uint64_t span = 0;
  std::uint64_t min_start = 0;

  auto key() const { return std::make_tuple(a1.ref_start, s1, a2.ref_start, s2); }
};

bool better(const Placement& a, const Placement& b) {
  if (a.sum != b.sum) {
    return a.sum > b.sum;
  }
  if (a.span != b.span) {
    return a.span < b.span;
  }
  if (a.min_start != b.min_start) {
    return a.min_start < b.min_start;
  }
  return a.key() < b.key();
}

Placement make_placement(Alignment a1, Alignment a2, Strand s1, Strand s2) {
  Placement p{std::move(a1), std::move(a2), s1, s2};
  const std::uint64_t end1 = p.a1.ref_start + p.a1.cigar.ref_length();
  const std::uint64_t end2 = p.a2.ref_start + p.a2.cigar.ref_length();
  p.sum = p.a1.score + p.a2.score;
  p.min_start = std::min(p.a1.ref_start, p.a2.ref_start);
  p.span = std::max(end1, end2) - p.min_start;
  return p;
}

/// Memo of per-mate alignments; a candidate usually appears in several pair candidates.
class AlignmentCache {
public:
  template <class Fn>
  const std::optional<Alignment>& get(Mate mate, const Candidate& c, Fn&& compute) {
    for (auto& e : entries_) {
      if (e.mate == mate && e.start == c.start && e.strand == c.strand) {
        return e.aln;
      }
    }
    entries_.push_back({mate, c.start, c.strand, compute()});
    return entries_.back().aln;
  }

private:
  struct Entry {
    Mate mate;
    std::uint64_t start;
    Strand strand;
    std::optional<Alignment> aln;
  };
  std::deque<Entry> entries_;
};

} // namespace

PairMapping PairMapper::map(const ReadPair& pair, DpAligner& scratch) const {
  PairMapping out;
  out.pair_id = pair.id;

  const auto c1 = candidates_for_read(pair.read1, Mate::R1, map_);
  const auto c2 = candidates_for_read(pair.read2, Mate::R2, map_);
  if (c1.empty() || c2.empty()) {
    out.reason = FallbackReason::SeedmapMiss;
    return out;
  }
  auto pcs = pair_filter(c1, c2, pair.read1.size(), pair.read2.size(), cfg_);
  const RefMeta& meta = ref_.meta();
  std::erase_if(pcs, [&](const PairCandidate& pc) {
    return meta.sequence_of(pc.c1.start) != meta.sequence_of(pc.c2.start);
  });
  if (pcs.empty()) {
    out.reason = FallbackReason::AdjacencyFail;
    return out;
  }

  const PackedSequence rc1 = pair.read1.reverse_complement();
  const PackedSequence rc2 = pair.read2.reverse_complement();
  auto oriented = [&](Mate mate, Strand s) -> const PackedSequence& {
    if (mate == Mate::R1) {
      return s == Strand::Fwd ? pair.read1 : rc1;
    }
    return s == Strand::Fwd ? pair.read2 : rc2;
  };

  AlignmentCache light_cache;
  AlignmentCache dp_cache;
  auto light = [&](Mate mate, const Candidate& c) -> const std::optional<Alignment>& {
    return light_cache.get(mate, c, [&] { return light_at(oriented(mate, c.strand), c.start); });
  };
  auto dp = [&](Mate mate, const Candidate& c) -> std::optional<Alignment> {
    if (const auto& l = light(mate, c)) {
      return l;
    }
    return dp_cache.get(mate, c, [&] { return dp_at(oriented(mate, c.strand), c.start, scratch); });
  };

  std::vector<Placement> placements;
  for (const auto& pc : pcs) {
    const auto& a1 = light(Mate::R1, pc.c1);
    const auto& a2 = light(Mate::R2, pc.c2);
    if (a1 && a2) {
      placements.push_back(make_placement(*a1, *a2, pc.c1.strand, pc.c2.strand));
    }
  }
  out.outcome = Outcome::MappedLight;
  if (placements.empty()) {
    out.outcome = Outcome::MappedDP;
    for (const auto& pc : pcs) {
      auto a1 = dp(Mate::R1, pc.c1);
      auto a2 = dp(Mate::R2, pc.c2);
      if (a1 && a2) {
        placements.push_back(make_placement(std::move(*a1), std::move(*a2), pc.c1.strand, pc.c2.strand));
      }
    }
  }
  if (placements.empty()) {
    out.outcome = Outcome::FallbackFull;
    out.reason = FallbackReason::AdjacencyFail;
    return out;
  }

  std::sort(placements.begin(), placements.end(), better);
  const Placement& best = placements.front();
  std::optional<int> second;
  for (std::size_t i = 1; i < placements.size(); ++i) {
    if (placements[i].key() != best.key()) {
      second = placements[i].sum;
      break;
    }
  }

  out.mapq = mapq(best.sum, second);
  out.strand1 = best.s1;
  out.strand2 = best.s2;
  const auto tlen = static_cast<std::int64_t>(best.span);
  out.tlen = best.a1.ref_start <= best.a2.ref_start ? tlen : -tlen;
  out.a1 = best.a1;
  out.a2 = best.a2;
  return out;
}

PairMapping map_pair(const ReadPair& pair, const SeedMap& map, const Reference& ref, const MapConfig& cfg,
                     const ScoringScheme& scheme, const DpConfig& dp) {
  return PairMapper(map, ref, cfg, scheme, dp).map(pair);
}

FastqResidualWriter::FastqResidualWriter(const std::string& prefix, bool gzip)
    : path1_(prefix + (gzip ? "_1.fq.gz" : "_1.fq")), path2_(prefix + (gzip ? "_2.fq.gz" : "_2.fq")),
      out1_(path1_, gzip), out2_(path2_, gzip) {}

void FastqResidualWriter::write(const ReadPair& pair) {
  buf1_.clear();
  buf2_.clear();
  write_fastq_record(buf1_, pair.id + "/1", pair.read1, pair.qual1);
  write_fastq_record(buf2_, pair.id + "/2", pair.read2, pair.qual2);
  out1_.write(buf1_);
  out2_.write(buf2_);
}

void FastqResidualWriter::close() {
  out1_.close();
  out2_.close();
}

RunStats run(PairSource& pairs, const PairMapper& mapper, const RunOptions& opts, std::ostream& sam,
             ResidualSink* residual) {
  const unsigned threads = std::max(1u, opts.threads);
  const std::size_t batch = std::max<std::size_t>(1, opts.batch_size);
  const RefMeta& meta = mapper.reference().meta();

  sam << sam_header(meta, opts.pg_command_line, opts.pg_description);

  RunStats stats;
  std::uint64_t record_index = 0;
  std::vector<DpAligner> scratch(threads);
  bool done = false;
  while (!done) {
    // Read one round of batches, map them (in parallel), then emit in input order.
    std::vector<std::vector<ReadPair>> batches;
    while (batches.size() < threads && !done) {
      std::vector<ReadPair> b;
      b.reserve(batch);
      while (b.size() < batch) {
        std::optional<ReadPair> p;
        try {
          p = pairs.next();
        } catch (const Error& e) {
          throw Error("input record " + std::to_string(record_index + 1) + ": " + e.what());
        }
        if (!p) {
          done = true;
          break;
        }
        ++record_index;
        b.push_back(std::move(*p));
      }
      if (!b.empty()) {
        batches.push_back(std::move(b));
      }
    }
    if (batches.empty()) {
      break;
    }

    std::vector<std::vector<PairMapping>> results(batches.size());
    auto work = [&](std::size_t bi, DpAligner& dp) {
      results[bi].reserve(batches[bi].size());
      for (const auto& p : batches[bi]) {
        results[bi].push_back(mapper.map(p, dp));
      }
    };
    if (threads == 1 || batches.size() == 1) {
      for (std::size_t bi = 0; bi < batches.size(); ++bi) {
        work(bi, scratch[0]);
      }
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::exception_ptr> errors(batches.size());
      std::vector<std::thread> pool;
      for (unsigned t = 0; t < threads && t < batches.size(); ++t) {
        pool.emplace_back([&, t] {
          for (std::size_t bi = next++; bi < batches.size(); bi = next++) {
            try {
              work(bi, scratch[t]);
            } catch (...) {
              errors[bi] = std::current_exception();
            }
          }
        });
      }
      for (auto& th : pool) {
        th.join();
      }
      for (auto& e : errors) {
        if (e) {
          std::rethrow_exception(e);
        }
      }
    }

    std::string text;
    for (std::size_t bi = 0; bi < batches.size(); ++bi) {
      for (std::size_t i = 0; i < batches[bi].size(); ++i) {
        const PairMapping& m = results[bi][i];
        stats.add(m);
        if (m.outcome == Outcome::FallbackFull) {
          if (residual != nullptr) {
            residual->write(batches[bi][i]);
          }
        } else {
          text += sam_records(batches[bi][i], m, meta, opts.extended_cigar);
        }
      }
    }
    sam << text;
    if (!sam) {
      throw IoError("failed writing SAM output");
    }
  }
  return stats;
}

} // namespace genpair
