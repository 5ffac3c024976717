// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include "genpair/dp_align.hpp"
#include "genpair/error.hpp"
#include "genpair/light_align.hpp"
#include "genpair/pipeline.hpp"
#include "genpair/seed_map.hpp"
#include "genpair/simulate.hpp"

#include "../support/oracles.hpp"
#include "../support/temp_dir.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>
#include <tuple>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace genpair;
using testing::random_dna;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  double time_limit_s; // 0: no limit
  std::function<Verdict()> check;
};

std::vector<ReadPair> pairs_of(std::vector<SimulatedPair>& sims) {
  std::vector<ReadPair> out;
  out.reserve(sims.size());
  for (auto& s : sims) {
    out.push_back(s.pair);
  }
  return out;
}

// ---- score table ----

Verdict score_table() {
  constexpr std::size_t L = 150;
  constexpr std::size_t pad = LightAligner::kPad;
  std::mt19937_64 rng(1);
  const std::string w = random_dna(rng, L + 2 * pad);
  const std::string ref = w.substr(pad, L);
  using testing::plant_deletion;
  using testing::plant_insertion;
  using testing::plant_mismatches;

  std::string mixed = plant_deletion(w, pad, L, 90, 1);
  mixed[30] = testing::other_base(mixed[30], 0);

  struct Row {
    const char* label;
    std::string read;
    int score;
    bool light;
  };
  const std::vector<Row> rows{
      {"none", ref, 300, true},
      {"1 mismatch", plant_mismatches(ref, {40}), 290, true},
      {"1 deletion", plant_deletion(w, pad, L, 70, 1), 286, true},
      {"1 insertion", plant_insertion(w, pad, L, 70, "G"), 284, true},
      {"2 deletions", plant_deletion(w, pad, L, 70, 2), 284, true},
      {"3 deletions", plant_deletion(w, pad, L, 70, 3), 282, true},
      {"2 mismatches", plant_mismatches(ref, {40, 110}), 280, true},
      {"2 insertions", plant_insertion(w, pad, L, 70, "TG"), 280, true},
      {"4 deletions", plant_deletion(w, pad, L, 70, 4), 280, true},
      {"5 deletions", plant_deletion(w, pad, L, 70, 5), 278, true},
      {"1 mismatch + 1 deletion", mixed, 276, false},
  };
  const auto window = PackedSequence::encode(w);
  std::ostringstream got;
  bool ok = true;
  for (const auto& row : rows) {
    const auto read = PackedSequence::encode(row.read);
    const auto light = classify(read, window);
    const int dp = align_glocal(read, window, DpConfig{{}, 0, 0}).score;
    const bool light_ok = row.light ? (light && light->alignment.score == row.score) : !light;
    ok = ok && light_ok && dp == row.score;
    got << dp << (light ? "" : "*") << ' ';
  }
  return {ok, "scores " + got.str() + "(* = no light result)"};
}

// ---- light vs DP ----

Verdict light_vs_dp() {
  constexpr std::size_t pad = LightAligner::kPad;
  std::mt19937_64 rng(2);
  DpAligner dp;
  const DpConfig unbanded{{}, 0, 0};
  std::uint64_t cases = 0;
  std::uint64_t disagree = 0;
  std::uint64_t different_edit_type = 0;
  std::string first_failure;

  auto check = [&](const std::string& read_text, const std::string& w) {
    ++cases;
    const auto read = PackedSequence::encode(read_text);
    const auto window = PackedSequence::encode(w);
    const auto light = classify(read, window);
    const auto opt = dp.glocal(read, window, unbanded);
    const bool ok = light && light->alignment.score == opt.score &&
                    cigar_reconstructs(light->alignment.cigar, read, window, light->alignment.ref_start) &&
                    cigar_reconstructs(opt.cigar, read, window, opt.ref_start) &&
                    score_cigar(light->alignment.cigar, ScoringScheme{}) == opt.score;
    if (!ok) {
      ++disagree;
      if (first_failure.empty()) {
        first_failure = read_text + " vs " + w;
      }
      return;
    }
    auto signature = [](const Cigar& c) {
      std::string s;
      for (const auto& op : c.ops()) {
        if (op.op != CigarOpKind::Match) {
          s += std::to_string(op.length) + static_cast<char>(op.op);
        }
      }
      return s;
    };
    different_edit_type += signature(light->alignment.cigar) != signature(opt.cigar);
  };

  for (std::size_t L : {20u, 30u, 50u}) {
    for (int rep = 0; rep < 3; ++rep) {
      const std::string w = random_dna(rng, L + 2 * pad);
      const std::string ref = w.substr(pad, L);
      check(ref, w);
      for (std::size_t p = 0; p < L; ++p) {
        for (std::uint64_t k = 0; k < 3; ++k) {
          std::string r = ref;
          r[p] = testing::other_base(r[p], k);
          check(r, w);
        }
        for (std::size_t q = p + 1; q < L; ++q) {
          std::string r = ref;
          r[p] = testing::other_base(r[p], p + q);
          r[q] = testing::other_base(r[q], p * q);
          check(r, w);
        }
      }
      for (std::size_t k = 1; k <= LightAligner::kMaxInsertion; ++k) {
        for (std::size_t p = 0; p + k <= L; ++p) {
          for (int b = 0; b < (k == 1 ? 4 : 16); ++b) {
            std::string ins;
            ins += "ACGT"[b % 4];
            if (k == 2) {
              ins += "ACGT"[b / 4];
            }
            check(testing::plant_insertion(w, pad, L, p, ins), w);
          }
        }
      }
      for (std::size_t k = 1; k <= LightAligner::kMaxDeletion; ++k) {
        for (std::size_t p = 0; p <= L; ++p) {
          check(testing::plant_deletion(w, pad, L, p, k), w);
        }
      }
    }
  }
  std::ostringstream d;
  d << cases << " cases, " << disagree << " disagreements, " << different_edit_type
    << " equal-score alternative edit placements";
  if (!first_failure.empty()) {
    d << "; first failure " << first_failure;
  }
  return {disagree == 0, d.str()};
}

// ---- DP micro-oracle ----

Verdict dp_micro_oracle() {
  std::mt19937_64 rng(3);
  testing::BruteForceAligner brute;
  DpAligner dp;
  int bad = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::string a = random_dna(rng, 1 + rng() % 12);
    const std::string b = random_dna(rng, 1 + rng() % 12);
    const auto got = dp.global(PackedSequence::encode(a), PackedSequence::encode(b), DpConfig{{}, 0, 0});
    const bool ok = got.score == brute.best_global(a, b) && testing::replay_cigar(got.cigar, a, b, 0) == a &&
                    got.cigar.ref_length() == b.size() && score_cigar(got.cigar, ScoringScheme{}) == got.score;
    bad += !ok;
  }
  return {bad == 0, "1000 pairs, " + std::to_string(bad) + " mismatches against path enumeration"};
}

// ---- pair filter ----

Verdict pair_filter_oracle() {
  std::mt19937_64 rng(4);
  const std::uint64_t deltas[] = {1, 100, 500, 1'000'000};
  const std::uint64_t ranges[] = {400, 4000, 40000, 400000};
  int bad = 0;
  std::uint64_t pairs_seen = 0;
  auto make = [&](std::size_t n, std::uint64_t range, Mate mate) {
    std::vector<Candidate> out;
    std::set<std::pair<std::uint64_t, Strand>> seen;
    while (out.size() < n) {
      Candidate c{rng() % range, rng() % 2 ? Strand::Rev : Strand::Fwd, static_cast<std::uint8_t>(1 + rng() % 7),
                  mate};
      if (seen.insert({c.start, c.strand}).second) {
        out.push_back(c);
      }
    }
    std::sort(out.begin(), out.end(),
              [](const Candidate& x, const Candidate& y) { return std::tie(x.start, x.strand) < std::tie(y.start, y.strand); });
    return out;
  };
  for (int t = 0; t < 10000; ++t) {
    MapConfig cfg;
    cfg.delta = deltas[t % 4];
    const std::uint64_t range = ranges[rng() % 4];
    const auto a = make(rng() % 201, range, Mate::R1);
    const auto b = make(rng() % 201, range, Mate::R2);
    const auto got = pair_filter(a, b, 150, 150, cfg);
    bad += got != testing::brute_pair_filter(a, b, 150, 150, cfg);
    pairs_seen += got.size();
  }
  return {bad == 0, "10000 list pairs, " + std::to_string(pairs_seen) + " pairs kept, " + std::to_string(bad) +
                        " mismatches"};
}

// ---- shared synthetic genome for the mapping criteria ----

struct Genome5M {
  Reference ref;
  SeedMap map;
};

const Genome5M& genome_5m() {
  static const Genome5M g = [] {
    GenomeSpec spec;
    spec.length = 5'000'000;
    spec.records = 2;
    spec.seed = 2024;
    Genome5M out;
    out.ref = synthetic_genome(spec);
    SeedConfig cfg;
    cfg.hash_bits = 22;
    out.map = SeedMap::build(out.ref, cfg);
    return out;
  }();
  return g;
}

Verdict planted_recall() {
  const Genome5M& g = genome_5m();
  SimConfig cfg;
  cfg.pair_count = 50'000;
  cfg.seed = 5;
  auto sims = simulate(g.ref, cfg);
  const PairMapper mapper(g.map, g.ref);
  DpAligner scratch;
  std::uint64_t ok = 0;
  for (const auto& s : sims) {
    const auto m = mapper.map(s.pair, scratch);
    const auto& t = s.truth;
    const std::uint64_t g1 = g.ref.meta().local_to_global(t.seq1, t.pos1);
    const std::uint64_t g2 = g.ref.meta().local_to_global(t.seq2, t.pos2);
    ok += m.outcome == Outcome::MappedLight && m.a1->ref_start == g1 && m.a2->ref_start == g2 &&
          m.strand1 == t.strand1 && m.strand2 == t.strand2 && m.a1->score == 300 && m.a2->score == 300 &&
          static_cast<std::uint64_t>(std::abs(m.tlen)) == t.insert_size;
  }
  return {ok == sims.size(), std::to_string(ok) + "/" + std::to_string(sims.size()) +
                                 " pairs MappedLight at the planted placement with 300/300 and planted insert"};
}

Verdict error_rate_trend() {
  const Genome5M& g = genome_5m();
  const PairMapper mapper(g.map, g.ref);
  const double rates[] = {0, 0.0005, 0.001, 0.002, 0.005, 0.01};
  std::vector<RunStats> stats;
  for (double rate : rates) {
    SimConfig cfg;
    cfg.pair_count = 60'000;
    cfg.error_rate = rate;
    cfg.seed = 6;
    auto sims = simulate(g.ref, cfg);
    const auto pairs = pairs_of(sims);
    VectorPairSource src(pairs);
    std::ostringstream sink;
    stats.push_back(run(src, mapper, RunOptions{}, sink, nullptr));
  }

  auto adjacency = [](const RunStats& s) { return s.seedmap_miss_fraction() + s.adjacency_fail_fraction(); };
  auto light_fail = [](const RunStats& s) { return s.lightalign_fail_fraction(); };
  bool ok = true;
  std::ostringstream d;
  for (const auto& [label, metric] :
       {std::pair<const char*, std::function<double(const RunStats&)>>{"adjacency_fail", adjacency},
        {"lightalign_fail", light_fail}}) {
    int strict = 0;
    bool monotone = true;
    d << label << " [";
    for (std::size_t i = 0; i < stats.size(); ++i) {
      d << (i ? " " : "") << metric(stats[i]);
      if (i > 0) {
        monotone = monotone && metric(stats[i]) >= metric(stats[i - 1]);
        strict += metric(stats[i]) > metric(stats[i - 1]);
      }
    }
    d << "] strict steps " << strict << "/5; ";
    ok = ok && monotone && strict >= 4;
  }
  d << "mapped_light [";
  for (std::size_t i = 0; i < stats.size(); ++i) {
    d << (i ? " " : "") << stats[i].mapped_light_fraction();
    if (rates[i] <= 0.002) {
      ok = ok && stats[i].mapped_light_fraction() > 0.85;
    }
  }
  d << "]";
  return {ok, d.str()};
}

Verdict index_threshold_trend() {
  GenomeSpec spec;
  spec.length = 4'000'000;
  spec.seed = 77;
  spec.repeats = {{400, 30, 0.0}, {400, 200, 0.0}, {400, 1500, 0.0}};
  const Reference ref = synthetic_genome(spec);
  SimConfig cfg;
  cfg.pair_count = 20'000;
  cfg.seed = 8;
  cfg.error_rate = 0.001;
  auto sims = simulate(ref, cfg);
  const auto pairs = pairs_of(sims);

  std::vector<std::uint64_t> mapped;
  std::vector<std::uint64_t> mismapped;
  for (std::uint32_t threshold : {50u, 500u, 4000u}) {
    SeedConfig scfg;
    scfg.hash_bits = 22;
    const SeedMap map = SeedMap::build(ref, scfg, threshold);
    const PairMapper mapper(map, ref);
    DpAligner scratch;
    std::uint64_t m_count = 0;
    std::uint64_t wrong = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto m = mapper.map(pairs[i], scratch);
      if (m.outcome == Outcome::FallbackFull) {
        continue;
      }
      ++m_count;
      const auto& t = sims[i].truth;
      const auto g1 = static_cast<std::int64_t>(ref.meta().local_to_global(t.seq1, t.pos1));
      const bool right = m.strand1 == t.strand1 && std::abs(static_cast<std::int64_t>(m.a1->ref_start) - g1) <= 10;
      wrong += !right;
    }
    mapped.push_back(m_count);
    mismapped.push_back(wrong);
  }
  const bool ok = mapped[0] <= mapped[1] && mapped[1] <= mapped[2] && mismapped[0] <= mismapped[1] &&
                  mismapped[1] <= mismapped[2];
  std::ostringstream d;
  d << "thresholds 50/500/4000: mapped " << mapped[0] << '/' << mapped[1] << '/' << mapped[2] << ", mismapped "
    << mismapped[0] << '/' << mismapped[1] << '/' << mismapped[2] << " of " << pairs.size();
  return {ok, d.str()};
}

Verdict index_roundtrip() {
  testing::TempDir dir;
  GenomeSpec spec;
  spec.length = 300'000;
  spec.records = 3;
  spec.repeats = {{300, 50, 0.01}};
  const Reference ref = synthetic_genome(spec);
  SeedConfig cfg;
  cfg.hash_bits = 18;
  cfg.hash_seed = 12345;
  const SeedMap map = SeedMap::build(ref, cfg, 20);
  const auto path = dir.path() / "a.gprx";
  map.save(path);
  const SeedMap back = SeedMap::load(path);
  bool same = back.config() == map.config() && back.filter_threshold() == map.filter_threshold() &&
              back.ref_meta() == map.ref_meta();
  for (std::uint64_t h = 0; same && h < cfg.bucket_count(); ++h) {
    const auto a = map.query(static_cast<std::uint32_t>(h));
    const auto b = back.query(static_cast<std::uint32_t>(h));
    same = std::equal(a.begin(), a.end(), b.begin(), b.end());
  }

  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  std::mt19937_64 rng(9);
  int rejected = 0;
  constexpr int kTrials = 50;
  for (int t = 0; t < kTrials; ++t) {
    std::string b = bytes;
    // Header and trailer offsets included; magic/version bytes are excluded because they fail
    // earlier with their own errors.
    const std::size_t pos = 8 + rng() % (b.size() - 8);
    b[pos] = static_cast<char>(b[pos] ^ (1u << (rng() % 8)));
    const auto bad = dir.path() / "bad.gprx";
    std::ofstream(bad, std::ios::binary | std::ios::trunc) << b;
    try {
      SeedMap::load(bad);
    } catch (const ChecksumMismatch&) {
      ++rejected;
    } catch (const Error&) {
    }
  }
  std::ostringstream d;
  d << "all " << cfg.bucket_count() << " buckets " << (same ? "identical" : "DIFFER") << "; " << rejected << '/'
    << kTrials << " single-bit corruptions rejected by checksum";
  return {same && rejected == kTrials, d.str()};
}

Verdict determinism() {
  const Genome5M& g = genome_5m();
  SimConfig cfg;
  cfg.pair_count = 10'000;
  cfg.error_rate = 0.005;
  cfg.seed = 10;
  auto sims = simulate(g.ref, cfg);
  const auto pairs = pairs_of(sims);
  const PairMapper mapper(g.map, g.ref);
  std::vector<std::string> outputs;
  for (std::size_t batch : {std::size_t{4096}, std::size_t{333}}) {
    for (unsigned threads : {1u, 4u, 8u}) {
      VectorPairSource src(pairs);
      std::ostringstream sam;
      RunOptions opts;
      opts.threads = threads;
      opts.batch_size = batch;
      run(src, mapper, opts, sam, nullptr);
      outputs.push_back(sam.str());
    }
  }
  bool same = true;
  for (const auto& o : outputs) {
    same = same && o == outputs[0];
  }
  return {same, "threads {1,4,8} x batch {4096,333}: " + std::to_string(outputs[0].size()) + " SAM bytes, " +
                    (same ? "identical" : "DIFFERENT")};
}

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"score-table reproduction", 1.0, score_table},
      {"light-vs-DP oracle equivalence", 60.0, light_vs_dp},
      {"DP micro-oracle", 30.0, dp_micro_oracle},
      {"pair-filter equivalence", 30.0, pair_filter_oracle},
      {"planted-read recall", 60.0, planted_recall},
      {"error-rate trend", 0.0, error_rate_trend},
      {"index-threshold trend", 0.0, index_threshold_trend},
      {"index roundtrip and integrity", 0.0, index_roundtrip},
      {"determinism across thread counts", 0.0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0 && secs >= c.time_limit_s) {
      v.pass = false;
      v.detail += " (over the time limit)";
    }
    std::printf("%s %s: %s [%.2fs%s]\n", v.pass ? "PASS" : "FAIL", c.name.c_str(), v.detail.c_str(), secs,
                c.time_limit_s > 0 ? (" / limit " + std::to_string(static_cast<int>(c.time_limit_s)) + "s").c_str()
                                   : "");
    std::fflush(stdout);
    failures += !v.pass;
  }
  return failures == 0 ? 0 : 1;
}
