#include "genpair/candidates.hpp"
#include "genpair/seed_map.hpp"

#include "../support/oracles.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace genpair;
using testing::random_dna;

namespace {

struct Toy {
  std::string genome;
  Reference ref;
  SeedMap map;
};

Toy make_toy(std::uint64_t seed, std::size_t length) {
  std::mt19937_64 rng(seed);
  Toy t;
  t.genome = random_dna(rng, length);
  t.ref.add("chr", PackedSequence::encode(t.genome));
  SeedConfig cfg;
  cfg.hash_bits = 20;
  t.map = SeedMap::build(t.ref, cfg);
  return t;
}

std::vector<Candidate> random_list(std::mt19937_64& rng, std::size_t n, std::uint64_t range, Mate mate) {
  n = std::min<std::size_t>(n, 2 * range);
  std::vector<Candidate> out;
  std::set<std::pair<std::uint64_t, Strand>> seen;
  while (out.size() < n) {
    Candidate c;
    c.start = rng() % range;
    c.strand = rng() % 2 ? Strand::Rev : Strand::Fwd;
    c.slot_mask = static_cast<std::uint8_t>(1 + rng() % 7);
    c.mate = mate;
    if (seen.insert({c.start, c.strand}).second) {
      out.push_back(c);
    }
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.start, a.strand) < std::tie(b.start, b.strand);
  });
  return out;
}

} // namespace

TEST_CASE("planted forward read votes with every slot") {
  const Toy t = make_toy(1, 20000);
  const auto read = PackedSequence::encode(t.genome.substr(1000, 150));
  const auto cands = candidates_for_read(read, Mate::R1, t.map);
  const auto it = std::find_if(cands.begin(), cands.end(), [](const Candidate& c) { return c.start == 1000; });
  REQUIRE(it != cands.end());
  CHECK(it->strand == Strand::Fwd);
  CHECK(it->slot_mask == 0b111);
  CHECK(it->mate == Mate::R1);
}

TEST_CASE("reverse-complemented read projects to the forward start") {
  const Toy t = make_toy(2, 20000);
  const std::string window = t.genome.substr(1000, 150);
  const auto read = PackedSequence::encode(testing::revcomp(window));
  const auto cands = candidates_for_read(read, Mate::R2, t.map);
  const auto it = std::find_if(cands.begin(), cands.end(), [](const Candidate& c) { return c.start == 1000; });
  REQUIRE(it != cands.end());
  CHECK(it->strand == Strand::Rev);
  CHECK(read.reverse_complement().decode() == window);
}

TEST_CASE("a corrupted middle seed drops its vote") {
  const Toy t = make_toy(3, 20000);
  std::string r = t.genome.substr(1000, 150);
  r[75] = testing::other_base(r[75], 0);
  const auto cands = candidates_for_read(PackedSequence::encode(r), Mate::R1, t.map);
  const auto it = std::find_if(cands.begin(), cands.end(), [](const Candidate& c) { return c.start == 1000; });
  REQUIRE(it != cands.end());
  CHECK(it->slot_mask == (slot_bit(Slot::First) | slot_bit(Slot::Last)));
}

TEST_CASE("candidates are sorted and unique by (start, strand)") {
  // A tandem-rich genome makes many coinciding projections.
  std::string unit = "ACGTTGCAAGGCTTACGATCGATCGGATCCATGCAGTCAGTCGATGCATGCAGT";
  std::string g;
  while (g.size() < 5000) {
    g += unit;
  }
  Reference ref;
  ref.add("t", PackedSequence::encode(g));
  SeedConfig cfg;
  cfg.hash_bits = 16;
  const SeedMap map = SeedMap::build(ref, cfg);
  const auto cands = candidates_for_read(PackedSequence::encode(g.substr(300, 150)), Mate::R1, map);
  REQUIRE_FALSE(cands.empty());
  for (std::size_t i = 1; i < cands.size(); ++i) {
    CHECK(std::tie(cands[i - 1].start, cands[i - 1].strand) < std::tie(cands[i].start, cands[i].strand));
  }
  for (const auto& c : cands) {
    CHECK(c.slot_mask != 0);
    CHECK(c.start + 150 <= g.size());
  }
}

TEST_CASE("pair_filter examples") {
  MapConfig cfg;
  const std::vector<Candidate> a{{100, Strand::Fwd, 0b111, Mate::R1}};
  const std::vector<Candidate> b{{350, Strand::Rev, 0b111, Mate::R2}};
  const auto pcs = pair_filter(a, b, 150, 150, cfg);
  REQUIRE(pcs.size() == 1);
  CHECK(pcs[0].span == 400);

  const std::vector<Candidate> far{{900, Strand::Rev, 0b111, Mate::R2}};
  CHECK(pair_filter(a, far, 150, 150, cfg).empty());

  const std::vector<Candidate> same{{350, Strand::Fwd, 0b111, Mate::R2}};
  CHECK(pair_filter(a, same, 150, 150, cfg).empty());

  cfg.delta = 250;
  CHECK(pair_filter(a, b, 150, 150, cfg).size() == 1);
  cfg.delta = 249;
  CHECK(pair_filter(a, b, 150, 150, cfg).empty());
}

TEST_CASE("pair_filter equals the brute-force cross product") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 1500; ++t) {
    MapConfig cfg;
    const std::uint64_t deltas[] = {1, 100, 500, 1'000'000};
    cfg.delta = deltas[rng() % 4];
    cfg.max_pair_candidates = 1 + rng() % 20;
    const std::uint64_t range = 10 + rng() % 5000;
    const auto a = random_list(rng, rng() % 60, range, Mate::R1);
    const auto b = random_list(rng, rng() % 60, range, Mate::R2);
    const std::size_t l1 = 50 + rng() % 150;
    const std::size_t l2 = 50 + rng() % 150;
    const auto got = pair_filter(a, b, l1, l2, cfg);
    const auto want = testing::brute_pair_filter(a, b, l1, l2, cfg);
    REQUIRE(got == want);
  }
}

TEST_CASE("growing delta never removes a pair before truncation") {
  std::mt19937_64 rng(78);
  for (int t = 0; t < 200; ++t) {
    MapConfig small;
    small.max_pair_candidates = 1'000'000;
    small.delta = rng() % 300;
    MapConfig big = small;
    big.delta = small.delta + rng() % 300;
    const auto a = random_list(rng, rng() % 40, 2000, Mate::R1);
    const auto b = random_list(rng, rng() % 40, 2000, Mate::R2);
    const auto s = pair_filter(a, b, 100, 100, small);
    const auto g = pair_filter(a, b, 100, 100, big);
    for (const auto& pc : s) {
      CHECK(std::find(g.begin(), g.end(), pc) != g.end());
    }
  }
}

TEST_CASE("seed_match_rate") {
  const Toy t = make_toy(5, 30000);
  std::mt19937_64 rng(6);
  std::vector<ReadPair> pairs;
  for (int i = 0; i < 50; ++i) {
    const std::size_t f = rng() % (30000 - 400);
    ReadPair p;
    p.id = std::to_string(i);
    p.read1 = PackedSequence::encode(t.genome.substr(f, 150));
    p.read2 = PackedSequence::encode(testing::revcomp(t.genome.substr(f + 250, 150)));
    pairs.push_back(p);
  }
  {
    VectorPairSource src(pairs);
    CHECK(seed_match_rate(src, t.map, MapConfig{}) == 1.0);
  }
  for (auto& p : pairs) {
    std::string r = p.read1.decode();
    for (std::size_t k : {10u, 75u, 120u}) {
      r[k] = testing::other_base(r[k], 1);
    }
    p.read1 = PackedSequence::encode(r);
  }
  VectorPairSource src(pairs);
  CHECK(seed_match_rate(src, t.map, MapConfig{}) == 0.0);
}
