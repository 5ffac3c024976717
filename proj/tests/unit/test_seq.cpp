#include "genpair/error.hpp"
#include "genpair/io.hpp"
#include "genpair/packed_sequence.hpp"
#include "genpair/reference.hpp"

#include "../support/oracles.hpp"
#include "../support/temp_dir.hpp"

#include <doctest.h>
#include <zlib.h>

#include <fstream>
#include <random>
#include <sstream>

using namespace genpair;

namespace {

void write_gzip(const std::filesystem::path& p, const std::string& text) {
  gzFile f = gzopen(p.string().c_str(), "wb");
  REQUIRE(f != nullptr);
  gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
  gzclose(f);
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

} // namespace

TEST_CASE("complement is an involution pairing A-T and C-G") {
  for (std::uint8_t b = 0; b < 4; ++b) {
    CHECK(complement(complement(b)) == b);
  }
  CHECK(complement(Base::A) == Base::T);
  CHECK(complement(Base::C) == Base::G);
}

TEST_CASE("encode examples") {
  const auto s = PackedSequence::encode("ACGT");
  REQUIRE(s.size() == 4);
  for (std::uint8_t i = 0; i < 4; ++i) {
    CHECK(s.code(i) == i);
  }
  CHECK_FALSE(s.has_n());

  const auto n = PackedSequence::encode("ANA");
  CHECK(n.code(0) == 0);
  CHECK(n.code(1) == 0);
  CHECK(n.code(2) == 0);
  CHECK(n.is_n(1));
  CHECK_FALSE(n.is_n(0));
  CHECK(n.n_count() == 1);
  CHECK(n.decode() == "ANA");

  const auto e = PackedSequence::encode("");
  CHECK(e.size() == 0);
  CHECK(e.packed_bytes().empty());
}

TEST_CASE("encode rejects other characters with their position") {
  try {
    PackedSequence::encode("ACGXT");
    FAIL("expected InvalidBase");
  } catch (const InvalidBase& e) {
    CHECK(e.position() == 3);
    CHECK(e.base() == 'X');
  }
}

TEST_CASE("packed bytes hold first base in low bits") {
  const auto s = PackedSequence::encode("ACGTACGTA");
  const auto bytes = s.packed_bytes();
  REQUIRE(bytes.size() == 3);
  CHECK(bytes[0] == 0xE4);
  CHECK(bytes[1] == 0xE4);
  CHECK(bytes[2] == 0x00);
}

TEST_CASE("reverse complement examples") {
  CHECK(PackedSequence::encode("ACGT").reverse_complement().decode() == "ACGT");
  CHECK(PackedSequence::encode("AAA").reverse_complement().decode() == "TTT");
  CHECK(PackedSequence::encode("GATTACA").reverse_complement().decode() == testing::revcomp("GATTACA"));
  CHECK(PackedSequence::encode("GANTC").reverse_complement().decode() == "GANTC");
}

TEST_CASE("decode/encode roundtrip and rc involution over random strings") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    std::string s = testing::random_dna(rng, rng() % 200);
    for (char& c : s) {
      if (rng() % 20 == 0) {
        c = 'N';
      }
    }
    const auto p = PackedSequence::encode(s);
    CHECK(p.decode() == s);
    CHECK(p.reverse_complement().reverse_complement() == p);
    CHECK(p.reverse_complement().decode() == testing::revcomp(s));
    if (!s.empty()) {
      const std::size_t pos = rng() % s.size();
      const std::size_t len = rng() % (s.size() - pos + 1);
      CHECK(p.subsequence(pos, len).decode() == s.substr(pos, len));
      CHECK(p.has_n(pos, len) == (s.substr(pos, len).find('N') != std::string::npos));
    }
  }
}

TEST_CASE("lower case input folds to upper case") {
  CHECK(PackedSequence::encode("acgtn").decode() == "ACGTN");
}

TEST_CASE("parse_fasta examples") {
  {
    std::istringstream in(">c1\nACGT\n");
    const Reference r = parse_fasta(in);
    REQUIRE(r.count() == 1);
    CHECK(r.meta().name(0) == "c1");
    CHECK(r.meta().length(0) == 4);
  }
  {
    std::istringstream in(">a desc\nAC\nGT\n>b\nTT\n");
    const Reference r = parse_fasta(in);
    REQUIRE(r.count() == 2);
    CHECK(r.meta().name(0) == "a");
    CHECK(r.meta().cumulative_starts() == std::vector<std::uint64_t>{0, 4});
    CHECK(r.record(1).decode() == "TT");
  }
  {
    std::istringstream in(">x\nACRY\n");
    const Reference r = parse_fasta(in);
    CHECK(r.record(0).decode() == "ACNN");
    CHECK(r.sequence().is_n(2));
    CHECK(r.sequence().is_n(3));
  }
  {
    std::istringstream in(">x\r\nacgt\r\n\r\nnn\n");
    CHECK(parse_fasta(in).record(0).decode() == "ACGTNN");
  }
}

TEST_CASE("parse_fasta rejects sequence before a header") {
  std::istringstream in("ACGT\n>x\nAC\n");
  try {
    parse_fasta(in);
    FAIL("expected MalformedFasta");
  } catch (const MalformedFasta& e) {
    CHECK(e.line_no() == 1);
  }
}

TEST_CASE("gzip FASTA is detected by magic bytes") {
  testing::TempDir dir;
  const auto p = dir.path() / "ref.fa.gz";
  write_gzip(p, ">g\nACGTNACGT\n>h\nGG\n");
  const Reference r = read_fasta(p);
  REQUIRE(r.count() == 2);
  CHECK(r.record(0).decode() == "ACGTNACGT");
  CHECK(r.record(1).decode() == "GG");
}

TEST_CASE("reference coordinate maps are mutual inverses") {
  RefMeta meta({"a", "b", "c"}, {10, 1, 7});
  CHECK(meta.cumulative_starts() == std::vector<std::uint64_t>{0, 10, 11});
  CHECK(meta.total_length() == 18);
  for (std::uint64_t g = 0; g < meta.total_length(); ++g) {
    const auto local = meta.global_to_local(g);
    CHECK(meta.local_to_global(local.sequence, local.offset) == g);
  }
  CHECK(meta.global_to_local(10) == RefMeta::Local{1, 0});
  CHECK(meta.global_to_local(12) == RefMeta::Local{2, 1});
}

TEST_CASE("reference sidecar roundtrip and corruption") {
  testing::TempDir dir;
  Reference ref;
  ref.add("one", PackedSequence::encode("ACGTNNACGTTTGA"));
  ref.add("two", PackedSequence::encode("GGGCCA"));
  const auto p = dir.path() / "r.ref";
  ref.save(p);
  const Reference back = Reference::load(p);
  CHECK(back.meta() == ref.meta());
  CHECK(back.sequence() == ref.sequence());

  std::string bytes;
  {
    std::ifstream in(p, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  bytes[bytes.size() / 2] ^= 0x10;
  write_text(p, bytes);
  CHECK_THROWS_AS(Reference::load(p), ChecksumMismatch);
}

TEST_CASE("FASTQ pairs: ids, qualities and errors") {
  SUBCASE("one record each") {
    std::istringstream a("@r7/1 extra\nACGT\n+\nIIII\n");
    std::istringstream b("@r7/2\nTTGA\n+\nJJJJ\n");
    FastqPairReader reader(a, b);
    auto p = reader.next();
    REQUIRE(p);
    CHECK(p->id == "r7");
    CHECK(p->read1.decode() == "ACGT");
    CHECK(p->read2.decode() == "TTGA");
    CHECK(p->qual2 == "JJJJ");
    CHECK_FALSE(reader.next());
  }
  SUBCASE("stream two one record short") {
    std::istringstream a("@a\nAC\n+\nII\n@b\nAC\n+\nII\n");
    std::istringstream b("@a\nAC\n+\nII\n");
    FastqPairReader reader(a, b);
    CHECK(reader.next());
    CHECK_THROWS_AS(reader.next(), RecordCountMismatch);
  }
  SUBCASE("structural violation") {
    std::istringstream a("@a\nAC\n-\nII\n");
    std::istringstream b("@a\nAC\n+\nII\n");
    FastqPairReader reader(a, b);
    CHECK_THROWS_AS(reader.next(), MalformedFastq);
  }
  SUBCASE("quality length mismatch") {
    std::istringstream a("@a\nACG\n+\nII\n");
    std::istringstream b("@a\nAC\n+\nII\n");
    FastqPairReader reader(a, b);
    CHECK_THROWS_AS(reader.next(), MalformedFastq);
  }
}

TEST_CASE("normalize_read_id strips mate suffixes and comments") {
  CHECK(normalize_read_id("r7/1") == "r7");
  CHECK(normalize_read_id("r7/2") == "r7");
  CHECK(normalize_read_id("r7 1:N:0:1") == "r7");
  CHECK(normalize_read_id("r7") == "r7");
}

TEST_CASE("gzip FASTQ pair files") {
  testing::TempDir dir;
  write_gzip(dir.path() / "a.fq.gz", "@p/1\nACGTN\n+\nIIIII\n");
  write_text(dir.path() / "b.fq", "@p/2\nGGGG\n+\nIIII\n");
  FastqPairFiles files(dir.path() / "a.fq.gz", dir.path() / "b.fq");
  auto p = files.next();
  REQUIRE(p);
  CHECK(p->read1.decode() == "ACGTN");
  CHECK(p->read2.decode() == "GGGG");
  CHECK_FALSE(files.next());
}
