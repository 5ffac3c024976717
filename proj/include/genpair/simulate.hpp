#pragma once

#include "genpair/io.hpp"
#include "genpair/reference.hpp"
#include "genpair/seeding.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace genpair {

/// Deterministic random source. The engine is std::mt19937_64, whose output sequence is
/// fixed by the C++ standard; the distributions below are implemented here so draws do not
/// depend on the standard library vendor.
class SimRng {
public:
  explicit SimRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n);
  /// Box-Muller normal deviate.
  double normal(double mean, double sd);

private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

struct SimConfig {
  std::uint32_t read_len = 150;
  double insert_mean = 350.0;
  double insert_sd = 50.0;
  double error_rate = 0.0;
  /// Relative weights of substitutions, insertions and deletions.
  std::array<double, 3> error_mix{1.0 / 3, 1.0 / 3, 1.0 / 3};
  std::uint64_t seed = 1;
  std::uint64_t pair_count = 1000;

  void validate() const;
};

enum class EditOp : char { Substitution = 'X', Insertion = 'I', Deletion = 'D' };

/// One planted sequencing error, positioned on the read's source template.
struct ReadEdit {
  std::uint32_t template_pos; // insertions go before this template base
  EditOp op;
  char base; // substituted/inserted read base, or the deleted template base
  friend bool operator==(const ReadEdit&, const ReadEdit&) = default;
};

struct SimTruth {
  std::size_t seq1 = 0;
  std::uint64_t pos1 = 0; // 0-based leftmost reference base covered by mate 1
  Strand strand1 = Strand::Fwd;
  std::size_t seq2 = 0;
  std::uint64_t pos2 = 0;
  Strand strand2 = Strand::Rev;
  std::uint64_t insert_size = 0;
  std::vector<ReadEdit> edits1;
  std::vector<ReadEdit> edits2;
};

struct SimulatedPair {
  ReadPair pair;
  SimTruth truth;
};

/// Streams simulated FR pairs. Fragments are drawn uniformly over N-free positions of records
/// long enough for the sampled insert; read 1 is the fragment's forward prefix and read 2 the
/// reverse complement of its suffix, with the fragment itself taken from either strand.
class ReadSimulator {
public:
  /// Throws ReferenceTooShort when no record can hold a read.
  ReadSimulator(const Reference& ref, SimConfig cfg);
  std::optional<SimulatedPair> next();

private:
  std::string make_read(std::string_view templ, std::vector<ReadEdit>& edits, std::uint32_t& consumed);

  const Reference& ref_;
  SimConfig cfg_;
  SimRng rng_;
  std::uint64_t produced_ = 0;
  std::vector<std::size_t> usable_;
  std::vector<std::uint64_t> cumulative_;
};

std::vector<SimulatedPair> simulate(const Reference& ref, const SimConfig& cfg);

/// Rebuilds a read from its template and planted edits.
std::string apply_edits(std::string_view templ, const std::vector<ReadEdit>& edits, std::size_t read_len);

std::string format_edits(const std::vector<ReadEdit>& edits);
std::vector<ReadEdit> parse_edits(std::string_view text);

std::string truth_tsv_header();
std::string truth_tsv_line(const std::string& pair_id, const SimTruth& truth, const RefMeta& meta);

struct RepeatFamily {
  std::uint32_t unit_length = 300;
  std::uint32_t copies = 10;
  double divergence = 0.0; // per-base substitution probability applied to each copy
};

struct GenomeSpec {
  std::uint64_t length = 1'000'000;
  std::uint32_t records = 1;
  std::uint64_t seed = 42;
  std::vector<RepeatFamily> repeats;
};

/// Uniform random genome with optional dispersed repeat families.
Reference synthetic_genome(const GenomeSpec& spec);

} // namespace genpair
