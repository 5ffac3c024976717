#pragma once

#include "genpair/packed_sequence.hpp"
#include "genpair/reference.hpp"

#include <cstddef>
#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace genpair {

struct ReadPair {
  std::string id;
  PackedSequence read1;
  PackedSequence read2;
  std::string qual1; // empty when unknown
  std::string qual2;
};

/// Pull-style source of read pairs.
class PairSource {
public:
  virtual ~PairSource() = default;
  virtual std::optional<ReadPair> next() = 0;
};

class VectorPairSource final : public PairSource {
public:
  explicit VectorPairSource(const std::vector<ReadPair>& pairs) : pairs_(pairs) {}
  std::optional<ReadPair> next() override {
    if (i_ == pairs_.size()) {
      return std::nullopt;
    }
    return pairs_[i_++];
  }

private:
  const std::vector<ReadPair>& pairs_;
  std::size_t i_ = 0;
};

/// Wraps `in` in a decompressing stream when it starts with the gzip magic 0x1F 0x8B;
/// otherwise reads `in` directly. `in` must outlive the returned stream.
std::unique_ptr<std::istream> maybe_gunzip(std::istream& in);

/// Opens a plain or gzip file for reading.
std::unique_ptr<std::istream> open_input(const std::filesystem::path& path);

Reference parse_fasta(std::istream& in);
Reference read_fasta(const std::filesystem::path& path);

/// Strips whitespace-separated comments and a trailing "/1" or "/2" from a FASTQ name.
std::string normalize_read_id(std::string_view name);

/// Reads two positionally matched 4-line FASTQ streams.
class FastqPairReader final : public PairSource {
public:
  FastqPairReader(std::istream& in1, std::istream& in2);
  std::optional<ReadPair> next() override;
  std::size_t records_read() const noexcept { return records_; }

private:
  struct Record {
    std::string name;
    std::string seq;
    std::string qual;
  };
  static bool read_record(std::istream& in, std::size_t& line_no, Record& rec);

  std::unique_ptr<std::istream> in1_;
  std::unique_ptr<std::istream> in2_;
  std::size_t line1_ = 0;
  std::size_t line2_ = 0;
  std::size_t records_ = 0;
};

/// Owns both FASTQ files of a pair.
class FastqPairFiles final : public PairSource {
public:
  FastqPairFiles(const std::filesystem::path& r1, const std::filesystem::path& r2);
  std::optional<ReadPair> next() override { return reader_->next(); }

private:
  std::unique_ptr<std::istream> in1_;
  std::unique_ptr<std::istream> in2_;
  std::unique_ptr<FastqPairReader> reader_;
};

/// Line-oriented text sink writing plain or gzip output.
class TextSink {
public:
  TextSink(const std::filesystem::path& path, bool gzip);
  ~TextSink();
  TextSink(const TextSink&) = delete;
  TextSink& operator=(const TextSink&) = delete;

  void write(std::string_view text);
  void close();

private:
  std::unique_ptr<std::ostream> plain_;
  void* gz_ = nullptr; // gzFile
};

void write_fastq_record(std::string& out, std::string_view name, const PackedSequence& seq,
                        std::string_view qual);

} // namespace genpair
