#pragma once

#include "genpair/packed_sequence.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace genpair {

/// Sequence names, lengths and their starts in the concatenated (global) coordinate space.
class RefMeta {
public:
  RefMeta() = default;
  RefMeta(std::vector<std::string> names, std::vector<std::uint64_t> lengths);

  void append(std::string name, std::uint64_t length);

  std::size_t count() const noexcept { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::uint64_t length(std::size_t i) const { return lengths_[i]; }
  std::uint64_t start(std::size_t i) const { return starts_[i]; }
  std::uint64_t end(std::size_t i) const { return starts_[i] + lengths_[i]; }
  std::uint64_t total_length() const noexcept { return total_; }

  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<std::uint64_t>& lengths() const noexcept { return lengths_; }
  const std::vector<std::uint64_t>& cumulative_starts() const noexcept { return starts_; }

  /// Index of the sequence containing global coordinate g. Requires g < total_length().
  std::size_t sequence_of(std::uint64_t g) const;

  struct Local {
    std::size_t sequence;
    std::uint64_t offset;
    friend bool operator==(const Local&, const Local&) = default;
  };
  Local global_to_local(std::uint64_t g) const;
  std::uint64_t local_to_global(std::size_t sequence, std::uint64_t offset) const;

  friend bool operator==(const RefMeta&, const RefMeta&) = default;

private:
  std::vector<std::string> names_;
  std::vector<std::uint64_t> lengths_;
  std::vector<std::uint64_t> starts_;
  std::uint64_t total_ = 0;
};

/// A reference genome: named records concatenated into one global coordinate space.
class Reference {
public:
  Reference() = default;

  void add(std::string name, const PackedSequence& seq);

  const RefMeta& meta() const noexcept { return meta_; }
  /// All records back to back; global coordinate g indexes this sequence directly.
  const PackedSequence& sequence() const noexcept { return concat_; }
  PackedSequence record(std::size_t i) const {
    return concat_.subsequence(meta_.start(i), meta_.length(i));
  }

  std::size_t count() const noexcept { return meta_.count(); }
  std::uint64_t total_length() const noexcept { return meta_.total_length(); }
  bool empty() const noexcept { return meta_.total_length() == 0; }

  /// Packed-reference sidecar written next to an index so `map` needs no FASTA.
  void save(const std::filesystem::path& path) const;
  static Reference load(const std::filesystem::path& path);

private:
  RefMeta meta_;
  PackedSequence concat_;
};

} // namespace genpair
