#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace genpair {

/// Base for every data error the library raises. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
  using Error::Error;
};

class InvalidBase : public Error {
public:
  InvalidBase(std::size_t position, char base)
      : Error("invalid base '" + std::string(1, base) + "' at position " + std::to_string(position)),
        position_(position), base_(base) {}

  std::size_t position() const noexcept { return position_; }
  char base() const noexcept { return base_; }

private:
  std::size_t position_;
  char base_;
};

class MalformedFasta : public Error {
public:
  explicit MalformedFasta(std::size_t line_no)
      : Error("malformed FASTA at line " + std::to_string(line_no)), line_no_(line_no) {}
  std::size_t line_no() const noexcept { return line_no_; }

private:
  std::size_t line_no_;
};

class MalformedFastq : public Error {
public:
  MalformedFastq(std::size_t line_no, const std::string& what)
      : Error("malformed FASTQ at line " + std::to_string(line_no) + ": " + what), line_no_(line_no) {}
  std::size_t line_no() const noexcept { return line_no_; }

private:
  std::size_t line_no_;
};

class RecordCountMismatch : public Error {
public:
  explicit RecordCountMismatch(std::size_t records_read)
      : Error("paired FASTQ inputs have different record counts (diverged after " +
              std::to_string(records_read) + " records)") {}
};

class ReadTooShort : public Error {
public:
  ReadTooShort(std::size_t read_len, std::size_t seed_len)
      : Error("read of length " + std::to_string(read_len) + " is shorter than seed length " +
              std::to_string(seed_len)) {}
};

class ContainsN : public Error {
public:
  ContainsN() : Error("seed window contains an ambiguous base") {}
};

class EmptyReference : public Error {
public:
  EmptyReference() : Error("reference is empty") {}
};

class BadMagic : public Error {
public:
  BadMagic() : Error("bad magic: not a genpair file") {}
};

class VersionMismatch : public Error {
public:
  VersionMismatch(std::uint32_t expected, std::uint32_t got)
      : Error("unsupported format version " + std::to_string(got) + " (expected " +
              std::to_string(expected) + ")") {}
};

class Truncated : public Error {
public:
  Truncated(std::uint64_t expected, std::uint64_t got)
      : Error("file truncated: expected " + std::to_string(expected) + " bytes, got " +
              std::to_string(got)),
        expected_(expected), got_(got) {}
  std::uint64_t expected() const noexcept { return expected_; }
  std::uint64_t got() const noexcept { return got_; }

private:
  std::uint64_t expected_;
  std::uint64_t got_;
};

class ChecksumMismatch : public Error {
public:
  ChecksumMismatch() : Error("checksum mismatch: file is corrupted") {}
};

class WindowTooShort : public Error {
public:
  WindowTooShort(std::size_t needed, std::size_t got)
      : Error("reference window too short: need " + std::to_string(needed) + " bases, got " +
              std::to_string(got)) {}
};

class BandExceeded : public Error {
public:
  BandExceeded() : Error("optimal alignment may leave the DP band") {}
};

class ReferenceTooShort : public Error {
public:
  ReferenceTooShort() : Error("reference too short for the requested fragment lengths") {}
};

class ConfigError : public Error {
public:
  using Error::Error;
};

} // namespace genpair
