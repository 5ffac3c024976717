#pragma once

// Little-endian binary streams with a running CRC32, shared by the index and reference files.

#include "genpair/error.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace genpair::detail {

class CrcWriter {
public:
  explicit CrcWriter(const std::filesystem::path& path) : out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) {
      throw IoError("cannot open " + path.string() + " for writing");
    }
  }

  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const Bytef*>(data);
    // zlib's crc32 takes a uInt length.
    for (std::size_t done = 0; done < n;) {
      const auto chunk = static_cast<uInt>(std::min<std::size_t>(n - done, 1u << 30));
      crc_ = crc32(crc_, p + done, chunk);
      done += chunk;
    }
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
    if (!out_) {
      throw IoError("write failed");
    }
  }
  template <class T> void pod(T v) { bytes(&v, sizeof v); }
  template <class T> void array(std::span<const T> v) { bytes(v.data(), v.size_bytes()); }
  void string16(const std::string& s) {
    pod(static_cast<std::uint16_t>(s.size()));
    bytes(s.data(), s.size());
  }

  void finish() {
    const auto c = static_cast<std::uint32_t>(crc_);
    out_.write(reinterpret_cast<const char*>(&c), sizeof c);
    out_.flush();
    if (!out_) {
      throw IoError("write failed");
    }
  }

private:
  std::ofstream out_;
  uLong crc_ = crc32(0L, Z_NULL, 0);
};

class CrcReader {
public:
  explicit CrcReader(const std::filesystem::path& path) : in_(path, std::ios::binary) {
    if (!in_) {
      throw IoError("cannot open " + path.string());
    }
    std::error_code ec;
    file_size_ = std::filesystem::file_size(path, ec);
    if (ec) {
      throw IoError("cannot stat " + path.string());
    }
  }

  std::uint64_t file_size() const noexcept { return file_size_; }
  std::uint64_t position() const noexcept { return pos_; }

  /// Throws Truncated(expected_total, file_size) when the file ends early.
  void bytes(void* data, std::size_t n, std::uint64_t expected_total = 0) {
    if (pos_ + n > file_size_) {
      throw Truncated(expected_total ? expected_total : pos_ + n, file_size_);
    }
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
      throw IoError("read failed");
    }
    auto* p = static_cast<const Bytef*>(data);
    for (std::size_t done = 0; done < n;) {
      const auto chunk = static_cast<uInt>(std::min<std::size_t>(n - done, 1u << 30));
      crc_ = crc32(crc_, p + done, chunk);
      done += chunk;
    }
    pos_ += n;
  }
  template <class T> T pod(std::uint64_t expected_total = 0) {
    T v{};
    bytes(&v, sizeof v, expected_total);
    return v;
  }
  template <class T> std::vector<T> array(std::uint64_t count, std::uint64_t expected_total = 0) {
    if (pos_ + count * sizeof(T) > file_size_) {
      throw Truncated(expected_total ? expected_total : pos_ + count * sizeof(T), file_size_);
    }
    std::vector<T> v(count);
    bytes(v.data(), count * sizeof(T), expected_total);
    return v;
  }
  std::string string16() {
    const auto n = pod<std::uint16_t>();
    std::string s(n, '\0');
    bytes(s.data(), n);
    return s;
  }

  /// Reads the trailing CRC and checks it; also rejects trailing garbage.
  void verify_trailer() {
    if (pos_ + 4 > file_size_) {
      throw Truncated(pos_ + 4, file_size_);
    }
    const auto computed = static_cast<std::uint32_t>(crc_);
    std::uint32_t stored = 0;
    in_.read(reinterpret_cast<char*>(&stored), sizeof stored);
    pos_ += 4;
    if (stored != computed || pos_ != file_size_) {
      throw ChecksumMismatch();
    }
  }

private:
  std::ifstream in_;
  std::uint64_t file_size_ = 0;
  std::uint64_t pos_ = 0;
  uLong crc_ = crc32(0L, Z_NULL, 0);
};

} // namespace genpair::detail
