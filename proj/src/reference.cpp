#include "genpair/reference.hpp"

#include "binary_io.hpp"
#include "genpair/error.hpp"

#include <algorithm>

namespace genpair {

namespace {
constexpr char kRefMagic[4] = {'G', 'P', 'R', 'F'};
constexpr std::uint32_t kRefVersion = 1;
} // namespace

RefMeta::RefMeta(std::vector<std::string> names, std::vector<std::uint64_t> lengths)
    : names_(std::move(names)), lengths_(std::move(lengths)) {
  if (names_.size() != lengths_.size()) {
    throw Error("reference metadata: names and lengths differ in count");
  }
  starts_.reserve(lengths_.size());
  for (auto len : lengths_) {
    starts_.push_back(total_);
    total_ += len;
  }
}

void RefMeta::append(std::string name, std::uint64_t length) {
  names_.push_back(std::move(name));
  lengths_.push_back(length);
  starts_.push_back(total_);
  total_ += length;
}

std::size_t RefMeta::sequence_of(std::uint64_t g) const {
  auto it = std::upper_bound(starts_.begin(), starts_.end(), g);
  auto idx = static_cast<std::size_t>(std::distance(starts_.begin(), it)) - 1;
  // Zero-length records share a start with their successor; step past them.
  while (idx + 1 < starts_.size() && starts_[idx + 1] == starts_[idx] && lengths_[idx] == 0) {
    ++idx;
  }
  return idx;
}

RefMeta::Local RefMeta::global_to_local(std::uint64_t g) const {
  if (g >= total_) {
    throw Error("global coordinate " + std::to_string(g) + " outside reference");
  }
  const auto i = sequence_of(g);
  return {i, g - starts_[i]};
}

std::uint64_t RefMeta::local_to_global(std::size_t sequence, std::uint64_t offset) const {
  if (sequence >= count() || offset >= lengths_[sequence]) {
    throw Error("local coordinate outside reference");
  }
  return starts_[sequence] + offset;
}

void Reference::add(std::string name, const PackedSequence& seq) {
  meta_.append(std::move(name), seq.size());
  concat_.reserve(concat_.size() + seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq.is_n(i)) {
      concat_.push_back_n();
    } else {
      concat_.push_back(seq.code(i));
    }
  }
}

void Reference::save(const std::filesystem::path& path) const {
  detail::CrcWriter w(path);
  w.bytes(kRefMagic, 4);
  w.pod(kRefVersion);
  w.pod(static_cast<std::uint64_t>(count()));
  for (std::size_t i = 0; i < count(); ++i) {
    w.string16(meta_.name(i));
    w.pod(meta_.length(i));
  }
  w.array(concat_.code_words());
  w.array(concat_.n_words());
  w.finish();
}

Reference Reference::load(const std::filesystem::path& path) {
  detail::CrcReader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kRefMagic)) {
    throw BadMagic();
  }
  if (const auto v = r.pod<std::uint32_t>(); v != kRefVersion) {
    throw VersionMismatch(kRefVersion, v);
  }
  const auto count = r.pod<std::uint64_t>();
  if (count > r.file_size()) {
    throw ChecksumMismatch();
  }
  Reference ref;
  for (std::uint64_t i = 0; i < count; ++i) {
    auto name = r.string16();
    ref.meta_.append(std::move(name), r.pod<std::uint64_t>());
  }
  const std::uint64_t total = ref.meta_.total_length();
  const std::uint64_t code_words = (total + 31) / 32;
  const std::uint64_t n_words = (total + 63) / 64;
  const std::uint64_t expected = r.position() + 8 * (code_words + n_words) + 4;
  if (expected > r.file_size()) {
    throw Truncated(expected, r.file_size());
  }
  auto codes = r.array<std::uint64_t>(code_words, expected);
  auto nmask = r.array<std::uint64_t>(n_words, expected);
  r.verify_trailer();
  ref.concat_ = PackedSequence::from_words(total, std::move(codes), std::move(nmask));
  return ref;
}

} // namespace genpair
