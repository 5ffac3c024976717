#include "genpair/seed_map.hpp"

#include "binary_io.hpp"
#include "genpair/error.hpp"

#include <algorithm>
#include <bit>

namespace genpair {

namespace {

constexpr char kIndexMagic[4] = {'G', 'P', 'R', 'X'};

/// Calls fn(global_position) for every N-free window that stays inside one record.
template <class Fn> void for_each_window(const Reference& ref, std::uint32_t seed_len, Fn&& fn) {
  const PackedSequence& seq = ref.sequence();
  const RefMeta& meta = ref.meta();
  for (std::size_t r = 0; r < meta.count(); ++r) {
    const std::uint64_t begin = meta.start(r);
    const std::uint64_t end = meta.end(r);
    std::uint64_t clean_run = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      clean_run = seq.is_n(i) ? 0 : clean_run + 1;
      if (clean_run >= seed_len) {
        fn(i + 1 - seed_len);
      }
    }
  }
}

} // namespace

SeedMap SeedMap::build(const Reference& ref, const SeedConfig& cfg, std::uint32_t filter_threshold) {
  cfg.validate();
  if (ref.empty()) {
    throw EmptyReference();
  }
  if (filter_threshold == 0) {
    throw ConfigError("filter threshold must be at least 1");
  }

  SeedMap map;
  map.cfg_ = cfg;
  map.filter_threshold_ = filter_threshold;
  map.meta_ = ref.meta();

  // Counting sort in two passes: tally bucket sizes, then scatter positions. Positions are
  // visited in ascending order so every bucket comes out sorted without a sort step.
  const std::uint64_t buckets = cfg.bucket_count();
  auto& table = map.seed_table_;
  table.assign(buckets + 2, 0);
  const PackedSequence& seq = ref.sequence();
  for_each_window(ref, cfg.seed_len, [&](std::uint64_t pos) { ++table[hash_window(seq, pos, cfg) + 2]; });

  std::vector<std::uint64_t> filtered((buckets + 63) / 64, 0);
  std::uint64_t filtered_count = 0;
  std::uint64_t prefilter = 0;
  for (std::uint64_t h = 0; h < buckets; ++h) {
    const std::uint64_t c = table[h + 2];
    prefilter += c;
    if (c > filter_threshold) {
      filtered[h / 64] |= std::uint64_t{1} << (h % 64);
      ++filtered_count;
      table[h + 2] = 0;
    }
  }
  for (std::uint64_t h = 2; h < table.size(); ++h) {
    table[h] += table[h - 1];
  }

  map.location_table_.resize(table.back());
  for_each_window(ref, cfg.seed_len, [&](std::uint64_t pos) {
    const std::uint32_t h = hash_window(seq, pos, cfg);
    if ((filtered[h / 64] >> (h % 64)) & 1u) {
      return;
    }
    map.location_table_[table[h + 1]++] = pos;
  });
  table.pop_back();

  map.filtered_buckets_ = filtered_count;
  map.prefilter_locations_ = prefilter;
  return map;
}

void SeedMap::save(const std::filesystem::path& path) const {
  detail::CrcWriter w(path);
  w.bytes(kIndexMagic, 4);
  w.pod(kFormatVersion);
  w.pod(cfg_.seed_len);
  w.pod(cfg_.hash_bits);
  w.pod(cfg_.hash_seed);
  w.pod(filter_threshold_);
  w.pod(static_cast<std::uint64_t>(meta_.count()));
  for (std::size_t i = 0; i < meta_.count(); ++i) {
    if (meta_.name(i).size() > 0xFFFF) {
      throw Error("sequence name too long for the index format: " + meta_.name(i).substr(0, 32));
    }
    w.string16(meta_.name(i));
    w.pod(meta_.length(i));
  }
  w.array(std::span<const std::uint64_t>(seed_table_));
  w.pod(static_cast<std::uint64_t>(location_table_.size()));
  w.array(std::span<const std::uint64_t>(location_table_));
  w.finish();
}

SeedMap SeedMap::load(const std::filesystem::path& path) {
  detail::CrcReader r(path);
  char magic[4];
  r.bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kIndexMagic)) {
    throw BadMagic();
  }
  if (const auto v = r.pod<std::uint32_t>(); v != kFormatVersion) {
    throw VersionMismatch(kFormatVersion, v);
  }

  SeedMap map;
  map.cfg_.seed_len = r.pod<std::uint32_t>();
  map.cfg_.hash_bits = r.pod<std::uint32_t>();
  map.cfg_.hash_seed = r.pod<std::uint32_t>();
  map.filter_threshold_ = r.pod<std::uint32_t>();
  const auto count = r.pod<std::uint64_t>();
  // Each record takes at least 10 header bytes; anything larger is a corrupted count.
  if (count > r.file_size() / 10) {
    throw ChecksumMismatch();
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    auto name = r.string16();
    map.meta_.append(std::move(name), r.pod<std::uint64_t>());
  }
  if (map.cfg_.hash_bits < 16 || map.cfg_.hash_bits > 32) {
    throw ChecksumMismatch();
  }
  const std::uint64_t table_entries = map.cfg_.bucket_count() + 1;
  const std::uint64_t min_total = r.position() + 8 * table_entries + 8 + 4;
  if (min_total > r.file_size()) {
    throw Truncated(min_total, r.file_size());
  }
  map.seed_table_ = r.array<std::uint64_t>(table_entries, min_total);
  const auto locations = r.pod<std::uint64_t>();
  const std::uint64_t expected = r.position() + 8 * locations + 4;
  if (locations > r.file_size() || expected > r.file_size()) {
    throw Truncated(expected, r.file_size());
  }
  map.location_table_ = r.array<std::uint64_t>(locations, expected);
  r.verify_trailer();

  if (map.seed_table_.front() != 0 || map.seed_table_.back() != locations ||
      !std::is_sorted(map.seed_table_.begin(), map.seed_table_.end())) {
    throw Error("index seed table is inconsistent");
  }
  return map;
}

IndexStats index_stats(const SeedMap& map) {
  IndexStats st;
  st.filtered_bucket_count = map.filtered_bucket_count();
  st.prefilter_total_locations = map.prefilter_location_count();
  const auto table = map.seed_table();
  for (std::size_t h = 0; h + 1 < table.size(); ++h) {
    const std::uint64_t n = table[h + 1] - table[h];
    if (n == 0) {
      continue;
    }
    ++st.buckets_nonempty;
    st.total_locations += n;
    const auto bin = static_cast<std::size_t>(std::bit_width(n) - 1);
    if (st.histogram.size() <= bin) {
      st.histogram.resize(bin + 1, 0);
    }
    ++st.histogram[bin];
  }
  if (st.buckets_nonempty != 0) {
    st.mean_locations_per_nonempty_bucket =
        static_cast<double>(st.total_locations) / static_cast<double>(st.buckets_nonempty);
  }
  return st;
}

} // namespace genpair
