#include "genpair/simulate.hpp"

#include "genpair/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace genpair {

std::uint64_t SimRng::below(std::uint64_t n) {
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = (0 - n) % n;
  while (true) {
    const std::uint64_t x = next();
    if (x >= limit) {
      return x % n;
    }
  }
}

double SimRng::normal(double mean, double sd) {
  if (spare_) {
    const double z = *spare_;
    spare_.reset();
    return mean + sd * z;
  }
  double u1 = uniform();
  while (u1 <= 0.0) {
    u1 = uniform();
  }
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  return mean + sd * r * std::cos(theta);
}

void SimConfig::validate() const {
  if (read_len == 0) {
    throw ConfigError("read length must be positive");
  }
  if (insert_mean < read_len) {
    throw ConfigError("insert mean must be at least the read length");
  }
  if (insert_sd < 0 || error_rate < 0 || error_rate > 1) {
    throw ConfigError("invalid insert deviation or error rate");
  }
  double sum = 0;
  for (double w : error_mix) {
    if (w < 0) {
      throw ConfigError("error mix weights must be non-negative");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("error mix weights must sum to 1");
  }
}

namespace {

char random_base(SimRng& rng) { return "ACGT"[rng.below(4)]; }

char other_base(SimRng& rng, char b) {
  const int code = char_to_code(b);
  const auto shift = 1 + rng.below(3);
  return "ACGT"[(static_cast<std::uint64_t>(code < 0 || code > 3 ? 0 : code) + shift) % 4];
}

std::string reverse_complement(std::string_view s) {
  std::string out(s.rbegin(), s.rend());
  for (char& c : out) {
    switch (c) {
    case 'A': c = 'T'; break;
    case 'C': c = 'G'; break;
    case 'G': c = 'C'; break;
    case 'T': c = 'A'; break;
    default: c = 'N'; break;
    }
  }
  return out;
}

} // namespace

ReadSimulator::ReadSimulator(const Reference& ref, SimConfig cfg) : ref_(ref), cfg_(cfg), rng_(cfg.seed) {
  cfg_.validate();
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < ref.count(); ++i) {
    if (ref.meta().length(i) >= cfg_.read_len) {
      usable_.push_back(i);
      total += ref.meta().length(i);
      cumulative_.push_back(total);
    }
  }
  if (usable_.empty()) {
    throw ReferenceTooShort();
  }
}

std::string ReadSimulator::make_read(std::string_view templ, std::vector<ReadEdit>& edits, std::uint32_t& consumed) {
  const std::size_t L = cfg_.read_len;
  std::string read;
  read.reserve(L);
  std::size_t t = 0;
  const double sub_w = cfg_.error_mix[0];
  const double ins_w = cfg_.error_mix[1];
  while (read.size() < L && t < templ.size()) {
    const char tb = templ[t];
    if (cfg_.error_rate > 0 && rng_.uniform() < cfg_.error_rate) {
      const double u = rng_.uniform();
      EditOp op = u < sub_w ? EditOp::Substitution : u < sub_w + ins_w ? EditOp::Insertion : EditOp::Deletion;
      // A deletion must leave enough template to finish the read.
      if (op == EditOp::Deletion && templ.size() - t - 1 < L - read.size()) {
        op = EditOp::Substitution;
      }
      switch (op) {
      case EditOp::Substitution: {
        const char b = other_base(rng_, tb);
        edits.push_back({static_cast<std::uint32_t>(t), op, b});
        read.push_back(b);
        ++t;
        break;
      }
      case EditOp::Insertion: {
        const char b = random_base(rng_);
        edits.push_back({static_cast<std::uint32_t>(t), op, b});
        read.push_back(b);
        if (read.size() < L) {
          read.push_back(tb);
          ++t;
        }
        break;
      }
      case EditOp::Deletion:
        edits.push_back({static_cast<std::uint32_t>(t), op, tb});
        ++t;
        break;
      }
      continue;
    }
    read.push_back(tb);
    ++t;
  }
  consumed = static_cast<std::uint32_t>(t);
  return read;
}

std::optional<SimulatedPair> ReadSimulator::next() {
  if (produced_ >= cfg_.pair_count) {
    return std::nullopt;
  }
  const RefMeta& meta = ref_.meta();
  const std::uint32_t L = cfg_.read_len;

  for (int attempt = 0; attempt < 1000; ++attempt) {
    const std::uint64_t pick = rng_.below(cumulative_.back());
    const auto slot = static_cast<std::size_t>(
        std::upper_bound(cumulative_.begin(), cumulative_.end(), pick) - cumulative_.begin());
    const std::size_t rec = usable_[slot];
    const std::uint64_t rec_len = meta.length(rec);

    const double drawn = std::round(rng_.normal(cfg_.insert_mean, cfg_.insert_sd));
    std::uint64_t insert = drawn < L ? L : static_cast<std::uint64_t>(drawn);
    insert = std::min(insert, rec_len);
    const std::uint64_t offset = rng_.below(rec_len - insert + 1);
    const bool frag_rev = rng_.below(2) == 1;
    const std::uint64_t gstart = meta.start(rec) + offset;
    if (ref_.sequence().has_n(gstart, insert)) {
      continue;
    }

    const std::string fragment = ref_.sequence().subsequence(gstart, insert).decode();
    const std::string rc = reverse_complement(fragment);
    SimulatedPair out;
    SimTruth& truth = out.truth;
    std::uint32_t consumed1 = 0;
    std::uint32_t consumed2 = 0;
    const std::string r1 = make_read(frag_rev ? rc : fragment, truth.edits1, consumed1);
    const std::string r2 = make_read(frag_rev ? fragment : rc, truth.edits2, consumed2);

    truth.seq1 = truth.seq2 = rec;
    truth.insert_size = insert;
    if (!frag_rev) {
      truth.strand1 = Strand::Fwd;
      truth.pos1 = offset;
      truth.strand2 = Strand::Rev;
      truth.pos2 = offset + insert - consumed2;
    } else {
      truth.strand1 = Strand::Rev;
      truth.pos1 = offset + insert - consumed1;
      truth.strand2 = Strand::Fwd;
      truth.pos2 = offset;
    }

    out.pair.id = "sim" + std::to_string(produced_ + 1);
    out.pair.read1 = PackedSequence::encode(r1);
    out.pair.read2 = PackedSequence::encode(r2);
    out.pair.qual1.assign(r1.size(), 'I');
    out.pair.qual2.assign(r2.size(), 'I');
    ++produced_;
    return out;
  }
  throw ReferenceTooShort();
}

std::vector<SimulatedPair> simulate(const Reference& ref, const SimConfig& cfg) {
  ReadSimulator sim(ref, cfg);
  std::vector<SimulatedPair> out;
  out.reserve(cfg.pair_count);
  while (auto p = sim.next()) {
    out.push_back(std::move(*p));
  }
  return out;
}

std::string apply_edits(std::string_view templ, const std::vector<ReadEdit>& edits, std::size_t read_len) {
  std::string read;
  std::size_t e = 0;
  for (std::size_t t = 0; t < templ.size() && read.size() < read_len; ++t) {
    if (e < edits.size() && edits[e].template_pos == t) {
      const ReadEdit& ed = edits[e++];
      switch (ed.op) {
      case EditOp::Substitution: read.push_back(ed.base); break;
      case EditOp::Insertion:
        read.push_back(ed.base);
        if (read.size() < read_len) {
          read.push_back(templ[t]);
        }
        break;
      case EditOp::Deletion: break;
      }
      continue;
    }
    read.push_back(templ[t]);
  }
  return read;
}

std::string format_edits(const std::vector<ReadEdit>& edits) {
  if (edits.empty()) {
    return ".";
  }
  std::string out;
  for (const auto& e : edits) {
    if (!out.empty()) {
      out += ',';
    }
    out += std::to_string(e.template_pos);
    out += ':';
    out += static_cast<char>(e.op);
    out += ':';
    out += e.base;
  }
  return out;
}

std::vector<ReadEdit> parse_edits(std::string_view text) {
  std::vector<ReadEdit> out;
  if (text == ".") {
    return out;
  }
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto c1 = item.find(':');
    if (c1 == std::string_view::npos || item.size() != c1 + 4 || item[c1 + 2] != ':') {
      throw Error("invalid edit list entry: " + std::string(item));
    }
    ReadEdit e{};
    e.template_pos = static_cast<std::uint32_t>(std::stoul(std::string(item.substr(0, c1))));
    const char op = item[c1 + 1];
    if (op != 'X' && op != 'I' && op != 'D') {
      throw Error("invalid edit op: " + std::string(item));
    }
    e.op = static_cast<EditOp>(op);
    e.base = item[c1 + 3];
    out.push_back(e);
    if (comma == std::string_view::npos) {
      break;
    }
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string truth_tsv_header() { return "#pair_id\tchrom1\tpos1\tstrand1\tchrom2\tpos2\tstrand2\tedits\n"; }

std::string truth_tsv_line(const std::string& pair_id, const SimTruth& t, const RefMeta& meta) {
  auto strand = [](Strand s) { return s == Strand::Fwd ? "+" : "-"; };
  std::string out = pair_id;
  out += '\t' + meta.name(t.seq1) + '\t' + std::to_string(t.pos1 + 1) + '\t' + strand(t.strand1);
  out += '\t' + meta.name(t.seq2) + '\t' + std::to_string(t.pos2 + 1) + '\t' + strand(t.strand2);
  out += '\t' + format_edits(t.edits1) + '|' + format_edits(t.edits2) + '\n';
  return out;
}

Reference synthetic_genome(const GenomeSpec& spec) {
  SimRng rng(spec.seed);
  const std::uint32_t records = std::max<std::uint32_t>(1, spec.records);
  std::string genome(spec.length, 'A');
  for (char& c : genome) {
    c = random_base(rng);
  }
  for (const RepeatFamily& fam : spec.repeats) {
    if (fam.unit_length == 0 || fam.unit_length > spec.length) {
      continue;
    }
    std::string unit(fam.unit_length, 'A');
    for (char& c : unit) {
      c = random_base(rng);
    }
    for (std::uint32_t k = 0; k < fam.copies; ++k) {
      const std::uint64_t at = rng.below(spec.length - fam.unit_length + 1);
      for (std::uint32_t i = 0; i < fam.unit_length; ++i) {
        char b = unit[i];
        if (fam.divergence > 0 && rng.uniform() < fam.divergence) {
          b = other_base(rng, b);
        }
        genome[at + i] = b;
      }
    }
  }
  Reference ref;
  const std::uint64_t per = spec.length / records;
  for (std::uint32_t r = 0; r < records; ++r) {
    const std::uint64_t begin = r * per;
    const std::uint64_t end = r + 1 == records ? spec.length : begin + per;
    ref.add("chr" + std::to_string(r + 1), PackedSequence::encode(std::string_view(genome).substr(begin, end - begin)));
  }
  return ref;
}

} // namespace genpair
