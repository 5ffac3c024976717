#include "genpair/sam.hpp"

#include <algorithm>

namespace genpair {

std::string sam_header(const RefMeta& meta, const std::string& command_line, const std::string& description) {
  std::string out = "@HD\tVN:1.6\tSO:unknown\n";
  for (std::size_t i = 0; i < meta.count(); ++i) {
    out += "@SQ\tSN:" + meta.name(i) + "\tLN:" + std::to_string(meta.length(i)) + "\n";
  }
  out += "@PG\tID:genpair\tPN:genpair\tVN:1.0.0";
  if (!description.empty()) {
    out += "\tDS:" + description;
  }
  if (!command_line.empty()) {
    out += "\tCL:" + command_line;
  }
  out += "\n";
  return out;
}

namespace {

void append_record(std::string& out, const std::string& id, unsigned flag, const RefMeta& meta, const Alignment& self,
                   const Alignment& mate, int mapq, std::int64_t tlen, const PackedSequence& read,
                   const std::string& qual, bool reverse, bool extended) {
  const auto local = meta.global_to_local(self.ref_start);
  const auto mate_local = meta.global_to_local(mate.ref_start);
  out += id;
  out += '\t' + std::to_string(flag);
  out += '\t' + meta.name(local.sequence);
  out += '\t' + std::to_string(local.offset + 1);
  out += '\t' + std::to_string(mapq);
  out += '\t' + self.cigar.to_string(extended);
  out += mate_local.sequence == local.sequence ? "\t=" : '\t' + meta.name(mate_local.sequence);
  out += '\t' + std::to_string(mate_local.offset + 1);
  out += '\t' + std::to_string(tlen);
  out += '\t';
  out += reverse ? read.reverse_complement().decode() : read.decode();
  out += '\t';
  if (qual.empty()) {
    out += '*';
  } else if (reverse) {
    out.append(qual.rbegin(), qual.rend());
  } else {
    out += qual;
  }
  out += "\tAS:i:" + std::to_string(self.score);
  out += "\tXG:A:";
  out += method_tag(self.method);
  out += '\n';
}

} // namespace

std::string sam_records(const ReadPair& pair, const PairMapping& m, const RefMeta& meta, bool extended_cigar) {
  std::string out;
  if (m.outcome == Outcome::FallbackFull || !m.a1 || !m.a2) {
    return out;
  }
  using namespace sam_flag;
  const bool rev1 = m.strand1 == Strand::Rev;
  const bool rev2 = m.strand2 == Strand::Rev;
  const unsigned base = kPaired | kProperPair;
  const unsigned flag1 = base | kFirst | (rev1 ? kReverse : 0u) | (rev2 ? kMateReverse : 0u);
  const unsigned flag2 = base | kSecond | (rev2 ? kReverse : 0u) | (rev1 ? kMateReverse : 0u);
  append_record(out, pair.id, flag1, meta, *m.a1, *m.a2, m.mapq, m.tlen, pair.read1, pair.qual1, rev1, extended_cigar);
  append_record(out, pair.id, flag2, meta, *m.a2, *m.a1, m.mapq, -m.tlen, pair.read2, pair.qual2, rev2, extended_cigar);
  return out;
}

} // namespace genpair
