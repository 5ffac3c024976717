#include "genpair/alignment.hpp"

#include "genpair/error.hpp"

#include <algorithm>
#include <cctype>

namespace genpair {

void Cigar::push(CigarOpKind op, std::uint32_t length) {
  if (length == 0) {
    return;
  }
  if (!ops_.empty() && ops_.back().op == op) {
    ops_.back().length += length;
  } else {
    ops_.push_back({length, op});
  }
}

void Cigar::reverse() { std::reverse(ops_.begin(), ops_.end()); }

std::size_t Cigar::read_length() const noexcept {
  std::size_t n = 0;
  for (const auto& o : ops_) {
    if (o.op != CigarOpKind::Deletion) {
      n += o.length;
    }
  }
  return n;
}

std::size_t Cigar::ref_length() const noexcept {
  std::size_t n = 0;
  for (const auto& o : ops_) {
    if (o.op != CigarOpKind::Insertion) {
      n += o.length;
    }
  }
  return n;
}

std::string Cigar::to_string(bool extended) const {
  std::string out;
  if (extended) {
    for (const auto& o : ops_) {
      out += std::to_string(o.length);
      out += static_cast<char>(o.op);
    }
    return out;
  }
  std::uint32_t pending_m = 0;
  for (const auto& o : ops_) {
    if (o.op == CigarOpKind::Match || o.op == CigarOpKind::Mismatch) {
      pending_m += o.length;
      continue;
    }
    if (pending_m != 0) {
      out += std::to_string(pending_m) + "M";
      pending_m = 0;
    }
    out += std::to_string(o.length);
    out += static_cast<char>(o.op);
  }
  if (pending_m != 0) {
    out += std::to_string(pending_m) + "M";
  }
  return out;
}

Cigar Cigar::parse(std::string_view text) {
  Cigar c;
  std::uint32_t n = 0;
  bool have_digits = false;
  for (char ch : text) {
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      n = n * 10 + static_cast<std::uint32_t>(ch - '0');
      have_digits = true;
      continue;
    }
    if (!have_digits || (ch != '=' && ch != 'X' && ch != 'I' && ch != 'D')) {
      throw Error("invalid CIGAR: " + std::string(text));
    }
    c.push(static_cast<CigarOpKind>(ch), n);
    n = 0;
    have_digits = false;
  }
  if (have_digits) {
    throw Error("invalid CIGAR: " + std::string(text));
  }
  return c;
}

int score_cigar(const Cigar& cigar, const ScoringScheme& scheme) noexcept {
  int score = 0;
  for (const auto& o : cigar.ops()) {
    const int len = static_cast<int>(o.length);
    switch (o.op) {
    case CigarOpKind::Match: score += len * scheme.match; break;
    case CigarOpKind::Mismatch: score -= len * scheme.mismatch; break;
    case CigarOpKind::Insertion:
    case CigarOpKind::Deletion: score -= scheme.gap_cost(len); break;
    }
  }
  return score;
}

bool cigar_reconstructs(const Cigar& cigar, const PackedSequence& read, const PackedSequence& window,
                        std::uint64_t ref_start) noexcept {
  if (cigar.read_length() != read.size() || ref_start + cigar.ref_length() > window.size()) {
    return false;
  }
  std::size_t i = 0;
  std::size_t j = ref_start;
  for (const auto& o : cigar.ops()) {
    for (std::uint32_t k = 0; k < o.length; ++k) {
      switch (o.op) {
      case CigarOpKind::Match:
        if (!bases_match(read, i, window, j)) {
          return false;
        }
        ++i;
        ++j;
        break;
      case CigarOpKind::Mismatch:
        if (bases_match(read, i, window, j)) {
          return false;
        }
        ++i;
        ++j;
        break;
      case CigarOpKind::Insertion: ++i; break;
      case CigarOpKind::Deletion: ++j; break;
      }
    }
  }
  return true;
}

} // namespace genpair
