#include "genpair/light_align.hpp"

#include "genpair/error.hpp"

#include <algorithm>
#include <array>
#include <bit>

namespace genpair {

namespace {

/// Squeezes the low bit of each 2-bit lane into the low 32 bits.
constexpr std::uint64_t compress_lanes(std::uint64_t x) noexcept {
  x &= 0x5555555555555555ull;
  x = (x | (x >> 1)) & 0x3333333333333333ull;
  x = (x | (x >> 2)) & 0x0F0F0F0F0F0F0F0Full;
  x = (x | (x >> 4)) & 0x00FF00FF00FF00FFull;
  x = (x | (x >> 8)) & 0x0000FFFF0000FFFFull;
  x = (x | (x >> 16)) & 0x00000000FFFFFFFFull;
  return x;
}

constexpr std::uint64_t low_bits(std::size_t n) noexcept {
  return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

} // namespace

std::size_t HammingMask::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) {
    n += static_cast<std::size_t>(std::popcount(w));
  }
  return n;
}

std::size_t HammingMask::leading_ones() const noexcept {
  std::size_t n = 0;
  for (auto w : words_) {
    const auto ones = static_cast<std::size_t>(std::countr_one(w));
    n += ones;
    if (ones < 64) {
      break;
    }
  }
  return std::min(n, length_);
}

std::size_t HammingMask::trailing_ones() const noexcept {
  if (length_ == 0) {
    return 0;
  }
  std::size_t n = 0;
  const std::size_t last = (length_ - 1) / 64;
  const std::size_t used = length_ - last * 64;
  for (std::size_t w = last + 1; w-- > 0;) {
    std::uint64_t bits = words_[w];
    std::size_t width = 64;
    if (w == last) {
      // Left-justify the used bits so countl_one sees the top of the mask.
      bits <<= (64 - used);
      width = used;
    }
    const auto ones = std::min<std::size_t>(static_cast<std::size_t>(std::countl_one(bits)), width);
    n += ones;
    if (ones < width) {
      break;
    }
  }
  return n;
}

HammingMask hamming_mask(const PackedSequence& read, const PackedSequence& window, int shift) {
  const std::size_t len = read.size();
  std::vector<std::uint64_t> words((len + 63) / 64, 0);
  const auto wlen = static_cast<std::int64_t>(window.size());

  for (std::size_t block = 0; block < len; block += 32) {
    const auto wpos = static_cast<std::int64_t>(block) + shift;
    std::uint64_t wcodes = 0;
    std::uint64_t wn = 0;
    std::uint64_t valid = low_bits(std::min<std::size_t>(32, len - block));
    if (wpos >= 0) {
      wcodes = window.code_word(static_cast<std::size_t>(wpos));
      wn = window.n_word(static_cast<std::size_t>(wpos));
    } else if (wpos > -32) {
      const auto lead = static_cast<unsigned>(-wpos);
      wcodes = window.code_word(0) << (2 * lead);
      wn = window.n_word(0) << lead;
      valid &= ~low_bits(lead);
    } else {
      valid = 0;
    }
    // Clear bases whose window position lies past the end.
    const std::int64_t in_window = wlen - wpos;
    if (in_window <= 0) {
      valid = 0;
    } else if (in_window < 32) {
      valid &= low_bits(static_cast<std::size_t>(in_window));
    }

    const std::uint64_t same = ~(read.code_word(block) ^ wcodes);
    std::uint64_t eq = compress_lanes(same & (same >> 1));
    eq &= ~(read.n_word(block) & 0xFFFFFFFFull);
    eq &= ~(wn & 0xFFFFFFFFull);
    eq &= valid;
    words[block / 64] |= eq << (block % 64);
  }
  return HammingMask(len, std::move(words));
}

int LightAligner::hypothesis_score(EditKind kind, std::uint32_t count, std::size_t read_len) const noexcept {
  const int L = static_cast<int>(read_len);
  const int k = static_cast<int>(count);
  switch (kind) {
  case EditKind::Exact: return L * scheme_.match;
  case EditKind::Mismatches: return (L - k) * scheme_.match - k * scheme_.mismatch;
  case EditKind::Deletion: return L * scheme_.match - scheme_.gap_cost(k);
  case EditKind::Insertion: return (L - k) * scheme_.match - scheme_.gap_cost(k);
  }
  return 0;
}

std::optional<LightResult> LightAligner::classify(const PackedSequence& read,
                                                  const PackedSequence& window) const {
  constexpr int kReach = kPad + static_cast<int>(kMaxInsertion); // widest shift an insertion can use
  constexpr int kShifts = 2 * kReach + 1;
  const std::size_t L = read.size();
  if (window.size() != L + 2 * kPad) {
    throw WindowTooShort(L + 2 * kPad, window.size());
  }
  if (L == 0) {
    return std::nullopt;
  }

  std::array<HammingMask, kShifts> masks;
  std::array<std::size_t, kShifts> pre{};
  std::array<std::size_t, kShifts> suf{};
  for (int s = -kReach; s <= kReach; ++s) {
    auto& m = masks[static_cast<std::size_t>(s + kReach)];
    m = hamming_mask(read, window, s + kPad);
    pre[static_cast<std::size_t>(s + kReach)] = m.leading_ones();
    suf[static_cast<std::size_t>(s + kReach)] = m.trailing_ones();
  }
  auto idx = [](int s) { return static_cast<std::size_t>(s + kReach); };

  // Shift search order: nominal placement first, then outward, negative before positive.
  auto shifts_in = [](int lo, int hi) {
    std::vector<int> order;
    for (int d = 0; d <= 2 * kReach; ++d) {
      if (-d >= lo && -d <= hi) {
        order.push_back(-d);
      }
      if (d != 0 && d >= lo && d <= hi) {
        order.push_back(d);
      }
    }
    return order;
  };

  auto make = [&](EditHypothesis h, Cigar cigar, int start_shift, AlignMethod method) {
    LightResult r;
    r.hypothesis = h;
    r.alignment.cigar = std::move(cigar);
    r.alignment.score = hypothesis_score(h.kind, h.count, L);
    r.alignment.ref_start = static_cast<std::uint64_t>(kPad + start_shift);
    r.alignment.method = method;
    return r;
  };

  auto try_mismatches = [&](std::uint32_t c) -> std::optional<LightResult> {
    for (int a : shifts_in(-kPad, kPad)) {
      const auto& m = masks[idx(a)];
      if (m.count() + c != L) {
        continue;
      }
      Cigar cigar;
      std::uint32_t first = 0;
      bool seen = false;
      for (std::size_t i = 0; i < L; ++i) {
        if (m.test(i)) {
          cigar.push(CigarOpKind::Match);
        } else {
          cigar.push(CigarOpKind::Mismatch);
          if (!seen) {
            first = static_cast<std::uint32_t>(i);
            seen = true;
          }
        }
      }
      const auto kind = c == 0 ? EditKind::Exact : EditKind::Mismatches;
      return make({kind, c, first}, std::move(cigar), a, c == 0 ? AlignMethod::Exact : AlignMethod::Light);
    }
    return std::nullopt;
  };

  auto try_deletion = [&](std::uint32_t k) -> std::optional<LightResult> {
    const int ki = static_cast<int>(k);
    for (int a : shifts_in(-kPad, kPad - ki)) {
      const std::size_t p_max = std::min(pre[idx(a)], L - 1);
      const std::size_t s_run = suf[idx(a + ki)];
      const std::size_t p_min = std::max<std::size_t>(1, L - std::min(s_run, L));
      if (p_min > p_max) {
        continue;
      }
      Cigar cigar;
      cigar.push(CigarOpKind::Match, static_cast<std::uint32_t>(p_min));
      cigar.push(CigarOpKind::Deletion, k);
      cigar.push(CigarOpKind::Match, static_cast<std::uint32_t>(L - p_min));
      return make({EditKind::Deletion, k, static_cast<std::uint32_t>(p_min)}, std::move(cigar), a, AlignMethod::Light);
    }
    return std::nullopt;
  };

  auto try_insertion = [&](std::uint32_t k) -> std::optional<LightResult> {
    if (L <= k) {
      return std::nullopt;
    }
    const int ki = static_cast<int>(k);
    const std::size_t body = L - k; // read bases outside the inserted run
    for (int a : shifts_in(-kPad, kPad + ki)) {
      const int b = a - ki;
      const std::size_t p_max = std::min(pre[idx(a)], body);
      const std::size_t p_min = body - std::min(suf[idx(b)], body);
      if (p_min > p_max) {
        continue;
      }
      Cigar cigar;
      cigar.push(CigarOpKind::Match, static_cast<std::uint32_t>(p_min));
      cigar.push(CigarOpKind::Insertion, k);
      cigar.push(CigarOpKind::Match, static_cast<std::uint32_t>(body - p_min));
      // A leading insertion consumes no reference before the suffix, which sits at shift b.
      const int start = p_min == 0 ? b + ki : a;
      return make({EditKind::Insertion, k, static_cast<std::uint32_t>(p_min)}, std::move(cigar), start,
                  AlignMethod::Light);
    }
    return std::nullopt;
  };

  struct Step {
    EditKind kind;
    std::uint32_t count;
  };
  // Descending score; equal scores ordered mismatch, deletion, insertion.
  std::array<Step, 10> order{{
      {EditKind::Exact, 0},
      {EditKind::Mismatches, 1},
      {EditKind::Deletion, 1},
      {EditKind::Deletion, 2},
      {EditKind::Insertion, 1},
      {EditKind::Deletion, 3},
      {EditKind::Mismatches, 2},
      {EditKind::Deletion, 4},
      {EditKind::Insertion, 2},
      {EditKind::Deletion, 5},
  }};
  std::stable_sort(order.begin(), order.end(), [&](const Step& x, const Step& y) {
    return hypothesis_score(x.kind, x.count, L) > hypothesis_score(y.kind, y.count, L);
  });

  for (const Step& step : order) {
    std::optional<LightResult> r;
    switch (step.kind) {
    case EditKind::Exact: r = try_mismatches(0); break;
    case EditKind::Mismatches: r = try_mismatches(step.count); break;
    case EditKind::Deletion: r = try_deletion(step.count); break;
    case EditKind::Insertion: r = try_insertion(step.count); break;
    }
    if (r) {
      return r;
    }
  }
  return std::nullopt;
}

std::optional<LightResult> classify(const PackedSequence& read, const PackedSequence& window,
                                    const ScoringScheme& scheme) {
  return LightAligner(scheme).classify(read, window);
}

} // namespace genpair
