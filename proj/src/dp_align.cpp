#include "genpair/dp_align.hpp"

#include "genpair/error.hpp"

#include <algorithm>
#include <limits>

namespace genpair {

namespace {
constexpr int kNeg = std::numeric_limits<int>::min() / 4;

enum class State { M, D, I };
} // namespace

Alignment DpAligner::run(const PackedSequence& read, const PackedSequence& window, const DpConfig& cfg,
                         bool glocal) {
  const std::size_t n = read.size();
  const std::size_t m = window.size();
  if (n == 0 || m == 0) {
    throw Error("cannot align empty sequences");
  }
  if (glocal && m < n) {
    throw Error("glocal alignment needs a window at least as long as the read");
  }
  const ScoringScheme& sc = cfg.scheme;
  const int open_ext = sc.gap_open + sc.gap_extend;
  const int ext = sc.gap_extend;

  // Diagonal band d = j - i in [lo, hi].
  const auto diff = static_cast<long>(m) - static_cast<long>(n);
  const long w = cfg.band_width;
  long lo = -static_cast<long>(n);
  long hi = static_cast<long>(m);
  if (w > 0) {
    lo = glocal ? -w : std::min(0L, diff) - w;
    hi = glocal ? diff + w : std::max(0L, diff) + w;
  }
  const bool band_clips = lo > -static_cast<long>(n) || hi < static_cast<long>(m);

  const std::size_t cols = m + 1;
  const std::size_t cells = (n + 1) * cols;
  match_.assign(cells, kNeg);
  del_.assign(cells, kNeg);
  ins_.assign(cells, kNeg);
  auto at = [cols](std::size_t i, std::size_t j) { return i * cols + j; };
  auto h = [&](std::size_t k) { return std::max({match_[k], del_[k], ins_[k]}); };
  auto in_band = [&](std::size_t i, std::size_t j) {
    const long d = static_cast<long>(j) - static_cast<long>(i);
    return d >= lo && d <= hi;
  };

  for (std::size_t j = 0; j <= m; ++j) {
    if (!in_band(0, j)) {
      continue;
    }
    if (glocal || j == 0) {
      match_[at(0, j)] = 0;
    } else {
      del_[at(0, j)] = std::max(h(at(0, j - 1)) - open_ext, del_[at(0, j - 1)] - ext);
    }
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const long jlo = std::max(0L, static_cast<long>(i) + lo);
    const long jhi = std::min(static_cast<long>(m), static_cast<long>(i) + hi);
    for (long jj = jlo; jj <= jhi; ++jj) {
      const auto j = static_cast<std::size_t>(jj);
      const std::size_t k = at(i, j);
      const int up = h(at(i - 1, j));
      ins_[k] = std::max(up == kNeg ? kNeg : up - open_ext, ins_[at(i - 1, j)] == kNeg ? kNeg : ins_[at(i - 1, j)] - ext);
      if (j == 0) {
        continue;
      }
      const int diag = h(at(i - 1, j - 1));
      if (diag != kNeg) {
        match_[k] = diag + (bases_match(read, i - 1, window, j - 1) ? sc.match : -sc.mismatch);
      }
      const int left = h(at(i, j - 1));
      del_[k] = std::max(left == kNeg ? kNeg : left - open_ext, del_[at(i, j - 1)] == kNeg ? kNeg : del_[at(i, j - 1)] - ext);
    }
  }

  // Pick the end cell.
  std::size_t end_j = m;
  if (glocal) {
    int best = kNeg;
    for (std::size_t j = 0; j <= m; ++j) {
      if (in_band(n, j) && h(at(n, j)) > best) {
        best = h(at(n, j));
        end_j = j;
      }
    }
  }
  const int score = h(at(n, end_j));
  if (score == kNeg) {
    throw BandExceeded();
  }
  if (w > 0 && band_clips) {
    // Leaving the band takes at least w+1 gap bases; no such path can reach this bound.
    const int max_matches = static_cast<int>(glocal ? n : std::min(n, m));
    const int outside_bound = max_matches * sc.match - sc.gap_cost(static_cast<int>(w) + 1);
    if (score <= outside_bound) {
      throw BandExceeded();
    }
  }

  auto pick = [&](std::size_t k) {
    const int best = h(k);
    if (match_[k] == best) {
      return State::M;
    }
    if (del_[k] == best) {
      return State::D;
    }
    return State::I;
  };

  Alignment aln;
  aln.score = score;
  aln.method = AlignMethod::DP;
  std::size_t i = n;
  std::size_t j = end_j;
  State state = pick(at(i, j));
  while (i > 0 || (!glocal && j > 0)) {
    const std::size_t k = at(i, j);
    switch (state) {
    case State::M:
      aln.cigar.push(bases_match(read, i - 1, window, j - 1) ? CigarOpKind::Match : CigarOpKind::Mismatch);
      --i;
      --j;
      if (i > 0 || (!glocal && j > 0)) {
        state = pick(at(i, j));
      }
      break;
    case State::D: {
      aln.cigar.push(CigarOpKind::Deletion);
      const std::size_t prev = at(i, j - 1);
      const bool opened = h(prev) != kNeg && del_[k] == h(prev) - open_ext;
      --j;
      state = opened ? pick(prev) : State::D;
      break;
    }
    case State::I: {
      aln.cigar.push(CigarOpKind::Insertion);
      const std::size_t prev = at(i - 1, j);
      const bool opened = h(prev) != kNeg && ins_[k] == h(prev) - open_ext;
      --i;
      state = opened ? pick(prev) : State::I;
      break;
    }
    }
  }
  aln.cigar.reverse();
  aln.ref_start = j;
  return aln;
}

Alignment DpAligner::global(const PackedSequence& read, const PackedSequence& window, const DpConfig& cfg) {
  return run(read, window, cfg, false);
}

Alignment DpAligner::glocal(const PackedSequence& read, const PackedSequence& window, const DpConfig& cfg) {
  return run(read, window, cfg, true);
}

Alignment DpAligner::glocal_auto(const PackedSequence& read, const PackedSequence& window, const DpConfig& cfg) {
  try {
    return glocal(read, window, cfg);
  } catch (const BandExceeded&) {
    DpConfig unbanded = cfg;
    unbanded.band_width = 0;
    return glocal(read, window, unbanded);
  }
}

Alignment align_global(const PackedSequence& read, const PackedSequence& window, const DpConfig& cfg) {
  DpAligner a;
  return a.global(read, window, cfg);
}

Alignment align_glocal(const PackedSequence& read, const PackedSequence& window, const DpConfig& cfg) {
  DpAligner a;
  return a.glocal(read, window, cfg);
}

} // namespace genpair
