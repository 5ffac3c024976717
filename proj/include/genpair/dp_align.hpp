#pragma once

#include "genpair/alignment.hpp"
#include "genpair/packed_sequence.hpp"

#include <cstdint>
#include <vector>

namespace genpair {

struct DpConfig {
  ScoringScheme scheme;
  int band_width = 16; // 0 = unbanded
  int pad = 8;         // reference bases added on each side of a candidate window
};

/**
 * Gotoh affine-gap aligner with traceback.
 *
 * Holds its score matrices between calls, so one instance per thread avoids reallocating.
 * Traceback prefers a diagonal step over a deletion over an insertion at every tie.
 */
class DpAligner {
public:
  /// End-to-end on both sequences. Throws BandExceeded when banded and the band cannot be
  /// shown to contain the optimum.
  Alignment global(const PackedSequence& read, const PackedSequence& window, const DpConfig& cfg);

  /// Read end-to-end, window ends free. ref_start is the first consumed window base.
  Alignment glocal(const PackedSequence& read, const PackedSequence& window, const DpConfig& cfg);

  /// glocal, retried unbanded if the banded pass raises BandExceeded.
  Alignment glocal_auto(const PackedSequence& read, const PackedSequence& window, const DpConfig& cfg);

private:
  Alignment run(const PackedSequence& read, const PackedSequence& window, const DpConfig& cfg, bool glocal);

  std::vector<int> match_;
  std::vector<int> del_;
  std::vector<int> ins_;
};

Alignment align_global(const PackedSequence& read, const PackedSequence& window, const DpConfig& cfg = {});
Alignment align_glocal(const PackedSequence& read, const PackedSequence& window, const DpConfig& cfg = {});

} // namespace genpair
