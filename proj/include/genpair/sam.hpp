#pragma once

#include "genpair/io.hpp"
#include "genpair/pipeline.hpp"
#include "genpair/reference.hpp"

#include <ostream>
#include <string>

namespace genpair {

namespace sam_flag {
inline constexpr unsigned kPaired = 0x1;
inline constexpr unsigned kProperPair = 0x2;
inline constexpr unsigned kReverse = 0x10;
inline constexpr unsigned kMateReverse = 0x20;
inline constexpr unsigned kFirst = 0x40;
inline constexpr unsigned kSecond = 0x80;
} // namespace sam_flag

std::string sam_header(const RefMeta& meta, const std::string& command_line, const std::string& description);

/// Two SAM lines (mate 1 then mate 2) for a mapped pair; empty for FallbackFull.
std::string sam_records(const ReadPair& pair, const PairMapping& m, const RefMeta& meta, bool extended_cigar);

} // namespace genpair
