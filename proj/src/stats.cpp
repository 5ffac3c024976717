#include "genpair/stats.hpp"

#include "genpair/pipeline.hpp"
#include "genpair/seeding.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <thread>

namespace genpair {

const char* edit_class_name(EditClass c) noexcept {
  switch (c) {
  case EditClass::Exact: return "exact";
  case EditClass::Mismatches: return "mismatches";
  case EditClass::Insertion: return "insertion";
  case EditClass::Deletion: return "deletion";
  case EditClass::Other: return "other";
  }
  return "other";
}

EditClass classify_cigar(const Cigar& cigar) noexcept {
  std::uint32_t mismatches = 0;
  std::uint32_t ins_runs = 0;
  std::uint32_t ins_len = 0;
  std::uint32_t del_runs = 0;
  std::uint32_t del_len = 0;
  for (const auto& op : cigar.ops()) {
    switch (op.op) {
    case CigarOpKind::Match: break;
    case CigarOpKind::Mismatch: mismatches += op.length; break;
    case CigarOpKind::Insertion:
      ++ins_runs;
      ins_len += op.length;
      break;
    case CigarOpKind::Deletion:
      ++del_runs;
      del_len += op.length;
      break;
    }
  }
  const int kinds = (mismatches > 0) + (ins_runs > 0) + (del_runs > 0);
  if (kinds == 0) {
    return EditClass::Exact;
  }
  if (kinds > 1) {
    return EditClass::Other;
  }
  if (mismatches > 0) {
    return mismatches <= 2 ? EditClass::Mismatches : EditClass::Other;
  }
  if (ins_runs > 0) {
    return ins_runs == 1 && ins_len <= 2 ? EditClass::Insertion : EditClass::Other;
  }
  return del_runs == 1 && del_len <= 5 ? EditClass::Deletion : EditClass::Other;
}

void ObservationReport::merge(const ObservationReport& o) {
  pairs += o.pairs;
  seed_match_pairs += o.seed_match_pairs;
  seeds_queried += o.seeds_queried;
  seeds_with_hits += o.seeds_with_hits;
  seed_locations += o.seed_locations;
  mapped_pairs += o.mapped_pairs;
  single_type_pairs += o.single_type_pairs;
  for (std::size_t i = 0; i < mate_classes.size(); ++i) {
    mate_classes[i] += o.mate_classes[i];
  }
  for (const auto& [score, n] : o.min_score_counts) {
    min_score_counts[score] += n;
  }
}

namespace {

double ratio(std::uint64_t num, std::uint64_t den) noexcept {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

double ObservationReport::seed_match_fraction() const noexcept { return ratio(seed_match_pairs, pairs); }
double ObservationReport::mean_locations_per_hit_seed() const noexcept {
  return ratio(seed_locations, seeds_with_hits);
}
double ObservationReport::mean_locations_per_seed() const noexcept { return ratio(seed_locations, seeds_queried); }
double ObservationReport::single_type_fraction() const noexcept { return ratio(single_type_pairs, pairs); }
double ObservationReport::single_type_fraction_of_mapped() const noexcept {
  return ratio(single_type_pairs, mapped_pairs);
}

std::vector<std::pair<int, double>> ObservationReport::min_score_cdf() const {
  std::vector<std::pair<int, double>> cdf;
  std::uint64_t running = 0;
  for (const auto& [score, n] : min_score_counts) {
    running += n;
    cdf.emplace_back(score, ratio(running, mapped_pairs));
  }
  return cdf;
}

std::string ObservationReport::to_json() const {
  nlohmann::ordered_json j;
  j["pairs"] = pairs;
  j["seed_match"] = {{"pairs", seed_match_pairs}, {"fraction", seed_match_fraction()}};
  j["seed_locations"] = {{"seeds_queried", seeds_queried},
                         {"seeds_with_hits", seeds_with_hits},
                         {"total_locations", seed_locations},
                         {"mean_per_hit_seed", mean_locations_per_hit_seed()},
                         {"mean_per_seed", mean_locations_per_seed()}};
  nlohmann::ordered_json classes;
  for (std::size_t i = 0; i < mate_classes.size(); ++i) {
    classes[edit_class_name(static_cast<EditClass>(i))] = mate_classes[i];
  }
  j["edit_classes"] = {{"mapped_pairs", mapped_pairs},
                       {"single_type_pairs", single_type_pairs},
                       {"single_type_fraction", single_type_fraction()},
                       {"single_type_fraction_of_mapped", single_type_fraction_of_mapped()},
                       {"mate_classes", classes}};
  nlohmann::ordered_json cdf = nlohmann::ordered_json::array();
  for (const auto& [score, f] : min_score_cdf()) {
    cdf.push_back({{"score", score}, {"cumulative_fraction", f}});
  }
  j["min_score_cdf"] = cdf;
  return j.dump(2) + "\n";
}

void ObservationReport::write_cdf_csv(std::ostream& out) const {
  out << "min_score,count,cumulative_fraction\n";
  std::uint64_t running = 0;
  for (const auto& [score, n] : min_score_counts) {
    running += n;
    out << score << ',' << n << ',' << ratio(running, mapped_pairs) << '\n';
  }
}

namespace {

void observe_seeds(const ReadPair& pair, const SeedMap& map, ObservationReport& rep) {
  for (const auto& seed : extract_read_seeds(pair, map.config())) {
    const auto hits = map.query(seed.hash);
    ++rep.seeds_queried;
    if (!hits.empty()) {
      ++rep.seeds_with_hits;
      rep.seed_locations += hits.size();
    }
  }
}

void observe_pair(const ReadPair& pair, const PairMapper& mapper, DpAligner& scratch, ObservationReport& rep) {
  ++rep.pairs;
  const SeedMap& map = mapper.seed_map();
  observe_seeds(pair, map, rep);
  const auto c1 = candidates_for_read(pair.read1, Mate::R1, map);
  const auto c2 = candidates_for_read(pair.read2, Mate::R2, map);
  if (!c1.empty() && !c2.empty() &&
      !pair_filter(c1, c2, pair.read1.size(), pair.read2.size(), mapper.config()).empty()) {
    ++rep.seed_match_pairs;
  }

  const PairMapping m = mapper.map(pair, scratch);
  if (m.outcome == Outcome::FallbackFull) {
    return;
  }
  auto realign = [&](const PackedSequence& read, Strand strand, const Alignment& placed) {
    const PackedSequence oriented = strand == Strand::Fwd ? read : read.reverse_complement();
    return mapper.dp_at(oriented, placed.ref_start, scratch);
  };
  const auto d1 = realign(pair.read1, m.strand1, *m.a1);
  const auto d2 = realign(pair.read2, m.strand2, *m.a2);
  if (!d1 || !d2) {
    return;
  }
  ++rep.mapped_pairs;
  const EditClass k1 = classify_cigar(d1->cigar);
  const EditClass k2 = classify_cigar(d2->cigar);
  ++rep.mate_classes[static_cast<std::size_t>(k1)];
  ++rep.mate_classes[static_cast<std::size_t>(k2)];
  if (k1 != EditClass::Other && k2 != EditClass::Other) {
    ++rep.single_type_pairs;
  }
  ++rep.min_score_counts[std::min(d1->score, d2->score)];
}

} // namespace

ObservationReport observation_report(PairSource& pairs, const SeedMap& map, const Reference& ref,
                                     const ObservationOptions& opts) {
  const PairMapper mapper(map, ref, opts.map, opts.scheme, opts.dp);
  const unsigned threads = std::max(1u, opts.threads);
  const std::size_t batch_size = std::max<std::size_t>(1, opts.batch_size);

  ObservationReport total;
  std::vector<ObservationReport> partial(threads);
  std::vector<DpAligner> scratch(threads);
  std::vector<ReadPair> batch;
  while (true) {
    batch.clear();
    while (batch.size() < batch_size * threads) {
      auto p = pairs.next();
      if (!p) {
        break;
      }
      batch.push_back(std::move(*p));
    }
    if (batch.empty()) {
      break;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&](unsigned t) {
      for (std::size_t i = next++; i < batch.size(); i = next++) {
        observe_pair(batch[i], mapper, scratch[t], partial[t]);
      }
    };
    if (threads == 1) {
      worker(0);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back(worker, t);
      }
    }
  }
  for (const auto& p : partial) {
    total.merge(p);
  }
  return total;
}

} // namespace genpair
