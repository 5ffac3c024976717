// genpair command-line front end: index, map, simulate, stats.

#include "genpair/error.hpp"
#include "genpair/io.hpp"
#include "genpair/pipeline.hpp"
#include "genpair/seed_map.hpp"
#include "genpair/simulate.hpp"
#include "genpair/stats.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace genpair;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

/// Thrown for problems with how the tool was invoked that CLI11 cannot see.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Output files created by the current command; removed unless the command succeeds.
class OutputGuard {
public:
  void add(const fs::path& p) { paths_.push_back(p); }
  void commit() { paths_.clear(); }
  ~OutputGuard() {
    for (const auto& p : paths_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }

private:
  std::vector<fs::path> paths_;
};

/// Runs a config validator, reporting failures as usage errors.
template <class Config>
void validate_flags(const Config& cfg) {
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw UsageError(e.what());
  }
}

fs::path reference_sidecar(const fs::path& index) {
  fs::path p = index;
  p += ".ref";
  return p;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open output file: " + path.string());
  }
  return out;
}

// ---- index ----

struct IndexBuildArgs {
  std::string reference;
  std::string output;
  std::uint32_t seed_len = 50;
  std::uint32_t hash_bits = 28;
  std::uint32_t filter_threshold = SeedMap::kDefaultFilterThreshold;
};

void index_build(const IndexBuildArgs& a) {
  SeedConfig cfg;
  cfg.seed_len = a.seed_len;
  cfg.hash_bits = a.hash_bits;
  validate_flags(cfg);

  OutputGuard guard;
  const Reference ref = read_fasta(a.reference);
  const SeedMap map = SeedMap::build(ref, cfg, a.filter_threshold);
  guard.add(a.output);
  map.save(a.output);
  guard.add(reference_sidecar(a.output));
  ref.save(reference_sidecar(a.output));
  guard.commit();

  const IndexStats st = index_stats(map);
  std::cerr << "indexed " << ref.count() << " sequences, " << ref.total_length() << " bases; "
            << st.total_locations << " locations in " << st.buckets_nonempty << " buckets";
  if (st.filtered_bucket_count) {
    std::cerr << "; " << *st.filtered_bucket_count << " buckets over the filter threshold";
  }
  std::cerr << '\n';
}

void index_inspect(const std::string& path) {
  const SeedMap map = SeedMap::load(path);
  const SeedConfig& cfg = map.config();
  const RefMeta& meta = map.ref_meta();
  std::cout << "format_version\t" << SeedMap::kFormatVersion << '\n'
            << "seed_len\t" << cfg.seed_len << '\n'
            << "hash_bits\t" << cfg.hash_bits << '\n'
            << "hash_seed\t" << cfg.hash_seed << '\n'
            << "filter_threshold\t" << map.filter_threshold() << '\n'
            << "sequences\t" << meta.count() << '\n'
            << "total_length\t" << meta.total_length() << '\n';
  for (std::size_t i = 0; i < meta.count(); ++i) {
    std::cout << "sequence\t" << meta.name(i) << '\t' << meta.length(i) << '\n';
  }
  const IndexStats st = index_stats(map);
  std::cout << "buckets_nonempty\t" << st.buckets_nonempty << '\n'
            << "total_locations\t" << st.total_locations << '\n'
            << "mean_locations_per_nonempty_bucket\t" << st.mean_locations_per_nonempty_bucket << '\n'
            << "filtered_bucket_count\t"
            << (st.filtered_bucket_count ? std::to_string(*st.filtered_bucket_count) : "n/a") << '\n';
  for (std::size_t k = 0; k < st.histogram.size(); ++k) {
    if (st.histogram[k] != 0) {
      std::cout << "histogram\t" << (std::uint64_t{1} << k) << '-' << ((std::uint64_t{2} << k) - 1) << '\t'
                << st.histogram[k] << '\n';
    }
  }
}

// ---- shared by map and stats ----

struct IndexArgs {
  std::string index;
  std::string reference; // optional FASTA overriding the index sidecar
  std::uint32_t seed_len = 0;  // 0: take from index
  std::uint32_t hash_bits = 0; // 0: take from index
};

struct LoadedIndex {
  SeedMap map;
  Reference ref;
};

LoadedIndex load_index(const IndexArgs& a) {
  LoadedIndex out{SeedMap::load(a.index), {}};
  const SeedConfig& cfg = out.map.config();
  if (a.seed_len != 0 && a.seed_len != cfg.seed_len) {
    throw ConfigError("index was built with seed length " + std::to_string(cfg.seed_len) + ", not " +
                      std::to_string(a.seed_len));
  }
  if (a.hash_bits != 0 && a.hash_bits != cfg.hash_bits) {
    throw ConfigError("index was built with " + std::to_string(cfg.hash_bits) + " hash bits, not " +
                      std::to_string(a.hash_bits));
  }
  out.ref = a.reference.empty() ? Reference::load(reference_sidecar(a.index)) : read_fasta(a.reference);
  return out;
}

void add_index_options(CLI::App* cmd, IndexArgs& a) {
  cmd->add_option("-x,--index", a.index, "Index file from `index build`")->required();
  cmd->add_option("-r,--reference", a.reference, "Reference FASTA (default: the index's .ref sidecar)");
  cmd->add_option("--seed-len", a.seed_len, "Expected seed length; must match the index")
      ->envname("GENPAIR_SEED_LEN");
  cmd->add_option("--hash-bits", a.hash_bits, "Expected hash bits; must match the index")
      ->envname("GENPAIR_HASH_BITS");
}

// ---- map ----

struct MapArgs {
  IndexArgs index;
  std::string read1;
  std::string read2;
  std::string output = "-";
  std::uint64_t delta = 500;
  std::size_t max_candidates = 16;
  unsigned threads = 1;
  std::string residual_prefix;
  std::string cigar = "eq";
};

void map_reads(const MapArgs& a) {
  MapConfig mcfg;
  mcfg.delta = a.delta;
  mcfg.max_pair_candidates = a.max_candidates;
  validate_flags(mcfg);
  if (a.threads == 0) {
    throw UsageError("--threads must be at least 1");
  }

  const LoadedIndex idx = load_index(a.index);
  const PairMapper mapper(idx.map, idx.ref, mcfg);
  FastqPairFiles pairs(a.read1, a.read2);

  RunOptions opts;
  opts.threads = a.threads;
  opts.extended_cigar = a.cigar == "eq";
  const SeedConfig& scfg = idx.map.config();
  std::ostringstream desc;
  desc << "seed_len=" << scfg.seed_len << " hash_bits=" << scfg.hash_bits
       << " filter_threshold=" << idx.map.filter_threshold() << " delta=" << mcfg.delta
       << " max_candidates=" << mcfg.max_pair_candidates << " cigar=" << a.cigar;
  opts.pg_description = desc.str();
  // The worker count is left out so output does not depend on it.
  std::ostringstream cl;
  cl << "genpair map -x " << a.index.index << " -1 " << a.read1 << " -2 " << a.read2 << " --delta " << mcfg.delta
     << " --max-candidates " << mcfg.max_pair_candidates << " --cigar " << a.cigar;
  if (!a.residual_prefix.empty()) {
    cl << " --residual-out " << a.residual_prefix;
  }
  opts.pg_command_line = cl.str();

  OutputGuard guard;
  std::ofstream file;
  std::ostream* sam = &std::cout;
  if (a.output != "-") {
    guard.add(a.output);
    file = open_output(a.output);
    sam = &file;
  }
  std::unique_ptr<FastqResidualWriter> residual;
  if (!a.residual_prefix.empty()) {
    residual = std::make_unique<FastqResidualWriter>(a.residual_prefix);
    guard.add(residual->path1());
    guard.add(residual->path2());
  }

  const RunStats st = run(pairs, mapper, opts, *sam, residual.get());
  sam->flush();
  if (!*sam) {
    throw IoError("failed writing SAM output");
  }
  if (residual) {
    residual->close();
  }
  guard.commit();

  std::cerr << "pairs\t" << st.pairs_total << '\n'
            << "mapped_light\t" << st.mapped_light << '\t' << st.mapped_light_fraction() << '\n'
            << "mapped_dp\t" << st.mapped_dp << '\t' << st.mapped_dp_fraction() << '\n'
            << "lightalign_fail\t" << st.lightalign_fail << '\t' << st.lightalign_fail_fraction() << '\n'
            << "adjacency_fail\t" << st.adjacency_fail << '\t' << st.adjacency_fail_fraction() << '\n'
            << "seedmap_miss\t" << st.seedmap_miss << '\t' << st.seedmap_miss_fraction() << '\n';
}

// ---- simulate ----

struct SimulateArgs {
  std::string reference;
  std::string output;
  SimConfig cfg;
  std::uint64_t genome_length = 0;
  std::uint32_t genome_records = 1;
  bool gzip = false;
};

void simulate_reads(SimulateArgs a) {
  if (a.reference.empty() == (a.genome_length == 0)) {
    throw UsageError("give exactly one of --reference or --genome-length");
  }
  validate_flags(a.cfg);

  OutputGuard guard;
  Reference ref;
  if (a.genome_length != 0) {
    GenomeSpec spec;
    spec.length = a.genome_length;
    spec.records = a.genome_records;
    spec.seed = a.cfg.seed;
    ref = synthetic_genome(spec);
    const fs::path fasta = a.output + ".fa";
    guard.add(fasta);
    std::ofstream fa = open_output(fasta);
    for (std::size_t i = 0; i < ref.count(); ++i) {
      fa << '>' << ref.meta().name(i) << '\n';
      const std::string seq = ref.record(i).decode();
      for (std::size_t p = 0; p < seq.size(); p += 80) {
        fa << std::string_view(seq).substr(p, 80) << '\n';
      }
    }
    if (!fa.flush()) {
      throw IoError("failed writing " + fasta.string());
    }
  } else {
    ref = read_fasta(a.reference);
  }

  const std::string ext = a.gzip ? ".fq.gz" : ".fq";
  const fs::path p1 = a.output + "_1" + ext;
  const fs::path p2 = a.output + "_2" + ext;
  const fs::path pt = a.output + ".truth.tsv";
  guard.add(p1);
  guard.add(p2);
  guard.add(pt);
  TextSink out1(p1, a.gzip);
  TextSink out2(p2, a.gzip);
  std::ofstream truth = open_output(pt);
  truth << truth_tsv_header();

  ReadSimulator sim(ref, a.cfg);
  std::string buf1;
  std::string buf2;
  while (auto sp = sim.next()) {
    write_fastq_record(buf1, sp->pair.id + "/1", sp->pair.read1, sp->pair.qual1);
    write_fastq_record(buf2, sp->pair.id + "/2", sp->pair.read2, sp->pair.qual2);
    truth << truth_tsv_line(sp->pair.id, sp->truth, ref.meta());
    if (buf1.size() > (1u << 20)) {
      out1.write(buf1);
      out2.write(buf2);
      buf1.clear();
      buf2.clear();
    }
  }
  out1.write(buf1);
  out2.write(buf2);
  out1.close();
  out2.close();
  if (!truth.flush()) {
    throw IoError("failed writing " + pt.string());
  }
  guard.commit();
}

// ---- stats ----

struct StatsArgs {
  IndexArgs index;
  std::string read1;
  std::string read2;
  std::string output;
  std::string cdf_csv;
  std::uint64_t delta = 500;
  std::size_t max_candidates = 16;
  unsigned threads = 1;
};

void dataset_stats(const StatsArgs& a) {
  ObservationOptions opts;
  opts.map.delta = a.delta;
  opts.map.max_pair_candidates = a.max_candidates;
  validate_flags(opts.map);
  if (a.threads == 0) {
    throw UsageError("--threads must be at least 1");
  }
  opts.threads = a.threads;

  const LoadedIndex idx = load_index(a.index);
  FastqPairFiles pairs(a.read1, a.read2);
  const ObservationReport rep = observation_report(pairs, idx.map, idx.ref, opts);

  OutputGuard guard;
  guard.add(a.output);
  std::ofstream out = open_output(a.output);
  out << rep.to_json();
  if (!out.flush()) {
    throw IoError("failed writing " + a.output);
  }
  if (!a.cdf_csv.empty()) {
    guard.add(a.cdf_csv);
    std::ofstream csv = open_output(a.cdf_csv);
    rep.write_cdf_csv(csv);
    if (!csv.flush()) {
      throw IoError("failed writing " + a.cdf_csv);
    }
  }
  guard.commit();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"GenPair paired-end short-read mapper"};
  app.set_version_flag("--version", "genpair 1.0.0");
  app.require_subcommand(1);

  // index
  auto* index = app.add_subcommand("index", "Build or inspect a SeedMap index");
  index->require_subcommand(1);
  IndexBuildArgs build_args;
  auto* build = index->add_subcommand("build", "Index a reference FASTA");
  build->add_option("-r,--reference", build_args.reference, "Reference FASTA (plain or gzip)")->required();
  build->add_option("-o,--output", build_args.output, "Index file to write")->required();
  build->add_option("--seed-len", build_args.seed_len, "Seed length in bases")
      ->envname("GENPAIR_SEED_LEN")
      ->capture_default_str();
  build->add_option("--hash-bits", build_args.hash_bits, "Bits of the seed hash used as bucket id")
      ->envname("GENPAIR_HASH_BITS")
      ->capture_default_str();
  build->add_option("--filter-threshold", build_args.filter_threshold,
                    "Drop seeds with more reference locations than this")
      ->envname("GENPAIR_FILTER_THRESHOLD")
      ->capture_default_str();
  std::string inspect_path;
  auto* inspect = index->add_subcommand("inspect", "Print index header and bucket statistics");
  inspect->add_option("index", inspect_path, "Index file")->required();
  std::string inspect_top_path;
  auto* inspect_top = app.add_subcommand("inspect", "Same as `index inspect`");
  inspect_top->add_option("index", inspect_top_path, "Index file")->required();

  // map
  MapArgs map_args;
  auto* map = app.add_subcommand("map", "Map paired-end reads to SAM");
  add_index_options(map, map_args.index);
  map->add_option("-1,--read1", map_args.read1, "Mate 1 FASTQ (plain or gzip)")->required();
  map->add_option("-2,--read2", map_args.read2, "Mate 2 FASTQ (plain or gzip)")->required();
  map->add_option("-o,--output", map_args.output, "SAM output, - for stdout")->capture_default_str();
  map->add_option("--delta", map_args.delta, "Maximum distance between mate starts")
      ->envname("GENPAIR_DELTA")
      ->capture_default_str();
  map->add_option("--max-candidates", map_args.max_candidates, "Pair candidates kept per read pair")
      ->envname("GENPAIR_MAX_CANDIDATES")
      ->capture_default_str();
  map->add_option("-t,--threads", map_args.threads, "Worker threads")
      ->envname("GENPAIR_THREADS")
      ->capture_default_str();
  map->add_option("--residual-out", map_args.residual_prefix,
                  "Write unmapped pairs to <prefix>_1.fq.gz and <prefix>_2.fq.gz");
  map->add_option("--cigar", map_args.cigar, "CIGAR style: eq (=/X) or m (M)")
      ->envname("GENPAIR_CIGAR")
      ->check(CLI::IsMember({"m", "eq"}))
      ->capture_default_str();

  // simulate
  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Simulate FR read pairs with a truth table");
  sim->add_option("-r,--reference", sim_args.reference, "Reference FASTA");
  sim->add_option("--genome-length", sim_args.genome_length,
                  "Generate a random genome of this length instead (written to <prefix>.fa)");
  sim->add_option("--genome-records", sim_args.genome_records, "Records in the generated genome")
      ->capture_default_str();
  sim->add_option("-n,--count", sim_args.cfg.pair_count, "Number of pairs")->capture_default_str();
  sim->add_option("-e,--error-rate", sim_args.cfg.error_rate, "Per-base error probability")
      ->capture_default_str();
  sim->add_option("-s,--seed", sim_args.cfg.seed, "Random seed")->capture_default_str();
  sim->add_option("-l,--read-len", sim_args.cfg.read_len, "Read length")->capture_default_str();
  sim->add_option("--insert-mean", sim_args.cfg.insert_mean, "Mean fragment length")->capture_default_str();
  sim->add_option("--insert-sd", sim_args.cfg.insert_sd, "Fragment length deviation")->capture_default_str();
  sim->add_option("-o,--output", sim_args.output, "Output prefix")->required();
  sim->add_flag("--gzip", sim_args.gzip, "Gzip the FASTQ files");

  // stats
  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "Seeding, filtering and edit-type statistics as JSON");
  add_index_options(stats, stats_args.index);
  stats->add_option("-1,--read1", stats_args.read1, "Mate 1 FASTQ")->required();
  stats->add_option("-2,--read2", stats_args.read2, "Mate 2 FASTQ")->required();
  stats->add_option("-o,--output", stats_args.output, "JSON report")->required();
  stats->add_option("--cdf-csv", stats_args.cdf_csv, "Also write the min-score CDF as CSV");
  stats->add_option("--delta", stats_args.delta, "Maximum distance between mate starts")
      ->envname("GENPAIR_DELTA")
      ->capture_default_str();
  stats->add_option("--max-candidates", stats_args.max_candidates, "Pair candidates kept per read pair")
      ->envname("GENPAIR_MAX_CANDIDATES")
      ->capture_default_str();
  stats->add_option("-t,--threads", stats_args.threads, "Worker threads")
      ->envname("GENPAIR_THREADS")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (build->parsed()) {
      index_build(build_args);
    } else if (inspect->parsed()) {
      index_inspect(inspect_path);
    } else if (inspect_top->parsed()) {
      index_inspect(inspect_top_path);
    } else if (map->parsed()) {
      map_reads(map_args);
    } else if (sim->parsed()) {
      simulate_reads(sim_args);
    } else if (stats->parsed()) {
      dataset_stats(stats_args);
    }
  } catch (const UsageError& e) {
    std::cerr << "genpair: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "genpair: " << e.what() << '\n';
    return kExitData;
  }
  return 0;
}
