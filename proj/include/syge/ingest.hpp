#pragma once
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "syge/rng.hpp"
#include "syge/vocab.hpp"

namespace syge {

// One dependency edge, surface form. Root attachments never become arcs.
struct DependencyArc {
  std::string governor;
  std::string relation;
  std::string dependent;
  int64_t sentence_id = 0;
};

// Extraction bookkeeping carried in the dataset so stats stay auditable after
// caching. raw_label_count includes labels that were later dropped or OOV'd.
struct IngestStats {
  uint64_t sentences = 0;
  uint64_t arcs_seen = 0;
  uint64_t punct_dropped = 0;
  uint64_t oov_dropped = 0;
  uint64_t raw_label_count = 0;   // distinct base labels before any dropping
  uint64_t kept_label_count = 0;  // distinct base labels that emitted triples
};

// Training corpus: directed triples with repetitions plus the vocabularies
// that give ids meaning. min_count is recorded so later stages can detect a
// config mismatch.
struct TripleDataset {
  std::vector<Triple> triples;  // with repetitions; total_count == triples.size()
  uint64_t unique_count = 0;
  uint64_t total_count = 0;
  Vocab vocab;
  RelationVocab relations;
  std::vector<uint64_t> entity_counts;  // per-id, same basis as vocab counts
  int64_t min_count = 0;
  IngestStats stats;
};

// Cumulative distribution over entity ids with p(i) proportional to
// count(i)^power; power 0 is uniform. O(log |V|) sampling.
struct NegTable {
  std::vector<double> cdf;
  double power = 0.0;

  uint32_t sample(Rng& rng) const;
};

struct DatasetStats {
  uint64_t vocab_size = 0;
  uint64_t relation_count = 0;  // directed (inverses included)
  uint64_t unique_triples = 0;
  uint64_t total_triples = 0;
  IngestStats ingest;
};

// Streams arcs out of a CoNLL-U file (plain or gzip; 10 tab-separated
// columns). FORM is ASCII-lowercased; multiword ranges and empty nodes are
// skipped; a malformed line reports its number.
void read_conllu(const std::string& path, const std::function<void(const DependencyArc&)>& sink);
std::vector<DependencyArc> read_conllu(const std::string& path);

// Builds the dataset from an arc list: counts both endpoints of every kept
// arc, keeps words with count >= min_count, and emits each surviving arc as
// (gov, rel, dep) plus (dep, rel_inv, gov). Punctuation arcs are dropped
// before counting unless drop_punct is off.
TripleDataset arcs_to_triples(const std::vector<DependencyArc>& arcs, int64_t min_count,
                              bool drop_punct = true);

// Same contract, streaming: two passes over the files (counts, then emission)
// so the corpus never has to fit in memory as arcs. Files are processed in the
// order given; callers sort paths for deterministic merges.
TripleDataset conllu_to_dataset(const std::vector<std::string>& paths, int64_t min_count,
                                bool drop_punct = true);

// head\trelation\ttail triples; vocabulary is every entity observed, counts
// are slot occurrences, relations are doubled with inverses.
TripleDataset read_kg_tsv(const std::string& path);

NegTable build_neg_table(const TripleDataset& ds, double power);

DatasetStats dataset_stats(const TripleDataset& ds);

inline constexpr char kDatasetMagic[] = "SYGD0001\n";

// Binary cache with the same header+arrays convention as checkpoints but a
// dtype-tagged manifest (u32 interleaved h,r,t; u64 counts).
void dataset_save(const TripleDataset& ds, const std::string& path);
TripleDataset dataset_load(const std::string& path);

}  // namespace syge
