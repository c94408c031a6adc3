#pragma once
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "syge/checkpoint.hpp"
#include "syge/compose.hpp"
#include "syge/ingest.hpp"

namespace syge {

struct WordPairItem {
  std::string word1, word2;
  double rating = 0.0;
};

struct PhrasePairItem {
  PhraseType type = PhraseType::AN;
  std::string root1, dep1, root2, dep2;
  double rating = 0.0;
};

// 3 tab-separated columns: word1, word2, rating. A single header line is
// tolerated; words are ASCII-lowercased to match ingestion.
std::vector<WordPairItem> load_wordsim_tsv(const std::string& path);

// phrase_type, root1, dep1, root2, dep2, rating tab-separated; a 5-column
// variant with "root2/dep2" slash-joined in one field is accepted too.
std::vector<PhrasePairItem> load_phrase_tsv(const std::string& path);

// Adapter for the original benchmark distribution: whitespace-separated
// participant ratings, one line per (participant, phrase pair). By default
// ratings are averaged into one gold value per phrase pair; with
// average_participants off every line stays a separate item.
std::vector<PhrasePairItem> load_ml10_raw(const std::string& path,
                                          bool average_participants = true);

// Pearson correlation of average ranks (ties share their mean rank).
// Returns NaN when either side has zero rank variance; throws on m < 2.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

// One benchmark evaluated against one checkpoint. gold/preds/item_keys are
// aligned over covered items only, in file order, so prediction dumps feed
// the significance machinery without re-evaluation.
struct EvalResult {
  std::string benchmark;
  std::string strategy;
  double rho = 0.0;
  bool rho_defined = false;  // false = zero-variance sentinel
  size_t covered = 0, total = 0;
  uint64_t zero_norm_items = 0;  // cosine hit a zero vector
  std::vector<std::string> item_keys;
  std::vector<double> gold, preds;
  std::vector<std::string> dropped;  // OOV items
};

// cosine over target-space embeddings; OOV pairs dropped and counted.
// Throws compute_error when fewer than 2 items are covered.
EvalResult eval_wordsim(const Checkpoint& ck, const std::vector<WordPairItem>& items,
                        const std::string& benchmark_name);

// One result per phrase type present in the items (AN, VO, NN order).
// Throws compute_error if a type's relation label is missing from the model
// or a nonempty group covers fewer than 2 items.
std::vector<EvalResult> eval_composition(const Checkpoint& ck,
                                         const std::vector<PhrasePairItem>& items,
                                         ComposeStrategy strategy, const PhraseRelationMap& relmap,
                                         const std::string& benchmark_name);

struct MrrResult {
  double mrr = 0.0;
  double hits1 = 0.0, hits3 = 0.0, hits10 = 0.0;
  uint64_t evaluated = 0;
};

// Ranks the true tail among all entities with (h, r) fixed. Known-true tails
// from filter are excluded from the candidate list (never the true tail
// itself); score ties rank pessimistically.
MrrResult eval_mrr(const Checkpoint& ck, const std::vector<Triple>& test,
                   const std::vector<Triple>& filter);

struct BootstrapResult {
  double p = 1.0;
  double delta = 0.0;       // observed rho(A) - rho(B)
  uint64_t skipped = 0;     // degenerate resamples re-drawn
  uint64_t replicates = 0;  // replicates that produced a delta
};

// Paired two-tail bootstrap over items. Replicate b draws from Rng(seed + b),
// so any parallel split over replicates agrees with the serial run.
BootstrapResult bootstrap_compare(const std::vector<double>& predsA,
                                  const std::vector<double>& predsB,
                                  const std::vector<double>& gold, uint64_t B, uint64_t seed);

// Step-down adjustment, returned in the original order: sort ascending,
// adjusted_(i) = max_{j<=i} (m-j)*p_(j) (0-based), clipped at 1.
std::vector<double> holm_correct(const std::vector<double>& pvals);

// (mean, standard error); SE uses the n-1 sample stdev over sqrt(s) and is
// NaN for a single seed
std::pair<double, double> aggregate_seeds(const std::vector<double>& rhos);

// Mean-centered projection onto the top-k covariance eigenvectors via power
// iteration with deflation (tol 1e-9, 10^4 iteration cap). Sign convention:
// each component's first nonzero loading is positive. Components beyond the
// numeric rank yield zero coordinates; data with no variance at all is an
// error, as is m < k+1.
std::vector<std::vector<double>> pca_project(const std::vector<std::vector<double>>& vectors,
                                             int k = 2);

// The model's head-side transform of each word under the given relation
// (DM instead maps the context embedding through the relation matrix).
std::vector<std::vector<float>> contextualise_words(const Checkpoint& ck,
                                                    const std::vector<uint32_t>& words,
                                                    uint32_t relation);

// report emission -------------------------------------------------------

struct ReportRow {
  std::string benchmark;
  std::string strategy;
  uint64_t seed = 0;
  double rho = 0.0;
  bool rho_defined = false;
  size_t covered = 0, total = 0;
};

// benchmark,strategy,seed,rho,coverage (coverage as covered/total)
void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows);

struct SummaryEntry {
  std::string benchmark;
  std::string strategy;
  std::vector<double> per_seed_rho;
  double mean = 0.0, se = 0.0;
  size_t covered = 0, total = 0;
};

void write_summary_json(const std::string& path, const std::vector<SummaryEntry>& entries);

// item,group,gold,pred over covered items
void write_predictions_csv(const std::string& path, const EvalResult& result);

struct PredictionFile {
  std::vector<std::string> item_keys, groups;
  std::vector<double> gold, preds;
};

PredictionFile read_predictions_csv(const std::string& path);

// label,group,x,y
void write_pca_csv(const std::string& path, const std::vector<std::string>& labels,
                   const std::vector<std::string>& groups,
                   const std::vector<std::vector<double>>& coords);

}  // namespace syge
