#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <memory>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "syge/detail/binio.hpp"
#include "syge/detail/gzline.hpp"
#include "syge/ingest.hpp"

namespace syge {

using nlohmann::json;
using detail::FileCloser;

namespace {

bool is_punct_label(const std::string& label) { return label == "punct"; }

uint64_t count_unique(std::vector<Triple> triples) {
  std::sort(triples.begin(), triples.end(), [](const Triple& a, const Triple& b) {
    if (a.h != b.h) return a.h < b.h;
    if (a.r != b.r) return a.r < b.r;
    return a.t < b.t;
  });
  uint64_t unique = 0;
  for (size_t i = 0; i < triples.size(); ++i)
    if (i == 0 || !(triples[i] == triples[i - 1])) ++unique;
  return unique;
}

// Shared two-pass builder. Pass 1 feeds counts(), pass 2 feeds emit(); both
// must see the same arc stream for the dataset to be consistent.
struct DatasetBuilder {
  int64_t min_count = 0;
  bool drop_punct = true;

  // pass 1 state
  std::unordered_map<std::string, uint64_t> word_counts;
  std::unordered_set<std::string> raw_labels;
  std::unordered_set<int64_t> sentences_with_arcs;  // keyed by (file_idx, sentence_id) mix
  IngestStats stats;

  // pass 2 state
  Vocab vocab;
  std::unordered_map<std::string, uint32_t> label_temp;
  std::vector<std::string> temp_labels;
  std::vector<std::array<uint32_t, 3>> kept;  // governor id, dependent id, temp label

  void count(const DependencyArc& arc, int64_t file_idx = 0) {
    ++stats.arcs_seen;
    raw_labels.insert(arc.relation);
    sentences_with_arcs.insert(file_idx * (int64_t(1) << 40) + arc.sentence_id);
    if (drop_punct && is_punct_label(arc.relation)) {
      ++stats.punct_dropped;
      return;
    }
    ++word_counts[arc.governor];
    ++word_counts[arc.dependent];
  }

  void freeze_vocab() {
    vocab = Vocab::build(word_counts, static_cast<uint64_t>(min_count));
    word_counts.clear();
  }

  void emit(const DependencyArc& arc) {
    if (drop_punct && is_punct_label(arc.relation)) return;
    const auto g = vocab.lookup(arc.governor);
    const auto d = vocab.lookup(arc.dependent);
    if (!g || !d) {
      ++stats.oov_dropped;
      return;
    }
    auto [it, inserted] = label_temp.try_emplace(arc.relation, static_cast<uint32_t>(temp_labels.size()));
    if (inserted) temp_labels.push_back(arc.relation);
    kept.push_back({*g, *d, it->second});
  }

  TripleDataset finish() {
    TripleDataset ds;
    ds.min_count = min_count;
    ds.vocab = std::move(vocab);
    ds.relations = RelationVocab::build(temp_labels);

    std::vector<uint32_t> remap(temp_labels.size());
    for (uint32_t i = 0; i < temp_labels.size(); ++i) remap[i] = *ds.relations.lookup(temp_labels[i]);

    ds.triples.reserve(kept.size() * 2);
    for (const auto& [g, d, lbl] : kept) {
      const uint32_t r = remap[lbl];
      ds.triples.push_back({g, r, d});
      ds.triples.push_back({d, ds.relations.inverse_of(r), g});
    }
    ds.total_count = ds.triples.size();
    ds.unique_count = count_unique(ds.triples);
    ds.entity_counts = ds.vocab.counts();

    stats.sentences = sentences_with_arcs.size();
    stats.raw_label_count = raw_labels.size();
    stats.kept_label_count = temp_labels.size();
    ds.stats = stats;
    return ds;
  }
};

}  // namespace

TripleDataset arcs_to_triples(const std::vector<DependencyArc>& arcs, int64_t min_count,
                              bool drop_punct) {
  DatasetBuilder b;
  b.min_count = min_count;
  b.drop_punct = drop_punct;
  for (const auto& a : arcs) b.count(a);
  b.freeze_vocab();
  for (const auto& a : arcs) b.emit(a);
  return b.finish();
}

TripleDataset conllu_to_dataset(const std::vector<std::string>& paths, int64_t min_count,
                                bool drop_punct) {
  DatasetBuilder b;
  b.min_count = min_count;
  b.drop_punct = drop_punct;
  for (size_t i = 0; i < paths.size(); ++i)
    read_conllu(paths[i], [&](const DependencyArc& a) { b.count(a, static_cast<int64_t>(i)); });
  b.freeze_vocab();
  for (const auto& path : paths) read_conllu(path, [&](const DependencyArc& a) { b.emit(a); });
  return b.finish();
}

TripleDataset read_kg_tsv(const std::string& path) {
  detail::GzLineReader reader(path);
  std::string line;
  uint64_t line_no = 0;
  std::vector<std::array<std::string, 3>> rows;
  std::unordered_map<std::string, uint64_t> entity_counts;
  std::vector<std::string> base_labels;
  std::unordered_set<std::string> seen_labels;

  while (reader.next(line)) {
    ++line_no;
    if (line.empty()) continue;
    std::array<std::string, 3> row;
    size_t start = 0, field = 0;
    while (field < 3) {
      const size_t tab = line.find('\t', start);
      if (tab == std::string::npos) {
        row[field++] = line.substr(start);
        start = line.size() + 1;
        break;
      }
      row[field++] = line.substr(start, tab - start);
      start = tab + 1;
    }
    if (field != 3 || start <= line.size() || row[0].empty() || row[1].empty() || row[2].empty())
      throw io_error(path + ": malformed line " + std::to_string(line_no) +
                     ": expected head\\trelation\\ttail");
    ++entity_counts[row[0]];
    ++entity_counts[row[2]];
    if (seen_labels.insert(row[1]).second) base_labels.push_back(row[1]);
    rows.push_back(std::move(row));
  }

  TripleDataset ds;
  ds.min_count = 0;
  ds.vocab = Vocab::build(entity_counts, 0);
  ds.relations = RelationVocab::build(base_labels);
  ds.triples.reserve(rows.size() * 2);
  for (const auto& row : rows) {
    const uint32_t h = *ds.vocab.lookup(row[0]);
    const uint32_t r = *ds.relations.lookup(row[1]);
    const uint32_t t = *ds.vocab.lookup(row[2]);
    ds.triples.push_back({h, r, t});
    ds.triples.push_back({t, ds.relations.inverse_of(r), h});
  }
  ds.total_count = ds.triples.size();
  ds.unique_count = count_unique(ds.triples);
  ds.entity_counts = ds.vocab.counts();
  ds.stats.arcs_seen = rows.size();
  ds.stats.raw_label_count = base_labels.size();
  ds.stats.kept_label_count = base_labels.size();
  return ds;
}

uint32_t NegTable::sample(Rng& rng) const {
  const double u = rng.next_double();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  const size_t idx = std::min<size_t>(static_cast<size_t>(it - cdf.begin()), cdf.size() - 1);
  return static_cast<uint32_t>(idx);
}

NegTable build_neg_table(const TripleDataset& ds, double power) {
  if (ds.entity_counts.empty())
    throw compute_error("cannot build a negative table over an empty vocabulary");
  NegTable t;
  t.power = power;
  t.cdf.resize(ds.entity_counts.size());
  double sum = 0.0;
  for (size_t i = 0; i < ds.entity_counts.size(); ++i) {
    const double w = std::pow(static_cast<double>(ds.entity_counts[i]), power);
    sum += w;
    t.cdf[i] = sum;
  }
  if (!(sum > 0.0)) throw compute_error("negative table has zero total mass");
  for (double& c : t.cdf) c /= sum;
  t.cdf.back() = 1.0;
  return t;
}

DatasetStats dataset_stats(const TripleDataset& ds) {
  DatasetStats s;
  s.vocab_size = ds.vocab.size();
  s.relation_count = ds.relations.size();
  s.unique_triples = ds.unique_count;
  s.total_triples = ds.total_count;
  s.ingest = ds.stats;
  return s;
}

void dataset_save(const TripleDataset& ds, const std::string& path) {
  for (const Triple& tr : ds.triples) {
    if (tr.h >= ds.vocab.size() || tr.t >= ds.vocab.size() || tr.r >= ds.relations.size())
      throw io_error("refusing to save " + path + ": triple references out-of-range id");
  }
  if (ds.entity_counts.size() != ds.vocab.size())
    throw io_error("refusing to save " + path + ": entity_counts length skew");

  json header{
      {"vocab", json{{"words", ds.vocab.words()}, {"counts", ds.vocab.counts()}}},
      {"relations", json{{"labels", ds.relations.labels()}, {"inverse", ds.relations.inverse_map()}}},
      {"min_count", ds.min_count},
      {"unique_count", ds.unique_count},
      {"total_count", ds.total_count},
      {"stats", json{{"sentences", ds.stats.sentences},
                     {"arcs_seen", ds.stats.arcs_seen},
                     {"punct_dropped", ds.stats.punct_dropped},
                     {"oov_dropped", ds.stats.oov_dropped},
                     {"raw_label_count", ds.stats.raw_label_count},
                     {"kept_label_count", ds.stats.kept_label_count}}},
      {"manifest",
       json::array({json::array({"triples_hrt", ds.triples.size() * 3, "u32"}),
                    json::array({"entity_counts", ds.entity_counts.size(), "u64"})})}};

  std::unique_ptr<std::FILE, FileCloser> f(detail::open_or_throw(path, "wb"));
  detail::write_text(f.get(), kDatasetMagic, path);
  detail::write_text(f.get(), header.dump() + "\n", path);
  std::vector<uint32_t> packed;
  packed.reserve(ds.triples.size() * 3);
  for (const Triple& tr : ds.triples) {
    packed.push_back(tr.h);
    packed.push_back(tr.r);
    packed.push_back(tr.t);
  }
  detail::write_le_array(f.get(), packed.data(), packed.size(), path);
  detail::write_le_array(f.get(), ds.entity_counts.data(), ds.entity_counts.size(), path);
  if (std::fflush(f.get()) != 0) throw io_error("write failed: " + path);
}

TripleDataset dataset_load(const std::string& path) {
  std::unique_ptr<std::FILE, FileCloser> f(detail::open_or_throw(path, "rb"));
  detail::expect_magic(f.get(), kDatasetMagic, path);
  json header;
  try {
    header = json::parse(detail::read_header_line(f.get(), path));
  } catch (const json::exception& e) {
    throw io_error("corrupt header in " + path + ": " + e.what());
  }

  TripleDataset ds;
  uint64_t triple_elems = 0, count_elems = 0;
  try {
    const auto& jv = header.at("vocab");
    const auto words = jv.at("words").get<std::vector<std::string>>();
    const auto counts = jv.at("counts").get<std::vector<uint64_t>>();
    if (words.size() != counts.size())
      throw io_error("corrupt header in " + path + ": vocab words/counts length skew");
    for (size_t i = 0; i < words.size(); ++i) ds.vocab.push(words[i], counts[i]);
    const auto& jr = header.at("relations");
    for (const auto& label : jr.at("labels").get<std::vector<std::string>>())
      ds.relations.push(label);
    ds.relations.set_inverse_map(jr.at("inverse").get<std::vector<uint32_t>>());
    ds.min_count = header.at("min_count").get<int64_t>();
    ds.unique_count = header.at("unique_count").get<uint64_t>();
    ds.total_count = header.at("total_count").get<uint64_t>();
    const auto& js = header.at("stats");
    ds.stats.sentences = js.at("sentences").get<uint64_t>();
    ds.stats.arcs_seen = js.at("arcs_seen").get<uint64_t>();
    ds.stats.punct_dropped = js.at("punct_dropped").get<uint64_t>();
    ds.stats.oov_dropped = js.at("oov_dropped").get<uint64_t>();
    ds.stats.raw_label_count = js.at("raw_label_count").get<uint64_t>();
    ds.stats.kept_label_count = js.at("kept_label_count").get<uint64_t>();
    const auto& manifest = header.at("manifest");
    if (manifest.size() != 2 || manifest[0][0] != "triples_hrt" || manifest[0][2] != "u32" ||
        manifest[1][0] != "entity_counts" || manifest[1][2] != "u64")
      throw io_error("corrupt header in " + path + ": unexpected manifest");
    triple_elems = manifest[0][1].get<uint64_t>();
    count_elems = manifest[1][1].get<uint64_t>();
  } catch (const json::exception& e) {
    throw io_error("corrupt header in " + path + ": " + e.what());
  }

  if (triple_elems % 3 != 0)
    throw io_error("corrupt header in " + path + ": triple element count not divisible by 3");
  if (triple_elems / 3 != ds.total_count)
    throw io_error("corrupt header in " + path + ": total_count disagrees with manifest");
  if (count_elems != ds.vocab.size())
    throw io_error("corrupt header in " + path + ": entity_counts length skew");

  std::vector<uint32_t> packed(triple_elems);
  detail::read_le_array(f.get(), packed.data(), packed.size(), path);
  ds.triples.resize(triple_elems / 3);
  for (size_t i = 0; i < ds.triples.size(); ++i)
    ds.triples[i] = {packed[3 * i], packed[3 * i + 1], packed[3 * i + 2]};
  ds.entity_counts.resize(count_elems);
  detail::read_le_array(f.get(), ds.entity_counts.data(), ds.entity_counts.size(), path);
  if (std::fgetc(f.get()) != EOF)
    throw io_error("invalid dataset cache " + path + ": trailing bytes after payload");

  for (const Triple& tr : ds.triples) {
    if (tr.h >= ds.vocab.size() || tr.t >= ds.vocab.size() || tr.r >= ds.relations.size())
      throw io_error("invalid dataset cache " + path + ": triple references out-of-range id");
  }
  return ds;
}

}  // namespace syge
