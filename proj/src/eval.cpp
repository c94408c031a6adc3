#include "syge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <numeric>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "syge/detail/binio.hpp"
#include "syge/detail/gzline.hpp"
#include "syge/geometry.hpp"

namespace syge {

using detail::FileCloser;
using detail::GzLineReader;
using nlohmann::json;

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void ascii_lower(std::string& s) {
  for (char& c : s)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  try {
    size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

std::vector<std::string> split_on(const std::string& line, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t p = line.find(sep, start);
    if (p == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, p - start));
    start = p + 1;
  }
}

std::vector<std::string> split_whitespace(const std::string& line) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

std::vector<WordPairItem> load_wordsim_tsv(const std::string& path) {
  GzLineReader reader(path);
  std::string line;
  uint64_t line_no = 0;
  bool first_content = true;
  std::vector<WordPairItem> items;
  while (reader.next(line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_on(line, '\t');
    double rating = 0.0;
    const bool ok = cols.size() == 3 && parse_double(cols[2], rating);
    if (!ok) {
      if (first_content) {  // tolerate one header line
        first_content = false;
        continue;
      }
      throw io_error(path + ": malformed line " + std::to_string(line_no) +
                     ": expected word1<TAB>word2<TAB>rating");
    }
    first_content = false;
    ascii_lower(cols[0]);
    ascii_lower(cols[1]);
    items.push_back({std::move(cols[0]), std::move(cols[1]), rating});
  }
  return items;
}

std::vector<PhrasePairItem> load_phrase_tsv(const std::string& path) {
  GzLineReader reader(path);
  std::string line;
  uint64_t line_no = 0;
  bool first_content = true;
  std::vector<PhrasePairItem> items;
  while (reader.next(line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_on(line, '\t');
    // the 5-column variant carries root2/dep2 slash-joined in one field
    if (cols.size() == 5) {
      const auto slash = split_on(cols[3], '/');
      if (slash.size() == 2) {
        cols[3] = slash[0];
        cols.insert(cols.begin() + 4, slash[1]);
      }
    }
    PhrasePairItem item;
    double rating = 0.0;
    bool ok = cols.size() == 6 && parse_double(cols[5], rating);
    if (ok) {
      try {
        item.type = phrase_type_from(cols[0]);
      } catch (const std::invalid_argument&) {
        ok = false;
      }
    }
    if (!ok) {
      if (first_content) {
        first_content = false;
        continue;
      }
      throw io_error(path + ": malformed line " + std::to_string(line_no) +
                     ": expected type<TAB>root1<TAB>dep1<TAB>root2<TAB>dep2<TAB>rating");
    }
    first_content = false;
    for (int i = 1; i <= 4; ++i) ascii_lower(cols[static_cast<size_t>(i)]);
    item.root1 = std::move(cols[1]);
    item.dep1 = std::move(cols[2]);
    item.root2 = std::move(cols[3]);
    item.dep2 = std::move(cols[4]);
    item.rating = rating;
    items.push_back(std::move(item));
  }
  return items;
}

std::vector<PhrasePairItem> load_ml10_raw(const std::string& path, bool average_participants) {
  GzLineReader reader(path);
  std::string line;
  uint64_t line_no = 0;
  bool first_content = true;

  struct Accum {
    PhrasePairItem item;
    double sum = 0.0;
    uint64_t n = 0;
  };
  std::vector<Accum> accums;
  std::unordered_map<std::string, size_t> index;
  std::vector<PhrasePairItem> raw_items;

  while (reader.next(line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_whitespace(line);

    // layout: participant [group] type w1 w2 w3 w4 rating; the type column
    // anchors parsing since some distributions carry an extra group column
    size_t type_idx = 0;
    PhraseType type = PhraseType::AN;
    bool found = false;
    for (size_t ti = 1; ti <= 2; ++ti) {
      if (ti + 6 != cols.size()) continue;  // type + 4 words + rating follow
      try {
        type = phrase_type_from(cols[ti]);
        type_idx = ti;
        found = true;
        break;
      } catch (const std::invalid_argument&) {
      }
    }
    double rating = 0.0;
    const bool ok = found && parse_double(cols.back(), rating);
    if (!ok) {
      if (first_content) {
        first_content = false;
        continue;
      }
      throw io_error(path + ": malformed line " + std::to_string(line_no) +
                     ": expected participant [group] type w1 w2 w3 w4 rating");
    }
    first_content = false;

    std::string w1 = cols[type_idx + 1], w2 = cols[type_idx + 2];
    std::string w3 = cols[type_idx + 3], w4 = cols[type_idx + 4];
    ascii_lower(w1);
    ascii_lower(w2);
    ascii_lower(w3);
    ascii_lower(w4);

    PhrasePairItem item;
    item.type = type;
    item.rating = rating;
    // surface order is (adjective noun) / (verb object) / (modifier head);
    // the root is the noun, verb, and head noun respectively
    if (type == PhraseType::VO) {
      item.root1 = w1;
      item.dep1 = w2;
      item.root2 = w3;
      item.dep2 = w4;
    } else {
      item.root1 = w2;
      item.dep1 = w1;
      item.root2 = w4;
      item.dep2 = w3;
    }

    if (!average_participants) {
      raw_items.push_back(std::move(item));
      continue;
    }
    const std::string key = std::string(to_string(type)) + '\t' + item.root1 + '\t' + item.dep1 +
                            '\t' + item.root2 + '\t' + item.dep2;
    auto [it, inserted] = index.try_emplace(key, accums.size());
    if (inserted) accums.push_back({item, 0.0, 0});
    accums[it->second].sum += rating;
    accums[it->second].n += 1;
  }

  if (!average_participants) return raw_items;
  std::vector<PhrasePairItem> items;
  items.reserve(accums.size());
  for (auto& a : accums) {
    a.item.rating = a.sum / static_cast<double>(a.n);
    items.push_back(std::move(a.item));
  }
  return items;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  const size_t m = v.size();
  std::vector<size_t> idx(m);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(m);
  size_t i = 0;
  while (i < m) {
    size_t j = i;
    while (j + 1 < m && v[idx[j + 1]] == v[idx[i]]) ++j;
    const double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[idx[k]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t m = a.size();
  double ma = 0.0, mb = 0.0;
  for (size_t i = 0; i < m; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(m);
  mb /= static_cast<double>(m);
  double cab = 0.0, caa = 0.0, cbb = 0.0;
  for (size_t i = 0; i < m; ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    cab += da * db;
    caa += da * da;
    cbb += db * db;
  }
  if (caa <= 0.0 || cbb <= 0.0) return kNan;
  return cab / std::sqrt(caa * cbb);
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("spearman: length mismatch");
  if (xs.size() < 2) throw std::invalid_argument("spearman needs at least 2 items");
  return pearson(average_ranks(xs), average_ranks(ys));
}

EvalResult eval_wordsim(const Checkpoint& ck, const std::vector<WordPairItem>& items,
                        const std::string& benchmark_name) {
  EvalResult res;
  res.benchmark = benchmark_name;
  res.total = items.size();
  const int n = ck.params.dim;
  for (const auto& item : items) {
    const auto a = ck.vocab.lookup(item.word1);
    const auto b = ck.vocab.lookup(item.word2);
    if (!a || !b) {
      res.dropped.push_back(item.word1 + "|" + item.word2);
      continue;
    }
    bool zero = false;
    const double pred =
        cosine(ck.params.row(ParamTable::Emb, *a), ck.params.row(ParamTable::Emb, *b),
               static_cast<size_t>(n), &zero);
    if (zero) ++res.zero_norm_items;
    res.item_keys.push_back(item.word1 + "|" + item.word2);
    res.gold.push_back(item.rating);
    res.preds.push_back(pred);
  }
  res.covered = res.preds.size();
  if (res.covered < 2)
    throw compute_error("word similarity benchmark " + benchmark_name + ": only " +
                        std::to_string(res.covered) + " of " + std::to_string(res.total) +
                        " items covered by the vocabulary");
  res.rho = spearman(res.gold, res.preds);
  res.rho_defined = std::isfinite(res.rho);
  return res;
}

std::vector<EvalResult> eval_composition(const Checkpoint& ck,
                                         const std::vector<PhrasePairItem>& items,
                                         ComposeStrategy strategy, const PhraseRelationMap& relmap,
                                         const std::string& benchmark_name) {
  std::vector<EvalResult> out;
  for (PhraseType type : {PhraseType::AN, PhraseType::VO, PhraseType::NN}) {
    std::vector<const PhrasePairItem*> group;
    for (const auto& item : items)
      if (item.type == type) group.push_back(&item);
    if (group.empty()) continue;

    const std::string& label = relmap.label_for(type);
    const auto rel = ck.relations.lookup(label);
    if (!rel)
      throw compute_error("relation label '" + label + "' (phrase type " +
                          to_string(type) + ") is not in the model's relation vocabulary");

    EvalResult res;
    res.benchmark = benchmark_name + ":" + to_string(type);
    res.strategy = to_string(strategy);
    res.total = group.size();
    for (const auto* item : group) {
      const auto r1 = ck.vocab.lookup(item->root1);
      const auto d1 = ck.vocab.lookup(item->dep1);
      const auto r2 = ck.vocab.lookup(item->root2);
      const auto d2 = ck.vocab.lookup(item->dep2);
      const std::string key =
          item->root1 + "+" + item->dep1 + "|" + item->root2 + "+" + item->dep2;
      if (!r1 || !d1 || !r2 || !d2) {
        res.dropped.push_back(key);
        continue;
      }
      const PhraseAnalysis left{*r1, *d1, *rel, type};
      const PhraseAnalysis right{*r2, *d2, *rel, type};
      const auto vl = compose_phrase(ck.params, ck.relations, left, strategy);
      const auto vr = compose_phrase(ck.params, ck.relations, right, strategy);
      bool zero = false;
      const double pred = cosine(vl, vr, &zero);
      if (zero) ++res.zero_norm_items;
      res.item_keys.push_back(key);
      res.gold.push_back(item->rating);
      res.preds.push_back(pred);
    }
    res.covered = res.preds.size();
    if (res.covered < 2)
      throw compute_error("composition benchmark " + res.benchmark + ": only " +
                          std::to_string(res.covered) + " of " + std::to_string(res.total) +
                          " items covered by the vocabulary");
    res.rho = spearman(res.gold, res.preds);
    res.rho_defined = std::isfinite(res.rho);
    out.push_back(std::move(res));
  }
  return out;
}

MrrResult eval_mrr(const Checkpoint& ck, const std::vector<Triple>& test,
                   const std::vector<Triple>& filter) {
  if (test.empty()) throw std::invalid_argument("eval_mrr: empty test set");
  const auto V = static_cast<uint32_t>(ck.params.num_entities);

  std::unordered_map<uint64_t, std::vector<uint32_t>> known;
  known.reserve(filter.size());
  for (const Triple& tr : filter)
    known[(static_cast<uint64_t>(tr.h) << 32) | tr.r].push_back(tr.t);
  for (auto& [k, v] : known) std::sort(v.begin(), v.end());

  MrrResult res;
  HeadTransform<float> ht;
  for (const Triple& tr : test) {
    compute_head_transform(ck.params, tr.h, tr.r, ht);
    const double s_true = score_with_head(ck.params, ht, tr.t);
    const auto it = known.find((static_cast<uint64_t>(tr.h) << 32) | tr.r);
    const std::vector<uint32_t>* ftails = it == known.end() ? nullptr : &it->second;

    uint64_t ahead = 0;
    for (uint32_t v = 0; v < V; ++v) {
      if (v == tr.t) continue;
      if (ftails && std::binary_search(ftails->begin(), ftails->end(), v)) continue;
      const double s = score_with_head(ck.params, ht, v);
      if (s >= s_true) ++ahead;  // ties rank pessimistically
    }
    const uint64_t rank = 1 + ahead;
    res.mrr += 1.0 / static_cast<double>(rank);
    if (rank <= 1) ++res.hits1;
    if (rank <= 3) ++res.hits3;
    if (rank <= 10) ++res.hits10;
    ++res.evaluated;
  }
  const auto m = static_cast<double>(res.evaluated);
  res.mrr /= m;
  res.hits1 /= m;
  res.hits3 /= m;
  res.hits10 /= m;
  return res;
}

BootstrapResult bootstrap_compare(const std::vector<double>& predsA,
                                  const std::vector<double>& predsB,
                                  const std::vector<double>& gold, uint64_t B, uint64_t seed) {
  const size_t m = gold.size();
  if (predsA.size() != m || predsB.size() != m)
    throw std::invalid_argument("bootstrap_compare: prediction/gold length mismatch");
  if (m < 2) throw std::invalid_argument("bootstrap_compare needs at least 2 items");
  if (B < 1000) throw std::invalid_argument("bootstrap_compare needs B >= 1000");

  const double rhoA = spearman(predsA, gold);
  const double rhoB = spearman(predsB, gold);
  if (!std::isfinite(rhoA) || !std::isfinite(rhoB))
    throw compute_error("bootstrap_compare: observed correlation undefined (zero rank variance)");

  BootstrapResult res;
  res.delta = rhoA - rhoB;
  uint64_t le = 0, ge = 0;
  std::vector<double> sa(m), sb(m), sg(m);
  for (uint64_t b = 0; b < B; ++b) {
    Rng rng(seed + b);  // replicate streams agree under any parallel split
    bool got = false;
    double d = 0.0;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      for (size_t i = 0; i < m; ++i) {
        const size_t j = static_cast<size_t>(rng.below(m));
        sa[i] = predsA[j];
        sb[i] = predsB[j];
        sg[i] = gold[j];
      }
      const double ra = spearman(sa, sg);
      const double rb = spearman(sb, sg);
      if (std::isfinite(ra) && std::isfinite(rb)) {
        d = ra - rb;
        got = true;
        break;
      }
      ++res.skipped;
    }
    if (!got) continue;
    ++res.replicates;
    if (d <= 0.0) ++le;
    if (d >= 0.0) ++ge;
  }
  if (res.replicates == 0)
    throw compute_error("bootstrap_compare: every resample was degenerate");
  const double fle = static_cast<double>(le) / static_cast<double>(res.replicates);
  const double fge = static_cast<double>(ge) / static_cast<double>(res.replicates);
  res.p = std::min(1.0, std::max(0.0, 2.0 * std::min(fle, fge)));
  return res;
}

std::vector<double> holm_correct(const std::vector<double>& pvals) {
  const size_t m = pvals.size();
  for (double p : pvals)
    if (!(p >= 0.0 && p <= 1.0))
      throw std::invalid_argument("holm_correct: p-values must lie in [0, 1]");
  std::vector<size_t> idx(m);
  std::iota(idx.begin(), idx.end(), size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return pvals[a] < pvals[b]; });
  std::vector<double> adjusted(m);
  double running = 0.0;
  for (size_t j = 0; j < m; ++j) {
    const double scaled = static_cast<double>(m - j) * pvals[idx[j]];
    running = std::max(running, scaled);
    adjusted[idx[j]] = std::min(1.0, running);
  }
  return adjusted;
}

std::pair<double, double> aggregate_seeds(const std::vector<double>& rhos) {
  if (rhos.empty()) throw std::invalid_argument("aggregate_seeds: no values");
  const auto s = static_cast<double>(rhos.size());
  double mean = 0.0;
  for (double r : rhos) mean += r;
  mean /= s;
  if (rhos.size() == 1) return {mean, kNan};
  double var = 0.0;
  for (double r : rhos) var += (r - mean) * (r - mean);
  var /= (s - 1.0);
  return {mean, std::sqrt(var) / std::sqrt(s)};
}

std::vector<std::vector<double>> pca_project(const std::vector<std::vector<double>>& vectors,
                                             int k) {
  const size_t m = vectors.size();
  if (k < 1) throw std::invalid_argument("pca_project: k must be >= 1");
  if (m < static_cast<size_t>(k) + 1)
    throw std::invalid_argument("pca_project needs at least k+1 vectors");
  const size_t n = vectors[0].size();
  for (const auto& v : vectors)
    if (v.size() != n) throw std::invalid_argument("pca_project: ragged input");
  if (n == 0) throw std::invalid_argument("pca_project: zero-dimensional input");

  std::vector<double> mean(n, 0.0);
  for (const auto& v : vectors)
    for (size_t i = 0; i < n; ++i) mean[i] += v[i];
  for (double& x : mean) x /= static_cast<double>(m);
  std::vector<std::vector<double>> centered(m, std::vector<double>(n));
  for (size_t p = 0; p < m; ++p)
    for (size_t i = 0; i < n; ++i) centered[p][i] = vectors[p][i] - mean[i];

  std::vector<double> C(n * n, 0.0);
  for (size_t p = 0; p < m; ++p)
    for (size_t i = 0; i < n; ++i) {
      const double xi = centered[p][i];
      if (xi == 0.0) continue;
      for (size_t j = 0; j < n; ++j) C[i * n + j] += xi * centered[p][j];
    }
  const double denom = static_cast<double>(m - 1);
  for (double& c : C) c /= denom;
  double trace = 0.0;
  for (size_t i = 0; i < n; ++i) trace += C[i * n + i];
  if (!(trace > 0.0)) throw compute_error("pca_project: input has no variance");

  std::vector<std::vector<double>> coords(m, std::vector<double>(static_cast<size_t>(k), 0.0));
  std::vector<double> v(n), w(n);

  for (int comp = 0; comp < k; ++comp) {
    Rng rng(0x9e3779b97f4a7c15ull ^ static_cast<uint64_t>(comp + 1));
    double norm = 0.0;
    for (size_t i = 0; i < n; ++i) {
      v[i] = rng.uniform(-1.0, 1.0);
      norm += v[i] * v[i];
    }
    norm = std::sqrt(norm);
    for (size_t i = 0; i < n; ++i) v[i] = norm > 0 ? v[i] / norm : (i == 0 ? 1.0 : 0.0);

    bool degenerate = false;
    for (int iter = 0; iter < 10000; ++iter) {
      for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j < n; ++j) acc += C[i * n + j] * v[j];
        w[i] = acc;
      }
      double wn = 0.0;
      for (size_t i = 0; i < n; ++i) wn += w[i] * w[i];
      wn = std::sqrt(wn);
      if (wn < trace * 1e-14 + 1e-300) {
        degenerate = true;  // remaining spectrum is numerically zero
        break;
      }
      double diff = 0.0;
      for (size_t i = 0; i < n; ++i) {
        w[i] /= wn;
        diff += (w[i] - v[i]) * (w[i] - v[i]);
      }
      v = w;
      if (std::sqrt(diff) < 1e-9) break;
    }

    double lambda = 0.0;
    if (!degenerate) {
      for (size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (size_t j = 0; j < n; ++j) acc += C[i * n + j] * v[j];
        lambda += v[i] * acc;
      }
      if (lambda < trace * 1e-12) degenerate = true;
    }
    if (degenerate) continue;  // coordinates for this component stay 0

    size_t first = 0;
    while (first < n && std::abs(v[first]) <= 1e-9) ++first;
    if (first < n && v[first] < 0.0)
      for (size_t i = 0; i < n; ++i) v[i] = -v[i];

    for (size_t p = 0; p < m; ++p) {
      double acc = 0.0;
      for (size_t i = 0; i < n; ++i) acc += centered[p][i] * v[i];
      coords[p][static_cast<size_t>(comp)] = acc;
    }
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) C[i * n + j] -= lambda * v[i] * v[j];
  }
  return coords;
}

std::vector<std::vector<float>> contextualise_words(const Checkpoint& ck,
                                                    const std::vector<uint32_t>& words,
                                                    uint32_t relation) {
  const auto& p = ck.params;
  detail::check_relation(p, relation);
  const int n = p.dim;
  std::vector<std::vector<float>> out;
  out.reserve(words.size());
  for (uint32_t w : words) {
    detail::check_entity(p, w, "word");
    std::vector<float> vec(static_cast<size_t>(n), 0.0f);
    switch (p.kind) {
      case ModelKind::DM: {
        // W_r e'_w: the relation map applied to the context embedding
        const float* W = p.row(ParamTable::RelMatrix, relation);
        const float* cw = p.row(ParamTable::CtxEmb, w);
        for (int i = 0; i < n; ++i) {
          const float* wrow = W + static_cast<int64_t>(i) * n;
          double acc = 0.0;
          for (int j = 0; j < n; ++j) acc += static_cast<double>(wrow[j]) * static_cast<double>(cw[j]);
          vec[static_cast<size_t>(i)] = static_cast<float>(acc);
        }
        break;
      }
      case ModelKind::MuRE: {
        const float* rho = p.row(ParamTable::RelDiag, relation);
        const float* ew = p.row(ParamTable::Emb, w);
        for (int i = 0; i < n; ++i)
          vec[static_cast<size_t>(i)] =
              static_cast<float>(static_cast<double>(rho[i]) * static_cast<double>(ew[i]));
        break;
      }
      case ModelKind::RotE:
      case ModelKind::RefE:
      case ModelKind::AttE: {
        HeadTransform<float> ht;
        compute_head_transform(p, w, relation, ht);
        vec = std::move(ht.q);
        break;
      }
    }
    out.push_back(std::move(vec));
  }
  return out;
}

// report emission -------------------------------------------------------

namespace {

std::string fmt_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_report_csv(const std::string& path, const std::vector<ReportRow>& rows) {
  std::unique_ptr<std::FILE, FileCloser> f(detail::open_or_throw(path, "wb"));
  detail::write_text(f.get(), "benchmark,strategy,seed,rho,coverage\n", path);
  for (const auto& r : rows) {
    const std::string line = r.benchmark + "," + (r.strategy.empty() ? "-" : r.strategy) + "," +
                             std::to_string(r.seed) + "," +
                             (r.rho_defined ? fmt_double(r.rho) : "nan") + "," +
                             std::to_string(r.covered) + "/" + std::to_string(r.total) + "\n";
    detail::write_text(f.get(), line, path);
  }
  if (std::fflush(f.get()) != 0) throw io_error("write failed: " + path);
}

void write_summary_json(const std::string& path, const std::vector<SummaryEntry>& entries) {
  json out = json::array();
  for (const auto& e : entries) {
    json per_seed = json::array();
    for (double r : e.per_seed_rho) {
      if (std::isnan(r))
        per_seed.push_back(nullptr);
      else
        per_seed.push_back(r);
    }
    json row{{"benchmark", e.benchmark},
             {"strategy", e.strategy},
             {"per_seed_rho", per_seed},
             {"covered", e.covered},
             {"total", e.total}};
    row["mean"] = std::isnan(e.mean) ? json(nullptr) : json(e.mean);
    row["se"] = std::isnan(e.se) ? json(nullptr) : json(e.se);
    out.push_back(std::move(row));
  }
  std::unique_ptr<std::FILE, FileCloser> f(detail::open_or_throw(path, "wb"));
  detail::write_text(f.get(), out.dump(2) + "\n", path);
  if (std::fflush(f.get()) != 0) throw io_error("write failed: " + path);
}

void write_predictions_csv(const std::string& path, const EvalResult& result) {
  std::unique_ptr<std::FILE, FileCloser> f(detail::open_or_throw(path, "wb"));
  detail::write_text(f.get(), "item,group,gold,pred\n", path);
  for (size_t i = 0; i < result.preds.size(); ++i) {
    detail::write_text(f.get(),
                       result.item_keys[i] + "," + result.benchmark + "," +
                           fmt_double(result.gold[i]) + "," + fmt_double(result.preds[i]) + "\n",
                       path);
  }
  if (std::fflush(f.get()) != 0) throw io_error("write failed: " + path);
}

PredictionFile read_predictions_csv(const std::string& path) {
  GzLineReader reader(path);
  std::string line;
  if (!reader.next(line) || line != "item,group,gold,pred")
    throw io_error(path + ": not a prediction file (missing item,group,gold,pred header)");
  PredictionFile out;
  uint64_t line_no = 1;
  while (reader.next(line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cols = split_on(line, ',');
    double gold = 0.0, pred = 0.0;
    if (cols.size() != 4 || !parse_double(cols[2], gold) || !parse_double(cols[3], pred))
      throw io_error(path + ": malformed line " + std::to_string(line_no));
    out.item_keys.push_back(std::move(cols[0]));
    out.groups.push_back(std::move(cols[1]));
    out.gold.push_back(gold);
    out.preds.push_back(pred);
  }
  return out;
}

void write_pca_csv(const std::string& path, const std::vector<std::string>& labels,
                   const std::vector<std::string>& groups,
                   const std::vector<std::vector<double>>& coords) {
  if (labels.size() != coords.size() || groups.size() != coords.size())
    throw std::invalid_argument("write_pca_csv: length mismatch");
  std::unique_ptr<std::FILE, FileCloser> f(detail::open_or_throw(path, "wb"));
  detail::write_text(f.get(), "label,group,x,y\n", path);
  for (size_t i = 0; i < coords.size(); ++i) {
    if (coords[i].size() < 2) throw std::invalid_argument("write_pca_csv: need 2-d coordinates");
    detail::write_text(f.get(),
                       labels[i] + "," + groups[i] + "," + fmt_double(coords[i][0]) + "," +
                           fmt_double(coords[i][1]) + "\n",
                       path);
  }
  if (std::fflush(f.get()) != 0) throw io_error("write failed: " + path);
}

}  // namespace syge
