// syge: ingest parsed corpora, train relation-aware word embedding models,
// and evaluate them on similarity, composition, and link-prediction tasks.
//
// Exit codes: 0 success, 1 computation error, 2 usage or I/O error.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "syge/checkpoint.hpp"
#include "syge/compose.hpp"
#include "syge/detail/binio.hpp"
#include "syge/detail/gzline.hpp"
#include "syge/eval.hpp"
#include "syge/ingest.hpp"
#include "syge/manifest.hpp"
#include "syge/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace syge;

namespace {

std::string g_command_line;

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

RunManifest base_manifest() {
  RunManifest m;
  m.command = g_command_line;
  m.tool_version = tool_version_string();
  m.created_utc = utc_timestamp();
  return m;
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '.' || c == '-' || c == '_';
    if (!ok) c = '_';
  }
  return out;
}

std::string stem_of(const std::string& path) {
  fs::path p = fs::path(path).filename();
  while (p.has_extension()) p = p.stem();
  return p.string().empty() ? "data" : p.string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw io_error("cannot create directory " + dir + ": " + ec.message());
}

// 3-column TSV of raw (head, relation, tail) surface forms.
std::vector<std::array<std::string, 3>> read_raw_kg_tsv(const std::string& path) {
  detail::GzLineReader reader(path);
  std::string line;
  uint64_t line_no = 0;
  std::vector<std::array<std::string, 3>> out;
  while (reader.next(line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const size_t a = line.find('\t');
    const size_t b = a == std::string::npos ? std::string::npos : line.find('\t', a + 1);
    if (a == std::string::npos || b == std::string::npos ||
        line.find('\t', b + 1) != std::string::npos)
      throw io_error(path + ": malformed line " + std::to_string(line_no) +
                     ": expected head\trelation\ttail");
    out.push_back({line.substr(0, a), line.substr(a + 1, b - a - 1), line.substr(b + 1)});
    if (out.back()[0].empty() || out.back()[1].empty() || out.back()[2].empty())
      throw io_error(path + ": malformed line " + std::to_string(line_no) + ": empty field");
  }
  return out;
}

// ----------------------------------------------------------------- ingest

struct IngestOpts {
  std::vector<std::string> inputs;
  std::string out;
  std::string format = "conllu";
  int64_t min_count = 0;
  bool drop_punct = true;
};

void cmd_ingest(const IngestOpts& o) {
  TripleDataset ds;
  if (o.format == "conllu") {
    ds = conllu_to_dataset(o.inputs, o.min_count, o.drop_punct);
  } else if (o.format == "kgtsv") {
    if (o.inputs.size() != 1)
      throw io_error("--format kgtsv takes exactly one input file");
    if (o.min_count != 0) throw io_error("--min-count only applies to --format conllu");
    ds = read_kg_tsv(o.inputs[0]);
  } else {
    throw io_error("unknown --format '" + o.format + "' (expected conllu or kgtsv)");
  }

  dataset_save(ds, o.out);
  const DatasetStats st = dataset_stats(ds);
  const json out{{"vocab_size", st.vocab_size},
                 {"relation_count", st.relation_count},
                 {"unique_triples", st.unique_triples},
                 {"total_triples", st.total_triples},
                 {"ingest",
                  {{"sentences", st.ingest.sentences},
                   {"arcs_seen", st.ingest.arcs_seen},
                   {"punct_dropped", st.ingest.punct_dropped},
                   {"oov_dropped", st.ingest.oov_dropped},
                   {"raw_label_count", st.ingest.raw_label_count},
                   {"kept_label_count", st.ingest.kept_label_count}}}};
  std::printf("%s\n", out.dump(2).c_str());

  RunManifest m = base_manifest();
  for (const auto& in : o.inputs) m.inputs.emplace_back(in, hash_file_fnv1a(in));
  m.outputs.push_back(o.out);
  m.config = json{{"format", o.format}, {"min_count", o.min_count}, {"drop_punct", o.drop_punct}};
  manifest_write(m, o.out + ".manifest.json");
}

// ------------------------------------------------------------------ train

struct TrainOpts {
  std::string data;
  std::string out;
  std::string model;
  int dim = 0;
  int epochs = 0;
  int neg = 0;
  double lr = 0;
  std::string opt;
  std::string loss;
  int batch_size = 0;
  int64_t min_count = 0;
  double neg_power = 0;
  int threads = 0;
  uint64_t seed = 0;
  bool full_ce = false;
  bool dm_identity_init = false;
  bool deterministic = false;
  std::string config;
};

// plain key = value lines, '#' starts a comment; keys mirror the long flags
std::vector<std::pair<std::string, std::string>> read_kv_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  const auto trim = [](std::string s) {
    const char* ws = " \t\r";
    const auto a = s.find_first_not_of(ws);
    if (a == std::string::npos) return std::string();
    return s.substr(a, s.find_last_not_of(ws) - a + 1);
  };
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw io_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.size() >= 2 && ((val.front() == '"' && val.back() == '"') ||
                            (val.front() == '\'' && val.back() == '\'')))
      val = val.substr(1, val.size() - 2);
    if (key.empty() || val.empty())
      throw io_error(path + ":" + std::to_string(lineno) + ": empty key or value");
    kv.emplace_back(std::move(key), std::move(val));
  }
  return kv;
}

void apply_config_entry(TrainConfig& cfg, const std::string& key, const std::string& val,
                        const std::string& path) {
  const auto bad = [&](const char* why) {
    return io_error(path + ": key '" + key + "': " + why + " ('" + val + "')");
  };
  const auto as_int = [&] {
    try {
      size_t used = 0;
      const long long v = std::stoll(val, &used);
      if (used != val.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw bad("expected an integer");
    }
  };
  const auto as_double = [&] {
    try {
      size_t used = 0;
      const double v = std::stod(val, &used);
      if (used != val.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw bad("expected a number");
    }
  };
  const auto as_bool = [&] {
    if (val == "true" || val == "1") return true;
    if (val == "false" || val == "0") return false;
    throw bad("expected true or false");
  };
  if (key == "dim") cfg.dim = static_cast<int>(as_int());
  else if (key == "epochs") cfg.epochs = static_cast<int>(as_int());
  else if (key == "neg") cfg.neg_per_pos = static_cast<int>(as_int());
  else if (key == "lr") cfg.learning_rate = as_double();
  else if (key == "opt") cfg.optimizer = optimizer_from(val);
  else if (key == "loss") cfg.loss_mode = loss_mode_from(val);
  else if (key == "batch-size") cfg.batch_size = static_cast<int>(as_int());
  else if (key == "min-count") cfg.min_count = as_int();
  else if (key == "neg-power") cfg.neg_power = as_double();
  else if (key == "threads") cfg.threads = static_cast<int>(as_int());
  else if (key == "seed") cfg.seed = static_cast<uint64_t>(as_int());
  else if (key == "full-ce") cfg.full_ce = as_bool();
  else if (key == "dm-identity-init") cfg.dm_identity_init = as_bool();
  else throw io_error(path + ": unknown config key '" + key + "'");
}

void cmd_train(const TrainOpts& o, const CLI::App* sub) {
  const TripleDataset ds = dataset_load(o.data);

  TrainConfig cfg = defaults_for(model_kind_from(o.model));
  cfg.min_count = ds.min_count;  // unless overridden, trust the cache
  // precedence: explicit flag > config-file key > stock per-model default
  if (!o.config.empty())
    for (const auto& [key, val] : read_kv_config(o.config))
      apply_config_entry(cfg, key, val, o.config);
  const auto set = [&](const char* flag) { return sub->count(flag) > 0; };
  if (set("--dim")) cfg.dim = o.dim;
  if (set("--epochs")) cfg.epochs = o.epochs;
  if (set("--neg")) cfg.neg_per_pos = o.neg;
  if (set("--lr")) cfg.learning_rate = o.lr;
  if (set("--opt")) cfg.optimizer = optimizer_from(o.opt);
  if (set("--loss")) cfg.loss_mode = loss_mode_from(o.loss);
  if (set("--batch-size")) cfg.batch_size = o.batch_size;
  if (set("--min-count")) cfg.min_count = o.min_count;
  if (set("--neg-power")) cfg.neg_power = o.neg_power;
  if (set("--threads")) cfg.threads = o.threads;
  if (set("--seed")) cfg.seed = o.seed;
  if (set("--full-ce")) cfg.full_ce = o.full_ce;
  if (set("--dm-identity-init")) cfg.dm_identity_init = o.dm_identity_init;
  if (o.deterministic) {
    if (set("--threads") && o.threads != 1)
      throw io_error("--deterministic requires --threads 1");
    cfg.threads = 1;
  }

  std::printf("seed=%llu\n", static_cast<unsigned long long>(cfg.seed));
  auto [ck, metrics] = train(ds, cfg);
  checkpoint_save(ck, o.out);

  const json out{{"model", to_string(cfg.model)},
                 {"epoch_loss", metrics.epoch_loss},
                 {"triples_per_sec", metrics.triples_per_sec},
                 {"wall_seconds", metrics.wall_seconds},
                 {"skipped_updates", metrics.skipped_updates},
                 {"checkpoint", o.out}};
  std::printf("%s\n", out.dump(2).c_str());

  RunManifest m = base_manifest();
  m.inputs.emplace_back(o.data, hash_file_fnv1a(o.data));
  if (!o.config.empty()) m.inputs.emplace_back(o.config, hash_file_fnv1a(o.config));
  m.outputs.push_back(o.out);
  m.config = to_json(cfg);
  m.seed = cfg.seed;
  m.has_seed = true;
  manifest_write(m, o.out + ".manifest.json");
}

// ----------------------------------------------------------- shared eval

struct EvalCommon {
  std::vector<std::string> models;
  std::string data;
  std::string name;
  std::string out_dir;
  uint64_t seed = 1;
  bool deterministic = false;
};

void emit_eval_outputs(const EvalCommon& o, const std::vector<ReportRow>& rows,
                       const std::vector<SummaryEntry>& summary,
                       const std::vector<std::pair<std::string, EvalResult>>& preds) {
  for (const auto& r : rows)
    std::printf("benchmark=%s strategy=%s seed=%llu rho=%s coverage=%zu/%zu\n",
                r.benchmark.c_str(), r.strategy.empty() ? "-" : r.strategy.c_str(),
                static_cast<unsigned long long>(r.seed),
                r.rho_defined ? std::to_string(r.rho).c_str() : "nan", r.covered, r.total);
  for (const auto& s : summary) {
    std::printf("summary benchmark=%s strategy=%s mean=%s se=%s\n", s.benchmark.c_str(),
                s.strategy.empty() ? "-" : s.strategy.c_str(),
                std::isnan(s.mean) ? "nan" : std::to_string(s.mean).c_str(),
                std::isnan(s.se) ? "nan" : std::to_string(s.se).c_str());
  }
  if (o.out_dir.empty()) return;

  ensure_dir(o.out_dir);
  const fs::path dir(o.out_dir);
  write_report_csv((dir / "report.csv").string(), rows);
  write_summary_json((dir / "summary.json").string(), summary);
  RunManifest m = base_manifest();
  for (const auto& ckpath : o.models) m.inputs.emplace_back(ckpath, hash_file_fnv1a(ckpath));
  m.inputs.emplace_back(o.data, hash_file_fnv1a(o.data));
  m.outputs.push_back((dir / "report.csv").string());
  m.outputs.push_back((dir / "summary.json").string());
  for (const auto& [fname, res] : preds) {
    const std::string p = (dir / fname).string();
    write_predictions_csv(p, res);
    m.outputs.push_back(p);
  }
  manifest_write(m, (dir / "manifest.json").string());
}

void cmd_eval_wordsim(const EvalCommon& o) {
  const auto items = load_wordsim_tsv(o.data);
  const std::string bench = o.name.empty() ? stem_of(o.data) : o.name;

  std::vector<ReportRow> rows;
  std::vector<std::pair<std::string, EvalResult>> preds;
  std::vector<double> rhos;
  size_t covered = 0, total = 0;
  for (const auto& ckpath : o.models) {
    const Checkpoint ck = checkpoint_load(ckpath);
    EvalResult res = eval_wordsim(ck, items, bench);
    const uint64_t seed = ck.train_config.seed;
    rows.push_back({res.benchmark, "", seed, res.rho, res.rho_defined, res.covered, res.total});
    if (res.rho_defined) rhos.push_back(res.rho);
    covered = res.covered;
    total = res.total;
    preds.emplace_back("preds_" + sanitize(res.benchmark) + "_seed" + std::to_string(seed) + ".csv",
                       std::move(res));
  }
  std::vector<SummaryEntry> summary;
  if (!rhos.empty()) {
    const auto [mean, se] = aggregate_seeds(rhos);
    summary.push_back({bench, "", rhos, mean, se, covered, total});
  }
  emit_eval_outputs(o, rows, summary, preds);
}

struct ComposeOpts {
  EvalCommon common;
  std::string strategy = "all";
  bool ml10_raw = false;
  bool per_participant = false;
  PhraseRelationMap relmap;
};

void cmd_eval_compose(const ComposeOpts& o) {
  const auto items = o.ml10_raw ? load_ml10_raw(o.common.data, !o.per_participant)
                                : load_phrase_tsv(o.common.data);
  const std::string bench = o.common.name.empty() ? stem_of(o.common.data) : o.common.name;

  std::vector<ComposeStrategy> strategies;
  if (o.strategy == "all")
    strategies = {ComposeStrategy::Add, ComposeStrategy::SynRh, ComposeStrategy::SynRt,
                  ComposeStrategy::SynBiD};
  else
    strategies = {strategy_from(o.strategy)};

  std::vector<ReportRow> rows;
  std::vector<std::pair<std::string, EvalResult>> preds;
  std::vector<SummaryEntry> summary;

  std::vector<Checkpoint> cks;
  cks.reserve(o.common.models.size());
  for (const auto& p : o.common.models) cks.push_back(checkpoint_load(p));

  for (const ComposeStrategy strategy : strategies) {
    // benchmark -> per-seed rho, keyed in first-seen (AN, VO, NN) order
    std::vector<SummaryEntry> groups;
    for (const Checkpoint& ck : cks) {
      const uint64_t seed = ck.train_config.seed;
      auto results = eval_composition(ck, items, strategy, o.relmap, bench);
      for (EvalResult& res : results) {
        rows.push_back({res.benchmark, to_string(strategy), seed, res.rho, res.rho_defined,
                        res.covered, res.total});
        SummaryEntry* g = nullptr;
        for (auto& e : groups)
          if (e.benchmark == res.benchmark) g = &e;
        if (!g) {
          groups.push_back({res.benchmark, to_string(strategy), {}, 0, 0, res.covered, res.total});
          g = &groups.back();
        }
        if (res.rho_defined) g->per_seed_rho.push_back(res.rho);
        preds.emplace_back("preds_" + sanitize(res.benchmark) + "_" +
                               sanitize(to_string(strategy)) + "_seed" + std::to_string(seed) +
                               ".csv",
                           std::move(res));
      }
    }
    for (auto& g : groups) {
      if (g.per_seed_rho.empty()) {
        g.mean = std::numeric_limits<double>::quiet_NaN();
        g.se = std::numeric_limits<double>::quiet_NaN();
      } else {
        std::tie(g.mean, g.se) = aggregate_seeds(g.per_seed_rho);
      }
      summary.push_back(std::move(g));
    }
  }
  emit_eval_outputs(o.common, rows, summary, preds);
}

struct KgOpts {
  std::string model;
  std::string dir;
  std::string split = "test";
  std::string test_file;
  std::vector<std::string> filter_files;
  std::string out_dir;
  bool both_directions = true;
};

void cmd_eval_kg(const KgOpts& o) {
  std::string test_path = o.test_file;
  std::vector<std::string> filters = o.filter_files;
  if (!o.dir.empty()) {
    if (o.split != "test" && o.split != "dev")
      throw io_error("--split must be dev or test");
    const fs::path d(o.dir);
    test_path = (d / (o.split == "dev" ? "valid.txt" : "test.txt")).string();
    for (const char* f : {"train.txt", "valid.txt", "test.txt"}) {
      const fs::path p = d / f;
      if (fs::exists(p)) filters.push_back(p.string());
    }
  }
  if (test_path.empty()) throw io_error("eval kg needs --dir or --test");
  if (filters.empty()) filters.push_back(test_path);

  const Checkpoint ck = checkpoint_load(o.model);

  uint64_t dropped = 0;
  const auto to_triples = [&](const std::string& path, bool count_drops) {
    std::vector<Triple> out;
    for (const auto& [h, r, t] : read_raw_kg_tsv(path)) {
      const auto hi = ck.vocab.lookup(h);
      const auto ti = ck.vocab.lookup(t);
      const auto ri = ck.relations.lookup(r);
      if (!hi || !ti || !ri) {
        if (count_drops) ++dropped;
        continue;
      }
      out.push_back({*hi, *ri, *ti});
      if (o.both_directions) out.push_back({*ti, ck.relations.inverse_of(*ri), *hi});
    }
    return out;
  };

  const std::vector<Triple> test = to_triples(test_path, true);
  if (test.empty())
    throw compute_error("no test triple is covered by the model's vocabularies");
  std::vector<Triple> filter;
  for (const auto& f : filters) {
    auto part = to_triples(f, false);
    filter.insert(filter.end(), part.begin(), part.end());
  }

  const MrrResult res = eval_mrr(ck, test, filter);
  const json out{{"mrr", res.mrr},           {"hits_at_1", res.hits1},
                 {"hits_at_3", res.hits3},   {"hits_at_10", res.hits10},
                 {"queries", res.evaluated}, {"dropped_items", dropped}};
  std::printf("%s\n", out.dump(2).c_str());

  if (!o.out_dir.empty()) {
    ensure_dir(o.out_dir);
    const fs::path dir(o.out_dir);
    std::unique_ptr<std::FILE, detail::FileCloser> f(
        detail::open_or_throw((dir / "kg.json").string(), "wb"));
    detail::write_text(f.get(), out.dump(2) + "\n", (dir / "kg.json").string());
    f.reset();
    RunManifest m = base_manifest();
    m.inputs.emplace_back(o.model, hash_file_fnv1a(o.model));
    m.inputs.emplace_back(test_path, hash_file_fnv1a(test_path));
    for (const auto& fp : filters) m.inputs.emplace_back(fp, hash_file_fnv1a(fp));
    m.outputs.push_back((dir / "kg.json").string());
    manifest_write(m, (dir / "manifest.json").string());
  }
}

// ---------------------------------------------------------------- compare

struct CompareOpts {
  std::vector<std::string> files_a;
  std::vector<std::string> files_b;
  uint64_t replicates = 10000;
  uint64_t seed = 1;
  std::string out_dir;
};

void cmd_compare(const CompareOpts& o) {
  if (o.files_a.size() != o.files_b.size() || o.files_a.empty())
    throw io_error("compare needs matching --a and --b prediction files");
  std::printf("seed=%llu\n", static_cast<unsigned long long>(o.seed));

  struct Test {
    std::string pair, group;
    double delta, p;
    uint64_t skipped, replicates;
  };
  std::vector<Test> tests;

  for (size_t i = 0; i < o.files_a.size(); ++i) {
    const PredictionFile A = read_predictions_csv(o.files_a[i]);
    const PredictionFile B = read_predictions_csv(o.files_b[i]);
    if (A.item_keys != B.item_keys)
      throw io_error("prediction files disagree on items: " + o.files_a[i] + " vs " +
                     o.files_b[i]);
    if (A.gold != B.gold)
      throw io_error("prediction files disagree on gold ratings: " + o.files_a[i] + " vs " +
                     o.files_b[i]);
    // split rows by group, preserving first-seen order
    std::vector<std::string> group_order;
    for (const auto& g : A.groups)
      if (std::find(group_order.begin(), group_order.end(), g) == group_order.end())
        group_order.push_back(g);
    for (const auto& g : group_order) {
      std::vector<double> pa, pb, gold;
      for (size_t j = 0; j < A.groups.size(); ++j) {
        if (A.groups[j] != g) continue;
        pa.push_back(A.preds[j]);
        pb.push_back(B.preds[j]);
        gold.push_back(A.gold[j]);
      }
      const BootstrapResult r = bootstrap_compare(pa, pb, gold, o.replicates, o.seed);
      tests.push_back({o.files_a[i] + "|" + o.files_b[i], g, r.delta, r.p, r.skipped,
                       r.replicates});
    }
  }

  std::vector<double> pvals;
  for (const auto& t : tests) pvals.push_back(t.p);
  const std::vector<double> adjusted = holm_correct(pvals);

  json rows = json::array();
  for (size_t i = 0; i < tests.size(); ++i) {
    std::printf("pair=%s group=%s delta=%.6f p=%.6f p_holm=%.6f\n", tests[i].pair.c_str(),
                tests[i].group.c_str(), tests[i].delta, tests[i].p, adjusted[i]);
    rows.push_back({{"pair", tests[i].pair},
                    {"group", tests[i].group},
                    {"delta", tests[i].delta},
                    {"p", tests[i].p},
                    {"p_holm", adjusted[i]},
                    {"skipped_resamples", tests[i].skipped},
                    {"replicates", tests[i].replicates}});
  }
  const json out{{"note",
                  "one paired bootstrap per file pair and group; the Holm step-down is applied "
                  "across every test in this invocation"},
                 {"replicates", o.replicates},
                 {"seed", o.seed},
                 {"tests", rows}};

  if (!o.out_dir.empty()) {
    ensure_dir(o.out_dir);
    const fs::path dir(o.out_dir);
    std::unique_ptr<std::FILE, detail::FileCloser> f(
        detail::open_or_throw((dir / "compare.json").string(), "wb"));
    detail::write_text(f.get(), out.dump(2) + "\n", (dir / "compare.json").string());
    f.reset();
    RunManifest m = base_manifest();
    for (const auto& p : o.files_a) m.inputs.emplace_back(p, hash_file_fnv1a(p));
    for (const auto& p : o.files_b) m.inputs.emplace_back(p, hash_file_fnv1a(p));
    m.outputs.push_back((dir / "compare.json").string());
    m.seed = o.seed;
    m.has_seed = true;
    manifest_write(m, (dir / "manifest.json").string());
  }
}

// -------------------------------------------------------------- export-pca

struct PcaOpts {
  std::string model;
  std::vector<std::string> words;
  std::string words_file;
  std::string relation;
  std::string group;
  std::string out_file;
  bool contextualise = false;
};

void cmd_export_pca(const PcaOpts& o) {
  const Checkpoint ck = checkpoint_load(o.model);

  std::vector<std::string> words = o.words;
  if (!o.words_file.empty()) {
    detail::GzLineReader reader(o.words_file);
    std::string line;
    while (reader.next(line))
      if (!line.empty() && line[0] != '#') words.push_back(line);
  }
  if (words.empty()) throw io_error("export-pca needs --words or --words-file");
  for (auto& w : words)
    for (char& c : w)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');

  std::vector<std::string> labels;
  std::vector<uint32_t> ids;
  uint64_t dropped = 0;
  for (const auto& w : words) {
    const auto id = ck.vocab.lookup(w);
    if (!id) {
      ++dropped;
      continue;
    }
    labels.push_back(w);
    ids.push_back(*id);
  }
  if (dropped)
    std::fprintf(stderr, "export-pca: %llu word(s) not in vocabulary, skipped\n",
                 static_cast<unsigned long long>(dropped));

  std::string group = o.group;
  std::vector<std::vector<double>> vectors;
  const size_t n = static_cast<size_t>(ck.params.dim);
  if (o.contextualise) {
    if (o.relation.empty()) throw io_error("--contextualise needs --relation");
    const auto rel = ck.relations.lookup(o.relation);
    if (!rel) throw compute_error("relation label '" + o.relation + "' not in checkpoint");
    const auto ctx = contextualise_words(ck, ids, *rel);
    for (const auto& v : ctx) vectors.emplace_back(v.begin(), v.end());
    if (group.empty()) group = o.relation;
  } else {
    for (const uint32_t id : ids) {
      const float* e = ck.params.row(ParamTable::Emb, id);
      vectors.emplace_back(e, e + n);
    }
    if (group.empty()) group = "emb";
  }

  const auto coords = pca_project(vectors, 2);
  const std::vector<std::string> groups(labels.size(), group);
  write_pca_csv(o.out_file, labels, groups, coords);
  std::printf("wrote %zu points to %s\n", coords.size(), o.out_file.c_str());

  RunManifest m = base_manifest();
  m.inputs.emplace_back(o.model, hash_file_fnv1a(o.model));
  if (!o.words_file.empty()) m.inputs.emplace_back(o.words_file, hash_file_fnv1a(o.words_file));
  m.outputs.push_back(o.out_file);
  manifest_write(m, o.out_file + ".manifest.json");
}

// ------------------------------------------------------------------ params

struct ParamsOpts {
  std::string model;
  std::string ckpt;
  int64_t vocab = 0;
  int64_t rels = 0;
  int dim = 0;
};

void cmd_params(const ParamsOpts& o) {
  if (!o.ckpt.empty()) {
    const Checkpoint ck = checkpoint_load(o.ckpt);
    json tables = json::object();
    for (const ParamTable t : kAllTables) {
      const size_t count = ck.params.table(t).size();
      if (count) tables[table_name(t)] = count;
    }
    const json out{{"model", to_string(ck.params.kind)},
                   {"dim", ck.params.dim},
                   {"entities", ck.params.num_entities},
                   {"relations", ck.params.num_relations},
                   {"total_params", ck.params.total_params()},
                   {"tables", tables}};
    std::printf("%s\n", out.dump(2).c_str());
    return;
  }
  if (o.model.empty() || o.vocab <= 0 || o.rels <= 0 || o.dim <= 0)
    throw io_error("params needs --ckpt, or --model with --vocab, --rels and --dim");
  const uint64_t total =
      count_params(model_kind_from(o.model), static_cast<int64_t>(o.vocab),
                   static_cast<int64_t>(o.rels), o.dim);
  std::printf("%llu\n", static_cast<unsigned long long>(total));
}

}  // namespace

int main(int argc, char** argv) {
  g_command_line = join_args(argc, argv);

  CLI::App app{"syntactic-graph embedding toolkit"};
  app.require_subcommand(1);

  // ---- ingest
  IngestOpts ing;
  auto* s_ing = app.add_subcommand("ingest", "parse corpora into a triple dataset cache");
  s_ing->add_option("inputs", ing.inputs, "input files")->required()->check(CLI::ExistingFile);
  s_ing->add_option("--out", ing.out, "dataset cache to write")->required();
  s_ing->add_option("--format", ing.format, "conllu or kgtsv (default conllu)");
  s_ing->add_option("--min-count", ing.min_count, "keep words seen at least this often");
  s_ing->add_flag("--drop-punct,!--keep-punct", ing.drop_punct,
                  "drop punctuation arcs (default on)");
  uint64_t ing_seed = 0;
  bool ing_det = false;
  s_ing->add_option("--seed", ing_seed, "accepted for uniformity; ingest is deterministic");
  s_ing->add_flag("--deterministic", ing_det, "accepted for uniformity; ingest is deterministic");
  s_ing->callback([&] { cmd_ingest(ing); });

  // ---- train
  TrainOpts tr;
  auto* s_tr = app.add_subcommand("train", "train a model from a dataset cache");
  s_tr->add_option("--data", tr.data, "dataset cache")->required()->check(CLI::ExistingFile);
  s_tr->add_option("--out", tr.out, "checkpoint to write")->required();
  s_tr->add_option("--model", tr.model, "dm, mure, rote, refe or atte")->required();
  s_tr->add_option("--dim", tr.dim, "embedding width (even)");
  s_tr->add_option("--epochs", tr.epochs, "training epochs");
  s_tr->add_option("--neg", tr.neg, "negative samples per positive");
  s_tr->add_option("--lr", tr.lr, "learning rate");
  s_tr->add_option("--opt", tr.opt, "sgd or adam");
  s_tr->add_option("--loss", tr.loss, "sgns, bernoulli or softmax_ce");
  s_tr->add_option("--batch-size", tr.batch_size, "positives per parameter update");
  s_tr->add_option("--min-count", tr.min_count, "must match the dataset cache");
  s_tr->add_option("--neg-power", tr.neg_power, "exponent on counts for negative sampling");
  s_tr->add_option("--threads", tr.threads, "worker threads (1 = deterministic)");
  s_tr->add_option("--seed", tr.seed, "random seed");
  s_tr->add_flag("--full-ce", tr.full_ce, "softmax over the whole vocabulary");
  s_tr->add_flag("--dm-identity-init", tr.dm_identity_init,
                 "start relation matrices at the identity");
  s_tr->add_flag("--deterministic", tr.deterministic, "force the single-thread contract");
  s_tr->add_option("--config", tr.config, "key = value file; flags win over file entries")
      ->check(CLI::ExistingFile);
  s_tr->callback([&] { cmd_train(tr, s_tr); });

  // ---- eval
  auto* s_ev = app.add_subcommand("eval", "evaluate a trained checkpoint");
  s_ev->require_subcommand(1);

  EvalCommon ws;
  auto* s_ws = s_ev->add_subcommand("wordsim", "word-pair similarity correlation");
  s_ws->add_option("--model", ws.models, "checkpoint(s), one per seed")
      ->required()
      ->check(CLI::ExistingFile);
  s_ws->add_option("--data", ws.data, "3-column TSV: word1, word2, rating")
      ->required()
      ->check(CLI::ExistingFile);
  s_ws->add_option("--name", ws.name, "benchmark name in reports");
  s_ws->add_option("--out", ws.out_dir, "directory for report.csv, summary.json, predictions");
  s_ws->add_option("--seed", ws.seed, "accepted for uniformity");
  s_ws->add_flag("--deterministic", ws.deterministic, "accepted for uniformity");
  s_ws->callback([&] { cmd_eval_wordsim(ws); });

  ComposeOpts cp;
  auto* s_cp = s_ev->add_subcommand("compose", "phrase-pair similarity via composition");
  s_cp->add_option("--model", cp.common.models, "checkpoint(s), one per seed")
      ->required()
      ->check(CLI::ExistingFile);
  s_cp->add_option("--data", cp.common.data, "phrase TSV (or raw ML10 with --ml10-raw)")
      ->required()
      ->check(CLI::ExistingFile);
  s_cp->add_option("--strategy", cp.strategy, "add, syn-rh, syn-rt, syn-bid or all");
  s_cp->add_flag("--ml10-raw", cp.ml10_raw, "input is the raw per-participant distribution");
  s_cp->add_flag("--per-participant", cp.per_participant,
                 "keep one item per participant rating instead of averaging");
  s_cp->add_option("--an-label", cp.relmap.an, "relation label for adjective-noun phrases");
  s_cp->add_option("--vo-label", cp.relmap.vo, "relation label for verb-object phrases");
  s_cp->add_option("--nn-label", cp.relmap.nn, "relation label for compound-noun phrases");
  s_cp->add_option("--name", cp.common.name, "benchmark name in reports");
  s_cp->add_option("--out", cp.common.out_dir,
                   "directory for report.csv, summary.json, predictions");
  s_cp->add_option("--seed", cp.common.seed, "accepted for uniformity");
  s_cp->add_flag("--deterministic", cp.common.deterministic, "accepted for uniformity");
  s_cp->callback([&] { cmd_eval_compose(cp); });

  KgOpts kg;
  auto* s_kg = s_ev->add_subcommand("kg", "filtered link-prediction ranking");
  s_kg->add_option("--model", kg.model, "checkpoint")->required()->check(CLI::ExistingFile);
  s_kg->add_option("--dir", kg.dir, "directory holding train.txt/valid.txt/test.txt");
  s_kg->add_option("--split", kg.split, "dev or test (with --dir; default test)");
  s_kg->add_option("--test", kg.test_file, "explicit test TSV")->check(CLI::ExistingFile);
  s_kg->add_option("--filter", kg.filter_files, "known-true TSVs for filtered ranking")
      ->check(CLI::ExistingFile);
  s_kg->add_flag("--both-directions,!--tail-only", kg.both_directions,
                 "also rank the inverse direction of each test triple (default on)");
  s_kg->add_option("--out", kg.out_dir, "directory for kg.json");
  uint64_t kg_seed = 0;
  bool kg_det = false;
  s_kg->add_option("--seed", kg_seed, "accepted for uniformity");
  s_kg->add_flag("--deterministic", kg_det, "accepted for uniformity");
  s_kg->callback([&] { cmd_eval_kg(kg); });

  // ---- compare
  CompareOpts cm;
  auto* s_cm = app.add_subcommand("compare", "paired bootstrap test between prediction files");
  s_cm->add_option("--a", cm.files_a, "first prediction CSV of each pair")
      ->required()
      ->check(CLI::ExistingFile);
  s_cm->add_option("--b", cm.files_b, "second prediction CSV of each pair")
      ->required()
      ->check(CLI::ExistingFile);
  s_cm->add_option("--bootstrap", cm.replicates, "resample count (default 10000)");
  s_cm->add_option("--seed", cm.seed, "random seed");
  bool cm_det = false;
  s_cm->add_flag("--deterministic", cm_det, "accepted for uniformity; compare is deterministic");
  s_cm->add_option("--out", cm.out_dir, "directory for compare.json");
  s_cm->callback([&] { cmd_compare(cm); });

  // ---- export-pca
  PcaOpts pc;
  auto* s_pc = app.add_subcommand("export-pca", "2-d PCA coordinates for word vectors");
  s_pc->add_option("--model", pc.model, "checkpoint")->required()->check(CLI::ExistingFile);
  s_pc->add_option("--words", pc.words, "words to project")->delimiter(',');
  s_pc->add_option("--words-file", pc.words_file, "file with one word per line")
      ->check(CLI::ExistingFile);
  s_pc->add_option("--relation", pc.relation, "relation label for --contextualise");
  s_pc->add_flag("--contextualise", pc.contextualise,
                 "apply the model's relation transform before projecting");
  s_pc->add_option("--group", pc.group, "group column value in the CSV");
  s_pc->add_option("--out", pc.out_file, "CSV to write")->required();
  uint64_t pc_seed = 0;
  bool pc_det = false;
  s_pc->add_option("--seed", pc_seed, "accepted for uniformity");
  s_pc->add_flag("--deterministic", pc_det, "accepted for uniformity");
  s_pc->callback([&] { cmd_export_pca(pc); });

  // ---- params
  ParamsOpts pr;
  auto* s_pr = app.add_subcommand("params", "parameter count for a configuration or checkpoint");
  s_pr->add_option("--model", pr.model, "dm, mure, rote, refe or atte");
  s_pr->add_option("--ckpt", pr.ckpt, "audit an existing checkpoint")->check(CLI::ExistingFile);
  s_pr->add_option("--vocab", pr.vocab, "entity count");
  s_pr->add_option("--rels", pr.rels, "directed relation count (inverses included)");
  s_pr->add_option("--dim", pr.dim, "embedding width");
  uint64_t pr_seed = 0;
  bool pr_det = false;
  s_pr->add_option("--seed", pr_seed, "accepted for uniformity");
  s_pr->add_flag("--deterministic", pr_det, "accepted for uniformity");
  s_pr->callback([&] { cmd_params(pr); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const io_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const compute_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
