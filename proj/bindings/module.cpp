// Python surface: the pipeline operations (ingest, train, evaluate, compose)
// plus the statistics helpers. Thin wrappers only; all behaviour lives in the
// core library.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>

#include "syge/checkpoint.hpp"
#include "syge/common.hpp"
#include "syge/compose.hpp"
#include "syge/config.hpp"
#include "syge/eval.hpp"
#include "syge/ingest.hpp"
#include "syge/model.hpp"
#include "syge/params.hpp"
#include "syge/trainer.hpp"

namespace py = pybind11;
using namespace syge;

namespace {

uint32_t word_id_or_throw(const Checkpoint& ck, const std::string& word) {
  const auto id = ck.vocab.lookup(word);
  if (!id) throw std::invalid_argument("word not in vocabulary: " + word);
  return *id;
}

uint32_t relation_id_or_throw(const Checkpoint& ck, const std::string& label) {
  const auto id = ck.relations.lookup(label);
  if (!id) throw std::invalid_argument("relation not in vocabulary: " + label);
  return *id;
}

}  // namespace

PYBIND11_MODULE(_syge, m) {
  m.doc() = "graph-embedding trainer and evaluation toolkit";

  py::register_exception<io_error>(m, "IoError");
  py::register_exception<compute_error>(m, "ComputeError");

  py::class_<Triple>(m, "Triple")
      .def(py::init([](uint32_t h, uint32_t r, uint32_t t) { return Triple{h, r, t}; }),
           py::arg("h"), py::arg("r"), py::arg("t"))
      .def_readwrite("h", &Triple::h)
      .def_readwrite("r", &Triple::r)
      .def_readwrite("t", &Triple::t)
      .def("__repr__", [](const Triple& tr) {
        return "Triple(h=" + std::to_string(tr.h) + ", r=" + std::to_string(tr.r) +
               ", t=" + std::to_string(tr.t) + ")";
      });

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_property("model",
                    [](const TrainConfig& c) { return std::string(to_string(c.model)); },
                    [](TrainConfig& c, const std::string& s) { c.model = model_kind_from(s); })
      .def_readwrite("dim", &TrainConfig::dim)
      .def_readwrite("epochs", &TrainConfig::epochs)
      .def_readwrite("neg_per_pos", &TrainConfig::neg_per_pos)
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_property("optimizer",
                    [](const TrainConfig& c) { return std::string(to_string(c.optimizer)); },
                    [](TrainConfig& c, const std::string& s) { c.optimizer = optimizer_from(s); })
      .def_property("loss_mode",
                    [](const TrainConfig& c) { return std::string(to_string(c.loss_mode)); },
                    [](TrainConfig& c, const std::string& s) { c.loss_mode = loss_mode_from(s); })
      .def_readwrite("batch_size", &TrainConfig::batch_size)
      .def_readwrite("min_count", &TrainConfig::min_count)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("neg_power", &TrainConfig::neg_power)
      .def_readwrite("threads", &TrainConfig::threads)
      .def_readwrite("full_ce", &TrainConfig::full_ce)
      .def_readwrite("dm_identity_init", &TrainConfig::dm_identity_init)
      .def_readwrite("progress", &TrainConfig::progress)
      .def("validate", &TrainConfig::validate);

  m.def("default_config", [](const std::string& model) { return defaults_for(model_kind_from(model)); },
        py::arg("model"), "stock hyperparameters for a model name");

  py::class_<TripleDataset>(m, "TripleDataset")
      .def_property_readonly("num_triples",
                             [](const TripleDataset& ds) { return ds.triples.size(); })
      .def_property_readonly("vocab_size", [](const TripleDataset& ds) { return ds.vocab.size(); })
      .def_property_readonly("relation_count",
                             [](const TripleDataset& ds) { return ds.relations.size(); })
      .def_property_readonly("min_count", [](const TripleDataset& ds) { return ds.min_count; })
      .def("word", [](const TripleDataset& ds, uint32_t id) { return ds.vocab.word(id); },
           py::arg("id"))
      .def("word_id", [](const TripleDataset& ds, const std::string& w) { return ds.vocab.lookup(w); },
           py::arg("word"))
      .def("relation_label",
           [](const TripleDataset& ds, uint32_t id) { return ds.relations.label(id); },
           py::arg("id"));

  m.def("ingest_conllu",
        [](const std::vector<std::string>& paths, int64_t min_count, bool drop_punct) {
          return conllu_to_dataset(paths, min_count, drop_punct);
        },
        py::arg("paths"), py::arg("min_count") = 0, py::arg("drop_punct") = true,
        "parse CoNLL-U files (plain or gzip) into a triple dataset");
  m.def("ingest_kg_tsv", &read_kg_tsv, py::arg("path"),
        "read head<TAB>relation<TAB>tail triples");
  m.def("dataset_save", &dataset_save, py::arg("dataset"), py::arg("path"));
  m.def("dataset_load", &dataset_load, py::arg("path"));

  py::class_<Checkpoint>(m, "Checkpoint")
      .def_property_readonly("model",
                             [](const Checkpoint& ck) { return std::string(to_string(ck.params.kind)); })
      .def_property_readonly("dim", [](const Checkpoint& ck) { return ck.params.dim; })
      .def_property_readonly("vocab_size", [](const Checkpoint& ck) { return ck.vocab.size(); })
      .def_property_readonly("relation_count",
                             [](const Checkpoint& ck) { return ck.relations.size(); })
      .def_property_readonly("config", [](const Checkpoint& ck) { return ck.train_config; })
      .def("word", [](const Checkpoint& ck, uint32_t id) { return ck.vocab.word(id); },
           py::arg("id"))
      .def("word_id", [](const Checkpoint& ck, const std::string& w) { return ck.vocab.lookup(w); },
           py::arg("word"))
      .def("relation_id",
           [](const Checkpoint& ck, const std::string& label) { return ck.relations.lookup(label); },
           py::arg("label"))
      .def("relation_label",
           [](const Checkpoint& ck, uint32_t id) { return ck.relations.label(id); }, py::arg("id"))
      .def("embedding",
           [](const Checkpoint& ck, const std::string& word) {
             const uint32_t id = word_id_or_throw(ck, word);
             const float* row = ck.params.row(ParamTable::Emb, id);
             return std::vector<float>(row, row + ck.params.dim);
           },
           py::arg("word"), "target-space vector for a word")
      .def("score",
           [](const Checkpoint& ck, const std::string& h, const std::string& r,
              const std::string& t) {
             return score(ck.params, Triple{word_id_or_throw(ck, h), relation_id_or_throw(ck, r),
                                            word_id_or_throw(ck, t)});
           },
           py::arg("head"), py::arg("relation"), py::arg("tail"),
           "plausibility of (head, relation, tail); higher is more plausible")
      .def("score_ids",
           [](const Checkpoint& ck, const Triple& tr) { return score(ck.params, tr); },
           py::arg("triple"))
      .def("compose",
           [](const Checkpoint& ck, const std::string& root, const std::string& dependent,
              const std::string& relation, const std::string& strategy) {
             const PhraseAnalysis pa{word_id_or_throw(ck, root), word_id_or_throw(ck, dependent),
                                     relation_id_or_throw(ck, relation), PhraseType::AN};
             return compose_phrase(ck.params, ck.relations, pa, strategy_from(strategy));
           },
           py::arg("root"), py::arg("dependent"), py::arg("relation"),
           py::arg("strategy") = "syn-bid", "phrase vector for (root, dependent) under a relation");

  m.def("train",
        [](const TripleDataset& ds, const TrainConfig& cfg) {
          auto [ck, metrics] = train(ds, cfg);
          py::dict md;
          md["epoch_loss"] = metrics.epoch_loss;
          md["triples_per_sec"] = metrics.triples_per_sec;
          md["wall_seconds"] = metrics.wall_seconds;
          md["skipped_updates"] = metrics.skipped_updates;
          return py::make_tuple(std::move(ck), std::move(md));
        },
        py::arg("dataset"), py::arg("config"),
        "returns (checkpoint, metrics dict); raises ComputeError on divergence");
  m.def("checkpoint_save", &checkpoint_save, py::arg("checkpoint"), py::arg("path"));
  m.def("checkpoint_load", &checkpoint_load, py::arg("path"));

  m.def("count_params",
        [](const std::string& model, int64_t vocab, int64_t rels, int dim) {
          return count_params(model_kind_from(model), vocab, rels, dim);
        },
        py::arg("model"), py::arg("vocab"), py::arg("relations"), py::arg("dim"));

  py::class_<WordPairItem>(m, "WordPairItem")
      .def_readonly("word1", &WordPairItem::word1)
      .def_readonly("word2", &WordPairItem::word2)
      .def_readonly("rating", &WordPairItem::rating);
  py::class_<PhrasePairItem>(m, "PhrasePairItem")
      .def_property_readonly("type",
                             [](const PhrasePairItem& it) { return std::string(to_string(it.type)); })
      .def_readonly("root1", &PhrasePairItem::root1)
      .def_readonly("dep1", &PhrasePairItem::dep1)
      .def_readonly("root2", &PhrasePairItem::root2)
      .def_readonly("dep2", &PhrasePairItem::dep2)
      .def_readonly("rating", &PhrasePairItem::rating);
  m.def("load_wordsim_tsv", &load_wordsim_tsv, py::arg("path"));
  m.def("load_phrase_tsv", &load_phrase_tsv, py::arg("path"));
  m.def("load_ml10_raw", &load_ml10_raw, py::arg("path"), py::arg("average_participants") = true);

  py::class_<EvalResult>(m, "EvalResult")
      .def_readonly("benchmark", &EvalResult::benchmark)
      .def_readonly("strategy", &EvalResult::strategy)
      .def_readonly("rho", &EvalResult::rho)
      .def_readonly("rho_defined", &EvalResult::rho_defined)
      .def_readonly("covered", &EvalResult::covered)
      .def_readonly("total", &EvalResult::total)
      .def_readonly("zero_norm_items", &EvalResult::zero_norm_items)
      .def_readonly("item_keys", &EvalResult::item_keys)
      .def_readonly("preds", &EvalResult::preds)
      .def_readonly("gold", &EvalResult::gold)
      .def_readonly("dropped", &EvalResult::dropped)
      .def("__repr__", [](const EvalResult& r) {
        return "EvalResult(" + r.benchmark + (r.strategy.empty() ? "" : ", " + r.strategy) +
               ", rho=" + (r.rho_defined ? std::to_string(r.rho) : "nan") + ", coverage=" +
               std::to_string(r.covered) + "/" + std::to_string(r.total) + ")";
      });

  m.def("eval_wordsim", &eval_wordsim, py::arg("checkpoint"), py::arg("items"),
        py::arg("name") = "wordsim");
  m.def("eval_composition",
        [](const Checkpoint& ck, const std::vector<PhrasePairItem>& items,
           const std::string& strategy, const std::string& name, const std::string& an,
           const std::string& vo, const std::string& nn) {
          const PhraseRelationMap relmap{an, vo, nn};
          return eval_composition(ck, items, strategy_from(strategy), relmap, name);
        },
        py::arg("checkpoint"), py::arg("items"), py::arg("strategy"),
        py::arg("name") = "phrases", py::arg("an_label") = "amod", py::arg("vo_label") = "dobj",
        py::arg("nn_label") = "nmod", "one result per phrase type present");

  py::class_<MrrResult>(m, "MrrResult")
      .def_readonly("mrr", &MrrResult::mrr)
      .def_readonly("hits1", &MrrResult::hits1)
      .def_readonly("hits3", &MrrResult::hits3)
      .def_readonly("hits10", &MrrResult::hits10)
      .def_readonly("evaluated", &MrrResult::evaluated);
  m.def("eval_mrr", &eval_mrr, py::arg("checkpoint"), py::arg("test"), py::arg("filter"),
        "filtered link-prediction ranking over the full vocabulary");

  py::class_<BootstrapResult>(m, "BootstrapResult")
      .def_readonly("p", &BootstrapResult::p)
      .def_readonly("delta", &BootstrapResult::delta)
      .def_readonly("skipped", &BootstrapResult::skipped)
      .def_readonly("replicates", &BootstrapResult::replicates);
  m.def("spearman", &spearman, py::arg("xs"), py::arg("ys"));
  m.def("bootstrap_compare", &bootstrap_compare, py::arg("preds_a"), py::arg("preds_b"),
        py::arg("gold"), py::arg("replicates") = 10000, py::arg("seed") = 1);
  m.def("holm_correct", &holm_correct, py::arg("pvalues"));
  m.def("aggregate_seeds", &aggregate_seeds, py::arg("rhos"), "(mean, standard error) over seeds");
  m.def("pca_project", &pca_project, py::arg("vectors"), py::arg("k") = 2);
  m.def("contextualise",
        [](const Checkpoint& ck, const std::vector<std::string>& words,
           const std::string& relation) {
          std::vector<uint32_t> ids;
          ids.reserve(words.size());
          for (const auto& w : words) ids.push_back(word_id_or_throw(ck, w));
          return contextualise_words(ck, ids, relation_id_or_throw(ck, relation));
        },
        py::arg("checkpoint"), py::arg("words"), py::arg("relation"),
        "head-side transform of each word under a relation");
}
