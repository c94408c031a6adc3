#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "syge/eval.hpp"
#include "syge/model.hpp"
#include "syge/rng.hpp"

#if __has_include(<Eigen/Dense>)
#include <Eigen/Dense>
#define HAVE_EIGEN_ORACLE 1
#endif

using namespace syge;

namespace {

std::string tmp_path(const std::string& stem) {
  static int counter = 0;
  return "/tmp/syge_eval_" + std::to_string(getpid()) + "_" + std::to_string(counter++) + "_" +
         stem;
}

void write_tmp(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  REQUIRE(f.good());
}

ModelParams blank_params(ModelKind k, int64_t entities, int64_t relations, int dim) {
  ModelParams p;
  p.kind = k;
  p.dim = dim;
  p.num_entities = entities;
  p.num_relations = relations;
  for (ParamTable t : kAllTables)
    p.table(t).assign(static_cast<size_t>(p.row_width(t) * p.row_count(t)), 0.0f);
  p.validate_shapes();
  return p;
}

Checkpoint make_ck(ModelKind k, const std::vector<std::string>& words,
                   const std::vector<std::string>& base_rels, int dim) {
  Checkpoint ck;
  for (const auto& w : words) ck.vocab.push(w, 10);
  ck.relations = RelationVocab::build(base_rels);
  ck.params = blank_params(k, static_cast<int64_t>(words.size()),
                           static_cast<int64_t>(ck.relations.size()), dim);
  return ck;
}

// distance-model fixture: unit diagonal, zero offsets, so the score collapses
// to negative squared distance between entity embeddings
Checkpoint line_world() {
  Checkpoint ck = make_ck(ModelKind::MuRE, {"e0", "e1", "e2", "e3"}, {"next"}, 2);
  std::fill(ck.params.table(ParamTable::RelDiag).begin(),
            ck.params.table(ParamTable::RelDiag).end(), 1.0f);
  for (int64_t i = 0; i < 4; ++i) ck.params.row(ParamTable::Emb, i)[0] = static_cast<float>(i);
  return ck;
}

}  // namespace

// rank correlation ------------------------------------------------------

TEST_CASE("rank correlation hits the closed-form values") {
  CHECK(spearman({1, 2, 3, 4, 5}, {10, 20, 30, 40, 50}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4, 5}, {50, 40, 30, 20, 10}) == doctest::Approx(-1.0));
  // rank permutation (2,1,4,3,5): 1 - 6*4 / (5*24)
  CHECK(spearman({1, 2, 3, 4, 5}, {20, 10, 40, 30, 50}) == doctest::Approx(0.8));
  // tie in xs shares the mean rank; value is 3/sqrt(10)
  CHECK(spearman({1, 2, 2, 4}, {1, 3, 2, 4}) == doctest::Approx(0.9486832980505138));
}

TEST_CASE("rank correlation ignores monotone rescaling") {
  const std::vector<double> xs = {0.3, -1.2, 2.5, 0.9, 1.1, -0.4};
  const std::vector<double> ys = {1.0, 0.2, 5.0, 2.0, 3.5, 0.7};
  const double base = spearman(xs, ys);
  std::vector<double> warped(ys.size());
  for (size_t i = 0; i < ys.size(); ++i) warped[i] = std::exp(3.0 * ys[i]) - 7.0;
  CHECK(spearman(xs, warped) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("rank correlation degenerates and refuses as documented") {
  CHECK(std::isnan(spearman({1, 2, 3}, {5, 5, 5})));
  CHECK(std::isnan(spearman({7, 7, 7}, {1, 2, 3})));
  CHECK_THROWS_AS(spearman({1.0}, {2.0}), std::invalid_argument);
  CHECK_THROWS_AS(spearman({1, 2}, {1, 2, 3}), std::invalid_argument);
}

// word similarity -------------------------------------------------------

TEST_CASE("word similarity ranks cosine against gold ratings") {
  Checkpoint ck = make_ck(ModelKind::MuRE, {"apple", "banana", "cherry", "durian"}, {"amod"}, 4);
  auto set_row = [&](int64_t i, float a, float b) {
    ck.params.row(ParamTable::Emb, i)[0] = a;
    ck.params.row(ParamTable::Emb, i)[1] = b;
  };
  set_row(0, 1.0f, 0.0f);
  set_row(1, 2.0f, 0.0f);   // cos(apple, banana) = 1
  set_row(2, 0.0f, 1.0f);   // cos(apple, cherry) = 0
  set_row(3, -1.0f, 0.0f);  // cos(apple, durian) = -1

  const std::vector<WordPairItem> items = {{"apple", "banana", 5.0},
                                           {"apple", "cherry", 3.0},
                                           {"apple", "durian", 1.0},
                                           {"apple", "zzz", 2.0}};
  const EvalResult res = eval_wordsim(ck, items, "toy");
  CHECK(res.benchmark == "toy");
  CHECK(res.total == 4);
  CHECK(res.covered == 3);
  CHECK(res.dropped == std::vector<std::string>{"apple|zzz"});
  CHECK(res.item_keys[0] == "apple|banana");
  CHECK(res.preds[0] == doctest::Approx(1.0));
  CHECK(res.preds[1] == doctest::Approx(0.0));
  CHECK(res.preds[2] == doctest::Approx(-1.0));
  CHECK(res.rho_defined);
  CHECK(res.rho == doctest::Approx(1.0));
  CHECK(res.zero_norm_items == 0);
}

TEST_CASE("word similarity counts zero-norm vectors and flags undefined rho") {
  Checkpoint ck = make_ck(ModelKind::MuRE, {"a", "b", "z"}, {"amod"}, 2);
  ck.params.row(ParamTable::Emb, 0)[0] = 1.0f;
  ck.params.row(ParamTable::Emb, 1)[0] = 1.0f;
  // "z" stays the zero vector
  const std::vector<WordPairItem> items = {{"a", "z", 4.0}, {"b", "z", 2.0}};
  const EvalResult res = eval_wordsim(ck, items, "zeros");
  CHECK(res.zero_norm_items == 2);
  CHECK_FALSE(res.rho_defined);  // both predictions are 0: no rank variance
}

TEST_CASE("word similarity needs two covered pairs") {
  Checkpoint ck = make_ck(ModelKind::MuRE, {"a", "b"}, {"amod"}, 2);
  const std::vector<WordPairItem> items = {{"a", "b", 1.0}, {"a", "qq", 2.0}};
  CHECK_THROWS_AS(eval_wordsim(ck, items, "thin"), compute_error);
}

// phrase composition ----------------------------------------------------

TEST_CASE("composition evaluation groups by phrase type in a fixed order") {
  Checkpoint ck = make_ck(ModelKind::MuRE, {"red", "car", "van", "eat", "pie", "cake"},
                          {"amod", "dobj", "nmod"}, 2);
  std::fill(ck.params.table(ParamTable::RelDiag).begin(),
            ck.params.table(ParamTable::RelDiag).end(), 1.0f);
  Rng rng(99);
  for (float& v : ck.params.table(ParamTable::Emb)) v = static_cast<float>(rng.uniform(-1.0, 1.0));

  std::vector<PhrasePairItem> items;
  items.push_back({PhraseType::VO, "eat", "pie", "eat", "cake", 4.0});
  items.push_back({PhraseType::AN, "car", "red", "van", "red", 5.0});
  items.push_back({PhraseType::AN, "car", "red", "car", "red", 6.0});
  items.push_back({PhraseType::VO, "eat", "pie", "eat", "pie", 6.0});

  const auto results = eval_composition(ck, items, ComposeStrategy::Add, PhraseRelationMap{}, "ml");
  REQUIRE(results.size() == 2);
  CHECK(results[0].benchmark == "ml:AN");
  CHECK(results[1].benchmark == "ml:VO");
  CHECK(results[0].strategy == "add");
  CHECK(results[0].covered == 2);
  CHECK(results[0].item_keys[0] == "car+red|van+red");
  // the identical-phrase pair has cosine exactly 1, the highest prediction,
  // and it carries the highest rating in both groups
  CHECK(results[0].preds[1] == doctest::Approx(1.0));
  CHECK(results[0].rho == doctest::Approx(1.0));
  CHECK(results[1].preds[1] == doctest::Approx(1.0));
}

TEST_CASE("composition evaluation requires the relation label in the model") {
  Checkpoint ck = make_ck(ModelKind::MuRE, {"red", "car"}, {"amod"}, 2);
  std::vector<PhrasePairItem> items = {{PhraseType::VO, "red", "car", "red", "car", 1.0},
                                       {PhraseType::VO, "car", "red", "car", "red", 2.0}};
  CHECK_THROWS_AS(
      eval_composition(ck, items, ComposeStrategy::Add, PhraseRelationMap{}, "x"),
      compute_error);  // dobj missing
}

TEST_CASE("composition evaluation drops OOV phrases and enforces coverage") {
  Checkpoint ck = make_ck(ModelKind::MuRE, {"red", "car", "van"}, {"amod"}, 2);
  ck.params.row(ParamTable::Emb, 0)[0] = 1.0f;
  ck.params.row(ParamTable::Emb, 1)[1] = 1.0f;
  ck.params.row(ParamTable::Emb, 2)[0] = 0.5f;
  std::fill(ck.params.table(ParamTable::RelDiag).begin(),
            ck.params.table(ParamTable::RelDiag).end(), 1.0f);

  std::vector<PhrasePairItem> items = {{PhraseType::AN, "car", "red", "van", "red", 3.0},
                                       {PhraseType::AN, "car", "red", "car", "red", 5.0},
                                       {PhraseType::AN, "car", "red", "bus", "red", 1.0}};
  const auto results =
      eval_composition(ck, items, ComposeStrategy::SynRh, PhraseRelationMap{}, "ml");
  REQUIRE(results.size() == 1);
  CHECK(results[0].covered == 2);
  CHECK(results[0].total == 3);
  CHECK(results[0].dropped == std::vector<std::string>{"car+red|bus+red"});

  items.erase(items.begin() + 1);  // only one in-vocabulary item left
  CHECK_THROWS_AS(eval_composition(ck, items, ComposeStrategy::SynRh, PhraseRelationMap{}, "ml"),
                  compute_error);
}

// ranking ---------------------------------------------------------------

TEST_CASE("tail ranking on a line of entities") {
  const Checkpoint ck = line_world();
  const std::vector<Triple> test = {{0, 0, 1}};

  SUBCASE("unfiltered: the head itself outscores the true tail") {
    const MrrResult r = eval_mrr(ck, test, {});
    CHECK(r.mrr == doctest::Approx(0.5));
    CHECK(r.hits1 == doctest::Approx(0.0));
    CHECK(r.hits3 == doctest::Approx(1.0));
    CHECK(r.hits10 == doctest::Approx(1.0));
    CHECK(r.evaluated == 1);
  }

  SUBCASE("filtering the better-scoring known tail yields rank one") {
    const MrrResult r = eval_mrr(ck, test, {{0, 0, 0}});
    CHECK(r.mrr == doctest::Approx(1.0));
    CHECK(r.hits1 == doctest::Approx(1.0));
  }

  SUBCASE("the true tail is never filtered out of its own query") {
    const MrrResult r = eval_mrr(ck, test, {{0, 0, 0}, {0, 0, 1}});
    CHECK(r.mrr == doctest::Approx(1.0));
  }

  SUBCASE("score ties rank pessimistically") {
    Checkpoint tied = line_world();
    // duplicate the true tail's position: the copy counts as ranked ahead
    tied.params.row(ParamTable::Emb, 2)[0] = 1.0f;
    const MrrResult r = eval_mrr(tied, test, {{0, 0, 0}});
    CHECK(r.mrr == doctest::Approx(0.5));
  }

  SUBCASE("empty test set is refused") {
    CHECK_THROWS_AS(eval_mrr(ck, {}, {}), std::invalid_argument);
  }
}

TEST_CASE("tail ranking agrees with a brute-force re-rank") {
  Checkpoint ck;
  for (int i = 0; i < 20; ++i) ck.vocab.push("w" + std::to_string(i), 5);
  ck.relations = RelationVocab::build({"r1", "r2"});
  Rng rng(0xabcdef);
  ck.params = init_params<float>(ModelKind::RotE, 20, 4, 8, rng);

  Rng pick(7);
  std::vector<Triple> test, filter;
  for (int i = 0; i < 30; ++i)
    test.push_back({static_cast<uint32_t>(pick.below(20)), static_cast<uint32_t>(pick.below(4)),
                    static_cast<uint32_t>(pick.below(20))});
  for (int i = 0; i < 15; ++i)
    filter.push_back({static_cast<uint32_t>(pick.below(20)), static_cast<uint32_t>(pick.below(4)),
                      static_cast<uint32_t>(pick.below(20))});

  std::set<uint64_t> known;
  for (const Triple& tr : filter)
    known.insert((static_cast<uint64_t>(tr.h) << 40) | (static_cast<uint64_t>(tr.r) << 32) | tr.t);

  double expect = 0.0;
  for (const Triple& tr : test) {
    const double s_true = score(ck.params, tr);
    uint64_t ahead = 0;
    for (uint32_t v = 0; v < 20; ++v) {
      if (v == tr.t) continue;
      if (known.count((static_cast<uint64_t>(tr.h) << 40) | (static_cast<uint64_t>(tr.r) << 32) |
                      v))
        continue;
      if (score(ck.params, {tr.h, tr.r, v}) >= s_true) ++ahead;
    }
    expect += 1.0 / static_cast<double>(1 + ahead);
  }
  expect /= static_cast<double>(test.size());

  const MrrResult r = eval_mrr(ck, test, filter);
  CHECK(r.mrr == doctest::Approx(expect).epsilon(1e-12));
  CHECK(r.evaluated == test.size());
}

TEST_CASE("filtering known tails never lowers the ranking metric") {
  Checkpoint ck;
  for (int i = 0; i < 12; ++i) ck.vocab.push("w" + std::to_string(i), 5);
  ck.relations = RelationVocab::build({"r"});
  Rng rng(31337);
  ck.params = init_params<float>(ModelKind::MuRE, 12, 2, 6, rng);

  Rng pick(11);
  std::vector<Triple> test, filter;
  for (int i = 0; i < 25; ++i)
    test.push_back({static_cast<uint32_t>(pick.below(12)), static_cast<uint32_t>(pick.below(2)),
                    static_cast<uint32_t>(pick.below(12))});
  for (int i = 0; i < 20; ++i)
    filter.push_back({static_cast<uint32_t>(pick.below(12)), static_cast<uint32_t>(pick.below(2)),
                      static_cast<uint32_t>(pick.below(12))});

  const MrrResult raw = eval_mrr(ck, test, {});
  const MrrResult filtered = eval_mrr(ck, test, filter);
  CHECK(filtered.mrr >= raw.mrr - 1e-15);
  CHECK(filtered.hits10 >= raw.hits10 - 1e-15);
}

// significance ----------------------------------------------------------

TEST_CASE("bootstrap on identical predictions reports no difference") {
  std::vector<double> gold, preds;
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    gold.push_back(static_cast<double>(i));
    preds.push_back(rng.uniform(-1.0, 1.0));
  }
  const BootstrapResult r = bootstrap_compare(preds, preds, gold, 1000, 42);
  CHECK(r.p == doctest::Approx(1.0));
  CHECK(r.delta == 0.0);
  CHECK(r.replicates == 1000);
}

TEST_CASE("bootstrap separates an informative ranker from an inverted one") {
  std::vector<double> gold, good, bad;
  Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    const double g = static_cast<double>(i);
    gold.push_back(g);
    good.push_back(g + rng.uniform(-0.3, 0.3));
    bad.push_back(-g + rng.uniform(-0.3, 0.3));
  }
  const BootstrapResult r = bootstrap_compare(good, bad, gold, 2000, 7);
  CHECK(r.delta > 1.5);
  CHECK(r.p < 0.01);
  CHECK(r.replicates == 2000);

  const BootstrapResult again = bootstrap_compare(good, bad, gold, 2000, 7);
  CHECK(again.p == r.p);  // same seed, same replicate stream
  CHECK(again.delta == r.delta);
}

TEST_CASE("bootstrap input validation") {
  const std::vector<double> g = {1, 2, 3, 4};
  const std::vector<double> a = {0.1, 0.4, 0.2, 0.9};
  CHECK_THROWS_AS(bootstrap_compare(a, a, g, 999, 1), std::invalid_argument);
  CHECK_THROWS_AS(bootstrap_compare({1, 2, 3}, a, g, 1000, 1), std::invalid_argument);
  const std::vector<double> flat = {2, 2, 2, 2};
  CHECK_THROWS_AS(bootstrap_compare(flat, a, g, 1000, 1), compute_error);
}

TEST_CASE("step-down adjustment matches the worked example") {
  const auto adj = holm_correct({0.01, 0.04});
  CHECK(adj[0] == doctest::Approx(0.02));
  CHECK(adj[1] == doctest::Approx(0.04));

  // original order is preserved regardless of sortedness
  const auto rev = holm_correct({0.04, 0.01});
  CHECK(rev[0] == doctest::Approx(0.04));
  CHECK(rev[1] == doctest::Approx(0.02));

  CHECK(holm_correct({0.3})[0] == doctest::Approx(0.3));
  const auto clipped = holm_correct({0.6, 0.9});
  CHECK(clipped[0] == doctest::Approx(1.0));
  CHECK(clipped[1] == doctest::Approx(1.0));
  CHECK(holm_correct({}).empty());
  CHECK_THROWS_AS(holm_correct({0.5, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(holm_correct({1.5}), std::invalid_argument);
}

TEST_CASE("step-down adjustment never shrinks a p-value") {
  Rng rng(23);
  std::vector<double> ps;
  for (int i = 0; i < 12; ++i) ps.push_back(rng.next_double());
  const auto adj = holm_correct(ps);
  for (size_t i = 0; i < ps.size(); ++i) {
    CHECK(adj[i] >= ps[i] - 1e-15);
    CHECK(adj[i] <= 1.0);
  }
}

TEST_CASE("seed aggregation uses the sample standard error") {
  const auto [mean, se] = aggregate_seeds({0.3, 0.4, 0.5});
  CHECK(mean == doctest::Approx(0.4));
  CHECK(se == doctest::Approx(0.05773502691896258).epsilon(1e-9));

  const auto [m1, se1] = aggregate_seeds({0.7});
  CHECK(m1 == doctest::Approx(0.7));
  CHECK(std::isnan(se1));
  CHECK_THROWS_AS(aggregate_seeds({}), std::invalid_argument);
}

// projection ------------------------------------------------------------

TEST_CASE("projection of collinear points recovers positions on the line") {
  std::vector<std::vector<double>> pts;
  for (int i = 0; i < 10; ++i)
    pts.push_back({i * 1.0 / 3.0, i * 2.0 / 3.0, i * 2.0 / 3.0});  // unit step along (1,2,2)/3

  const auto coords = pca_project(pts, 2);
  REQUIRE(coords.size() == 10);
  // first loading of the direction is positive, so positions come out ordered
  for (int i = 0; i < 10; ++i) {
    CHECK(coords[size_t(i)][0] == doctest::Approx(i - 4.5).epsilon(1e-9));
    CHECK(std::abs(coords[size_t(i)][1]) < 1e-9);  // rank one: no second direction
  }

  double mean0 = 0;
  for (const auto& c : coords) mean0 += c[0];
  CHECK(std::abs(mean0 / 10.0) < 1e-12);
}

TEST_CASE("projection is translation invariant and deterministic") {
  Rng rng(404);
  std::vector<std::vector<double>> pts(20, std::vector<double>(5));
  for (auto& v : pts)
    for (double& x : v) x = rng.uniform(-2.0, 2.0);

  const auto base = pca_project(pts, 2);
  const auto repeat = pca_project(pts, 2);
  CHECK(base == repeat);

  auto shifted = pts;
  for (auto& v : shifted) {
    v[0] += 10.0;
    v[3] -= 4.0;
  }
  const auto moved = pca_project(shifted, 2);
  for (size_t i = 0; i < base.size(); ++i)
    for (int c = 0; c < 2; ++c)
      CHECK(moved[i][size_t(c)] == doctest::Approx(base[i][size_t(c)]).epsilon(1e-7));
}

TEST_CASE("projection input validation") {
  CHECK_THROWS_AS(pca_project({{1, 2}, {3, 4}}, 2), std::invalid_argument);  // m < k+1
  CHECK_THROWS_AS(pca_project({{1, 2}, {3}, {4, 5}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(pca_project({{}, {}, {}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(pca_project({{1, 2}, {3, 4}, {5, 6}}, 0), std::invalid_argument);
  CHECK_THROWS_AS(pca_project({{1, 1}, {1, 1}, {1, 1}}, 2), compute_error);  // no variance
}

#ifdef HAVE_EIGEN_ORACLE
TEST_CASE("projection agrees with a dense eigensolver") {
  const size_t m = 50, n = 10;
  Rng rng(2024);
  std::vector<std::vector<double>> pts(m, std::vector<double>(n));
  for (auto& v : pts)
    for (double& x : v) x = rng.uniform(-1.0, 1.0) + rng.uniform(-1.0, 1.0);

  const auto coords = pca_project(pts, 2);

  Eigen::MatrixXd X(m, n);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < n; ++j) X(long(i), long(j)) = pts[i][j];
  const Eigen::RowVectorXd mu = X.colwise().mean();
  X.rowwise() -= mu;
  const Eigen::MatrixXd C = (X.transpose() * X) / double(m - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  REQUIRE(es.info() == Eigen::Success);

  for (int comp = 0; comp < 2; ++comp) {
    const Eigen::VectorXd v = es.eigenvectors().col(long(n) - 1 - comp);  // ascending order
    const Eigen::VectorXd proj = X * v;
    // fix the sign by aligning with the power-iteration output
    double dot = 0;
    for (size_t i = 0; i < m; ++i) dot += proj(long(i)) * coords[i][size_t(comp)];
    const double sign = dot >= 0 ? 1.0 : -1.0;
    for (size_t i = 0; i < m; ++i)
      CHECK(coords[i][size_t(comp)] == doctest::Approx(sign * proj(long(i))).epsilon(1e-6));
  }
}
#endif

// relation-contextualised vectors ---------------------------------------

TEST_CASE("contextualised vectors follow each model's head transform") {
  SUBCASE("rotation by a quarter turn") {
    Checkpoint ck = make_ck(ModelKind::RotE, {"w"}, {"amod"}, 2);
    ck.params.table(ParamTable::RotAngles) = {static_cast<float>(M_PI / 2), 0.0f};
    ck.params.row(ParamTable::Emb, 0)[0] = 1.0f;
    const auto out = contextualise_words(ck, {0}, 0);
    REQUIRE(out.size() == 1);
    CHECK(out[0][0] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(out[0][1] == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("reflection at angle zero flips the odd coordinate") {
    Checkpoint ck = make_ck(ModelKind::RefE, {"w"}, {"amod"}, 2);
    ck.params.row(ParamTable::Emb, 0)[0] = 1.0f;
    ck.params.row(ParamTable::Emb, 0)[1] = 1.0f;
    const auto out = contextualise_words(ck, {0}, 0);
    CHECK(out[0][0] == doctest::Approx(1.0));
    CHECK(out[0][1] == doctest::Approx(-1.0));
  }

  SUBCASE("diagonal scaling") {
    Checkpoint ck = make_ck(ModelKind::MuRE, {"w"}, {"amod"}, 2);
    ck.params.table(ParamTable::RelDiag) = {2.0f, 3.0f, 1.0f, 1.0f};
    ck.params.row(ParamTable::Emb, 0)[0] = 1.0f;
    ck.params.row(ParamTable::Emb, 0)[1] = -1.0f;
    const auto out = contextualise_words(ck, {0}, 0);
    CHECK(out[0][0] == doctest::Approx(2.0));
    CHECK(out[0][1] == doctest::Approx(-3.0));
  }

  SUBCASE("bilinear model maps the context embedding through the matrix") {
    Checkpoint ck = make_ck(ModelKind::DM, {"w"}, {"amod"}, 2);
    float* W = ck.params.row(ParamTable::RelMatrix, 0);
    W[0] = 1.0f;
    W[3] = 1.0f;  // identity
    ck.params.row(ParamTable::CtxEmb, 0)[0] = 3.0f;
    ck.params.row(ParamTable::CtxEmb, 0)[1] = 4.0f;
    const auto out = contextualise_words(ck, {0}, 0);
    CHECK(out[0][0] == doctest::Approx(3.0));
    CHECK(out[0][1] == doctest::Approx(4.0));
  }

  SUBCASE("ids outside the tables are rejected") {
    Checkpoint ck = make_ck(ModelKind::MuRE, {"w"}, {"amod"}, 2);
    CHECK_THROWS_AS(contextualise_words(ck, {1}, 0), std::out_of_range);
    CHECK_THROWS_AS(contextualise_words(ck, {0}, 2), std::out_of_range);
  }
}

// benchmark file loaders ------------------------------------------------

TEST_CASE("word pair files tolerate one header and reject later damage") {
  const std::string path = tmp_path("ws.tsv");
  write_tmp(path,
            "Word 1\tWord 2\tHuman (mean)\n"
            "Tiger\tCat\t7.35\n"
            "# a comment line\n"
            "book\tpaper\t5.5\n");
  const auto items = load_wordsim_tsv(path);
  REQUIRE(items.size() == 2);
  CHECK(items[0].word1 == "tiger");  // lowercased
  CHECK(items[0].word2 == "cat");
  CHECK(items[0].rating == doctest::Approx(7.35));
  CHECK(items[1].word1 == "book");

  const std::string bad = tmp_path("ws_bad.tsv");
  write_tmp(bad, "a\tb\t1.0\nc\td\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(load_wordsim_tsv(bad)),
                       doctest::Contains("malformed line 2"), io_error);
}

TEST_CASE("phrase pair files accept both the six and five column layouts") {
  const std::string six = tmp_path("ph6.tsv");
  write_tmp(six, "AN\told\thouse\tnew\thome\t4.25\nVO\tEat\tPie\tBake\tCake\t2.0\n");
  const auto a = load_phrase_tsv(six);
  REQUIRE(a.size() == 2);
  CHECK(a[0].type == PhraseType::AN);
  CHECK(a[0].root1 == "old");
  CHECK(a[0].dep1 == "house");
  CHECK(a[0].root2 == "new");
  CHECK(a[0].dep2 == "home");
  CHECK(a[1].root1 == "eat");  // lowercased

  const std::string five = tmp_path("ph5.tsv");
  write_tmp(five, "an\told\thouse\tnew/home\t4.25\n");
  const auto b = load_phrase_tsv(five);
  REQUIRE(b.size() == 1);
  CHECK(b[0].root2 == "new");
  CHECK(b[0].dep2 == "home");
  CHECK(b[0].rating == doctest::Approx(4.25));

  const std::string bad = tmp_path("ph_bad.tsv");
  write_tmp(bad, "AN\ta\tb\tc\td\t1.0\nXX\ta\tb\tc\td\t1.0\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(load_phrase_tsv(bad)),
                       doctest::Contains("malformed line 2"), io_error);
}

TEST_CASE("participant-rating files collapse to one item per phrase pair") {
  // layout with a group column; AN surface order is adjective-first, so the
  // noun lands in the root slot
  const std::string path = tmp_path("ml10.txt");
  write_tmp(path,
            "participant group type word1 word2 word3 word4 rating\n"
            "p1 g1 adjectivenouns old house new home 5\n"
            "p2 g1 adjectivenouns old house new home 3\n"
            "p1 g1 verbobjects eat pie bake cake 2\n"
            "p2 g1 verbobjects eat pie bake cake 4\n");
  const auto items = load_ml10_raw(path);
  REQUIRE(items.size() == 2);
  CHECK(items[0].type == PhraseType::AN);
  CHECK(items[0].root1 == "house");
  CHECK(items[0].dep1 == "old");
  CHECK(items[0].root2 == "home");
  CHECK(items[0].dep2 == "new");
  CHECK(items[0].rating == doctest::Approx(4.0));  // mean of 5 and 3
  CHECK(items[1].type == PhraseType::VO);
  CHECK(items[1].root1 == "eat");  // verb is the root
  CHECK(items[1].dep1 == "pie");
  CHECK(items[1].rating == doctest::Approx(3.0));

  const auto raw = load_ml10_raw(path, false);
  CHECK(raw.size() == 4);
  CHECK(raw[0].rating == doctest::Approx(5.0));
}

TEST_CASE("participant-rating files work without the group column") {
  const std::string path = tmp_path("ml10_nogroup.txt");
  write_tmp(path,
            "p1 compoundnouns phone call office door 6\n"
            "p2 compoundnouns phone call office door 2\n");
  const auto items = load_ml10_raw(path);
  REQUIRE(items.size() == 1);
  CHECK(items[0].type == PhraseType::NN);
  CHECK(items[0].root1 == "call");  // head noun is the root
  CHECK(items[0].dep1 == "phone");
  CHECK(items[0].root2 == "door");
  CHECK(items[0].dep2 == "office");
  CHECK(items[0].rating == doctest::Approx(4.0));
}

// report files ----------------------------------------------------------

TEST_CASE("report rows serialize rho and coverage faithfully") {
  const std::string path = tmp_path("report.csv");
  std::vector<ReportRow> rows;
  rows.push_back({"ws353", "", 3, 0.625, true, 300, 353});
  rows.push_back({"ml:AN", "syn-rh", 4, 0.0, false, 60, 72});
  write_report_csv(path, rows);

  std::ifstream f(path);
  std::string l0, l1, l2;
  std::getline(f, l0);
  std::getline(f, l1);
  std::getline(f, l2);
  CHECK(l0 == "benchmark,strategy,seed,rho,coverage");
  CHECK(l1 == "ws353,-,3,0.625,300/353");
  CHECK(l2 == "ml:AN,syn-rh,4,nan,60/72");
}

TEST_CASE("summary entries map undefined statistics to null") {
  const std::string path = tmp_path("summary.json");
  SummaryEntry e;
  e.benchmark = "ws353";
  e.strategy = "add";
  e.per_seed_rho = {0.5, std::nan("")};
  e.mean = 0.5;
  e.se = std::nan("");
  e.covered = 10;
  e.total = 12;
  write_summary_json(path, {e});

  std::ifstream f(path);
  const nlohmann::json j = nlohmann::json::parse(f);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 1);
  CHECK(j[0]["benchmark"] == "ws353");
  CHECK(j[0]["per_seed_rho"][0] == doctest::Approx(0.5));
  CHECK(j[0]["per_seed_rho"][1].is_null());
  CHECK(j[0]["mean"] == doctest::Approx(0.5));
  CHECK(j[0]["se"].is_null());
  CHECK(j[0]["covered"] == 10);
}

TEST_CASE("prediction files round trip") {
  EvalResult res;
  res.benchmark = "toy:AN";
  res.item_keys = {"a+b|c+d", "e+f|g+h"};
  res.gold = {1.5, 2.5};
  res.preds = {0.125, -0.75};
  const std::string path = tmp_path("preds.csv");
  write_predictions_csv(path, res);

  const PredictionFile back = read_predictions_csv(path);
  CHECK(back.item_keys == res.item_keys);
  CHECK(back.groups == std::vector<std::string>{"toy:AN", "toy:AN"});
  CHECK(back.gold == res.gold);
  CHECK(back.preds == res.preds);

  const std::string bad = tmp_path("notpreds.csv");
  write_tmp(bad, "foo,bar\n1,2\n");
  CHECK_THROWS_WITH_AS(static_cast<void>(read_predictions_csv(bad)),
                       doctest::Contains("not a prediction file"), io_error);
}

TEST_CASE("projection files require two coordinates per point") {
  const std::string path = tmp_path("pca.csv");
  write_pca_csv(path, {"cat", "dog"}, {"amod", "-"}, {{1.0, 2.0}, {-0.5, 0.25}});
  std::ifstream f(path);
  std::string l0, l1;
  std::getline(f, l0);
  std::getline(f, l1);
  CHECK(l0 == "label,group,x,y");
  CHECK(l1 == "cat,amod,1,2");
  CHECK_THROWS_AS(write_pca_csv(tmp_path("pca_bad.csv"), {"x"}, {"g"}, {{1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(write_pca_csv(tmp_path("pca_bad2.csv"), {"x", "y"}, {"g"}, {{1.0, 2.0}}),
                  std::invalid_argument);
}
