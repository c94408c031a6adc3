#include <cmath>
#include <set>
#include <unordered_map>

#include "doctest.h"
#include "syge/common.hpp"
#include "syge/config.hpp"
#include "syge/rng.hpp"
#include "syge/vocab.hpp"

using namespace syge;

TEST_CASE("generator matches the published splitmix64 sequence") {
  // reference outputs computed from the algorithm definition in big-int
  // arithmetic, not from this implementation
  Rng r0(0);
  CHECK(r0.next_u64() == 0xe220a8397b1dcdafull);
  CHECK(r0.next_u64() == 0x6e789e6aa1b965f4ull);
  CHECK(r0.next_u64() == 0x06c45d188009454full);
  CHECK(r0.next_u64() == 0xf88bb8a8724c81ecull);

  Rng r42(42);
  CHECK(r42.next_u64() == 0xbdd732262feb6e95ull);
  CHECK(r42.next_u64() == 0x28efe333b266f103ull);
  CHECK(r42.next_u64() == 0x47526757130f9f52ull);
}

TEST_CASE("same seed replays, different seeds diverge") {
  Rng a(7), b(7), c(8);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 100; ++i) {
    const uint64_t x = a.next_u64();
    all_equal = all_equal && x == b.next_u64();
    any_diff = any_diff || x != c.next_u64();
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("doubles land in [0,1) and uniform() respects its bounds") {
  Rng r(3);
  for (int i = 0; i < 10000; ++i) {
    const double d = r.next_double();
    CHECK(d >= 0.0);
    CHECK(d < 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform(-2.5, 3.5);
    CHECK(u >= -2.5);
    CHECK(u < 3.5);
  }
}

TEST_CASE("below(n) stays in range and covers every residue") {
  Rng r(11);
  std::set<uint64_t> seen;
  for (int i = 0; i < 5000; ++i) {
    const uint64_t v = r.below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("derived streams differ from the parent and from each other") {
  Rng base(5);
  Rng d1 = Rng::derive(5, 1);
  Rng d2 = Rng::derive(5, 2);
  const uint64_t a = base.next_u64(), b = d1.next_u64(), c = d2.next_u64();
  CHECK(a != b);
  CHECK(b != c);
  Rng again = Rng::derive(5, 1);
  Rng other_seed = Rng::derive(6, 1);
  CHECK(Rng::derive(5, 1).next_u64() == again.next_u64());
  CHECK(again.next_u64() != other_seed.next_u64());
}

TEST_CASE("fnv1a64 reference vectors and streaming equivalence") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("hello") == 0xa430d84680aabd0bull);
  const uint64_t part = fnv1a64("hello ");
  CHECK(fnv1a64("world", part) == fnv1a64("hello world"));
}

TEST_CASE("vocabulary sorts by count then surface and keeps ids dense") {
  std::unordered_map<std::string, uint64_t> counts{
      {"cat", 5}, {"dog", 5}, {"ant", 2}, {"bee", 9}, {"rare", 1}};
  const Vocab v = Vocab::build(counts, 2);
  REQUIRE(v.size() == 4);
  CHECK(v.word(0) == "bee");
  CHECK(v.word(1) == "cat");  // 5-count tie broken alphabetically
  CHECK(v.word(2) == "dog");
  CHECK(v.word(3) == "ant");
  CHECK(v.count(0) == 9);
  CHECK(v.lookup("rare") == std::nullopt);
  CHECK(v.lookup("dog") == uint32_t{2});
}

TEST_CASE("duplicate vocabulary insert is rejected") {
  Vocab v;
  v.push("x", 1);
  CHECK_THROWS_AS(v.push("x", 2), io_error);
}

TEST_CASE("relations interleave base and inverse ids") {
  const RelationVocab r = RelationVocab::build({"nsubj", "amod", "dobj"});
  REQUIRE(r.size() == 6);
  // sorted base labels at even ids, their inverses at the following odd id
  CHECK(r.label(0) == "amod");
  CHECK(r.label(1) == std::string("amod") + RelationVocab::kInverseSuffix);
  CHECK(r.label(2) == "dobj");
  CHECK(r.label(4) == "nsubj");
  for (uint32_t i = 0; i < r.size(); ++i) {
    CHECK(r.inverse_of(r.inverse_of(i)) == i);
    CHECK(r.inverse_of(i) != i);
  }
  CHECK(r.lookup("amod") == uint32_t{0});
  CHECK(r.lookup("amod_inv") == uint32_t{1});
}

TEST_CASE("an inverse map with a fixed point is rejected") {
  RelationVocab r;
  r.push("a");
  r.push("b");
  CHECK_THROWS(r.set_inverse_map({0, 1}));  // each id mapping to itself
  r.set_inverse_map({1, 0});
  CHECK(r.inverse_of(0) == 1);
}

TEST_CASE("per-model training defaults carry the tuned settings") {
  const TrainConfig dm = defaults_for(ModelKind::DM);
  CHECK(dm.min_count == 100);
  CHECK(dm.neg_per_pos == 20);
  CHECK(dm.epochs == 5);
  CHECK(dm.learning_rate == doctest::Approx(0.001));
  CHECK(dm.optimizer == Optimizer::Adam);
  CHECK(dm.loss_mode == LossMode::SGNS);
  CHECK(dm.neg_power == doctest::Approx(0.75));

  const TrainConfig mure = defaults_for(ModelKind::MuRE);
  CHECK(mure.min_count == 0);
  CHECK(mure.neg_per_pos == 40);
  CHECK(mure.epochs == 50);
  CHECK(mure.learning_rate == doctest::Approx(50.0));
  CHECK(mure.optimizer == Optimizer::SGD);
  CHECK(mure.loss_mode == LossMode::BernoulliNLL);

  const TrainConfig rote = defaults_for(ModelKind::RotE);
  CHECK(rote.neg_per_pos == 30);
  CHECK(rote.epochs == 15);
  CHECK(rote.loss_mode == LossMode::SoftmaxCE);
  const TrainConfig refe = defaults_for(ModelKind::RefE);
  CHECK(refe.neg_per_pos == 30);
  CHECK(refe.epochs == 15);
  const TrainConfig atte = defaults_for(ModelKind::AttE);
  CHECK(atte.neg_per_pos == 25);
  CHECK(atte.epochs == 10);
  CHECK(atte.learning_rate == doctest::Approx(50.0));
}

TEST_CASE("training config survives a json round trip") {
  TrainConfig c = defaults_for(ModelKind::AttE);
  c.dim = 64;
  c.seed = 99;
  c.threads = 4;
  c.full_ce = true;
  const TrainConfig back = train_config_from_json(to_json(c));
  CHECK(back.model == c.model);
  CHECK(back.dim == c.dim);
  CHECK(back.epochs == c.epochs);
  CHECK(back.neg_per_pos == c.neg_per_pos);
  CHECK(back.learning_rate == c.learning_rate);
  CHECK(back.optimizer == c.optimizer);
  CHECK(back.batch_size == c.batch_size);
  CHECK(back.min_count == c.min_count);
  CHECK(back.loss_mode == c.loss_mode);
  CHECK(back.seed == c.seed);
  CHECK(back.neg_power == c.neg_power);
  CHECK(back.threads == c.threads);
  CHECK(back.full_ce == c.full_ce);
}

TEST_CASE("invalid shapes are rejected up front") {
  TrainConfig c;
  c.dim = 301;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.dim = 300;
  c.epochs = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}
