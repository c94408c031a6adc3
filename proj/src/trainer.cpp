#include "syge/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "syge/geometry.hpp"

namespace syge {

double loss_sgns(double pos, const std::vector<double>& negs) {
  double loss = -log_sigmoid(pos);
  for (double nz : negs) loss -= log_sigmoid(-nz);
  return loss;
}

double loss_bernoulli(double pos, const std::vector<double>& negs) {
  // -log(1 - sigmoid(z)) computed as -log(sigmoid(-z)); value equals loss_sgns
  double loss = -log_sigmoid(pos);
  for (double nz : negs) loss -= log_sigmoid(-nz);
  return loss;
}

double loss_softmax_ce(double pos, const std::vector<double>& negs) {
  double m = pos;
  for (double nz : negs) m = std::max(m, nz);
  double z = std::exp(pos - m);
  for (double nz : negs) z += std::exp(nz - m);
  return -pos + m + std::log(z);
}

double loss_and_weights(LossMode mode, double pos, const std::vector<double>& negs, double& dpos,
                        std::vector<double>& dnegs) {
  dnegs.resize(negs.size());
  switch (mode) {
    case LossMode::SGNS:
    case LossMode::BernoulliNLL: {
      dpos = sigmoid(pos) - 1.0;
      for (size_t j = 0; j < negs.size(); ++j) dnegs[j] = sigmoid(negs[j]);
      return loss_sgns(pos, negs);
    }
    case LossMode::SoftmaxCE: {
      double m = pos;
      for (double nz : negs) m = std::max(m, nz);
      double z = std::exp(pos - m);
      for (double nz : negs) z += std::exp(nz - m);
      dpos = std::exp(pos - m) / z - 1.0;
      for (size_t j = 0; j < negs.size(); ++j) dnegs[j] = std::exp(negs[j] - m) / z;
      return -pos + m + std::log(z);
    }
  }
  throw std::logic_error("bad loss mode");
}

void sample_negative_tails(const Triple& tr, int k, const NegTable& table, Rng& rng,
                           std::vector<uint32_t>& out) {
  out.resize(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j) {
    uint32_t t = table.sample(rng);
    for (int attempt = 0; t == tr.t && attempt < 100; ++attempt) t = table.sample(rng);
    out[static_cast<size_t>(j)] = t;
  }
}

std::vector<Triple> sample_negatives(const Triple& tr, int k, const NegTable& table, Rng& rng) {
  std::vector<uint32_t> tails;
  sample_negative_tails(tr, k, table, rng, tails);
  std::vector<Triple> out(tails.size());
  for (size_t j = 0; j < tails.size(); ++j) out[j] = Triple{tr.h, tr.r, tails[j]};
  return out;
}

OptState::Row& OptState::row(ParamTable table, int64_t idx, size_t width) {
  const uint64_t key = (static_cast<uint64_t>(table) << 56) | static_cast<uint64_t>(idx);
  {
    std::shared_lock lock(mu_);
    auto it = rows_.find(key);
    if (it != rows_.end()) return it->second;
  }
  std::unique_lock lock(mu_);
  Row& r = rows_[key];
  if (r.m.empty()) {
    r.m.assign(width, 0.0f);
    r.v.assign(width, 0.0f);
  }
  return r;
}

namespace {

inline float load_param(const float& p, bool atomic) {
  if (atomic) return std::atomic_ref<const float>(p).load(std::memory_order_relaxed);
  return p;
}

inline void store_param(float& p, float val, bool atomic) {
  if (atomic)
    std::atomic_ref<float>(p).store(val, std::memory_order_relaxed);
  else
    p = val;
}

}  // namespace

void apply_step(ModelParams& params, const GradAccum<float>& grads, OptState& state, double lr,
                double scale, bool atomic) {
  for (size_t e = 0; e < grads.used; ++e) {
    const auto& entry = grads.entries[e];
    const size_t width = entry.g.size();
    bool finite = true;
    for (size_t i = 0; i < width; ++i) {
      if (!std::isfinite(entry.g[i])) {
        finite = false;
        break;
      }
    }
    if (!finite) {
      state.skipped_rows.fetch_add(1, std::memory_order_relaxed);
      continue;
    }
    float* p = params.row(entry.table, entry.row);

    if (state.kind == Optimizer::SGD) {
      for (size_t i = 0; i < width; ++i) {
        const double g = static_cast<double>(entry.g[i]) * scale;
        store_param(p[i], static_cast<float>(load_param(p[i], atomic) - lr * g), atomic);
      }
      continue;
    }

    OptState::Row& st = state.row(entry.table, entry.row, width);
    const uint32_t step = ++st.step;  // per-row step for bias correction
    const double b1c = 1.0 - std::pow(state.beta1, step);
    const double b2c = 1.0 - std::pow(state.beta2, step);
    for (size_t i = 0; i < width; ++i) {
      const double g = static_cast<double>(entry.g[i]) * scale;
      const double m = state.beta1 * load_param(st.m[i], atomic) + (1.0 - state.beta1) * g;
      const double v = state.beta2 * load_param(st.v[i], atomic) + (1.0 - state.beta2) * g * g;
      store_param(st.m[i], static_cast<float>(m), atomic);
      store_param(st.v[i], static_cast<float>(v), atomic);
      const double update = lr * (m / b1c) / (std::sqrt(v / b2c) + state.eps);
      store_param(p[i], static_cast<float>(load_param(p[i], atomic) - update), atomic);
    }
  }
}

namespace {

// processes order[begin, end) with its own rng/accumulator; returns loss sum
double run_range(ModelParams& params, const TripleDataset& ds, const TrainConfig& cfg,
                 const NegTable& table, const std::vector<uint32_t>& order, size_t begin,
                 size_t end, Rng rng, OptState& opt, bool atomic) {
  const int n = cfg.dim;
  const int64_t V = params.num_entities;
  HeadTransform<float> ht;
  GradAccum<float> accum;
  std::vector<double> dq, neg_scores, dnegs, all_scores;
  std::vector<uint32_t> neg_ids;
  double loss_sum = 0.0;
  size_t in_batch = 0;

  for (size_t idx = begin; idx < end; ++idx) {
    const Triple& pos = ds.triples[order[idx]];
    compute_head_transform(params, pos.h, pos.r, ht);
    const double pos_score = score_with_head(params, ht, pos.t);
    dq.assign(static_cast<size_t>(n), 0.0);

    if (cfg.full_ce) {
      // exact partition over the whole entity set
      all_scores.resize(static_cast<size_t>(V));
      double m = -1e300;
      for (int64_t t = 0; t < V; ++t) {
        all_scores[static_cast<size_t>(t)] = score_with_head(params, ht, static_cast<uint32_t>(t));
        m = std::max(m, all_scores[static_cast<size_t>(t)]);
      }
      double z = 0.0;
      for (int64_t t = 0; t < V; ++t) z += std::exp(all_scores[static_cast<size_t>(t)] - m);
      loss_sum += -pos_score + m + std::log(z);
      for (int64_t t = 0; t < V; ++t) {
        double d = std::exp(all_scores[static_cast<size_t>(t)] - m) / z;
        if (static_cast<uint32_t>(t) == pos.t) d -= 1.0;
        tail_backward(params, ht, static_cast<uint32_t>(t), d, dq, accum);
      }
    } else {
      sample_negative_tails(pos, cfg.neg_per_pos, table, rng, neg_ids);
      neg_scores.resize(neg_ids.size());
      for (size_t j = 0; j < neg_ids.size(); ++j)
        neg_scores[j] = score_with_head(params, ht, neg_ids[j]);
      double dpos = 0.0;
      loss_sum += loss_and_weights(cfg.loss_mode, pos_score, neg_scores, dpos, dnegs);
      tail_backward(params, ht, pos.t, dpos, dq, accum);
      for (size_t j = 0; j < neg_ids.size(); ++j)
        tail_backward(params, ht, neg_ids[j], dnegs[j], dq, accum);
    }
    head_backward(params, ht, dq, accum);

    ++in_batch;
    if (in_batch == static_cast<size_t>(cfg.batch_size) || idx + 1 == end) {
      apply_step(params, accum, opt, cfg.learning_rate, 1.0 / static_cast<double>(in_batch),
                 atomic);
      accum.clear();
      in_batch = 0;
    }
  }
  return loss_sum;
}

}  // namespace

std::pair<Checkpoint, TrainMetrics> train(const TripleDataset& ds, const TrainConfig& cfg) {
  cfg.validate();
  if (cfg.min_count != ds.min_count)
    throw io_error("config/dataset mismatch: config min_count=" + std::to_string(cfg.min_count) +
                   " but the dataset was built with min_count=" + std::to_string(ds.min_count));
  if (ds.triples.empty()) throw compute_error("training dataset has no triples");
  if (cfg.full_ce && cfg.loss_mode != LossMode::SoftmaxCE)
    throw std::invalid_argument("full_ce requires the softmax_ce loss mode");

  const auto V = static_cast<int64_t>(ds.vocab.size());
  const auto R = static_cast<int64_t>(ds.relations.size());
  Rng init_rng = Rng::derive(cfg.seed, 0);
  ModelParams params = init_params<float>(cfg.model, V, R, cfg.dim, init_rng, cfg.dm_identity_init);
  const NegTable table = build_neg_table(ds, cfg.neg_power);
  OptState opt(cfg.optimizer);

  const size_t N = ds.triples.size();
  std::vector<uint32_t> order(N);
  for (size_t i = 0; i < N; ++i) order[i] = static_cast<uint32_t>(i);

  TrainMetrics metrics;
  const auto t_start = std::chrono::steady_clock::now();

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto e_start = std::chrono::steady_clock::now();
    Rng shuffle_rng = Rng::derive(cfg.seed, 0x10000u + static_cast<uint64_t>(epoch));
    for (size_t i = N - 1; i > 0; --i) {
      const size_t j = shuffle_rng.below(i + 1);
      std::swap(order[i], order[j]);
    }

    double loss_sum = 0.0;
    const auto worker_rng = [&](int w) {
      return Rng::derive(cfg.seed,
                         (static_cast<uint64_t>(epoch) << 20) | static_cast<uint64_t>(w + 1));
    };
    if (cfg.threads == 1) {
      loss_sum = run_range(params, ds, cfg, table, order, 0, N, worker_rng(0), opt, false);
    } else {
      const int T = cfg.threads;
      std::vector<double> partial(static_cast<size_t>(T), 0.0);
      std::vector<std::thread> pool;
      for (int w = 0; w < T; ++w) {
        const size_t a = N * static_cast<size_t>(w) / static_cast<size_t>(T);
        const size_t b = N * static_cast<size_t>(w + 1) / static_cast<size_t>(T);
        pool.emplace_back([&, w, a, b]() {
          partial[static_cast<size_t>(w)] =
              run_range(params, ds, cfg, table, order, a, b, worker_rng(w), opt, true);
        });
      }
      for (auto& th : pool) th.join();
      for (double x : partial) loss_sum += x;
    }

    const double epoch_loss = loss_sum / static_cast<double>(N);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - e_start).count();
    metrics.epoch_loss.push_back(epoch_loss);
    metrics.triples_per_sec = secs > 0 ? static_cast<double>(N) / secs : 0.0;
    if (cfg.progress)
      std::fprintf(stderr, "epoch=%d loss=%.6f tps=%.1f\n", epoch, epoch_loss,
                   metrics.triples_per_sec);
    if (!std::isfinite(epoch_loss))
      throw compute_error("training diverged: non-finite mean loss " +
                          std::to_string(epoch_loss) + " at epoch " + std::to_string(epoch) +
                          " (model " + to_string(cfg.model) + ", lr " +
                          std::to_string(cfg.learning_rate) + ")");
  }

  metrics.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  metrics.skipped_updates = opt.skipped_rows.load();
  if (metrics.skipped_updates > 0)
    std::fprintf(stderr, "warning: skipped %llu row updates with non-finite gradients\n",
                 static_cast<unsigned long long>(metrics.skipped_updates));

  Checkpoint ck;
  ck.vocab = ds.vocab;
  ck.relations = ds.relations;
  ck.params = std::move(params);
  ck.train_config = cfg;
  return {std::move(ck), std::move(metrics)};
}

}  // namespace syge
