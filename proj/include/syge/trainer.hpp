#pragma once
#include <atomic>
#include <cstdint>
#include <shared_mutex>
#include <unordered_map>
#include <utility>
#include <vector>

#include "syge/checkpoint.hpp"
#include "syge/config.hpp"
#include "syge/ingest.hpp"
#include "syge/model.hpp"

namespace syge {

// All three losses take the positive score and the sampled negative scores;
// lower is better, minimized by gradient descent.
double loss_sgns(double pos, const std::vector<double>& negs);
// identical in value to loss_sgns via 1 - sigmoid(z) = sigmoid(-z); kept as a
// named mode for config fidelity
double loss_bernoulli(double pos, const std::vector<double>& negs);
// cross entropy over the candidate set {positive, negatives}, max-subtracted
double loss_softmax_ce(double pos, const std::vector<double>& negs);

// loss value plus d(loss)/d(score) for the positive and each negative
double loss_and_weights(LossMode mode, double pos, const std::vector<double>& negs, double& dpos,
                        std::vector<double>& dnegs);

// tail-slot corruption: copies (h, r), re-draws on hitting the true tail
// (up to 100 attempts, then keeps the collision)
void sample_negative_tails(const Triple& tr, int k, const NegTable& table, Rng& rng,
                           std::vector<uint32_t>& out);
std::vector<Triple> sample_negatives(const Triple& tr, int k, const NegTable& table, Rng& rng);

// Optimizer state. SGD is stateless; Adam keeps per-row moments and a per-row
// step count for bias correction, allocated lazily (tables run to 51M params).
struct OptState {
  explicit OptState(Optimizer kind) : kind(kind) {}

  Optimizer kind;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  std::atomic<uint64_t> skipped_rows{0};  // rows dropped for non-finite gradients

  struct Row {
    std::vector<float> m, v;
    uint32_t step = 0;
  };

  // reference stays valid across later insertions
  Row& row(ParamTable table, int64_t idx, size_t width);

 private:
  std::unordered_map<uint64_t, Row> rows_;
  std::shared_mutex mu_;
};

// One optimizer step from accumulated gradients. scale multiplies every
// gradient first (the trainer passes 1/batch). atomic stores keep concurrent
// writers from tearing floats; lost updates are accepted in parallel mode.
void apply_step(ModelParams& params, const GradAccum<float>& grads, OptState& state, double lr,
                double scale = 1.0, bool atomic = false);

struct TrainMetrics {
  std::vector<double> epoch_loss;  // mean per-positive loss
  double triples_per_sec = 0.0;    // last epoch
  double wall_seconds = 0.0;
  uint64_t skipped_updates = 0;
};

// Full training loop. Deterministic when cfg.threads == 1: fixed shuffle,
// sampling, and update order from cfg.seed alone. Throws compute_error if an
// epoch's mean loss goes non-finite, io_error if cfg.min_count disagrees with
// the dataset.
std::pair<Checkpoint, TrainMetrics> train(const TripleDataset& ds, const TrainConfig& cfg);

}  // namespace syge
