#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "syge/params.hpp"

namespace syge {

enum class Optimizer { SGD, Adam };
enum class LossMode { SGNS, BernoulliNLL, SoftmaxCE };

inline const char* to_string(Optimizer o) { return o == Optimizer::SGD ? "sgd" : "adam"; }
inline const char* to_string(LossMode m) {
  switch (m) {
    case LossMode::SGNS: return "sgns";
    case LossMode::BernoulliNLL: return "bernoulli";
    case LossMode::SoftmaxCE: return "softmax_ce";
  }
  return "?";
}
inline Optimizer optimizer_from(const std::string& s) {
  if (s == "sgd") return Optimizer::SGD;
  if (s == "adam") return Optimizer::Adam;
  throw std::invalid_argument("unknown optimizer: " + s);
}
inline LossMode loss_mode_from(const std::string& s) {
  if (s == "sgns") return LossMode::SGNS;
  if (s == "bernoulli") return LossMode::BernoulliNLL;
  if (s == "softmax_ce") return LossMode::SoftmaxCE;
  throw std::invalid_argument("unknown loss mode: " + s);
}

struct TrainConfig {
  ModelKind model = ModelKind::DM;
  int dim = 300;
  int epochs = 1;
  int neg_per_pos = 1;
  double learning_rate = 0.001;
  Optimizer optimizer = Optimizer::SGD;
  int batch_size = 512;
  int64_t min_count = 0;
  LossMode loss_mode = LossMode::SGNS;
  uint64_t seed = 1;
  double neg_power = 0.0;   // exponent on counts for the negative table
  int threads = 1;          // 1 = deterministic path
  bool full_ce = false;     // softmax over all entities instead of sampled candidates
  bool dm_identity_init = false;
  bool progress = true;     // per-epoch log lines on stderr; runtime-only, never serialized

  void validate() const {
    if (dim <= 0 || dim % 2 != 0) throw std::invalid_argument("dim must be positive and even");
    if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (neg_per_pos < 1) throw std::invalid_argument("neg_per_pos must be >= 1");
    if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (min_count < 0) throw std::invalid_argument("min_count must be >= 0");
  }
};

// Best text8-tuned settings per model; everything else starts from these.
inline TrainConfig defaults_for(ModelKind kind) {
  TrainConfig c;
  c.model = kind;
  c.dim = 300;
  switch (kind) {
    case ModelKind::DM:
      c.min_count = 100;
      c.neg_per_pos = 20;
      c.epochs = 5;
      c.learning_rate = 0.001;
      c.optimizer = Optimizer::Adam;
      c.loss_mode = LossMode::SGNS;
      c.neg_power = 0.75;
      break;
    case ModelKind::MuRE:
      c.min_count = 0;
      c.neg_per_pos = 40;
      c.epochs = 50;
      c.learning_rate = 50.0;
      c.optimizer = Optimizer::SGD;
      c.loss_mode = LossMode::BernoulliNLL;
      c.neg_power = 0.0;
      break;
    case ModelKind::RotE:
    case ModelKind::RefE:
      c.min_count = 0;
      c.neg_per_pos = 30;
      c.epochs = 15;
      c.learning_rate = 50.0;
      c.optimizer = Optimizer::SGD;
      c.loss_mode = LossMode::SoftmaxCE;
      c.neg_power = 0.0;
      break;
    case ModelKind::AttE:
      c.min_count = 0;
      c.neg_per_pos = 25;
      c.epochs = 10;
      c.learning_rate = 50.0;
      c.optimizer = Optimizer::SGD;
      c.loss_mode = LossMode::SoftmaxCE;
      c.neg_power = 0.0;
      break;
  }
  return c;
}

inline nlohmann::json to_json(const TrainConfig& c) {
  return nlohmann::json{{"model", to_string(c.model)},
                        {"dim", c.dim},
                        {"epochs", c.epochs},
                        {"neg_per_pos", c.neg_per_pos},
                        {"learning_rate", c.learning_rate},
                        {"optimizer", to_string(c.optimizer)},
                        {"batch_size", c.batch_size},
                        {"min_count", c.min_count},
                        {"loss_mode", to_string(c.loss_mode)},
                        {"seed", c.seed},
                        {"neg_power", c.neg_power},
                        {"threads", c.threads},
                        {"full_ce", c.full_ce},
                        {"dm_identity_init", c.dm_identity_init}};
}

inline TrainConfig train_config_from_json(const nlohmann::json& j) {
  TrainConfig c;
  c.model = model_kind_from(j.at("model").get<std::string>());
  c.dim = j.at("dim").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.neg_per_pos = j.at("neg_per_pos").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.optimizer = optimizer_from(j.at("optimizer").get<std::string>());
  c.batch_size = j.at("batch_size").get<int>();
  c.min_count = j.at("min_count").get<int64_t>();
  c.loss_mode = loss_mode_from(j.at("loss_mode").get<std::string>());
  c.seed = j.at("seed").get<uint64_t>();
  c.neg_power = j.at("neg_power").get<double>();
  c.threads = j.value("threads", 1);
  c.full_ce = j.value("full_ce", false);
  c.dm_identity_init = j.value("dm_identity_init", false);
  return c;
}

}  // namespace syge
