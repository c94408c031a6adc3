#pragma once
#include <string>

#include "syge/config.hpp"
#include "syge/params.hpp"
#include "syge/vocab.hpp"

namespace syge {

// Full trained-model state: everything needed to score, evaluate, and resume.
// On-disk format: magic "SYGE0001\n", one UTF-8 JSON header line (vocab,
// relations, inverse map, train config, array manifest), then the manifest's
// arrays as raw little-endian f32, concatenated in order.
struct Checkpoint {
  Vocab vocab;
  RelationVocab relations;
  ModelParams params;
  TrainConfig train_config;
};

inline constexpr char kCheckpointMagic[] = "SYGE0001\n";

// refuses to write inconsistent state (shape mismatch, vocab/param size skew)
void checkpoint_save(const Checkpoint& ck, const std::string& path);

// re-validates every Checkpoint invariant; throws io_error on bad magic,
// truncated payload, or inconsistent shapes
Checkpoint checkpoint_load(const std::string& path);

}  // namespace syge
