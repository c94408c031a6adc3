#pragma once
#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "syge/common.hpp"

namespace syge {

struct Triple {
  uint32_t h = 0;
  uint32_t r = 0;
  uint32_t t = 0;

  bool operator==(const Triple&) const = default;
};

// Word vocabulary. Ids are dense, 0..size)-1, ordered by (count desc, surface asc)
// so a rebuilt vocab from the same counts is always identical.
class Vocab {
 public:
  Vocab() = default;

  // counts: surface -> corpus count. Entries below min_count are dropped.
  static Vocab build(const std::unordered_map<std::string, uint64_t>& counts, uint64_t min_count) {
    std::vector<std::pair<std::string, uint64_t>> kept;
    kept.reserve(counts.size());
    for (const auto& [w, c] : counts) {
      if (c >= min_count) kept.emplace_back(w, c);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    Vocab v;
    for (auto& [w, c] : kept) v.push(w, c);
    return v;
  }

  // append one entry; caller guarantees order/count discipline (used by loaders)
  void push(const std::string& word, uint64_t count) {
    if (index_.count(word)) throw io_error("duplicate vocab entry: " + word);
    index_.emplace(word, static_cast<uint32_t>(words_.size()));
    words_.push_back(word);
    counts_.push_back(count);
  }

  std::optional<uint32_t> lookup(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& word(uint32_t id) const { return words_.at(id); }
  uint64_t count(uint32_t id) const { return counts_.at(id); }
  size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<uint64_t>& counts() const { return counts_; }

  bool operator==(const Vocab& o) const { return words_ == o.words_ && counts_ == o.counts_; }

 private:
  std::vector<std::string> words_;
  std::vector<uint64_t> counts_;
  std::unordered_map<std::string, uint32_t> index_;
};

// Directed relation vocabulary. Every base label X occupies id 2j and its
// inverse X_inv occupies 2j+1; inverse_of is a fixed-point-free involution.
class RelationVocab {
 public:
  static constexpr const char* kInverseSuffix = "_inv";

  RelationVocab() = default;

  // base_labels are deduplicated and sorted before id assignment
  static RelationVocab build(std::vector<std::string> base_labels) {
    std::sort(base_labels.begin(), base_labels.end());
    base_labels.erase(std::unique(base_labels.begin(), base_labels.end()), base_labels.end());
    RelationVocab rv;
    for (const auto& base : base_labels) {
      uint32_t a = rv.push(base);
      uint32_t b = rv.push(base + kInverseSuffix);
      rv.inverse_.resize(rv.labels_.size());
      rv.inverse_[a] = b;
      rv.inverse_[b] = a;
    }
    return rv;
  }

  // loader path: labels first, then the explicit map
  uint32_t push(const std::string& label) {
    if (index_.count(label)) throw io_error("duplicate relation label: " + label);
    uint32_t id = static_cast<uint32_t>(labels_.size());
    index_.emplace(label, id);
    labels_.push_back(label);
    return id;
  }

  void set_inverse_map(std::vector<uint32_t> inv) {
    if (inv.size() != labels_.size()) throw io_error("inverse map size mismatch");
    for (uint32_t i = 0; i < inv.size(); ++i) {
      if (inv[i] >= inv.size() || inv[i] == i || inv[inv[i]] != i)
        throw io_error("inverse map is not a fixed-point-free involution");
    }
    inverse_ = std::move(inv);
  }

  uint32_t inverse_of(uint32_t r) const { return inverse_.at(r); }
  const std::vector<uint32_t>& inverse_map() const { return inverse_; }

  std::optional<uint32_t> lookup(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& label(uint32_t id) const { return labels_.at(id); }
  size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

  bool operator==(const RelationVocab& o) const {
    return labels_ == o.labels_ && inverse_ == o.inverse_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<uint32_t> inverse_;
  std::unordered_map<std::string, uint32_t> index_;
};

}  // namespace syge
