#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "syge/geometry.hpp"
#include "syge/model.hpp"
#include "syge/params.hpp"
#include "syge/vocab.hpp"

namespace syge {

enum class PhraseType { AN, VO, NN };
enum class ComposeStrategy { Add, SynRh, SynRt, SynBiD };

inline const char* to_string(PhraseType t) {
  switch (t) {
    case PhraseType::AN: return "AN";
    case PhraseType::VO: return "VO";
    case PhraseType::NN: return "NN";
  }
  return "?";
}
inline const char* to_string(ComposeStrategy s) {
  switch (s) {
    case ComposeStrategy::Add: return "add";
    case ComposeStrategy::SynRh: return "syn-rh";
    case ComposeStrategy::SynRt: return "syn-rt";
    case ComposeStrategy::SynBiD: return "syn-bid";
  }
  return "?";
}
PhraseType phrase_type_from(const std::string& s);
ComposeStrategy strategy_from(const std::string& s);

// Which dependency label contextualises each phrase type, and which word is
// the syntactic root. Parsers disagree on compound-noun labels, so the table
// is caller-configurable.
struct PhraseRelationMap {
  std::string an = "amod";  // root = noun, dependent = adjective
  std::string vo = "dobj";  // root = verb, dependent = object noun
  std::string nn = "nmod";  // root = second noun, dependent = first noun

  const std::string& label_for(PhraseType t) const {
    switch (t) {
      case PhraseType::AN: return an;
      case PhraseType::VO: return vo;
      case PhraseType::NN: return nn;
    }
    throw std::logic_error("bad phrase type");
  }
};

// A two-word phrase resolved to ids. relation is the base (non-inverse)
// direction with the root as head; the inverse comes from the RelationVocab.
struct PhraseAnalysis {
  uint32_t root = 0;
  uint32_t dependent = 0;
  uint32_t relation = 0;
  PhraseType phrase_type = PhraseType::AN;
};

// e_root + e_dep in target space; symmetric, ignores the relation
template <class T>
std::vector<T> compose_add(const ParamsT<T>& p, const PhraseAnalysis& pa) {
  detail::check_entity(p, pa.root, "root");
  detail::check_entity(p, pa.dependent, "dependent");
  const int n = p.dim;
  const T* a = p.row(ParamTable::Emb, pa.root);
  const T* b = p.row(ParamTable::Emb, pa.dependent);
  std::vector<T> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    out[static_cast<size_t>(i)] = static_cast<T>(static_cast<double>(a[i]) + static_cast<double>(b[i]));
  return out;
}

// Directed syntactic composition; no bias terms enter. DM maps the tail word
// through W_r in context space, the distance models transform the head.
template <class T>
std::vector<T> compose_syn_directed(const ParamsT<T>& p, uint32_t h, uint32_t r, uint32_t t) {
  detail::check_entity(p, h, "head");
  detail::check_entity(p, t, "tail");
  detail::check_relation(p, r);
  const int n = p.dim;
  std::vector<T> out(static_cast<size_t>(n), T(0));
  const T* eh = p.row(ParamTable::Emb, h);
  const T* et = p.row(ParamTable::Emb, t);

  switch (p.kind) {
    case ModelKind::DM: {
      // e_h + W_r e'_t
      const T* W = p.row(ParamTable::RelMatrix, r);
      const T* ct = p.row(ParamTable::CtxEmb, t);
      for (int i = 0; i < n; ++i) {
        const T* wrow = W + static_cast<int64_t>(i) * n;
        double acc = static_cast<double>(eh[i]);
        for (int j = 0; j < n; ++j) acc += static_cast<double>(wrow[j]) * static_cast<double>(ct[j]);
        out[static_cast<size_t>(i)] = static_cast<T>(acc);
      }
      return out;
    }
    case ModelKind::MuRE: {
      // rho*e_h + (e_t + w_r)
      const T* rho = p.row(ParamTable::RelDiag, r);
      const T* w = p.row(ParamTable::RelTrans, r);
      for (int i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] =
            static_cast<T>(static_cast<double>(rho[i]) * static_cast<double>(eh[i]) +
                           static_cast<double>(et[i]) + static_cast<double>(w[i]));
      return out;
    }
    case ModelKind::RotE:
    case ModelKind::RefE:
    case ModelKind::AttE: {
      // (head transform) + e_t; reuse the scoring-side transform
      HeadTransform<T> ht;
      compute_head_transform(p, h, r, ht);
      for (int i = 0; i < n; ++i)
        out[static_cast<size_t>(i)] = static_cast<T>(static_cast<double>(ht.q[static_cast<size_t>(i)]) +
                                                     static_cast<double>(et[i]));
      return out;
    }
  }
  throw std::logic_error("bad model kind");
}

template <class T>
std::vector<T> compose_phrase(const ParamsT<T>& p, const RelationVocab& relations,
                              const PhraseAnalysis& pa, ComposeStrategy strategy) {
  switch (strategy) {
    case ComposeStrategy::Add: return compose_add(p, pa);
    case ComposeStrategy::SynRh: return compose_syn_directed(p, pa.root, pa.relation, pa.dependent);
    case ComposeStrategy::SynRt:
      return compose_syn_directed(p, pa.dependent, relations.inverse_of(pa.relation), pa.root);
    case ComposeStrategy::SynBiD: {
      auto rh = compose_syn_directed(p, pa.root, pa.relation, pa.dependent);
      const auto rt = compose_syn_directed(p, pa.dependent, relations.inverse_of(pa.relation), pa.root);
      for (size_t i = 0; i < rh.size(); ++i) rh[i] = static_cast<T>(rh[i] + rt[i]);
      return rh;
    }
  }
  throw std::logic_error("bad strategy");
}

}  // namespace syge
