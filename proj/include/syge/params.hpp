#pragma once
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "syge/rng.hpp"

namespace syge {

enum class ModelKind { DM, MuRE, RotE, RefE, AttE };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::DM: return "dm";
    case ModelKind::MuRE: return "mure";
    case ModelKind::RotE: return "rote";
    case ModelKind::RefE: return "refe";
    case ModelKind::AttE: return "atte";
  }
  return "?";
}

inline ModelKind model_kind_from(const std::string& s) {
  if (s == "dm") return ModelKind::DM;
  if (s == "mure") return ModelKind::MuRE;
  if (s == "rote") return ModelKind::RotE;
  if (s == "refe") return ModelKind::RefE;
  if (s == "atte") return ModelKind::AttE;
  throw std::invalid_argument("unknown model kind: " + s);
}

// Identifies one parameter array inside a bundle. Order here is also the
// serialization order of the checkpoint payload.
enum class ParamTable : uint8_t {
  Emb,        // |V| x n  entity embeddings (DM: target space)
  CtxEmb,     // |V| x n  DM context space
  RelMatrix,  // |R| x n x n  DM linear maps
  RelDiag,    // |R| x n  MuRE stretches
  RotAngles,  // |R| x n/2  rotation angles
  RefAngles,  // |R| x n/2  reflection angles
  RelTrans,   // |R| x n  translations
  AttVec,     // |R| x n  attention vectors
  BiasHead,   // |V|  head-role biases
  BiasTail,   // |V|  tail-role biases
};

inline constexpr ParamTable kAllTables[] = {
    ParamTable::Emb,      ParamTable::CtxEmb,   ParamTable::RelMatrix, ParamTable::RelDiag,
    ParamTable::RotAngles, ParamTable::RefAngles, ParamTable::RelTrans, ParamTable::AttVec,
    ParamTable::BiasHead, ParamTable::BiasTail};

inline const char* table_name(ParamTable t) {
  switch (t) {
    case ParamTable::Emb: return "emb";
    case ParamTable::CtxEmb: return "ctx_emb";
    case ParamTable::RelMatrix: return "rel_matrix";
    case ParamTable::RelDiag: return "rel_diag";
    case ParamTable::RotAngles: return "rot_angles";
    case ParamTable::RefAngles: return "ref_angles";
    case ParamTable::RelTrans: return "rel_trans";
    case ParamTable::AttVec: return "att_vec";
    case ParamTable::BiasHead: return "bias_head";
    case ParamTable::BiasTail: return "bias_tail";
  }
  return "?";
}

// One model's full learnable state. Unused tables stay empty for the kind;
// all arrays are row-major with the row strides given by row_width().
template <class T>
struct ParamsT {
  ModelKind kind = ModelKind::DM;
  int dim = 0;
  int64_t num_entities = 0;
  int64_t num_relations = 0;

  std::vector<T> emb, ctx_emb, rel_matrix, rel_diag, rot_angles, ref_angles, rel_trans, att_vec,
      bias_head, bias_tail;

  std::vector<T>& table(ParamTable t) {
    switch (t) {
      case ParamTable::Emb: return emb;
      case ParamTable::CtxEmb: return ctx_emb;
      case ParamTable::RelMatrix: return rel_matrix;
      case ParamTable::RelDiag: return rel_diag;
      case ParamTable::RotAngles: return rot_angles;
      case ParamTable::RefAngles: return ref_angles;
      case ParamTable::RelTrans: return rel_trans;
      case ParamTable::AttVec: return att_vec;
      case ParamTable::BiasHead: return bias_head;
      case ParamTable::BiasTail: return bias_tail;
    }
    throw std::logic_error("bad table");
  }
  const std::vector<T>& table(ParamTable t) const { return const_cast<ParamsT*>(this)->table(t); }

  // elements per row for each table (0 = table unused by this kind)
  int64_t row_width(ParamTable t) const {
    const int64_t n = dim;
    const bool dm = kind == ModelKind::DM;
    switch (t) {
      case ParamTable::Emb: return n;
      case ParamTable::CtxEmb: return dm ? n : 0;
      case ParamTable::RelMatrix: return dm ? n * n : 0;
      case ParamTable::RelDiag: return kind == ModelKind::MuRE ? n : 0;
      case ParamTable::RotAngles:
        return (kind == ModelKind::RotE || kind == ModelKind::AttE) ? n / 2 : 0;
      case ParamTable::RefAngles:
        return (kind == ModelKind::RefE || kind == ModelKind::AttE) ? n / 2 : 0;
      case ParamTable::RelTrans: return dm ? 0 : n;
      case ParamTable::AttVec: return kind == ModelKind::AttE ? n : 0;
      case ParamTable::BiasHead: return dm ? 0 : 1;
      case ParamTable::BiasTail: return dm ? 0 : 1;
    }
    return 0;
  }

  // number of rows in a table: |V| for entity-indexed, |R| for relation-indexed
  int64_t row_count(ParamTable t) const {
    switch (t) {
      case ParamTable::Emb:
      case ParamTable::CtxEmb:
      case ParamTable::BiasHead:
      case ParamTable::BiasTail: return num_entities;
      default: return num_relations;
    }
  }

  T* row(ParamTable t, int64_t i) { return table(t).data() + i * row_width(t); }
  const T* row(ParamTable t, int64_t i) const { return table(t).data() + i * row_width(t); }

  int64_t total_params() const {
    int64_t total = 0;
    for (ParamTable t : kAllTables) total += row_width(t) * row_count(t);
    return total;
  }

  // every used table must have exactly rows*width elements
  void validate_shapes() const {
    if (dim <= 0) throw std::invalid_argument("dim must be positive");
    if (dim % 2 != 0) throw std::invalid_argument("dim must be even");
    for (ParamTable t : kAllTables) {
      const int64_t want = row_width(t) * row_count(t);
      const int64_t got = static_cast<int64_t>(table(t).size());
      if (want != got)
        throw std::invalid_argument(std::string("shape mismatch in ") + table_name(t) + ": have " +
                                    std::to_string(got) + " elements, expect " +
                                    std::to_string(want));
    }
  }
};

using ModelParams = ParamsT<float>;

// Closed-form learnable-parameter count; the DM/MuRE n-squared versus diagonal
// split is what separates the model families.
inline int64_t count_params(ModelKind kind, int64_t num_entities, int64_t num_relations, int64_t n) {
  switch (kind) {
    case ModelKind::DM: return 2 * num_entities * n + num_relations * n * n;
    case ModelKind::MuRE: return num_entities * n + 2 * num_entities + 2 * num_relations * n;
    case ModelKind::RotE:
    case ModelKind::RefE:
      return num_entities * n + 2 * num_entities + num_relations * (n / 2) + num_relations * n;
    case ModelKind::AttE:
      return num_entities * n + 2 * num_entities + 2 * num_relations * (n / 2) +
             2 * num_relations * n;
  }
  return 0;
}

// Embeddings and attention vectors start uniform in (-0.5/n, 0.5/n), angles
// uniform in (-pi, pi), translations and biases at zero. Stretches start at 1
// (the neutral modifier). DM's context table is zero-initialized;
// identity_rel_maps starts its relation matrices at I instead of the same
// uniform range.
template <class T>
ParamsT<T> init_params(ModelKind kind, int64_t num_entities, int64_t num_relations, int n, Rng& rng,
                       bool identity_rel_maps = false) {
  ParamsT<T> p;
  p.kind = kind;
  p.dim = n;
  p.num_entities = num_entities;
  p.num_relations = num_relations;
  for (ParamTable t : kAllTables) p.table(t).assign(p.row_width(t) * p.row_count(t), T(0));

  const double bound = 0.5 / static_cast<double>(n);
  auto fill_uniform = [&](std::vector<T>& v, double lo, double hi) {
    for (auto& x : v) x = static_cast<T>(rng.uniform(lo, hi));
  };
  fill_uniform(p.emb, -bound, bound);
  if (kind == ModelKind::DM) {
    if (identity_rel_maps) {
      for (int64_t r = 0; r < num_relations; ++r)
        for (int i = 0; i < n; ++i) p.rel_matrix[(r * n + i) * n + i] = T(1);
    } else {
      fill_uniform(p.rel_matrix, -bound, bound);
    }
  }
  if (kind == ModelKind::MuRE) p.rel_diag.assign(p.rel_diag.size(), T(1));
  constexpr double pi = std::numbers::pi;
  fill_uniform(p.rot_angles, -pi, pi);
  fill_uniform(p.ref_angles, -pi, pi);
  fill_uniform(p.att_vec, -bound, bound);
  return p;
}

}  // namespace syge
