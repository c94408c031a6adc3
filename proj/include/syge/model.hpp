#pragma once
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "syge/geometry.hpp"
#include "syge/params.hpp"
#include "syge/vocab.hpp"

namespace syge {

// Sparse gradient sink. Slots are found by linear scan (a positive touches a
// few dozen rows at most) and buffers are pooled across clear() calls.
template <class T>
struct GradAccum {
  struct Entry {
    ParamTable table{};
    int64_t row = 0;
    std::vector<T> g;
  };

  std::vector<Entry> entries;
  size_t used = 0;

  void clear() { used = 0; }

  T* slot(ParamTable table, int64_t row, int64_t width) {
    for (size_t i = 0; i < used; ++i) {
      if (entries[i].table == table && entries[i].row == row) return entries[i].g.data();
    }
    if (used == entries.size()) entries.emplace_back();
    Entry& e = entries[used++];
    e.table = table;
    e.row = row;
    e.g.assign(static_cast<size_t>(width), T(0));
    return e.g.data();
  }

  // folds other into this; used to merge per-thread partials
  void merge(const GradAccum& other) {
    for (size_t i = 0; i < other.used; ++i) {
      const Entry& e = other.entries[i];
      T* g = slot(e.table, e.row, static_cast<int64_t>(e.g.size()));
      for (size_t j = 0; j < e.g.size(); ++j) g[j] += e.g[j];
    }
  }
};

// Per-(head, relation) work shared by every tail candidate scored against it.
// q is the transformed head: DM stores z = W_r^T e_h (so score = z . ctx_t);
// MuRE folds the translation in (q = rho*e_h - w_r); RotE/RefE store the
// translated image with y keeping the pre-translation rotation for the angle
// backward; AttE keeps both mixtures and their attention weights.
template <class T>
struct HeadTransform {
  uint32_t h = 0, r = 0;
  std::vector<T> q;
  std::vector<T> y;   // RotE/RefE: Rot/Ref image before translation; AttE: q_rot
  std::vector<T> y2;  // AttE: q_ref
  double alpha_rot = 0.0, alpha_ref = 0.0;
};

namespace detail {
template <class T>
void check_entity(const ParamsT<T>& p, uint32_t v, const char* what) {
  if (static_cast<int64_t>(v) >= p.num_entities)
    throw std::out_of_range(std::string(what) + " id " + std::to_string(v) + " out of range (|V|=" +
                            std::to_string(p.num_entities) + ")");
}
template <class T>
void check_relation(const ParamsT<T>& p, uint32_t r) {
  if (static_cast<int64_t>(r) >= p.num_relations)
    throw std::out_of_range("relation id " + std::to_string(r) + " out of range (|R|=" +
                            std::to_string(p.num_relations) + ")");
}
}  // namespace detail

template <class T>
void compute_head_transform(const ParamsT<T>& p, uint32_t h, uint32_t r, HeadTransform<T>& ht) {
  detail::check_entity(p, h, "head");
  detail::check_relation(p, r);
  const int n = p.dim;
  ht.h = h;
  ht.r = r;
  ht.q.assign(static_cast<size_t>(n), T(0));
  const T* eh = p.row(ParamTable::Emb, h);

  switch (p.kind) {
    case ModelKind::DM: {
      // z = W_r^T e_h, streamed along W's rows
      const T* W = p.row(ParamTable::RelMatrix, r);
      std::vector<double> z(static_cast<size_t>(n), 0.0);
      for (int i = 0; i < n; ++i) {
        const double ehi = static_cast<double>(eh[i]);
        const T* wrow = W + static_cast<int64_t>(i) * n;
        for (int j = 0; j < n; ++j) z[static_cast<size_t>(j)] += ehi * static_cast<double>(wrow[j]);
      }
      for (int j = 0; j < n; ++j) ht.q[static_cast<size_t>(j)] = static_cast<T>(z[static_cast<size_t>(j)]);
      break;
    }
    case ModelKind::MuRE: {
      const T* rho = p.row(ParamTable::RelDiag, r);
      const T* w = p.row(ParamTable::RelTrans, r);
      for (int i = 0; i < n; ++i)
        ht.q[static_cast<size_t>(i)] = static_cast<T>(static_cast<double>(rho[i]) * static_cast<double>(eh[i]) -
                                                     static_cast<double>(w[i]));
      break;
    }
    case ModelKind::RotE: {
      ht.y.assign(static_cast<size_t>(n), T(0));
      givens_rotate(p.row(ParamTable::RotAngles, r), eh, ht.y.data(), n);
      const T* t = p.row(ParamTable::RelTrans, r);
      for (int i = 0; i < n; ++i) ht.q[static_cast<size_t>(i)] = ht.y[static_cast<size_t>(i)] + t[i];
      break;
    }
    case ModelKind::RefE: {
      ht.y.assign(static_cast<size_t>(n), T(0));
      givens_reflect(p.row(ParamTable::RefAngles, r), eh, ht.y.data(), n);
      const T* f = p.row(ParamTable::RelTrans, r);
      for (int i = 0; i < n; ++i) ht.q[static_cast<size_t>(i)] = ht.y[static_cast<size_t>(i)] + f[i];
      break;
    }
    case ModelKind::AttE: {
      ht.y.assign(static_cast<size_t>(n), T(0));
      ht.y2.assign(static_cast<size_t>(n), T(0));
      givens_rotate(p.row(ParamTable::RotAngles, r), eh, ht.y.data(), n);
      givens_reflect(p.row(ParamTable::RefAngles, r), eh, ht.y2.data(), n);
      attention_combine(ht.y.data(), ht.y2.data(), p.row(ParamTable::AttVec, r), ht.q.data(), n,
                        &ht.alpha_rot, &ht.alpha_ref);
      const T* tr = p.row(ParamTable::RelTrans, r);
      for (int i = 0; i < n; ++i) ht.q[static_cast<size_t>(i)] = static_cast<T>(
          static_cast<double>(ht.q[static_cast<size_t>(i)]) + static_cast<double>(tr[i]));
      break;
    }
  }
}

template <class T>
HeadTransform<T> compute_head_transform(const ParamsT<T>& p, uint32_t h, uint32_t r) {
  HeadTransform<T> ht;
  compute_head_transform(p, h, r, ht);
  return ht;
}

// Higher = more plausible for every model kind: DM's bilinear form directly,
// the rest as biased negative squared distance.
template <class T>
double score_with_head(const ParamsT<T>& p, const HeadTransform<T>& ht, uint32_t t) {
  detail::check_entity(p, t, "tail");
  const int n = p.dim;
  if (p.kind == ModelKind::DM) {
    return dot(ht.q.data(), p.row(ParamTable::CtxEmb, t), n);
  }
  const double d2 = sq_dist(ht.q.data(), p.row(ParamTable::Emb, t), n);
  return -d2 + static_cast<double>(p.row(ParamTable::BiasHead, ht.h)[0]) +
         static_cast<double>(p.row(ParamTable::BiasTail, t)[0]);
}

template <class T>
double score(const ParamsT<T>& p, const Triple& tr) {
  HeadTransform<T> ht;
  compute_head_transform(p, tr.h, tr.r, ht);
  return score_with_head(p, ht, tr.t);
}

// Tail-side backward for one candidate. Adds the tail-row (and bias/relation
// translation) gradients to accum and folds upstream * dscore/dq into dq,
// which head_backward later unfolds once per positive.
template <class T>
void tail_backward(const ParamsT<T>& p, const HeadTransform<T>& ht, uint32_t t, double upstream,
                   std::vector<double>& dq, GradAccum<T>& accum) {
  detail::check_entity(p, t, "tail");
  const int n = p.dim;
  if (dq.size() != static_cast<size_t>(n)) dq.assign(static_cast<size_t>(n), 0.0);

  if (p.kind == ModelKind::DM) {
    const T* ct = p.row(ParamTable::CtxEmb, t);
    T* gt = accum.slot(ParamTable::CtxEmb, t, n);
    for (int i = 0; i < n; ++i) {
      gt[i] += static_cast<T>(upstream * static_cast<double>(ht.q[static_cast<size_t>(i)]));
      dq[static_cast<size_t>(i)] += upstream * static_cast<double>(ct[i]);
    }
    return;
  }

  const T* et = p.row(ParamTable::Emb, t);
  T* gt = accum.slot(ParamTable::Emb, t, n);
  for (int i = 0; i < n; ++i) {
    const double delta = static_cast<double>(ht.q[static_cast<size_t>(i)]) - static_cast<double>(et[i]);
    gt[i] += static_cast<T>(upstream * 2.0 * delta);
    dq[static_cast<size_t>(i)] += upstream * -2.0 * delta;
  }
  accum.slot(ParamTable::BiasHead, ht.h, 1)[0] += static_cast<T>(upstream);
  accum.slot(ParamTable::BiasTail, t, 1)[0] += static_cast<T>(upstream);
}

// Unfolds the accumulated dq through the head transform into the head row and
// the relation parameters. Call once per (h, r) after all tail candidates.
template <class T>
void head_backward(const ParamsT<T>& p, const HeadTransform<T>& ht, const std::vector<double>& dq,
                   GradAccum<T>& accum) {
  const int n = p.dim;
  const T* eh = p.row(ParamTable::Emb, ht.h);
  T* gh = accum.slot(ParamTable::Emb, ht.h, n);

  switch (p.kind) {
    case ModelKind::DM: {
      const T* W = p.row(ParamTable::RelMatrix, ht.r);
      T* gW = accum.slot(ParamTable::RelMatrix, ht.r, static_cast<int64_t>(n) * n);
      for (int i = 0; i < n; ++i) {
        const T* wrow = W + static_cast<int64_t>(i) * n;
        T* gwrow = gW + static_cast<int64_t>(i) * n;
        const double ehi = static_cast<double>(eh[i]);
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
          const double dzj = dq[static_cast<size_t>(j)];
          acc += static_cast<double>(wrow[j]) * dzj;
          gwrow[j] += static_cast<T>(ehi * dzj);
        }
        gh[i] += static_cast<T>(acc);
      }
      return;
    }
    case ModelKind::MuRE: {
      const T* rho = p.row(ParamTable::RelDiag, ht.r);
      T* grho = accum.slot(ParamTable::RelDiag, ht.r, n);
      T* gw = accum.slot(ParamTable::RelTrans, ht.r, n);
      for (int i = 0; i < n; ++i) {
        const double d = dq[static_cast<size_t>(i)];
        gh[i] += static_cast<T>(d * static_cast<double>(rho[i]));
        grho[i] += static_cast<T>(d * static_cast<double>(eh[i]));
        gw[i] -= static_cast<T>(d);  // q = rho*e_h - w_r
      }
      return;
    }
    case ModelKind::RotE: {
      const T* ang = p.row(ParamTable::RotAngles, ht.r);
      T* gang = accum.slot(ParamTable::RotAngles, ht.r, n / 2);
      T* gt = accum.slot(ParamTable::RelTrans, ht.r, n);
      for (int b = 0; b < n / 2; ++b) {
        const double c = std::cos(static_cast<double>(ang[b]));
        const double s = std::sin(static_cast<double>(ang[b]));
        const double g0 = dq[static_cast<size_t>(2 * b)], g1 = dq[static_cast<size_t>(2 * b + 1)];
        const double y0 = static_cast<double>(ht.y[static_cast<size_t>(2 * b)]);
        const double y1 = static_cast<double>(ht.y[static_cast<size_t>(2 * b + 1)]);
        // dtheta: rotation block differentiated = quarter-turn of the image
        gang[b] += static_cast<T>(g0 * -y1 + g1 * y0);
        // transpose rotation carries dq back onto e_h
        gh[2 * b] += static_cast<T>(c * g0 + s * g1);
        gh[2 * b + 1] += static_cast<T>(-s * g0 + c * g1);
        gt[2 * b] += static_cast<T>(g0);
        gt[2 * b + 1] += static_cast<T>(g1);
      }
      return;
    }
    case ModelKind::RefE: {
      const T* ang = p.row(ParamTable::RefAngles, ht.r);
      T* gang = accum.slot(ParamTable::RefAngles, ht.r, n / 2);
      T* gf = accum.slot(ParamTable::RelTrans, ht.r, n);
      for (int b = 0; b < n / 2; ++b) {
        const double c = std::cos(static_cast<double>(ang[b]));
        const double s = std::sin(static_cast<double>(ang[b]));
        const double g0 = dq[static_cast<size_t>(2 * b)], g1 = dq[static_cast<size_t>(2 * b + 1)];
        const double x0 = static_cast<double>(eh[2 * b]), x1 = static_cast<double>(eh[2 * b + 1]);
        // block is (c s; s -c): its phi-derivative is (-s c; c s)
        gang[b] += static_cast<T>(g0 * (-s * x0 + c * x1) + g1 * (c * x0 + s * x1));
        // reflection matrix is symmetric, so the pullback reuses it
        gh[2 * b] += static_cast<T>(c * g0 + s * g1);
        gh[2 * b + 1] += static_cast<T>(s * g0 - c * g1);
        gf[2 * b] += static_cast<T>(g0);
        gf[2 * b + 1] += static_cast<T>(g1);
      }
      return;
    }
    case ModelKind::AttE: {
      const T* a = p.row(ParamTable::AttVec, ht.r);
      const double ar = ht.alpha_rot, af = ht.alpha_ref;
      // attention mixing backward: dq is the gradient at Q = M + p_r
      double g_alpha_rot = 0.0, g_alpha_ref = 0.0;
      for (int i = 0; i < n; ++i) {
        g_alpha_rot += dq[static_cast<size_t>(i)] * static_cast<double>(ht.y[static_cast<size_t>(i)]);
        g_alpha_ref += dq[static_cast<size_t>(i)] * static_cast<double>(ht.y2[static_cast<size_t>(i)]);
      }
      const double g_srot = ar * af * (g_alpha_rot - g_alpha_ref);  // softmax jacobian, 2 classes
      const double g_sref = -g_srot;

      T* ga = accum.slot(ParamTable::AttVec, ht.r, n);
      T* gp = accum.slot(ParamTable::RelTrans, ht.r, n);
      std::vector<double> g_qrot(static_cast<size_t>(n)), g_qref(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) {
        const double qr = static_cast<double>(ht.y[static_cast<size_t>(i)]);
        const double qf = static_cast<double>(ht.y2[static_cast<size_t>(i)]);
        const double ai = static_cast<double>(a[i]);
        g_qrot[static_cast<size_t>(i)] = ar * dq[static_cast<size_t>(i)] + g_srot * ai;
        g_qref[static_cast<size_t>(i)] = af * dq[static_cast<size_t>(i)] + g_sref * ai;
        ga[i] += static_cast<T>(g_srot * qr + g_sref * qf);
        gp[i] += static_cast<T>(dq[static_cast<size_t>(i)]);
      }

      const T* rang = p.row(ParamTable::RotAngles, ht.r);
      const T* fang = p.row(ParamTable::RefAngles, ht.r);
      T* grang = accum.slot(ParamTable::RotAngles, ht.r, n / 2);
      T* gfang = accum.slot(ParamTable::RefAngles, ht.r, n / 2);
      for (int b = 0; b < n / 2; ++b) {
        const double cr = std::cos(static_cast<double>(rang[b]));
        const double sr = std::sin(static_cast<double>(rang[b]));
        const double cf = std::cos(static_cast<double>(fang[b]));
        const double sf = std::sin(static_cast<double>(fang[b]));
        const double r0 = g_qrot[static_cast<size_t>(2 * b)], r1 = g_qrot[static_cast<size_t>(2 * b + 1)];
        const double f0 = g_qref[static_cast<size_t>(2 * b)], f1 = g_qref[static_cast<size_t>(2 * b + 1)];
        const double y0 = static_cast<double>(ht.y[static_cast<size_t>(2 * b)]);
        const double y1 = static_cast<double>(ht.y[static_cast<size_t>(2 * b + 1)]);
        const double x0 = static_cast<double>(eh[2 * b]), x1 = static_cast<double>(eh[2 * b + 1]);
        grang[b] += static_cast<T>(r0 * -y1 + r1 * y0);
        gfang[b] += static_cast<T>(f0 * (-sf * x0 + cf * x1) + f1 * (cf * x0 + sf * x1));
        gh[2 * b] += static_cast<T>(cr * r0 + sr * r1 + cf * f0 + sf * f1);
        gh[2 * b + 1] += static_cast<T>(-sr * r0 + cr * r1 + sf * f0 - cf * f1);
      }
      return;
    }
  }
}

// Single-triple convenience form: score plus upstream-weighted gradients for
// every parameter row the triple touches. The fused trainer path is the same
// computation with many tails sharing one head transform.
template <class T>
double score_and_grad(const ParamsT<T>& p, const Triple& tr, double upstream, GradAccum<T>& accum) {
  HeadTransform<T> ht;
  compute_head_transform(p, tr.h, tr.r, ht);
  const double s = score_with_head(p, ht, tr.t);
  std::vector<double> dq(static_cast<size_t>(p.dim), 0.0);
  tail_backward(p, ht, tr.t, upstream, dq, accum);
  head_backward(p, ht, dq, accum);
  return s;
}

}  // namespace syge
