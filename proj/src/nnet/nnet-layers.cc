// nnet/nnet-layers.cc

// Copyright 2026  The simulmt Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "nnet/nnet-layers.h"

#include <cmath>
#include <limits>

namespace simul {

namespace {
constexpr double kLayerNormEps = 1e-5;
}

template <typename Real>
LinearIdx AddLinear(ParameterSet<Real> *p, const std::string &name, int in,
                    int out) {
  LinearIdx idx;
  idx.w = p->Add(name + ".weight", in, out);
  idx.b = p->Add(name + ".bias", 1, out);
  return idx;
}

template <typename Real>
LayerNormIdx AddLayerNorm(ParameterSet<Real> *p, const std::string &name,
                          int dim) {
  LayerNormIdx idx;
  idx.gain = p->Add(name + ".gain", 1, dim);
  idx.bias = p->Add(name + ".bias", 1, dim);
  return idx;
}

template <typename Real>
AttentionIdx AddAttention(ParameterSet<Real> *p, const std::string &name,
                          int dim) {
  AttentionIdx idx;
  idx.q = AddLinear(p, name + ".query", dim, dim);
  idx.k = AddLinear(p, name + ".key", dim, dim);
  idx.v = AddLinear(p, name + ".value", dim, dim);
  idx.o = AddLinear(p, name + ".output", dim, dim);
  return idx;
}

template <typename Real>
FeedForwardIdx AddFeedForward(ParameterSet<Real> *p, const std::string &name,
                              int dim, int hidden) {
  FeedForwardIdx idx;
  idx.in = AddLinear(p, name + ".in", dim, hidden);
  idx.out = AddLinear(p, name + ".out", hidden, dim);
  return idx;
}

template <typename Real>
Matrix<Real> LinearForward(const ParameterSet<Real> &p, LinearIdx idx,
                           const Matrix<Real> &x) {
  Matrix<Real> y = x * p[idx.w];
  y.rowwise() += p[idx.b].row(0);
  return y;
}

template <typename Real>
Matrix<Real> LinearBackward(const ParameterSet<Real> &p, LinearIdx idx,
                            const Matrix<Real> &x, const Matrix<Real> &dy,
                            ParameterSet<Real> *grads) {
  if (grads) {
    (*grads)[idx.w].noalias() += x.transpose() * dy;
    (*grads)[idx.b] += dy.colwise().sum();
  }
  return dy * p[idx.w].transpose();
}

template <typename Real>
Matrix<Real> LayerNormForward(const ParameterSet<Real> &p, LayerNormIdx idx,
                              const Matrix<Real> &x,
                              LayerNormCache<Real> *cache) {
  const Eigen::Index n = x.rows(), d = x.cols();
  Matrix<Real> xhat(n, d);
  std::vector<Real> inv_std(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real mean = x.row(i).mean();
    const Real var = (x.row(i).array() - mean).square().mean();
    inv_std[i] = Real(1) / std::sqrt(var + Real(kLayerNormEps));
    xhat.row(i) = (x.row(i).array() - mean) * inv_std[i];
  }
  Matrix<Real> y = xhat.array().rowwise() * p[idx.gain].row(0).array();
  y.rowwise() += p[idx.bias].row(0);
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

template <typename Real>
Matrix<Real> LayerNormBackward(const ParameterSet<Real> &p, LayerNormIdx idx,
                               const LayerNormCache<Real> &cache,
                               const Matrix<Real> &dy,
                               ParameterSet<Real> *grads) {
  const Eigen::Index n = dy.rows(), d = dy.cols();
  if (grads) {
    (*grads)[idx.gain] += (dy.array() * cache.xhat.array()).colwise().sum().matrix();
    (*grads)[idx.bias] += dy.colwise().sum();
  }
  Matrix<Real> dxhat = dy.array().rowwise() * p[idx.gain].row(0).array();
  Matrix<Real> dx(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Real sum = dxhat.row(i).sum();
    const Real dot = dxhat.row(i).dot(cache.xhat.row(i));
    dx.row(i) = (cache.inv_std[i] / Real(d)) *
                (Real(d) * dxhat.row(i).array() - sum -
                 cache.xhat.row(i).array() * dot)
                    .matrix();
  }
  return dx;
}

template <typename Real>
Matrix<Real> AttentionForward(const ParameterSet<Real> &p,
                              const AttentionIdx &idx, int n_heads,
                              const Matrix<Real> &xq, const Matrix<Real> &xkv,
                              const AttentionMask &mask,
                              AttentionCache<Real> *cache) {
  AttentionCache<Real> local;
  AttentionCache<Real> &c = cache ? *cache : local;
  const Eigen::Index nq = xq.rows(), nk = xkv.rows(), d = xq.cols();
  const Eigen::Index dh = d / n_heads;
  const Real scale = Real(1) / std::sqrt(static_cast<Real>(dh));
  c.xq = xq;
  c.xkv = xkv;
  c.q = LinearForward(p, idx.q, xq);
  if (nk > 0) {
    c.k = LinearForward(p, idx.k, xkv);
    c.v = LinearForward(p, idx.v, xkv);
  } else {
    c.k.resize(0, d);
    c.v.resize(0, d);
  }
  c.context = Matrix<Real>::Zero(nq, d);
  c.probs.assign(n_heads, Matrix<Real>());
  if (nk > 0) {
    for (int h = 0; h < n_heads; ++h) {
      Matrix<Real> s = (c.q.middleCols(h * dh, dh) *
                        c.k.middleCols(h * dh, dh).transpose()) *
                       scale;
      for (Eigen::Index i = 0; i < nq; ++i) {
        Real max = -std::numeric_limits<Real>::infinity();
        for (Eigen::Index j = 0; j < nk; ++j)
          if (mask.empty() || mask[i * nk + j]) max = std::max(max, s(i, j));
        if (max == -std::numeric_limits<Real>::infinity()) {
          s.row(i).setZero();
          continue;
        }
        Real sum = 0;
        for (Eigen::Index j = 0; j < nk; ++j) {
          if (mask.empty() || mask[i * nk + j]) {
            s(i, j) = std::exp(s(i, j) - max);
            sum += s(i, j);
          } else {
            s(i, j) = 0;
          }
        }
        s.row(i) /= sum;
      }
      c.context.middleCols(h * dh, dh).noalias() = s * c.v.middleCols(h * dh, dh);
      c.probs[h] = std::move(s);
    }
  }
  return LinearForward(p, idx.o, c.context);
}

template <typename Real>
Matrix<Real> AttentionBackward(const ParameterSet<Real> &p,
                               const AttentionIdx &idx, int n_heads,
                               const AttentionCache<Real> &c,
                               const Matrix<Real> &dy, ParameterSet<Real> *grads,
                               Matrix<Real> *dxkv) {
  const Eigen::Index nq = c.xq.rows(), nk = c.xkv.rows(), d = c.xq.cols();
  const Eigen::Index dh = d / n_heads;
  const Real scale = Real(1) / std::sqrt(static_cast<Real>(dh));
  Matrix<Real> dcontext = LinearBackward(p, idx.o, c.context, dy, grads);
  Matrix<Real> dq = Matrix<Real>::Zero(nq, d);
  if (nk > 0) {
    Matrix<Real> dk = Matrix<Real>::Zero(nk, d);
    Matrix<Real> dv = Matrix<Real>::Zero(nk, d);
    for (int h = 0; h < n_heads; ++h) {
      const Matrix<Real> &a = c.probs[h];
      Matrix<Real> dctx_h = dcontext.middleCols(h * dh, dh);
      dv.middleCols(h * dh, dh).noalias() = a.transpose() * dctx_h;
      Matrix<Real> da = dctx_h * c.v.middleCols(h * dh, dh).transpose();
      // softmax Jacobian; masked entries have a == 0 and drop out.
      Eigen::Matrix<Real, Eigen::Dynamic, 1> rowdot =
          (da.array() * a.array()).rowwise().sum();
      Matrix<Real> ds = (a.array() * (da.array().colwise() - rowdot.array())) * scale;
      dq.middleCols(h * dh, dh).noalias() = ds * c.k.middleCols(h * dh, dh);
      dk.middleCols(h * dh, dh).noalias() = ds.transpose() * c.q.middleCols(h * dh, dh);
    }
    Matrix<Real> dx_kv = LinearBackward(p, idx.k, c.xkv, dk, grads);
    dx_kv += LinearBackward(p, idx.v, c.xkv, dv, grads);
    if (dxkv->size() == 0)
      *dxkv = std::move(dx_kv);
    else
      *dxkv += dx_kv;
  } else if (dxkv->size() == 0) {
    dxkv->setZero(0, d);
  }
  return LinearBackward(p, idx.q, c.xq, dq, grads);
}

template <typename Real>
Matrix<Real> FeedForwardForward(const ParameterSet<Real> &p,
                                const FeedForwardIdx &idx, const Matrix<Real> &x,
                                FeedForwardCache<Real> *cache) {
  Matrix<Real> hidden = LinearForward(p, idx.in, x).cwiseMax(Real(0));
  Matrix<Real> y = LinearForward(p, idx.out, hidden);
  if (cache) {
    cache->x = x;
    cache->hidden = std::move(hidden);
  }
  return y;
}

template <typename Real>
Matrix<Real> FeedForwardBackward(const ParameterSet<Real> &p,
                                 const FeedForwardIdx &idx,
                                 const FeedForwardCache<Real> &cache,
                                 const Matrix<Real> &dy,
                                 ParameterSet<Real> *grads) {
  Matrix<Real> dhidden = LinearBackward(p, idx.out, cache.hidden, dy, grads);
  dhidden = (cache.hidden.array() > Real(0)).select(dhidden, Real(0));
  return LinearBackward(p, idx.in, cache.x, dhidden, grads);
}

template <typename Real>
void AddSinusoid(int pos, Real *row, int dim) {
  for (int i = 0; i < dim; i += 2) {
    const double freq = std::pow(10000.0, -static_cast<double>(i) / dim);
    row[i] += static_cast<Real>(std::sin(pos * freq));
    if (i + 1 < dim) row[i + 1] += static_cast<Real>(std::cos(pos * freq));
  }
}

#define SIMUL_INSTANTIATE_LAYERS(Real)                                         \
  template LinearIdx AddLinear(ParameterSet<Real> *, const std::string &, int,  \
                               int);                                           \
  template LayerNormIdx AddLayerNorm(ParameterSet<Real> *, const std::string &, \
                                     int);                                     \
  template AttentionIdx AddAttention(ParameterSet<Real> *, const std::string &, \
                                     int);                                     \
  template FeedForwardIdx AddFeedForward(ParameterSet<Real> *,                  \
                                         const std::string &, int, int);       \
  template Matrix<Real> LinearForward(const ParameterSet<Real> &, LinearIdx,    \
                                      const Matrix<Real> &);                   \
  template Matrix<Real> LinearBackward(const ParameterSet<Real> &, LinearIdx,   \
                                       const Matrix<Real> &,                   \
                                       const Matrix<Real> &,                   \
                                       ParameterSet<Real> *);                  \
  template Matrix<Real> LayerNormForward(const ParameterSet<Real> &,            \
                                         LayerNormIdx, const Matrix<Real> &,    \
                                         LayerNormCache<Real> *);              \
  template Matrix<Real> LayerNormBackward(                                     \
      const ParameterSet<Real> &, LayerNormIdx, const LayerNormCache<Real> &,  \
      const Matrix<Real> &, ParameterSet<Real> *);                             \
  template Matrix<Real> AttentionForward(                                      \
      const ParameterSet<Real> &, const AttentionIdx &, int,                   \
      const Matrix<Real> &, const Matrix<Real> &, const AttentionMask &,       \
      AttentionCache<Real> *);                                                 \
  template Matrix<Real> AttentionBackward(                                     \
      const ParameterSet<Real> &, const AttentionIdx &, int,                   \
      const AttentionCache<Real> &, const Matrix<Real> &, ParameterSet<Real> *, \
      Matrix<Real> *);                                                         \
  template Matrix<Real> FeedForwardForward(const ParameterSet<Real> &,          \
                                           const FeedForwardIdx &,             \
                                           const Matrix<Real> &,               \
                                           FeedForwardCache<Real> *);          \
  template Matrix<Real> FeedForwardBackward(                                   \
      const ParameterSet<Real> &, const FeedForwardIdx &,                      \
      const FeedForwardCache<Real> &, const Matrix<Real> &,                    \
      ParameterSet<Real> *);                                                   \
  template void AddSinusoid(int, Real *, int);

SIMUL_INSTANTIATE_LAYERS(float)
SIMUL_INSTANTIATE_LAYERS(double)

#undef SIMUL_INSTANTIATE_LAYERS

}  // namespace simul
