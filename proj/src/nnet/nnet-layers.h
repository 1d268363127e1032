// nnet/nnet-layers.h

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

// Forward/backward building blocks operating on row-major [positions x width]
// matrices.  Parameters live in a ParameterSet and are addressed by index;
// every Backward accumulates (+=) into the gradient set and returns the
// gradient with respect to its input.

#ifndef SIMUL_NNET_NNET_LAYERS_H_
#define SIMUL_NNET_NNET_LAYERS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "nnet/parameter-set.h"

namespace simul {

struct LinearIdx {
  int w = -1, b = -1;
};
struct LayerNormIdx {
  int gain = -1, bias = -1;
};
struct AttentionIdx {
  LinearIdx q, k, v, o;
};
struct FeedForwardIdx {
  LinearIdx in, out;
};

template <typename Real>
LinearIdx AddLinear(ParameterSet<Real> *p, const std::string &name, int in,
                    int out);
template <typename Real>
LayerNormIdx AddLayerNorm(ParameterSet<Real> *p, const std::string &name, int dim);
template <typename Real>
AttentionIdx AddAttention(ParameterSet<Real> *p, const std::string &name, int dim);
template <typename Real>
FeedForwardIdx AddFeedForward(ParameterSet<Real> *p, const std::string &name,
                              int dim, int hidden);

template <typename Real>
Matrix<Real> LinearForward(const ParameterSet<Real> &p, LinearIdx idx,
                           const Matrix<Real> &x);
template <typename Real>
Matrix<Real> LinearBackward(const ParameterSet<Real> &p, LinearIdx idx,
                            const Matrix<Real> &x, const Matrix<Real> &dy,
                            ParameterSet<Real> *grads);

template <typename Real>
struct LayerNormCache {
  Matrix<Real> xhat;
  std::vector<Real> inv_std;
};
template <typename Real>
Matrix<Real> LayerNormForward(const ParameterSet<Real> &p, LayerNormIdx idx,
                              const Matrix<Real> &x, LayerNormCache<Real> *cache);
template <typename Real>
Matrix<Real> LayerNormBackward(const ParameterSet<Real> &p, LayerNormIdx idx,
                               const LayerNormCache<Real> &cache,
                               const Matrix<Real> &dy, ParameterSet<Real> *grads);

/// Row-major [n_query x n_key] visibility; an empty mask means all visible.
/// A query row with no visible key gets a zero context vector.
using AttentionMask = std::vector<uint8_t>;

template <typename Real>
struct AttentionCache {
  Matrix<Real> xq, xkv;
  Matrix<Real> q, k, v;
  std::vector<Matrix<Real>> probs;  // one [n_query x n_key] per head
  Matrix<Real> context;             // heads concatenated, before output proj
};
template <typename Real>
Matrix<Real> AttentionForward(const ParameterSet<Real> &p, const AttentionIdx &idx,
                              int n_heads, const Matrix<Real> &xq,
                              const Matrix<Real> &xkv, const AttentionMask &mask,
                              AttentionCache<Real> *cache);
/// Returns dL/dxq; dL/dxkv is added into *dxkv (resized if empty).
template <typename Real>
Matrix<Real> AttentionBackward(const ParameterSet<Real> &p,
                               const AttentionIdx &idx, int n_heads,
                               const AttentionCache<Real> &cache,
                               const Matrix<Real> &dy, ParameterSet<Real> *grads,
                               Matrix<Real> *dxkv);

template <typename Real>
struct FeedForwardCache {
  Matrix<Real> x, hidden;  // hidden is post-ReLU
};
template <typename Real>
Matrix<Real> FeedForwardForward(const ParameterSet<Real> &p,
                                const FeedForwardIdx &idx, const Matrix<Real> &x,
                                FeedForwardCache<Real> *cache);
template <typename Real>
Matrix<Real> FeedForwardBackward(const ParameterSet<Real> &p,
                                 const FeedForwardIdx &idx,
                                 const FeedForwardCache<Real> &cache,
                                 const Matrix<Real> &dy,
                                 ParameterSet<Real> *grads);

/// Adds the fixed sinusoidal code of position `pos` into row[0..dim).
template <typename Real>
void AddSinusoid(int pos, Real *row, int dim);

}  // namespace simul

#endif  // SIMUL_NNET_NNET_LAYERS_H_
