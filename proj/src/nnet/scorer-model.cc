// nnet/scorer-model.cc

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

#include "nnet/scorer-model.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>
#include <type_traits>

#include "base/random.h"
#include "base/simul-error.h"

namespace simul {

template <typename Real>
struct ScorerModel<Real>::EncoderCache {
  struct Layer {
    LayerNormCache<Real> ln1, ln2;
    AttentionCache<Real> self;
    FeedForwardCache<Real> ffn;
  };
  std::vector<int> tokens;
  std::vector<Layer> layers;
  LayerNormCache<Real> final_ln;
};

template <typename Real>
struct ScorerModel<Real>::DecoderCache {
  struct Layer {
    LayerNormCache<Real> ln1, ln2, ln3;
    AttentionCache<Real> self, cross;
    FeedForwardCache<Real> ffn;
  };
  std::vector<int> tokens;
  int count = 0;
  std::vector<Layer> layers;
  LayerNormCache<Real> final_ln;
  Matrix<Real> final_out;  // input to the output projection
  Eigen::Index memory_rows = 0;
};

template <typename Real>
ScorerModel<Real>::ScorerModel(const ModelConfig &config, const Vocab &vocab)
    : config_(config), vocab_(vocab) {
  config_.precision =
      std::is_same_v<Real, double> ? Precision::kF64 : Precision::kF32;
  config_.Check();
  const int d = config_.d_model, v = vocab_.Size();
  src_embed_ = params_.Add("embed.source", v, d);
  tgt_embed_ = params_.Add("embed.target", v + 1, d);  // + BOS
  count_embed_ = params_.Add("embed.delay_count", config_.max_delay_count + 1, d);
  for (int l = 0; l < config_.n_layers; ++l) {
    const std::string p = "encoder." + std::to_string(l);
    EncoderLayer layer;
    layer.ln1 = AddLayerNorm(&params_, p + ".ln1", d);
    layer.self = AddAttention(&params_, p + ".self", d);
    layer.ln2 = AddLayerNorm(&params_, p + ".ln2", d);
    layer.ffn = AddFeedForward(&params_, p + ".ffn", d, config_.ffn_width);
    enc_layers_.push_back(layer);
  }
  enc_final_ = AddLayerNorm(&params_, "encoder.final_ln", d);
  for (int l = 0; l < config_.n_layers; ++l) {
    const std::string p = "decoder." + std::to_string(l);
    DecoderLayer layer;
    layer.ln1 = AddLayerNorm(&params_, p + ".ln1", d);
    layer.self = AddAttention(&params_, p + ".self", d);
    layer.ln2 = AddLayerNorm(&params_, p + ".ln2", d);
    layer.cross = AddAttention(&params_, p + ".cross", d);
    layer.ln3 = AddLayerNorm(&params_, p + ".ln3", d);
    layer.ffn = AddFeedForward(&params_, p + ".ffn", d, config_.ffn_width);
    dec_layers_.push_back(layer);
  }
  dec_final_ = AddLayerNorm(&params_, "decoder.final_ln", d);
  output_ = AddLinear(&params_, "output", d, v);
  Initialize();
}

template <typename Real>
void ScorerModel<Real>::Initialize() {
  Rng rng = MakeRng(config_.seed, "init");
  auto ends_with = [](const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  for (int i = 0; i < params_.size(); ++i) {
    const std::string &name = params_.name(i);
    Matrix<Real> &t = params_[i];
    if (ends_with(name, ".gain")) {
      t.setOnes();
    } else if (ends_with(name, ".bias")) {
      t.setZero();
    } else {
      // Weights are [fan_in x fan_out]; embedding rows have fan-in 1.
      const double limit =
          name.rfind("embed.", 0) == 0 ? 1.0 : 1.0 / std::sqrt(double(t.rows()));
      std::uniform_real_distribution<double> dist(-limit, limit);
      for (Eigen::Index k = 0; k < t.size(); ++k)
        t.data()[k] = static_cast<Real>(dist(rng));
    }
  }
}

template <typename Real>
typename ScorerModel<Real>::DecoderInput ScorerModel<Real>::BuildDecoderInput(
    std::span<const Action> history, int delay_count) const {
  DecoderInput in;
  const size_t m = history.size() + 1;
  in.tokens.reserve(m);
  in.positions.reserve(m);
  std::vector<uint8_t> is_delay(m, 0);
  in.tokens.push_back(vocab_.Size());  // BOS
  for (size_t i = 0; i < history.size(); ++i) {
    in.tokens.push_back(history[i].TokenId(vocab_));
    is_delay[i + 1] = history[i].IsDelay();
  }
  const bool keep = config_.keep_delay_in_attention;
  int words_before = 0;
  for (size_t i = 0; i < m; ++i) {
    in.positions.push_back(keep ? static_cast<int>(i) : words_before);
    if (!is_delay[i]) ++words_before;
  }
  in.mask.assign(m * m, 0);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j <= i; ++j)
      in.mask[i * m + j] = keep || !is_delay[j] || j == i;
  in.count = std::min(delay_count, config_.max_delay_count);
  return in;
}

template <typename Real>
Matrix<Real> ScorerModel<Real>::EncodeImpl(std::span<const int> source,
                                           EncoderCache *cache) const {
  const int d = config_.d_model, n = static_cast<int>(source.size());
  Matrix<Real> h(n, d);
  for (int i = 0; i < n; ++i) {
    if (source[i] < 0 || source[i] >= vocab_.Size())
      throw FormatError("encode: source token id " + std::to_string(source[i]) +
                        " out of range");
    h.row(i) = params_[src_embed_].row(source[i]);
    AddSinusoid<Real>(i, h.row(i).data(), d);
  }
  if (cache) {
    cache->tokens.assign(source.begin(), source.end());
    cache->layers.resize(enc_layers_.size());
  }
  static const AttentionMask kAllVisible;
  for (size_t l = 0; l < enc_layers_.size(); ++l) {
    const EncoderLayer &L = enc_layers_[l];
    auto *c = cache ? &cache->layers[l] : nullptr;
    Matrix<Real> a = LayerNormForward(params_, L.ln1, h, c ? &c->ln1 : nullptr);
    h += AttentionForward(params_, L.self, config_.n_heads, a, a, kAllVisible,
                          c ? &c->self : nullptr);
    Matrix<Real> b = LayerNormForward(params_, L.ln2, h, c ? &c->ln2 : nullptr);
    h += FeedForwardForward(params_, L.ffn, b, c ? &c->ffn : nullptr);
  }
  return LayerNormForward(params_, enc_final_, h,
                          cache ? &cache->final_ln : nullptr);
}

template <typename Real>
void ScorerModel<Real>::EncoderBackward(const EncoderCache &cache,
                                        const Matrix<Real> &dmemory,
                                        ParameterSet<Real> *grads) const {
  Matrix<Real> dh =
      LayerNormBackward(params_, enc_final_, cache.final_ln, dmemory, grads);
  for (size_t l = enc_layers_.size(); l-- > 0;) {
    const EncoderLayer &L = enc_layers_[l];
    const auto &c = cache.layers[l];
    Matrix<Real> db = FeedForwardBackward(params_, L.ffn, c.ffn, dh, grads);
    dh += LayerNormBackward(params_, L.ln2, c.ln2, db, grads);
    Matrix<Real> dkv;
    Matrix<Real> da =
        AttentionBackward(params_, L.self, config_.n_heads, c.self, dh, grads, &dkv);
    da += dkv;
    dh += LayerNormBackward(params_, L.ln1, c.ln1, da, grads);
  }
  Matrix<Real> &gemb = (*grads)[src_embed_];
  for (size_t i = 0; i < cache.tokens.size(); ++i)
    gemb.row(cache.tokens[i]) += dh.row(static_cast<Eigen::Index>(i));
}

template <typename Real>
Matrix<Real> ScorerModel<Real>::DecodeImpl(const DecoderInput &input,
                                           const Matrix<Real> &memory,
                                           DecoderCache *cache) const {
  const int d = config_.d_model;
  const int m = static_cast<int>(input.tokens.size());
  Matrix<Real> h(m, d);
  for (int i = 0; i < m; ++i) {
    h.row(i) = params_[tgt_embed_].row(input.tokens[i]);
    AddSinusoid<Real>(input.positions[i], h.row(i).data(), d);
    if (config_.use_count_embedding)
      h.row(i) += params_[count_embed_].row(input.count);
  }
  if (cache) {
    cache->tokens = input.tokens;
    cache->count = input.count;
    cache->layers.resize(dec_layers_.size());
    cache->memory_rows = memory.rows();
  }
  static const AttentionMask kAllVisible;
  for (size_t l = 0; l < dec_layers_.size(); ++l) {
    const DecoderLayer &L = dec_layers_[l];
    auto *c = cache ? &cache->layers[l] : nullptr;
    Matrix<Real> a = LayerNormForward(params_, L.ln1, h, c ? &c->ln1 : nullptr);
    h += AttentionForward(params_, L.self, config_.n_heads, a, a, input.mask,
                          c ? &c->self : nullptr);
    Matrix<Real> b = LayerNormForward(params_, L.ln2, h, c ? &c->ln2 : nullptr);
    h += AttentionForward(params_, L.cross, config_.n_heads, b, memory,
                          kAllVisible, c ? &c->cross : nullptr);
    Matrix<Real> e = LayerNormForward(params_, L.ln3, h, c ? &c->ln3 : nullptr);
    h += FeedForwardForward(params_, L.ffn, e, c ? &c->ffn : nullptr);
  }
  Matrix<Real> z =
      LayerNormForward(params_, dec_final_, h, cache ? &cache->final_ln : nullptr);
  Matrix<Real> logits = LinearForward(params_, output_, z);
  if (cache) cache->final_out = std::move(z);
  return logits;
}

template <typename Real>
Matrix<Real> ScorerModel<Real>::DecoderBackward(const DecoderCache &cache,
                                                const Matrix<Real> &dlogits,
                                                ParameterSet<Real> *grads) const {
  Matrix<Real> dz = LinearBackward(params_, output_, cache.final_out, dlogits, grads);
  Matrix<Real> dh = LayerNormBackward(params_, dec_final_, cache.final_ln, dz, grads);
  Matrix<Real> dmemory = Matrix<Real>::Zero(cache.memory_rows, config_.d_model);
  for (size_t l = dec_layers_.size(); l-- > 0;) {
    const DecoderLayer &L = dec_layers_[l];
    const auto &c = cache.layers[l];
    Matrix<Real> de = FeedForwardBackward(params_, L.ffn, c.ffn, dh, grads);
    dh += LayerNormBackward(params_, L.ln3, c.ln3, de, grads);
    Matrix<Real> dmem_l;
    Matrix<Real> db = AttentionBackward(params_, L.cross, config_.n_heads, c.cross,
                                        dh, grads, &dmem_l);
    if (dmem_l.rows() > 0) dmemory += dmem_l;
    dh += LayerNormBackward(params_, L.ln2, c.ln2, db, grads);
    Matrix<Real> dkv;
    Matrix<Real> da =
        AttentionBackward(params_, L.self, config_.n_heads, c.self, dh, grads, &dkv);
    da += dkv;
    dh += LayerNormBackward(params_, L.ln1, c.ln1, da, grads);
  }
  Matrix<Real> &gemb = (*grads)[tgt_embed_];
  for (size_t i = 0; i < cache.tokens.size(); ++i)
    gemb.row(cache.tokens[i]) += dh.row(static_cast<Eigen::Index>(i));
  if (config_.use_count_embedding)
    (*grads)[count_embed_].row(cache.count) += dh.colwise().sum();
  return dmemory;
}

template <typename Real>
Matrix<Real> ScorerModel<Real>::Encode(std::span<const int> source_prefix) const {
  if (source_prefix.empty())
    throw SimulError("encode", "cannot encode an empty source prefix");
  return EncodeImpl(source_prefix, nullptr);
}

template <typename Real>
ScoreVector ScorerModel<Real>::ScoreActions(const Matrix<Real> &memory,
                                            const ActionSequence &history) const {
  const int delays = static_cast<int>(CountDelays(history));
  DecoderInput input = BuildDecoderInput(history, delays);
  Matrix<Real> logits = DecodeImpl(input, memory, nullptr);
  std::vector<double> last(logits.cols());
  for (Eigen::Index j = 0; j < logits.cols(); ++j)
    last[j] = static_cast<double>(logits(logits.rows() - 1, j));
  return ScoreVector::FromLogits(last, config_.scoring);
}

template <typename Real>
double ScorerModel<Real>::LossAndGradients(std::span<const SupervisedPath> batch,
                                           const StepLoss &loss,
                                           ParameterSet<Real> *grads) const {
  const int v = vocab_.Size(), d = config_.d_model;
  double total = 0.0;
  // Paths that share a source (e.g. both extreme paths of one pair) share
  // encoder passes and a single encoder backward per prefix.
  std::map<std::vector<int>, std::vector<size_t>> by_source;
  std::vector<const std::vector<int> *> source_order;
  for (size_t p = 0; p < batch.size(); ++p) {
    auto [it, inserted] = by_source.try_emplace(batch[p].source);
    if (inserted) source_order.push_back(&it->first);
    it->second.push_back(p);
  }
  std::vector<double> logit_row(v), dlogit_row(v);
  for (const std::vector<int> *source : source_order) {
    const std::vector<size_t> &members = by_source.at(*source);
    const int n = static_cast<int>(source->size());
    std::vector<Matrix<Real>> memory(n + 1);
    std::vector<EncoderCache> enc_cache(n + 1);
    std::vector<Matrix<Real>> dmemory(n + 1);
    std::vector<uint8_t> encoded(n + 1, 0);
    memory[0].resize(0, d);
    encoded[0] = 1;
    for (size_t p : members) {
      const SupervisedPath &path = batch[p];
      if (path.targets.size() != path.actions.size())
        throw SimulError("loss", "path " + std::to_string(p) +
                                     ": targets/actions length mismatch");
      // src_len before each step.
      std::vector<int> src_before(path.actions.size());
      int s = 0;
      for (size_t i = 0; i < path.actions.size(); ++i) {
        src_before[i] = s;
        if (path.actions[i].IsDelay()) ++s;
      }
      if (s > n)
        throw InapplicableActionError("path " + std::to_string(p) +
                                      " reads past the end of its source");
      size_t i0 = 0;
      while (i0 < path.actions.size()) {
        size_t i1 = i0;
        while (i1 + 1 < path.actions.size() && src_before[i1 + 1] == src_before[i0])
          ++i1;
        bool supervised = false;
        for (size_t i = i0; i <= i1; ++i) supervised |= !path.targets[i].empty();
        if (supervised) {
          const int k = src_before[i0];
          if (!encoded[k]) {
            memory[k] = EncodeImpl(std::span<const int>(source->data(), k),
                                   grads ? &enc_cache[k] : nullptr);
            encoded[k] = 1;
          }
          DecoderInput input = BuildDecoderInput(
              std::span<const Action>(path.actions.data(), i1), k);
          DecoderCache cache;
          Matrix<Real> logits = DecodeImpl(input, memory[k], grads ? &cache : nullptr);
          Matrix<Real> dlogits;
          if (grads) dlogits = Matrix<Real>::Zero(logits.rows(), logits.cols());
          for (size_t i = i0; i <= i1; ++i) {
            if (path.targets[i].empty()) continue;
            for (int j = 0; j < v; ++j) logit_row[j] = static_cast<double>(logits(i, j));
            const double step = loss.Compute(logit_row, path.targets[i],
                                              config_.scoring, dlogit_row);
            if (!std::isfinite(step))
              throw NumericError("non-finite loss at path " + std::to_string(p) +
                                 ", step " + std::to_string(i));
            total += path.weight * step;
            if (grads)
              for (int j = 0; j < v; ++j)
                dlogits(i, j) = static_cast<Real>(path.weight * dlogit_row[j]);
          }
          if (grads) {
            Matrix<Real> dmem = DecoderBackward(cache, dlogits, grads);
            if (k > 0) {
              if (dmemory[k].size() == 0)
                dmemory[k] = std::move(dmem);
              else
                dmemory[k] += dmem;
            }
          }
        }
        i0 = i1 + 1;
      }
    }
    if (grads)
      for (int k = 1; k <= n; ++k)
        if (encoded[k] && dmemory[k].size() > 0)
          EncoderBackward(enc_cache[k], dmemory[k], grads);
  }
  return total;
}

template <typename Real>
ScoreVector NeuralScorer<Real>::Score(std::span<const int> source_prefix,
                                      const ActionSequence &history) const {
  if (source_prefix.empty())
    return model_->ScoreActions(Matrix<Real>(0, model_->config().d_model), history);
  return model_->ScoreActions(model_->Encode(source_prefix), history);
}

template class ScorerModel<float>;
template class ScorerModel<double>;
template class NeuralScorer<float>;
template class NeuralScorer<double>;

}  // namespace simul
