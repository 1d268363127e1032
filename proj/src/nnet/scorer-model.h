// nnet/scorer-model.h

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

#ifndef SIMUL_NNET_SCORER_MODEL_H_
#define SIMUL_NNET_SCORER_MODEL_H_

#include <span>
#include <vector>

#include "nnet/model-config.h"
#include "nnet/nnet-layers.h"
#include "nnet/parameter-set.h"
#include "transition/transition-system.h"
#include "transition/vocab.h"

namespace simul {

/// Encoder-decoder action scorer over the extended vocabulary.
///
/// The encoder is bidirectional and re-run from scratch on every source
/// prefix.  The decoder reads [BOS, a_1, ..., a_m] where a_i are the history
/// actions.  Delay positions are hidden from decoder self-attention except
/// for the last input position, and they do not advance the position index
/// of later words.  The embedding of the history's total delay count
/// (clamped at max_delay_count) is added at every decoder position, so with
/// default flags the scores depend on the history only through the target
/// words, the total delay count and whether the last action was a Delay.
///
/// An empty encoder memory is allowed for scoring (cross-attention then
/// contributes only its output bias); Encode itself rejects an empty prefix.
template <typename Real>
class ScorerModel {
 public:
  /// Fan-in scaled uniform initialisation from the "init" stream of
  /// config.seed.
  ScorerModel(const ModelConfig &config, const Vocab &vocab);

  const ModelConfig &config() const { return config_; }
  const Vocab &vocab() const { return vocab_; }
  ParameterSet<Real> &params() { return params_; }
  const ParameterSet<Real> &params() const { return params_; }

  /// One memory row per source position.  Throws SimulError for an empty
  /// prefix or unknown token ids.
  Matrix<Real> Encode(std::span<const int> source_prefix) const;

  /// Scores for the next action after `history` given the encoder memory of
  /// the currently consumed source prefix.
  ScoreVector ScoreActions(const Matrix<Real> &memory,
                           const ActionSequence &history) const;

  /// Weighted sum over paths of the per-step losses.  Each path is teacher
  /// forced; step i sees the memory of the source prefix consumed after
  /// actions[0..i).  When `grads` is non-null the exact gradient of the
  /// returned value is accumulated into it.  Throws NumericError naming the
  /// path and step if a step loss is not finite.
  double LossAndGradients(std::span<const SupervisedPath> batch,
                          const StepLoss &loss, ParameterSet<Real> *grads) const;

 private:
  struct EncoderLayer {
    LayerNormIdx ln1, ln2;
    AttentionIdx self;
    FeedForwardIdx ffn;
  };
  struct DecoderLayer {
    LayerNormIdx ln1, ln2, ln3;
    AttentionIdx self, cross;
    FeedForwardIdx ffn;
  };
  struct DecoderInput {
    std::vector<int> tokens;     // BOS is vocab.Size()
    std::vector<int> positions;
    AttentionMask mask;
    int count = 0;               // clamped delay count
  };
  struct EncoderCache;
  struct DecoderCache;

  DecoderInput BuildDecoderInput(std::span<const Action> history,
                                 int delay_count) const;
  Matrix<Real> EncodeImpl(std::span<const int> source, EncoderCache *cache) const;
  void EncoderBackward(const EncoderCache &cache, const Matrix<Real> &dmemory,
                       ParameterSet<Real> *grads) const;
  Matrix<Real> DecodeImpl(const DecoderInput &input, const Matrix<Real> &memory,
                          DecoderCache *cache) const;
  Matrix<Real> DecoderBackward(const DecoderCache &cache,
                               const Matrix<Real> &dlogits,
                               ParameterSet<Real> *grads) const;
  void Initialize();

  ModelConfig config_;
  Vocab vocab_;
  ParameterSet<Real> params_;
  int src_embed_ = -1, tgt_embed_ = -1, count_embed_ = -1;
  std::vector<EncoderLayer> enc_layers_;
  std::vector<DecoderLayer> dec_layers_;
  LayerNormIdx enc_final_, dec_final_;
  LinearIdx output_;
};

/// ActionScorer over a neural model: re-encodes the given prefix on each
/// call (an empty prefix scores against an empty memory).
template <typename Real>
class NeuralScorer : public ActionScorer {
 public:
  explicit NeuralScorer(const ScorerModel<Real> &model) : model_(&model) {}
  ScoreVector Score(std::span<const int> source_prefix,
                    const ActionSequence &history) const override;

 private:
  const ScorerModel<Real> *model_;
};

}  // namespace simul

#endif  // SIMUL_NNET_SCORER_MODEL_H_
