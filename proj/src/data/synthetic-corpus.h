// data/synthetic-corpus.h

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

#ifndef SIMUL_DATA_SYNTHETIC_CORPUS_H_
#define SIMUL_DATA_SYNTHETIC_CORPUS_H_

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "oracle/dynamic-oracle.h"
#include "transition/vocab.h"

namespace simul {

/// Synthetic transduction tasks.
///
///   copy:     y = x
///   reorder:  x = (w_1 .. w_L, TAIL, p)  ->  y = (w_1, p, w_2 .. w_L);
///             p is drawn from a separate payload alphabet
///   ratio:    |y| = round(|x| / gamma_target) (half to even, at least 1),
///             y_j = x_{floor(j |x| / |y|)}
///
/// Every target gets eos appended.  Sentence i is generated from its own
/// substream of the seed, and its split is a hash of (seed, i), so splits
/// are disjoint by index and each sentence is independent of the others.
struct CorpusSpec {
  enum Task { kCopy, kReorder, kRatio };
  Task task = kCopy;
  int vocab_size = 20;        // content words (payload tokens not included)
  int payload_size = 4;       // reorder only
  int train = 2000, dev = 200, test = 200;
  int min_len = 5, max_len = 15;  // source length
  double gamma_target = 1.25; // ratio only
  uint64_t seed = 1;

  void Check() const;
  nlohmann::json ToJson() const;
  static CorpusSpec FromJson(const nlohmann::json &j);
  static Task ParseTask(const std::string &s);
  static std::string TaskName(Task t);
};

struct SentencePair {
  std::vector<int> source;
  std::vector<int> target;  // ends with eos
  friend bool operator==(const SentencePair &, const SentencePair &) = default;
};

struct ParallelCorpus {
  Vocab vocab;
  std::vector<SentencePair> train, dev, test;
};

Vocab TaskVocab(const CorpusSpec &spec);
ParallelCorpus GenerateCorpus(const CorpusSpec &spec);

/// Mean |x| / |y| over pairs, eos excluded; exact when it fits.
LengthRatio MeasuredGamma(const std::vector<SentencePair> &pairs);

/// Writes <dir>/<split>.src and .tgt (targets without eos).
void WriteSplit(const std::string &dir, const std::string &split,
                const std::vector<SentencePair> &pairs, const Vocab &vocab);
/// Reads <prefix>.src / <prefix>.tgt, appending eos to targets.  Throws
/// FormatError on unequal line counts, empty lines or unknown tokens.
std::vector<SentencePair> ReadParallel(const std::string &src_path,
                                       const std::string &tgt_path,
                                       const Vocab &vocab);
/// One tokenized sentence per line; throws on unknown tokens.
std::vector<std::vector<int>> ReadSentences(const std::string &path,
                                            const Vocab &vocab);
void WriteVocab(const std::string &path, const Vocab &vocab);
Vocab ReadVocab(const std::string &path);

/// Writes train/dev/test files, vocab.json and corpus.json (spec and
/// measured gamma of the training split) into `dir`.
void WriteCorpus(const std::string &dir, const CorpusSpec &spec,
                 const ParallelCorpus &corpus);

}  // namespace simul

#endif  // SIMUL_DATA_SYNTHETIC_CORPUS_H_
