// data/synthetic-corpus.cc

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

#include "data/synthetic-corpus.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "base/random.h"
#include "base/simul-error.h"

namespace simul {

namespace {

constexpr const char *kTailToken = "TAIL";

void WriteFile(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
  if (!out) throw FormatError("write failed for " + path);
}

std::vector<std::string> ReadLines(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Round half to even, so odd lengths do not all round the same way and
// bias the corpus ratio.
int RoundHalfEven(double v) {
  const double fl = std::floor(v);
  const double frac = v - fl;
  int r = static_cast<int>(fl);
  if (frac > 0.5 || (frac == 0.5 && r % 2 != 0)) ++r;
  return r;
}

SentencePair GenerateOne(const CorpusSpec &spec, const Vocab &vocab, uint64_t index) {
  Rng rng = MakeRng(spec.seed, "data", index);
  std::uniform_int_distribution<int> len_dist(spec.min_len, spec.max_len);
  std::uniform_int_distribution<int> word(0, spec.vocab_size - 1);
  const int first_word = 2;  // after <eps> and </s>
  const int n = len_dist(rng);
  SentencePair p;
  switch (spec.task) {
    case CorpusSpec::kCopy:
      for (int i = 0; i < n; ++i) p.source.push_back(first_word + word(rng));
      p.target = p.source;
      break;
    case CorpusSpec::kReorder: {
      std::uniform_int_distribution<int> payload(0, spec.payload_size - 1);
      for (int i = 0; i < n - 2; ++i) p.source.push_back(first_word + word(rng));
      const int pay = vocab.Id("p" + std::to_string(payload(rng)));
      p.target.push_back(p.source[0]);
      p.target.push_back(pay);
      p.target.insert(p.target.end(), p.source.begin() + 1, p.source.end());
      p.source.push_back(vocab.Id(kTailToken));
      p.source.push_back(pay);
      break;
    }
    case CorpusSpec::kRatio: {
      for (int i = 0; i < n; ++i) p.source.push_back(first_word + word(rng));
      const int m = std::max(1, RoundHalfEven(n / spec.gamma_target));
      for (int j = 0; j < m; ++j)
        p.target.push_back(p.source[static_cast<size_t>(j) * n / m]);
      break;
    }
  }
  p.target.push_back(vocab.EosId());
  return p;
}

}  // namespace

void CorpusSpec::Check() const {
  ConfigChecker c;
  c.Require(vocab_size >= 8, "data.vocab_size must be >= 8");
  c.Require(min_len >= 2, "data.min_len must be >= 2");
  c.Require(max_len >= min_len, "data.max_len must be >= data.min_len");
  c.Require(task != kReorder || min_len >= 3, "data.min_len must be >= 3 for reorder");
  c.Require(task != kReorder || payload_size >= 1, "data.payload_size must be >= 1");
  c.Require(task != kRatio || (gamma_target > 0 && std::isfinite(gamma_target)),
            "data.gamma_target must be > 0");
  c.Require(train >= 0 && dev >= 0 && test >= 0, "data split sizes must be >= 0");
  c.Throw();
}

CorpusSpec::Task CorpusSpec::ParseTask(const std::string &s) {
  if (s == "copy") return kCopy;
  if (s == "reorder") return kReorder;
  if (s == "ratio") return kRatio;
  throw ConfigError({"data.task: expected copy, reorder or ratio, got '" + s + "'"});
}

std::string CorpusSpec::TaskName(Task t) {
  switch (t) {
    case kCopy: return "copy";
    case kReorder: return "reorder";
    default: return "ratio";
  }
}

nlohmann::json CorpusSpec::ToJson() const {
  return {{"task", TaskName(task)}, {"vocab_size", vocab_size},
          {"payload_size", payload_size}, {"train", train},
          {"dev", dev}, {"test", test},
          {"min_len", min_len}, {"max_len", max_len},
          {"gamma_target", gamma_target}, {"seed", seed}};
}

CorpusSpec CorpusSpec::FromJson(const nlohmann::json &j) {
  CorpusSpec s;
  if (j.contains("task")) s.task = ParseTask(j.at("task").get<std::string>());
  s.vocab_size = j.value("vocab_size", s.vocab_size);
  s.payload_size = j.value("payload_size", s.payload_size);
  s.train = j.value("train", s.train);
  s.dev = j.value("dev", s.dev);
  s.test = j.value("test", s.test);
  s.min_len = j.value("min_len", s.min_len);
  s.max_len = j.value("max_len", s.max_len);
  s.gamma_target = j.value("gamma_target", s.gamma_target);
  s.seed = j.value("seed", s.seed);
  return s;
}

Vocab TaskVocab(const CorpusSpec &spec) {
  std::vector<std::string> words;
  for (int i = 0; i < spec.vocab_size; ++i) words.push_back("w" + std::to_string(i));
  if (spec.task == CorpusSpec::kReorder) {
    words.push_back(kTailToken);
    for (int i = 0; i < spec.payload_size; ++i) words.push_back("p" + std::to_string(i));
  }
  return Vocab::WithSpecials(words);
}

ParallelCorpus GenerateCorpus(const CorpusSpec &spec) {
  spec.Check();
  ParallelCorpus c;
  c.vocab = TaskVocab(spec);
  const size_t want[3] = {static_cast<size_t>(spec.train),
                          static_cast<size_t>(spec.dev),
                          static_cast<size_t>(spec.test)};
  std::vector<SentencePair> *split[3] = {&c.train, &c.dev, &c.test};
  for (uint64_t i = 0; c.train.size() < want[0] || c.dev.size() < want[1] ||
                       c.test.size() < want[2];
       ++i) {
    // 80/10/10 by index hash.
    const uint64_t h = SubstreamSeed(spec.seed, "split", i) % 10;
    const int s = h < 8 ? 0 : (h == 8 ? 1 : 2);
    if (split[s]->size() >= want[s]) continue;
    split[s]->push_back(GenerateOne(spec, c.vocab, i));
  }
  return c;
}

LengthRatio MeasuredGamma(const std::vector<SentencePair> &pairs) {
  std::vector<std::pair<size_t, size_t>> lens;
  lens.reserve(pairs.size());
  for (const auto &p : pairs)
    lens.emplace_back(p.source.size(), p.target.size() - 1);
  return MeanLengthRatio(lens);
}

void WriteSplit(const std::string &dir, const std::string &split,
                const std::vector<SentencePair> &pairs, const Vocab &vocab) {
  std::string src, tgt;
  for (const auto &p : pairs) {
    src += vocab.Decode(p.source) + "\n";
    std::vector<int> t(p.target.begin(), p.target.end() - 1);
    tgt += vocab.Decode(t) + "\n";
  }
  WriteFile(dir + "/" + split + ".src", src);
  WriteFile(dir + "/" + split + ".tgt", tgt);
}

std::vector<std::vector<int>> ReadSentences(const std::string &path,
                                            const Vocab &vocab) {
  std::vector<std::vector<int>> out;
  const auto lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    try {
      out.push_back(vocab.Encode(lines[i]));
    } catch (const FormatError &e) {
      throw FormatError(path + ":" + std::to_string(i + 1) + ": " + e.what());
    }
    if (out.back().empty())
      throw FormatError(path + ":" + std::to_string(i + 1) + ": empty sentence");
  }
  return out;
}

std::vector<SentencePair> ReadParallel(const std::string &src_path,
                                       const std::string &tgt_path,
                                       const Vocab &vocab) {
  const auto src = ReadSentences(src_path, vocab);
  const auto tgt = ReadSentences(tgt_path, vocab);
  if (src.size() != tgt.size())
    throw FormatError(src_path + " and " + tgt_path + " have different line counts");
  std::vector<SentencePair> out(src.size());
  for (size_t i = 0; i < src.size(); ++i) {
    out[i].source = src[i];
    out[i].target = tgt[i];
    out[i].target.push_back(vocab.EosId());
  }
  return out;
}

void WriteVocab(const std::string &path, const Vocab &vocab) {
  WriteFile(path, vocab.ToJson().dump(2) + "\n");
}

Vocab ReadVocab(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Vocab::FromJson(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception &e) {
    throw FormatError(path + ": " + e.what());
  }
}

void WriteCorpus(const std::string &dir, const CorpusSpec &spec,
                 const ParallelCorpus &corpus) {
  std::filesystem::create_directories(dir);
  WriteSplit(dir, "train", corpus.train, corpus.vocab);
  WriteSplit(dir, "dev", corpus.dev, corpus.vocab);
  WriteSplit(dir, "test", corpus.test, corpus.vocab);
  WriteVocab(dir + "/vocab.json", corpus.vocab);
  nlohmann::json meta = {{"spec", spec.ToJson()}};
  if (!corpus.train.empty()) meta["gamma"] = MeasuredGamma(corpus.train).ToJson();
  WriteFile(dir + "/corpus.json", meta.dump(2) + "\n");
}

}  // namespace simul
