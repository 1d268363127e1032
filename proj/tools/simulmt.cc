// tools/simulmt.cc

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

// Command-line driver.  Configuration is resolved as
//   built-in defaults  <  --config TOML file  <  command-line flags
// and the result is written to <out>/resolved_config.json, which can be fed
// back through --config to repeat the run.  Failures print a single line
// "error: <kind>: <message>" to stderr and exit nonzero.

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "toml.hpp"

#include "base/simul-error.h"
#include "data/synthetic-corpus.h"
#include "decoder/simul-decoder.h"
#include "eval/sweep.h"
#include "nnet/checkpoint.h"
#include "training/trainer.h"

using nlohmann::json;
using namespace simul;

namespace {

const char *kUsage = "simulmt: adaptive simultaneous translation policies";
const char *kDefaultTemps = "-2,-0.5,0,4.5,9";

struct Override {
  CLI::Option *option;
  json::json_pointer pointer;
  std::function<json()> value;
};

class FlagTable {
 public:
  template <typename T>
  void Add(CLI::App *app, const std::string &name, const std::string &pointer,
           const std::string &help) {
    auto store = std::make_shared<T>();
    CLI::Option *opt = app->add_option(name, *store, help);
    overrides_.push_back({opt, json::json_pointer(pointer), [store] { return json(*store); }});
  }
  void AddFlag(CLI::App *app, const std::string &name, const std::string &pointer,
               bool value, const std::string &help) {
    CLI::Option *opt = app->add_flag(name, help);
    overrides_.push_back({opt, json::json_pointer(pointer), [value] { return json(value); }});
  }
  void Apply(json *config) const {
    for (const Override &o : overrides_)
      if (o.option->count() > 0) (*config)[o.pointer] = o.value();
  }

 private:
  std::vector<Override> overrides_;
};

json Defaults() {
  json d;
  d["seed"] = 1;
  d["out"] = "out";
  CorpusSpec data;
  d["data"] = data.ToJson();
  d["data"].erase("seed");
  ModelConfig model;
  d["model"] = model.ToJson();
  d["model"].erase("seed");
  TrainConfig train;
  d["train"] = train.ToJson();
  d["train"].erase("seed");
  d["train"]["oracle"]["gamma"] = "measured";
  // Band and mode default to the ones the model was trained with.
  d["decode"] = {{"temperature", 0.0}, {"max_target_len", 256}};
  d["oracle"] = {{"alpha", 1}, {"beta", 3}, {"gamma", "1/1"}};
  d["inputs"] = json::object();
  return d;
}

// A .json file (such as a resolved_config.json) is read as JSON, anything
// else as TOML.
json LoadToml(const std::string &path) {
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    std::ifstream in(path);
    if (!in) throw ConfigError({"cannot read " + path});
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ConfigError({path + ": not a JSON object"});
    return j;
  }
  try {
    const toml::table table = toml::parse_file(path);
    std::ostringstream os;
    os << toml::json_formatter{table};
    return json::parse(os.str());
  } catch (const toml::parse_error &e) {
    std::ostringstream os;
    os << path << ":" << e.source().begin.line << ": " << e.description();
    throw ConfigError({os.str()});
  }
}

void WriteText(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write " + path);
  out << text;
  if (!out) throw FormatError("write failed for " + path);
}

// Parses one section, converting any failure into config violations so that
// all sections are reported together.
template <typename F>
void Section(const std::string &name, std::vector<std::string> *violations, F &&f) {
  try {
    f();
  } catch (const ConfigError &e) {
    violations->insert(violations->end(), e.violations().begin(), e.violations().end());
  } catch (const json::exception &e) {
    violations->push_back(name + ": " + e.what());
  } catch (const SimulError &e) {
    violations->push_back(name + ": " + e.what());
  }
}

void ThrowIfAny(const std::vector<std::string> &violations) {
  if (!violations.empty()) throw ConfigError(violations);
}

std::string Required(const json &config, const std::string &key) {
  const json &in = config.at("inputs");
  if (!in.contains(key) || !in.at(key).is_string() || in.at(key).get<std::string>().empty())
    throw ConfigError({"inputs." + key + " is required"});
  return in.at(key).get<std::string>();
}

std::string PrepareOut(const json &config) {
  const std::string out = config.at("out").get<std::string>();
  std::filesystem::create_directories(out);
  WriteText(out + "/resolved_config.json", config.dump(2) + "\n");
  return out;
}

std::vector<std::vector<int>> StripEos(const std::vector<SentencePair> &pairs) {
  std::vector<std::vector<int>> out;
  for (const auto &p : pairs) out.emplace_back(p.target.begin(), p.target.end() - 1);
  return out;
}

// ---------------------------------------------------------------------------

int CmdGen(json config) {
  CorpusSpec spec;
  std::vector<std::string> bad;
  Section("data", &bad, [&] {
    json d = config.at("data");
    d["seed"] = config.at("seed");
    spec = CorpusSpec::FromJson(d);
    spec.Check();
  });
  ThrowIfAny(bad);
  const std::string out = PrepareOut(config);
  const ParallelCorpus corpus = GenerateCorpus(spec);
  WriteCorpus(out, spec, corpus);
  std::cout << "wrote " << corpus.train.size() << "/" << corpus.dev.size() << "/"
            << corpus.test.size() << " pairs to " << out << " (gamma "
            << MeasuredGamma(corpus.train).ToString() << ")\n";
  return 0;
}

int CmdTrain(json config) {
  const std::string data_dir = Required(config, "data");
  const Vocab vocab = ReadVocab(data_dir + "/vocab.json");
  const auto pairs = ReadParallel(data_dir + "/train.src", data_dir + "/train.tgt", vocab);
  if (pairs.empty()) throw FormatError(data_dir + "/train.src: no sentences");
  json &gamma = config["train"]["oracle"]["gamma"];
  if (gamma.is_string() && gamma.get<std::string>() == "measured")
    gamma = MeasuredGamma(pairs).ToJson();

  ModelConfig mc;
  TrainConfig tc;
  std::vector<std::string> bad;
  Section("model", &bad, [&] {
    json m = config.at("model");
    m["seed"] = config.at("seed");
    mc = ModelConfig::FromJson(m);
    mc.Check();
  });
  Section("train", &bad, [&] {
    json t = config.at("train");
    t["seed"] = config.at("seed");
    tc = TrainConfig::FromJson(t);
    tc.Check();
  });
  ThrowIfAny(bad);
  const std::string out = PrepareOut(config);

  std::vector<TrainingPair> data;
  for (const auto &p : pairs) data.push_back({p.source, p.target});
  AnyScorerModel model = MakeScorerModel(mc, vocab);
  std::ofstream log(out + "/train_log.jsonl", std::ios::trunc);
  TrainRunOptions opts;
  opts.log = &log;
  opts.checkpoint_path = out + "/model.ckpt";
  opts.meta = {{"seed", config.at("seed")}, {"data", data_dir}};
  const TrainRunResult r = RunTraining(&model, tc, data, opts);
  if (r.diverged) throw NumericError(r.error + " (last good checkpoint kept)");
  std::cout << "trained " << r.steps << " steps, final loss " << r.final_loss
            << ", checkpoint " << opts.checkpoint_path << "\n";
  return 0;
}

struct LoadedRun {
  LoadedCheckpoint checkpoint;
  std::unique_ptr<ActionScorer> scorer;
  DecodeConfig decode;
};

// Decoding band and mode default to the checkpoint's training settings.
LoadedRun LoadForDecoding(json *config) {
  LoadedRun run;
  run.checkpoint = ReadCheckpoint(Required(*config, "model"));
  json base = json::object();
  const json &meta = run.checkpoint.meta;
  if (meta.contains("train")) {
    base["band"] = meta.at("train").at("oracle");
    base["mode"] = meta.at("train").at("mode");
  }
  const json user = config->at("decode");
  base.merge_patch(user);
  (*config)["decode"] = base;
  std::vector<std::string> bad;
  Section("decode", &bad, [&] {
    run.decode = DecodeConfig::FromJson(base);
    run.decode.Check();
  });
  ThrowIfAny(bad);
  (*config)["decode"] = run.decode.ToJson();
  run.scorer = MakeActionScorer(*run.checkpoint.model);
  return run;
}

int CmdDecode(json config) {
  LoadedRun run = LoadForDecoding(&config);
  const Vocab &vocab = GetVocab(*run.checkpoint.model);
  const std::string input = config.at("inputs").value("input", "-");
  std::vector<std::vector<int>> sources;
  if (input == "-") {
    std::string line;
    int lineno = 0;
    while (std::getline(std::cin, line)) {
      ++lineno;
      try {
        sources.push_back(vocab.Encode(line));
      } catch (const FormatError &e) {
        throw FormatError("stdin:" + std::to_string(lineno) + ": " + e.what());
      }
    }
  } else {
    sources = ReadSentences(input, vocab);
  }
  const std::string out = PrepareOut(config);
  std::string text;
  for (const auto &src : sources)
    text += FormatTraceLine(Decode(*run.scorer, vocab, src, run.decode), vocab) + "\n";
  WriteText(out + "/decode.txt", text);
  std::cout << text;
  return 0;
}

struct EvalSet {
  std::vector<std::vector<int>> sources, references;
};

EvalSet LoadEvalSet(const json &config, const Vocab &vocab) {
  const std::string dir = Required(config, "data");
  const std::string split = config.at("inputs").value("split", "test");
  const auto pairs = ReadParallel(dir + "/" + split + ".src", dir + "/" + split + ".tgt", vocab);
  if (pairs.empty()) throw FormatError(dir + "/" + split + ".src: no sentences");
  EvalSet s;
  for (const auto &p : pairs) s.sources.push_back(p.source);
  s.references = StripEos(pairs);
  return s;
}

int CmdEval(json config) {
  LoadedRun run = LoadForDecoding(&config);
  const Vocab &vocab = GetVocab(*run.checkpoint.model);
  const EvalSet set = LoadEvalSet(config, vocab);
  const std::string out = PrepareOut(config);
  const DecodedCorpus d =
      DecodeCorpus(*run.scorer, vocab, set.sources, set.references, run.decode);
  const std::string csv = SweepToCsv(
      {{run.decode.temperature, d.latency.al, d.latency.ap, d.latency.cw, d.bleu.bleu}});
  WriteText(out + "/eval.csv", csv);
  const json details = {{"token_accuracy", d.token_accuracy},
                        {"bleu", d.bleu.bleu},
                        {"precisions", d.bleu.precisions},
                        {"raw_precisions", d.bleu.raw_precisions},
                        {"brevity_penalty", d.bleu.brevity_penalty},
                        {"sentences", d.latency.sentences},
                        {"empty_outputs", d.latency.empty_outputs},
                        {"al_unreached", d.latency.al_unreached},
                        {"cw_undefined", d.latency.cw_undefined},
                        {"truncated", d.truncated}};
  WriteText(out + "/eval.json", details.dump(2) + "\n");
  std::cout << csv;
  return 0;
}

int CmdSweep(json config) {
  LoadedRun run = LoadForDecoding(&config);
  const Vocab &vocab = GetVocab(*run.checkpoint.model);
  const EvalSet set = LoadEvalSet(config, vocab);
  std::vector<double> temps;
  std::vector<std::string> bad;
  Section("inputs.temps", &bad, [&] {
    temps = ParseRealList(config.at("inputs").value("temps", kDefaultTemps));
  });
  ThrowIfAny(bad);
  config["inputs"]["temps"] = config.at("inputs").value("temps", kDefaultTemps);
  const std::string out = PrepareOut(config);
  const std::string csv = SweepToCsv(
      Sweep(*run.scorer, vocab, set.sources, set.references, run.decode, temps));
  WriteText(out + "/sweep.csv", csv);
  std::cout << csv;
  return 0;
}

std::string FormatLag(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

int CmdOracleTrace(json config) {
  const std::string src = Required(config, "src"), tgt = Required(config, "tgt");
  OracleConfig cfg;
  std::vector<std::string> bad;
  Section("oracle", &bad, [&] {
    cfg = OracleConfig::FromJson(config.at("oracle"));
    cfg.Check();
  });
  ThrowIfAny(bad);
  // Vocabulary of the tokens in order of first appearance.
  std::vector<std::string> words;
  for (const std::string *line : {&src, &tgt}) {
    std::istringstream is(*line);
    std::string w;
    while (is >> w)
      if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
  }
  const Vocab vocab = Vocab::WithSpecials(words);
  const std::vector<int> x = vocab.Encode(src), y = vocab.Encode(tgt);
  if (x.empty() || y.empty()) throw ConfigError({"inputs.src and inputs.tgt must be non-empty"});
  const std::string out = PrepareOut(config);

  std::string text = "path,step,action,src_len,tgt_len,lag\n";
  TransitionSystem ts(vocab);
  for (PathSide side : {PathSide::kAggressive, PathSide::kConservative}) {
    const char *name = side == PathSide::kAggressive ? "aggressive" : "conservative";
    const ActionSequence path = ExtremePath(x, y, cfg, side);
    const auto states = ts.ReplayStates(path, x.size());
    for (size_t i = 0; i < states.size(); ++i) {
      const std::string action =
          i == 0 ? "start" : ActionsToString({path[i - 1]}, vocab);
      text += std::string(name) + "," + std::to_string(i) + "," + action + "," +
              std::to_string(states[i].src_len) + "," +
              std::to_string(states[i].TgtLen()) + "," +
              FormatLag(EffectiveLag(states[i], cfg)) + "\n";
    }
  }
  WriteText(out + "/oracle_trace.csv", text);
  std::cout << text;
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app(kUsage, "simulmt");
  app.require_subcommand(1);
  app.fallthrough();
  FlagTable flags;
  std::string config_path;
  app.add_option("--config", config_path, "TOML configuration file");
  flags.Add<uint64_t>(&app, "--seed", "/seed", "master seed");
  flags.Add<std::string>(&app, "--out", "/out", "output directory");

  CLI::App *gen = app.add_subcommand("gen", "generate a synthetic corpus");
  flags.Add<std::string>(gen, "--task", "/data/task", "copy | reorder | ratio");
  flags.Add<int>(gen, "--vocab-size", "/data/vocab_size", "content words");
  flags.Add<int>(gen, "--payload-size", "/data/payload_size", "reorder payload alphabet");
  flags.Add<int>(gen, "--train", "/data/train", "training pairs");
  flags.Add<int>(gen, "--dev", "/data/dev", "development pairs");
  flags.Add<int>(gen, "--test", "/data/test", "test pairs");
  flags.Add<int>(gen, "--min-len", "/data/min_len", "minimum source length");
  flags.Add<int>(gen, "--max-len", "/data/max_len", "maximum source length");
  flags.Add<double>(gen, "--gamma-target", "/data/gamma_target", "ratio task |x|/|y|");

  CLI::App *train = app.add_subcommand("train", "train a policy");
  flags.Add<std::string>(train, "--data", "/inputs/data", "corpus directory");
  flags.Add<int>(train, "--d-model", "/model/d_model", "embedding width");
  flags.Add<int>(train, "--layers", "/model/n_layers", "encoder/decoder layers");
  flags.Add<int>(train, "--heads", "/model/n_heads", "attention heads");
  flags.Add<int>(train, "--ffn", "/model/ffn_width", "feed-forward width");
  flags.Add<int>(train, "--max-delay-count", "/model/max_delay_count", "delay-count cap");
  flags.AddFlag(train, "--keep-delay-in-attention", "/model/keep_delay_in_attention",
                true, "do not mask delay positions");
  flags.AddFlag(train, "--no-count-embedding", "/model/use_count_embedding", false,
                "drop the delay-count embedding");
  flags.Add<std::string>(train, "--scoring", "/model/scoring", "sigmoid | softmax");
  flags.Add<std::string>(train, "--precision", "/model/precision", "f32 | f64");
  flags.Add<int>(train, "--alpha", "/train/oracle/alpha", "aggressive bound");
  flags.Add<int>(train, "--beta", "/train/oracle/beta", "conservative bound");
  flags.Add<std::string>(train, "--gamma", "/train/oracle/gamma",
                         "length ratio (number, a/b or 'measured')");
  flags.Add<std::string>(train, "--mode", "/train/mode", "adaptive | waitk:K | full_sentence");
  flags.Add<double>(train, "--lr", "/train/learning_rate", "step size");
  flags.Add<int>(train, "--batch-size", "/train/batch_size", "pairs per step");
  flags.Add<int>(train, "--steps", "/train/max_steps", "optimisation steps");
  flags.Add<int>(train, "--checkpoint-every", "/train/checkpoint_every", "checkpoint cadence");
  flags.Add<std::string>(train, "--negative-term", "/train/negative_term",
                         "none | competitor | all");

  auto add_decode_flags = [&](CLI::App *cmd) {
    flags.Add<std::string>(cmd, "--model", "/inputs/model", "checkpoint");
    flags.Add<int>(cmd, "--alpha", "/decode/band/alpha", "aggressive bound");
    flags.Add<int>(cmd, "--beta", "/decode/band/beta", "conservative bound");
    flags.Add<std::string>(cmd, "--gamma", "/decode/band/gamma", "length ratio");
    flags.Add<std::string>(cmd, "--mode", "/decode/mode", "adaptive | waitk:K | full_sentence");
    flags.Add<int>(cmd, "--max-len", "/decode/max_target_len", "maximum target length");
  };
  CLI::App *decode = app.add_subcommand("decode", "decode source sentences");
  add_decode_flags(decode);
  flags.Add<double>(decode, "--temperature", "/decode/temperature", "delay temperature t");
  flags.Add<std::string>(decode, "--input", "/inputs/input", "source file, '-' for stdin");

  CLI::App *eval = app.add_subcommand("eval", "decode a split and report metrics");
  add_decode_flags(eval);
  flags.Add<double>(eval, "--temperature", "/decode/temperature", "delay temperature t");
  flags.Add<std::string>(eval, "--data", "/inputs/data", "corpus directory");
  flags.Add<std::string>(eval, "--split", "/inputs/split", "train | dev | test");

  CLI::App *sweep = app.add_subcommand("sweep", "latency-quality sweep over temperatures");
  add_decode_flags(sweep);
  flags.Add<std::string>(sweep, "--data", "/inputs/data", "corpus directory");
  flags.Add<std::string>(sweep, "--split", "/inputs/split", "train | dev | test");
  flags.Add<std::string>(sweep, "--temps", "/inputs/temps", "comma separated temperatures");

  CLI::App *trace = app.add_subcommand("oracle-trace", "print the extreme oracle walks");
  flags.Add<std::string>(trace, "--src", "/inputs/src", "source tokens");
  flags.Add<std::string>(trace, "--tgt", "/inputs/tgt", "target tokens");
  flags.Add<int>(trace, "--alpha", "/oracle/alpha", "aggressive bound");
  flags.Add<int>(trace, "--beta", "/oracle/beta", "conservative bound");
  flags.Add<std::string>(trace, "--gamma", "/oracle/gamma", "length ratio");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: usage: " << msg << "\n";
    return 2;
  }

  try {
    json config = Defaults();
    if (!config_path.empty()) config.merge_patch(LoadToml(config_path));
    flags.Apply(&config);
    const std::string cmd = app.get_subcommands().front()->get_name();
    config["command"] = cmd;
    if (cmd == "gen") return CmdGen(config);
    if (cmd == "train") return CmdTrain(config);
    if (cmd == "decode") return CmdDecode(config);
    if (cmd == "eval") return CmdEval(config);
    if (cmd == "sweep") return CmdSweep(config);
    return CmdOracleTrace(config);
  } catch (const SimulError &e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    std::cerr << "error: " << e.kind() << ": " << msg << "\n";
  } catch (const json::exception &e) {
    std::cerr << "error: config: " << e.what() << "\n";
  } catch (const std::exception &e) {
    std::cerr << "error: internal: " << e.what() << "\n";
  }
  return 1;
}
