// tools/swdecode-main.cc

// Copyright 2026  swdecode authors

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
//
// swdecode: build TLG decoding graphs, generate synthetic CTC posteriors,
// decode them with a frame-selection strategy, and score the results.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "swd/arpa.h"
#include "swd/decoder.h"
#include "swd/errors.h"
#include "swd/eval.h"
#include "swd/frame-select.h"
#include "swd/graph-build.h"
#include "swd/lexicon.h"
#include "swd/posterior.h"
#include "swd/synth.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitDecode = 3;

std::vector<std::string> ReadLines(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw swd::FormatError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::pair<std::string, std::string>> ReadUttTextJsonl(
    const std::string &path) {
  std::vector<std::pair<std::string, std::string>> items;
  int line_no = 0;
  for (const std::string &line : ReadLines(path)) {
    ++line_no;
    if (line.empty()) continue;
    json parsed;
    try {
      parsed = json::parse(line);
    } catch (const json::exception &e) {
      throw swd::FormatError(path + ":" + std::to_string(line_no) + ": " +
                             e.what());
    }
    if (!parsed.contains("utt_id")) {
      throw swd::FormatError(path + ":" + std::to_string(line_no) +
                             ": missing utt_id");
    }
    std::string text;
    if (parsed.contains("text")) {
      text = parsed["text"].get<std::string>();
    } else if (parsed.contains("words")) {
      for (const auto &w : parsed["words"]) {
        if (!text.empty()) text += ' ';
        text += w.get<std::string>();
      }
    } else if (parsed.contains("error")) {
      continue;  // failed utterance; scoring treats it as missing
    } else {
      throw swd::FormatError(path + ":" + std::to_string(line_no) +
                             ": missing text/words");
    }
    items.emplace_back(parsed["utt_id"].get<std::string>(), text);
  }
  return items;
}

swd::SynthConfig ReadSynthConfig(const std::string &path) {
  swd::SynthConfig config;
  if (path.empty()) return config;
  std::ifstream in(path);
  if (!in) throw swd::FormatError("cannot open config " + path);
  json parsed;
  try {
    in >> parsed;
    if (parsed.contains("vocab_size")) config.vocab_size = parsed["vocab_size"];
    if (parsed.contains("blank_run_mean"))
      config.blank_run_mean = parsed["blank_run_mean"];
    if (parsed.contains("spike_prob")) config.spike_prob = parsed["spike_prob"];
    if (parsed.contains("neighbor_leak"))
      config.neighbor_leak = parsed["neighbor_leak"];
    if (parsed.contains("noise_floor"))
      config.noise_floor = parsed["noise_floor"];
    if (parsed.contains("seed")) config.seed = parsed["seed"];
  } catch (const json::exception &e) {
    throw swd::FormatError(path + ": " + e.what());
  }
  return config;
}

int RunBuildGraph(const std::string &lexicon_path, const std::string &arpa_path,
                  const std::string &recipe_name, double lm_scale,
                  const std::string &out_dir) {
  swd::Lexicon lexicon = swd::ParseLexiconFile(lexicon_path);
  swd::ArpaModel model = swd::ParseArpaFile(arpa_path);
  swd::BuildRecipe recipe = swd::ParseRecipe(recipe_name);
  swd::TlgBuildStats stats;
  swd::GraphBundle bundle =
      swd::BuildGraphBundle(lexicon, model, recipe, lm_scale, &stats);
  swd::SaveGraphBundle(bundle, out_dir);
  std::cerr << "L o G: " << stats.lg_states << " states, " << stats.lg_arcs
            << " arcs\n"
            << swd::RecipeName(recipe) << " optimized: " << stats.opt_states
            << " states, " << stats.opt_arcs << " arcs\n"
            << "TLG: " << stats.tlg_states << " states, " << stats.tlg_arcs
            << " arcs\n"
            << "wrote " << out_dir << "\n";
  return kExitOk;
}

int RunGenSynth(const std::string &corpus_path, const std::string &lexicon_path,
                const std::string &config_path, const std::string &out_dir) {
  swd::Lexicon lexicon = swd::ParseLexiconFile(lexicon_path);
  swd::SynthConfig config = ReadSynthConfig(config_path);
  std::vector<std::string> lines = ReadLines(corpus_path);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  auto corpus = swd::GenerateCorpus(config, lines, lexicon);

  fs::create_directories(out_dir);
  json manifest;
  manifest["seed"] = config.seed;
  manifest["config"] = {{"vocab_size", config.vocab_size},
                        {"blank_run_mean", config.blank_run_mean},
                        {"spike_prob", config.spike_prob},
                        {"neighbor_leak", config.neighbor_leak},
                        {"noise_floor", config.noise_floor},
                        {"seed", config.seed}};
  manifest["utterances"] = json::array();
  std::ofstream refs(out_dir + "/refs.jsonl");
  std::ofstream token_refs(out_dir + "/refs-tokens.jsonl");
  for (const auto &utt : corpus) {
    std::string file = utt.utt_id + ".ctcp";
    swd::WritePosteriorsFile(utt.matrix, out_dir + "/" + file);
    std::string text;
    for (const auto &w : utt.reference_words) {
      if (!text.empty()) text += ' ';
      text += w;
    }
    std::string token_text;
    for (const auto &t : utt.reference_token_names) {
      if (!token_text.empty()) token_text += ' ';
      token_text += t;
    }
    json entry;
    entry["utt_id"] = utt.utt_id;
    entry["file"] = file;
    entry["text"] = text;
    entry["tokens"] = utt.reference_token_names;
    entry["planted_spike_frames"] = utt.planted_spike_frames;
    manifest["utterances"].push_back(entry);
    refs << json{{"utt_id", utt.utt_id}, {"text", text}}.dump() << "\n";
    token_refs << json{{"utt_id", utt.utt_id}, {"text", token_text}}.dump()
               << "\n";
  }
  std::ofstream manifest_out(out_dir + "/manifest.json");
  manifest_out << manifest.dump(2) << "\n";
  std::cerr << "wrote " << corpus.size() << " posterior files to " << out_dir
            << "\n";
  return kExitOk;
}

std::vector<swd::BatchItem> LoadPosteriors(const std::string &path) {
  std::vector<swd::BatchItem> items;
  if (fs::is_directory(path)) {
    std::vector<std::string> files;
    for (const auto &entry : fs::directory_iterator(path)) {
      if (entry.path().extension() == ".ctcp") {
        files.push_back(entry.path().string());
      }
    }
    std::sort(files.begin(), files.end());
    for (const std::string &file : files) {
      items.push_back(
          {fs::path(file).stem().string(), swd::ReadPosteriorsFile(file)});
    }
  } else {
    items.push_back(
        {fs::path(path).stem().string(), swd::ReadPosteriorsFile(path)});
  }
  if (items.empty()) {
    throw swd::FormatError("no .ctcp posterior files under " + path);
  }
  return items;
}

// CTC greedy search, reported in the same JSON-lines shape as graph decodes.
int RunGreedy(const swd::GraphBundle &bundle,
              const std::vector<swd::BatchItem> &items, std::ostream &out) {
  swd::BatchResult batch;
  for (const auto &item : items) {
    batch.utt_ids.push_back(item.utt_id);
    swd::DecodeResult result;
    std::string error;
    auto t0 = std::chrono::steady_clock::now();
    try {
      if (item.matrix.VocabSize() != bundle.token_syms.NumSymbols() - 1) {
        throw std::invalid_argument("posterior vocabulary does not match the "
                                    "graph token alphabet");
      }
      double cost = 0.0;
      for (int32_t t = 0; t < item.matrix.NumFrames(); ++t) {
        cost -= item.matrix.Value(t, item.matrix.ArgmaxRow(t));
      }
      for (int32_t column : swd::GreedyCtc(item.matrix)) {
        result.words.push_back(bundle.token_syms.Name(column + 1));
        result.word_ids.push_back(column + 1);
      }
      result.total_cost = cost;
      result.frames_decoded = item.matrix.NumFrames();
      result.total_frames = item.matrix.NumFrames();
    } catch (const std::exception &e) {
      error = e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    result.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    batch.total_wall_ms += result.wall_ms;
    batch.results.push_back(std::move(result));
    batch.errors.push_back(error);
  }
  swd::WriteResultsJsonl(batch, out);
  return kExitOk;
}

int RunDecode(const std::string &graph_dir, const std::string &posteriors_path,
              const std::string &strategy_spec, double beam_width,
              int32_t max_active, double ac_scale, int32_t jobs,
              const std::string &out_path) {
  swd::GraphBundle bundle = swd::LoadGraphBundle(graph_dir);
  std::vector<swd::BatchItem> items = LoadPosteriors(posteriors_path);

  std::ofstream file_out;
  if (out_path != "-") {
    file_out.open(out_path);
    if (!file_out) throw swd::FormatError("cannot write " + out_path);
  }
  std::ostream &out = out_path == "-" ? std::cout : file_out;

  if (strategy_spec == "greedy") {
    return RunGreedy(bundle, items, out);
  }
  swd::Strategy strategy = swd::Strategy::Parse(strategy_spec);
  swd::Beam beam{beam_width, max_active};
  swd::BatchResult batch =
      swd::DecodeBatch(bundle, items, strategy, beam, ac_scale, jobs);
  swd::WriteResultsJsonl(batch, out);

  int64_t failed = 0, frames = 0, total = 0;
  for (size_t i = 0; i < batch.results.size(); ++i) {
    if (!batch.errors[i].empty()) {
      ++failed;
      std::cerr << batch.utt_ids[i] << ": " << batch.errors[i] << "\n";
      continue;
    }
    frames += batch.results[i].frames_decoded;
    total += batch.results[i].total_frames;
  }
  std::cerr << strategy.ToString() << ": decoded "
            << (batch.results.size() - failed) << "/" << batch.results.size()
            << " utterances, " << frames << "/" << total << " frames, "
            << batch.total_wall_ms << " ms decode time\n";
  if (failed == static_cast<int64_t>(batch.results.size())) return kExitDecode;
  return kExitOk;
}

int RunScore(const std::string &refs_path, const std::string &hyps_path,
             const std::string &unit_name) {
  swd::ScoreUnit unit;
  if (unit_name == "char") {
    unit = swd::ScoreUnit::kChar;
  } else if (unit_name == "token") {
    unit = swd::ScoreUnit::kToken;
  } else {
    throw std::invalid_argument("bad --unit \"" + unit_name +
                                "\"; expected char or token");
  }
  auto refs = ReadUttTextJsonl(refs_path);
  auto hyps = ReadUttTextJsonl(hyps_path);
  swd::ScoreReport report = swd::ScoreCorpus(refs, hyps, unit);
  for (const auto &utt : report.per_utterance) {
    if (utt.missing_hypothesis) {
      std::cerr << "warning: no hypothesis for " << utt.utt_id
                << "; counting the whole reference as deleted\n";
    }
  }
  json out;
  out["cer"] = report.cer;
  out["substitutions"] = report.substitutions;
  out["insertions"] = report.insertions;
  out["deletions"] = report.deletions;
  out["reference_length"] = report.reference_length;
  out["utterances"] = report.per_utterance.size();
  out["missing_hypotheses"] = report.missing_hypotheses;
  json per_utt = json::array();
  for (const auto &utt : report.per_utterance) {
    per_utt.push_back({{"utt_id", utt.utt_id},
                       {"distance", utt.counts.distance},
                       {"substitutions", utt.counts.substitutions},
                       {"insertions", utt.counts.insertions},
                       {"deletions", utt.counts.deletions},
                       {"reference_length", utt.reference_length}});
  }
  out["per_utterance"] = per_utt;
  std::cout << out.dump() << "\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%8s %8s %8s %10s %8s\n", "S", "I", "D",
                "ref-len", "CER%");
  std::cout << line;
  std::snprintf(line, sizeof(line), "%8lld %8lld %8lld %10lld %8.2f\n",
                static_cast<long long>(report.substitutions),
                static_cast<long long>(report.insertions),
                static_cast<long long>(report.deletions),
                static_cast<long long>(report.reference_length), report.cer);
  std::cout << line;
  return kExitOk;
}

int RunBench(const std::vector<std::string> &result_specs,
             const std::string &baseline) {
  std::vector<swd::StrategyRun> runs;
  for (const std::string &spec : result_specs) {
    auto eq = spec.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("bad --results entry \"" + spec +
                                  "\"; expected name=path");
    }
    swd::StrategyRun run;
    run.name = spec.substr(0, eq);
    std::string path = spec.substr(eq + 1);
    int line_no = 0;
    for (const std::string &line : ReadLines(path)) {
      ++line_no;
      if (line.empty()) continue;
      json parsed;
      try {
        parsed = json::parse(line);
      } catch (const json::exception &e) {
        throw swd::FormatError(path + ":" + std::to_string(line_no) + ": " +
                               e.what());
      }
      if (parsed.contains("error")) continue;
      run.records.push_back({parsed.at("utt_id").get<std::string>(),
                             parsed.at("wall_ms").get<double>(),
                             parsed.at("frames_decoded").get<int64_t>(),
                             parsed.at("total_frames").get<int64_t>()});
    }
    runs.push_back(std::move(run));
  }
  swd::BenchReport report = swd::BenchCompare(runs, baseline);
  json out;
  out["baseline"] = report.baseline;
  out["strategies"] = json::array();
  for (const auto &entry : report.entries) {
    out["strategies"].push_back({{"name", entry.name},
                                 {"total_wall_ms", entry.total_wall_ms},
                                 {"frames_decoded", entry.frames_decoded},
                                 {"total_frames", entry.total_frames},
                                 {"speedup", entry.speedup},
                                 {"frame_reduction", entry.frame_reduction}});
  }
  std::cout << out.dump() << "\n";
  char line[200];
  std::snprintf(line, sizeof(line), "%-16s %12s %10s %12s %10s %8s\n",
                "strategy", "total-ms", "frames", "total-frames", "reduction",
                "speedup");
  std::cout << line;
  for (const auto &entry : report.entries) {
    std::snprintf(line, sizeof(line), "%-16s %12.2f %10lld %12lld %10.2f %7.2fx\n",
                  entry.name.c_str(), entry.total_wall_ms,
                  static_cast<long long>(entry.frames_decoded),
                  static_cast<long long>(entry.total_frames),
                  entry.frame_reduction, entry.speedup);
    std::cout << line;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"CTC spike-window WFST decoding toolkit"};
  app.require_subcommand(1);

  auto *build = app.add_subcommand("build-graph", "Build a TLG graph bundle");
  std::string lexicon_path, arpa_path, out_dir;
  std::string recipe = "det-min";
  double lm_scale = 1.0;
  build->add_option("--lexicon", lexicon_path, "word<TAB>tokens lexicon file")
      ->required();
  build->add_option("--arpa", arpa_path, "ARPA n-gram language model")
      ->required();
  build->add_option("--recipe", recipe, "det-min | det-push-min")
      ->check(CLI::IsMember({"det-min", "det-push-min"}));
  build->add_option("--lm-scale", lm_scale, "grammar cost scale (default 1.0)");
  build->add_option("--out-dir", out_dir, "output bundle directory")->required();

  auto *gen = app.add_subcommand("gen-synth",
                                 "Generate synthetic spiky CTC posteriors");
  std::string corpus_path, synth_lexicon, config_path, synth_out;
  gen->add_option("--corpus", corpus_path, "one utterance per line")->required();
  gen->add_option("--lexicon", synth_lexicon, "word<TAB>tokens lexicon file")
      ->required();
  gen->add_option("--config", config_path, "JSON generator config");
  gen->add_option("--out-dir", synth_out, "output directory")->required();

  auto *decode = app.add_subcommand("decode", "Decode posterior files");
  std::string graph_dir, posteriors_path, out_path = "-";
  std::string strategy = "dense";
  double beam_width = 16.0, ac_scale = 1.0;
  int32_t max_active = 7000;
  int32_t jobs = 1;
  if (const char *env_jobs = std::getenv("SWD_JOBS")) {
    jobs = std::max(1, std::atoi(env_jobs));
  }
  decode->add_option("--graph", graph_dir, "graph bundle directory")->required();
  decode->add_option("--posteriors", posteriors_path,
                     ".ctcp file or directory of them")
      ->required();
  decode->add_option("--strategy", strategy,
                     "dense | swd:<side>:<w> | lsd:<t> | discard | average | "
                     "greedy");
  decode->add_option("--beam", beam_width, "beam width (default 16)");
  decode->add_option("--max-active", max_active,
                     "max surviving hypotheses per frame (default 7000)");
  decode->add_option("--ac-scale", ac_scale, "acoustic scale (default 1.0)");
  decode->add_option("--jobs", jobs, "utterance-level parallelism ($SWD_JOBS)");
  decode->add_option("--out", out_path, "JSON-lines output path, - for stdout");

  auto *score = app.add_subcommand("score", "Score hypotheses against references");
  std::string refs_path, hyps_path, unit = "char";
  score->add_option("--refs", refs_path, "JSON-lines {utt_id, text}")->required();
  score->add_option("--hyps", hyps_path, "JSON-lines {utt_id, text|words}")
      ->required();
  score->add_option("--unit", unit, "char | token");

  auto *bench = app.add_subcommand("bench", "Compare decode timing across runs");
  std::vector<std::string> result_specs;
  std::string baseline;
  bench->add_option("--results", result_specs, "name=results.jsonl (repeat)")
      ->required();
  bench->add_option("--baseline", baseline, "baseline strategy name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (build->parsed()) {
      return RunBuildGraph(lexicon_path, arpa_path, recipe, lm_scale, out_dir);
    }
    if (gen->parsed()) {
      return RunGenSynth(corpus_path, synth_lexicon, config_path, synth_out);
    }
    if (decode->parsed()) {
      return RunDecode(graph_dir, posteriors_path, strategy, beam_width,
                       max_active, ac_scale, jobs, out_path);
    }
    if (score->parsed()) {
      return RunScore(refs_path, hyps_path, unit);
    }
    if (bench->parsed()) {
      return RunBench(result_specs, baseline);
    }
  } catch (const swd::DecodeError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDecode;
  } catch (const swd::FormatError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
