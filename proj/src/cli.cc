// Copyright 2026 The wordweight Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wordweight/cli.h"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wordweight/analysis.h"
#include "wordweight/attribution.h"
#include "wordweight/corpus.h"
#include "wordweight/dump.h"
#include "wordweight/encoder.h"
#include "wordweight/infostats.h"
#include "wordweight/rng.h"
#include "wordweight/sgns.h"
#include "wordweight/verify.h"

namespace wordweight::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

// JSON config files for CLI11. Nested objects become subcommand sections.
class ConfigJson : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool default_also, bool,
                        std::string) const override {
    return ToJson(app, default_also).dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json j = json::parse(input, nullptr, false);
    if (j.is_discarded()) throw CLI::ConversionError("config file is not valid JSON");
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<CLI::ConfigItem> items;
    Flatten(j, {}, items);
    return items;
  }

 private:
  static json ToJson(const CLI::App* app, bool default_also) {
    json j = json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
      const std::string name = opt->get_lnames().front();
      if (opt->count() > 0) {
        const auto& results = opt->results();
        if (results.size() == 1) {
          j[name] = results.front();
        } else {
          j[name] = results;
        }
      } else if (default_also && !opt->get_default_str().empty()) {
        j[name] = opt->get_default_str();
      }
    }
    for (const CLI::App* sub : app->get_subcommands({})) {
      json s = ToJson(sub, default_also);
      if (!s.empty()) j[sub->get_name()] = std::move(s);
    }
    return j;
  }

  static std::string Scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config values must be strings, numbers, booleans or arrays");
  }

  static void Flatten(const json& obj, const std::vector<std::string>& parents,
                      std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_object()) {
        auto next = parents;
        next.push_back(key);
        Flatten(value, next, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      std::replace(item.name.begin(), item.name.end(), '_', '-');
      if (value.is_array()) {
        for (const json& v : value) item.inputs.push_back(Scalar(v));
      } else {
        item.inputs.push_back(Scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

struct Inputs {
  std::vector<std::pair<std::string, fs::path>> files;
  void Add(std::string role, const fs::path& path) {
    files.emplace_back(std::move(role), path);
  }
};

// Merges this stage's entry into <out>/run-manifest.json.
void WriteManifest(const fs::path& out_dir, const std::string& stage,
                   std::uint64_t seed, std::optional<std::uint64_t> stage_seed,
                   const json& params, const Inputs& inputs,
                   const std::vector<std::string>& outputs) {
  const fs::path path = out_dir / "run-manifest.json";
  json manifest = json::object();
  if (fs::exists(path)) {
    std::ifstream in(path);
    manifest = json::parse(in, nullptr, false);
    if (manifest.is_discarded() || !manifest.is_object()) manifest = json::object();
  }
  manifest["tool"] = "wordweight";
  manifest["version"] = kVersion;
  json entry = json::object();
  entry["seed"] = seed;
  if (stage_seed) entry["stage_seed"] = *stage_seed;
  entry["params"] = params;
  json in_json = json::object();
  for (const auto& [role, file] : inputs.files) {
    in_json[role] = {{"path", file.string()}, {"sha256", Sha256File(file)}};
  }
  entry["inputs"] = std::move(in_json);
  json out_json = json::object();
  for (const auto& name : outputs) {
    out_json[name] = Sha256File(out_dir / name);
  }
  entry["outputs"] = std::move(out_json);
  manifest["runs"][stage] = std::move(entry);
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << manifest.dump(2) << '\n';
}

void PrepareOutDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error("cannot create output directory " + dir.string());
  }
}

void RequireFile(const fs::path& path, const std::string& what) {
  if (!fs::is_regular_file(path)) {
    throw Error(what + " file " + path.string() + " does not exist");
  }
}

template <typename Fn>
void WriteFile(const fs::path& path, Fn&& body) {
  std::ofstream out(path, std::ios::trunc | std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  body(out);
  if (!out) throw Error("failed writing " + path.string());
}

infostats::TokenQuantities LoadQuantities(const fs::path& path) {
  RequireFile(path, "quantities");
  std::ifstream in(path);
  try {
    return infostats::ReadQuantitiesCsv(in);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

std::pair<std::string, fs::path> ParseLabeled(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) return {fs::path(spec).stem().string(), spec};
  if (eq == 0) throw Error("empty label in '" + spec + "'");
  return {spec.substr(0, eq), spec.substr(eq + 1)};
}

// CLI11 reports missing required options before unknown ones; a typo in a
// flag name should be reported as itself.
std::optional<std::string> FindUnknownFlag(CLI::App& app, int argc,
                                           const char* const* argv) {
  CLI::App* sub = nullptr;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (!sub && arg.rfind('-', 0) != 0) {
      sub = app.get_subcommand_no_throw(arg);
      continue;
    }
    if (arg.rfind("--", 0) != 0 || arg.size() == 2) continue;
    arg = arg.substr(0, arg.find('='));
    const bool known = app.get_option_no_throw(arg) != nullptr ||
                       (sub && sub->get_option_no_throw(arg) != nullptr);
    if (!known) return arg;
  }
  return std::nullopt;
}

struct Global {
  std::uint64_t seed = 1;
};

// ---------------------------------------------------------------------------

struct GenCorpusOpts {
  fs::path out;
  corpus::GeneratorParams params;
};

void RunGenCorpus(const GenCorpusOpts& o, const Global& g, std::ostream& log) {
  corpus::GeneratorParams p = o.params;
  p.seed = g.seed;
  p.Validate();
  PrepareOutDir(o.out);
  const auto generated = corpus::GenerateCorpus(p);
  corpus::SaveCorpus(generated.corpus, generated.vocab, o.out / "corpus.txt");
  generated.vocab.Save(o.out / "vocab.txt");
  const json params = {{"num_topics", p.num_topics},
                       {"vocab_size", p.vocab_size},
                       {"num_sentences", p.num_sentences},
                       {"min_len", p.min_sentence_len},
                       {"max_len", p.max_sentence_len},
                       {"function_word_fraction", p.function_word_fraction},
                       {"zipf_exponent", p.zipf_exponent}};
  WriteManifest(o.out, "gen-corpus", g.seed, std::nullopt, params, {},
                {"corpus.txt", "vocab.txt"});
  log << "wrote " << generated.corpus.size() << " sentences, "
      << generated.corpus.NumTokens() << " tokens, vocabulary "
      << generated.vocab.size() << " to " << o.out.string() << '\n';
}

struct StatsOpts {
  fs::path out, corpus, vocab;
  double smoothing = 0.0;
  double sif_a = 1e-3;
};

corpus::LoadedCorpus LoadCorpusMaybeVocab(const fs::path& corpus_path,
                                          const fs::path& vocab_path,
                                          Inputs& inputs) {
  RequireFile(corpus_path, "corpus");
  inputs.Add("corpus", corpus_path);
  if (vocab_path.empty()) return corpus::LoadCorpus(corpus_path);
  RequireFile(vocab_path, "vocabulary");
  inputs.Add("vocab", vocab_path);
  corpus::LoadedCorpus lc;
  lc.vocab = corpus::Vocab::Load(vocab_path);
  lc.corpus = corpus::LoadCorpus(corpus_path, lc.vocab);
  return lc;
}

void RunStats(const StatsOpts& o, const Global& g, std::ostream& log) {
  Inputs inputs;
  const auto lc = LoadCorpusMaybeVocab(o.corpus, o.vocab, inputs);
  PrepareOutDir(o.out);
  infostats::QuantityOptions q;
  q.smoothing = o.smoothing;
  q.sif_a = o.sif_a;
  const auto table = infostats::QuantitiesTable(lc.corpus, lc.vocab, q);
  WriteFile(o.out / "quantities.csv",
            [&](std::ostream& out) { infostats::WriteQuantitiesCsv(table, out); });
  WriteManifest(o.out, "stats", g.seed, std::nullopt,
                {{"smoothing", o.smoothing}, {"sif_a", o.sif_a}}, inputs,
                {"quantities.csv"});
  log << "wrote quantities for " << table.rows.size() << " tokens\n";
}

struct TrainSgnsOpts {
  fs::path out, corpus, vocab;
  sgns::SgnsConfig config;
};

void RunTrainSgns(const TrainSgnsOpts& o, const Global& g, std::ostream& log) {
  Inputs inputs;
  const auto lc = LoadCorpusMaybeVocab(o.corpus, o.vocab, inputs);
  PrepareOutDir(o.out);
  sgns::SgnsConfig cfg = o.config;
  cfg.seed = DeriveSeed(g.seed, "train-sgns");
  sgns::TrainStats stats;
  const auto emb = sgns::TrainSgns(lc.corpus, lc.vocab.size(), cfg, &stats);
  sgns::SaveEmbeddings(emb, o.out / "sgns.bin");
  if (o.vocab.empty()) lc.vocab.Save(o.out / "vocab.txt");
  WriteFile(o.out / "sgns-train.json", [&](std::ostream& out) {
    out << json{{"epoch_mean_loss", stats.epoch_mean_loss},
                {"pairs_per_epoch", stats.pairs_per_epoch}}
               .dump(2)
        << '\n';
  });
  std::vector<std::string> outputs{"sgns.bin", "sgns-train.json"};
  if (o.vocab.empty()) outputs.push_back("vocab.txt");
  WriteManifest(o.out, "train-sgns", g.seed, cfg.seed,
                {{"dim", cfg.dim},
                 {"epochs", cfg.epochs},
                 {"lr", cfg.lr},
                 {"negatives", cfg.negatives},
                 {"neg_exponent", cfg.neg_exponent},
                 {"workers", cfg.workers}},
                inputs, outputs);
  for (std::size_t e = 0; e < stats.epoch_mean_loss.size(); ++e) {
    log << "epoch " << e + 1 << " mean loss " << stats.epoch_mean_loss[e] << '\n';
  }
}

struct NormCheckOpts {
  fs::path out, embeddings, quantities, vocab;
  std::int64_t min_count = 5;
};

void RunNormCheck(const NormCheckOpts& o, const Global& g, std::ostream& log) {
  Inputs inputs;
  RequireFile(o.embeddings, "embeddings");
  RequireFile(o.vocab, "vocabulary");
  inputs.Add("embeddings", o.embeddings);
  inputs.Add("quantities", o.quantities);
  inputs.Add("vocab", o.vocab);
  const auto emb = sgns::LoadEmbeddings(o.embeddings);
  const auto q = LoadQuantities(o.quantities);
  const auto vocab = corpus::Vocab::Load(o.vocab);
  PrepareOutDir(o.out);
  const auto r = sgns::NormLawCheck(emb, q, vocab, o.min_count);
  WriteFile(o.out / "norm-law.json", [&](std::ostream& out) {
    out << json{{"pearson", r.pearson},
                {"spearman", r.spearman},
                {"ols_slope", r.ols_slope},
                {"n_tokens", r.n_tokens},
                {"min_count", o.min_count}}
               .dump(2)
        << '\n';
  });
  WriteManifest(o.out, "norm-check", g.seed, std::nullopt,
                {{"min_count", o.min_count}}, inputs, {"norm-law.json"});
  log << "tokens " << r.n_tokens << "  pearson " << r.pearson << "  spearman "
      << r.spearman << "  slope " << r.ols_slope << '\n';
}

struct TrainEncoderOpts {
  fs::path out, corpus, vocab;
  std::string pooler = "mean";
  std::string frame = "auto";
  int dim = 32;
  int hidden = 0;
  double init_scale = 0.0;
  std::optional<double> lr;  // unset: 0.5 for mean, 0.05 for mlp
  encoder::TrainConfig train;
};

void RunTrainEncoder(const TrainEncoderOpts& o, const Global& g, std::ostream& log) {
  Inputs inputs;
  const auto lc = LoadCorpusMaybeVocab(o.corpus, o.vocab, inputs);
  PrepareOutDir(o.out);
  const std::uint64_t stage_seed = DeriveSeed(g.seed, "train-encoder");
  encoder::InitOptions init;
  init.pooler = encoder::ParsePooler(o.pooler);
  init.dim = o.dim;
  init.hidden = o.hidden;
  init.init_scale = o.init_scale;
  init.seed = stage_seed;
  if (o.frame != "auto") init.frame_with_specials = o.frame == "on";
  encoder::TrainConfig cfg = o.train;
  cfg.seed = stage_seed;
  cfg.lr = o.lr.value_or(init.pooler == encoder::Pooler::kMlp ? 0.05 : 0.5);
  const auto initial = encoder::InitEncoder(lc.vocab.size(), init);
  encoder::TrainStats stats;
  const auto trained = encoder::TrainContrastive(lc.corpus, initial, cfg, &stats);
  encoder::SaveModel(initial, o.out / "encoder_init.senc");
  encoder::SaveModel(trained, o.out / "encoder.senc");
  if (o.vocab.empty()) lc.vocab.Save(o.out / "vocab.txt");
  WriteFile(o.out / "encoder-train.json", [&](std::ostream& out) {
    out << json{{"initial_mean_loglik", stats.initial_mean_loglik},
                {"final_mean_loglik", stats.final_mean_loglik}}
               .dump(2)
        << '\n';
  });
  std::vector<std::string> outputs{"encoder_init.senc", "encoder.senc",
                                   "encoder-train.json"};
  if (o.vocab.empty()) outputs.push_back("vocab.txt");
  WriteManifest(o.out, "train-encoder", g.seed, stage_seed,
                {{"pooler", o.pooler},
                 {"frame", trained.frame_with_specials},
                 {"dim", o.dim},
                 {"hidden", trained.hidden()},
                 {"init_scale", o.init_scale},
                 {"steps", cfg.steps},
                 {"lr", cfg.lr},
                 {"batch", cfg.batch},
                 {"neg_per_pos", cfg.neg_per_pos}},
                inputs, outputs);
  log << "mean pair log-likelihood " << stats.initial_mean_loglik << " -> "
      << stats.final_mean_loglik << '\n';
}

struct AttributeOpts {
  fs::path out, model, corpus, vocab;
  std::string model_id;
  std::string method = "ig";
  std::string dump_name = "attributions.jsonl";
  std::size_t limit = 0;
  attribution::AttributionOptions options;
};

int RunAttribute(const AttributeOpts& o, const Global& g, std::ostream& log,
                 std::ostream& err) {
  Inputs inputs;
  RequireFile(o.model, "model");
  RequireFile(o.vocab, "vocabulary");
  RequireFile(o.corpus, "corpus");
  inputs.Add("model", o.model);
  inputs.Add("corpus", o.corpus);
  inputs.Add("vocab", o.vocab);
  const auto params = encoder::LoadModel(o.model);
  const auto vocab = corpus::Vocab::Load(o.vocab);
  if (params.vocab_size() != vocab.size()) {
    throw Error("model vocabulary size " + std::to_string(params.vocab_size()) +
                " does not match vocabulary file size " + std::to_string(vocab.size()));
  }
  auto tokenized = corpus::LoadCorpus(o.corpus, vocab);
  if (o.limit > 0 && o.limit < tokenized.sentences.size()) {
    tokenized.sentences.resize(o.limit);
  }
  PrepareOutDir(o.out);

  attribution::AttributionOptions opts = o.options;
  opts.method = attribution::ParseMethod(o.method);
  const std::uint64_t stage_seed = DeriveSeed(g.seed, "attribute");
  opts.seed = stage_seed;
  const auto results = attribution::AttributeCorpus(params, tokenized, vocab, opts);

  const std::string model_id = o.model_id.empty() ? o.model.stem().string() : o.model_id;
  const std::string baseline(attribution::BaselineName(
      opts.method == attribution::Method::kIg ? attribution::BaselineKind::kPadSequence
                                              : attribution::BaselineKind::kMaskSequence));
  const json meta = {{"baseline", baseline}, {"framed", params.frame_with_specials}};
  std::vector<dump::Record> records;
  std::vector<std::string> failures;
  for (const auto& r : results) {
    if (!r.ok()) {
      failures.push_back("sentence " + std::to_string(r.sentence_id) + ": " + r.error);
      continue;
    }
    records.push_back(dump::FromAttribution(r, model_id, o.method,
                                            encoder::PoolerName(params.pooler), meta));
  }
  dump::SaveDump(records, o.out / o.dump_name);
  std::vector<std::string> outputs{o.dump_name};
  if (!failures.empty()) {
    WriteFile(o.out / "failures.txt", [&](std::ostream& out) {
      for (const auto& f : failures) out << f << '\n';
    });
    outputs.push_back("failures.txt");
  }
  WriteManifest(o.out, "attribute", g.seed, stage_seed,
                {{"method", o.method},
                 {"model_id", model_id},
                 {"steps", opts.steps},
                 {"max_n", opts.max_n},
                 {"samples", opts.samples},
                 {"dump_name", o.dump_name},
                 {"limit", o.limit}},
                inputs, outputs);
  log << "attributed " << records.size() << " of " << results.size() << " sentences\n";
  if (!failures.empty()) {
    for (const auto& f : failures) err << "failed: " << f << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

struct RegressionFlags {
  std::vector<std::string> quantities{"kl"};
  double percentile_cap = -1.0;
  std::size_t subsample = 0;
  double min_coverage = 0.9;

  analysis::RegressionOptions Options(analysis::Quantity q, std::uint64_t seed) const {
    analysis::RegressionOptions r;
    r.quantity = q;
    if (percentile_cap >= 0.0) r.percentile_cap = percentile_cap;
    r.subsample = subsample;
    r.seed = seed;
    r.min_coverage = min_coverage;
    return r;
  }

  json ToJson() const {
    json j = {{"quantity", quantities},
              {"subsample", subsample},
              {"min_coverage", min_coverage}};
    j["percentile_cap"] = percentile_cap >= 0.0 ? json(percentile_cap) : json(nullptr);
    return j;
  }
};

void AddRegressionFlags(CLI::App* sub, RegressionFlags& f) {
  sub->add_option("--quantity", f.quantities, "kl | self_info | idf | sif (repeatable)")
      ->check(CLI::IsMember({"kl", "self_info", "idf", "sif"}))
      ->capture_default_str();
  sub->add_option("--percentile-cap", f.percentile_cap,
                  "drop points above this percentile of the quantity (0-100)");
  sub->add_option("--subsample", f.subsample, "keep this many random points (0 = all)")
      ->capture_default_str();
  sub->add_option("--min-coverage", f.min_coverage,
                  "minimum fraction of occurrences joined to quantities")
      ->capture_default_str();
}

struct RegressOpts {
  fs::path out, dump, quantities;
  bool scatter = false;
  RegressionFlags flags;
};

void RunRegress(const RegressOpts& o, const Global& g, std::ostream& log) {
  Inputs inputs;
  RequireFile(o.dump, "dump");
  inputs.Add("dump", o.dump);
  inputs.Add("quantities", o.quantities);
  const auto records = dump::LoadDump(o.dump);
  const auto q = LoadQuantities(o.quantities);
  PrepareOutDir(o.out);
  const std::uint64_t stage_seed = DeriveSeed(g.seed, "regress");
  json results = json::object();
  std::vector<std::string> outputs;
  for (const auto& name : o.flags.quantities) {
    const auto quantity = analysis::ParseQuantity(name);
    const auto input = analysis::BuildRegression(records, q, o.flags.Options(quantity, stage_seed));
    const auto fit = analysis::Fit(input);
    results[name] = {{"beta", fit.beta},
                     {"intercept", fit.intercept},
                     {"r2", fit.r2},
                     {"n_points", fit.n_points},
                     {"coverage", input.coverage()},
                     {"stoplisted", input.stoplisted},
                     {"missing", input.missing},
                     {"capped", input.capped}};
    if (input.cap_value) results[name]["cap_value"] = *input.cap_value;
    log << name << ": R2 x 100 = " << analysis::FormatValue(100 * fit.r2)
        << ", beta x 100 = " << analysis::FormatValue(100 * fit.beta) << ", n = "
        << fit.n_points << '\n';
    if (o.scatter) {
      const std::string stem = "scatter_" + name;
      analysis::ScatterExport(input, fit, o.out / (stem + ".csv"), o.out / (stem + ".svg"));
      outputs.push_back(stem + ".csv");
      outputs.push_back(stem + ".svg");
    }
  }
  WriteFile(o.out / "regression.json",
            [&](std::ostream& out) { out << results.dump(2) << '\n'; });
  outputs.insert(outputs.begin(), "regression.json");
  json params = o.flags.ToJson();
  params["scatter"] = o.scatter;
  WriteManifest(o.out, "regress", g.seed, stage_seed, params, inputs, outputs);
}

struct ReportOpts {
  fs::path out, quantities;
  std::vector<std::string> dumps;
  std::string baseline;
  RegressionFlags flags;
};

void RunReport(const ReportOpts& o, const Global& g, std::ostream& log) {
  Inputs inputs;
  inputs.Add("quantities", o.quantities);
  const auto q = LoadQuantities(o.quantities);
  std::vector<std::pair<std::string, std::vector<dump::Record>>> dumps;
  for (const auto& spec : o.dumps) {
    auto [label, path] = ParseLabeled(spec);
    RequireFile(path, "dump");
    inputs.Add("dump:" + label, path);
    dumps.emplace_back(label, dump::LoadDump(path));
  }
  const std::string baseline = o.baseline.empty() ? dumps.front().first : o.baseline;
  PrepareOutDir(o.out);
  const std::uint64_t stage_seed = DeriveSeed(g.seed, "report");
  std::vector<analysis::ReportEntry> entries;
  for (const auto& name : o.flags.quantities) {
    const auto quantity = analysis::ParseQuantity(name);
    for (const auto& [label, records] : dumps) {
      const auto input =
          analysis::BuildRegression(records, q, o.flags.Options(quantity, stage_seed));
      entries.push_back({label, quantity, analysis::Fit(input)});
    }
  }
  const auto rows = analysis::CompareModels(entries, baseline);
  WriteFile(o.out / "report.csv", [&](std::ostream& out) { analysis::WriteReportCsv(rows, out); });
  WriteFile(o.out / "report.txt", [&](std::ostream& out) { analysis::WriteReportText(rows, out); });
  json params = o.flags.ToJson();
  params["baseline"] = baseline;
  WriteManifest(o.out, "report", g.seed, stage_seed, params, inputs,
                {"report.csv", "report.txt"});
  analysis::WriteReportText(rows, log);
}

struct SentenceViewOpts {
  fs::path out, quantities;
  std::vector<std::string> dumps;
  std::vector<std::int64_t> ids;
};

void RunSentenceView(const SentenceViewOpts& o, const Global& g, std::ostream& log) {
  Inputs inputs;
  inputs.Add("quantities", o.quantities);
  const auto q = LoadQuantities(o.quantities);
  std::vector<analysis::LabeledDump> dumps;
  for (const auto& spec : o.dumps) {
    auto [label, path] = ParseLabeled(spec);
    RequireFile(path, "dump");
    inputs.Add("dump:" + label, path);
    dumps.push_back({label, dump::LoadDump(path)});
  }
  const auto series = analysis::SentenceView(dumps, q, o.ids);
  PrepareOutDir(o.out);
  WriteFile(o.out / "sentence-view.csv",
            [&](std::ostream& out) { analysis::WriteSentenceViewCsv(series, out); });
  WriteManifest(o.out, "sentence-view", g.seed, std::nullopt, {{"sentence_id", o.ids}},
                inputs, {"sentence-view.csv"});
  for (const auto& s : series) {
    log << "sentence " << s.sentence_id;
    for (std::size_t m = 0; m < s.models.size(); ++m) {
      log << "  " << s.models[m] << " MAD " << std::fixed << std::setprecision(3)
          << analysis::MeanAbsDeviation(s.weights[m], s.kl_normalized);
    }
    log << '\n';
  }
}

struct ValidateDumpOpts {
  fs::path dump;
};

int RunValidateDump(const ValidateDumpOpts& o, std::ostream& log, std::ostream& err) {
  RequireFile(o.dump, "dump");
  std::ifstream in(o.dump);
  const auto report = dump::ValidateDump(in);
  if (!report.ok()) {
    for (const auto& e : report.errors) err << o.dump.string() << ": " << e << '\n';
    return kExitDomain;
  }
  log << o.dump.string() << ": " << report.records << " valid records\n";
  return kExitOk;
}

int RunVerify(const Global& g, std::ostream& log) {
  const auto results = verify::RunAll(g.seed);
  const bool ok = verify::Print(results, log);
  return ok ? kExitOk : kExitDomain;
}

}  // namespace

std::string Sha256File(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                               &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 initialization failed");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0 &&
        EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount())) != 1) {
      throw Error("SHA-256 update failed");
    }
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest;
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw Error("SHA-256 finalization failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Implicit word weighting in sentence encoders: corpus statistics, "
               "toy encoders, attribution and regression."};
  app.name("wordweight");
  app.config_formatter(std::make_shared<ConfigJson>());
  app.set_config("--config", "", "JSON file with option values");
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  Global global;
  app.add_option("--seed", global.seed, "root seed; stages derive their own")
      ->capture_default_str();

  GenCorpusOpts gen;
  auto* gen_cmd = app.add_subcommand("gen-corpus", "generate the synthetic topic corpus");
  gen_cmd->add_option("--out", gen.out, "output directory")->required();
  gen_cmd->add_option("--num-topics", gen.params.num_topics)->capture_default_str();
  gen_cmd->add_option("--vocab-size", gen.params.vocab_size, "content tokens")
      ->capture_default_str();
  gen_cmd->add_option("--num-sentences", gen.params.num_sentences)->capture_default_str();
  gen_cmd->add_option("--min-len", gen.params.min_sentence_len)->capture_default_str();
  gen_cmd->add_option("--max-len", gen.params.max_sentence_len)->capture_default_str();
  gen_cmd->add_option("--function-word-fraction", gen.params.function_word_fraction)
      ->capture_default_str();
  gen_cmd->add_option("--zipf-exponent", gen.params.zipf_exponent)->capture_default_str();

  StatsOpts st;
  auto* stats_cmd = app.add_subcommand("stats", "per-token KL, self-information, IDF, SIF");
  stats_cmd->add_option("--out", st.out, "output directory")->required();
  stats_cmd->add_option("--corpus", st.corpus, "tokenized corpus")->required();
  stats_cmd->add_option("--vocab", st.vocab, "vocabulary file");
  stats_cmd->add_option("--smoothing", st.smoothing, "additive smoothing")->capture_default_str();
  stats_cmd->add_option("--sif-a", st.sif_a, "SIF constant a")->capture_default_str();

  TrainSgnsOpts sg;
  auto* sgns_cmd = app.add_subcommand("train-sgns", "sentence-window skip-gram");
  sgns_cmd->add_option("--out", sg.out, "output directory")->required();
  sgns_cmd->add_option("--corpus", sg.corpus, "tokenized corpus")->required();
  sgns_cmd->add_option("--vocab", sg.vocab, "vocabulary file");
  sgns_cmd->add_option("--dim", sg.config.dim)->capture_default_str();
  sgns_cmd->add_option("--epochs", sg.config.epochs)->capture_default_str();
  sgns_cmd->add_option("--lr", sg.config.lr)->capture_default_str();
  sgns_cmd->add_option("--negatives", sg.config.negatives)->capture_default_str();
  sgns_cmd->add_option("--neg-exponent", sg.config.neg_exponent)->capture_default_str();
  sgns_cmd->add_option("--workers", sg.config.workers,
                       "threads; more than 1 is not bitwise reproducible")
      ->capture_default_str();

  NormCheckOpts nc;
  auto* norm_cmd = app.add_subcommand("norm-check", "correlate 0.5*||w||^2 with KL");
  norm_cmd->add_option("--out", nc.out, "output directory")->required();
  norm_cmd->add_option("--embeddings", nc.embeddings, "SGNS embeddings")->required();
  norm_cmd->add_option("--quantities", nc.quantities, "quantities CSV")->required();
  norm_cmd->add_option("--vocab", nc.vocab, "vocabulary file")->required();
  norm_cmd->add_option("--min-count", nc.min_count)->capture_default_str();

  TrainEncoderOpts te;
  auto* enc_cmd = app.add_subcommand("train-encoder", "contrastive toy sentence encoder");
  enc_cmd->add_option("--out", te.out, "output directory")->required();
  enc_cmd->add_option("--corpus", te.corpus, "tokenized corpus")->required();
  enc_cmd->add_option("--vocab", te.vocab, "vocabulary file");
  enc_cmd->add_option("--pooler", te.pooler)
      ->check(CLI::IsMember({"mean", "mlp"}))
      ->capture_default_str();
  enc_cmd->add_option("--frame", te.frame, "CLS/SEP framing: auto, on or off")
      ->check(CLI::IsMember({"auto", "on", "off"}))
      ->capture_default_str();
  enc_cmd->add_option("--dim", te.dim)->capture_default_str();
  enc_cmd->add_option("--hidden", te.hidden, "MLP width, 0 = dim")->capture_default_str();
  enc_cmd->add_option("--init-scale", te.init_scale, "0 = 1/sqrt(dim)")->capture_default_str();
  enc_cmd->add_option("--steps", te.train.steps)->capture_default_str();
  enc_cmd->add_option("--lr", te.lr, "default 0.5 for mean, 0.05 for mlp");
  enc_cmd->add_option("--batch", te.train.batch)->capture_default_str();
  enc_cmd->add_option("--neg-per-pos", te.train.neg_per_pos)->capture_default_str();

  AttributeOpts at;
  auto* attr_cmd = app.add_subcommand("attribute", "per-token attributions for a corpus");
  attr_cmd->add_option("--out", at.out, "output directory")->required();
  attr_cmd->add_option("--model", at.model, "encoder model (.senc)")->required();
  attr_cmd->add_option("--corpus", at.corpus, "tokenized corpus")->required();
  attr_cmd->add_option("--vocab", at.vocab, "vocabulary file")->required();
  attr_cmd->add_option("--model-id", at.model_id, "defaults to the model file stem");
  attr_cmd->add_option("--method", at.method)
      ->check(CLI::IsMember({"ig", "shapley_exact", "shapley_sampled"}))
      ->capture_default_str();
  attr_cmd->add_option("--steps", at.options.steps, "IG quadrature points")
      ->capture_default_str();
  attr_cmd->add_option("--max-n", at.options.max_n, "exact Shapley length limit")
      ->capture_default_str();
  attr_cmd->add_option("--samples", at.options.samples, "sampled Shapley permutations")
      ->capture_default_str();
  attr_cmd->add_option("--dump-name", at.dump_name)->capture_default_str();
  attr_cmd->add_option("--limit", at.limit, "attribute only the first N sentences (0 = all)")
      ->capture_default_str();

  RegressOpts rg;
  auto* reg_cmd = app.add_subcommand("regress", "OLS of attributions on token quantities");
  reg_cmd->add_option("--out", rg.out, "output directory")->required();
  reg_cmd->add_option("--dump", rg.dump, "attribution dump")->required();
  reg_cmd->add_option("--quantities", rg.quantities, "quantities CSV")->required();
  reg_cmd->add_flag("--scatter", rg.scatter, "also write scatter CSV and SVG");
  AddRegressionFlags(reg_cmd, rg.flags);

  ReportOpts rp;
  auto* rep_cmd = app.add_subcommand("report", "compare models in one table");
  rep_cmd->add_option("--out", rp.out, "output directory")->required();
  rep_cmd->add_option("--dump", rp.dumps, "label=path (repeatable)")->required();
  rep_cmd->add_option("--quantities", rp.quantities, "quantities CSV")->required();
  rep_cmd->add_option("--baseline", rp.baseline, "baseline label (default: first dump)");
  AddRegressionFlags(rep_cmd, rp.flags);

  SentenceViewOpts sv;
  auto* sv_cmd = app.add_subcommand("sentence-view", "per-sentence weights against KL");
  sv_cmd->add_option("--out", sv.out, "output directory")->required();
  sv_cmd->add_option("--dump", sv.dumps, "label=path (repeatable)")->required();
  sv_cmd->add_option("--quantities", sv.quantities, "quantities CSV")->required();
  sv_cmd->add_option("--sentence-id", sv.ids, "sentence ids (repeatable)")->required();

  ValidateDumpOpts vd;
  auto* vd_cmd = app.add_subcommand("validate-dump", "schema-check an attribution dump");
  vd_cmd->add_option("--dump", vd.dump, "attribution dump")->required();

  auto* verify_cmd = app.add_subcommand("verify", "run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    if (auto flag = FindUnknownFlag(app, argc, argv)) {
      err << "unknown option " << *flag << "\nRun with --help for more information.\n";
    } else {
      app.exit(e, out, err);
    }
    err << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (*gen_cmd) RunGenCorpus(gen, global, out);
    if (*stats_cmd) RunStats(st, global, out);
    if (*sgns_cmd) RunTrainSgns(sg, global, out);
    if (*norm_cmd) RunNormCheck(nc, global, out);
    if (*enc_cmd) RunTrainEncoder(te, global, out);
    if (*attr_cmd) return RunAttribute(at, global, out, err);
    if (*reg_cmd) RunRegress(rg, global, out);
    if (*rep_cmd) RunReport(rp, global, out);
    if (*sv_cmd) RunSentenceView(sv, global, out);
    if (*vd_cmd) return RunValidateDump(vd, out, err);
    if (*verify_cmd) return RunVerify(global, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace wordweight::cli
