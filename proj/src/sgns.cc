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

#include "wordweight/sgns.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "wordweight/binio.h"
#include "wordweight/rng.h"
#include "wordweight/stats.h"

namespace wordweight::sgns {

namespace {

// Cumulative noise distribution over content ids.
class NoiseSampler {
 public:
  NoiseSampler(const corpus::TokenizedCorpus& corpus, std::size_t vocab_size,
               double exponent) {
    std::vector<std::int64_t> counts(vocab_size, 0);
    for (const auto& s : corpus.sentences) {
      for (const TokenId id : s) ++counts[id];
    }
    double total = 0.0;
    for (std::size_t v = corpus::kNumSpecials; v < vocab_size; ++v) {
      if (counts[v] == 0) continue;
      total += std::pow(static_cast<double>(counts[v]), exponent);
      ids_.push_back(static_cast<TokenId>(v));
      cdf_.push_back(total);
    }
    if (ids_.empty()) throw Error("corpus has no content tokens");
    for (double& c : cdf_) c /= total;
    cdf_.back() = 1.0;
  }

  TokenId Sample(Rng& rng) const {
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), rng.Uniform());
    const auto idx = std::min<std::size_t>(it - cdf_.begin(), ids_.size() - 1);
    return ids_[idx];
  }

 private:
  std::vector<TokenId> ids_;
  std::vector<double> cdf_;
};

struct SentenceResult {
  double loss = 0.0;
  std::int64_t pairs = 0;
};

// Sequential SGD over all ordered pairs of one sentence. Returns the summed
// negative objective, evaluated before each update.
SentenceResult TrainSentence(const std::vector<TokenId>& sentence,
                             EmbeddingPair& emb, const NoiseSampler& noise,
                             int negatives, double lr, Rng& rng,
                             std::vector<double>& accum) {
  SentenceResult result;
  const std::size_t dim = emb.word.cols();
  const std::size_t n = sentence.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto w = emb.word.row(sentence[i]);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      std::fill(accum.begin(), accum.end(), 0.0);
      for (int t = 0; t <= negatives; ++t) {
        const TokenId target = t == 0 ? sentence[j] : noise.Sample(rng);
        const double label = t == 0 ? 1.0 : 0.0;
        auto c = emb.context.row(target);
        const double score = Dot(w, c);
        result.loss -= t == 0 ? LogSigmoid(score) : LogSigmoid(-score);
        const double g = lr * (label - Sigmoid(score));
        for (std::size_t k = 0; k < dim; ++k) {
          accum[k] += g * c[k];
          c[k] += g * w[k];
        }
      }
      for (std::size_t k = 0; k < dim; ++k) w[k] += accum[k];
      ++result.pairs;
    }
  }
  return result;
}

void CheckFinite(double loss, int epoch, std::size_t sentence, double lr) {
  if (!std::isfinite(loss)) {
    std::ostringstream msg;
    msg << "non-finite SGNS loss at epoch " << epoch << ", sentence "
        << sentence << " (lr=" << lr << ")";
    throw Error(msg.str());
  }
}

}  // namespace

void SgnsConfig::Validate() const {
  if (dim < 2) throw Error("dim must be at least 2");
  if (epochs < 1) throw Error("epochs must be positive");
  if (!(lr >= 0.0)) throw Error("lr must be non-negative");
  if (negatives < 1) throw Error("negatives must be at least 1");
  if (!std::isfinite(neg_exponent)) throw Error("neg_exponent must be finite");
  if (workers < 1) throw Error("workers must be positive");
}

EmbeddingPair InitEmbeddings(std::size_t vocab_size, int dim,
                             std::uint64_t seed) {
  EmbeddingPair emb{Matrix(vocab_size, dim), Matrix(vocab_size, dim)};
  Rng rng(seed);
  const double half = 0.5 / dim;
  for (double& v : emb.word.data()) v = rng.Uniform(-half, half);
  return emb;
}

EmbeddingPair TrainSgns(const corpus::TokenizedCorpus& corpus,
                        std::size_t vocab_size, const SgnsConfig& config,
                        TrainStats* stats) {
  config.Validate();
  return TrainSgns(corpus,
                   InitEmbeddings(vocab_size, config.dim,
                                  DeriveSeed(config.seed, "sgns-init")),
                   config, stats);
}

EmbeddingPair TrainSgns(const corpus::TokenizedCorpus& corpus,
                        EmbeddingPair emb, const SgnsConfig& config,
                        TrainStats* stats) {
  config.Validate();
  const std::size_t vocab_size = emb.word.rows();
  if (emb.word.cols() != static_cast<std::size_t>(config.dim) ||
      emb.context.rows() != vocab_size ||
      emb.context.cols() != emb.word.cols()) {
    throw Error("embedding shape does not match vocabulary and dim");
  }
  corpus::ValidateCorpus(corpus, vocab_size);
  const NoiseSampler noise(corpus, vocab_size, config.neg_exponent);

  const auto num_sentences = static_cast<std::int64_t>(corpus.sentences.size());
  const double total_steps =
      static_cast<double>(config.epochs) * static_cast<double>(num_sentences);
  const std::uint64_t stream = DeriveSeed(config.seed, "sgns-negatives");
  if (stats) *stats = {};

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    double epoch_loss = 0.0;
    std::int64_t epoch_pairs = 0;
    const auto lr_at = [&](std::int64_t s) {
      const double progress =
          (static_cast<double>(epoch) * num_sentences + s) / total_steps;
      return config.lr * (1.0 - progress);
    };
    if (config.workers == 1) {
      std::vector<double> accum(config.dim);
      for (std::int64_t s = 0; s < num_sentences; ++s) {
        Rng rng(DeriveSeed(stream, epoch * num_sentences + s));
        const double lr = lr_at(s);
        const auto r = TrainSentence(corpus.sentences[s], emb, noise,
                                     config.negatives, lr, rng, accum);
        CheckFinite(r.loss, epoch, s, lr);
        epoch_loss += r.loss;
        epoch_pairs += r.pairs;
      }
    } else {
      // Hogwild: rows are shared without locks across workers.
#pragma omp parallel num_threads(config.workers) reduction(+ : epoch_loss, epoch_pairs)
      {
        std::vector<double> accum(config.dim);
#pragma omp for schedule(dynamic, 64)
        for (std::int64_t s = 0; s < num_sentences; ++s) {
          Rng rng(DeriveSeed(stream, epoch * num_sentences + s));
          const auto r = TrainSentence(corpus.sentences[s], emb, noise,
                                       config.negatives, lr_at(s), rng, accum);
          epoch_loss += r.loss;
          epoch_pairs += r.pairs;
        }
      }
      CheckFinite(epoch_loss, epoch, corpus.sentences.size(), config.lr);
    }
    if (stats) {
      stats->pairs_per_epoch = epoch_pairs;
      stats->epoch_mean_loss.push_back(
          epoch_pairs > 0 ? epoch_loss / static_cast<double>(epoch_pairs) : 0.0);
    }
  }
  return emb;
}

double PairObjective(std::span<const double> word, std::span<const double> ctx,
                     const std::vector<std::span<const double>>& negatives) {
  double value = LogSigmoid(Dot(word, ctx));
  for (const auto& n : negatives) value += LogSigmoid(-Dot(word, n));
  return value;
}

PairGradient PairObjectiveGradient(
    std::span<const double> word, std::span<const double> ctx,
    const std::vector<std::span<const double>>& negatives) {
  const std::size_t dim = word.size();
  PairGradient g;
  g.word.assign(dim, 0.0);
  g.context.assign(dim, 0.0);
  const double pos = 1.0 - Sigmoid(Dot(word, ctx));
  for (std::size_t k = 0; k < dim; ++k) {
    g.word[k] += pos * ctx[k];
    g.context[k] = pos * word[k];
  }
  for (const auto& n : negatives) {
    const double neg = Sigmoid(Dot(word, n));
    std::vector<double> gn(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      g.word[k] -= neg * n[k];
      gn[k] = -neg * word[k];
    }
    g.negatives.push_back(std::move(gn));
  }
  return g;
}

void WriteEmbeddings(const EmbeddingPair& embeddings, std::ostream& out) {
  binio::WriteMagic(out, "SGNS");
  binio::WriteI32(out, static_cast<std::int32_t>(embeddings.word.rows()));
  binio::WriteI32(out, static_cast<std::int32_t>(embeddings.word.cols()));
  binio::WriteF32(out, embeddings.word.data());
  binio::WriteF32(out, embeddings.context.data());
}

EmbeddingPair ReadEmbeddings(std::istream& in) {
  binio::ExpectMagic(in, "SGNS");
  const std::int32_t rows = binio::ReadI32(in);
  const std::int32_t cols = binio::ReadI32(in);
  if (rows <= 0 || cols <= 0) throw Error("invalid SGNS header dimensions");
  EmbeddingPair emb{Matrix(rows, cols), Matrix(rows, cols)};
  binio::ReadF32(in, emb.word.data());
  binio::ReadF32(in, emb.context.data());
  return emb;
}

void SaveEmbeddings(const EmbeddingPair& embeddings,
                    const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  WriteEmbeddings(embeddings, out);
  if (!out) throw Error("failed writing " + path.string());
}

EmbeddingPair LoadEmbeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return ReadEmbeddings(in);
}

NormLawResult NormLawCheck(const EmbeddingPair& embeddings,
                           const infostats::TokenQuantities& quantities,
                           const corpus::Vocab& vocab, std::int64_t min_count) {
  std::vector<double> half_sq_norm;
  std::vector<double> kl;
  for (const auto& row : quantities.rows) {
    if (row.count < min_count) continue;
    const auto id = vocab.Find(row.token);
    if (!id || corpus::IsSpecial(*id)) continue;
    if (static_cast<std::size_t>(*id) >= embeddings.word.rows()) {
      throw Error("token '" + row.token + "' has no embedding row");
    }
    half_sq_norm.push_back(0.5 * SquaredNorm(embeddings.word.row(*id)));
    kl.push_back(row.kl);
  }
  if (half_sq_norm.size() < 10) {
    throw Error("norm-law check needs at least 10 tokens with count >= " +
                std::to_string(min_count) + ", found " +
                std::to_string(half_sq_norm.size()));
  }
  NormLawResult result;
  result.n_tokens = half_sq_norm.size();
  result.pearson = stats::Pearson(half_sq_norm, kl);
  result.spearman = stats::Spearman(half_sq_norm, kl);
  result.ols_slope = stats::Ols(half_sq_norm, kl).beta;
  return result;
}

}  // namespace wordweight::sgns
