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

#include "wordweight/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "wordweight/rng.h"

namespace wordweight::corpus {

namespace {

// Splits on ASCII whitespace.
std::vector<std::string_view> SplitTokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f';
  };
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_space(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

template <typename Resolve>
TokenizedCorpus ParseWith(std::istream& in, std::string source,
                          Resolve&& resolve) {
  TokenizedCorpus corpus;
  corpus.source = std::move(source);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = SplitTokens(line);
    if (tokens.empty()) {
      throw Error("empty sentence at line " + std::to_string(line_no));
    }
    std::vector<TokenId> sentence;
    sentence.reserve(tokens.size());
    for (const auto token : tokens) {
      if (IsSpecialToken(token)) {
        throw Error("special token '" + std::string(token) + "' at line " +
                    std::to_string(line_no) +
                    " may not appear in corpus text");
      }
      sentence.push_back(resolve(token, line_no));
    }
    corpus.sentences.push_back(std::move(sentence));
  }
  if (corpus.sentences.empty()) throw Error("empty corpus: " + corpus.source);
  return corpus;
}

std::ifstream OpenInput(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::vector<double> ZipfCdf(int size, double exponent) {
  std::vector<double> cdf(size);
  double total = 0.0;
  for (int r = 0; r < size; ++r) {
    total += 1.0 / std::pow(r + 1.0, exponent);
    cdf[r] = total;
  }
  for (double& c : cdf) c /= total;
  cdf.back() = 1.0;
  return cdf;
}

int SampleCdf(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.Uniform();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(
      it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

}  // namespace

bool IsSpecialToken(std::string_view token) {
  return token == kPadToken || token == kClsToken || token == kSepToken ||
         token == kMaskToken;
}

Vocab::Vocab() {
  for (const auto special : {kPadToken, kClsToken, kSepToken, kMaskToken}) {
    Add(special);
  }
}

TokenId Vocab::Add(std::string_view token) {
  const std::string key(token);
  if (const auto it = ids_.find(key); it != ids_.end()) return it->second;
  const auto id = static_cast<TokenId>(tokens_.size());
  tokens_.push_back(key);
  ids_.emplace(key, id);
  return id;
}

std::optional<TokenId> Vocab::Find(std::string_view token) const {
  const auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void Vocab::Write(std::ostream& out) const {
  for (const auto& token : tokens_) out << token << '\n';
}

void Vocab::Save(const std::filesystem::path& path) const {
  auto out = OpenOutput(path);
  Write(out);
  if (!out) throw Error("failed writing " + path.string());
}

Vocab Vocab::Read(std::istream& in) {
  Vocab vocab;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no <= static_cast<std::size_t>(kNumSpecials)) {
      if (line != vocab.Token(static_cast<TokenId>(line_no - 1))) {
        throw Error("vocab line " + std::to_string(line_no) + " must be " +
                    vocab.Token(static_cast<TokenId>(line_no - 1)));
      }
      continue;
    }
    if (line.empty() || SplitTokens(line).size() != 1) {
      throw Error("malformed vocab entry at line " + std::to_string(line_no));
    }
    if (vocab.Find(line)) {
      throw Error("duplicate vocab entry '" + line + "' at line " +
                  std::to_string(line_no));
    }
    vocab.Add(line);
  }
  if (line_no < static_cast<std::size_t>(kNumSpecials)) {
    throw Error("vocab file is missing the special tokens");
  }
  return vocab;
}

Vocab Vocab::Load(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  return Read(in);
}

std::size_t TokenizedCorpus::NumTokens() const {
  std::size_t total = 0;
  for (const auto& s : sentences) total += s.size();
  return total;
}

LoadedCorpus ParseCorpus(std::istream& in, std::string source) {
  LoadedCorpus loaded;
  loaded.corpus = ParseWith(
      in, std::move(source),
      [&](std::string_view token, std::size_t) { return loaded.vocab.Add(token); });
  return loaded;
}

TokenizedCorpus ParseCorpus(std::istream& in, std::string source,
                            const Vocab& vocab) {
  return ParseWith(in, std::move(source),
                   [&](std::string_view token, std::size_t line_no) {
                     const auto id = vocab.Find(token);
                     if (!id) {
                       throw Error("token '" + std::string(token) +
                                   "' at line " + std::to_string(line_no) +
                                   " is not in the vocabulary");
                     }
                     return *id;
                   });
}

LoadedCorpus LoadCorpus(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  return ParseCorpus(in, path.string());
}

TokenizedCorpus LoadCorpus(const std::filesystem::path& path,
                           const Vocab& vocab) {
  auto in = OpenInput(path);
  return ParseCorpus(in, path.string(), vocab);
}

void WriteCorpus(const TokenizedCorpus& corpus, const Vocab& vocab,
                 std::ostream& out) {
  for (const auto& sentence : corpus.sentences) {
    for (std::size_t i = 0; i < sentence.size(); ++i) {
      if (i > 0) out << ' ';
      out << vocab.Token(sentence[i]);
    }
    out << '\n';
  }
}

void SaveCorpus(const TokenizedCorpus& corpus, const Vocab& vocab,
                const std::filesystem::path& path) {
  auto out = OpenOutput(path);
  WriteCorpus(corpus, vocab, out);
  if (!out) throw Error("failed writing " + path.string());
}

void ValidateCorpus(const TokenizedCorpus& corpus, std::size_t vocab_size) {
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    const auto& sentence = corpus.sentences[s];
    if (sentence.empty()) {
      throw Error("sentence " + std::to_string(s) + " is empty");
    }
    for (const TokenId id : sentence) {
      if (id < 0 || static_cast<std::size_t>(id) >= vocab_size) {
        throw Error("sentence " + std::to_string(s) + " has token id " +
                    std::to_string(id) + " outside vocabulary of size " +
                    std::to_string(vocab_size));
      }
      if (IsSpecial(id)) {
        throw Error("sentence " + std::to_string(s) +
                    " stores a special token");
      }
    }
  }
}

void GeneratorParams::Validate() const {
  if (num_topics < 1) throw Error("num_topics must be positive");
  if (vocab_size <= num_topics) {
    throw Error("vocab_size must exceed num_topics");
  }
  if (num_sentences < 1) throw Error("num_sentences must be positive");
  if (min_sentence_len < 1 || min_sentence_len > max_sentence_len) {
    throw Error("sentence length range must satisfy 1 <= min <= max");
  }
  if (!(function_word_fraction >= 0.0 && function_word_fraction <= 1.0)) {
    throw Error("function_word_fraction must lie in [0, 1]");
  }
  if (!(zipf_exponent > 0.0)) throw Error("zipf_exponent must be positive");
}

int GeneratorParams::NumFunctionWords() const {
  return vocab_size / (num_topics + 1);
}

bool IsGeneratedFunctionWord(std::string_view token) {
  return token.size() > 1 && token[0] == 'f' &&
         std::all_of(token.begin() + 1, token.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

LoadedCorpus GenerateCorpus(const GeneratorParams& params) {
  params.Validate();
  LoadedCorpus out;
  Vocab& vocab = out.vocab;

  const int num_function = params.NumFunctionWords();
  std::vector<TokenId> function_ids;
  for (int r = 0; r < num_function; ++r) {
    function_ids.push_back(vocab.Add("f" + std::to_string(r)));
  }
  const int topical = params.vocab_size - num_function;
  std::vector<std::vector<TokenId>> topic_ids(params.num_topics);
  std::vector<std::vector<double>> topic_cdfs(params.num_topics);
  for (int t = 0; t < params.num_topics; ++t) {
    const int pool = topical / params.num_topics +
                     (t < topical % params.num_topics ? 1 : 0);
    for (int r = 0; r < pool; ++r) {
      topic_ids[t].push_back(
          vocab.Add("t" + std::to_string(t) + "_" + std::to_string(r)));
    }
    topic_cdfs[t] = ZipfCdf(pool, params.zipf_exponent);
  }
  const auto function_cdf = ZipfCdf(num_function, params.zipf_exponent);

  Rng rng(params.seed);
  const auto span_len = static_cast<std::uint64_t>(
      params.max_sentence_len - params.min_sentence_len + 1);
  auto& sentences = out.corpus.sentences;
  sentences.reserve(params.num_sentences);
  for (int s = 0; s < params.num_sentences; ++s) {
    const auto topic = static_cast<int>(rng.Below(params.num_topics));
    const int len = params.min_sentence_len + static_cast<int>(rng.Below(span_len));
    std::vector<TokenId> sentence(len);
    for (TokenId& token : sentence) {
      if (rng.Uniform() < params.function_word_fraction) {
        token = function_ids[SampleCdf(function_cdf, rng)];
      } else {
        token = topic_ids[topic][SampleCdf(topic_cdfs[topic], rng)];
      }
    }
    sentences.push_back(std::move(sentence));
  }

  std::ostringstream source;
  source << "generated(seed=" << params.seed << ",topics=" << params.num_topics
         << ",vocab=" << params.vocab_size
         << ",sentences=" << params.num_sentences << ")";
  out.corpus.source = source.str();
  return out;
}

}  // namespace wordweight::corpus
