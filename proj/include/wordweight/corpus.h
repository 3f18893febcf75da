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

// Tokenized corpora and the vocabulary shared by every other module.
//
// Corpus files are pre-tokenized: one sentence per line, tokens separated by
// whitespace. Nothing here re-tokenizes or normalizes text. The four special
// tokens occupy ids 0..3 of every vocabulary and never appear inside stored
// sentences; encoders add them when framing a sequence.

#ifndef WORDWEIGHT_CORPUS_H_
#define WORDWEIGHT_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "wordweight/common.h"

namespace wordweight::corpus {

inline constexpr TokenId kPad = 0;
inline constexpr TokenId kCls = 1;
inline constexpr TokenId kSep = 2;
inline constexpr TokenId kMask = 3;
inline constexpr TokenId kNumSpecials = 4;

inline constexpr std::string_view kPadToken = "<PAD>";
inline constexpr std::string_view kClsToken = "<CLS>";
inline constexpr std::string_view kSepToken = "<SEP>";
inline constexpr std::string_view kMaskToken = "<MASK>";

inline bool IsSpecial(TokenId id) { return id >= 0 && id < kNumSpecials; }
bool IsSpecialToken(std::string_view token);

// Bijection between token strings and contiguous ids. Ids 0..3 are always
// the specials in the order PAD, CLS, SEP, MASK.
class Vocab {
 public:
  Vocab();

  // Returns the id of `token`, inserting it at the end if absent.
  TokenId Add(std::string_view token);

  std::optional<TokenId> Find(std::string_view token) const;
  const std::string& Token(TokenId id) const { return tokens_.at(id); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // One token per line, line index = id.
  void Write(std::ostream& out) const;
  void Save(const std::filesystem::path& path) const;
  static Vocab Read(std::istream& in);
  static Vocab Load(const std::filesystem::path& path);

  bool operator==(const Vocab& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

struct TokenizedCorpus {
  std::vector<std::vector<TokenId>> sentences;
  // File path or generator description.
  std::string source;

  std::size_t size() const { return sentences.size(); }
  std::size_t NumTokens() const;
  bool operator==(const TokenizedCorpus&) const = default;
};

struct LoadedCorpus {
  TokenizedCorpus corpus;
  Vocab vocab;
};

// Builds the vocabulary from the observed tokens in first-occurrence order.
LoadedCorpus ParseCorpus(std::istream& in, std::string source);
// Resolves tokens against a fixed vocabulary.
TokenizedCorpus ParseCorpus(std::istream& in, std::string source,
                            const Vocab& vocab);

LoadedCorpus LoadCorpus(const std::filesystem::path& path);
TokenizedCorpus LoadCorpus(const std::filesystem::path& path,
                           const Vocab& vocab);

// Single-space separators, LF line endings, always one trailing newline.
void WriteCorpus(const TokenizedCorpus& corpus, const Vocab& vocab,
                 std::ostream& out);
void SaveCorpus(const TokenizedCorpus& corpus, const Vocab& vocab,
                const std::filesystem::path& path);

// Throws if any id is out of range, special, or a sentence is empty.
void ValidateCorpus(const TokenizedCorpus& corpus, std::size_t vocab_size);

struct GeneratorParams {
  std::uint64_t seed = 7;
  int num_topics = 20;
  // Number of content tokens; the vocabulary adds the four specials.
  int vocab_size = 2000;
  int num_sentences = 50000;
  int min_sentence_len = 8;
  int max_sentence_len = 16;
  double function_word_fraction = 0.4;
  double zipf_exponent = 1.0;

  void Validate() const;
  // Size of the shared function-word pool; the remainder is split evenly
  // across topics.
  int NumFunctionWords() const;
};

// Topic-mixture corpus. Each sentence draws one topic uniformly; each token
// is a function word (shared Zipfian pool) with probability
// function_word_fraction, otherwise a word from the topic's Zipfian pool.
// Function words are named "f<rank>", topic words "t<topic>_<rank>".
LoadedCorpus GenerateCorpus(const GeneratorParams& params);

// True when `token` was produced as a function word by GenerateCorpus.
bool IsGeneratedFunctionWord(std::string_view token);

}  // namespace wordweight::corpus

#endif  // WORDWEIGHT_CORPUS_H_
