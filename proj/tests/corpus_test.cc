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


#include <gtest/gtest.h>

#include <map>
#include <sstream>
#include <string>

#include "wordweight/common.h"
#include "wordweight/corpus.h"

namespace wordweight::corpus {
namespace {

GeneratorParams Small(std::uint64_t seed) {
  GeneratorParams p;
  p.seed = seed;
  p.num_topics = 5;
  p.vocab_size = 200;
  p.num_sentences = 300;
  return p;
}

TEST(Vocab, SpecialsOccupyFirstIds) {
  const Vocab v;
  ASSERT_EQ(v.size(), 4u);
  EXPECT_EQ(v.Token(kPad), kPadToken);
  EXPECT_EQ(v.Token(kCls), kClsToken);
  EXPECT_EQ(v.Token(kSep), kSepToken);
  EXPECT_EQ(v.Token(kMask), kMaskToken);
}

TEST(Vocab, AddIsIdempotent) {
  Vocab v;
  const TokenId a = v.Add("alpha");
  EXPECT_EQ(a, 4);
  EXPECT_EQ(v.Add("alpha"), a);
  EXPECT_EQ(v.Add("beta"), 5);
  EXPECT_EQ(*v.Find("beta"), 5);
  EXPECT_FALSE(v.Find("gamma").has_value());
}

TEST(Vocab, RoundTrip) {
  Vocab v;
  v.Add("x");
  v.Add("y,z");
  std::stringstream ss;
  v.Write(ss);
  EXPECT_EQ(Vocab::Read(ss), v);
}

TEST(Vocab, RejectsMissingSpecials) {
  std::istringstream in("a\nb\n");
  EXPECT_THROW(Vocab::Read(in), Error);
}

TEST(Vocab, RejectsDuplicates) {
  std::istringstream in("<PAD>\n<CLS>\n<SEP>\n<MASK>\na\na\n");
  EXPECT_THROW(Vocab::Read(in), Error);
}

TEST(ParseCorpus, BuildsVocabInFirstOccurrenceOrder) {
  std::istringstream in("a b\na  c\n");
  const auto lc = ParseCorpus(in, "mem");
  ASSERT_EQ(lc.corpus.size(), 2u);
  EXPECT_EQ(lc.vocab.Token(4), "a");
  EXPECT_EQ(lc.vocab.Token(5), "b");
  EXPECT_EQ(lc.vocab.Token(6), "c");
  EXPECT_EQ(lc.corpus.sentences[1], (std::vector<TokenId>{4, 6}));
  EXPECT_EQ(lc.corpus.NumTokens(), 4u);
}

TEST(ParseCorpus, RejectsEmptyLine) {
  std::istringstream in("a b\n\nc\n");
  EXPECT_THROW(ParseCorpus(in, "mem"), Error);
}

TEST(ParseCorpus, RejectsSpecialTokens) {
  std::istringstream in("a <MASK> b\n");
  EXPECT_THROW(ParseCorpus(in, "mem"), Error);
}

TEST(ParseCorpus, FixedVocabRejectsUnknownToken) {
  Vocab v;
  v.Add("a");
  std::istringstream in("a b\n");
  EXPECT_THROW(ParseCorpus(in, "mem", v), Error);
}

TEST(WriteCorpus, CanonicalFormRoundTrips) {
  std::istringstream in("a\tb\r\nc   a\n");
  const auto lc = ParseCorpus(in, "mem");
  std::ostringstream out;
  WriteCorpus(lc.corpus, lc.vocab, out);
  EXPECT_EQ(out.str(), "a b\nc a\n");
  std::istringstream again(out.str());
  EXPECT_EQ(ParseCorpus(again, "mem", lc.vocab).sentences, lc.corpus.sentences);
}

TEST(ValidateCorpus, RejectsOutOfRangeAndSpecialIds) {
  TokenizedCorpus c;
  c.sentences = {{4, 5}};
  EXPECT_NO_THROW(ValidateCorpus(c, 6));
  EXPECT_THROW(ValidateCorpus(c, 5), Error);
  c.sentences = {{4, kMask}};
  EXPECT_THROW(ValidateCorpus(c, 6), Error);
  c.sentences = {{}};
  EXPECT_THROW(ValidateCorpus(c, 6), Error);
}

TEST(Generator, SameSeedSameCorpus) {
  const auto a = GenerateCorpus(Small(11));
  const auto b = GenerateCorpus(Small(11));
  EXPECT_EQ(a.corpus.sentences, b.corpus.sentences);
  EXPECT_EQ(a.vocab, b.vocab);
  const auto c = GenerateCorpus(Small(12));
  EXPECT_NE(a.corpus.sentences, c.corpus.sentences);
}

TEST(Generator, RespectsShapeParameters) {
  const auto p = Small(3);
  const auto g = GenerateCorpus(p);
  ASSERT_EQ(g.corpus.size(), static_cast<std::size_t>(p.num_sentences));
  EXPECT_LE(g.vocab.size(), static_cast<std::size_t>(p.vocab_size) + kNumSpecials);
  for (const auto& s : g.corpus.sentences) {
    EXPECT_GE(s.size(), static_cast<std::size_t>(p.min_sentence_len));
    EXPECT_LE(s.size(), static_cast<std::size_t>(p.max_sentence_len));
  }
  EXPECT_NO_THROW(ValidateCorpus(g.corpus, g.vocab.size()));
}

TEST(Generator, FunctionWordShareTracksFraction) {
  auto p = Small(5);
  p.num_sentences = 4000;
  const auto g = GenerateCorpus(p);
  std::size_t function = 0, total = 0;
  for (const auto& s : g.corpus.sentences) {
    for (const TokenId id : s) {
      function += IsGeneratedFunctionWord(g.vocab.Token(id));
      ++total;
    }
  }
  EXPECT_NEAR(static_cast<double>(function) / total, p.function_word_fraction, 0.02);
}

TEST(Generator, TopicWordsStayInOneTopicPerSentence) {
  const auto g = GenerateCorpus(Small(9));
  for (const auto& s : g.corpus.sentences) {
    std::string topic;
    for (const TokenId id : s) {
      const std::string& t = g.vocab.Token(id);
      if (IsGeneratedFunctionWord(t)) continue;
      const std::string prefix = t.substr(0, t.find('_'));
      if (topic.empty()) topic = prefix;
      EXPECT_EQ(prefix, topic);
    }
  }
}

TEST(Generator, ZeroFunctionFractionGivesOnlyTopicWords) {
  auto p = Small(2);
  p.function_word_fraction = 0.0;
  const auto g = GenerateCorpus(p);
  for (const auto& s : g.corpus.sentences) {
    for (const TokenId id : s) EXPECT_FALSE(IsGeneratedFunctionWord(g.vocab.Token(id)));
  }
}

TEST(Generator, InvalidParamsThrow) {
  auto p = Small(1);
  p.min_sentence_len = 10;
  p.max_sentence_len = 5;
  EXPECT_THROW(p.Validate(), Error);
  p = Small(1);
  p.function_word_fraction = 1.5;
  EXPECT_THROW(p.Validate(), Error);
  p = Small(1);
  p.zipf_exponent = 0.0;
  EXPECT_THROW(p.Validate(), Error);
}

}  // namespace
}  // namespace wordweight::corpus
