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

#include <cmath>
#include <sstream>

#include "oracles.h"
#include "wordweight/corpus.h"
#include "wordweight/infostats.h"
#include "wordweight/rng.h"
#include "wordweight/stats.h"

namespace wordweight::infostats {
namespace {

corpus::LoadedCorpus FromText(const std::string& text) {
  std::istringstream in(text);
  return corpus::ParseCorpus(in, "mem");
}

TokenId Id(const corpus::LoadedCorpus& lc, const char* token) {
  return *lc.vocab.Find(token);
}

TEST(Unigram, CountsContentTokens) {
  const auto lc = FromText("a b\na c\n");
  const auto p = Unigram(lc.corpus, lc.vocab.size());
  EXPECT_DOUBLE_EQ(p.probs[Id(lc, "a")], 0.5);
  EXPECT_DOUBLE_EQ(p.probs[Id(lc, "b")], 0.25);
  EXPECT_DOUBLE_EQ(p.probs[Id(lc, "c")], 0.25);
  EXPECT_EQ(p.probs[corpus::kPad], 0.0);
  EXPECT_NEAR(p.Sum(), 1.0, 1e-12);
}

TEST(Unigram, SingleSentence) {
  const auto lc = FromText("a\n");
  EXPECT_DOUBLE_EQ(Unigram(lc.corpus, lc.vocab.size()).probs[Id(lc, "a")], 1.0);
}

TEST(ConditionalDist, PoolsSupportingSentencesIncludingTheWord) {
  const auto lc = FromText("a b\na c\n");
  const auto q = ConditionalDist(lc.corpus, lc.vocab.size(), Id(lc, "b"));
  EXPECT_DOUBLE_EQ(q.probs[Id(lc, "a")], 0.5);
  EXPECT_DOUBLE_EQ(q.probs[Id(lc, "b")], 0.5);
  EXPECT_EQ(q.probs[Id(lc, "c")], 0.0);
}

TEST(ConditionalDist, FullSupportEqualsUnigram) {
  const auto lc = FromText("a b\na c\n");
  const auto q = ConditionalDist(lc.corpus, lc.vocab.size(), Id(lc, "a"));
  const auto p = Unigram(lc.corpus, lc.vocab.size());
  EXPECT_EQ(q.probs, p.probs);
}

TEST(ConditionalDist, RepeatedWordCountsSentenceOnceTokensWithMultiplicity) {
  const auto lc = FromText("a a b\nc d\n");
  const auto q = ConditionalDist(lc.corpus, lc.vocab.size(), Id(lc, "a"));
  EXPECT_DOUBLE_EQ(q.probs[Id(lc, "a")], 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(q.probs[Id(lc, "b")], 1.0 / 3.0);
}

TEST(ConditionalDist, UnseenTokenThrows) {
  auto lc = FromText("a b\n");
  const TokenId z = lc.vocab.Add("z");
  EXPECT_THROW(ConditionalDist(lc.corpus, lc.vocab.size(), z), Error);
  EXPECT_THROW(KlGain(lc.corpus, lc.vocab.size(), z), Error);
}

TEST(KlGain, HandCase) {
  const auto lc = FromText("a b\na c\n");
  EXPECT_EQ(KlGain(lc.corpus, lc.vocab.size(), Id(lc, "a")), 0.0);
  EXPECT_NEAR(KlGain(lc.corpus, lc.vocab.size(), Id(lc, "b")), 0.5 * std::log(2.0), 1e-15);
}

TEST(KlGain, ZeroWhenConditionalEqualsUnigram) {
  // Every sentence has the same composition.
  const auto lc = FromText("a b c\nc b a\nb a c\n");
  for (const char* t : {"a", "b", "c"}) {
    EXPECT_EQ(KlGain(lc.corpus, lc.vocab.size(), Id(lc, t)), 0.0) << t;
  }
}

TEST(KlGain, NonNegativeOnRandomCorpora) {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto lc = FromText(oracle::JoinLines(oracle::RandomSentences(rng, 30, 12, 8)));
    const auto t = QuantitiesTable(lc.corpus, lc.vocab);
    for (const auto& r : t.rows) EXPECT_GE(r.kl, 0.0);
  }
}

TEST(QuantitiesTable, AnalyticValues) {
  const auto lc = FromText("a b\na c\n");
  const auto t = QuantitiesTable(lc.corpus, lc.vocab);
  ASSERT_EQ(t.rows.size(), 3u);
  const auto& a = t.rows[0];
  EXPECT_EQ(a.token, "a");
  EXPECT_EQ(a.count, 2);
  EXPECT_EQ(a.doc_freq, 2);
  EXPECT_DOUBLE_EQ(a.self_info, std::log(2.0));
  EXPECT_DOUBLE_EQ(a.idf, 0.0);
  EXPECT_DOUBLE_EQ(a.sif_weight, 1e-3 / (1e-3 + 0.5));
}

TEST(QuantitiesTable, SifHalfAtProbabilityEqualToA) {
  // 1000 tokens, "x" once: P(x) = 1e-3.
  std::string text = "x";
  for (int i = 1; i < 1000; ++i) text += " y";
  const auto lc = FromText(text + "\n");
  const auto t = QuantitiesTable(lc.corpus, lc.vocab);
  EXPECT_NEAR(t.rows[0].sif_weight, 0.5, 1e-12);
}

TEST(QuantitiesTable, MatchesNaiveOracle) {
  Rng rng(17);
  for (int trial = 0; trial < 25; ++trial) {
    const auto sentences = oracle::RandomSentences(rng, 1 + rng.Below(50), 15, 10);
    const auto lc = FromText(oracle::JoinLines(sentences));
    for (const double smoothing : {0.0, 0.5}) {
      QuantityOptions opts;
      opts.smoothing = smoothing;
      const auto table = QuantitiesTable(lc.corpus, lc.vocab, opts);
      std::vector<std::string> content(lc.vocab.tokens().begin() + corpus::kNumSpecials,
                                       lc.vocab.tokens().end());
      const auto expect = oracle::Quantities(sentences, content, opts.sif_a, smoothing);
      ASSERT_EQ(table.rows.size(), expect.size());
      for (const auto& r : table.rows) {
        const auto& e = expect.at(r.token);
        EXPECT_EQ(r.count, e.count);
        EXPECT_EQ(r.doc_freq, e.doc_freq);
        EXPECT_NEAR(r.kl, e.kl, 1e-12) << r.token;
        EXPECT_NEAR(r.self_info, e.self_info, 1e-12);
        EXPECT_NEAR(r.idf, e.idf, 1e-12);
        EXPECT_NEAR(r.sif_weight, e.sif, 1e-12);
      }
    }
  }
}

TEST(QuantitiesTable, ParallelEqualsSerial) {
  corpus::GeneratorParams p;
  p.num_sentences = 2000;
  p.vocab_size = 300;
  p.num_topics = 6;
  const auto g = corpus::GenerateCorpus(p);
  const auto a = QuantitiesTable(g.corpus, g.vocab);
  const auto b = QuantitiesTableSerial(g.corpus, g.vocab);
  EXPECT_EQ(a.rows, b.rows);
}

TEST(QuantitiesTable, SelfInfoStrictlyDecreasesWithCount) {
  const auto lc = FromText("a a a b b c\na d\n");
  const auto t = QuantitiesTable(lc.corpus, lc.vocab);
  auto rows = t.rows;
  std::sort(rows.begin(), rows.end(), [](auto& x, auto& y) { return x.count < y.count; });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].count > rows[i - 1].count) EXPECT_LT(rows[i].self_info, rows[i - 1].self_info);
  }
}

TEST(QuantitiesTable, KlCorrelatesWithSelfInfoOnGeneratedCorpus) {
  corpus::GeneratorParams p;
  p.num_sentences = 5000;
  const auto g = corpus::GenerateCorpus(p);
  const auto t = QuantitiesTable(g.corpus, g.vocab);
  std::vector<double> kl, si;
  for (const auto& r : t.rows) {
    kl.push_back(r.kl);
    si.push_back(r.self_info);
  }
  EXPECT_GT(stats::Pearson(kl, si), 0.0);
}

TEST(QuantitiesTable, MinMaxColumnsSpanUnitInterval) {
  const auto lc = FromText("a b c\na d\ne a b\n");
  const auto n = QuantitiesTable(lc.corpus, lc.vocab).MinMaxNormalized();
  for (const auto* col : {&n.kl, &n.self_info, &n.idf, &n.sif_weight}) {
    EXPECT_DOUBLE_EQ(*std::min_element(col->begin(), col->end()), 0.0);
    EXPECT_DOUBLE_EQ(*std::max_element(col->begin(), col->end()), 1.0);
  }
}

TEST(QuantitiesCsv, RoundTripKeepsTenDigits) {
  const auto lc = FromText("a b\na c\nd, e\n");
  const auto t = QuantitiesTable(lc.corpus, lc.vocab);
  std::stringstream ss;
  WriteQuantitiesCsv(t, ss);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "token,count,doc_freq,kl,self_info,idf,sif_weight");
  const auto back = ReadQuantitiesCsv(ss);
  ASSERT_EQ(back.rows.size(), t.rows.size());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].token, t.rows[i].token);
    EXPECT_EQ(back.rows[i].count, t.rows[i].count);
    EXPECT_NEAR(back.rows[i].kl, t.rows[i].kl, 1e-9 * (1 + t.rows[i].kl));
    EXPECT_NEAR(back.rows[i].self_info, t.rows[i].self_info, 1e-9 * t.rows[i].self_info);
  }
}

TEST(QuantitiesCsv, RejectsBadHeader) {
  std::istringstream in("token,count\nx,1\n");
  EXPECT_THROW(ReadQuantitiesCsv(in), Error);
}

}  // namespace
}  // namespace wordweight::infostats
