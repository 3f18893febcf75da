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

#include "wordweight/verify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "wordweight/analysis.h"
#include "wordweight/attribution.h"
#include "wordweight/corpus.h"
#include "wordweight/dump.h"
#include "wordweight/encoder.h"
#include "wordweight/infostats.h"
#include "wordweight/rng.h"
#include "wordweight/sgns.h"
#include "wordweight/stats.h"

namespace wordweight::verify {

namespace {

// m_k(X) = sum_{i,j} A_k[i,j] X[i,j]
class LinearModel : public SentenceModel {
 public:
  explicit LinearModel(Matrix a) : a_(std::move(a)) {}
  std::size_t output_dim() const override { return a_.rows(); }
  std::vector<double> Forward(const Matrix& x) const override {
    std::vector<double> out(a_.rows());
    for (std::size_t k = 0; k < a_.rows(); ++k) out[k] = Dot(a_.row(k), x.data());
    return out;
  }
  Matrix Jacobian(const Matrix&) const override { return a_; }

 private:
  Matrix a_;
};

std::string Num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

corpus::LoadedCorpus Parse(const std::string& text) {
  std::istringstream in(text);
  return corpus::ParseCorpus(in, "inline");
}

corpus::LoadedCorpus SmallGenerated(std::uint64_t seed) {
  corpus::GeneratorParams p;
  p.seed = seed;
  p.num_topics = 4;
  p.vocab_size = 60;
  p.num_sentences = 120;
  p.min_sentence_len = 4;
  p.max_sentence_len = 8;
  return corpus::GenerateCorpus(p);
}

Matrix RandomMatrix(Rng& rng, std::size_t r, std::size_t c, double scale = 1.0) {
  Matrix m(r, c);
  for (double& v : m.data()) v = scale * rng.Normal();
  return m;
}

double MaxAbsDiff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

class Runner {
 public:
  void Check(const std::string& suite, const std::string& name,
             const std::function<std::pair<bool, std::string>()>& body) {
    CheckResult r{suite, name, false, ""};
    try {
      auto [ok, detail] = body();
      r.passed = ok;
      r.detail = std::move(detail);
    } catch (const std::exception& e) {
      r.detail = std::string("threw: ") + e.what();
    }
    results_.push_back(std::move(r));
  }
  std::vector<CheckResult> Take() { return std::move(results_); }

 private:
  std::vector<CheckResult> results_;
};

void CorpusSuite(Runner& run, std::uint64_t seed) {
  run.Check("corpus", "generator is deterministic", [&] {
    const auto a = SmallGenerated(seed), b = SmallGenerated(seed);
    return std::pair{a.corpus == b.corpus && a.vocab == b.vocab, std::string()};
  });
  run.Check("corpus", "write/read round trip", [&] {
    const auto a = SmallGenerated(seed);
    std::ostringstream out;
    corpus::WriteCorpus(a.corpus, a.vocab, out);
    std::istringstream in(out.str());
    const auto b = corpus::ParseCorpus(in, a.corpus.source, a.vocab);
    return std::pair{b == a.corpus, std::string()};
  });
}

void InfostatsSuite(Runner& run, std::uint64_t seed) {
  run.Check("infostats", "hand case KL(b) = 0.5 ln 2", [] {
    const auto c = Parse("a b\na c\n");
    const TokenId b = *c.vocab.Find("b");
    const double kl = infostats::KlGain(c.corpus, c.vocab.size(), b, 0.0);
    const double err = std::abs(kl - 0.5 * std::log(2.0));
    return std::pair{err < 1e-15, "error " + Num(err)};
  });
  run.Check("infostats", "parallel table equals serial table", [&] {
    const auto c = SmallGenerated(seed);
    const auto a = infostats::QuantitiesTable(c.corpus, c.vocab);
    const auto b = infostats::QuantitiesTableSerial(c.corpus, c.vocab);
    return std::pair{a.rows == b.rows, std::to_string(a.rows.size()) + " rows"};
  });
  run.Check("infostats", "KL is zero on a single-distribution corpus", [] {
    const auto c = Parse("a b c\nb c a\nc a b\n");
    const auto t = infostats::QuantitiesTable(c.corpus, c.vocab);
    double m = 0.0;
    for (const auto& r : t.rows) m = std::max(m, std::abs(r.kl));
    return std::pair{m < 1e-12, "max |KL| " + Num(m)};
  });
}

void SgnsSuite(Runner& run, std::uint64_t seed) {
  run.Check("sgns", "pair objective gradient matches finite differences", [&] {
    Rng rng(DeriveSeed(seed, "verify-sgns"));
    const std::size_t d = 6;
    std::vector<double> w(d), c(d), n1(d), n2(d);
    for (auto* v : {&w, &c, &n1, &n2}) {
      for (double& x : *v) x = 0.5 * rng.Normal();
    }
    const auto objective = [&] {
      return sgns::PairObjective(w, c, {std::span<const double>(n1), std::span<const double>(n2)});
    };
    const auto g = sgns::PairObjectiveGradient(w, c, {n1, n2});
    double worst = 0.0;
    const auto probe = [&](std::vector<double>& v, const std::vector<double>& analytic) {
      for (std::size_t i = 0; i < d; ++i) {
        const double old = v[i], h = 1e-5;
        v[i] = old + h;
        const double up = objective();
        v[i] = old - h;
        const double down = objective();
        v[i] = old;
        const double fd = (up - down) / (2 * h);
        worst = std::max(worst, std::abs(fd - analytic[i]) /
                                    std::max(1e-8, std::abs(fd) + std::abs(analytic[i])));
      }
    };
    probe(w, g.word);
    probe(c, g.context);
    probe(n1, g.negatives[0]);
    probe(n2, g.negatives[1]);
    return std::pair{worst < 1e-5, "max relative error " + Num(worst)};
  });
  run.Check("sgns", "zero learning rate keeps the initialization", [&] {
    const auto c = Parse("a b c\na b c\n");
    sgns::SgnsConfig cfg;
    cfg.dim = 4;
    cfg.epochs = 1;
    cfg.lr = 0.0;
    cfg.seed = seed;
    const auto trained = sgns::TrainSgns(c.corpus, c.vocab.size(), cfg);
    const auto init = sgns::InitEmbeddings(c.vocab.size(), cfg.dim,
                                           DeriveSeed(cfg.seed, "sgns-init"));
    return std::pair{trained == init, std::string()};
  });
}

encoder::EncoderParams SmallEncoder(encoder::Pooler pooler, std::size_t vocab,
                                    std::uint64_t seed) {
  encoder::InitOptions o;
  o.pooler = pooler;
  o.dim = 6;
  o.seed = seed;
  o.init_scale = 0.6;
  return encoder::InitEncoder(vocab, o);
}

void EncoderSuite(Runner& run, std::uint64_t seed) {
  run.Check("encoder", "mean pooler is permutation invariant", [&] {
    const auto p = SmallEncoder(encoder::Pooler::kMean, 12, seed);
    const std::vector<TokenId> s{4, 7, 9, 5}, t{9, 5, 4, 7};
    const auto a = encoder::Encode(p, s), b = encoder::Encode(p, t);
    const double diff = MaxAbsDiff(a, b);
    return std::pair{diff == 0.0, "max diff " + Num(diff)};
  });
  run.Check("encoder", "pair likelihoods of both labels sum to one", [&] {
    const auto p = SmallEncoder(encoder::Pooler::kMlp, 12, seed);
    encoder::ContrastivePair pos{{4, 5, 6}, {7, 8}, 1}, neg = pos;
    neg.label = 0;
    const double sum = encoder::PairLikelihood(p, pos) + encoder::PairLikelihood(p, neg);
    return std::pair{std::abs(sum - 1.0) < 1e-15, "sum " + Num(sum)};
  });
  run.Check("encoder", "gradient matches finite differences", [&] {
    double worst = 0.0;
    for (const auto pooler : {encoder::Pooler::kMean, encoder::Pooler::kMlp}) {
      auto p = SmallEncoder(pooler, 12, seed);
      for (const int label : {0, 1}) {
        const encoder::ContrastivePair pair{{4, 5, 6, 4}, {7, 8, 5}, label};
        encoder::Gradient g(p);
        encoder::AccumulatePairGradient(p, pair, g);
        const auto probe = [&](double& param, double analytic) {
          const double old = param, h = 1e-5;
          param = old + h;
          const double up = encoder::PairLogLikelihood(p, pair);
          param = old - h;
          const double down = encoder::PairLogLikelihood(p, pair);
          param = old;
          const double fd = (up - down) / (2 * h);
          worst = std::max(worst, std::abs(fd - analytic) /
                                      std::max(1e-8, std::abs(fd) + std::abs(analytic)));
        };
        for (TokenId t = 4; t < 9; ++t) {
          for (std::size_t j = 0; j < p.dim(); ++j) probe(p.emb(t, j), g.emb(t, j));
        }
        for (std::size_t i = 0; i < p.w1.data().size(); ++i) probe(p.w1.data()[i], g.w1.data()[i]);
        for (std::size_t i = 0; i < p.w2.data().size(); ++i) probe(p.w2.data()[i], g.w2.data()[i]);
      }
    }
    return std::pair{worst < 1e-5, "max relative error " + Num(worst)};
  });
  run.Check("encoder", "PAD row stays frozen during training", [&] {
    const auto c = SmallGenerated(seed);
    auto p = SmallEncoder(encoder::Pooler::kMlp, c.vocab.size(), seed);
    encoder::TrainConfig cfg;
    cfg.steps = 20;
    cfg.batch = 4;
    cfg.seed = seed;
    const auto trained = encoder::TrainContrastive(c.corpus, p, cfg);
    const auto pad = trained.emb.row(corpus::kPad);
    const bool zero = std::all_of(pad.begin(), pad.end(), [](double x) { return x == 0.0; });
    return std::pair{zero, std::string()};
  });
}

void AttributionSuite(Runner& run, std::uint64_t seed) {
  run.Check("attribution", "IG completeness is exact on a linear model", [&] {
    Rng rng(DeriveSeed(seed, "verify-ig"));
    const LinearModel model(RandomMatrix(rng, 3, 5 * 4));
    const Matrix x = RandomMatrix(rng, 5, 4), b = RandomMatrix(rng, 5, 4);
    const auto ig = attribution::IntegratedGradientsScores(model, x, b, 3);
    double res = 0.0;
    for (const double r : ig.residual) res = std::max(res, r);
    return std::pair{res <= 1e-9, "max residual " + Num(res)};
  });
  run.Check("attribution", "IG on the mean pooler gives ||w_i|| / n", [&] {
    const auto p = SmallEncoder(encoder::Pooler::kMean, 12, seed);
    const std::vector<TokenId> s{4, 5, 6, 7, 8};
    const encoder::EncoderModel model(p);
    const auto a = attribution::IntegratedGradients(
        model, encoder::Embed(p, s),
        attribution::MakeBaseline(p, s, attribution::BaselineKind::kPadSequence), 64);
    double err = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double expect = std::sqrt(SquaredNorm(p.emb.row(s[i]))) / s.size();
      err = std::max(err, std::abs(a.raw[i] - expect));
    }
    return std::pair{err <= 1e-9, "max error " + Num(err)};
  });
  run.Check("attribution", "exact Shapley efficiency, symmetry and dummy", [&] {
    auto p = SmallEncoder(encoder::Pooler::kMlp, 12, seed);
    p.frame_with_specials = false;
    // Positions 1 and 3 hold the same token; position 4 is the MASK row.
    const std::vector<TokenId> s{4, 5, 6, 5, corpus::kMask};
    const encoder::EncoderModel model(p);
    const Matrix x = encoder::Embed(p, s);
    const Matrix b = attribution::MakeBaseline(p, s, attribution::BaselineKind::kMaskSequence);
    const auto v = attribution::ShapleyExactValues(model, x, b);
    double eff = 0.0;
    for (const double r : v.residual) eff = std::max(eff, r);
    const double sym = MaxAbsDiff(v.phi.row(1), v.phi.row(3));
    const auto dummy = v.phi.row(4);
    const bool dummy_zero =
        std::all_of(dummy.begin(), dummy.end(), [](double z) { return z == 0.0; });
    return std::pair{eff <= 1e-9 && sym <= 1e-9 && dummy_zero,
                     "efficiency " + Num(eff) + ", symmetry " + Num(sym)};
  });
  run.Check("attribution", "normalized contributions average to one", [&] {
    const std::vector<double> raw{0.3, 1.2, 0.0, 2.5};
    bool degenerate = true;
    const auto n = attribution::Normalize(raw, &degenerate);
    const double mean = stats::Mean(n);
    return std::pair{std::abs(mean - 1.0) <= 1e-9 && !degenerate, "mean " + Num(mean)};
  });
}

void DumpSuite(Runner& run, std::uint64_t) {
  run.Check("dump", "record round trip", [] {
    dump::Record r;
    r.model_id = "m";
    r.sentence_id = 3;
    r.method = "ig";
    r.pooling = "mean";
    r.tokens = {"a", "b"};
    r.raw = {0.25, 0.75};
    r.normalized = {0.5, 1.5};
    r.residual_max = 1e-12;
    const auto back = dump::ParseRecord(dump::ToJsonLine(r), 1);
    return std::pair{back == r, std::string()};
  });
  run.Check("dump", "missing field is reported with its line", [] {
    std::istringstream in(
        "{\"model_id\":\"m\",\"sentence_id\":0,\"method\":\"ig\",\"pooling\":"
        "\"mean\",\"tokens\":[\"a\"],\"raw\":[1.0],\"residual_max\":0.0,\"meta\":{}}\n");
    const auto report = dump::ValidateDump(in);
    const bool ok = report.errors.size() == 1 &&
                    report.errors[0] == "line 1: missing field 'normalized'";
    return std::pair{ok, report.errors.empty() ? std::string() : report.errors[0]};
  });
}

void AnalysisSuite(Runner& run, std::uint64_t seed) {
  run.Check("analysis", "OLS recovers an exact line", [] {
    const std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
    const auto f = stats::Ols(x, y);
    const double err = std::max({std::abs(f.beta - 2), std::abs(f.intercept - 1),
                                 std::abs(f.r2 - 1)});
    return std::pair{err < 1e-12, "error " + Num(err)};
  });
  run.Check("analysis", "scaling x scales beta inversely and keeps R2", [&] {
    Rng rng(DeriveSeed(seed, "verify-ols"));
    std::vector<double> x(50), y(50), xs(50);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.Normal();
      y[i] = 0.7 * x[i] + rng.Normal();
      xs[i] = 3.5 * x[i];
    }
    const auto a = stats::Ols(x, y), b = stats::Ols(xs, y);
    const double err = std::max(std::abs(b.beta * 3.5 - a.beta), std::abs(b.r2 - a.r2));
    return std::pair{err <= 1e-9, "error " + Num(err)};
  });
  run.Check("analysis", "report deltas use the x100 convention", [] {
    std::vector<analysis::ReportEntry> e(2);
    e[0].model = "base";
    e[1].model = "tuned";
    e[1].fit.r2 = 0.324;
    const auto rows = analysis::CompareModels(e, "base");
    const std::string d0 = analysis::FormatDelta(rows[0].delta_r2_x100);
    const std::string d1 = analysis::FormatDelta(rows[1].delta_r2_x100);
    return std::pair{d0 == "0.0" && d1 == "+32.4", d0 + " / " + d1};
  });
}

}  // namespace

std::vector<CheckResult> RunAll(std::uint64_t seed) {
  Runner run;
  CorpusSuite(run, seed);
  InfostatsSuite(run, seed);
  SgnsSuite(run, seed);
  EncoderSuite(run, seed);
  AttributionSuite(run, seed);
  DumpSuite(run, seed);
  AnalysisSuite(run, seed);
  return run.Take();
}

bool Print(const std::vector<CheckResult>& results, std::ostream& out) {
  bool all = true;
  for (const auto& r : results) {
    all = all && r.passed;
    out << (r.passed ? "[PASS] " : "[FAIL] ") << r.suite << '/' << r.name;
    if (!r.detail.empty()) out << ": " << r.detail;
    out << '\n';
  }
  return all;
}

}  // namespace wordweight::verify
