//
// Copyright 2026 The xforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include <random>

#include "doctest.h"
#include "oracles.h"
#include "test_util.h"
#include "xforge/error.h"
#include "xforge/span_recovery.h"
#include "xforge/text.h"

using namespace xforge;

TEST_CASE("edit distance") {
  CHECK(EditDistance(std::string_view("abc"), std::string_view("abc")) == 0);
  CHECK(EditDistance(std::string_view(""), std::string_view("abc")) == 3);
  CHECK(oracle::Levenshtein(U"kitten", U"sitting") == 3);
  CHECK(EditDistance(std::string_view("kitten"), std::string_view("sitting")) == 3);
  CHECK(EditDistance(std::string_view("熱力學"), std::string_view("熱學")) == 1);
}

TEST_CASE("edit distance matches the full-table oracle and is symmetric") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    const auto a = oracle::RandomString(rng, 15, U"abcd熱");
    const auto b = oracle::RandomString(rng, 15, U"abcd熱");
    const int64_t d = EditDistance(a, b);
    REQUIRE(d == oracle::Levenshtein(a, b));
    REQUIRE(d == EditDistance(b, a));
    REQUIRE((d == 0) == (a == b));
  }
}

TEST_CASE("best span on the documented examples") {
  SpanMatch m = BestSpanSearch(std::string_view("the cat sat"), std::string_view("cat"));
  CHECK(m == SpanMatch{4, 7, 0, "cat"});

  m = BestSpanSearch(std::string_view("thermodynamics laws"),
                     std::string_view("thermodynamic"));
  CHECK(m == SpanMatch{0, 13, 0, "thermodynamic"});

  const oracle::Span o = oracle::BestSpan(U"abxcd", U"abcd", 0);
  CHECK(o.start == 0);
  CHECK(o.end == 5);
  CHECK(o.distance == 1);
  m = BestSpanSearch(std::string_view("abxcd"), std::string_view("abcd"));
  CHECK(m == SpanMatch{0, 5, 1, "abxcd"});
}

TEST_CASE("best span ties go to the hint, then leftmost") {
  // "ab" occurs at 0 and 6.
  CHECK(BestSpanSearch(std::string_view("ab xx ab"), std::string_view("ab"), 0).start == 0);
  CHECK(BestSpanSearch(std::string_view("ab xx ab"), std::string_view("ab"), 5).start == 6);
  CHECK(BestSpanSearch(std::string_view("ab xx ab"), std::string_view("ab"), 3).start == 0);
  // No shared code point: a single character nearest the hint.
  const SpanMatch none = BestSpanSearch(std::string_view("xyz"), std::string_view("ab"), 1);
  CHECK(none == SpanMatch{1, 2, 2, "y"});
  CHECK(BestSpanSearch(std::string_view("xyz"), std::string_view("ab"), 9).start == 2);
}

TEST_CASE("best span equals exhaustive enumeration") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int64_t> hint(0, 60);
  for (int i = 0; i < 400; ++i) {
    const auto context = oracle::RandomString(rng, 40, U"abcab ", 1);
    const auto answer = oracle::RandomString(rng, 8, U"abc", 1);
    const int64_t h = hint(rng);
    const SpanMatch got = BestSpanSearch(context, answer, h);
    const oracle::Span want = oracle::BestSpan(context, answer, h);
    REQUIRE(got.distance == want.distance);
    REQUIRE(got.start == want.start);
    REQUIRE(got.end == want.end);
    REQUIRE(got.distance == oracle::Levenshtein(
                                context.substr(got.start, got.end - got.start), answer));
  }
}

TEST_CASE("search errors") {
  CHECK_THROWS_AS(BestSpanSearch(std::string_view(""), std::string_view("a")), NoMatchError);
  CHECK_THROWS_AS(BestSpanSearch(std::string_view("abc"), std::string_view("")), ArgumentError);
}

TEST_CASE("threshold rule") {
  const RecoveryPolicy policy;
  CHECK(policy.Threshold(1) == 0);
  CHECK(policy.Threshold(2) == 1);
  CHECK(policy.Threshold(11) == 10);
  CHECK(policy.Threshold(100) == 10);
  CHECK(policy.Threshold(0) == 0);
  RecoveryPolicy tight{3, RecoveryMode::kTrainDrop};
  CHECK(tight.Threshold(12) == 3);
}

TEST_CASE("recover example") {
  const std::string src = "the law of conservation of energy";
  const QaEntry qa = testutil::Qa("q", "what law?", src, "conservation");
  RecoveryPolicy train{10, RecoveryMode::kTrainDrop};
  RecoveryPolicy test{10, RecoveryMode::kTestKeep};

  SUBCASE("length-one answer must match exactly") {
    const RecoveryOutcome out =
        RecoverExample(qa, "la loi de la conservation", "z", train, 0);
    CHECK(out.status == RecoveryStatus::kDropped);
    CHECK_FALSE(out.qa.has_value());
  }

  SUBCASE("two edits within T(12)") {
    const std::string ctx = "la loi de konservatian de l'energie";
    const std::u32string translated = U"conservation";
    REQUIRE(translated.size() == 12);
    const oracle::Span o = oracle::BestSpan(text::Decode(ctx), translated, 10);
    REQUIRE(o.distance == 2);
    const RecoveryOutcome out =
        RecoverExample(qa, ctx, "conservation", train, 10);
    REQUIRE(out.status == RecoveryStatus::kRecovered);
    CHECK(out.match->distance == 2);
    CHECK(out.match->start == o.start);
    CHECK(out.qa->answers.size() == 1);
    CHECK(out.qa->answers[0].text ==
          text::Encode(text::Decode(ctx).substr(o.start, o.end - o.start)));
    CHECK(out.qa->answers[0].answer_start == o.start);
    CHECK_FALSE(out.qa->noise_flag);
    REQUIRE(out.qa->lineage.size() == 1);
    CHECK(out.qa->lineage[0].op == "recover");
  }

  SUBCASE("over threshold keeps a noise example in test mode") {
    const std::string ctx = "completely unrelated words";
    const RecoveryOutcome dropped = RecoverExample(qa, ctx, "qqqq", train, 0);
    CHECK(dropped.status == RecoveryStatus::kDropped);
    const RecoveryOutcome kept = RecoverExample(qa, ctx, "qqqq", test, 0);
    REQUIRE(kept.status == RecoveryStatus::kNoise);
    CHECK(kept.qa->noise_flag);
    REQUIRE(kept.qa->answers.size() == 1);
    CHECK(kept.qa->answers[0].text == kept.match->matched_text);
  }

  SUBCASE("empty translated answer") {
    CHECK(RecoverExample(qa, src, "", train, 0).status == RecoveryStatus::kDropped);
    const RecoveryOutcome kept = RecoverExample(qa, src, "", test, 0);
    REQUIRE(kept.status == RecoveryStatus::kNoise);
    CHECK(kept.qa->answers.empty());
  }

  SUBCASE("empty context is an error") {
    CHECK_THROWS_AS(RecoverExample(qa, "", "x", train, 0), NoMatchError);
  }
}

TEST_CASE("unperturbed answers recover at their original offset") {
  const RcDataset d = testutil::SyntheticCorpus(11, 20, 3);
  const RecoveryPolicy policy;
  d.ForEachQa([&](size_t a, size_t p, const QaEntry& qa) {
    const std::string& ctx = d.articles[a].paragraphs[p].context;
    const int64_t start = qa.answers[0].answer_start;
    const RecoveryOutcome out =
        RecoverExample(qa, ctx, qa.answers[0].text, policy, start);
    REQUIRE(out.status == RecoveryStatus::kRecovered);
    CHECK(out.match->distance == 0);
    CHECK(out.qa->answers[0].answer_start == start);
  });
}

TEST_CASE("triples round trip with escapes") {
  std::vector<TranslationTriple> triples = {
      {"q1", "line one\nline\ttwo", "why?", "one", "en", "zh"},
      {"q2", "back\\slash", "", "", "en", "zh"}};
  const std::string bytes = SerializeTriples(triples);
  const auto back = ParseTriples(bytes);
  REQUIRE(back.size() == 2);
  CHECK(back[0].context == "line one\nline\ttwo");
  CHECK(back[1].context == "back\\slash");
  CHECK_THROWS_AS(ParseTriples("a\tb\tc\n"), ParseError);
}

TEST_CASE("recover dataset groups qas by translated context") {
  const std::string ctx = "alpha beta gamma delta";
  RcDataset d = testutil::OneParagraph(
      ctx, {testutil::Qa("a", "q1", ctx, "beta"), testutil::Qa("b", "q2", ctx, "delta"),
            testutil::Qa("c", "q3", ctx, "alpha")});
  const std::vector<TranslationTriple> triples = {
      {"a", "ALPHA beta GAMMA delta", "Q1", "beta", "en", "xx"},
      {"b", "ALPHA beta GAMMA delta", "Q2", "delta", "en", "xx"},
      {"c", "zzzz qqqq", "Q3", "alpha", "en", "xx"}};
  RecoveryStats stats;
  const RcDataset out =
      RecoverDataset(d, triples, RecoveryPolicy{10, RecoveryMode::kTestKeep}, &stats);
  REQUIRE(out.articles.size() == 1);
  REQUIRE(out.articles[0].paragraphs.size() == 2);
  CHECK(out.articles[0].paragraphs[0].qas.size() == 2);
  CHECK(out.articles[0].paragraphs[0].qas[0].question == "Q1");
  CHECK(stats.recovered == 2);
  CHECK(stats.exact == 2);
  CHECK(stats.noise == 1);
  CHECK_NOTHROW(ValidateDataset(out));

  RecoveryStats missing;
  RecoverDataset(d, {triples[0]}, RecoveryPolicy{}, &missing);
  CHECK(missing.missing == 2);
}
