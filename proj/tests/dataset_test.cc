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

#include "doctest.h"
#include "test_util.h"
#include "xforge/dataset.h"
#include "xforge/error.h"

using namespace xforge;

namespace {

std::string Fixture(int answer_start) {
  return R"({"version":"1.1","data":[{"title":"t","paragraphs":[{"context":"the cat sat","qas":[{"id":"q1","question":"who sat?","answers":[{"text":"cat","answer_start":)" +
         std::to_string(answer_start) + "}]}]}]}]}";
}

}  // namespace

TEST_CASE("parse minimal fixture") {
  const RcDataset d = ParseDataset(Fixture(4));
  REQUIRE(d.QaCount() == 1);
  const QaEntry& qa = d.articles[0].paragraphs[0].qas[0];
  CHECK(qa.answers[0].text == "cat");
  CHECK(qa.answers[0].answer_start == 4);
  CHECK_FALSE(qa.noise_flag);
}

TEST_CASE("offset mismatch names the qa") {
  try {
    ParseDataset(Fixture(5));
    FAIL("expected IntegrityError");
  } catch (const IntegrityError& e) {
    CHECK(std::string(e.what()).find("\"q1\"") != std::string::npos);
  }
}

TEST_CASE("duplicate qa ids are rejected") {
  RcDataset d;
  Article a{"t", {}};
  a.paragraphs.push_back({"alpha beta", {testutil::Qa("x", "?", "alpha beta", "alpha")}});
  a.paragraphs.push_back({"gamma delta", {testutil::Qa("y", "?", "gamma delta", "delta")}});
  a.paragraphs.push_back({"eps zeta", {testutil::Qa("x", "?", "eps zeta", "zeta")}});
  d.articles.push_back(a);
  CHECK_THROWS_AS(ParseDataset(SerializeDataset(d)), IntegrityError);
}

TEST_CASE("malformed structure reports a path") {
  try {
    ParseDataset(R"({"data":[{"paragraphs":[{"context":"x","qas":[{"id":"a"}]}]}]})");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("$.data[0].paragraphs[0].qas[0]") !=
          std::string::npos);
  }
  CHECK_THROWS_AS(ParseDataset("[1,2"), ParseError);
  CHECK_THROWS_AS(ParseDataset(R"({"data":{}})"), ParseError);
}

TEST_CASE("round trip preserves structure, CJK text and extensions") {
  RcDataset d = testutil::OneParagraph(
      "熱力學第二定律 says entropy grows",
      {testutil::Qa("z1", "什麼?", "熱力學第二定律 says entropy grows", "第二定律")});
  d.articles[0].paragraphs[0].qas[0].lineage.push_back({"permute", {{"seed", "3"}}});
  d.articles[0].paragraphs[0].qas[0].noise_flag = true;
  CHECK(d.articles[0].paragraphs[0].qas[0].answers[0].answer_start == 3);
  const std::string bytes = SerializeDataset(d);
  CHECK(bytes.find("熱力學") != std::string::npos);
  const RcDataset back = ParseDataset(bytes);
  CHECK(back == d);
  CHECK(SerializeDataset(back) == bytes);
}

TEST_CASE("empty dataset serializes to a valid document") {
  RcDataset d;
  const std::string bytes = SerializeDataset(d);
  CHECK(bytes == "{\"version\":\"1.1\",\"data\":[]}\n");
  CHECK(ParseDataset(bytes) == d);
}

TEST_CASE("noise-flagged qas may have no answers") {
  RcDataset d = testutil::OneParagraph("abc", {});
  QaEntry qa;
  qa.id = "n";
  qa.question = "?";
  qa.noise_flag = true;
  d.articles[0].paragraphs[0].qas.push_back(qa);
  CHECK_NOTHROW(ValidateDataset(d));
  d.articles[0].paragraphs[0].qas[0].noise_flag = false;
  CHECK_THROWS_AS(ValidateDataset(d), IntegrityError);
}

TEST_CASE("downsample") {
  const RcDataset d = testutil::SyntheticCorpus(5, 4, 3);  // 12 qas
  REQUIRE(d.QaCount() == 12);
  CHECK(Downsample(d, 12, 1) == d);
  const RcDataset empty = Downsample(d, 0, 1);
  CHECK(empty.QaCount() == 0);
  CHECK(empty.articles.empty());
  CHECK_THROWS_AS(Downsample(d, 13, 1), ArgumentError);

  const RcDataset ten = testutil::SyntheticCorpus(9, 5, 2);
  REQUIRE(ten.QaCount() == 10);
  const RcDataset a = Downsample(ten, 4, 77);
  const RcDataset b = Downsample(ten, 4, 77);
  CHECK(SerializeDataset(a) == SerializeDataset(b));
  CHECK(a.QaCount() == 4);
  CHECK_NOTHROW(ValidateDataset(a));
  for (const Article& art : a.articles) {
    for (const Paragraph& p : art.paragraphs) CHECK_FALSE(p.qas.empty());
  }
}

TEST_CASE("downsample is uniform over qa entries") {
  const RcDataset d = testutil::SyntheticCorpus(3, 5, 2);
  std::map<std::string, int> hits;
  const int trials = 4000;
  for (int seed = 0; seed < trials; ++seed) {
    Downsample(d, 3, static_cast<uint64_t>(seed))
        .ForEachQa([&](size_t, size_t, const QaEntry& qa) { ++hits[qa.id]; });
  }
  // Each of the 10 qas is kept with probability 3/10.
  for (const auto& [id, count] : hits) {
    CHECK(count == doctest::Approx(trials * 0.3).epsilon(0.08));
  }
}
