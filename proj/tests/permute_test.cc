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
#include "xforge/error.h"
#include "xforge/permute.h"
#include "xforge/text.h"

using namespace xforge;

namespace {

const TokenizerPolicy kSpace{TokenizerMode::kSpaceDelimited};

RcDataset CatFixture() {
  const std::string ctx = "the cat and a dog";
  return testutil::OneParagraph(
      ctx, {testutil::Qa("c", "where is the cat?", ctx, "cat"),
            testutil::Qa("d", "a dog?", ctx, "dog"),
            testutil::Qa("e", "and?", ctx, "and a")});
}

}  // namespace

TEST_CASE("build vocab") {
  RcDataset d = testutil::OneParagraph("a b a", {});
  QaEntry qa;
  qa.id = "1";
  qa.question = "b c";
  qa.noise_flag = true;
  d.articles[0].paragraphs[0].qas.push_back(qa);
  CHECK(BuildVocab(d, kSpace) == std::vector<std::string>{"a", "b", "c"});

  CHECK(BuildVocab(testutil::OneParagraph("熱力熱", {}), {TokenizerMode::kCjkChar}) ==
        std::vector<std::string>{"力", "熱"});
  CHECK(BuildVocab(testutil::OneParagraph("a , b .", {}), kSpace) ==
        std::vector<std::string>{"a", "b"});
}

TEST_CASE("build permutation") {
  const PermutationTable id = BuildPermutation(
      {"a", "b", "c"}, PermutationTable::kIdentitySeed, false, kSpace);
  CHECK(id.images() == id.vocabulary());
  CHECK(id.FixedPoints() == 3);

  const PermutationTable swap = BuildPermutation({"b", "a"}, 5, true, kSpace);
  CHECK(swap.vocabulary() == std::vector<std::string>{"a", "b"});
  CHECK(swap.images() == std::vector<std::string>{"b", "a"});

  std::vector<std::string> vocab;
  for (int i = 0; i < 100; ++i) vocab.push_back("w" + std::to_string(i));
  const PermutationTable t1 = BuildPermutation(vocab, 99, true, kSpace);
  const PermutationTable t2 = BuildPermutation(vocab, 99, true, kSpace);
  CHECK(t1.ToTsv() == t2.ToTsv());
  CHECK(t1.FixedPoints() == 0);
  CHECK(BuildPermutation(vocab, 100, true, kSpace).ToTsv() != t1.ToTsv());

  CHECK_THROWS_AS(BuildPermutation({"solo"}, 1, true, kSpace), ArgumentError);
  CHECK_NOTHROW(BuildPermutation({"solo"}, 1, false, kSpace));
  CHECK_THROWS_AS(
      BuildPermutation({"a", "b"}, PermutationTable::kIdentitySeed, true, kSpace),
      ArgumentError);
}

TEST_CASE("derangements have no fixed points across seeds") {
  std::vector<std::string> vocab;
  for (int i = 0; i < 37; ++i) vocab.push_back("t" + std::to_string(i));
  for (int64_t seed = 0; seed < 100; ++seed) {
    const PermutationTable t = BuildPermutation(vocab, seed, true, kSpace);
    REQUIRE(t.FixedPoints() == 0);
    std::vector<std::string> images = t.images();
    std::sort(images.begin(), images.end());
    REQUIRE(images == t.vocabulary());
  }
}

TEST_CASE("mixed policy keeps CJK and Latin classes apart") {
  const PermutationTable t =
      BuildPermutation({"法", "律", "熱", "law", "heat", "energy"}, 3, true,
                       {TokenizerMode::kMixed});
  for (size_t i = 0; i < t.vocabulary().size(); ++i) {
    const bool src_cjk = text::IsCjk(text::Decode(t.vocabulary()[i])[0]);
    const bool dst_cjk = text::IsCjk(text::Decode(t.images()[i])[0]);
    CHECK(src_cjk == dst_cjk);
  }
}

TEST_CASE("apply identity table") {
  const RcDataset d = CatFixture();
  const PermutationTable id = BuildPermutation(
      BuildVocab(d, kSpace), PermutationTable::kIdentitySeed, false, kSpace);
  CHECK(ApplyPermutation(d, id) == d);
}

TEST_CASE("apply recomputes offsets for length-changing images") {
  const RcDataset d = CatFixture();
  const PermutationTable t({"a", "and", "cat", "dog", "is", "the", "where"},
                           {"cat", "and", "a", "dog", "is", "the", "where"}, 0,
                           kSpace, false);
  const RcDataset out = ApplyPermutation(d, t);
  const Paragraph& p = out.articles[0].paragraphs[0];
  CHECK(p.context == "the a and cat dog");
  CHECK(p.qas[0].answers[0] == Answer{"a", 4});
  CHECK(p.qas[1].answers[0] == Answer{"dog", 14});
  CHECK(p.qas[2].answers[0] == Answer{"and cat", 6});
  CHECK(p.qas[0].question == "where is the a?");
  CHECK(p.qas[1].question == "cat dog?");
  CHECK_NOTHROW(ValidateDataset(out));
}

TEST_CASE("sigma then inverse restores the dataset") {
  const RcDataset d = testutil::SyntheticCorpus(21, 12, 3);
  const PermutationTable t = BuildPermutation(BuildVocab(d, kSpace), 8, true, kSpace);
  const RcDataset forward = ApplyPermutation(d, t);
  CHECK(forward != d);
  CHECK_NOTHROW(ValidateDataset(forward));
  const RcDataset back = ApplyPermutation(forward, t.Inverse());
  CHECK(SerializeDataset(back) == SerializeDataset(d));
}

TEST_CASE("token counts survive permutation") {
  const RcDataset d = testutil::SyntheticCorpus(4, 6, 2);
  const PermutationTable t = BuildPermutation(BuildVocab(d, kSpace), 1, true, kSpace);
  const RcDataset out = ApplyPermutation(d, t);
  for (size_t a = 0; a < d.articles.size(); ++a) {
    for (size_t p = 0; p < d.articles[a].paragraphs.size(); ++p) {
      const auto& before = d.articles[a].paragraphs[p];
      const auto& after = out.articles[a].paragraphs[p];
      const TokenSpan s0 = Tokenize(std::string_view(before.context), kSpace);
      const TokenSpan s1 = Tokenize(std::string_view(after.context), kSpace);
      REQUIRE(s0.size() == s1.size());
      for (size_t i = 0; i < s0.size(); ++i) {
        CHECK(s0[i].is_punct == s1[i].is_punct);
        if (s0[i].is_punct) CHECK(s0[i].text == s1[i].text);
      }
    }
  }
}

TEST_CASE("unknown tokens are a coverage error") {
  const RcDataset d = CatFixture();
  const PermutationTable t = BuildPermutation({"the", "cat"}, 2, true, kSpace);
  CHECK_THROWS_AS(ApplyPermutation(d, t), CoverageError);
}

TEST_CASE("table TSV round trip") {
  const PermutationTable t =
      BuildPermutation({"x\ty", "熱", "plain"}, 6, true, kSpace);
  const PermutationTable back = PermutationTable::FromTsv(t.ToTsv(), kSpace);
  CHECK(back.vocabulary() == t.vocabulary());
  CHECK(back.images() == t.images());
  CHECK_THROWS_AS(PermutationTable::FromTsv("a\tb\n", kSpace), ArgumentError);
  CHECK_THROWS_AS(PermutationTable::FromTsv("a\n", kSpace), ParseError);
}
