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

#include "xforge/typology.h"

#include <algorithm>
#include <charconv>
#include <functional>

#include "xforge/error.h"
#include "xforge/text.h"
#include "xforge/tsv.h"

namespace xforge {
namespace {

std::optional<int> ToInt(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Block symbols of a pattern, e.g. "SOV".
std::string_view Blocks(OrderPattern p) { return PatternName(p); }

struct TreeIndex {
  std::vector<std::vector<int>> children;  // by 1-based head, sorted
  std::vector<int> lo, hi, size;           // descendant span per node
};

TreeIndex Index(const DepSentence& s, int detached) {
  const int n = static_cast<int>(s.tokens.size());
  TreeIndex t;
  t.children.resize(n + 1);
  for (const DepToken& tok : s.tokens) {
    if (tok.index == detached) continue;
    t.children[tok.head].push_back(tok.index);
  }
  t.lo.assign(n + 1, 0);
  t.hi.assign(n + 1, 0);
  t.size.assign(n + 1, 0);
  std::function<void(int)> visit = [&](int node) {
    t.lo[node] = t.hi[node] = node;
    t.size[node] = 1;
    for (int c : t.children[node]) {
      visit(c);
      t.lo[node] = std::min(t.lo[node], t.lo[c]);
      t.hi[node] = std::max(t.hi[node], t.hi[c]);
      t.size[node] += t.size[c];
    }
  };
  for (int root : t.children[0]) visit(root);
  return t;
}

void Descendants(const TreeIndex& t, int node, std::vector<int>& out) {
  out.push_back(node);
  for (int c : t.children[node]) Descendants(t, c, out);
}

void Linearize(const DepSentence& s, const TreeIndex& t, OrderPattern p,
               int node, std::vector<int>& out) {
  if (t.hi[node] - t.lo[node] + 1 != t.size[node]) {
    std::vector<int> desc;
    Descendants(t, node, desc);
    std::sort(desc.begin(), desc.end());
    out.insert(out.end(), desc.begin(), desc.end());
    return;
  }
  std::vector<int> subjects, objects, verb;
  for (int c : t.children[node]) {
    const std::string& rel = s.tokens[c - 1].deprel;
    if (IsSubjectRelation(rel)) {
      subjects.push_back(c);
    } else if (IsObjectRelation(rel)) {
      objects.push_back(c);
    } else {
      verb.push_back(c);
    }
  }
  verb.push_back(node);
  std::sort(verb.begin(), verb.end());
  auto emit = [&](const std::vector<int>& members) {
    for (int m : members) {
      if (m == node) {
        out.push_back(node);
      } else {
        Linearize(s, t, p, m, out);
      }
    }
  };
  if (subjects.empty() && objects.empty()) {
    emit(verb);
    return;
  }
  for (char block : Blocks(p)) {
    switch (block) {
      case 'S': emit(subjects); break;
      case 'V': emit(verb); break;
      case 'O': emit(objects); break;
    }
  }
}

}  // namespace

std::string_view PatternName(OrderPattern p) {
  switch (p) {
    case OrderPattern::kSVO: return "SVO";
    case OrderPattern::kSOV: return "SOV";
    case OrderPattern::kVOS: return "VOS";
    case OrderPattern::kVSO: return "VSO";
    case OrderPattern::kOSV: return "OSV";
    case OrderPattern::kOVS: return "OVS";
  }
  return "SVO";
}

std::optional<OrderPattern> ParsePattern(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(c));
  for (OrderPattern p : kAllPatterns) {
    if (PatternName(p) == upper) return p;
  }
  return std::nullopt;
}

bool IsSubjectRelation(std::string_view deprel) {
  return deprel == "nsubj" || deprel == "nsubj:pass" || deprel == "csubj" ||
         deprel == "csubj:pass";
}

bool IsObjectRelation(std::string_view deprel) {
  return deprel == "obj" || deprel == "dobj" || deprel == "iobj";
}

void ValidateTree(const DepSentence& s, size_t sentence_number) {
  const std::string where = "sentence " + std::to_string(sentence_number);
  const int n = static_cast<int>(s.tokens.size());
  if (n == 0) throw StructureError(where + ": no tokens");
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const DepToken& tok = s.tokens[i];
    if (tok.index != i + 1) {
      throw StructureError(where + ": token ids are not consecutive at " +
                           std::to_string(tok.index));
    }
    if (tok.head < 0 || tok.head > n) {
      throw StructureError(where + ": head " + std::to_string(tok.head) +
                           " of token " + std::to_string(tok.index) +
                           " is out of range");
    }
    if (tok.head == tok.index) {
      throw StructureError(where + ": token " + std::to_string(tok.index) +
                           " heads itself");
    }
    if (tok.head == 0) ++roots;
  }
  if (roots != 1) {
    throw StructureError(where + ": expected one root, found " +
                         std::to_string(roots));
  }
  // Every chain of heads must reach the root within n steps.
  for (const DepToken& tok : s.tokens) {
    int node = tok.index;
    for (int steps = 0; node != 0; ++steps) {
      if (steps > n) {
        throw StructureError(where + ": cycle through token " +
                             std::to_string(tok.index));
      }
      node = s.tokens[node - 1].head;
    }
  }
}

std::vector<DepSentence> ParseConllu(std::string_view bytes) {
  std::vector<DepSentence> out;
  DepSentence current;
  auto finish = [&]() {
    if (current.tokens.empty()) return;
    ValidateTree(current, out.size() + 1);
    out.push_back(std::move(current));
    current = DepSentence{};
  };
  const auto lines = tsv::SplitLines(bytes);
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.find_first_not_of(" \t") == std::string_view::npos) {
      finish();
      continue;
    }
    if (line.front() == '#') continue;
    const auto cols = tsv::SplitFields(line);
    if (cols.size() != 10) {
      throw ParseError("CoNLL-U line " + std::to_string(i + 1) +
                       ": expected 10 columns, found " +
                       std::to_string(cols.size()));
    }
    if (cols[0].find_first_of("-.") != std::string_view::npos) continue;
    const auto id = ToInt(cols[0]);
    const auto head = ToInt(cols[6]);
    if (!id || !head) {
      throw ParseError("CoNLL-U line " + std::to_string(i + 1) +
                       ": non-numeric ID or HEAD");
    }
    current.tokens.push_back(
        {*id, std::string(cols[1]), *head, std::string(cols[7])});
  }
  finish();
  return out;
}

std::vector<int> RelinearizeSentence(const DepSentence& s, OrderPattern p) {
  const int n = static_cast<int>(s.tokens.size());
  int root = 0;
  for (const DepToken& tok : s.tokens) {
    if (tok.head == 0) root = tok.index;
  }
  int final_punct = 0;
  const DepToken& last = s.tokens.back();
  if (n > 1 && last.index != root && last.head == root &&
      last.deprel == "punct") {
    final_punct = last.index;
  }
  const TreeIndex t = Index(s, final_punct);
  std::vector<int> out;
  out.reserve(n);
  Linearize(s, t, p, root, out);
  if (final_punct != 0) out.push_back(final_punct);
  return out;
}

namespace {

struct AlignedToken {
  int64_t start = 0;  // code points in the original text
  int64_t end = 0;
};

struct AlignedText {
  std::vector<const DepSentence*> sentences;
  std::vector<std::vector<AlignedToken>> spans;  // per sentence, per token
};

AlignedText Align(const std::u32string& textv,
                  const std::vector<DepSentence>& parses, size_t& cursor,
                  const std::string& what) {
  AlignedText out;
  const int64_t n = static_cast<int64_t>(textv.size());
  int64_t pos = 0;
  auto skip_space = [&]() {
    while (pos < n && text::IsSpace(textv[pos])) ++pos;
  };
  skip_space();
  while (pos < n) {
    if (cursor >= parses.size()) {
      throw AlignmentError(what + ": parses exhausted at code point " +
                           std::to_string(pos));
    }
    const DepSentence& s = parses[cursor];
    std::vector<AlignedToken> spans;
    for (const DepToken& tok : s.tokens) {
      skip_space();
      const std::u32string form = text::Decode(tok.form);
      if (form.empty() || textv.compare(pos, form.size(), form) != 0) {
        throw AlignmentError(what + ": sentence " + std::to_string(cursor + 1) +
                             " token " + std::to_string(tok.index) + " \"" +
                             tok.form + "\" does not match the text at " +
                             std::to_string(pos));
      }
      spans.push_back({pos, pos + static_cast<int64_t>(form.size())});
      pos += static_cast<int64_t>(form.size());
    }
    out.sentences.push_back(&s);
    out.spans.push_back(std::move(spans));
    ++cursor;
    skip_space();
  }
  return out;
}

struct Rebuilt {
  std::u32string text;
  // new_spans[k][i]: token i (0-based) of sentence k in the rebuilt text.
  std::vector<std::vector<AlignedToken>> new_spans;
};

Rebuilt Rebuild(const AlignedText& aligned, OrderPattern pattern,
                ReorderStats& stats) {
  Rebuilt out;
  for (const DepSentence* s : aligned.sentences) {
    const std::vector<int> order = RelinearizeSentence(*s, pattern);
    ++stats.sentences;
    if (!std::is_sorted(order.begin(), order.end())) ++stats.changed_sentences;
    std::vector<AlignedToken> spans(s->tokens.size());
    for (int idx : order) {
      if (!out.text.empty()) out.text.push_back(U' ');
      const std::u32string form = text::Decode(s->tokens[idx - 1].form);
      const int64_t start = static_cast<int64_t>(out.text.size());
      out.text += form;
      spans[idx - 1] = {start, static_cast<int64_t>(out.text.size())};
    }
    out.new_spans.push_back(std::move(spans));
  }
  return out;
}

}  // namespace

RcDataset ReorderDataset(const RcDataset& d,
                         const std::vector<DepSentence>& parses,
                         OrderPattern pattern, const RecoveryPolicy& policy,
                         ReorderStats* stats) {
  ReorderStats local;
  size_t cursor = 0;
  RcDataset out;
  out.version = d.version;
  for (size_t a = 0; a < d.articles.size(); ++a) {
    const Article& article = d.articles[a];
    Article na;
    na.title = article.title;
    for (size_t p = 0; p < article.paragraphs.size(); ++p) {
      const Paragraph& para = article.paragraphs[p];
      const std::string where =
          "article " + std::to_string(a) + " paragraph " + std::to_string(p);
      const std::u32string context = text::Decode(para.context);
      const AlignedText aligned =
          Align(context, parses, cursor, where + " context");
      const Rebuilt rebuilt = Rebuild(aligned, pattern, local);
      Paragraph np;
      np.context = text::Encode(rebuilt.text);

      for (const QaEntry& qa : para.qas) {
        const AlignedText q_aligned = Align(text::Decode(qa.question), parses,
                                            cursor, "qa \"" + qa.id + "\"");
        QaEntry nq = qa;
        nq.question = text::Encode(Rebuild(q_aligned, pattern, local).text);
        nq.answers.clear();

        bool any_accepted = false;
        int64_t worst = 0;
        std::optional<Answer> best_effort;
        for (const Answer& ans : qa.answers) {
          const int64_t s = ans.answer_start;
          const int64_t e = s + static_cast<int64_t>(text::Length(ans.text));
          // Covered tokens, clipped to the answer, in original order.
          std::u32string query;
          int64_t hint = -1;
          for (size_t k = 0; k < aligned.spans.size(); ++k) {
            for (size_t i = 0; i < aligned.spans[k].size(); ++i) {
              const AlignedToken& tok = aligned.spans[k][i];
              if (tok.end <= s || tok.start >= e) continue;
              const int64_t lo = std::max(tok.start, s);
              const int64_t hi = std::min(tok.end, e);
              if (!query.empty()) query.push_back(U' ');
              query += context.substr(lo, hi - lo);
              if (hint < 0) {
                hint = rebuilt.new_spans[k][i].start + (lo - tok.start);
              }
            }
          }
          if (query.empty()) {
            query = text::CollapseSpaces(
                std::u32string_view(context).substr(s, e - s));
          }
          if (query.empty() || rebuilt.text.empty()) continue;
          const SpanMatch m =
              BestSpanSearch(rebuilt.text, query, std::max<int64_t>(hint, 0));
          worst = std::max(worst, m.distance);
          Answer found{m.matched_text, m.start};
          if (m.distance <=
              policy.Threshold(static_cast<int64_t>(query.size()))) {
            any_accepted = true;
            if (m.distance == 0) ++local.exact;
            nq.answers.push_back(std::move(found));
          } else if (!best_effort) {
            best_effort = std::move(found);
          }
        }

        TransformTag tag;
        tag.op = "reorder";
        tag.params["pattern"] = std::string(PatternName(pattern));
        tag.params["max_distance"] = std::to_string(worst);
        if (any_accepted) {
          ++local.recovered;
        } else if (policy.mode == RecoveryMode::kTrainDrop) {
          ++local.dropped;
          continue;
        } else {
          ++local.noise;
          nq.noise_flag = true;
          if (best_effort) nq.answers.push_back(std::move(*best_effort));
        }
        tag.params["status"] = any_accepted ? "recovered" : "noise";
        nq.lineage.push_back(std::move(tag));
        np.qas.push_back(std::move(nq));
      }
      if (!np.qas.empty()) na.paragraphs.push_back(std::move(np));
    }
    if (!na.paragraphs.empty()) out.articles.push_back(std::move(na));
  }
  if (cursor != parses.size()) {
    throw AlignmentError("sentence " + std::to_string(cursor + 1) +
                         " is left over after aligning the dataset");
  }
  if (stats != nullptr) *stats = local;
  return out;
}

}  // namespace xforge
