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

#include "xforge/dataset.h"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "json.hpp"
#include "xforge/error.h"
#include "xforge/random.h"
#include "xforge/text.h"

namespace xforge {
namespace {

using Json = nlohmann::ordered_json;

const Json& Field(const Json& obj, const char* key, const std::string& path,
                  Json::value_t type) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(path + ": missing field \"" + key + "\"");
  }
  const bool ok = type == Json::value_t::number_integer
                      ? it->is_number_integer()
                      : it->type() == type;
  if (!ok) {
    throw ParseError(path + "." + key + ": unexpected type " +
                     std::string(it->type_name()));
  }
  return *it;
}

std::string Str(const Json& obj, const char* key, const std::string& path) {
  return Field(obj, key, path, Json::value_t::string).get<std::string>();
}

const Json& Arr(const Json& obj, const char* key, const std::string& path) {
  return Field(obj, key, path, Json::value_t::array);
}

void ParseExtension(const Json& qa, const std::string& path, QaEntry& out) {
  auto it = qa.find("xforge");
  if (it == qa.end()) return;
  const std::string ext_path = path + ".xforge";
  if (!it->is_object()) throw ParseError(ext_path + ": expected object");
  if (auto noise = it->find("noise"); noise != it->end()) {
    if (!noise->is_boolean()) throw ParseError(ext_path + ".noise: expected bool");
    out.noise_flag = noise->get<bool>();
  }
  if (auto lineage = it->find("lineage"); lineage != it->end()) {
    if (!lineage->is_array()) {
      throw ParseError(ext_path + ".lineage: expected array");
    }
    for (size_t i = 0; i < lineage->size(); ++i) {
      const std::string tag_path =
          ext_path + ".lineage[" + std::to_string(i) + "]";
      const Json& tag = (*lineage)[i];
      if (!tag.is_object()) throw ParseError(tag_path + ": expected object");
      TransformTag t;
      t.op = Str(tag, "op", tag_path);
      if (auto params = tag.find("params"); params != tag.end()) {
        if (!params->is_object()) {
          throw ParseError(tag_path + ".params: expected object");
        }
        for (const auto& [k, v] : params->items()) {
          if (!v.is_string()) {
            throw ParseError(tag_path + ".params." + k + ": expected string");
          }
          t.params[k] = v.get<std::string>();
        }
      }
      out.lineage.push_back(std::move(t));
    }
  }
}

}  // namespace

size_t RcDataset::QaCount() const {
  size_t n = 0;
  for (const Article& a : articles) {
    for (const Paragraph& p : a.paragraphs) n += p.qas.size();
  }
  return n;
}

void ValidateDataset(const RcDataset& d) {
  std::unordered_set<std::string> ids;
  for (const Article& article : d.articles) {
    for (const Paragraph& para : article.paragraphs) {
      const std::u32string context = text::Decode(para.context);
      for (const QaEntry& qa : para.qas) {
        if (!ids.insert(qa.id).second) {
          throw IntegrityError("duplicate qa id \"" + qa.id + "\"");
        }
        if (qa.answers.empty() && !qa.noise_flag) {
          throw IntegrityError("qa \"" + qa.id +
                               "\" has no answers and is not noise-flagged");
        }
        for (const Answer& ans : qa.answers) {
          const std::u32string answer = text::Decode(ans.text);
          const int64_t start = ans.answer_start;
          const int64_t end = start + static_cast<int64_t>(answer.size());
          if (start < 0 || end > static_cast<int64_t>(context.size()) ||
              context.compare(start, answer.size(), answer) != 0) {
            throw IntegrityError("qa \"" + qa.id + "\": answer \"" +
                                 ans.text + "\" not found at offset " +
                                 std::to_string(start));
          }
        }
      }
    }
  }
}

RcDataset ParseDataset(std::string_view bytes) {
  Json root;
  try {
    root = Json::parse(bytes.begin(), bytes.end());
  } catch (const Json::parse_error& e) {
    throw ParseError(std::string("$: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("$: expected object");
  RcDataset d;
  if (auto v = root.find("version"); v != root.end()) {
    if (!v->is_string()) throw ParseError("$.version: expected string");
    d.version = v->get<std::string>();
  }
  const Json& data = Arr(root, "data", "$");
  try {
    for (size_t a = 0; a < data.size(); ++a) {
      const std::string apath = "$.data[" + std::to_string(a) + "]";
      const Json& ja = data[a];
      if (!ja.is_object()) throw ParseError(apath + ": expected object");
      Article article;
      if (ja.contains("title")) article.title = Str(ja, "title", apath);
      const Json& paras = Arr(ja, "paragraphs", apath);
      for (size_t p = 0; p < paras.size(); ++p) {
        const std::string ppath = apath + ".paragraphs[" + std::to_string(p) + "]";
        const Json& jp = paras[p];
        if (!jp.is_object()) throw ParseError(ppath + ": expected object");
        Paragraph para;
        para.context = Str(jp, "context", ppath);
        const Json& qas = Arr(jp, "qas", ppath);
        for (size_t q = 0; q < qas.size(); ++q) {
          const std::string qpath = ppath + ".qas[" + std::to_string(q) + "]";
          const Json& jq = qas[q];
          if (!jq.is_object()) throw ParseError(qpath + ": expected object");
          QaEntry qa;
          qa.id = Str(jq, "id", qpath);
          qa.question = Str(jq, "question", qpath);
          const Json& answers = Arr(jq, "answers", qpath);
          for (size_t k = 0; k < answers.size(); ++k) {
            const std::string kpath =
                qpath + ".answers[" + std::to_string(k) + "]";
            const Json& jk = answers[k];
            if (!jk.is_object()) throw ParseError(kpath + ": expected object");
            Answer ans;
            ans.text = Str(jk, "text", kpath);
            ans.answer_start =
                Field(jk, "answer_start", kpath, Json::value_t::number_integer)
                    .get<int64_t>();
            qa.answers.push_back(std::move(ans));
          }
          ParseExtension(jq, qpath, qa);
          para.qas.push_back(std::move(qa));
        }
        article.paragraphs.push_back(std::move(para));
      }
      d.articles.push_back(std::move(article));
    }
  } catch (const Json::exception& e) {
    throw ParseError(std::string("$: ") + e.what());
  }
  ValidateDataset(d);
  return d;
}

std::string SerializeDataset(const RcDataset& d) {
  Json root = Json::object();
  root["version"] = d.version;
  Json data = Json::array();
  for (const Article& article : d.articles) {
    Json ja = Json::object();
    ja["title"] = article.title;
    Json paras = Json::array();
    for (const Paragraph& para : article.paragraphs) {
      Json jp = Json::object();
      jp["context"] = para.context;
      Json qas = Json::array();
      for (const QaEntry& qa : para.qas) {
        Json jq = Json::object();
        jq["id"] = qa.id;
        jq["question"] = qa.question;
        Json answers = Json::array();
        for (const Answer& ans : qa.answers) {
          Json jk = Json::object();
          jk["text"] = ans.text;
          jk["answer_start"] = ans.answer_start;
          answers.push_back(std::move(jk));
        }
        jq["answers"] = std::move(answers);
        if (qa.noise_flag || !qa.lineage.empty()) {
          Json ext = Json::object();
          ext["noise"] = qa.noise_flag;
          Json lineage = Json::array();
          for (const TransformTag& tag : qa.lineage) {
            Json jt = Json::object();
            jt["op"] = tag.op;
            Json params = Json::object();
            for (const auto& [k, v] : tag.params) params[k] = v;
            jt["params"] = std::move(params);
            lineage.push_back(std::move(jt));
          }
          ext["lineage"] = std::move(lineage);
          jq["xforge"] = std::move(ext);
        }
        qas.push_back(std::move(jq));
      }
      jp["qas"] = std::move(qas);
      paras.push_back(std::move(jp));
    }
    ja["paragraphs"] = std::move(paras);
    data.push_back(std::move(ja));
  }
  root["data"] = std::move(data);
  return root.dump(-1, ' ', false, Json::error_handler_t::strict) + "\n";
}

void PruneEmpty(RcDataset& d) {
  for (Article& article : d.articles) {
    std::erase_if(article.paragraphs,
                  [](const Paragraph& p) { return p.qas.empty(); });
  }
  std::erase_if(d.articles,
                [](const Article& a) { return a.paragraphs.empty(); });
}

RcDataset Downsample(const RcDataset& d, size_t target_qa_count,
                     uint64_t seed) {
  const size_t total = d.QaCount();
  if (target_qa_count > total) {
    throw ArgumentError("downsample target " + std::to_string(target_qa_count) +
                        " exceeds qa count " + std::to_string(total));
  }
  if (target_qa_count == total) return d;

  // Partial Fisher-Yates over qa ordinals.
  std::vector<size_t> order(total);
  std::iota(order.begin(), order.end(), size_t{0});
  Rng rng(seed);
  for (size_t i = 0; i < target_qa_count; ++i) {
    const size_t j = i + static_cast<size_t>(rng.Below(total - i));
    std::swap(order[i], order[j]);
  }
  std::vector<bool> keep(total, false);
  for (size_t i = 0; i < target_qa_count; ++i) keep[order[i]] = true;

  RcDataset out;
  out.version = d.version;
  size_t ordinal = 0;
  for (const Article& article : d.articles) {
    Article na;
    na.title = article.title;
    for (const Paragraph& para : article.paragraphs) {
      Paragraph np;
      np.context = para.context;
      for (const QaEntry& qa : para.qas) {
        if (keep[ordinal++]) np.qas.push_back(qa);
      }
      na.paragraphs.push_back(std::move(np));
    }
    out.articles.push_back(std::move(na));
  }
  PruneEmpty(out);
  return out;
}

}  // namespace xforge
