// swd/arpa.cc

// Copyright 2026  swdecode authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "swd/arpa.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "swd/errors.h"

namespace swd {

namespace {

std::vector<std::string> SplitWhitespace(const std::string &line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ' ' || c == '\t' || c == '\r') {
      if (!cur.empty()) fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) fields.push_back(std::move(cur));
  return fields;
}

[[noreturn]] void Fail(const std::string &source, int line_no,
                       const std::string &what) {
  throw FormatError(source + ":" + std::to_string(line_no) + ": " + what);
}

double ParseLog10(const std::string &s, const std::string &source, int line_no) {
  try {
    size_t pos = 0;
    double value = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception &) {
    Fail(source, line_no, "expected a log10 value, got \"" + s + "\"");
  }
}

void PrintDouble(std::string *out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out->append(buf, res.ptr);
}

}  // namespace

int64_t ArpaModel::NumEntries() const {
  int64_t n = 0;
  for (int32_t order = 1; order <= MaxOrder(); ++order) {
    n += static_cast<int64_t>(Entries(order).size());
  }
  return n;
}

const NgramEntry *ArpaModel::Find(const std::vector<std::string> &words) const {
  int32_t order = static_cast<int32_t>(words.size());
  if (order < 1 || order > MaxOrder()) return nullptr;
  for (const NgramEntry &entry : Entries(order)) {
    if (entry.words == words) return &entry;
  }
  return nullptr;
}

ArpaModel ParseArpa(std::istream &in, const std::string &source) {
  std::string line;
  int line_no = 0;
  auto next_content_line = [&](std::vector<std::string> *fields) {
    while (std::getline(in, line)) {
      ++line_no;
      *fields = SplitWhitespace(line);
      if (!fields->empty()) return true;
    }
    fields->clear();
    return false;
  };

  std::vector<std::string> fields;
  if (!next_content_line(&fields) || fields[0] != "\\data\\") {
    Fail(source, line_no, "expected \\data\\ header");
  }

  // "ngram k=N" count lines.
  std::vector<int64_t> counts;
  while (next_content_line(&fields)) {
    if (fields[0] != "ngram") break;
    std::string decl = fields.size() == 2 ? fields[1] : "";
    auto eq = decl.find('=');
    if (fields.size() != 2 || eq == std::string::npos) {
      Fail(source, line_no, "expected \"ngram k=N\"");
    }
    int order = 0;
    int64_t count = -1;
    try {
      order = std::stoi(decl.substr(0, eq));
      count = std::stoll(decl.substr(eq + 1));
    } catch (const std::exception &) {
      Fail(source, line_no, "expected \"ngram k=N\"");
    }
    if (order != static_cast<int>(counts.size()) + 1 || count < 0) {
      Fail(source, line_no, "ngram orders must be 1..n in sequence");
    }
    counts.push_back(count);
  }
  if (counts.empty()) Fail(source, line_no, "no ngram counts in \\data\\");

  ArpaModel model(static_cast<int32_t>(counts.size()));
  for (int32_t order = 1; order <= model.MaxOrder(); ++order) {
    std::string header = "\\" + std::to_string(order) + "-grams:";
    if (fields.empty() || fields[0] != header) {
      Fail(source, line_no, "expected section header " + header);
    }
    auto *entries = model.MutableEntries(order);
    entries->reserve(static_cast<size_t>(counts[order - 1]));
    while (next_content_line(&fields)) {
      if (!fields.empty() && fields[0].size() > 1 && fields[0][0] == '\\') break;
      // logp w1..wk [backoff]
      size_t min_fields = 1 + static_cast<size_t>(order);
      if (fields.size() < min_fields || fields.size() > min_fields + 1) {
        Fail(source, line_no,
             "expected \"logp " + std::to_string(order) +
                 " word(s) [backoff]\", got " + std::to_string(fields.size()) +
                 " fields");
      }
      NgramEntry entry;
      entry.log10_prob = ParseLog10(fields[0], source, line_no);
      if (entry.log10_prob > 0.0) {
        Fail(source, line_no, "log10 probability must be <= 0");
      }
      entry.words.assign(fields.begin() + 1, fields.begin() + 1 + order);
      if (fields.size() == min_fields + 1) {
        entry.log10_backoff = ParseLog10(fields.back(), source, line_no);
      }
      entries->push_back(std::move(entry));
      if (static_cast<int64_t>(entries->size()) > counts[order - 1]) {
        Fail(source, line_no,
             "more " + std::to_string(order) + "-grams than the \\data\\ "
             "header declared (" + std::to_string(counts[order - 1]) + ")");
      }
    }
    if (static_cast<int64_t>(entries->size()) != counts[order - 1]) {
      Fail(source, line_no,
           "\\data\\ declared " + std::to_string(counts[order - 1]) + " " +
               std::to_string(order) + "-grams but the section has " +
               std::to_string(entries->size()));
    }
  }
  if (fields.empty() || fields[0] != "\\end\\") {
    Fail(source, line_no, "expected \\end\\");
  }

  // Every history must be present one order down.
  for (int32_t order = 2; order <= model.MaxOrder(); ++order) {
    std::set<std::vector<std::string>> lower;
    for (const NgramEntry &entry : model.Entries(order - 1)) {
      lower.insert(entry.words);
    }
    for (const NgramEntry &entry : model.Entries(order)) {
      std::vector<std::string> history(entry.words.begin(),
                                       entry.words.end() - 1);
      if (!lower.count(history)) {
        std::string joined;
        for (const auto &w : entry.words) joined += w + " ";
        Fail(source, line_no,
             "backoff context missing: " + std::to_string(order) + "-gram \"" +
                 joined + "\" has no " + std::to_string(order - 1) +
                 "-gram history");
      }
    }
  }
  return model;
}

ArpaModel ParseArpaFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open arpa file " + path);
  return ParseArpa(in, path);
}

ArpaModel ParseArpaString(const std::string &text, const std::string &source) {
  std::istringstream in(text);
  return ParseArpa(in, source);
}

std::string EmitArpa(const ArpaModel &model) {
  std::string out;
  out += "\\data\\\n";
  for (int32_t order = 1; order <= model.MaxOrder(); ++order) {
    out += "ngram " + std::to_string(order) + "=" +
           std::to_string(model.Entries(order).size()) + "\n";
  }
  for (int32_t order = 1; order <= model.MaxOrder(); ++order) {
    out += "\n\\" + std::to_string(order) + "-grams:\n";
    for (const NgramEntry &entry : model.Entries(order)) {
      PrintDouble(&out, entry.log10_prob);
      for (const std::string &word : entry.words) {
        out += "\t";
        out += word;
      }
      if (entry.log10_backoff) {
        out += "\t";
        PrintDouble(&out, *entry.log10_backoff);
      }
      out += "\n";
    }
  }
  out += "\n\\end\\\n";
  return out;
}

}  // namespace swd
