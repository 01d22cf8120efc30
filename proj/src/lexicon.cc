// swd/lexicon.cc

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

#include "swd/lexicon.h"

#include <fstream>
#include <sstream>

#include "swd/errors.h"

namespace swd {

Lexicon ParseLexicon(std::istream &in, const std::string &source) {
  Lexicon lexicon;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
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
    if (fields.empty()) continue;
    if (fields.size() < 2) {
      throw FormatError(source + ":" + std::to_string(line_no) + ": word \"" +
                        fields[0] + "\" has an empty token sequence");
    }
    LexiconEntry entry;
    entry.word = fields[0];
    entry.tokens.assign(fields.begin() + 1, fields.end());
    lexicon.entries.push_back(std::move(entry));
  }
  return lexicon;
}

Lexicon ParseLexiconFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open lexicon " + path);
  return ParseLexicon(in, path);
}

Lexicon ParseLexiconString(const std::string &text, const std::string &source) {
  std::istringstream in(text);
  return ParseLexicon(in, source);
}

}  // namespace swd
