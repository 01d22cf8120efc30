// swd/lexicon.h

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

#ifndef SWD_LEXICON_H_
#define SWD_LEXICON_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace swd {

struct LexiconEntry {
  std::string word;
  std::vector<std::string> tokens;
  double cost = 0.0;  // optional pronunciation cost, not part of the text format
};

struct Lexicon {
  std::vector<LexiconEntry> entries;
};

// Text format: "word<TAB>token token token", one entry per line. An entry
// with no tokens is an error.
Lexicon ParseLexicon(std::istream &in, const std::string &source);
Lexicon ParseLexiconFile(const std::string &path);
Lexicon ParseLexiconString(const std::string &text,
                           const std::string &source = "<string>");

}  // namespace swd

#endif  // SWD_LEXICON_H_
