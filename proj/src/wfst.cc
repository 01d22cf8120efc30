// swd/wfst.cc

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

#include "swd/wfst.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "swd/errors.h"

namespace swd {

namespace {

std::vector<std::string> SplitFields(const std::string &line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == '\t' || c == ' ') {
      if (!cur.empty()) fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) fields.push_back(std::move(cur));
  return fields;
}

int64_t ParseInt(const std::string &s, const std::string &source, int line_no) {
  int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError(source + ":" + std::to_string(line_no) +
                      ": expected an integer, got \"" + s + "\"");
  }
  return value;
}

double ParseDouble(const std::string &s, const std::string &source,
                   int line_no) {
  if (s == "Infinity" || s == "inf") return Weight::kInfinity;
  try {
    size_t pos = 0;
    double value = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return value;
  } catch (const std::exception &) {
    throw FormatError(source + ":" + std::to_string(line_no) +
                      ": expected a weight, got \"" + s + "\"");
  }
}

void PrintWeight(std::ostream &out, Weight w) {
  if (w.IsZero()) {
    out << "Infinity";
    return;
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), w.Value());
  out.write(buf, res.ptr - buf);
}

}  // namespace

Label SymbolTable::AddSymbol(const std::string &symbol) {
  auto it = ids_.find(symbol);
  if (it != ids_.end()) return it->second;
  Label id = static_cast<Label>(names_.size());
  names_.push_back(symbol);
  ids_.emplace(symbol, id);
  return id;
}

std::optional<Label> SymbolTable::Find(const std::string &symbol) const {
  auto it = ids_.find(symbol);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

const std::string &SymbolTable::Name(Label id) const { return names_[id]; }

SymbolTable SymbolTable::ReadText(std::istream &in, const std::string &source) {
  SymbolTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = SplitFields(line);
    if (fields.empty()) continue;
    if (fields.size() != 2) {
      throw FormatError(source + ":" + std::to_string(line_no) +
                        ": expected \"symbol<TAB>id\"");
    }
    int64_t id = ParseInt(fields[1], source, line_no);
    Label got = table.AddSymbol(fields[0]);
    if (got != id) {
      throw FormatError(source + ":" + std::to_string(line_no) +
                        ": symbol ids must be dense and increasing from 0");
    }
  }
  return table;
}

SymbolTable SymbolTable::ReadTextFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open symbol table " + path);
  return ReadText(in, path);
}

void SymbolTable::WriteText(std::ostream &out) const {
  for (size_t i = 0; i < names_.size(); ++i) {
    out << names_[i] << '\t' << i << '\n';
  }
}

void SymbolTable::WriteTextFile(const std::string &path) const {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write symbol table " + path);
  WriteText(out);
}

void WriteFstText(const Wfst &fst, std::ostream &out) {
  if (fst.Empty()) return;
  // The start state's lines must come first.
  std::vector<StateId> order;
  order.reserve(fst.NumStates());
  order.push_back(fst.Start());
  for (StateId s = 0; s < fst.NumStates(); ++s) {
    if (s != fst.Start()) order.push_back(s);
  }
  for (StateId s : order) {
    for (const Arc &arc : fst.Arcs(s)) {
      out << s << '\t' << arc.nextstate << '\t' << arc.ilabel << '\t'
          << arc.olabel << '\t';
      PrintWeight(out, arc.weight);
      out << '\n';
    }
    if (fst.IsFinal(s)) {
      out << s << '\t';
      PrintWeight(out, fst.Final(s));
      out << '\n';
    }
  }
}

void WriteFstTextFile(const Wfst &fst, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write fst " + path);
  WriteFstText(fst, out);
}

Wfst ReadFstText(std::istream &in, const std::string &source) {
  Wfst fst;
  std::string line;
  int line_no = 0;
  bool saw_start = false;
  auto ensure_state = [&fst](int64_t s, const std::string &src, int ln) {
    if (s < 0 || s > 1000000000) {
      throw FormatError(src + ":" + std::to_string(ln) + ": bad state id " +
                        std::to_string(s));
    }
    while (fst.NumStates() <= s) fst.AddState();
    return static_cast<StateId>(s);
  };
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = SplitFields(line);
    if (fields.empty()) continue;
    if (fields.size() > 5) {
      throw FormatError(source + ":" + std::to_string(line_no) +
                        ": too many fields");
    }
    StateId src = ensure_state(ParseInt(fields[0], source, line_no), source,
                               line_no);
    if (!saw_start) {
      fst.SetStart(src);
      saw_start = true;
    }
    if (fields.size() <= 2) {
      // Final line: "state [weight]".
      Weight w = fields.size() == 2
                     ? Weight(ParseDouble(fields[1], source, line_no))
                     : Weight::One();
      fst.SetFinal(src, w);
    } else if (fields.size() >= 4) {
      StateId dst = ensure_state(ParseInt(fields[1], source, line_no), source,
                                 line_no);
      auto ilabel = ParseInt(fields[2], source, line_no);
      auto olabel = ParseInt(fields[3], source, line_no);
      Weight w = fields.size() == 5
                     ? Weight(ParseDouble(fields[4], source, line_no))
                     : Weight::One();
      fst.AddArc(src, Arc(static_cast<Label>(ilabel),
                          static_cast<Label>(olabel), w, dst));
    } else {
      throw FormatError(source + ":" + std::to_string(line_no) +
                        ": expected a final line (1-2 fields) or an arc line "
                        "(4-5 fields), got 3");
    }
  }
  return fst;
}

Wfst ReadFstTextFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open fst " + path);
  return ReadFstText(in, path);
}

}  // namespace swd
