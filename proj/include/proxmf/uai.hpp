// Copyright 2026 The proxmf Authors
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
//
// Reader and writer for the UAI MARKOV interchange format. Table entries in a
// file are strictly positive potential values; internally they are stored as
// natural logarithms, and maximizing the summed log-potential is the modelled
// objective. Scope order and table index order are preserved verbatim.
#ifndef PROXMF_UAI_HPP
#define PROXMF_UAI_HPP

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>

#include "proxmf/field.hpp"

namespace proxmf {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) {}

  std::optional<std::string_view> next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
    if (pos_ >= text_.size()) return std::nullopt;
    const size_t begin = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(begin, pos_ - begin);
  }

  int line() const { return line_; }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
};

inline int64_t parse_count(const Tokenizer& tok, std::string_view token, const char* what) {
  std::string buf(token);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(buf.c_str(), &end, 10);
  if (errno != 0 || end == buf.c_str() || *end != '\0' || v < 0)
    throw ParseError(tok.line(), std::string("expected ") + what + ", got '" + buf + "'");
  return static_cast<int64_t>(v);
}

inline double parse_real(const Tokenizer& tok, std::string_view token, const char* what) {
  std::string buf(token);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (errno == ERANGE || end == buf.c_str() || *end != '\0')
    throw ParseError(tok.line(), std::string("expected ") + what + ", got '" + buf + "'");
  return v;
}

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace detail

/// Parses UAI MARKOV text into a validated field with log-space tables.
inline DiscreteField parse_uai(std::string_view text) {
  detail::Tokenizer tok(text);
  auto need = [&tok](const char* what) -> std::string_view {
    auto t = tok.next();
    if (!t) throw ParseError(tok.line(), std::string("unexpected end of input, expected ") + what);
    return *t;
  };

  const std::string_view header = need("MARKOV header");
  if (header != "MARKOV")
    throw ParseError(tok.line(),
                     "malformed header '" + std::string(header) + "', expected MARKOV");

  DiscreteField field;
  const int64_t n = detail::parse_count(tok, need("variable count"), "variable count");
  field.num_variables = static_cast<int32_t>(n);
  field.cardinalities.reserve(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    const int64_t c = detail::parse_count(tok, need("cardinality"), "cardinality");
    field.cardinalities.push_back(static_cast<int32_t>(c));
  }

  const int64_t num_factors = detail::parse_count(tok, need("factor count"), "factor count");
  field.factors.resize(static_cast<size_t>(num_factors));
  for (int64_t k = 0; k < num_factors; ++k) {
    const int64_t arity = detail::parse_count(tok, need("factor arity"), "factor arity");
    if (arity < 1 || arity > kMaxFactorArity)
      throw ParseError(tok.line(), "factor " + std::to_string(k) + ": arity " +
                                       std::to_string(arity) + " outside [1, " +
                                       std::to_string(kMaxFactorArity) + "]");
    Factor& f = field.factors[static_cast<size_t>(k)];
    f.scope.reserve(static_cast<size_t>(arity));
    for (int64_t a = 0; a < arity; ++a) {
      const int64_t v = detail::parse_count(tok, need("scope variable index"), "variable index");
      if (v >= n)
        throw ParseError(tok.line(), "factor " + std::to_string(k) + ": variable index " +
                                         std::to_string(v) + " out of range [0, " +
                                         std::to_string(n) + ")");
      f.scope.push_back(static_cast<int32_t>(v));
    }
  }

  for (int64_t k = 0; k < num_factors; ++k) {
    Factor& f = field.factors[static_cast<size_t>(k)];
    const int64_t want = expected_table_size(field, f);
    const int64_t count = detail::parse_count(tok, need("table entry count"), "table entry count");
    if (count != want)
      throw ParseError(tok.line(), "factor " + std::to_string(k) + ": table entry count " +
                                       std::to_string(count) + ", scope requires " +
                                       std::to_string(want));
    f.table.reserve(static_cast<size_t>(count));
    for (int64_t e = 0; e < count; ++e) {
      const double p = detail::parse_real(tok, need("table entry"), "table entry");
      if (!(p > 0.0) || !std::isfinite(p))
        throw ParseError(tok.line(), "factor " + std::to_string(k) +
                                         ": nonpositive table entry " + detail::format_real(p));
      f.table.push_back(std::log(p));
    }
  }

  if (auto extra = tok.next())
    throw ParseError(tok.line(), "unexpected trailing token '" + std::string(*extra) + "'");

  validate(field);
  return field;
}

/// Writes UAI MARKOV text; tables are exponentiated back to potential values.
inline std::string serialize_uai(const DiscreteField& field) {
  std::string out = "MARKOV\n";
  out += std::to_string(field.num_variables);
  out += '\n';
  for (int32_t i = 0; i < field.num_variables; ++i) {
    if (i) out += ' ';
    out += std::to_string(field.cardinalities[static_cast<size_t>(i)]);
  }
  out += '\n';
  out += std::to_string(field.factors.size());
  out += '\n';
  for (const Factor& f : field.factors) {
    out += std::to_string(f.arity());
    for (int32_t v : f.scope) {
      out += ' ';
      out += std::to_string(v);
    }
    out += '\n';
  }
  for (const Factor& f : field.factors) {
    out += '\n';
    out += std::to_string(f.table.size());
    out += '\n';
    for (size_t e = 0; e < f.table.size(); ++e) {
      const double p = std::exp(f.table[e]);
      if (!std::isfinite(p) || p <= 0.0)
        throw ValidationError("serialize_uai: log-potential " + detail::format_real(f.table[e]) +
                              " does not map to a positive finite value");
      out += detail::format_real(p);
      out += (e + 1 == f.table.size()) ? '\n' : ' ';
    }
  }
  return out;
}

}  // namespace proxmf

#endif  // PROXMF_UAI_HPP
