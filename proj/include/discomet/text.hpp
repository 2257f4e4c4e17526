// Copyright 2026 The discomet Authors.
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

// Small UTF-8 and string helpers shared by the corpus model, the filters and
// the lexicon annotator. Character offsets throughout the toolkit count
// Unicode code points, which is what annotators written in Python emit.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace discomet::text {

// Byte offset of every code point start, plus a final entry for text.size().
// Invalid UTF-8 lead bytes are treated as single-byte code points.
inline std::vector<size_t> CodePointOffsets(std::string_view text) {
  std::vector<size_t> offsets;
  offsets.reserve(text.size() + 1);
  size_t i = 0;
  while (i < text.size()) {
    offsets.push_back(i);
    auto c = static_cast<unsigned char>(text[i]);
    size_t len = 1;
    if (c >= 0xF0) {
      len = 4;
    } else if (c >= 0xE0) {
      len = 3;
    } else if (c >= 0xC0) {
      len = 2;
    }
    i += len;
    if (i > text.size()) i = text.size();
  }
  offsets.push_back(text.size());
  return offsets;
}

inline size_t CodePointLength(std::string_view text) {
  return CodePointOffsets(text).size() - 1;
}

// Slice [start, end) in code points. Caller guarantees the range is valid.
inline std::string_view Slice(std::string_view text,
                              const std::vector<size_t> &offsets, size_t start,
                              size_t end) {
  return text.substr(offsets[start], offsets[end] - offsets[start]);
}

// ASCII case folding. Non-ASCII bytes pass through unchanged.
inline char FoldAscii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline std::string Lower(std::string_view s) {
  std::string out(s);
  for (char &c : out) c = FoldAscii(c);
  return out;
}

inline bool ContainsIgnoreCase(std::string_view haystack,
                               std::string_view needle) {
  if (needle.empty()) return true;
  return Lower(haystack).find(Lower(needle)) != std::string::npos;
}

// Word characters for boundary checks and tokenization: ASCII alphanumerics
// and every non-ASCII byte (so accented letters stay inside tokens).
inline bool IsWordByte(char c) {
  auto u = static_cast<unsigned char>(c);
  if (u >= 0x80) return true;
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_';
}

// Case-insensitive match of `needle` with a non-word byte (or text edge)
// on both sides.
inline bool ContainsWordIgnoreCase(std::string_view haystack,
                                   std::string_view needle) {
  if (needle.empty()) return true;
  std::string h = Lower(haystack);
  std::string n = Lower(needle);
  for (size_t pos = h.find(n); pos != std::string::npos;
       pos = h.find(n, pos + 1)) {
    bool left = pos == 0 || !IsWordByte(h[pos - 1]);
    size_t after = pos + n.size();
    bool right = after == h.size() || !IsWordByte(h[after]);
    if (left && right) return true;
  }
  return false;
}

inline std::string_view Trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n'))
    ++b;
  while (e > b &&
         (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' ||
          s[e - 1] == '\n'))
    --e;
  return s.substr(b, e - b);
}

// Splits on `sep`, trimming each piece and dropping empty pieces.
inline std::vector<std::string> SplitList(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t end = s.find(sep, start);
    if (end == std::string_view::npos) end = s.size();
    std::string_view piece = Trim(s.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end + 1;
  }
  return out;
}

// A token located in code-point coordinates.
struct Token {
  size_t start = 0;
  size_t end = 0;
  std::string surface;
};

// Whitespace/punctuation-delimited tokens over the code-point range
// [begin, end) of `text`.
inline std::vector<Token> Tokenize(std::string_view text,
                                   const std::vector<size_t> &offsets,
                                   size_t begin, size_t end) {
  std::vector<Token> tokens;
  size_t i = begin;
  while (i < end) {
    while (i < end && !IsWordByte(text[offsets[i]])) ++i;
    if (i >= end) break;
    size_t j = i;
    while (j < end && IsWordByte(text[offsets[j]])) ++j;
    tokens.push_back({i, j, std::string(Slice(text, offsets, i, j))});
    i = j;
  }
  return tokens;
}

}  // namespace discomet::text
