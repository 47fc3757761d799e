// Copyright 2026 The allokit Authors
// SPDX-License-Identifier: Apache-2.0

// IPA normalization, segmentation and X-SAMPA transliteration.
//
// A segment is one phone or phoneme symbol: an optional prenasal modifier,
// exactly one base letter, then any number of combining diacritics and
// modifier letters. A tie bar (U+0361 or U+035C) fuses the base that
// precedes it with the base that follows, so "t͡ʃ" is a single segment.
// Modifier letters always attach to the preceding base; only the prenasal
// letters (ⁿ ᵐ ᵑ ᶬ ᶮ ᶯ ᶰ) may open a segment, and only when no base
// precedes them.

#ifndef ALLOKIT_IPA_HPP
#define ALLOKIT_IPA_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "allokit/error.hpp"
#include "allokit/ipa_tables.hpp"

namespace allokit {

namespace detail {

inline std::u32string to_u32(std::string_view utf8) {
  icu::UnicodeString us = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  std::u32string out;
  out.reserve(static_cast<std::size_t>(us.length()));
  for (int32_t i = 0; i < us.length();) {
    UChar32 c = us.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

inline std::string to_utf8(std::u32string_view cps) {
  icu::UnicodeString us = icu::UnicodeString::fromUTF32(
      reinterpret_cast<const UChar32*>(cps.data()),
      static_cast<int32_t>(cps.size()));
  std::string out;
  us.toUTF8String(out);
  return out;
}

inline std::string to_utf8(char32_t cp) {
  return to_utf8(std::u32string_view(&cp, 1));
}

inline std::u32string icu_normalize(std::u32string_view cps, bool compose) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = compose
                                     ? icu::Normalizer2::getNFCInstance(status)
                                     : icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status)) {
    throw Error(Errc::IoError, "ICU normalizer data unavailable");
  }
  icu::UnicodeString src = icu::UnicodeString::fromUTF32(
      reinterpret_cast<const UChar32*>(cps.data()),
      static_cast<int32_t>(cps.size()));
  icu::UnicodeString dst = norm->normalize(src, status);
  if (U_FAILURE(status)) {
    throw Error(Errc::InvalidIPA, "normalization failed");
  }
  std::string utf8;
  dst.toUTF8String(utf8);
  return to_u32(utf8);
}

inline std::string nfc(std::string_view utf8) {
  return to_utf8(icu_normalize(to_u32(utf8), true));
}

/// Splits a tab-separated two-column table. Blank lines and lines starting
/// with '#' are skipped.
inline std::vector<std::pair<std::string, std::string>> parse_tsv_table(
    std::string_view text) {
  std::vector<std::pair<std::string, std::string>> rows;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0 || tab + 1 >= line.size()) {
      throw Error(Errc::ParseError,
                  "table line " + std::to_string(line_no) +
                      ": expected source<TAB>target");
    }
    rows.emplace_back(std::string(line.substr(0, tab)),
                      std::string(line.substr(tab + 1)));
  }
  return rows;
}

inline const std::map<char32_t, std::u32string>& lookalike_map() {
  static const auto table = [] {
    std::map<char32_t, std::u32string> m;
    for (const auto& [src, dst] : parse_tsv_table(tables::kLookalikes)) {
      std::u32string s = to_u32(src);
      if (s.size() != 1) {
        throw Error(Errc::ParseError,
                    "lookalike source must be one codepoint: " + src);
      }
      m[s.front()] = icu_normalize(to_u32(dst), false);
    }
    return m;
  }();
  return table;
}

inline bool in_range(char32_t c, char32_t lo, char32_t hi) {
  return c >= lo && c <= hi;
}

inline bool is_tie(char32_t c) { return c == 0x0361 || c == 0x035C; }

inline bool is_base_letter(char32_t c) {
  if (in_range(c, U'a', U'z')) return true;
  if (in_range(c, 0x0250, 0x02AF)) return true;  // IPA Extensions
  switch (c) {
    case 0x00E6:  // æ
    case 0x00F0:  // ð
    case 0x00F8:  // ø
    case 0x0127:  // ħ
    case 0x014B:  // ŋ
    case 0x0153:  // œ
    case 0x01C0:  // ǀ
    case 0x01C1:  // ǁ
    case 0x01C2:  // ǂ
    case 0x01C3:  // ǃ
    case 0x03B2:  // β
    case 0x03B8:  // θ
    case 0x03C7:  // χ
    case 0x1D7B:  // ᵻ
    case 0x1D7F:  // ᵿ
    case 0x1D91:  // ᶑ
    case 0x2C71:  // ⱱ
    case 0xA78E:  // ꞎ
      return true;
    default:
      return false;
  }
}

inline bool is_prenasal(char32_t c) {
  switch (c) {
    case 0x207F:  // ⁿ
    case 0x1D50:  // ᵐ
    case 0x1D51:  // ᵑ
    case 0x1DAC:  // ᶬ
    case 0x1DAE:  // ᶮ
    case 0x1DAF:  // ᶯ
    case 0x1DB0:  // ᶰ
      return true;
    default:
      return false;
  }
}

// Stress and tone are suprasegmental and rejected outright.
inline bool is_suprasegmental(char32_t c) {
  return c == 0x02C8 || c == 0x02CC || in_range(c, 0x02E5, 0x02E9) ||
         in_range(c, 0xA700, 0xA71F);
}

inline bool is_modifier_letter(char32_t c) {
  if (is_suprasegmental(c)) return false;
  if (c == 0x02DE) return true;  // ˞ rhotic hook
  if (u_charType(static_cast<UChar32>(c)) != U_MODIFIER_LETTER) return false;
  return in_range(c, 0x02B0, 0x02FF) || in_range(c, 0x1D2C, 0x1DBF) ||
         in_range(c, 0x2070, 0x209F);
}

inline bool is_combining_mark(char32_t c) {
  if (u_charType(static_cast<UChar32>(c)) != U_NON_SPACING_MARK) return false;
  return in_range(c, 0x0300, 0x036F) || in_range(c, 0x1AB0, 0x1AFF) ||
         in_range(c, 0x1DC0, 0x1DFF) || in_range(c, 0x20D0, 0x20FF) ||
         in_range(c, 0xFE20, 0xFE2F);
}

// Diacritics from the IPA chart; anything else combining is accepted with
// a warning.
inline bool is_known_diacritic(char32_t c) {
  switch (c) {
    case 0x0303: case 0x0306: case 0x0308: case 0x030A: case 0x030D:
    case 0x0311: case 0x0318: case 0x0319: case 0x031A: case 0x031C:
    case 0x031D: case 0x031E: case 0x031F: case 0x0320: case 0x0324:
    case 0x0325: case 0x0327: case 0x0329: case 0x032A: case 0x032C:
    case 0x032F: case 0x0330: case 0x0334: case 0x0339: case 0x033A:
    case 0x033B: case 0x033C: case 0x033D: case 0x0361: case 0x035C:
      return true;
    default:
      return false;
  }
}

inline std::string hex_cp(char32_t c) {
  static constexpr char kDigits[] = "0123456789ABCDEF";
  std::string out = "U+";
  bool started = false;
  for (int shift = 20; shift >= 0; shift -= 4) {
    unsigned nib = (static_cast<unsigned>(c) >> shift) & 0xFu;
    if (nib != 0 || started || shift < 16) {
      out.push_back(kDigits[nib]);
      started = true;
    }
  }
  return out;
}

}  // namespace detail

/// Canonical form of an IPA string: canonical decomposition, lookalike
/// substitution from data/lookalikes.tsv, then canonical composition.
inline std::string normalize(std::string_view raw) {
  if (raw.empty()) return {};
  const auto& subs = detail::lookalike_map();
  std::u32string decomposed = detail::icu_normalize(detail::to_u32(raw), false);
  std::u32string replaced;
  replaced.reserve(decomposed.size());
  for (char32_t c : decomposed) {
    auto it = subs.find(c);
    if (it == subs.end()) {
      replaced.push_back(c);
    } else {
      replaced += it->second;
    }
  }
  return detail::to_utf8(detail::icu_normalize(replaced, true));
}

class Segment;
using SegmentString = std::vector<Segment>;

/// Warnings raised while segmenting (currently: unrecognized diacritics).
struct TokenizeDiagnostics {
  std::vector<std::string> warnings;
};

SegmentString tokenize(std::string_view s, TokenizeDiagnostics* diag = nullptr);

/// One normalized IPA segment. Only constructible through tokenize() or
/// Segment::parse(), so every instance satisfies the segment grammar.
class Segment {
 public:
  /// Parses text that must form exactly one segment.
  static Segment parse(std::string_view text) {
    SegmentString segs = tokenize(text);
    if (segs.size() != 1) {
      throw Error(Errc::InvalidIPA, "'" + std::string(text) + "' is " +
                                        std::to_string(segs.size()) +
                                        " segments, expected 1");
    }
    return std::move(segs.front());
  }

  const std::string& text() const noexcept { return text_; }

  friend bool operator==(const Segment&, const Segment&) = default;
  friend auto operator<=>(const Segment&, const Segment&) = default;

  friend std::ostream& operator<<(std::ostream& os, const Segment& s) {
    return os << s.text_;
  }

 private:
  explicit Segment(std::string text) : text_(std::move(text)) {}
  friend SegmentString tokenize(std::string_view, TokenizeDiagnostics*);

  std::string text_;
};

inline SegmentString tokenize(std::string_view s, TokenizeDiagnostics* diag) {
  using namespace detail;
  SegmentString out;
  if (s.empty()) return out;

  std::u32string cps = icu_normalize(to_u32(normalize(s)), false);
  std::u32string current;
  std::u32string pending_prefix;
  bool has_base = false;
  bool expect_base = false;

  auto fail = [&](std::size_t i, const std::string& why) {
    throw Error(Errc::InvalidIPA, "'" + std::string(s) + "' at codepoint " +
                                      std::to_string(i) + " (" +
                                      hex_cp(cps[i]) + "): " + why);
  };
  auto flush = [&] {
    if (has_base) {
      out.push_back(Segment(to_utf8(icu_normalize(current, true))));
    }
    current.clear();
    has_base = false;
  };

  for (std::size_t i = 0; i < cps.size(); ++i) {
    const char32_t c = cps[i];
    if (is_base_letter(c)) {
      if (expect_base) {
        current.push_back(c);
        expect_base = false;
        continue;
      }
      flush();
      current = pending_prefix;
      pending_prefix.clear();
      current.push_back(c);
      has_base = true;
    } else if (is_tie(c)) {
      if (!has_base || expect_base) fail(i, "tie bar without a preceding base");
      current.push_back(c);
      expect_base = true;
    } else if (is_combining_mark(c)) {
      if (!has_base || expect_base) fail(i, "diacritic without a base");
      if (!is_known_diacritic(c) && diag != nullptr) {
        diag->warnings.push_back("unknown diacritic " + hex_cp(c) + " in '" +
                                 std::string(s) + "'");
      }
      current.push_back(c);
    } else if (is_modifier_letter(c)) {
      if (has_base && !expect_base) {
        current.push_back(c);
      } else if (!has_base && is_prenasal(c)) {
        pending_prefix.push_back(c);
      } else {
        fail(i, "modifier letter without a base");
      }
    } else {
      fail(i, "not in the supported IPA repertoire");
    }
  }
  if (expect_base) fail(cps.size() - 1, "tie bar not followed by a base");
  if (!pending_prefix.empty()) {
    fail(cps.size() - 1, "prenasal modifier without a base");
  }
  flush();
  return out;
}

/// Concatenation of segment texts.
inline std::string join(const SegmentString& segs, std::string_view sep = "") {
  std::string out;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (i > 0) out += sep;
    out += segs[i].text();
  }
  return out;
}

/// Parses whitespace-separated tokens, tokenizing each one. "p i k" and
/// "pik" both give [p, i, k]; a token like "ʰ" that cannot stand alone is
/// rejected rather than glued to its neighbour.
inline SegmentString parse_segments(std::string_view line,
                                    TokenizeDiagnostics* diag = nullptr) {
  SegmentString out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' ||
                                 line[pos] == '\r' || line[pos] == '\n')) {
      ++pos;
    }
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' &&
           line[end] != '\r' && line[end] != '\n') {
      ++end;
    }
    if (end > pos) {
      SegmentString part = tokenize(line.substr(pos, end - pos), diag);
      out.insert(out.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
    }
    pos = end;
  }
  return out;
}

/// Raised by xsampa_to_ipa; carries the byte offset of the first symbol
/// that has no table entry.
class XSampaError : public Error {
 public:
  XSampaError(std::size_t offset, const std::string& message)
      : Error(Errc::UnknownXSampa, message), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

namespace detail {

struct XSampaTable {
  std::map<std::string, std::string, std::less<>> entries;
  std::size_t longest = 0;
};

inline const XSampaTable& xsampa_table() {
  static const XSampaTable table = [] {
    XSampaTable t;
    for (auto& [src, dst] : parse_tsv_table(tables::kXSampa)) {
      t.longest = std::max(t.longest, src.size());
      t.entries.emplace(std::move(src), std::move(dst));
    }
    return t;
  }();
  return table;
}

}  // namespace detail

/// Longest-match X-SAMPA to IPA transliteration over the table in
/// data/xsampa.tsv. The result is normalized.
inline std::string xsampa_to_ipa(std::string_view s) {
  const auto& table = detail::xsampa_table();
  std::string out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t len = std::min(table.longest, s.size() - pos);
    bool matched = false;
    for (; len > 0; --len) {
      auto it = table.entries.find(s.substr(pos, len));
      if (it != table.entries.end()) {
        out += it->second;
        pos += len;
        matched = true;
        break;
      }
    }
    if (!matched) {
      throw XSampaError(pos, "symbol '" + std::string(1, s[pos]) +
                                 "' at byte offset " + std::to_string(pos));
    }
  }
  return normalize(out);
}

}  // namespace allokit

#endif  // ALLOKIT_IPA_HPP
