#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace dialscore {

namespace detail {
// Compiled-in copies of data/stopwords/*.txt; nullptr for unknown languages.
const char* builtin_stopwords(std::string_view lang);
}  // namespace detail

struct TokenizedSentence {
  std::vector<std::string> tokens;
  std::string lang;

  std::string join() const;  // language joiner: "" for zh/ja, " " otherwise
};

// Collapse whitespace runs to single spaces and trim the ends. No case folding.
std::string normalize_whitespace(std::string_view s);

bool is_cjk_lang(std::string_view lang);

// Punctuation classification over the common Unicode punctuation blocks
// (ASCII, Latin-1, general punctuation, CJK symbols, fullwidth forms).
bool is_punct_codepoint(char32_t cp);
// True when every code point of the token is punctuation.
bool is_punct_token(std::string_view token);

// Whitespace split for space-delimited languages (punctuation stays glued as
// in the source); per-character split for zh/ja with consecutive Latin/digit
// runs kept as single tokens. Throws InputError on empty-after-trim input or
// invalid UTF-8.
TokenizedSentence tokenize(std::string_view sentence, std::string_view lang);

// Per-language stop-word lists. Defaults are compiled in; a directory of
// <lang>.txt files overrides them. Unknown languages get an empty list.
class StopwordTable {
 public:
  StopwordTable() = default;

  // Load overrides from a directory containing <lang>.txt files.
  static StopwordTable from_directory(const std::string& dir);

  bool contains(std::string_view token, std::string_view lang) const;

 private:
  const std::unordered_set<std::string>* lang_set(std::string_view lang) const;

  mutable std::vector<std::pair<std::string, std::unordered_set<std::string>>> cache_;
  std::string override_dir_;
};

// Lowercase ASCII and Latin-1 letters; other code points pass through.
// Enough for stop-word matching in the supported languages.
std::string fold_case(std::string_view token);

// Tokens that are neither punctuation nor stop words.
std::vector<std::string> content_tokens(const std::vector<std::string>& tokens,
                                        std::string_view lang,
                                        const StopwordTable& stopwords);

}  // namespace dialscore
