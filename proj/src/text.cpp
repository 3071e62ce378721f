#include "dialscore/text.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "dialscore/errors.hpp"
#include "dialscore/utf8.hpp"

namespace dialscore {

std::string normalize_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool in_ws = true;  // leading whitespace is dropped
  for (char c : s) {
    bool ws = c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
    if (ws) {
      if (!in_ws) out.push_back(' ');
      in_ws = true;
    } else {
      out.push_back(c);
      in_ws = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

bool is_cjk_lang(std::string_view lang) { return lang == "zh" || lang == "ja"; }

bool is_punct_codepoint(char32_t cp) {
  // ASCII
  if ((cp >= 0x21 && cp <= 0x2f) || (cp >= 0x3a && cp <= 0x40) ||
      (cp >= 0x5b && cp <= 0x60) || (cp >= 0x7b && cp <= 0x7e))
    return true;
  // Latin-1 supplement: ¡ § « ¶ · » ¿ etc.
  if (cp == 0xa1 || cp == 0xa7 || cp == 0xab || cp == 0xb6 || cp == 0xb7 ||
      cp == 0xbb || cp == 0xbf)
    return true;
  // General punctuation block (dashes, quotes, ellipsis, primes).
  if (cp >= 0x2010 && cp <= 0x2027) return true;
  if (cp >= 0x2030 && cp <= 0x205e) return true;
  // CJK symbols and punctuation: 、 。 〈 〉 《 》 「 」 『 』 【 】 etc.
  if (cp >= 0x3001 && cp <= 0x3011) return true;
  if (cp >= 0x3014 && cp <= 0x301f) return true;
  if (cp == 0x3030 || cp == 0x303d) return true;
  // Fullwidth ASCII punctuation: ！ ＂ ... ， ． ／ ： ； ？ ＠
  if (cp >= 0xff01 && cp <= 0xff0f) return true;
  if (cp >= 0xff1a && cp <= 0xff20) return true;
  if (cp >= 0xff3b && cp <= 0xff40) return true;
  if (cp >= 0xff5b && cp <= 0xff65) return true;
  return false;
}

bool is_punct_token(std::string_view token) {
  auto cps = utf8::decode_all(token);
  if (!cps || cps->empty()) return false;
  return std::all_of(cps->begin(), cps->end(), is_punct_codepoint);
}

namespace {

bool is_latin_or_digit(char32_t cp) {
  if ((cp >= '0' && cp <= '9') || (cp >= 'A' && cp <= 'Z') || (cp >= 'a' && cp <= 'z'))
    return true;
  // Latin-1 and Latin Extended letters, excluding × and ÷.
  if (cp >= 0xc0 && cp <= 0x24f && cp != 0xd7 && cp != 0xf7) return true;
  return false;
}

bool is_space_cp(char32_t cp) {
  return cp == ' ' || cp == '\t' || cp == '\r' || cp == '\n' || cp == 0x3000;
}

}  // namespace

std::string TokenizedSentence::join() const {
  const char* sep = is_cjk_lang(lang) ? "" : " ";
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += sep;
    out += tokens[i];
  }
  return out;
}

TokenizedSentence tokenize(std::string_view sentence, std::string_view lang) {
  std::string norm = normalize_whitespace(sentence);
  if (norm.empty()) throw InputError("tokenize: empty sentence");

  TokenizedSentence out;
  out.lang = std::string(lang);

  if (!is_cjk_lang(lang)) {
    if (!utf8::valid(norm)) throw InputError("tokenize: invalid UTF-8");
    std::size_t i = 0;
    while (i < norm.size()) {
      std::size_t j = norm.find(' ', i);
      if (j == std::string::npos) j = norm.size();
      out.tokens.emplace_back(norm.substr(i, j - i));
      i = j + 1;
    }
    return out;
  }

  auto cps = utf8::decode_all(norm);
  if (!cps) throw InputError("tokenize: invalid UTF-8");
  std::string run;
  auto flush_run = [&] {
    if (!run.empty()) {
      out.tokens.push_back(run);
      run.clear();
    }
  };
  for (char32_t cp : *cps) {
    if (is_space_cp(cp)) {
      flush_run();
    } else if (is_latin_or_digit(cp)) {
      utf8::append(run, cp);
    } else {
      flush_run();
      std::string one;
      utf8::append(one, cp);
      out.tokens.push_back(one);
    }
  }
  flush_run();
  if (out.tokens.empty()) throw InputError("tokenize: empty sentence");
  return out;
}

std::string fold_case(std::string_view token) {
  auto cps = utf8::decode_all(token);
  if (!cps) return std::string(token);
  std::string out;
  for (char32_t cp : *cps) {
    if (cp >= 'A' && cp <= 'Z') {
      cp += 0x20;
    } else if (cp >= 0xc0 && cp <= 0xde && cp != 0xd7) {
      cp += 0x20;  // Latin-1 uppercase letters
    }
    utf8::append(out, cp);
  }
  return out;
}

StopwordTable StopwordTable::from_directory(const std::string& dir) {
  StopwordTable t;
  t.override_dir_ = dir;
  return t;
}

const std::unordered_set<std::string>* StopwordTable::lang_set(std::string_view lang) const {
  for (const auto& [code, set] : cache_) {
    if (code == lang) return &set;
  }
  std::unordered_set<std::string> set;
  std::string content;
  bool have = false;
  if (!override_dir_.empty()) {
    std::filesystem::path p = std::filesystem::path(override_dir_) / (std::string(lang) + ".txt");
    std::ifstream in(p);
    if (in) {
      std::ostringstream ss;
      ss << in.rdbuf();
      content = ss.str();
      have = true;
    }
  }
  if (!have) {
    if (const char* builtin = detail::builtin_stopwords(lang)) {
      content = builtin;
      have = true;
    }
  }
  if (have) {
    std::istringstream lines(content);
    std::string word;
    while (std::getline(lines, word)) {
      word = normalize_whitespace(word);
      if (!word.empty()) set.insert(fold_case(word));
    }
  }
  cache_.emplace_back(std::string(lang), std::move(set));
  return &cache_.back().second;
}

bool StopwordTable::contains(std::string_view token, std::string_view lang) const {
  const auto* set = lang_set(lang);
  return set->count(fold_case(token)) > 0;
}

std::vector<std::string> content_tokens(const std::vector<std::string>& tokens,
                                        std::string_view lang,
                                        const StopwordTable& stopwords) {
  std::vector<std::string> out;
  for (const auto& t : tokens) {
    if (is_punct_token(t)) continue;
    if (stopwords.contains(t, lang)) continue;
    out.push_back(t);
  }
  return out;
}

}  // namespace dialscore
