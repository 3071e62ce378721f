#include "dialscore/corpus.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dialscore/errors.hpp"
#include "dialscore/text.hpp"
#include "dialscore/utf8.hpp"

using json = nlohmann::json;

namespace dialscore {

namespace {

std::vector<std::string> split_on_delimiter(const std::string& line,
                                            const std::string& delimiter) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t next = line.find(delimiter, pos);
    if (next == std::string::npos) {
      parts.push_back(line.substr(pos));
      break;
    }
    parts.push_back(line.substr(pos, next - pos));
    pos = next + delimiter.size();
  }
  return parts;
}

json turns_to_json(const std::vector<Turn>& turns) {
  json arr = json::array();
  for (const auto& t : turns) arr.push_back({{"speaker", t.speaker}, {"text", t.text}});
  return arr;
}

std::vector<Turn> turns_from_json(const json& arr) {
  std::vector<Turn> turns;
  for (const auto& j : arr) {
    turns.push_back(Turn{j.at("speaker").get<int>(), j.at("text").get<std::string>()});
  }
  return turns;
}

}  // namespace

std::vector<Dialogue> parse_dialogues(std::istream& in, const CorpusFormat& format,
                                      ParseReport* report) {
  if (format.delimiter.empty()) throw InputError("parse_dialogues: empty delimiter");
  std::vector<Dialogue> out;
  ParseReport local;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    ++local.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!utf8::valid(line)) {
      throw InputError("parse_dialogues: invalid UTF-8 on line " + std::to_string(line_no));
    }
    std::vector<Turn> turns;
    int speaker = 0;
    for (const auto& raw : split_on_delimiter(line, format.delimiter)) {
      std::string text = normalize_whitespace(raw);
      if (text.empty()) continue;
      turns.push_back(Turn{speaker, std::move(text)});
      speaker = 1 - speaker;
    }
    if (turns.size() < 2) {
      ++local.skipped;
      continue;
    }
    Dialogue d;
    d.id = format.lang + "-" + std::to_string(line_no);
    d.lang = format.lang;
    d.turns = std::move(turns);
    out.push_back(std::move(d));
    ++local.parsed;
  }
  if (report) *report = local;
  return out;
}

std::vector<ContextResponsePair> extract_pairs(const std::vector<Dialogue>& dialogues,
                                               int history_len) {
  if (history_len < 1) throw InputError("extract_pairs: history_len must be >= 1");
  std::vector<ContextResponsePair> pairs;
  for (const auto& d : dialogues) {
    for (std::size_t t = 1; t < d.turns.size(); ++t) {
      ContextResponsePair p;
      p.dialogue_id = d.id;
      p.lang = d.lang;
      p.turn_index = static_cast<int>(t);
      p.pair_id = d.id + ":" + std::to_string(t);
      std::size_t begin = t > static_cast<std::size_t>(history_len)
                              ? t - static_cast<std::size_t>(history_len)
                              : 0;
      p.context.assign(d.turns.begin() + begin, d.turns.begin() + t);
      p.response = d.turns[t];
      pairs.push_back(std::move(p));
    }
  }
  return pairs;
}

std::vector<AnnotationRecord> load_annotations(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("load_annotations: empty stream");
  AnnotationScale scale;
  try {
    json header = json::parse(line);
    scale.min = header.at("scale_min").get<double>();
    scale.max = header.at("scale_max").get<double>();
  } catch (const json::exception& e) {
    throw InputError(std::string("load_annotations: bad header line: ") + e.what());
  }
  if (!(scale.max > scale.min)) {
    throw InputError("load_annotations: scale_max must exceed scale_min");
  }

  auto normalize = [&](double x, const std::string& pair_id) {
    if (x < scale.min || x > scale.max) {
      throw InputError("load_annotations: score out of declared scale for pair " + pair_id);
    }
    return (x - scale.min) / (scale.max - scale.min);
  };

  std::vector<AnnotationRecord> out;
  std::set<std::pair<std::string, std::string>> seen;              // (pair_id, lang)
  std::map<std::string, std::pair<double, double>> scores_by_pair;  // carried-over check
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (normalize_whitespace(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw InputError("load_annotations: bad JSON on line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    AnnotationRecord rec;
    rec.pair_id = j.at("pair_id").get<std::string>();
    rec.lang = j.at("lang").get<std::string>();
    rec.system_tag = j.value("system_tag", "");
    rec.context = turns_from_json(j.at("context"));
    rec.response = Turn{j.at("response").at("speaker").get<int>(),
                        j.at("response").at("text").get<std::string>()};
    rec.understandability = normalize(j.at("understandability").get<double>(), rec.pair_id);
    rec.sensibleness = normalize(j.at("sensibleness").get<double>(), rec.pair_id);

    if (!seen.insert({rec.pair_id, rec.lang}).second) {
      throw InputError("load_annotations: duplicate pair_id " + rec.pair_id + " for lang " +
                       rec.lang);
    }
    auto [it, inserted] =
        scores_by_pair.try_emplace(rec.pair_id, rec.understandability, rec.sensibleness);
    if (!inserted && (it->second.first != rec.understandability ||
                      it->second.second != rec.sensibleness)) {
      throw InputError("load_annotations: pair " + rec.pair_id +
                       " carries different scores across languages");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

std::vector<AnnotationRecord> load_annotations_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("load_annotations: cannot open " + path);
  return load_annotations(in);
}

std::string dialogue_to_jsonl(const Dialogue& d) {
  json j{{"id", d.id}, {"lang", d.lang}, {"turns", turns_to_json(d.turns)}};
  return j.dump();
}

Dialogue dialogue_from_jsonl(const std::string& line) {
  json j = json::parse(line);
  Dialogue d;
  d.id = j.at("id").get<std::string>();
  d.lang = j.at("lang").get<std::string>();
  d.turns = turns_from_json(j.at("turns"));
  return d;
}

std::string pair_to_jsonl(const ContextResponsePair& p) {
  json j{{"pair_id", p.pair_id},
         {"lang", p.lang},
         {"dialogue_id", p.dialogue_id},
         {"turn_index", p.turn_index},
         {"context", turns_to_json(p.context)},
         {"response", {{"speaker", p.response.speaker}, {"text", p.response.text}}}};
  return j.dump();
}

ContextResponsePair pair_from_jsonl(const std::string& line) {
  json j = json::parse(line);
  ContextResponsePair p;
  p.pair_id = j.at("pair_id").get<std::string>();
  p.lang = j.at("lang").get<std::string>();
  p.dialogue_id = j.at("dialogue_id").get<std::string>();
  p.turn_index = j.at("turn_index").get<int>();
  p.context = turns_from_json(j.at("context"));
  p.response = Turn{j.at("response").at("speaker").get<int>(),
                    j.at("response").at("text").get<std::string>()};
  return p;
}

std::vector<Dialogue> load_corpus_file(const std::string& path, const CorpusFormat& format,
                                       ParseReport* report) {
  std::ifstream in(path);
  if (!in) throw InputError("load_corpus_file: cannot open " + path);
  return parse_dialogues(in, format, report);
}

}  // namespace dialscore
