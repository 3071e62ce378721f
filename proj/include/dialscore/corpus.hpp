#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dialscore {

struct Turn {
  int speaker = 0;  // 0/1, alternating
  std::string text;

  bool operator==(const Turn&) const = default;
};

struct Dialogue {
  std::string id;    // "<lang>-<line_number>", unique within a corpus file
  std::string lang;  // BCP-47-style code: en, pt, de, fr, zh, es, ja, ...
  std::vector<Turn> turns;

  bool operator==(const Dialogue&) const = default;
};

// (c, r): truncated history plus the response it precedes.
struct ContextResponsePair {
  std::string pair_id;  // "<dialogue_id>:<turn_index>"
  std::string lang;
  std::vector<Turn> context;  // most recent turn last, length in [1, H]
  Turn response;
  std::string dialogue_id;
  int turn_index = 1;  // index of the response within the source dialogue

  bool operator==(const ContextResponsePair&) const = default;
};

struct AnnotationRecord {
  std::string pair_id;
  std::string lang;
  std::vector<Turn> context;
  Turn response;
  double understandability = 0.0;  // normalized to [0, 1]
  double sensibleness = 0.0;       // normalized to [0, 1]
  std::string system_tag;
};

struct CorpusFormat {
  std::string delimiter = "__eou__";
  std::string lang = "en";
};

struct ParseReport {
  std::size_t lines = 0;
  std::size_t parsed = 0;
  std::size_t skipped = 0;  // lines with fewer than 2 non-empty turns
};

// One dialogue per line, delimiter-separated turns. Turns are trimmed, empty
// segments dropped, speakers assigned 0,1,0,1. Lines with fewer than two
// turns are skipped and counted; invalid UTF-8 is a hard error naming the line.
std::vector<Dialogue> parse_dialogues(std::istream& in, const CorpusFormat& format,
                                      ParseReport* report = nullptr);

// One pair per turn index >= 1 with up to history_len turns of context.
std::vector<ContextResponsePair> extract_pairs(const std::vector<Dialogue>& dialogues,
                                               int history_len = 3);

struct AnnotationScale {
  double min = 0.0;
  double max = 1.0;
};

// JSONL with a {scale_min, scale_max} header line; raw scores are mapped
// linearly onto [0, 1]. Out-of-scale scores and duplicate (pair_id, lang)
// entries are hard errors, as are score mismatches for the same pair_id
// across languages (annotations are carried over between languages).
std::vector<AnnotationRecord> load_annotations(std::istream& in);
std::vector<AnnotationRecord> load_annotations_file(const std::string& path);

// Canonical JSONL forms. Serialization is byte-stable: serialize(parse(x))
// round-trips exactly.
std::string dialogue_to_jsonl(const Dialogue& d);
Dialogue dialogue_from_jsonl(const std::string& line);
std::string pair_to_jsonl(const ContextResponsePair& p);
ContextResponsePair pair_from_jsonl(const std::string& line);

std::vector<Dialogue> load_corpus_file(const std::string& path, const CorpusFormat& format,
                                       ParseReport* report = nullptr);

}  // namespace dialscore
