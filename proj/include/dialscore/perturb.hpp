#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dialscore/rng.hpp"
#include "dialscore/text.hpp"

namespace dialscore {

enum class PositiveRule { None, PunctRemoval, StopwordRemoval };
enum class NegativeRule { Reorder, Drop, Repeat };

const char* to_string(PositiveRule r);
const char* to_string(NegativeRule r);

struct PerturbParams {
  double p_drop = 0.25;
  double p_repeat = 0.25;
  StopwordTable stopwords;
};

struct PositiveResult {
  TokenizedSentence sentence;
  PositiveRule rule = PositiveRule::None;  // the rule actually applied
};

struct NegativeResult {
  TokenizedSentence sentence;
  NegativeRule rule = NegativeRule::Reorder;
};

// One of {no perturbation, punctuation removal, stop-word removal}, chosen
// uniformly. A rule that would empty the sentence falls back to no
// perturbation; the recorded rule is the one actually applied.
PositiveResult positive_perturb(const TokenizedSentence& s, Rng& rng,
                                const PerturbParams& params);

// One of {word reorder, word drop, word repeat}, chosen uniformly among the
// applicable rules. Reorder needs two distinct tokens, drop needs two tokens,
// repeat needs one. Throws InputError when the sentence is empty.
NegativeResult negative_perturb(const TokenizedSentence& s, Rng& rng,
                                const PerturbParams& params);

struct LabeledSample {
  std::string sample_id;
  std::string task;  // "VSP" or "NSP"
  std::string lang;
  std::string text;
  double label = 0.0;  // VSP labels are exactly 0.0 or 1.0
  std::string origin;  // "positive" | "negative"
  std::string rule_applied;
  std::string source_pair_id;
  std::uint64_t seed_trace = 0;  // per-sample derived seed
};

std::string sample_to_jsonl(const LabeledSample& s);
LabeledSample sample_from_jsonl(const std::string& line);

struct VspSentence {
  std::string source_id;  // typically the pair_id the response came from
  std::string text;
  std::string lang;
};

// Every sentence yields one positive; floor(neg_ratio * N) sentences, drawn
// without replacement per cycle, yield negatives. Fully deterministic for a
// fixed seed: per-sample streams are derived from sample ids.
std::vector<LabeledSample> synthesize_vsp(const std::vector<VspSentence>& sentences,
                                          std::uint64_t seed, double neg_ratio,
                                          const PerturbParams& params);

}  // namespace dialscore
