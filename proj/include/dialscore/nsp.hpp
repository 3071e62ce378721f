#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dialscore/corpus.hpp"
#include "dialscore/perturb.hpp"
#include "dialscore/rng.hpp"

namespace dialscore {

struct NspSample {
  std::string sample_id;
  std::string lang;
  std::vector<Turn> context;
  std::string response_text;
  double label = 0.0;  // 1.0 = true next turn, 0.0 = sampled negative
  std::optional<std::string> negative_source_pair_id;  // null for positives
  std::optional<double> coverage_at_accept;            // null for positives
  bool fallback = false;  // min-coverage fallback fired after max_tries
  std::uint64_t seed_trace = 0;
};

std::string nsp_sample_to_jsonl(const NspSample& s);
NspSample nsp_sample_from_jsonl(const std::string& line);

// Fraction of the candidate's content tokens (stop words and punctuation
// removed) present in the reference; falls back to all tokens when the
// candidate has no content tokens.
double token_coverage(const TokenizedSentence& candidate, const TokenizedSentence& reference,
                      const StopwordTable& stopwords);

struct PoolEntry {
  std::string pair_id;
  std::string text;
};

struct NegativeDraw {
  std::string text;        // emitted text (after positive-sample processing)
  std::string source_pair_id;
  double coverage = 0.0;   // coverage of the emitted text against the true response
  bool fallback = false;
};

struct NspParams {
  double coverage_threshold = 0.5;
  int max_tries = 20;
  PerturbParams perturb;
};

// Uniform draws from the pool, rejected while coverage >= threshold; after
// max_tries rejections the minimum-coverage candidate seen wins. Entries
// carrying the pair's own pair_id are skipped, so the shared language pool
// can be passed as-is. Candidates whose processed text equals the true
// response are never emitted.
NegativeDraw sample_negative(const ContextResponsePair& pair,
                             const std::vector<PoolEntry>& pool, Rng& rng,
                             const NspParams& params);

// One positive and one negative per pair; response texts pass through the
// VSP positive-sample processing before emission. Deterministic per seed.
std::vector<NspSample> synthesize_nsp(const std::vector<ContextResponsePair>& pairs,
                                      std::uint64_t seed, const NspParams& params);

}  // namespace dialscore
