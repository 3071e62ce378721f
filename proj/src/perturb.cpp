#include "dialscore/perturb.hpp"

#include <algorithm>
#include <numeric>

#include <json.hpp>

#include "dialscore/errors.hpp"

using json = nlohmann::json;

namespace dialscore {

const char* to_string(PositiveRule r) {
  switch (r) {
    case PositiveRule::None: return "none";
    case PositiveRule::PunctRemoval: return "punct_removal";
    case PositiveRule::StopwordRemoval: return "stopword_removal";
  }
  return "?";
}

const char* to_string(NegativeRule r) {
  switch (r) {
    case NegativeRule::Reorder: return "reorder";
    case NegativeRule::Drop: return "drop";
    case NegativeRule::Repeat: return "repeat";
  }
  return "?";
}

PositiveResult positive_perturb(const TokenizedSentence& s, Rng& rng,
                                const PerturbParams& params) {
  if (s.tokens.empty()) throw InputError("positive_perturb: empty sentence");
  PositiveRule rule = static_cast<PositiveRule>(rng.uniform(3));
  TokenizedSentence out;
  out.lang = s.lang;
  switch (rule) {
    case PositiveRule::None:
      out.tokens = s.tokens;
      break;
    case PositiveRule::PunctRemoval:
      for (const auto& t : s.tokens)
        if (!is_punct_token(t)) out.tokens.push_back(t);
      break;
    case PositiveRule::StopwordRemoval:
      for (const auto& t : s.tokens)
        if (!params.stopwords.contains(t, s.lang)) out.tokens.push_back(t);
      break;
  }
  if (out.tokens.empty()) {
    out.tokens = s.tokens;
    rule = PositiveRule::None;
  }
  return {std::move(out), rule};
}

namespace {

bool has_two_distinct(const std::vector<std::string>& tokens) {
  for (std::size_t i = 1; i < tokens.size(); ++i)
    if (tokens[i] != tokens[0]) return true;
  return false;
}

std::vector<std::string> reorder_tokens(const std::vector<std::string>& tokens, Rng& rng) {
  // Resample until the permutation differs; after 8 tries swap the first
  // differing pair, which always exists given two distinct tokens.
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<std::string> shuffled = tokens;
    rng.shuffle(shuffled);
    if (shuffled != tokens) return shuffled;
  }
  std::vector<std::string> fallback = tokens;
  for (std::size_t j = 1; j < fallback.size(); ++j) {
    if (fallback[j] != fallback[0]) {
      std::swap(fallback[0], fallback[j]);
      break;
    }
  }
  return fallback;
}

std::vector<std::string> drop_tokens(const std::vector<std::string>& tokens, double p_drop,
                                     Rng& rng) {
  // At least one token dropped and at least one kept.
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<std::string> kept;
    for (const auto& t : tokens)
      if (!rng.bernoulli(p_drop)) kept.push_back(t);
    if (!kept.empty() && kept.size() < tokens.size()) return kept;
  }
  std::size_t victim = rng.index(tokens.size());
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (i != victim) kept.push_back(tokens[i]);
  return kept;
}

std::vector<std::string> repeat_tokens(const std::vector<std::string>& tokens, double p_repeat,
                                       Rng& rng) {
  // At least one token duplicated in place.
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<std::string> out;
    bool any = false;
    for (const auto& t : tokens) {
      out.push_back(t);
      if (rng.bernoulli(p_repeat)) {
        out.push_back(t);
        any = true;
      }
    }
    if (any) return out;
  }
  std::size_t victim = rng.index(tokens.size());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    out.push_back(tokens[i]);
    if (i == victim) out.push_back(tokens[i]);
  }
  return out;
}

}  // namespace

NegativeResult negative_perturb(const TokenizedSentence& s, Rng& rng,
                                const PerturbParams& params) {
  if (s.tokens.empty()) throw InputError("negative_perturb: empty sentence");
  std::vector<NegativeRule> applicable;
  if (s.tokens.size() >= 2 && has_two_distinct(s.tokens))
    applicable.push_back(NegativeRule::Reorder);
  if (s.tokens.size() >= 2) applicable.push_back(NegativeRule::Drop);
  applicable.push_back(NegativeRule::Repeat);

  NegativeRule rule = applicable[rng.index(applicable.size())];
  TokenizedSentence out;
  out.lang = s.lang;
  switch (rule) {
    case NegativeRule::Reorder:
      out.tokens = reorder_tokens(s.tokens, rng);
      break;
    case NegativeRule::Drop:
      out.tokens = drop_tokens(s.tokens, params.p_drop, rng);
      break;
    case NegativeRule::Repeat:
      out.tokens = repeat_tokens(s.tokens, params.p_repeat, rng);
      break;
  }
  return {std::move(out), rule};
}

std::string sample_to_jsonl(const LabeledSample& s) {
  json j{{"sample_id", s.sample_id}, {"task", s.task},
         {"lang", s.lang},           {"text", s.text},
         {"label", s.label},         {"origin", s.origin},
         {"rule_applied", s.rule_applied}, {"source_pair_id", s.source_pair_id},
         {"seed_trace", s.seed_trace}};
  return j.dump();
}

LabeledSample sample_from_jsonl(const std::string& line) {
  json j = json::parse(line);
  LabeledSample s;
  s.sample_id = j.at("sample_id").get<std::string>();
  s.task = j.at("task").get<std::string>();
  s.lang = j.at("lang").get<std::string>();
  s.text = j.at("text").get<std::string>();
  s.label = j.at("label").get<double>();
  s.origin = j.at("origin").get<std::string>();
  s.rule_applied = j.at("rule_applied").get<std::string>();
  s.source_pair_id = j.at("source_pair_id").get<std::string>();
  s.seed_trace = j.at("seed_trace").get<std::uint64_t>();
  return s;
}

std::vector<LabeledSample> synthesize_vsp(const std::vector<VspSentence>& sentences,
                                          std::uint64_t seed, double neg_ratio,
                                          const PerturbParams& params) {
  if (sentences.empty()) throw InputError("synthesize_vsp: no sentences");
  const std::uint64_t perturb_seed = derive_seed(seed, "perturb");
  const std::uint64_t select_seed = derive_seed(seed, "select");

  std::vector<LabeledSample> out;
  out.reserve(sentences.size() * 2);

  for (const auto& src : sentences) {
    LabeledSample pos;
    pos.sample_id = src.source_id + "#vsp-pos";
    pos.task = "VSP";
    pos.lang = src.lang;
    pos.origin = "positive";
    pos.label = 1.0;
    pos.source_pair_id = src.source_id;
    pos.seed_trace = derive_seed(perturb_seed, pos.sample_id);
    Rng rng(pos.seed_trace);
    PositiveResult res = positive_perturb(tokenize(src.text, src.lang), rng, params);
    pos.text = res.sentence.join();
    pos.rule_applied = to_string(res.rule);
    out.push_back(std::move(pos));
  }

  const std::size_t n = sentences.size();
  auto total_negatives = static_cast<std::size_t>(neg_ratio * static_cast<double>(n));
  std::size_t produced = 0;
  for (std::size_t cycle = 0; produced < total_negatives; ++cycle) {
    // One without-replacement pass per cycle; extra cycles only when ratio > 1.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    Rng cycle_rng(derive_seed(select_seed, "cycle-" + std::to_string(cycle)));
    cycle_rng.shuffle(order);
    for (std::size_t idx : order) {
      if (produced >= total_negatives) break;
      const auto& src = sentences[idx];
      LabeledSample neg;
      neg.sample_id = src.source_id + "#vsp-neg" + std::to_string(cycle);
      neg.task = "VSP";
      neg.lang = src.lang;
      neg.origin = "negative";
      neg.label = 0.0;
      neg.source_pair_id = src.source_id;
      neg.seed_trace = derive_seed(perturb_seed, neg.sample_id);
      Rng rng(neg.seed_trace);
      NegativeResult res = negative_perturb(tokenize(src.text, src.lang), rng, params);
      neg.text = res.sentence.join();
      neg.rule_applied = to_string(res.rule);
      out.push_back(std::move(neg));
      ++produced;
    }
  }
  return out;
}

}  // namespace dialscore
