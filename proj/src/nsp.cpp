#include "dialscore/nsp.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "dialscore/errors.hpp"

using json = nlohmann::json;

namespace dialscore {

double token_coverage(const TokenizedSentence& candidate, const TokenizedSentence& reference,
                      const StopwordTable& stopwords) {
  if (candidate.tokens.empty() || reference.tokens.empty()) {
    throw InputError("token_coverage: empty sentence");
  }
  std::vector<std::string> cand = content_tokens(candidate.tokens, candidate.lang, stopwords);
  std::vector<std::string> ref = content_tokens(reference.tokens, reference.lang, stopwords);
  if (cand.empty()) {
    cand = candidate.tokens;
    ref = reference.tokens;
  }
  std::unordered_set<std::string> cand_set(cand.begin(), cand.end());
  std::unordered_set<std::string> ref_set(ref.begin(), ref.end());
  std::size_t covered = 0;
  for (const auto& t : cand_set)
    if (ref_set.count(t)) ++covered;
  return static_cast<double>(covered) / static_cast<double>(cand_set.size());
}

NegativeDraw sample_negative(const ContextResponsePair& pair,
                             const std::vector<PoolEntry>& pool, Rng& rng,
                             const NspParams& params) {
  if (pool.empty()) throw InputError("sample_negative: empty pool");
  TokenizedSentence true_resp = tokenize(pair.response.text, pair.lang);

  std::optional<NegativeDraw> best;
  int tries = 0;
  // Own-pair draws don't count as tries; bound total draws to stay finite on
  // degenerate pools.
  std::size_t draws_left = static_cast<std::size_t>(params.max_tries) * 4 + pool.size();
  while (tries < params.max_tries && draws_left-- > 0) {
    const PoolEntry& entry = pool[rng.index(pool.size())];
    if (entry.pair_id == pair.pair_id) continue;
    ++tries;
    PositiveResult processed =
        positive_perturb(tokenize(entry.text, pair.lang), rng, params.perturb);
    std::string text = processed.sentence.join();
    if (text == pair.response.text) continue;  // never emit the true response
    double cov = token_coverage(processed.sentence, true_resp, params.perturb.stopwords);
    if (cov < params.coverage_threshold) {
      return NegativeDraw{std::move(text), entry.pair_id, cov, false};
    }
    if (!best || cov < best->coverage) {
      best = NegativeDraw{std::move(text), entry.pair_id, cov, true};
    }
  }
  if (best) return *best;

  // Every draw collided with the true response string; scan the pool in order
  // for any usable candidate.
  for (const auto& entry : pool) {
    if (entry.pair_id == pair.pair_id) continue;
    PositiveResult processed =
        positive_perturb(tokenize(entry.text, pair.lang), rng, params.perturb);
    std::string text = processed.sentence.join();
    if (text == pair.response.text) continue;
    double cov = token_coverage(processed.sentence, true_resp, params.perturb.stopwords);
    return NegativeDraw{std::move(text), entry.pair_id, cov,
                        cov >= params.coverage_threshold};
  }
  throw InputError("sample_negative: pool for pair " + pair.pair_id +
                   " contains only copies of the true response");
}

std::vector<NspSample> synthesize_nsp(const std::vector<ContextResponsePair>& pairs,
                                      std::uint64_t seed, const NspParams& params) {
  if (pairs.empty()) throw InputError("synthesize_nsp: no pairs");
  const std::uint64_t nsp_seed = derive_seed(seed, "nsp");

  // Same-language response pools, shared across pairs; sample_negative skips
  // the pair's own entries.
  std::unordered_map<std::string, std::vector<PoolEntry>> pools;
  for (const auto& p : pairs) pools[p.lang].push_back(PoolEntry{p.pair_id, p.response.text});
  for (const auto& [lang, pool] : pools) {
    if (pool.size() < 2) {
      throw InputError("synthesize_nsp: language " + lang +
                       " needs at least 2 responses for negative sampling");
    }
  }

  std::vector<NspSample> out;
  out.reserve(pairs.size() * 2);
  for (const auto& pair : pairs) {
    NspSample pos;
    pos.sample_id = pair.pair_id + "#nsp-pos";
    pos.lang = pair.lang;
    pos.context = pair.context;
    pos.label = 1.0;
    pos.seed_trace = derive_seed(nsp_seed, pos.sample_id);
    Rng pos_rng(pos.seed_trace);
    pos.response_text =
        positive_perturb(tokenize(pair.response.text, pair.lang), pos_rng, params.perturb)
            .sentence.join();
    out.push_back(std::move(pos));

    NspSample neg;
    neg.sample_id = pair.pair_id + "#nsp-neg";
    neg.lang = pair.lang;
    neg.context = pair.context;
    neg.label = 0.0;
    neg.seed_trace = derive_seed(nsp_seed, neg.sample_id);
    Rng neg_rng(neg.seed_trace);
    NegativeDraw draw = sample_negative(pair, pools[pair.lang], neg_rng, params);
    neg.response_text = draw.text;
    neg.negative_source_pair_id = draw.source_pair_id;
    neg.coverage_at_accept = draw.coverage;
    neg.fallback = draw.fallback;
    out.push_back(std::move(neg));
  }
  return out;
}

namespace {

json turns_to_json(const std::vector<Turn>& turns) {
  json arr = json::array();
  for (const auto& t : turns) arr.push_back({{"speaker", t.speaker}, {"text", t.text}});
  return arr;
}

}  // namespace

std::string nsp_sample_to_jsonl(const NspSample& s) {
  json j{{"sample_id", s.sample_id},
         {"lang", s.lang},
         {"context", turns_to_json(s.context)},
         {"response", s.response_text},
         {"label", s.label},
         {"fallback", s.fallback},
         {"seed_trace", s.seed_trace}};
  j["negative_source_pair_id"] =
      s.negative_source_pair_id ? json(*s.negative_source_pair_id) : json(nullptr);
  j["coverage_at_accept"] = s.coverage_at_accept ? json(*s.coverage_at_accept) : json(nullptr);
  return j.dump();
}

NspSample nsp_sample_from_jsonl(const std::string& line) {
  json j = json::parse(line);
  NspSample s;
  s.sample_id = j.at("sample_id").get<std::string>();
  s.lang = j.at("lang").get<std::string>();
  for (const auto& t : j.at("context"))
    s.context.push_back(Turn{t.at("speaker").get<int>(), t.at("text").get<std::string>()});
  s.response_text = j.at("response").get<std::string>();
  s.label = j.at("label").get<double>();
  s.fallback = j.at("fallback").get<bool>();
  s.seed_trace = j.at("seed_trace").get<std::uint64_t>();
  if (!j.at("negative_source_pair_id").is_null())
    s.negative_source_pair_id = j.at("negative_source_pair_id").get<std::string>();
  if (!j.at("coverage_at_accept").is_null())
    s.coverage_at_accept = j.at("coverage_at_accept").get<double>();
  return s;
}

}  // namespace dialscore
