#include "dialscore/qerank.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "dialscore/errors.hpp"

using json = nlohmann::json;

namespace dialscore {

std::vector<QERecord> parse_qe_jsonl(std::istream& in, const std::string& source_name) {
  std::vector<QERecord> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw InputError(source_name + ": bad JSON on line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    QERecord r;
    r.sample_id = j.at("sample_id").get<std::string>();
    r.lang = j.at("lang").get<std::string>();
    r.qe_raw = j.at("qe_raw").get<double>();
    if (!seen.insert(r.sample_id).second) {
      throw InputError(source_name + ": duplicate sample_id " + r.sample_id);
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<QERecord> load_qe_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("load_qe_file: cannot open " + path);
  return parse_qe_jsonl(in, path);
}

std::vector<QERecord> attach_scores(
    const std::vector<std::pair<std::string, std::string>>& translated_ids_with_lang,
    const std::vector<QERecord>& qe_records, bool allow_missing, AttachReport* report) {
  std::unordered_map<std::string, const QERecord*> by_id;
  for (const auto& r : qe_records) by_id.emplace(r.sample_id, &r);

  AttachReport local;
  std::vector<QERecord> joined;
  joined.reserve(translated_ids_with_lang.size());
  for (const auto& [id, lang] : translated_ids_with_lang) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      local.missing_ids.push_back(id);
      continue;
    }
    QERecord r = *it->second;
    r.lang = lang;  // the sample's language is authoritative
    joined.push_back(std::move(r));
  }
  local.joined = joined.size();
  local.skipped_missing = local.missing_ids.size();
  local.unused_scores = qe_records.size() - joined.size();

  if (!local.missing_ids.empty() && !allow_missing) {
    std::string msg = "attach_scores: missing QE scores for " +
                      std::to_string(local.missing_ids.size()) + " sample(s):";
    std::size_t shown = std::min<std::size_t>(local.missing_ids.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) msg += " " + local.missing_ids[i];
    if (shown < local.missing_ids.size()) msg += " ...";
    throw InputError(msg);
  }
  if (report) *report = local;
  return joined;
}

void zscore_per_language(std::vector<QERecord>& records, ZscoreReport* report) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) groups[records[i].lang].push_back(i);

  ZscoreReport local;
  for (auto& [lang, idxs] : groups) {
    double mean = 0;
    for (auto i : idxs) mean += records[i].qe_raw;
    mean /= static_cast<double>(idxs.size());
    double var = 0;
    for (auto i : idxs) {
      double d = records[i].qe_raw - mean;
      var += d * d;
    }
    var /= static_cast<double>(idxs.size());  // population variance
    double sd = std::sqrt(var);
    if (sd == 0.0) {
      for (auto i : idxs) records[i].z = 0.0;
      local.degenerate_langs.push_back(lang);
    } else {
      for (auto i : idxs) records[i].z = (records[i].qe_raw - mean) / sd;
    }
  }
  if (report) *report = local;
}

namespace {

std::string origin_of(const QERecord& r, const std::map<std::string, std::string>& id_to_origin) {
  auto it = id_to_origin.find(r.sample_id);
  return it == id_to_origin.end() ? std::string() : it->second;
}

}  // namespace

void assign_ranks(std::vector<QERecord>& records,
                  const std::map<std::string, std::string>& id_to_origin) {
  std::map<SelectionGroupKey, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < records.size(); ++i) {
    groups[{records[i].lang, origin_of(records[i], id_to_origin)}].push_back(i);
  }
  for (auto& [key, idxs] : groups) {
    std::stable_sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
      if (records[a].qe_raw != records[b].qe_raw) return records[a].qe_raw > records[b].qe_raw;
      return records[a].sample_id < records[b].sample_id;
    });
    int rank = 1;
    for (auto i : idxs) records[i].rank = rank++;
  }
}

std::vector<QERecord> rank_and_select(std::vector<QERecord> records, int k_percent,
                                      const std::map<std::string, std::string>& id_to_origin) {
  if (k_percent < 0 || k_percent > 100) throw InputError("rank_and_select: k out of [0,100]");
  assign_ranks(records, id_to_origin);
  if (k_percent == 0) return {};

  std::map<SelectionGroupKey, std::size_t> group_sizes;
  for (const auto& r : records) ++group_sizes[{r.lang, origin_of(r, id_to_origin)}];

  std::vector<QERecord> selected;
  for (const auto& r : records) {
    std::size_t size = group_sizes[{r.lang, origin_of(r, id_to_origin)}];
    auto keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::floor(static_cast<double>(k_percent) / 100.0 *
                                               static_cast<double>(size))));
    if (static_cast<std::size_t>(r.rank) <= keep) selected.push_back(r);
  }
  // Deterministic output order: (lang, origin group, rank).
  std::stable_sort(selected.begin(), selected.end(), [&](const QERecord& a, const QERecord& b) {
    SelectionGroupKey ka{a.lang, origin_of(a, id_to_origin)};
    SelectionGroupKey kb{b.lang, origin_of(b, id_to_origin)};
    if (!(ka < kb) && !(kb < ka)) return a.rank < b.rank;
    return ka < kb;
  });
  return selected;
}

std::string to_string(MixStrategy s) {
  switch (s) {
    case MixStrategy::EN: return "en";
    case MixStrategy::LANG: return "lang";
    case MixStrategy::ML: return "ml";
  }
  return "?";
}

std::optional<MixStrategy> mix_strategy_from_string(std::string_view s) {
  if (s == "en") return MixStrategy::EN;
  if (s == "lang") return MixStrategy::LANG;
  if (s == "ml") return MixStrategy::ML;
  return std::nullopt;
}

std::string manifest_entry_to_jsonl(const ManifestEntry& e) {
  json j{{"stage", e.stage}, {"sample_id", e.sample_id}, {"lang", e.lang}};
  j["rank"] = e.rank ? json(*e.rank) : json(nullptr);
  j["z"] = e.z ? json(*e.z) : json(nullptr);
  return j.dump();
}

ManifestEntry manifest_entry_from_jsonl(const std::string& line) {
  json j = json::parse(line);
  ManifestEntry e;
  e.stage = j.at("stage").get<int>();
  e.sample_id = j.at("sample_id").get<std::string>();
  e.lang = j.at("lang").get<std::string>();
  if (!j.at("rank").is_null()) e.rank = j.at("rank").get<int>();
  if (!j.at("z").is_null()) e.z = j.at("z").get<double>();
  return e;
}

std::vector<ManifestEntry> build_training_mix(const MixSpec& spec,
                                              const std::vector<std::string>& en_sample_ids,
                                              const std::vector<QERecord>& selected) {
  std::vector<ManifestEntry> manifest;
  manifest.reserve(en_sample_ids.size() + selected.size());
  for (const auto& id : en_sample_ids) {
    ManifestEntry e;
    e.stage = 1;
    e.sample_id = id;
    e.lang = "en";
    manifest.push_back(std::move(e));
  }
  if (spec.strategy == MixStrategy::EN || spec.k_percent == 0) return manifest;

  if (spec.strategy == MixStrategy::LANG) {
    bool known = std::any_of(selected.begin(), selected.end(),
                             [&](const QERecord& r) { return r.lang == spec.lang; });
    if (!known) {
      throw InputError("build_training_mix: no translated records for language " + spec.lang);
    }
  }
  for (const auto& r : selected) {
    if (spec.strategy == MixStrategy::LANG && r.lang != spec.lang) continue;
    ManifestEntry e;
    e.stage = 2;
    e.sample_id = r.sample_id;
    e.lang = r.lang;
    e.rank = r.rank;
    e.z = r.z;
    manifest.push_back(std::move(e));
  }
  return manifest;
}

double interpolated_quantile(const std::vector<double>& sorted_values, double p) {
  if (sorted_values.empty()) throw InputError("quantile of empty series");
  if (sorted_values.size() == 1) return sorted_values[0];
  double h = p * static_cast<double>(sorted_values.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted_values.size()) return sorted_values.back();
  double frac = h - static_cast<double>(lo);
  return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

std::vector<LangStats> language_stats(const std::vector<QERecord>& records) {
  std::map<std::string, std::vector<double>> groups;
  for (const auto& r : records) groups[r.lang].push_back(r.qe_raw);

  std::vector<LangStats> out;
  for (auto& [lang, values] : groups) {
    std::sort(values.begin(), values.end());
    LangStats s;
    s.lang = lang;
    s.n = values.size();
    s.min = values.front();
    s.max = values.back();
    s.q1 = interpolated_quantile(values, 0.25);
    s.median = interpolated_quantile(values, 0.5);
    s.q3 = interpolated_quantile(values, 0.75);
    double mean = 0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double var = 0;
    for (double v : values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(values.size());
    s.mean = mean;
    s.std = std::sqrt(var);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

std::string lang_stats_csv(const std::vector<LangStats>& stats) {
  std::string out = "lang,n,min,q1,median,q3,max,mean,std\n";
  for (const auto& s : stats) {
    out += s.lang + "," + std::to_string(s.n) + "," + fmt_double(s.min) + "," +
           fmt_double(s.q1) + "," + fmt_double(s.median) + "," + fmt_double(s.q3) + "," +
           fmt_double(s.max) + "," + fmt_double(s.mean) + "," + fmt_double(s.std) + "\n";
  }
  return out;
}

}  // namespace dialscore
