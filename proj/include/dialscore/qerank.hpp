#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dialscore {

struct QERecord {
  std::string sample_id;
  std::string lang;
  double qe_raw = 0.0;  // unbounded, uncalibrated across languages
  int rank = 0;         // 1 = highest qe_raw within its group
  double z = 0.0;       // per-language standardization
};

// QE score file: JSONL {sample_id, lang, qe_raw}. Duplicate sample_id is a
// hard error.
std::vector<QERecord> load_qe_file(const std::string& path);
std::vector<QERecord> parse_qe_jsonl(std::istream& in, const std::string& source_name);

struct AttachReport {
  std::size_t joined = 0;
  std::size_t skipped_missing = 0;  // only with allow_missing
  std::size_t unused_scores = 0;    // qe records matching no sample
  std::vector<std::string> missing_ids;
};

// Inner join of translated sample ids onto QE records. Missing scores are a
// hard error listing the ids unless allow_missing is set.
std::vector<QERecord> attach_scores(const std::vector<std::pair<std::string, std::string>>&
                                        translated_ids_with_lang,
                                    const std::vector<QERecord>& qe_records,
                                    bool allow_missing, AttachReport* report = nullptr);

struct ZscoreReport {
  std::vector<std::string> degenerate_langs;  // zero std; z forced to 0.0
};

// z = (qe_raw - mean_lang) / std_lang with the population standard deviation,
// each language standardized independently.
void zscore_per_language(std::vector<QERecord>& records, ZscoreReport* report = nullptr);

enum class MixStrategy { EN, LANG, ML };

struct MixSpec {
  MixStrategy strategy = MixStrategy::EN;
  std::string lang;  // for LANG
  int k_percent = 100;
  std::string task = "VSP";
};

std::string to_string(MixStrategy s);
std::optional<MixStrategy> mix_strategy_from_string(std::string_view s);

struct SelectionGroupKey {
  std::string lang;
  std::string origin;  // empty when grouping ignores origin (VSP)

  bool operator<(const SelectionGroupKey& o) const {
    return std::tie(lang, origin) < std::tie(o.lang, o.origin);
  }
};

// Sort each group by qe_raw descending (ties by sample_id ascending), assign
// ranks 1..n, and keep the top max(1, floor(k/100 * n)) records; k = 0 keeps
// none. VSP groups by lang; NSP groups by (lang, origin) and the selections
// merge afterwards.
std::vector<QERecord> rank_and_select(std::vector<QERecord> records, int k_percent,
                                      const std::map<std::string, std::string>& id_to_origin);

// Assign within-group ranks without selecting (k = 100 path reuses this).
void assign_ranks(std::vector<QERecord>& records,
                  const std::map<std::string, std::string>& id_to_origin);

struct ManifestEntry {
  int stage = 1;  // 1 = source-language data, 2 = selected translations
  std::string sample_id;
  std::string lang;
  std::optional<int> rank;
  std::optional<double> z;
};

std::string manifest_entry_to_jsonl(const ManifestEntry& e);
ManifestEntry manifest_entry_from_jsonl(const std::string& line);

// EN: source samples only. LANG(l): source samples (stage 1) plus the
// selected translations of language l (stage 2). ML: source samples plus the
// selected translations of every language.
std::vector<ManifestEntry> build_training_mix(const MixSpec& spec,
                                              const std::vector<std::string>& en_sample_ids,
                                              const std::vector<QERecord>& selected);

struct LangStats {
  std::string lang;
  std::size_t n = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  double mean = 0, std = 0;
};

// Five-number summary per language (linear-interpolation quantiles) plus
// mean and population std, ordered by language code.
std::vector<LangStats> language_stats(const std::vector<QERecord>& records);

std::string lang_stats_csv(const std::vector<LangStats>& stats);

// Linear-interpolation (type 7) quantile of a sorted series; p in [0, 1].
double interpolated_quantile(const std::vector<double>& sorted_values, double p);

}  // namespace dialscore
