#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dialscore/corpus.hpp"

namespace dialscore {

struct Correlation {
  double r = 0.0;
  double p = 1.0;                  // two-sided, t-approximation with n-2 df
  std::optional<double> p_exact;   // spearman only, exact permutation p for n <= 8
};

// Sample Pearson correlation; two-sided p from t = r*sqrt((n-2)/(1-r^2)).
// Throws ConstantSeriesError on constant input, InputError on bad shapes.
Correlation pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Pearson over fractional (midrank) ranks; for n <= 8 an exact permutation
// p-value is computed alongside the t-approximation.
Correlation spearman(const std::vector<double>& xs, const std::vector<double>& ys);

// Midranks (average ranks for ties), 1-based.
std::vector<double> midranks(const std::vector<double>& values);

// Regularized incomplete beta function I_x(a, b).
double ibeta_reg(double a, double b, double x);

// One correlation cell; unset optionals mean "undefined" (constant series).
struct CorrelationCell {
  std::string lang;
  std::string dimension;
  std::size_t n = 0;
  std::optional<Correlation> pearson;
  std::optional<Correlation> spearman;
};

struct CorrelationReport {
  std::string dimension;
  std::uint64_t seed = 0;
  std::vector<CorrelationCell> cells;  // languages in alphabetical order
  CorrelationCell average;             // unweighted mean over defined cells
  std::size_t excluded = 0;            // scorer failures
  std::size_t total = 0;
};

// Scores one annotation; throws to signal a per-item failure (the item is
// excluded and counted).
using ScoreFn = std::function<double(const AnnotationRecord&)>;

enum class Dimension { Understandability, Sensibleness };
const char* to_string(Dimension d);

// Per-language Pearson/Spearman of scorer output against the human scores of
// one dimension plus the macro-average row. More than 10% exclusions is a
// ValidationError.
CorrelationReport evaluate_scorer(const ScoreFn& scorer,
                                  const std::vector<AnnotationRecord>& annotations,
                                  Dimension dimension, std::uint64_t seed = 0);

struct AggregateCell {
  std::string lang;
  std::string dimension;
  std::size_t seeds = 0;
  // Unset when the cell is undefined in any seed.
  std::optional<double> pearson_mean, pearson_std;
  std::optional<double> spearman_mean, spearman_std;
  bool any_p_not_significant = false;  // p >= 0.05 in any seed
};

// Mean and population std of each correlation cell across seeds.
std::vector<AggregateCell> multi_seed_report(const std::vector<CorrelationReport>& reports);

std::string report_csv(const std::vector<CorrelationReport>& reports);
std::string aggregate_csv(const std::vector<AggregateCell>& cells);

struct ErrorAnalysisRow {
  std::string pair_id;
  std::string lang;
  double z = 0.0;
  double abs_error = 0.0;
};

struct ErrorAnalysis {
  std::vector<ErrorAnalysisRow> rows;
  std::optional<Correlation> summary;  // pearson(z, abs_error); unset if undefined
  std::size_t missing_joins = 0;
};

// Joins predictions, human scores and QE z-scores on pair_id and correlates
// z against the absolute prediction error.
ErrorAnalysis qe_error_analysis(const std::vector<std::pair<std::string, double>>& predictions,
                                const std::vector<std::pair<std::string, double>>& human_scores,
                                const std::vector<std::tuple<std::string, std::string, double>>&
                                    zscores_by_pair);

std::string error_analysis_csv(const ErrorAnalysis& analysis);

}  // namespace dialscore
