#include "dialscore/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "dialscore/errors.hpp"

namespace dialscore {

namespace {

void check_series(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw InputError("correlation: length mismatch");
  if (xs.size() < 3) throw InputError("correlation: need at least 3 points");
  auto constant = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (constant(xs) || constant(ys)) {
    throw ConstantSeriesError("undefined correlation: constant series");
  }
}

double pearson_r(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double two_sided_p(double r, std::size_t n) {
  const double df = static_cast<double>(n - 2);
  if (std::abs(r) >= 1.0) return 0.0;
  double t2 = r * r * df / (1.0 - r * r);
  // P(|T| >= t) for Student t with df degrees of freedom.
  return ibeta_reg(df / 2.0, 0.5, df / (df + t2));
}

// Continued fraction for the incomplete beta function (Lentz's method).
double ibeta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double ibeta_reg(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                    a * std::log(x) + b * std::log(1.0 - x);
  double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * ibeta_cf(a, b, x) / a;
  }
  return 1.0 - front * ibeta_cf(b, a, 1.0 - x) / b;
}

Correlation pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  check_series(xs, ys);
  Correlation c;
  c.r = pearson_r(xs, ys);
  c.p = two_sided_p(c.r, xs.size());
  return c;
}

std::vector<double> midranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

namespace {

// Exact two-sided permutation p for Spearman at small n: enumerate the
// distinct arrangements of the y ranks against fixed x ranks.
double spearman_exact_p(const std::vector<double>& xr, std::vector<double> yr, double rho_obs) {
  const std::size_t n = xr.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xr[i];
    my += yr[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xr[i] - mx) * (xr[i] - mx);
    syy += (yr[i] - my) * (yr[i] - my);
  }
  const double denom = std::sqrt(sxx * syy);
  std::sort(yr.begin(), yr.end());
  std::uint64_t hits = 0, total = 0;
  const double target = std::abs(rho_obs) - 1e-12;
  do {
    double sxy = 0;
    for (std::size_t i = 0; i < n; ++i) sxy += (xr[i] - mx) * (yr[i] - my);
    if (std::abs(sxy / denom) >= target) ++hits;
    ++total;
  } while (std::next_permutation(yr.begin(), yr.end()));
  return static_cast<double>(hits) / static_cast<double>(total);
}

}  // namespace

Correlation spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  check_series(xs, ys);
  std::vector<double> xr = midranks(xs);
  std::vector<double> yr = midranks(ys);
  Correlation c;
  c.r = pearson_r(xr, yr);
  c.p = two_sided_p(c.r, xs.size());
  if (xs.size() <= 8) c.p_exact = spearman_exact_p(xr, yr, c.r);
  return c;
}

const char* to_string(Dimension d) {
  return d == Dimension::Understandability ? "Understandability" : "Sensibleness";
}

CorrelationReport evaluate_scorer(const ScoreFn& scorer,
                                  const std::vector<AnnotationRecord>& annotations,
                                  Dimension dimension, std::uint64_t seed) {
  if (annotations.empty()) throw InputError("evaluate_scorer: no annotations");

  std::map<std::string, std::vector<std::pair<double, double>>> by_lang;  // (score, human)
  std::size_t excluded = 0;
  for (const auto& rec : annotations) {
    double human = dimension == Dimension::Understandability ? rec.understandability
                                                             : rec.sensibleness;
    try {
      double s = scorer(rec);
      by_lang[rec.lang].emplace_back(s, human);
    } catch (const std::exception&) {
      ++excluded;
    }
  }
  if (excluded * 10 > annotations.size()) {
    throw ValidationError("evaluate_scorer: " + std::to_string(excluded) + " of " +
                          std::to_string(annotations.size()) +
                          " items excluded (> 10%)");
  }

  CorrelationReport report;
  report.dimension = to_string(dimension);
  report.seed = seed;
  report.excluded = excluded;
  report.total = annotations.size();

  std::vector<double> def_pr, def_pp, def_sr, def_sp;
  for (const auto& [lang, pairs] : by_lang) {
    CorrelationCell cell;
    cell.lang = lang;
    cell.dimension = report.dimension;
    cell.n = pairs.size();
    if (pairs.size() >= 3) {
      std::vector<double> xs, ys;
      for (const auto& [s, h] : pairs) {
        xs.push_back(s);
        ys.push_back(h);
      }
      try {
        cell.pearson = pearson(xs, ys);
        cell.spearman = spearman(xs, ys);
      } catch (const ConstantSeriesError&) {
        // left undefined
      }
    }
    if (cell.pearson) {
      def_pr.push_back(cell.pearson->r);
      def_pp.push_back(cell.pearson->p);
    }
    if (cell.spearman) {
      def_sr.push_back(cell.spearman->r);
      def_sp.push_back(cell.spearman->p);
    }
    report.cells.push_back(std::move(cell));
  }

  report.average.lang = "AVG";
  report.average.dimension = report.dimension;
  report.average.n = report.cells.size();
  auto mean_of = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  if (!def_pr.empty()) report.average.pearson = Correlation{mean_of(def_pr), mean_of(def_pp), {}};
  if (!def_sr.empty()) report.average.spearman = Correlation{mean_of(def_sr), mean_of(def_sp), {}};
  return report;
}

std::vector<AggregateCell> multi_seed_report(const std::vector<CorrelationReport>& reports) {
  if (reports.empty()) throw InputError("multi_seed_report: no reports");
  const auto& first = reports.front();
  for (const auto& rep : reports) {
    if (rep.cells.size() != first.cells.size() || rep.dimension != first.dimension) {
      throw InputError("multi_seed_report: report shape mismatch");
    }
    for (std::size_t i = 0; i < rep.cells.size(); ++i) {
      if (rep.cells[i].lang != first.cells[i].lang) {
        throw InputError("multi_seed_report: language mismatch at cell " + std::to_string(i));
      }
    }
  }

  auto mean_std = [](const std::vector<double>& v) {
    double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    double var = 0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());  // population std across seeds
    return std::pair<double, double>(mean, std::sqrt(var));
  };

  std::vector<AggregateCell> out;
  // Per-language cells plus the AVG row, in report order.
  const std::size_t cell_count = first.cells.size() + 1;
  for (std::size_t ci = 0; ci < cell_count; ++ci) {
    auto cell_of = [&](const CorrelationReport& rep) -> const CorrelationCell& {
      return ci < rep.cells.size() ? rep.cells[ci] : rep.average;
    };
    AggregateCell agg;
    agg.lang = cell_of(first).lang;
    agg.dimension = first.dimension;
    agg.seeds = reports.size();
    std::vector<double> pr, sr;
    bool p_defined = true, s_defined = true;
    for (const auto& rep : reports) {
      const auto& cell = cell_of(rep);
      if (cell.pearson) {
        pr.push_back(cell.pearson->r);
        if (cell.pearson->p >= 0.05) agg.any_p_not_significant = true;
      } else {
        p_defined = false;
      }
      if (cell.spearman) {
        sr.push_back(cell.spearman->r);
        if (cell.spearman->p >= 0.05) agg.any_p_not_significant = true;
      } else {
        s_defined = false;
      }
    }
    if (p_defined && !pr.empty()) {
      auto [m, s] = mean_std(pr);
      agg.pearson_mean = m;
      agg.pearson_std = s;
    }
    if (s_defined && !sr.empty()) {
      auto [m, s] = mean_std(sr);
      agg.spearman_mean = m;
      agg.spearman_std = s;
    }
    out.push_back(std::move(agg));
  }
  return out;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt_double(*v) : std::string("undefined");
}

}  // namespace

std::string report_csv(const std::vector<CorrelationReport>& reports) {
  std::string out = "lang,dimension,seed,pearson_r,pearson_p,spearman_rho,spearman_p,n\n";
  for (const auto& rep : reports) {
    auto emit = [&](const CorrelationCell& cell) {
      out += cell.lang + "," + cell.dimension + "," + std::to_string(rep.seed) + ",";
      out += (cell.pearson ? fmt_double(cell.pearson->r) : "undefined");
      out += ",";
      out += (cell.pearson ? fmt_double(cell.pearson->p) : "undefined");
      out += ",";
      out += (cell.spearman ? fmt_double(cell.spearman->r) : "undefined");
      out += ",";
      out += (cell.spearman ? fmt_double(cell.spearman->p) : "undefined");
      out += "," + std::to_string(cell.n) + "\n";
    };
    for (const auto& cell : rep.cells) emit(cell);
    emit(rep.average);
  }
  return out;
}

std::string aggregate_csv(const std::vector<AggregateCell>& cells) {
  std::string out =
      "lang,dimension,seeds,pearson_r_mean,pearson_r_std,spearman_rho_mean,spearman_rho_std,"
      "any_p_ge_0.05\n";
  for (const auto& c : cells) {
    out += c.lang + "," + c.dimension + "," + std::to_string(c.seeds) + "," +
           fmt_opt(c.pearson_mean) + "," + fmt_opt(c.pearson_std) + "," +
           fmt_opt(c.spearman_mean) + "," + fmt_opt(c.spearman_std) + "," +
           (c.any_p_not_significant ? "yes" : "no") + "\n";
  }
  return out;
}

ErrorAnalysis qe_error_analysis(
    const std::vector<std::pair<std::string, double>>& predictions,
    const std::vector<std::pair<std::string, double>>& human_scores,
    const std::vector<std::tuple<std::string, std::string, double>>& zscores_by_pair) {
  std::map<std::string, double> human;
  for (const auto& [id, h] : human_scores) human[id] = h;
  std::map<std::string, std::pair<std::string, double>> zmap;
  for (const auto& [id, lang, z] : zscores_by_pair) zmap[id] = {lang, z};

  ErrorAnalysis out;
  for (const auto& [id, pred] : predictions) {
    auto hit = human.find(id);
    auto zit = zmap.find(id);
    if (hit == human.end() || zit == zmap.end()) {
      ++out.missing_joins;
      continue;
    }
    ErrorAnalysisRow row;
    row.pair_id = id;
    row.lang = zit->second.first;
    row.z = zit->second.second;
    row.abs_error = std::abs(pred - hit->second);
    out.rows.push_back(std::move(row));
  }
  if (out.rows.size() < 3) throw InputError("qe_error_analysis: fewer than 3 joined rows");

  std::vector<double> zs, errs;
  for (const auto& row : out.rows) {
    zs.push_back(row.z);
    errs.push_back(row.abs_error);
  }
  try {
    out.summary = pearson(zs, errs);
  } catch (const ConstantSeriesError&) {
    // undefined; left unset
  }
  return out;
}

std::string error_analysis_csv(const ErrorAnalysis& analysis) {
  std::string out = "pair_id,lang,z,abs_error\n";
  for (const auto& row : analysis.rows) {
    out += row.pair_id + "," + row.lang + "," + fmt_double(row.z) + "," +
           fmt_double(row.abs_error) + "\n";
  }
  return out;
}

}  // namespace dialscore
