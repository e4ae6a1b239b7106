#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "settag/model_io.hpp"
#include "settag/setpred.hpp"
#include "settag/split.hpp"

namespace settag {

// Token-averaged metrics over some subset of tokens. Means over an empty
// subset are NaN.
struct Metrics {
  std::size_t tokens = 0;
  double accuracy = 0.0;
  double utility = 0.0;
  double set_size = 0.0;
  double coverage = 0.0;
};

struct EvalReport {
  std::string document;
  std::string tagger;
  int scenario = 0;  // 0: not produced by a scenario run
  double beta = 1.0;
  std::size_t unknown_tokens = 0;
  Metrics all;
  Metrics known;
  Metrics unknown;

  std::size_t tokens() const { return all.tokens; }
  double unknown_fraction() const;
};

// counts[k - 1] = number of tokens with a predicted set of size k.
struct SetSizeHistogram {
  std::vector<std::size_t> known;
  std::vector<std::size_t> unknown;

  explicit SetSizeHistogram(std::size_t num_tags = 0) : known(num_tags, 0), unknown(num_tags, 0) {}
  SetSizeHistogram& operator+=(const SetSizeHistogram& other);
  // Most frequent set size (smallest on ties); 0 if empty.
  std::size_t known_mode() const;
};

struct Evaluation {
  EvalReport report;
  SetSizeHistogram histogram;
};

using Vocabulary = std::unordered_set<std::string>;

Vocabulary vocabulary_of(const std::vector<Document>& docs);

// Scores set predictions against gold tags. Point predictions (argmax of the
// posteriors) give the accuracy. `known[i]` says whether token i was seen in
// training. Throws std::invalid_argument on length mismatches.
Evaluation evaluate(const std::vector<PredictionSet>& predictions, const std::vector<std::optional<TagId>>& gold,
                    const std::vector<TagId>& point, const std::vector<bool>& known, const UtilityConfig& cfg);
Evaluation evaluate(const std::vector<PredictionSet>& predictions, const std::vector<std::optional<TagId>>& gold,
                    const std::vector<Posterior>& posteriors, const std::vector<bool>& known,
                    const UtilityConfig& cfg);

// Convenience: gold and known flags come from `doc` and `vocab`.
Evaluation evaluate(const Document& doc, const std::vector<PredictionSet>& predictions,
                    const std::vector<Posterior>& posteriors, const Vocabulary& vocab, const UtilityConfig& cfg);

std::vector<PredictionSet> predict_sets(const std::vector<Posterior>& posteriors, const UtilityConfig& cfg);

// Trains the tagger on the scenario's train set, tags each test segment,
// applies UBOP and evaluates. Scenarios 1 and 2 run for `target` only, or for
// every document when no target is given. Reports follow document order.
std::vector<Evaluation> run_scenario(const Corpus& corpus, const SplitSpec& splits, const TaggerSpec& tagger,
                                     Scenario scenario, double beta,
                                     std::optional<std::size_t> target = std::nullopt);

struct SweepRow {
  double beta = 0.0;
  std::size_t documents = 0;
  // Means over documents of the per-document means, with population
  // standard deviations across documents.
  double utility = 0.0;
  double utility_std = 0.0;
  double set_size = 0.0;
  double set_size_std = 0.0;
  double accuracy = 0.0;
  double coverage = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

// Scenario 3 over a grid of betas. The tagger is trained once; only the
// set prediction is repeated per beta. Throws std::invalid_argument unless
// the grid is non-empty and strictly increasing.
SweepTable beta_sweep(const Corpus& corpus, const SplitSpec& splits, const TaggerSpec& tagger,
                      const std::vector<double>& betas);

// Macro aggregation of one beta's per-document reports into a sweep row.
SweepRow aggregate(const std::vector<EvalReport>& reports, double beta);

enum class ReportFormat { kTsv, kJson };

// Throws std::invalid_argument for formats other than "tsv" and "json".
ReportFormat parse_report_format(std::string_view name);

// Fixed column order, numbers with 6 decimals.
std::string emit_report(const std::vector<EvalReport>& reports, ReportFormat format);
std::string emit_histogram(const SetSizeHistogram& histogram);
std::string emit_sweep(const SweepTable& table, ReportFormat format);

}  // namespace settag
