#include "settag/eval.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace settag {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Accumulator {
  std::size_t n = 0;
  double correct = 0.0, util = 0.0, size = 0.0, covered = 0.0;

  void add(bool is_correct, double u, std::size_t k, bool is_covered) {
    ++n;
    correct += is_correct ? 1.0 : 0.0;
    util += u;
    size += static_cast<double>(k);
    covered += is_covered ? 1.0 : 0.0;
  }

  Metrics metrics() const {
    if (n == 0) return {0, kNaN, kNaN, kNaN, kNaN};
    const double d = static_cast<double>(n);
    return {n, correct / d, util / d, size / d, covered / d};
  }
};

std::string fixed6(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::vector<bool> known_flags(const Document& doc, const Vocabulary& vocab) {
  std::vector<bool> known;
  known.reserve(doc.size());
  for (const auto& t : doc.tokens) known.push_back(vocab.count(t.normalized) > 0);
  return known;
}

std::vector<std::optional<TagId>> gold_tags(const Document& doc) {
  std::vector<std::optional<TagId>> gold;
  gold.reserve(doc.size());
  for (const auto& t : doc.tokens) gold.push_back(t.gold);
  return gold;
}

// One trained fold: the model plus what evaluation needs about its train set.
struct Fold {
  std::unique_ptr<Tagger> model;
  Vocabulary vocab;
  std::vector<Segment> tests;
};

Fold train_fold(const Corpus& corpus, const SplitSpec& splits, const TaggerSpec& tagger, Scenario scenario,
                std::optional<std::size_t> target) {
  auto data = assemble_scenario(corpus, splits, scenario, target);
  const auto train = data.train_documents();
  return {train_tagger(tagger, train, corpus.tagset), vocabulary_of(train), std::move(data.test)};
}

double population_std(const std::vector<double>& xs, double mean) {
  if (xs.empty()) return kNaN;
  double sq = 0.0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return std::sqrt(sq / static_cast<double>(xs.size()));
}

}  // namespace

double EvalReport::unknown_fraction() const {
  return all.tokens == 0 ? kNaN : static_cast<double>(unknown_tokens) / static_cast<double>(all.tokens);
}

SetSizeHistogram& SetSizeHistogram::operator+=(const SetSizeHistogram& other) {
  if (known.size() < other.known.size()) {
    known.resize(other.known.size(), 0);
    unknown.resize(other.unknown.size(), 0);
  }
  for (std::size_t k = 0; k < other.known.size(); ++k) {
    known[k] += other.known[k];
    unknown[k] += other.unknown[k];
  }
  return *this;
}

std::size_t SetSizeHistogram::known_mode() const {
  std::size_t best = 0;
  for (std::size_t k = 0; k < known.size(); ++k) {
    if (known[k] > 0 && (best == 0 || known[k] > known[best - 1])) best = k + 1;
  }
  return best;
}

Vocabulary vocabulary_of(const std::vector<Document>& docs) {
  Vocabulary v;
  for (const auto& d : docs) {
    for (const auto& t : d.tokens) v.insert(t.normalized);
  }
  return v;
}

Evaluation evaluate(const std::vector<PredictionSet>& predictions, const std::vector<std::optional<TagId>>& gold,
                    const std::vector<TagId>& point, const std::vector<bool>& known, const UtilityConfig& cfg) {
  const std::size_t n = predictions.size();
  if (gold.size() != n || point.size() != n || known.size() != n) {
    throw std::invalid_argument("evaluate: predictions, gold, point predictions and known flags differ in length");
  }
  Accumulator all, kn, unk;
  Evaluation out{{}, SetSizeHistogram(cfg.num_tags)};
  out.report.beta = cfg.beta;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& set = predictions[i];
    const bool correct = gold[i].has_value() && point[i] == *gold[i];
    const bool covered = gold[i].has_value() && set.contains(*gold[i]);
    const double u = utility(gold[i], set, cfg);
    const std::size_t k = set.tags.size();
    all.add(correct, u, k, covered);
    (known[i] ? kn : unk).add(correct, u, k, covered);
    ++(known[i] ? out.histogram.known : out.histogram.unknown).at(k - 1);
  }
  out.report.all = all.metrics();
  out.report.known = kn.metrics();
  out.report.unknown = unk.metrics();
  out.report.unknown_tokens = unk.n;
  return out;
}

Evaluation evaluate(const std::vector<PredictionSet>& predictions, const std::vector<std::optional<TagId>>& gold,
                    const std::vector<Posterior>& posteriors, const std::vector<bool>& known,
                    const UtilityConfig& cfg) {
  std::vector<TagId> point;
  point.reserve(posteriors.size());
  for (const auto& p : posteriors) point.push_back(argmax_tag(p));
  return evaluate(predictions, gold, point, known, cfg);
}

Evaluation evaluate(const Document& doc, const std::vector<PredictionSet>& predictions,
                    const std::vector<Posterior>& posteriors, const Vocabulary& vocab, const UtilityConfig& cfg) {
  auto ev = evaluate(predictions, gold_tags(doc), posteriors, known_flags(doc, vocab), cfg);
  ev.report.document = doc.name;
  return ev;
}

std::vector<PredictionSet> predict_sets(const std::vector<Posterior>& posteriors, const UtilityConfig& cfg) {
  std::vector<PredictionSet> sets;
  sets.reserve(posteriors.size());
  for (const auto& p : posteriors) sets.push_back(ubop(p, cfg));
  return sets;
}

std::vector<Evaluation> run_scenario(const Corpus& corpus, const SplitSpec& splits, const TaggerSpec& tagger,
                                     Scenario scenario, double beta, std::optional<std::size_t> target) {
  const UtilityConfig cfg(beta, corpus.tagset.size());
  std::vector<std::optional<std::size_t>> targets;
  if (scenario == Scenario::kWholeCorpus) {
    targets.push_back(std::nullopt);
  } else if (target) {
    targets.push_back(target);
  } else {
    for (std::size_t k = 0; k < corpus.documents.size(); ++k) targets.push_back(k);
  }

  // Folds are independent; each writes only its own slot.
  std::vector<std::future<std::vector<Evaluation>>> jobs;
  for (const auto& k : targets) {
    jobs.push_back(std::async(std::launch::async, [&, k] {
      const auto fold = train_fold(corpus, splits, tagger, scenario, k);
      std::vector<Evaluation> out;
      for (const auto& seg : fold.tests) {
        const auto post = fold.model->posteriors(seg.tokens);
        auto ev = evaluate(seg.tokens, predict_sets(post, cfg), post, fold.vocab, cfg);
        ev.report.tagger = std::string(to_string(tagger.kind));
        ev.report.scenario = static_cast<int>(scenario);
        out.push_back(std::move(ev));
      }
      return out;
    }));
  }
  std::vector<Evaluation> results;
  for (auto& job : jobs) {
    for (auto& ev : job.get()) results.push_back(std::move(ev));
  }
  return results;
}

SweepRow aggregate(const std::vector<EvalReport>& reports, double beta) {
  SweepRow row;
  row.beta = beta;
  row.documents = reports.size();
  if (reports.empty()) {
    row.utility = row.utility_std = row.set_size = row.set_size_std = row.accuracy = row.coverage = kNaN;
    return row;
  }
  std::vector<double> utils, sizes;
  for (const auto& r : reports) {
    utils.push_back(r.all.utility);
    sizes.push_back(r.all.set_size);
    row.utility += r.all.utility;
    row.set_size += r.all.set_size;
    row.accuracy += r.all.accuracy;
    row.coverage += r.all.coverage;
  }
  const double n = static_cast<double>(reports.size());
  row.utility /= n;
  row.set_size /= n;
  row.accuracy /= n;
  row.coverage /= n;
  row.utility_std = population_std(utils, row.utility);
  row.set_size_std = population_std(sizes, row.set_size);
  return row;
}

SweepTable beta_sweep(const Corpus& corpus, const SplitSpec& splits, const TaggerSpec& tagger,
                      const std::vector<double>& betas) {
  if (betas.empty()) throw std::invalid_argument("beta grid must not be empty");
  for (std::size_t i = 0; i < betas.size(); ++i) {
    UtilityConfig(betas[i], corpus.tagset.size());
    if (i > 0 && !(betas[i] > betas[i - 1])) throw std::invalid_argument("beta grid must be strictly increasing");
  }
  const auto fold = train_fold(corpus, splits, tagger, Scenario::kWholeCorpus, std::nullopt);
  std::vector<std::vector<Posterior>> posteriors;
  for (const auto& seg : fold.tests) posteriors.push_back(fold.model->posteriors(seg.tokens));

  SweepTable table;
  for (double beta : betas) {
    const UtilityConfig cfg(beta, corpus.tagset.size());
    std::vector<EvalReport> reports;
    for (std::size_t d = 0; d < fold.tests.size(); ++d) {
      const auto& seg = fold.tests[d];
      reports.push_back(evaluate(seg.tokens, predict_sets(posteriors[d], cfg), posteriors[d], fold.vocab, cfg).report);
    }
    table.rows.push_back(aggregate(reports, beta));
  }
  return table;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "tsv") return ReportFormat::kTsv;
  if (name == "json") return ReportFormat::kJson;
  throw std::invalid_argument("unknown report format '" + std::string(name) + "' (expected tsv or json)");
}

std::string emit_report(const std::vector<EvalReport>& reports, ReportFormat format) {
  static const char* const kColumns[] = {"scenario",   "tagger",      "document",    "beta",
                                         "tokens",     "unknown_fraction", "accuracy", "utility",
                                         "set_size",   "coverage",    "acc_known",   "acc_unknown",
                                         "util_known", "util_unknown", "size_known", "size_unknown"};
  auto row_values = [](const EvalReport& r) {
    return std::vector<std::string>{r.scenario == 0 ? "-" : std::to_string(r.scenario),
                                    r.tagger,
                                    r.document,
                                    fixed6(r.beta),
                                    std::to_string(r.tokens()),
                                    fixed6(r.unknown_fraction()),
                                    fixed6(r.all.accuracy),
                                    fixed6(r.all.utility),
                                    fixed6(r.all.set_size),
                                    fixed6(r.all.coverage),
                                    fixed6(r.known.accuracy),
                                    fixed6(r.unknown.accuracy),
                                    fixed6(r.known.utility),
                                    fixed6(r.unknown.utility),
                                    fixed6(r.known.set_size),
                                    fixed6(r.unknown.set_size)};
  };
  std::ostringstream out;
  if (format == ReportFormat::kTsv) {
    for (std::size_t c = 0; c < std::size(kColumns); ++c) out << (c ? "\t" : "") << kColumns[c];
    out << '\n';
    for (const auto& r : reports) {
      const auto values = row_values(r);
      for (std::size_t c = 0; c < values.size(); ++c) out << (c ? "\t" : "") << values[c];
      out << '\n';
    }
    return out.str();
  }
  // Structured text: the same fields and formatting as the TSV, as JSON
  // objects with string values so that the digits are identical.
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json row;
    const auto values = row_values(r);
    for (std::size_t c = 0; c < values.size(); ++c) row[kColumns[c]] = values[c];
    j.push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

std::string emit_histogram(const SetSizeHistogram& histogram) {
  std::ostringstream out;
  out << "size\tcount_known\tcount_unknown\n";
  for (std::size_t k = 0; k < histogram.known.size(); ++k) {
    out << (k + 1) << '\t' << histogram.known[k] << '\t' << histogram.unknown[k] << '\n';
  }
  return out.str();
}

std::string emit_sweep(const SweepTable& table, ReportFormat format) {
  static const char* const kColumns[] = {"beta",         "documents", "utility",  "utility_std",
                                         "set_size",     "set_size_std", "accuracy", "coverage"};
  auto row_values = [](const SweepRow& r) {
    return std::vector<std::string>{fixed6(r.beta),     std::to_string(r.documents), fixed6(r.utility),
                                    fixed6(r.utility_std), fixed6(r.set_size),      fixed6(r.set_size_std),
                                    fixed6(r.accuracy),  fixed6(r.coverage)};
  };
  std::ostringstream out;
  if (format == ReportFormat::kTsv) {
    for (std::size_t c = 0; c < std::size(kColumns); ++c) out << (c ? "\t" : "") << kColumns[c];
    out << '\n';
    for (const auto& r : table.rows) {
      const auto values = row_values(r);
      for (std::size_t c = 0; c < values.size(); ++c) out << (c ? "\t" : "") << values[c];
      out << '\n';
    }
    return out.str();
  }
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& r : table.rows) {
    nlohmann::ordered_json row;
    const auto values = row_values(r);
    for (std::size_t c = 0; c < values.size(); ++c) row[kColumns[c]] = values[c];
    j.push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

}  // namespace settag
