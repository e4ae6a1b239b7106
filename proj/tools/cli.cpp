#include "cli.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "http_server.hpp"
#include "settag/annotation.hpp"
#include "settag/error.hpp"
#include "settag/eval.hpp"
#include "settag/model_io.hpp"
#include "settag/normalize.hpp"
#include "settag/split.hpp"
#include "tagged.hpp"

namespace settag::cli {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::vector<std::string> corpus;
  std::string model;
  std::string tagger = "memm";
  double beta = 1.0;
  int scenario = 3;
  std::optional<std::size_t> target;
  std::uint64_t seed = 42;
  std::string fraction = "0.2";
  std::string splits;
  std::string save_splits;
  std::size_t max_distance = 2;
  std::size_t min_frequency = 1;
  std::string out;
  std::string format = "tsv";
  std::string histogram;
  std::string tagged;
  std::vector<double> betas{0.25, 0.5, 1.0, 2.0, 4.0};
  // Tagger hyperparameters.
  double l2 = MemmOptions{}.l2;
  std::size_t iterations = MemmOptions{}.iterations;
  double step = MemmOptions{}.step;
  std::size_t max_suffix = HmmOptions{}.max_suffix;
  std::uint64_t rare_threshold = HmmOptions{}.rare_threshold;
  double epsilon = HmmOptions{}.emission_epsilon;
  // Service.
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string log;
  std::string clusters;
  std::size_t max_tokens = ServiceOptions{}.max_tokens;
};

// Expands directories into their *.tsv files (sorted by name).
std::vector<fs::path> corpus_paths(const std::vector<std::string>& args) {
  std::vector<fs::path> paths;
  for (const auto& a : args) {
    const fs::path p(a);
    if (fs::is_directory(p)) {
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".tsv") files.push_back(e.path());
      }
      std::sort(files.begin(), files.end());
      paths.insert(paths.end(), files.begin(), files.end());
    } else {
      paths.push_back(p);
    }
  }
  if (paths.empty()) throw DataError("no corpus files given");
  return paths;
}

Corpus read_corpus(const Options& o) { return load_corpus(corpus_paths(o.corpus)); }

TaggerSpec tagger_spec(const Options& o) {
  TaggerSpec spec;
  spec.kind = parse_tagger_kind(o.tagger);
  spec.memm.l2 = o.l2;
  spec.memm.iterations = o.iterations;
  spec.memm.step = o.step;
  spec.hmm.max_suffix = o.max_suffix;
  spec.hmm.rare_threshold = o.rare_threshold;
  spec.hmm.emission_epsilon = o.epsilon;
  return spec;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("error writing " + path.string());
}

// Writes to --out when given, else to the command's output stream.
void emit(const Options& o, std::ostream& out, const std::string& content) {
  if (o.out.empty()) {
    out << content;
  } else {
    write_file(o.out, content);
  }
}

SplitSpec splits_for(const Options& o, const Corpus& corpus) {
  SplitSpec spec;
  if (!o.splits.empty()) {
    spec = parse_splits(read_file(o.splits));
    check_splits(spec, corpus);
  } else {
    spec = draw_splits(corpus, Fraction::parse(o.fraction), o.seed);
  }
  if (!o.save_splits.empty()) write_file(o.save_splits, serialize_splits(spec));
  return spec;
}

int cmd_normalize(const Options& o, std::ostream& out) {
  const auto corpus = read_corpus(o);
  const auto result = normalize_orthography(corpus, {o.max_distance, o.min_frequency});
  std::ostringstream report;
  write_cluster_report(report, result.report);
  if (o.out.empty()) {
    out << report.str();
    return kExitOk;
  }
  fs::create_directories(o.out);
  for (const auto& doc : result.corpus.documents) {
    write_file(fs::path(o.out) / (doc.name + ".tsv"), serialize_document(doc, result.corpus.tagset));
  }
  write_file(fs::path(o.out) / "clusters.tsv", report.str());
  return kExitOk;
}

int cmd_split(const Options& o, std::ostream& out) {
  const auto corpus = read_corpus(o);
  emit(o, out, serialize_splits(draw_splits(corpus, Fraction::parse(o.fraction), o.seed)));
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream&) {
  const auto corpus = read_corpus(o);
  const auto model = train_tagger(tagger_spec(o), corpus.documents, corpus.tagset);
  save_model(*model, o.out);
  return kExitOk;
}

int cmd_tag(const Options& o, std::ostream& out) {
  const auto model = load_model(fs::path(o.model));
  const auto corpus = read_corpus(o);
  const UtilityConfig cfg(o.beta, model->tagset().size());
  std::ostringstream text;
  for (const auto& doc : corpus.documents) {
    const auto post = model->posteriors(doc);
    write_tagged(text, doc, corpus.tagset, model->tagset(), post, predict_sets(post, cfg));
  }
  emit(o, out, text.str());
  return kExitOk;
}

// Evaluates `settag tag` output against its gold column.
int eval_tagged(const Options& o, std::ostream& out) {
  const auto model = load_model(fs::path(o.model));
  const auto& tags = model->tagset();
  const UtilityConfig cfg(o.beta, tags.size());
  std::ifstream in(o.tagged, std::ios::binary);
  if (!in) throw DataError("cannot read " + o.tagged);
  std::vector<EvalReport> reports;
  SetSizeHistogram histogram(tags.size());
  for (const auto& doc : parse_tagged(in, o.tagged)) {
    std::vector<PredictionSet> sets;
    std::vector<std::optional<TagId>> gold;
    std::vector<TagId> point;
    std::vector<bool> known;
    for (const auto& tok : doc.tokens) {
      PredictionSet set;
      for (const auto& c : tok.candidates) set.tags.push_back(tags.id(c.tag));
      point.push_back(set.tags.front());
      sets.push_back(std::move(set));
      gold.push_back(tok.gold ? tags.find(*tok.gold) : std::nullopt);
      known.push_back(model->knows(tok.token));
    }
    auto ev = evaluate(sets, gold, point, known, cfg);
    ev.report.document = doc.name;
    ev.report.tagger = std::string(model->kind());
    reports.push_back(std::move(ev.report));
    histogram += ev.histogram;
  }
  emit(o, out, emit_report(reports, parse_report_format(o.format)));
  if (!o.histogram.empty()) write_file(o.histogram, emit_histogram(histogram));
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const auto format = parse_report_format(o.format);
  if (!o.tagged.empty()) return eval_tagged(o, out);
  const auto corpus = read_corpus(o);
  const auto splits = splits_for(o, corpus);
  const auto evals = run_scenario(corpus, splits, tagger_spec(o), parse_scenario(o.scenario), o.beta, o.target);
  std::vector<EvalReport> reports;
  SetSizeHistogram histogram(corpus.tagset.size());
  for (const auto& ev : evals) {
    reports.push_back(ev.report);
    histogram += ev.histogram;
  }
  emit(o, out, emit_report(reports, format));
  if (!o.histogram.empty()) write_file(o.histogram, emit_histogram(histogram));
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const auto format = parse_report_format(o.format);
  const auto corpus = read_corpus(o);
  const auto splits = splits_for(o, corpus);
  emit(o, out, emit_sweep(beta_sweep(corpus, splits, tagger_spec(o), o.betas), format));
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
  std::shared_ptr<const Tagger> model;
  if (!o.model.empty()) model = load_model(fs::path(o.model));
  Corpus corpus;
  if (!o.corpus.empty()) corpus = read_corpus(o);
  Normalizer normalizer;
  if (!o.clusters.empty()) {
    std::istringstream in(read_file(o.clusters));
    normalizer = Normalizer(read_cluster_report(in, o.clusters));
  }
  AnnotationService service(model, corpus.documents, corpus.tagset, std::move(normalizer),
                            {o.max_tokens, o.beta, o.log});
  httplib::Server server;
  mount_annotation_api(server, service);
  if (!server.bind_to_port(o.host, o.port)) throw DataError("cannot listen on " + o.host + ":" + std::to_string(o.port));
  out << "serving on http://" << o.host << ":" << o.port << std::endl;
  server.listen_after_bind();
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Set-valued part-of-speech tagging", "settag"};
  app.require_subcommand(1);
  Options o;

  auto add_corpus = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("--corpus", o.corpus, "Corpus TSV files or directories")->expected(1, -1);
    if (required) opt->required();
  };
  auto add_split = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "Seed for the cut points")->capture_default_str();
    c->add_option("--fraction", o.fraction, "Test fraction, e.g. 0.2 or 1/5")->capture_default_str();
    c->add_option("--splits", o.splits, "Replay a saved split record");
    c->add_option("--save-splits", o.save_splits, "Write the split record used");
  };
  auto add_tagger = [&](CLI::App* c) {
    c->add_option("--tagger", o.tagger, "baseline | hmm | memm")->capture_default_str();
    c->add_option("--l2", o.l2, "MEMM L2 strength")->capture_default_str();
    c->add_option("--iterations", o.iterations, "MEMM gradient steps")->capture_default_str();
    c->add_option("--step", o.step, "MEMM initial step size")->capture_default_str();
    c->add_option("--suffix-length", o.max_suffix, "HMM longest suffix")->capture_default_str();
    c->add_option("--rare-threshold", o.rare_threshold, "HMM rare word frequency")->capture_default_str();
    c->add_option("--epsilon", o.epsilon, "HMM emission smoothing")->capture_default_str();
  };
  auto add_beta = [&](CLI::App* c) {
    c->add_option("--beta", o.beta, "Utility parameter")->check(CLI::Range(kMinBeta, kMaxBeta))->capture_default_str();
  };
  auto add_out = [&](CLI::App* c, const std::string& what, bool required) {
    auto* opt = c->add_option("--out", o.out, what);
    if (required) opt->required();
  };
  auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "tsv | json")->capture_default_str();
  };

  auto* normalize = app.add_subcommand("normalize", "Cluster spelling variants and normalize the corpus");
  add_corpus(normalize, true);
  normalize->add_option("--max-distance", o.max_distance, "Levenshtein cutoff")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  normalize->add_option("--min-frequency", o.min_frequency, "Minimum frequency of a cluster seed")
      ->capture_default_str();
  add_out(normalize, "Output directory (normalized files and clusters.tsv)", false);

  auto* split = app.add_subcommand("split", "Draw and print a split record");
  add_corpus(split, true);
  add_split(split);
  add_out(split, "Output file", false);

  auto* train = app.add_subcommand("train", "Train a tagger on whole documents");
  add_corpus(train, true);
  add_tagger(train);
  add_out(train, "Model file", true);

  auto* tag = app.add_subcommand("tag", "Tag documents with prediction sets");
  add_corpus(tag, true);
  tag->add_option("--model", o.model, "Model file")->required();
  add_beta(tag);
  add_out(tag, "Output file", false);

  auto* eval = app.add_subcommand("eval", "Evaluate a scenario, or a tagged file against its gold column");
  add_corpus(eval, false);
  add_tagger(eval);
  add_split(eval);
  add_beta(eval);
  add_format(eval);
  eval->add_option("--scenario", o.scenario, "1 in-domain, 2 leave-one-out, 3 whole corpus")
      ->check(CLI::Range(1, 3))
      ->capture_default_str();
  eval->add_option("--target", o.target, "Document index for scenarios 1 and 2 (default: all)");
  eval->add_option("--tagged", o.tagged, "Output of 'settag tag' to evaluate");
  eval->add_option("--model", o.model, "Model used for --tagged");
  eval->add_option("--histogram", o.histogram, "Write the set-size histogram here");
  add_out(eval, "Report file", false);

  auto* sweep = app.add_subcommand("sweep", "Scenario 3 over a grid of beta values");
  add_corpus(sweep, true);
  add_tagger(sweep);
  add_split(sweep);
  add_format(sweep);
  sweep->add_option("--betas", o.betas, "Strictly increasing beta grid")->delimiter(',')->capture_default_str();
  add_out(sweep, "Report file", false);

  auto* serve = app.add_subcommand("serve", "Run the annotation HTTP service");
  add_corpus(serve, false);
  add_beta(serve);
  serve->add_option("--model", o.model, "Model file");
  serve->add_option("--clusters", o.clusters, "Cluster report for normalization lookup");
  serve->add_option("--log", o.log, "Annotation log (newline-delimited JSON)");
  serve->add_option("--host", o.host)->capture_default_str();
  serve->add_option("--port", o.port)->capture_default_str();
  serve->add_option("--max-tokens", o.max_tokens, "Request size limit")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*normalize) return cmd_normalize(o, out);
    if (*split) return cmd_split(o, out);
    if (*train) return cmd_train(o, out);
    if (*tag) return cmd_tag(o, out);
    if (*eval) {
      if (o.tagged.empty() && o.corpus.empty()) throw std::invalid_argument("eval needs --corpus or --tagged");
      if (!o.tagged.empty() && o.model.empty()) throw std::invalid_argument("--tagged requires --model");
      return cmd_eval(o, out);
    }
    if (*sweep) return cmd_sweep(o, out);
    if (*serve) return cmd_serve(o, out);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace settag::cli
