#include "settag/model_io.hpp"

#include <fstream>
#include <stdexcept>

#include "detail/json_io.hpp"
#include "settag/baseline.hpp"
#include "settag/error.hpp"

namespace settag {

namespace {

using detail::Json;

template <typename Map>
Map read_count_table(const Json& j) {
  Map out;
  for (const auto& row : j) {
    out.emplace(row.at(0).get<std::string>(), row.at(1).get<std::vector<std::uint64_t>>());
  }
  return out;
}

std::unique_ptr<Tagger> load_baseline(const Json& j) {
  return std::make_unique<BaselineModel>(
      detail::read_tagset(j),
      read_count_table<std::map<std::string, std::vector<std::uint64_t>, std::less<>>>(j.at("joint_counts")));
}

std::unique_ptr<Tagger> load_hmm(const Json& j) {
  HmmModel::Params p;
  p.tagset = detail::read_tagset(j);
  const auto& o = j.at("options");
  p.options.max_suffix = o.at("max_suffix").get<std::size_t>();
  p.options.rare_threshold = o.at("rare_threshold").get<std::uint64_t>();
  p.options.emission_epsilon = o.at("emission_epsilon").get<double>();
  p.lambdas = j.at("lambdas").get<std::array<double, 3>>();
  p.unigram = j.at("unigram").get<std::vector<std::uint64_t>>();
  p.bigram = j.at("bigram").get<std::vector<std::uint64_t>>();
  p.trigram = j.at("trigram").get<std::vector<std::uint64_t>>();
  p.emissions = read_count_table<decltype(p.emissions)>(j.at("emissions"));
  p.suffixes = read_count_table<decltype(p.suffixes)>(j.at("suffixes"));
  return std::make_unique<HmmModel>(std::move(p));
}

std::unique_ptr<Tagger> load_memm(const Json& j) {
  MemmModel::Params p;
  p.tagset = detail::read_tagset(j);
  const auto& o = j.at("options");
  p.options.features.word_window = o.at("word_window").get<std::size_t>();
  p.options.features.max_affix = o.at("max_affix").get<std::size_t>();
  p.options.features.use_tags = o.at("use_tags").get<bool>();
  p.options.l2 = o.at("l2").get<double>();
  p.options.iterations = o.at("iterations").get<std::size_t>();
  p.options.step = o.at("step").get<double>();
  p.support = j.at("support").get<std::vector<bool>>();
  const auto& features = j.at("features");
  p.feature_names.resize(features.size());
  std::vector<bool> seen(features.size(), false);
  for (const auto& row : features) {
    const auto id = row.at(1).get<std::size_t>();
    if (id >= features.size() || seen[id]) throw DataError("memm: invalid feature id " + std::to_string(id));
    seen[id] = true;
    p.feature_names[id] = row.at(0).get<std::string>();
  }
  p.weights = j.at("weights").get<std::vector<double>>();
  for (const auto& w : j.at("vocabulary")) p.vocabulary.insert(w.get<std::string>());
  return std::make_unique<MemmModel>(std::move(p));
}

}  // namespace

TaggerKind parse_tagger_kind(std::string_view name) {
  if (name == "baseline") return TaggerKind::kBaseline;
  if (name == "hmm") return TaggerKind::kHmm;
  if (name == "memm") return TaggerKind::kMemm;
  throw std::invalid_argument("unknown tagger '" + std::string(name) + "' (expected baseline, hmm or memm)");
}

std::string_view to_string(TaggerKind kind) {
  switch (kind) {
    case TaggerKind::kBaseline:
      return "baseline";
    case TaggerKind::kHmm:
      return "hmm";
    case TaggerKind::kMemm:
      return "memm";
  }
  return "?";
}

std::unique_ptr<Tagger> train_tagger(const TaggerSpec& spec, const std::vector<Document>& train,
                                     const TagSet& tagset) {
  switch (spec.kind) {
    case TaggerKind::kBaseline:
      return std::make_unique<BaselineModel>(BaselineModel::train(train, tagset));
    case TaggerKind::kHmm:
      return std::make_unique<HmmModel>(HmmModel::train(train, tagset, spec.hmm));
    case TaggerKind::kMemm:
      return std::make_unique<MemmModel>(MemmModel::train(train, tagset, spec.memm));
  }
  throw std::invalid_argument("unknown tagger kind");
}

std::unique_ptr<Tagger> load_model(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
  try {
    const auto version = j.at("format_version").get<int>();
    if (version != detail::kModelFormatVersion) {
      throw FormatVersionError("model format version " + std::to_string(version) + " is not supported (expected " +
                               std::to_string(detail::kModelFormatVersion) + ")");
    }
    const auto kind = parse_tagger_kind(j.at("kind").get<std::string>());
    switch (kind) {
      case TaggerKind::kBaseline:
        return load_baseline(j);
      case TaggerKind::kHmm:
        return load_hmm(j);
      case TaggerKind::kMemm:
        return load_memm(j);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed model file: ") + e.what());
  }
  throw DataError("malformed model file");
}

std::unique_ptr<Tagger> load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read model file " + path.string());
  return load_model(in);
}

void save_model(const Tagger& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write model file " + path.string());
  model.save(out);
  if (!out) throw DataError("error writing model file " + path.string());
}

}  // namespace settag
