#include "settag/split.hpp"

#include <nlohmann/json.hpp>

#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "settag/error.hpp"

namespace settag {

namespace {

constexpr int kSplitFormatVersion = 1;

// Uniform integer in [0, n) by rejection; unlike std::uniform_int_distribution
// the result is identical across standard library implementations.
std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % n;
}

constexpr std::int64_t kMaxDenominator = 1'000'000'000;

}  // namespace

Fraction Fraction::parse(std::string_view text) {
  auto fail = [&]() -> Fraction {
    throw std::invalid_argument("invalid fraction '" + std::string(text) + "'; expected a value in (0,1)");
  };
  Fraction f;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    try {
      std::size_t used = 0;
      const std::string a(text.substr(0, slash)), b(text.substr(slash + 1));
      f.num = std::stoll(a, &used);
      if (used != a.size()) return fail();
      f.den = std::stoll(b, &used);
      if (used != b.size()) return fail();
    } catch (const std::logic_error&) {
      return fail();
    }
  } else {
    std::string_view digits = text;
    if (!digits.empty() && digits.front() == '0') digits.remove_prefix(1);
    if (digits.empty() || digits.front() != '.' || digits.size() < 2 || digits.size() > 10) return fail();
    digits.remove_prefix(1);
    f.num = 0;
    f.den = 1;
    for (char c : digits) {
      if (c < '0' || c > '9') return fail();
      f.num = f.num * 10 + (c - '0');
      f.den *= 10;
    }
  }
  if (f.den <= 0 || f.num <= 0 || f.num >= f.den) return fail();
  const auto g = std::gcd(f.num, f.den);
  f.num /= g;
  f.den /= g;
  if (f.den > kMaxDenominator) return fail();
  return f;
}

std::size_t Fraction::floor_times(std::size_t n) const {
  // n*num/den without overflowing: split n into quotient and remainder by den.
  const auto d = static_cast<std::uint64_t>(den), k = static_cast<std::uint64_t>(num);
  const std::uint64_t q = n / d, r = n % d;
  return static_cast<std::size_t>(q * k + (r * k) / d);
}

std::string Fraction::str() const { return std::to_string(num) + "/" + std::to_string(den); }

std::size_t test_length(std::size_t length, Fraction fraction) { return fraction.floor_times(length); }

std::size_t max_cut(std::size_t length, Fraction fraction) {
  const Fraction rest{fraction.den - fraction.num, fraction.den};
  return rest.floor_times(length);
}

SplitSpec draw_splits(const Corpus& corpus, Fraction fraction, std::uint64_t seed) {
  SplitSpec spec;
  spec.test_fraction = fraction;
  spec.seed = seed;
  std::mt19937_64 engine(seed);
  for (const auto& doc : corpus.documents) {
    const auto l = doc.size();
    const auto hi = max_cut(l, fraction);
    if (test_length(l, fraction) < 1 || hi < 1) {
      throw DataError("document '" + doc.name + "' has " + std::to_string(l) +
                      " tokens, too few for a non-empty test segment");
    }
    spec.documents.push_back(doc.name);
    spec.lengths.push_back(l);
    spec.cuts.push_back(1 + uniform_below(engine, hi));
  }
  return spec;
}

void check_splits(const SplitSpec& spec, const Corpus& corpus) {
  if (spec.cuts.size() != corpus.documents.size() || spec.documents.size() != spec.cuts.size() ||
      spec.lengths.size() != spec.cuts.size()) {
    throw DataError("split record covers " + std::to_string(spec.cuts.size()) + " documents, corpus has " +
                    std::to_string(corpus.documents.size()));
  }
  for (std::size_t j = 0; j < spec.cuts.size(); ++j) {
    const auto& doc = corpus.documents[j];
    if (spec.documents[j] != doc.name || spec.lengths[j] != doc.size()) {
      throw DataError("split record entry " + std::to_string(j) + " (" + spec.documents[j] +
                      ") does not match document '" + doc.name + "'");
    }
  }
}

std::string serialize_splits(const SplitSpec& spec) {
  nlohmann::ordered_json j;
  j["format_version"] = kSplitFormatVersion;
  j["test_fraction"] = spec.test_fraction.str();
  j["seed"] = spec.seed;
  auto& docs = j["documents"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < spec.cuts.size(); ++i) {
    docs.push_back({{"name", spec.documents[i]}, {"tokens", spec.lengths[i]}, {"cut", spec.cuts[i]}});
  }
  return j.dump(2) + "\n";
}

SplitSpec parse_splits(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const int version = j.at("format_version").get<int>();
    if (version != kSplitFormatVersion) {
      throw FormatVersionError("split record format version " + std::to_string(version) + ", expected " +
                               std::to_string(kSplitFormatVersion));
    }
    SplitSpec spec;
    spec.test_fraction = Fraction::parse(j.at("test_fraction").get<std::string>());
    spec.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& d : j.at("documents")) {
      spec.documents.push_back(d.at("name").get<std::string>());
      spec.lengths.push_back(d.at("tokens").get<std::size_t>());
      spec.cuts.push_back(d.at("cut").get<std::size_t>());
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed split record: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("malformed split record: ") + e.what());
  }
}

DocumentSplit split_document(const Document& doc, Fraction fraction, std::size_t cut) {
  const auto l = doc.size();
  const auto n_test = test_length(l, fraction);
  if (n_test < 1) {
    throw DataError("document '" + doc.name + "' (" + std::to_string(l) + " tokens) too short to split");
  }
  if (cut < 1 || cut > max_cut(l, fraction)) {
    throw DataError("cut point " + std::to_string(cut) + " out of range [1, " +
                    std::to_string(max_cut(l, fraction)) + "] for document '" + doc.name + "'");
  }
  DocumentSplit out;
  out.train.name = doc.name;
  out.test.name = doc.name;
  for (std::size_t i = 0; i < l; ++i) {
    if (i >= cut && i < cut + n_test) {
      out.test.tokens.push_back(doc.tokens[i]);
      out.test_indices.push_back(i);
    } else {
      out.train.tokens.push_back(doc.tokens[i]);
      out.train_indices.push_back(i);
    }
  }
  return out;
}

Scenario parse_scenario(int value) {
  if (value < 1 || value > 3) throw std::invalid_argument("scenario must be 1, 2 or 3");
  return static_cast<Scenario>(value);
}

std::vector<Document> ScenarioData::train_documents() const {
  std::vector<Document> docs;
  docs.reserve(train.size());
  for (const auto& s : train) docs.push_back(s.tokens);
  return docs;
}

ScenarioData assemble_scenario(const Corpus& corpus, const SplitSpec& splits, Scenario scenario,
                               std::optional<std::size_t> target) {
  check_splits(splits, corpus);
  const auto n = corpus.documents.size();
  if (scenario != Scenario::kWholeCorpus) {
    if (!target) throw std::invalid_argument("scenarios 1 and 2 require a target document");
  }
  if (target && *target >= n) {
    throw std::invalid_argument("target document " + std::to_string(*target) + " out of range (N=" +
                                std::to_string(n) + ")");
  }

  auto split = [&](std::size_t j) {
    return split_document(corpus.documents[j], splits.test_fraction, splits.cuts[j]);
  };
  auto train_segment = [](std::size_t j, DocumentSplit& s) {
    return Segment{j, std::move(s.train), std::move(s.train_indices)};
  };
  auto test_segment = [](std::size_t j, DocumentSplit& s) {
    return Segment{j, std::move(s.test), std::move(s.test_indices)};
  };

  ScenarioData data;
  switch (scenario) {
    case Scenario::kInDomain: {
      auto s = split(*target);
      data.train.push_back(train_segment(*target, s));
      data.test.push_back(test_segment(*target, s));
      break;
    }
    case Scenario::kTransfer: {
      for (std::size_t j = 0; j < n; ++j) {
        auto s = split(j);
        if (j == *target) {
          data.test.push_back(test_segment(j, s));
        } else {
          data.train.push_back(train_segment(j, s));
        }
      }
      break;
    }
    case Scenario::kWholeCorpus: {
      for (std::size_t j = 0; j < n; ++j) {
        auto s = split(j);
        data.train.push_back(train_segment(j, s));
        data.test.push_back(test_segment(j, s));
      }
      break;
    }
  }
  return data;
}

}  // namespace settag
