#include "settag/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "detail/json_io.hpp"
#include "settag/error.hpp"
#include "settag/utf8.hpp"

namespace settag {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_or_neg_inf(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

// log(sum(exp(xs))) over a strided range.
template <typename Fn>
double log_sum_exp(std::size_t n, Fn&& term) {
  double hi = kNegInf;
  for (std::size_t k = 0; k < n; ++k) hi = std::max(hi, term(k));
  if (hi == kNegInf) return kNegInf;
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += std::exp(term(k) - hi);
  return hi + std::log(sum);
}

std::u32string folded_codepoints(std::string_view word) { return utf8::fold(utf8::decode(word)); }

}  // namespace

HmmModel HmmModel::train(const std::vector<Document>& docs, const TagSet& tagset, const HmmOptions& options) {
  const std::size_t s = tagset.size();
  const std::size_t b = s;  // boundary slot
  Params p;
  p.tagset = tagset;
  p.options = options;
  p.unigram.assign(s, 0);
  p.bigram.assign((s + 1) * s, 0);
  p.trigram.assign((s + 1) * (s + 1) * s, 0);

  bool any = false;
  for (const auto& doc : docs) {
    // A token without gold tag breaks the sequence; counting restarts after it.
    std::size_t prev2 = b, prev1 = b;
    for (const auto& tok : doc.tokens) {
      if (!tok.gold) {
        prev2 = prev1 = b;
        continue;
      }
      const std::size_t t = *tok.gold;
      ++p.unigram[t];
      ++p.bigram[prev1 * s + t];
      ++p.trigram[(prev2 * (s + 1) + prev1) * s + t];
      auto& e = p.emissions[tok.normalized];
      if (e.empty()) e.assign(s, 0);
      ++e[t];
      prev2 = prev1;
      prev1 = t;
      any = true;
    }
  }
  if (!any) throw DataError("hmm: empty training data");

  std::vector<std::uint64_t> ctx1(s + 1, 0), ctx2((s + 1) * (s + 1), 0);
  for (std::size_t x = 0; x <= s; ++x) {
    for (std::size_t t = 0; t < s; ++t) ctx1[x] += p.bigram[x * s + t];
  }
  for (std::size_t xy = 0; xy < (s + 1) * (s + 1); ++xy) {
    for (std::size_t t = 0; t < s; ++t) ctx2[xy] += p.trigram[xy * s + t];
  }
  std::uint64_t total = 0;
  for (auto c : p.unigram) total += c;

  // Deleted interpolation: each trigram votes, with its count, for the
  // estimator that best predicts it with that trigram held out.
  std::array<double, 3> votes{0.0, 0.0, 0.0};
  auto held_out = [](std::uint64_t num, std::uint64_t den) {
    return den > 1 ? (static_cast<double>(num) - 1.0) / (static_cast<double>(den) - 1.0) : 0.0;
  };
  for (std::size_t x = 0; x <= s; ++x) {
    for (std::size_t y = 0; y <= s; ++y) {
      for (std::size_t t = 0; t < s; ++t) {
        const auto f = p.trigram[(x * (s + 1) + y) * s + t];
        if (f == 0) continue;
        const std::array<double, 3> c{held_out(p.unigram[t], total), held_out(p.bigram[y * s + t], ctx1[y]),
                                      held_out(f, ctx2[x * (s + 1) + y])};
        std::size_t best = 0;
        for (std::size_t k = 1; k < 3; ++k) {
          if (c[k] > c[best]) best = k;
        }
        votes[best] += static_cast<double>(f);
      }
    }
  }
  const double sum = votes[0] + votes[1] + votes[2];
  if (sum > 0.0) {
    p.lambdas = {votes[0] / sum, votes[1] / sum, votes[2] / sum};
  } else {
    p.lambdas = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  }

  for (const auto& [word, counts] : p.emissions) {
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    if (n > options.rare_threshold) continue;
    const auto cps = folded_codepoints(word);
    for (std::size_t len = 0; len <= std::min(options.max_suffix, cps.size()); ++len) {
      auto& sc = p.suffixes[utf8::encode(cps.substr(cps.size() - len))];
      if (sc.empty()) sc.assign(s, 0);
      for (std::size_t t = 0; t < s; ++t) sc[t] += counts[t];
    }
  }
  return HmmModel(std::move(p));
}

HmmModel::HmmModel(Params params) : p_(std::move(params)) {
  const std::size_t s = p_.tagset.size();
  if (p_.unigram.size() != s || p_.bigram.size() != (s + 1) * s || p_.trigram.size() != (s + 1) * (s + 1) * s) {
    throw DataError("hmm: transition count tables do not match the tag set");
  }
  for (const auto* table : {&p_.emissions, &p_.suffixes}) {
    for (const auto& [key, counts] : *table) {
      if (counts.size() != s) throw DataError("hmm: count vector for '" + key + "' has wrong length");
    }
  }
  const double lsum = p_.lambdas[0] + p_.lambdas[1] + p_.lambdas[2];
  if (std::abs(lsum - 1.0) > 1e-9 || *std::min_element(p_.lambdas.begin(), p_.lambdas.end()) < 0.0) {
    throw DataError("hmm: interpolation weights must be non-negative and sum to 1");
  }

  support_.assign(s, false);
  for (std::size_t t = 0; t < s; ++t) {
    total_ += p_.unigram[t];
    support_[t] = p_.unigram[t] > 0;
    if (support_[t]) active_.push_back(static_cast<TagId>(t));
  }
  if (total_ == 0) throw DataError("hmm: model has no training counts");
  const double m = static_cast<double>(active_.size());

  if (active_.size() > 1) {
    double var = 0.0;
    for (auto t : active_) {
      const double d = static_cast<double>(p_.unigram[t]) / static_cast<double>(total_) - 1.0 / m;
      var += d * d;
    }
    theta_ = std::sqrt(var / (m - 1.0));
  }

  const double eps = p_.options.emission_epsilon;
  rare_prior_.assign(s, 0.0);
  const auto rare = p_.suffixes.find(std::string_view{});
  const auto& base = rare != p_.suffixes.end() ? rare->second : p_.unigram;
  std::uint64_t base_total = 0;
  for (auto t : active_) base_total += base[t];
  for (auto t : active_) {
    rare_prior_[t] = (static_cast<double>(base[t]) + eps) / (static_cast<double>(base_total) + eps * m);
  }

  std::vector<double> ctx1(s + 1, 0.0), ctx2((s + 1) * (s + 1), 0.0);
  for (std::size_t x = 0; x <= s; ++x) {
    for (std::size_t t = 0; t < s; ++t) ctx1[x] += static_cast<double>(p_.bigram[x * s + t]);
  }
  for (std::size_t xy = 0; xy < (s + 1) * (s + 1); ++xy) {
    for (std::size_t t = 0; t < s; ++t) ctx2[xy] += static_cast<double>(p_.trigram[xy * s + t]);
  }
  log_trans_.assign((s + 1) * (s + 1) * s, kNegInf);
  for (std::size_t x = 0; x <= s; ++x) {
    for (std::size_t y = 0; y <= s; ++y) {
      for (std::size_t t = 0; t < s; ++t) {
        // Unseen contexts back off to the next lower order so that every
        // conditional stays normalized.
        const double p1 = static_cast<double>(p_.unigram[t]) / static_cast<double>(total_);
        const double p2 = ctx1[y] > 0.0 ? static_cast<double>(p_.bigram[y * s + t]) / ctx1[y] : p1;
        const double c2 = ctx2[x * (s + 1) + y];
        const double p3 = c2 > 0.0 ? static_cast<double>(p_.trigram[(x * (s + 1) + y) * s + t]) / c2 : p2;
        const double prob = p_.lambdas[0] * p1 + p_.lambdas[1] * p2 + p_.lambdas[2] * p3;
        log_trans_[(x * (s + 1) + y) * s + t] = log_or_neg_inf(prob);
      }
    }
  }
}

double HmmModel::transition(std::optional<TagId> prev2, std::optional<TagId> prev1, TagId t) const {
  const std::size_t s = p_.tagset.size();
  const std::size_t x = prev2 ? *prev2 : bos();
  const std::size_t y = prev1 ? *prev1 : bos();
  return std::exp(log_trans_.at((x * (s + 1) + y) * s + t));
}

double HmmModel::emission(std::string_view word, TagId t) const { return emission_row(word).at(t); }

std::vector<double> HmmModel::emission_row(std::string_view word) const {
  auto it = p_.emissions.find(word);
  if (it == p_.emissions.end()) return unknown_emission(word);
  const std::size_t s = p_.tagset.size();
  const double eps = p_.options.emission_epsilon;
  const double vocab = static_cast<double>(p_.emissions.size());
  std::vector<double> row(s, 0.0);
  for (auto t : active_) {
    row[t] = (static_cast<double>(it->second[t]) + eps) / (static_cast<double>(p_.unigram[t]) + eps * (vocab + 1.0));
  }
  return row;
}

std::vector<double> HmmModel::unknown_emission(std::string_view word) const {
  const std::size_t s = p_.tagset.size();
  const auto cps = folded_codepoints(word);
  std::vector<double> prob = rare_prior_;
  for (std::size_t len = 1; len <= std::min(p_.options.max_suffix, cps.size()); ++len) {
    auto it = p_.suffixes.find(utf8::encode(cps.substr(cps.size() - len)));
    if (it == p_.suffixes.end()) break;
    std::uint64_t n = 0;
    for (auto t : active_) n += it->second[t];
    if (n == 0) break;
    for (auto t : active_) {
      const double mle = static_cast<double>(it->second[t]) / static_cast<double>(n);
      prob[t] = (mle + theta_ * prob[t]) / (1.0 + theta_);
    }
  }
  std::vector<double> row(s, 0.0);
  for (auto t : active_) row[t] = prob[t] / (static_cast<double>(p_.unigram[t]) / static_cast<double>(total_));
  return row;
}

bool HmmModel::knows(std::string_view word) const { return p_.emissions.find(word) != p_.emissions.end(); }

std::vector<Posterior> HmmModel::posteriors(const Document& doc) const {
  const std::size_t s = p_.tagset.size();
  const std::size_t l = doc.size();
  const std::size_t m = active_.size();
  const std::size_t bnd = m;  // local boundary slot
  std::vector<Posterior> out;
  out.reserve(l);
  if (l == 0) return out;

  // Local transition table over active tags: lt[(x*(m+1)+y)*m + z].
  std::vector<double> lt((m + 1) * (m + 1) * m);
  auto global = [&](std::size_t local) { return local == bnd ? s : static_cast<std::size_t>(active_[local]); };
  for (std::size_t x = 0; x <= m; ++x) {
    for (std::size_t y = 0; y <= m; ++y) {
      for (std::size_t z = 0; z < m; ++z) {
        lt[(x * (m + 1) + y) * m + z] = log_trans_[(global(x) * (s + 1) + global(y)) * s + active_[z]];
      }
    }
  }
  auto trans = [&](std::size_t x, std::size_t y, std::size_t z) { return lt[(x * (m + 1) + y) * m + z]; };

  std::vector<double> em(l * m);
  for (std::size_t i = 0; i < l; ++i) {
    const auto row = emission_row(doc.tokens[i].normalized);
    for (std::size_t z = 0; z < m; ++z) em[i * m + z] = log_or_neg_inf(row[active_[z]]);
  }

  // alpha/beta over pair states (previous tag, current tag), previous in 0..m.
  const std::size_t width = (m + 1) * m;
  std::vector<double> alpha(l * width, kNegInf), beta(l * width, 0.0);
  auto at = [&](std::vector<double>& v, std::size_t i, std::size_t y, std::size_t z) -> double& {
    return v[i * width + y * m + z];
  };

  for (std::size_t z = 0; z < m; ++z) at(alpha, 0, bnd, z) = trans(bnd, bnd, z) + em[z];
  for (std::size_t i = 1; i < l; ++i) {
    for (std::size_t y = 0; y < m; ++y) {
      for (std::size_t z = 0; z < m; ++z) {
        at(alpha, i, y, z) = em[i * m + z] + log_sum_exp(m + 1, [&](std::size_t x) {
                               return at(alpha, i - 1, x, y) + trans(x, y, z);
                             });
      }
    }
  }
  for (std::size_t i = l - 1; i-- > 0;) {
    for (std::size_t y = 0; y <= m; ++y) {
      for (std::size_t z = 0; z < m; ++z) {
        at(beta, i, y, z) = log_sum_exp(m, [&](std::size_t w) {
          return trans(y, z, w) + em[(i + 1) * m + w] + at(beta, i + 1, z, w);
        });
      }
    }
  }

  for (std::size_t i = 0; i < l; ++i) {
    std::vector<double> score(m);
    for (std::size_t z = 0; z < m; ++z) {
      score[z] = log_sum_exp(m + 1, [&](std::size_t y) { return at(alpha, i, y, z) + at(beta, i, y, z); });
    }
    const double hi = *std::max_element(score.begin(), score.end());
    if (!std::isfinite(hi)) throw Error("hmm: document has zero probability under the model");
    std::vector<double> probs(s, 0.0);
    for (std::size_t z = 0; z < m; ++z) probs[active_[z]] = std::exp(score[z] - hi);
    out.push_back(normalize(std::move(probs), support_));
  }
  return out;
}

void HmmModel::save(std::ostream& out) const {
  auto j = detail::model_header(kind(), p_.tagset);
  j["options"] = {{"max_suffix", p_.options.max_suffix},
                  {"rare_threshold", p_.options.rare_threshold},
                  {"emission_epsilon", p_.options.emission_epsilon}};
  j["lambdas"] = p_.lambdas;
  j["unigram"] = p_.unigram;
  j["bigram"] = p_.bigram;
  j["trigram"] = p_.trigram;
  auto& em = j["emissions"] = detail::Json::array();
  for (const auto& [w, c] : p_.emissions) em.push_back({w, c});
  auto& sf = j["suffixes"] = detail::Json::array();
  for (const auto& [w, c] : p_.suffixes) sf.push_back({w, c});
  out << j.dump(1) << '\n';
}

}  // namespace settag
