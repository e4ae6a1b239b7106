#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "settag/hmm.hpp"

namespace settag::testing {

// Randomized HMM with s tags over words "w0".."w{vocab-1}". Some tags may end
// up with zero counts (inactive); suffix statistics exist for a few endings.
inline HmmModel random_hmm(std::mt19937_64& rng, std::size_t s, std::size_t vocab = 3) {
  std::vector<std::string> labels;
  for (std::size_t t = 0; t < s; ++t) labels.push_back("T" + std::to_string(t));
  HmmModel::Params p;
  p.tagset = TagSet(labels);
  std::uniform_int_distribution<int> count(0, 6), coin(0, 4);
  p.unigram.assign(s, 0);
  for (auto& c : p.unigram) c = coin(rng) == 0 ? 0 : 1 + count(rng);
  if (std::all_of(p.unigram.begin(), p.unigram.end(), [](auto c) { return c == 0; })) p.unigram[0] = 1;
  p.bigram.assign((s + 1) * s, 0);
  for (auto& c : p.bigram) c = count(rng);
  p.trigram.assign((s + 1) * (s + 1) * s, 0);
  for (auto& c : p.trigram) c = coin(rng) == 0 ? 0 : count(rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double a = unit(rng), b = unit(rng), c = unit(rng);
  const double z = a + b + c;
  p.lambdas = {a / z, b / z, 1.0 - a / z - b / z};
  if (p.lambdas[2] < 0.0) p.lambdas[2] = 0.0;
  for (std::size_t w = 0; w < vocab; ++w) {
    std::vector<std::uint64_t> e(s);
    for (auto& x : e) x = count(rng);
    p.emissions["w" + std::to_string(w)] = e;
  }
  for (const std::string suffix : {"", "x", "ax"}) {
    std::vector<std::uint64_t> e(s);
    for (auto& x : e) x = count(rng);
    p.suffixes[suffix] = e;
  }
  p.options.emission_epsilon = 0.05 + unit(rng);
  return HmmModel(std::move(p));
}

// P(t_i = t | words) by summing over all s^l tag sequences.
inline std::vector<std::vector<double>> enumerate_marginals(const HmmModel& m, const Document& doc) {
  const std::size_t s = m.tagset().size(), l = doc.size();
  std::vector<std::vector<double>> marg(l, std::vector<double>(s, 0.0));
  std::vector<std::size_t> seq(l, 0);
  double total = 0.0;
  while (true) {
    double p = 1.0;
    for (std::size_t i = 0; i < l; ++i) {
      const std::optional<TagId> p2 = i >= 2 ? std::optional<TagId>(seq[i - 2]) : std::nullopt;
      const std::optional<TagId> p1 = i >= 1 ? std::optional<TagId>(seq[i - 1]) : std::nullopt;
      p *= m.transition(p2, p1, static_cast<TagId>(seq[i])) *
           m.emission(doc.tokens[i].normalized, static_cast<TagId>(seq[i]));
    }
    total += p;
    for (std::size_t i = 0; i < l; ++i) marg[i][seq[i]] += p;
    std::size_t k = 0;
    while (k < l && ++seq[k] == s) seq[k++] = 0;
    if (k == l) break;
  }
  for (auto& row : marg) {
    for (auto& x : row) x /= total;
  }
  return marg;
}

inline Document random_words(std::mt19937_64& rng, std::size_t l, std::size_t vocab = 3) {
  static const std::vector<std::string> unknown = {"zax", "qq", "bax", "x"};
  std::uniform_int_distribution<std::size_t> pick(0, vocab + unknown.size() - 1);
  Document d{"random", {}};
  for (std::size_t i = 0; i < l; ++i) {
    const auto k = pick(rng);
    const auto w = k < vocab ? "w" + std::to_string(k) : unknown[k - vocab];
    d.tokens.push_back({w, w, std::nullopt});
  }
  return d;
}

}  // namespace settag::testing
