#include "settag/memm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "detail/json_io.hpp"
#include "settag/error.hpp"

namespace settag {

namespace {

// Softmax of `scores` restricted to `support`, written into `probs`.
// Returns log-sum-exp of the supported scores.
double softmax(const std::vector<double>& scores, const std::vector<bool>& support, std::vector<double>& probs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < scores.size(); ++t) {
    if (support[t]) hi = std::max(hi, scores[t]);
  }
  double sum = 0.0;
  probs.assign(scores.size(), 0.0);
  for (std::size_t t = 0; t < scores.size(); ++t) {
    if (!support[t]) continue;
    probs[t] = std::exp(scores[t] - hi);
    sum += probs[t];
  }
  for (auto& p : probs) p /= sum;
  return hi + std::log(sum);
}

void accumulate_scores(std::span<const double> w, std::size_t s, const FeatureVector& x, std::vector<double>& out) {
  out.assign(s, 0.0);
  for (auto f : x.ids) {
    const double* row = w.data() + static_cast<std::size_t>(f) * s;
    for (std::size_t t = 0; t < s; ++t) out[t] += row[t];
  }
}

std::vector<ContextTag> gold_context(const Document& doc) {
  std::vector<ContextTag> tags;
  tags.reserve(doc.size());
  for (const auto& tok : doc.tokens) tags.push_back(tok.gold ? ContextTag{*tok.gold} : kPlaceholderTag);
  return tags;
}

}  // namespace

double memm_objective(std::span<const double> weights, std::size_t num_tags, const std::vector<bool>& support,
                      const std::vector<TrainingExample>& examples, double l2, std::vector<double>* gradient) {
  if (gradient) gradient->assign(weights.size(), 0.0);
  double loss = 0.0;
  std::vector<double> scores, probs;
  const double inv_n = examples.empty() ? 0.0 : 1.0 / static_cast<double>(examples.size());
  for (const auto& ex : examples) {
    accumulate_scores(weights, num_tags, ex.x, scores);
    const double lse = softmax(scores, support, probs);
    loss += (lse - scores[ex.y]) * inv_n;
    if (!gradient) continue;
    probs[ex.y] -= 1.0;
    for (auto f : ex.x.ids) {
      double* row = gradient->data() + static_cast<std::size_t>(f) * num_tags;
      for (std::size_t t = 0; t < num_tags; ++t) row[t] += probs[t] * inv_n;
    }
  }
  double sq = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    sq += weights[k] * weights[k];
    if (gradient) (*gradient)[k] += l2 * inv_n * weights[k];
  }
  return loss + 0.5 * l2 * inv_n * sq;
}

MemmModel MemmModel::train(const std::vector<Document>& docs, const TagSet& tagset, const MemmOptions& options,
                           std::vector<double>* losses) {
  const std::size_t s = tagset.size();
  Params p;
  p.tagset = tagset;
  p.options = options;
  p.support.assign(s, false);

  FeatureIndex index;
  std::vector<std::pair<const Document*, std::size_t>> positions;
  for (const auto& doc : docs) {
    const auto context = gold_context(doc);
    for (std::size_t i = 0; i < doc.size(); ++i) {
      p.vocabulary.insert(doc.tokens[i].normalized);
      if (!doc.tokens[i].gold) continue;
      p.support.at(*doc.tokens[i].gold) = true;
      for (const auto& name : feature_strings(doc, i, context_at(context, i), tagset, options.features)) {
        index.add(name);
      }
      positions.emplace_back(&doc, i);
    }
  }
  if (positions.empty()) throw DataError("memm: empty training data");

  std::vector<TrainingExample> examples;
  examples.reserve(positions.size());
  for (const auto& doc : docs) {
    const auto context = gold_context(doc);
    const DocumentFeatures features(index, doc, tagset, options.features);
    for (std::size_t i = 0; i < doc.size(); ++i) {
      if (!doc.tokens[i].gold) continue;
      examples.push_back({features.at(i, context_at(context, i)), *doc.tokens[i].gold});
    }
  }

  // Per-feature step scale N / count(f). A feature seen in few examples has a
  // gradient of order count(f)/N, so plain steps would leave rare words
  // untrained within a few hundred iterations.
  std::vector<double> scale(index.size(), 0.0);
  for (const auto& ex : examples) {
    for (auto f : ex.x.ids) scale[f] += 1.0;
  }
  for (auto& c : scale) c = c > 0.0 ? static_cast<double>(examples.size()) / c : 1.0;

  std::vector<double> w(index.size() * s, 0.0), trial(w.size()), grad, trial_grad;
  double loss = memm_objective(w, s, p.support, examples, options.l2, &grad);
  if (!std::isfinite(loss)) throw TrainingError("memm: non-finite initial loss");
  if (losses) losses->assign(1, loss);
  double step = options.step;
  for (std::size_t it = 0; it < options.iterations; ++it) {
    for (std::size_t k = 0; k < w.size(); ++k) trial[k] = w[k] - step * scale[k / s] * grad[k];
    const double next = memm_objective(trial, s, p.support, examples, options.l2, &trial_grad);
    if (!std::isfinite(next)) {
      std::ostringstream msg;
      msg << "memm: non-finite loss at iteration " << it << " (step " << step << ", previous loss " << loss << ")";
      throw TrainingError(msg.str());
    }
    if (next > loss) {
      step *= 0.5;
    } else {
      w.swap(trial);
      grad.swap(trial_grad);
      loss = next;
    }
    if (losses) losses->push_back(loss);
  }

  p.feature_names = index.names();
  p.weights = std::move(w);
  return MemmModel(std::move(p));
}

MemmModel::MemmModel(Params params) : p_(std::move(params)) {
  const std::size_t s = p_.tagset.size();
  if (p_.support.size() != s) throw DataError("memm: support mask does not match the tag set");
  if (std::none_of(p_.support.begin(), p_.support.end(), [](bool b) { return b; })) {
    throw DataError("memm: empty support");
  }
  for (const auto& name : p_.feature_names) {
    if (index_.add(name) + 1 != index_.size()) throw DataError("memm: duplicate feature '" + name + "'");
  }
  if (p_.weights.size() != index_.size() * s) throw DataError("memm: weight matrix has wrong shape");
  for (double x : p_.weights) {
    if (!std::isfinite(x)) throw DataError("memm: non-finite weight");
  }
}

std::vector<double> MemmModel::scores(const FeatureVector& x) const {
  std::vector<double> out;
  accumulate_scores(p_.weights, p_.tagset.size(), x, out);
  return out;
}

Posterior MemmModel::posterior(const FeatureVector& x) const {
  Posterior p;
  softmax(scores(x), p_.support, p.probs);
  return p;
}

TagId MemmModel::argmax(const FeatureVector& x) const {
  const auto sc = scores(x);
  std::size_t best = sc.size();
  for (std::size_t t = 0; t < sc.size(); ++t) {
    if (p_.support[t] && (best == sc.size() || sc[t] > sc[best])) best = t;
  }
  return static_cast<TagId>(best);
}

std::vector<TagId> MemmModel::first_pass(const Document& doc) const {
  const DocumentFeatures features(index_, doc, p_.tagset, p_.options.features);
  const std::size_t l = doc.size();
  std::vector<ContextTag> sweep(l, kPlaceholderTag);
  for (std::size_t i = 0; i < l; ++i) sweep[i] = argmax(features.at(i, context_at(sweep, i)));

  std::vector<ContextTag> second(sweep);
  for (std::size_t i = 0; i < l; ++i) {
    // Left neighbours come from this sweep, the right one from the first.
    ContextTags c = context_at(second, i);
    c.next1 = i + 1 < l ? sweep[i + 1] : kBoundaryTag;
    second[i] = argmax(features.at(i, c));
  }
  return {second.begin(), second.end()};
}

std::vector<Posterior> MemmModel::revise(const Document& doc, const std::vector<TagId>& context) const {
  if (context.size() != doc.size()) throw std::invalid_argument("memm: context length differs from document length");
  const DocumentFeatures features(index_, doc, p_.tagset, p_.options.features);
  const std::vector<ContextTag> tags(context.begin(), context.end());
  std::vector<Posterior> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(posterior(features.at(i, context_at(tags, i))));
  return out;
}

std::vector<Posterior> MemmModel::posteriors(const Document& doc) const { return revise(doc, first_pass(doc)); }

bool MemmModel::knows(std::string_view word) const { return p_.vocabulary.find(word) != p_.vocabulary.end(); }

void MemmModel::save(std::ostream& out) const {
  auto j = detail::model_header(kind(), p_.tagset);
  const auto& o = p_.options;
  j["options"] = {{"word_window", o.features.word_window},
                  {"max_affix", o.features.max_affix},
                  {"use_tags", o.features.use_tags},
                  {"l2", o.l2},
                  {"iterations", o.iterations},
                  {"step", o.step}};
  j["support"] = p_.support;
  auto& features = j["features"] = detail::Json::array();
  for (std::size_t f = 0; f < p_.feature_names.size(); ++f) features.push_back({p_.feature_names[f], f});
  j["weights"] = p_.weights;
  j["vocabulary"] = p_.vocabulary;
  out << j.dump(1) << '\n';
}

}  // namespace settag
