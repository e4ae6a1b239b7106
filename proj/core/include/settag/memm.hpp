#pragma once

#include <set>
#include <span>
#include <string>
#include <vector>

#include "settag/features.hpp"
#include "settag/tagger.hpp"

namespace settag {

struct MemmOptions {
  FeatureConfig features;
  double l2 = 1e-2;
  std::size_t iterations = 200;
  double step = 0.5;
};

struct TrainingExample {
  FeatureVector x;
  TagId y = 0;
};

// Regularized negative log-likelihood of a multinomial logistic regression
// whose softmax ranges over the tags with support[t] set, divided by the
// number of examples N:
//
//   L(W) = 1/N ( -sum_n log softmax(W x_n)[y_n] + l2/2 ||W||^2 )
//
// Weights are feature-major: w[f * num_tags + t]. If `gradient` is non-null
// it receives dL/dW with the same layout.
double memm_objective(std::span<const double> weights, std::size_t num_tags, const std::vector<bool>& support,
                      const std::vector<TrainingExample>& examples, double l2, std::vector<double>* gradient);

// Maximum-entropy Markov model: per-token multinomial logistic regression over
// word and neighbouring-tag features. Tagging is two-pass: a greedy
// left-to-right decoding fixes the context tags, then every token's posterior
// is recomputed with its neighbours' tags taken from that decoding.
class MemmModel final : public Tagger {
 public:
  struct Params {
    TagSet tagset;
    std::vector<bool> support;
    MemmOptions options;
    std::vector<std::string> feature_names;  // position = feature id
    std::vector<double> weights;             // feature-major
    std::set<std::string, std::less<>> vocabulary;
  };

  // Full-batch gradient descent with per-feature steps scaled by N / count(f);
  // a step that would increase the loss is rejected and the step size halved.
  // `losses`, if given, receives the accepted loss after each iteration
  // (starting with the initial loss), so it is non-increasing. Throws
  // TrainingError on a non-finite loss and DataError on empty training data.
  static MemmModel train(const std::vector<Document>& docs, const TagSet& tagset, const MemmOptions& options = {},
                         std::vector<double>* losses = nullptr);

  explicit MemmModel(Params params);

  const Params& params() const { return p_; }
  const FeatureIndex& feature_index() const { return index_; }

  // Unnormalized scores W x; entries outside the support are meaningless.
  std::vector<double> scores(const FeatureVector& x) const;
  // Max-shifted softmax over the support.
  Posterior posterior(const FeatureVector& x) const;

  // Two greedy left-to-right sweeps. The first uses placeholder right
  // context; the second fills it with the first sweep's tags.
  std::vector<TagId> first_pass(const Document& doc) const;
  // Per-token posteriors with all neighbouring tags fixed to `context`.
  // Throws std::invalid_argument if context.size() != doc.size().
  std::vector<Posterior> revise(const Document& doc, const std::vector<TagId>& context) const;

  std::string_view kind() const override { return "memm"; }
  const TagSet& tagset() const override { return p_.tagset; }
  const std::vector<bool>& support() const override { return p_.support; }
  bool knows(std::string_view word) const override;
  std::vector<Posterior> posteriors(const Document& doc) const override;
  void save(std::ostream& out) const override;

 private:
  TagId argmax(const FeatureVector& x) const;

  Params p_;
  FeatureIndex index_;
};

}  // namespace settag
