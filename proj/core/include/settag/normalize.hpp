#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "settag/corpus.hpp"

namespace settag {

struct ClusterMember {
  std::string form;
  std::size_t frequency = 0;
  // Edit distance to the cluster representative (case-folded).
  std::size_t distance = 0;
};

struct Cluster {
  std::string representative;
  // Sorted by descending frequency, then form.
  std::vector<ClusterMember> members;
  std::size_t max_distance = 0;
};

// Spelling-variant clusters, meant for review by a human expert.
struct ClusterReport {
  std::vector<Cluster> clusters;
};

struct NormalizationOptions {
  std::size_t max_distance = 2;
  std::size_t min_frequency = 1;
};

struct NormalizationResult {
  Corpus corpus;
  ClusterReport report;
};

// Single-linkage clustering of surface forms under case-insensitive
// Levenshtein distance <= max_distance. Only clusters containing a form with
// frequency >= min_frequency are kept; every member's `normalized` field is
// set to the most frequent member (ties: smallest form). Surface forms are
// never modified. Throws std::invalid_argument if max_distance == 0.
NormalizationResult normalize_orthography(const Corpus& corpus, const NormalizationOptions& options);

// TSV rows: representative, member, frequency, distance.
void write_cluster_report(std::ostream& out, const ClusterReport& report);
ClusterReport read_cluster_report(std::istream& in, const std::string& source = "<clusters>");

// Maps surface forms to their representative using a cluster report.
class Normalizer {
 public:
  Normalizer() = default;
  explicit Normalizer(const ClusterReport& report);

  std::string operator()(std::string_view surface) const;
  bool empty() const { return lookup_.empty(); }

 private:
  std::unordered_map<std::string, std::string> lookup_;
};

}  // namespace settag
