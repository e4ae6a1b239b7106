#include "settag/normalize.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "settag/error.hpp"
#include "settag/levenshtein.hpp"
#include "settag/utf8.hpp"

namespace settag {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

NormalizationResult normalize_orthography(const Corpus& corpus, const NormalizationOptions& options) {
  if (options.max_distance == 0) throw std::invalid_argument("max_distance must be >= 1");

  std::map<std::string, std::size_t> counts;
  for (const auto& doc : corpus.documents) {
    for (const auto& t : doc.tokens) ++counts[t.surface];
  }
  std::vector<std::string> forms;
  std::vector<std::size_t> freq;
  std::vector<std::u32string> folded;
  for (const auto& [form, n] : counts) {
    forms.push_back(form);
    freq.push_back(n);
    folded.push_back(utf8::fold(utf8::decode(form)));
  }

  // Sort indices by folded length so the inner loop can stop early.
  std::vector<std::size_t> by_len(forms.size());
  std::iota(by_len.begin(), by_len.end(), 0);
  std::stable_sort(by_len.begin(), by_len.end(),
                   [&](std::size_t a, std::size_t b) { return folded[a].size() < folded[b].size(); });

  DisjointSets sets(forms.size());
  const std::size_t limit = options.max_distance;
  for (std::size_t x = 0; x < by_len.size(); ++x) {
    const auto i = by_len[x];
    for (std::size_t y = x + 1; y < by_len.size(); ++y) {
      const auto j = by_len[y];
      if (folded[j].size() - folded[i].size() > limit) break;
      if (levenshtein_bounded(folded[i], folded[j], limit) <= limit) sets.unite(i, j);
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t i = 0; i < forms.size(); ++i) components[sets.find(i)].push_back(i);

  NormalizationResult result{corpus, {}};
  std::map<std::string, std::string> replacement;
  for (auto& [root, members] : components) {
    if (members.size() < 2) continue;
    const bool has_seed = std::any_of(members.begin(), members.end(),
                                      [&](std::size_t m) { return freq[m] >= options.min_frequency; });
    if (!has_seed) continue;
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      if (freq[a] != freq[b]) return freq[a] > freq[b];
      return forms[a] < forms[b];
    });
    Cluster cluster;
    const auto rep = members.front();
    cluster.representative = forms[rep];
    for (std::size_t a = 0; a < members.size(); ++a) {
      const auto m = members[a];
      cluster.members.push_back({forms[m], freq[m], levenshtein(folded[m], folded[rep])});
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        cluster.max_distance = std::max(cluster.max_distance, levenshtein(folded[m], folded[members[b]]));
      }
      replacement[forms[m]] = forms[rep];
    }
    result.report.clusters.push_back(std::move(cluster));
  }
  std::sort(result.report.clusters.begin(), result.report.clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.representative < b.representative; });

  for (auto& doc : result.corpus.documents) {
    for (auto& t : doc.tokens) {
      if (auto it = replacement.find(t.surface); it != replacement.end()) t.normalized = it->second;
    }
  }
  return result;
}

void write_cluster_report(std::ostream& out, const ClusterReport& report) {
  for (const auto& c : report.clusters) {
    for (const auto& m : c.members) {
      out << c.representative << '\t' << m.form << '\t' << m.frequency << '\t' << m.distance << '\n';
    }
  }
}

ClusterReport read_cluster_report(std::istream& in, const std::string& source) {
  ClusterReport report;
  std::map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::istringstream row(line);
    for (std::string f; std::getline(row, f, '\t');) fields.push_back(f);
    if (fields.size() != 4) throw ParseError(source, line_no, "expected 4 tab-separated fields");
    ClusterMember m;
    try {
      m = {fields[1], std::stoul(fields[2]), std::stoul(fields[3])};
    } catch (const std::exception&) {
      throw ParseError(source, line_no, "non-numeric frequency or distance");
    }
    auto [it, inserted] = index.emplace(fields[0], report.clusters.size());
    if (inserted) report.clusters.push_back(Cluster{fields[0], {}, 0});
    auto& cluster = report.clusters[it->second];
    // Only distances to the representative are stored on disk.
    cluster.max_distance = std::max(cluster.max_distance, m.distance);
    cluster.members.push_back(std::move(m));
  }
  return report;
}

Normalizer::Normalizer(const ClusterReport& report) {
  for (const auto& c : report.clusters) {
    for (const auto& m : c.members) lookup_[utf8::fold(m.form)] = c.representative;
  }
}

std::string Normalizer::operator()(std::string_view surface) const {
  if (auto it = lookup_.find(utf8::fold(surface)); it != lookup_.end()) return it->second;
  return std::string(surface);
}

}  // namespace settag
