#include <doctest.h>

#include <set>
#include <sstream>

#include "fixtures.hpp"
#include "settag/error.hpp"
#include "settag/normalize.hpp"

using namespace settag;

namespace {

Corpus denen_family() {
  std::string text;
  for (int i = 0; i < 5; ++i) text += "denen/PRELS ";
  for (int i = 0; i < 2; ++i) text += "denet/PRELS ";
  text += "dhenet/PRELS koning/NA";
  return testing::corpus_from({text});
}

std::vector<std::string> normalized_forms(const Corpus& c) {
  std::vector<std::string> out;
  for (const auto& d : c.documents) {
    for (const auto& t : d.tokens) out.push_back(t.normalized);
  }
  return out;
}

}  // namespace

TEST_SUITE("normalize") {
  TEST_CASE("denen, denet and dhenet collapse to denen") {
    const auto r = normalize_orthography(denen_family(), {2, 1});
    for (std::size_t i = 0; i < 8; ++i) CHECK(r.corpus.documents[0].tokens[i].normalized == "denen");
    CHECK(r.corpus.documents[0].tokens[8].normalized == "koning");
    REQUIRE(r.report.clusters.size() == 1);
    const auto& c = r.report.clusters[0];
    CHECK(c.representative == "denen");
    REQUIRE(c.members.size() == 3);
    CHECK(c.members[0].form == "denen");
    CHECK(c.members[0].frequency == 5);
    CHECK(c.members[1].form == "denet");
    CHECK(c.members[1].distance == 1);
    CHECK(c.members[2].form == "dhenet");
    CHECK(c.members[2].distance == 2);
    CHECK(c.max_distance == 2);
  }

  TEST_CASE("surface forms are never modified") {
    const auto in = denen_family();
    const auto r = normalize_orthography(in, {2, 1});
    for (std::size_t i = 0; i < in.documents[0].size(); ++i) {
      CHECK(r.corpus.documents[0].tokens[i].surface == in.documents[0].tokens[i].surface);
      CHECK(r.corpus.documents[0].tokens[i].gold == in.documents[0].tokens[i].gold);
    }
  }

  TEST_CASE("no qualifying pair leaves the corpus unchanged") {
    const auto in = testing::corpus_from({"abc/X xyz/Y abc/X"});
    const auto r = normalize_orthography(in, {1, 1});
    CHECK(r.corpus.documents == in.documents);
    CHECK(r.report.clusters.empty());
  }

  TEST_CASE("frequency ties go to the lexicographically smaller form") {
    const auto r = normalize_orthography(testing::corpus_from({"ab/X aa/X ab/X aa/X aa/X ab/X"}), {1, 1});
    REQUIRE(r.report.clusters.size() == 1);
    CHECK(r.report.clusters[0].representative == "aa");
    for (const auto& t : r.corpus.documents[0].tokens) CHECK(t.normalized == "aa");
  }

  TEST_CASE("comparison ignores case but keeps the representative's casing") {
    const auto r = normalize_orthography(testing::corpus_from({"Vnde/KON Vnde/KON vnde/KON unde/KON"}), {1, 1});
    REQUIRE(r.report.clusters.size() == 1);
    CHECK(r.report.clusters[0].representative == "Vnde");
    for (const auto& t : r.corpus.documents[0].tokens) CHECK(t.normalized == "Vnde");
  }

  TEST_CASE("single linkage chains through intermediate forms") {
    // abcd - abce - abfe: the ends are 2 apart but linked at distance 1.
    const auto r = normalize_orthography(testing::corpus_from({"abcd/X abce/X abfe/X abcd/X"}), {1, 1});
    REQUIRE(r.report.clusters.size() == 1);
    CHECK(r.report.clusters[0].members.size() == 3);
    CHECK(r.report.clusters[0].max_distance == 2);
  }

  TEST_CASE("clusters need a seed of sufficient frequency") {
    const auto r = normalize_orthography(denen_family(), {2, 6});
    CHECK(r.report.clusters.empty());
    CHECK(normalized_forms(r.corpus) == normalized_forms(denen_family()));
    CHECK(normalize_orthography(denen_family(), {2, 5}).report.clusters.size() == 1);
  }

  TEST_CASE("zero threshold is rejected") {
    CHECK_THROWS_AS(normalize_orthography(denen_family(), {0, 1}), std::invalid_argument);
  }

  TEST_CASE("normalization is idempotent") {
    const auto corpus = load_corpus(testing::bundled_corpus());
    const auto once = normalize_orthography(corpus, {2, 1});
    const auto twice = normalize_orthography(once.corpus, {2, 1});
    CHECK(normalized_forms(twice.corpus) == normalized_forms(once.corpus));
  }

  TEST_CASE("every form appears in at most one cluster") {
    const auto r = normalize_orthography(load_corpus(testing::bundled_corpus()), {1, 1});
    std::set<std::string> seen;
    for (const auto& c : r.report.clusters) {
      bool rep_is_member = false;
      for (const auto& m : c.members) {
        CHECK(seen.insert(m.form).second);
        rep_is_member |= m.form == c.representative;
      }
      CHECK(rep_is_member);
    }
  }

  TEST_CASE("report round trip and lookup") {
    const auto r = normalize_orthography(denen_family(), {2, 1});
    std::ostringstream out;
    write_cluster_report(out, r.report);
    CHECK(out.str() == "denen\tdenen\t5\t0\ndenen\tdenet\t2\t1\ndenen\tdhenet\t1\t2\n");
    std::istringstream in(out.str());
    const auto back = read_cluster_report(in);
    REQUIRE(back.clusters.size() == 1);
    CHECK(back.clusters[0].members.size() == 3);
    const Normalizer norm(back);
    CHECK(norm("DHENET") == "denen");
    CHECK(norm("koning") == "koning");

    std::istringstream bad("denen\tdenet\tx\t1\n");
    CHECK_THROWS_AS(read_cluster_report(bad), ParseError);
  }
}
