#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "settag/corpus.hpp"
#include "settag/error.hpp"

using namespace settag;

TEST_SUITE("corpus") {
  TEST_CASE("parses the Dat is vredebrake example") {
    const auto c = parse_corpus({{"fig1", "Dat\tDDS\nis\tVAFIN\nvredebrake\tNA\n"}});
    REQUIRE(c.documents.size() == 1);
    const auto& d = c.documents[0];
    CHECK(d.name == "fig1");
    REQUIRE(d.size() == 3);
    CHECK(d.tokens[0].surface == "Dat");
    CHECK(d.tokens[0].normalized == "Dat");
    CHECK(c.tagset.label(*d.tokens[0].gold) == "DDS");
    CHECK(c.tagset.label(*d.tokens[1].gold) == "VAFIN");
    CHECK(c.tagset.label(*d.tokens[2].gold) == "NA");
    CHECK(c.tagset.labels() == std::vector<std::string>{"DDS", "NA", "VAFIN"});
  }

  TEST_CASE("empty input is rejected") {
    CHECK_THROWS_AS(parse_corpus({{"empty", ""}}), DataError);
    CHECK_THROWS_AS(parse_corpus({{"blank", "\n\n  \n"}}), Error);
    try {
      parse_corpus({{"empty", ""}});
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find("empty document") != std::string::npos);
    }
  }

  TEST_CASE("single line document") {
    const auto c = parse_corpus({{"one", "word\tX\n"}});
    CHECK(c.documents[0].size() == 1);
    CHECK(c.tagset.size() == 1);
  }

  TEST_CASE("blank lines are ignored and CRLF tolerated") {
    const auto c = parse_corpus({{"d", "a\tX\r\n\r\nb\tY\n\n"}});
    CHECK(c.documents[0].size() == 2);
  }

  TEST_CASE("malformed lines carry their line number") {
    for (const std::string bad : {"a\tX\nno tab here\n", "a\tX\nb\tY\tZ\n", "a\tX\n\tY\n", "a\tX\nb\t\n"}) {
      CAPTURE(bad);
      try {
        parse_corpus({{"bad.tsv", bad}});
        FAIL("expected a parse error");
      } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(std::string(e.what()).find("bad.tsv:2") != std::string::npos);
      }
    }
  }

  TEST_CASE("tokens without gold use a dash") {
    const auto c = parse_corpus({{"d", "a\tX\nb\t-\n"}});
    CHECK_FALSE(c.documents[0].tokens[1].gold.has_value());
    CHECK(c.tagset.size() == 1);
  }

  TEST_CASE("tag set is sorted and ids are positions") {
    const TagSet t({"VVFIN", "ADJ", "NA", "ADJ"});
    CHECK(t.size() == 3);
    CHECK(t.label(0) == "ADJ");
    CHECK(t.id("NA") == 1);
    CHECK_FALSE(t.find("XY").has_value());
    CHECK_THROWS_AS(t.id("XY"), DataError);
    CHECK_THROWS_AS(TagSet({""}), DataError);
  }

  TEST_CASE("serialize then parse is the identity") {
    const auto c = testing::corpus_from({"Dat/DDS is/VAFIN vredebrake/NA ./$.", "vnde/KON dat/KOUS"});
    std::vector<SourceText> sources;
    for (const auto& d : c.documents) sources.push_back({d.name, serialize_document(d, c.tagset)});
    const auto again = parse_corpus(sources);
    CHECK(again.documents == c.documents);
    CHECK(again.tagset == c.tagset);
  }

  TEST_CASE("files on disk keep order and use the file stem") {
    testing::TempDir dir;
    testing::spit(dir / "b.tsv", "x\tA\n");
    testing::spit(dir / "a.tsv", "y\tB\n");
    const auto c = load_corpus({dir / "b.tsv", dir / "a.tsv"});
    CHECK(c.documents[0].name == "b");
    CHECK(c.documents[1].name == "a");
    CHECK_THROWS_AS(load_corpus({dir / "missing.tsv"}), DataError);
  }

  TEST_CASE("remapping gold tags onto another tag set") {
    const auto c = testing::corpus_from({"a/X b/Y c/Z"});
    const TagSet other({"X", "Z"});
    const auto d = remap_tags(c.documents[0], c.tagset, other);
    CHECK(d.tokens[0].gold == other.find("X"));
    CHECK_FALSE(d.tokens[1].gold.has_value());
    CHECK(d.tokens[2].gold == other.find("Z"));
  }

  TEST_CASE("bundled corpus loads") {
    const auto c = load_corpus(testing::bundled_corpus());
    CHECK(c.documents.size() >= 3);
    CHECK(c.token_count() >= 5000);
    CHECK(c.token_count() <= 20000);
  }
}
