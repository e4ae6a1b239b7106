#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "settag/error.hpp"
#include "settag/model_io.hpp"

using namespace settag;

namespace {

std::string saved(const Tagger& m) {
  std::ostringstream out;
  m.save(out);
  return out.str();
}

std::unique_ptr<Tagger> reload(const std::string& text) {
  std::istringstream in(text);
  return load_model(in);
}

}  // namespace

TEST_SUITE("model_io") {
  TEST_CASE("every tagger reloads bit-exactly") {
    const auto c = load_corpus(testing::bundled_corpus());
    for (auto kind : {TaggerKind::kBaseline, TaggerKind::kHmm, TaggerKind::kMemm}) {
      CAPTURE(to_string(kind));
      TaggerSpec spec;
      spec.kind = kind;
      spec.memm.iterations = 20;
      const auto m = train_tagger(spec, {c.documents[0]}, c.tagset);
      const auto text = saved(*m);
      const auto back = reload(text);
      CHECK(back->kind() == m->kind());
      CHECK(back->tagset() == m->tagset());
      CHECK(back->support() == m->support());
      CHECK(saved(*back) == text);
      CHECK(back->posteriors(c.documents[1]) == m->posteriors(c.documents[1]));
    }
  }

  TEST_CASE("files on disk") {
    testing::TempDir dir;
    const auto c = testing::corpus_from({"dat/DDS is/VAFIN vredebrake/NA"});
    TaggerSpec spec;
    spec.kind = TaggerKind::kHmm;
    const auto m = train_tagger(spec, c.documents, c.tagset);
    save_model(*m, dir / "m.json");
    CHECK(load_model(dir / "m.json")->kind() == "hmm");
    CHECK_THROWS_AS(load_model(dir / "missing.json"), DataError);
    CHECK_THROWS_AS(save_model(*m, dir / "no" / "such" / "dir.json"), DataError);
  }

  TEST_CASE("a different format version fails loudly") {
    const auto c = testing::corpus_from({"a/X b/Y"});
    const auto m = train_tagger({TaggerKind::kBaseline, {}, {}}, c.documents, c.tagset);
    auto text = saved(*m);
    const auto pos = text.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 19, "\"format_version\": 2");
    CHECK_THROWS_AS(reload(text), FormatVersionError);
  }

  TEST_CASE("malformed files") {
    CHECK_THROWS_AS(reload("not json"), DataError);
    CHECK_THROWS_AS(reload("{}"), DataError);
    CHECK_THROWS_AS(reload(R"({"format_version": 1, "kind": "crf", "tagset": ["X"]})"), DataError);
    CHECK_THROWS_AS(reload(R"({"format_version": 1, "kind": "baseline", "tagset": ["X"]})"), DataError);
    CHECK_THROWS_AS(reload(R"({"format_version": 1, "kind": "baseline", "tagset": ["X"], "joint_counts": [["a", [1, 2]]]})"),
                    DataError);
  }

  TEST_CASE("tagger names") {
    CHECK(parse_tagger_kind("memm") == TaggerKind::kMemm);
    CHECK(to_string(TaggerKind::kHmm) == "hmm");
    CHECK_THROWS_AS(parse_tagger_kind("treetagger"), std::invalid_argument);
  }
}
