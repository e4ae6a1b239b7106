#include <doctest.h>

#include <nlohmann/json.hpp>
#include <atomic>
#include <thread>

#include "service_fixture.hpp"
#include "settag/error.hpp"
#include "settag/setpred.hpp"

using namespace settag;
using nlohmann::json;

namespace {

json body(const Response& r) { return json::parse(r.body); }

std::string annotation(std::size_t doc, std::size_t token, const std::string& tag, std::int64_t ts,
                       const std::string& who = "ann1") {
  return json{{"document_id", std::to_string(doc)}, {"token_index", token}, {"tag", tag}, {"annotator", who},
              {"timestamp_ms", ts}}
      .dump();
}

}  // namespace

TEST_SUITE("annotation") {
  TEST_CASE("tagging a short sentence offers two candidates for is") {
    auto svc = testing::make_service();
    const auto r = svc.tag(R"({"tokens": ["Dat", "is", "vredebrake"], "beta": 1})");
    REQUIRE(r.status == 200);
    const auto j = body(r);
    CHECK(j["schema_version"] == kApiSchemaVersion);
    const auto& toks = j["tokens"];
    REQUIRE(toks.size() == 3);
    CHECK(toks[0]["candidates"].size() == 1);
    CHECK(toks[0]["candidates"][0]["tag"] == "DDS");
    const auto& is = toks[1]["candidates"];
    REQUIRE(is.size() == 2);
    CHECK(is[0]["tag"] == "VAFIN");
    CHECK(is[1]["tag"] == "VKFIN");
    CHECK(is[0]["probability"].get<double>() == doctest::Approx(0.6));
    CHECK(is[1]["probability"].get<double>() == doctest::Approx(0.4));
  }

  TEST_CASE("candidates are the UBOP sets") {
    auto svc = testing::make_service();
    const auto model = testing::sample_model();
    const std::vector<std::string> words{"is", "koning", "unknownword", "Dat"};
    for (double beta : {0.25, 1.0, 4.0}) {
      const auto j = body(svc.tag(json{{"tokens", words}, {"beta", beta}}.dump()));
      Document d{"x", {}};
      for (const auto& w : words) d.tokens.push_back({w, w, std::nullopt});
      const auto post = model->posteriors(d);
      for (std::size_t i = 0; i < words.size(); ++i) {
        const auto set = ubop(post[i], UtilityConfig(beta, model->tagset().size()));
        const auto& cands = j["tokens"][i]["candidates"];
        REQUIRE(cands.size() == set.tags.size());
        for (std::size_t k = 0; k < set.tags.size(); ++k) CHECK(cands[k]["tag"] == model->tagset().label(set.tags[k]));
        CHECK(j["tokens"][i]["expected_utility"].get<double>() == set.expected_utility);
      }
    }
  }

  TEST_CASE("minimum beta gives one candidate per token") {
    auto svc = testing::make_service();
    const auto j = body(svc.tag(json{{"tokens", {"Dat", "is", "nieuw", "koning"}}, {"beta", kMinBeta}}.dump()));
    for (const auto& t : j["tokens"]) CHECK(t["candidates"].size() == 1);
  }

  TEST_CASE("tag request errors") {
    auto svc = testing::make_service({}, 3);
    CHECK(svc.tag(R"({"tokens": []})").status == 400);
    CHECK(svc.tag("nonsense").status == 400);
    CHECK(svc.tag(R"({"tokens": "Dat"})").status == 400);
    CHECK(svc.tag(R"({"tokens": [1, 2]})").status == 400);
    CHECK(svc.tag(R"({"tokens": ["a"], "beta": "high"})").status == 400);
    CHECK(svc.tag(R"({"tokens": ["a"], "beta": 0})").status == 400);
    CHECK(svc.tag(R"({"tokens": ["a", "b", "c", "d"]})").status == 413);
    CHECK(svc.tag(R"({"tokens": ["a", "b", "c"]})").status == 200);
    const auto e = body(svc.tag(R"({"tokens": []})"));
    CHECK(e.contains("error"));
    CHECK(e["schema_version"] == kApiSchemaVersion);
  }

  TEST_CASE("no model loaded") {
    const auto docs = testing::corpus_from({"a/X"});
    AnnotationService svc(nullptr, docs.documents, docs.tagset, Normalizer{}, {});
    CHECK(svc.tag(R"({"tokens": ["a"]})").status == 503);
    CHECK(svc.get_document("0").status == 503);
    CHECK(svc.tagset().status == 503);
    CHECK(svc.list_documents().status == 200);
  }

  TEST_CASE("documents and tag set") {
    auto svc = testing::make_service();
    const auto list = body(svc.list_documents());
    REQUIRE(list["documents"].size() == 2);
    CHECK(list["documents"][1]["name"] == "doc2");
    CHECK(list["documents"][1]["tokens"] == 4);

    const auto doc = body(svc.get_document("1", 1.0));
    CHECK(doc["tokens"].size() == 4);
    CHECK(doc["tokens"][2]["surface"] == "is");
    CHECK(doc["tokens"][2]["candidates"].size() == 2);
    CHECK(doc["tokens"][2]["gold"] == "VKFIN");
    CHECK(doc["tokens"][2]["decision"].is_null());
    CHECK(body(svc.get_document("1", kMinBeta))["tokens"][2]["candidates"].size() == 1);

    CHECK(svc.get_document("7").status == 404);
    CHECK(svc.get_document("abc").status == 404);
    CHECK(svc.get_document("0", 1000.0).status == 400);

    const auto tags = body(svc.tagset());
    CHECK(tags["tags"].size() == testing::sample_corpus().tagset.size());
  }

  TEST_CASE("posting annotations") {
    auto svc = testing::make_service();
    auto r = svc.post_annotation(annotation(0, 1, "VKFIN", 1000));
    CHECK(r.status == 201);
    const auto id = body(r)["id"];
    CHECK(body(r)["override"] == false);

    // Same tuple again: same id, nothing appended.
    r = svc.post_annotation(annotation(0, 1, "VKFIN", 1000));
    CHECK(r.status == 200);
    CHECK(body(r)["id"] == id);
    CHECK(body(r)["duplicate"] == true);
    CHECK(svc.records().size() == 1);

    // Outside the shown candidates: accepted and flagged.
    r = svc.post_annotation(annotation(0, 1, "NA", 1001));
    CHECK(r.status == 201);
    CHECK(body(r)["override"] == true);
    CHECK(svc.records().back().override_candidates);
    CHECK(svc.records().back().shown.size() == 2);

    CHECK(svc.post_annotation(annotation(0, 1, "NOPE", 1002)).status == 422);
    CHECK(svc.post_annotation(annotation(0, 9, "NA", 1003)).status == 422);
    CHECK(svc.post_annotation(annotation(5, 0, "NA", 1004)).status == 404);
    CHECK(svc.post_annotation(R"({"document_id": "0"})").status == 400);
    CHECK(svc.post_annotation("[").status == 400);
    CHECK(svc.records().size() == 2);
    CHECK(body(svc.get_document("0"))["tokens"][1]["decision"] == "NA");
  }

  TEST_CASE("export uses the latest decision and argmax elsewhere") {
    auto svc = testing::make_service();
    const auto plain = svc.export_document("1");
    REQUIRE(plain.status == 200);
    CHECK(plain.body == "de\tDDART\nkoning\tNA\nis\tVAFIN\nvnbekant\tDDS\n");

    svc.post_annotation(annotation(1, 2, "VAFIN", 10));
    svc.post_annotation(annotation(1, 2, "VKFIN", 20));
    const auto edited = svc.export_document("1");
    CHECK(edited.body == "de\tDDART\nkoning\tNA\nis\tVKFIN\nvnbekant\tDDS\n");
    const auto parsed = parse_corpus({{"export", edited.body}});
    CHECK(parsed.documents[0].size() == 4);
    CHECK(svc.export_document("2").status == 404);
  }

  TEST_CASE("log survives a restart") {
    testing::TempDir dir;
    const auto log = dir / "log.ndjson";
    std::string before;
    {
      auto svc = testing::make_service(log);
      svc.post_annotation(annotation(1, 2, "VAFIN", 10));
      svc.post_annotation(annotation(1, 0, "KON", 11, "ann2"));
      before = svc.export_document("1").body;
    }
    auto svc = testing::make_service(log);
    CHECK(svc.records().size() == 2);
    CHECK(svc.export_document("1").body == before);
    const auto r = svc.post_annotation(annotation(1, 2, "VAFIN", 10));
    CHECK(r.status == 200);
    CHECK(svc.post_annotation(annotation(1, 3, "NA", 12)).status == 201);
    CHECK(svc.records().back().id == 3);
  }

  TEST_CASE("a torn last line is dropped, earlier corruption is fatal") {
    testing::TempDir dir;
    const auto log = dir / "log.ndjson";
    {
      auto svc = testing::make_service(log);
      svc.post_annotation(annotation(0, 0, "DDS", 1));
    }
    const auto good = testing::slurp(log);
    testing::spit(log, good + R"({"id": 2, "document_)");
    {
      auto svc = testing::make_service(log);
      CHECK(svc.records().size() == 1);
      CHECK(testing::slurp(log) == good);
      CHECK(svc.post_annotation(annotation(0, 1, "VAFIN", 2)).status == 201);
    }
    CHECK(testing::make_service(log).records().size() == 2);

    testing::spit(log, "garbage\n" + good);
    CHECK_THROWS_AS(testing::make_service(log), DataError);
  }

  TEST_CASE("concurrent requests") {
    auto svc = testing::make_service();
    const auto expected = svc.tag(R"({"tokens": ["Dat", "is", "vredebrake"]})").body;
    std::vector<std::thread> threads;
    std::atomic<int> mismatches{0}, created{0};
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&, t] {
        for (int i = 0; i < 50; ++i) {
          if (svc.tag(R"({"tokens": ["Dat", "is", "vredebrake"]})").body != expected) ++mismatches;
          if (svc.post_annotation(annotation(0, 1, "VAFIN", i, "a" + std::to_string(t))).status == 201) ++created;
        }
      });
    }
    for (auto& th : threads) th.join();
    CHECK(mismatches == 0);
    CHECK(created == 400);
    const auto recs = svc.records();
    REQUIRE(recs.size() == 400);
    for (std::size_t i = 0; i < recs.size(); ++i) CHECK(recs[i].id == i + 1);
  }
}
