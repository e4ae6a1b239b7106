#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "settag/corpus.hpp"
#include "settag/normalize.hpp"
#include "settag/setpred.hpp"
#include "settag/tagger.hpp"

namespace settag {

inline constexpr int kApiSchemaVersion = 1;

struct Candidate {
  std::string tag;
  double probability = 0.0;
};

struct AnnotationRecord {
  std::uint64_t id = 0;
  std::size_t document = 0;
  std::size_t token = 0;
  std::vector<Candidate> shown;
  std::string tag;
  std::string annotator;
  std::int64_t timestamp_ms = 0;
  // The chosen tag was not among the shown candidates.
  bool override_candidates = false;
};

struct ServiceOptions {
  std::size_t max_tokens = 2000;
  double default_beta = 1.0;
  // Append-only newline-delimited JSON log; empty keeps records in memory.
  std::filesystem::path log_path;
};

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Request handlers of the annotation HTTP API, independent of any HTTP
// library. Each handler takes the raw request body and returns status plus
// body. Handlers may be called concurrently; annotation appends are
// serialized and totally ordered by record id.
//
//   POST /api/tag              tag()
//   GET  /api/documents        list_documents()
//   GET  /api/documents/{id}   get_document()
//   POST /api/annotations      post_annotation()
//   GET  /api/export/{id}      export_document()
//   GET  /api/tagset           tagset()
class AnnotationService {
 public:
  // `model` may be null, in which case model-dependent endpoints answer 503.
  // Documents are re-normalized with `normalizer` and their gold tags mapped
  // onto the model's tag set. An existing log is replayed; throws DataError
  // if it is corrupt.
  AnnotationService(std::shared_ptr<const Tagger> model, std::vector<Document> documents, const TagSet& corpus_tags,
                    Normalizer normalizer, ServiceOptions options);

  Response tag(std::string_view body) const;
  Response list_documents() const;
  Response get_document(std::string_view id, std::optional<double> beta = std::nullopt) const;
  Response post_annotation(std::string_view body);
  Response export_document(std::string_view id) const;
  Response tagset() const;

  std::vector<AnnotationRecord> records() const;

 private:
  struct LoadedDocument {
    Document doc;
    std::vector<Posterior> posteriors;
  };

  std::optional<std::size_t> find_document(std::string_view id) const;
  std::vector<Candidate> candidates(const PredictionSet& set, const Posterior& p) const;
  void append(AnnotationRecord record);
  void replay();

  std::shared_ptr<const Tagger> model_;
  std::vector<LoadedDocument> docs_;
  Normalizer normalizer_;
  ServiceOptions options_;

  mutable std::shared_mutex mutex_;
  std::vector<AnnotationRecord> log_;
  std::map<std::tuple<std::size_t, std::size_t, std::string, std::int64_t>, std::uint64_t> seen_;
};

}  // namespace settag
