#include "settag/annotation.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "settag/error.hpp"

namespace settag {

namespace {

using Json = nlohmann::ordered_json;

Response json_response(int status, Json body) {
  body["schema_version"] = kApiSchemaVersion;
  return {status, body.dump(), "application/json"};
}

Response error_response(int status, const std::string& message) {
  return json_response(status, Json{{"error", message}});
}

Json candidates_json(const std::vector<Candidate>& cands) {
  Json arr = Json::array();
  for (const auto& c : cands) arr.push_back({{"tag", c.tag}, {"probability", c.probability}});
  return arr;
}

Json record_json(const AnnotationRecord& r) {
  return Json{{"id", r.id},
              {"document_id", std::to_string(r.document)},
              {"token_index", r.token},
              {"shown", candidates_json(r.shown)},
              {"tag", r.tag},
              {"annotator", r.annotator},
              {"timestamp_ms", r.timestamp_ms},
              {"override", r.override_candidates}};
}

AnnotationRecord record_from_json(const nlohmann::json& j) {
  AnnotationRecord r;
  r.id = j.at("id").get<std::uint64_t>();
  r.document = std::stoul(j.at("document_id").get<std::string>());
  r.token = j.at("token_index").get<std::size_t>();
  for (const auto& c : j.at("shown")) r.shown.push_back({c.at("tag").get<std::string>(), c.at("probability").get<double>()});
  r.tag = j.at("tag").get<std::string>();
  r.annotator = j.at("annotator").get<std::string>();
  r.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
  r.override_candidates = j.at("override").get<bool>();
  return r;
}

std::int64_t now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::optional<std::size_t> parse_index(std::string_view text) {
  if (text.empty() || text.size() > 18) return std::nullopt;
  std::size_t v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

}  // namespace

AnnotationService::AnnotationService(std::shared_ptr<const Tagger> model, std::vector<Document> documents,
                                     const TagSet& corpus_tags, Normalizer normalizer, ServiceOptions options)
    : model_(std::move(model)), normalizer_(std::move(normalizer)), options_(std::move(options)) {
  UtilityConfig(options_.default_beta, model_ ? model_->tagset().size() : 2);
  for (auto& doc : documents) {
    for (auto& t : doc.tokens) t.normalized = normalizer_(t.surface);
    LoadedDocument loaded;
    if (model_) {
      loaded.doc = remap_tags(doc, corpus_tags, model_->tagset());
      loaded.posteriors = model_->posteriors(loaded.doc);
    } else {
      loaded.doc = std::move(doc);
    }
    docs_.push_back(std::move(loaded));
  }
  replay();
}

void AnnotationService::replay() {
  if (options_.log_path.empty()) return;
  std::ifstream in(options_.log_path, std::ios::binary);
  if (!in) return;
  std::ostringstream buf;
  buf << in.rdbuf();
  in.close();
  const std::string text = buf.str();

  std::size_t pos = 0, line_no = 0, good_end = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    const bool terminated = nl != std::string::npos;
    if (!terminated) nl = text.size();
    const std::string_view line(text.data() + pos, nl - pos);
    ++line_no;
    pos = terminated ? nl + 1 : nl;
    if (line.empty()) {
      good_end = pos;
      continue;
    }
    AnnotationRecord r;
    try {
      r = record_from_json(nlohmann::json::parse(line));
    } catch (const std::exception& e) {
      // A torn final line is what an interrupted append leaves behind.
      if (pos == text.size()) break;
      throw DataError(options_.log_path.string() + ":" + std::to_string(line_no) +
                      ": corrupt annotation record: " + e.what());
    }
    if (r.document >= docs_.size() || r.token >= docs_[r.document].doc.size()) {
      throw DataError(options_.log_path.string() + ":" + std::to_string(line_no) +
                      ": annotation refers to a document or token that is not loaded");
    }
    seen_.emplace(std::make_tuple(r.document, r.token, r.annotator, r.timestamp_ms), r.id);
    log_.push_back(std::move(r));
    good_end = pos;
    if (!terminated) {
      // Complete record without its newline: finish the line before appending.
      std::ofstream(options_.log_path, std::ios::app | std::ios::binary) << '\n';
      good_end = text.size() + 1;
    }
  }
  if (good_end < text.size()) std::filesystem::resize_file(options_.log_path, good_end);
}

std::optional<std::size_t> AnnotationService::find_document(std::string_view id) const {
  auto idx = parse_index(id);
  if (!idx || *idx >= docs_.size()) return std::nullopt;
  return idx;
}

std::vector<Candidate> AnnotationService::candidates(const PredictionSet& set, const Posterior& p) const {
  std::vector<Candidate> out;
  for (auto t : set.tags) out.push_back({model_->tagset().label(t), p[t]});
  return out;
}

Response AnnotationService::tag(std::string_view body) const {
  if (!model_) return error_response(503, "model not loaded");
  const auto req = nlohmann::json::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object()) return error_response(400, "request body must be a JSON object");
  const auto tokens = req.find("tokens");
  if (tokens == req.end() || !tokens->is_array()) return error_response(400, "'tokens' must be an array of strings");
  if (tokens->empty()) return error_response(400, "'tokens' must not be empty");
  if (tokens->size() > options_.max_tokens) {
    return error_response(413, "at most " + std::to_string(options_.max_tokens) + " tokens per request");
  }
  double beta = options_.default_beta;
  if (auto b = req.find("beta"); b != req.end()) {
    if (!b->is_number()) return error_response(400, "'beta' must be a number");
    beta = b->get<double>();
  }
  std::optional<UtilityConfig> cfg;
  try {
    cfg.emplace(beta, model_->tagset().size());
  } catch (const std::invalid_argument& e) {
    return error_response(400, e.what());
  }

  Document doc{"request", {}};
  for (const auto& t : *tokens) {
    if (!t.is_string() || t.get<std::string>().empty()) {
      return error_response(400, "'tokens' must contain non-empty strings");
    }
    const auto surface = t.get<std::string>();
    doc.tokens.push_back({surface, normalizer_(surface), std::nullopt});
  }
  const auto post = model_->posteriors(doc);
  Json out;
  out["beta"] = beta;
  auto& arr = out["tokens"] = Json::array();
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto set = ubop(post[i], *cfg);
    arr.push_back({{"token", doc.tokens[i].surface},
                   {"normalized", doc.tokens[i].normalized},
                   {"known", model_->knows(doc.tokens[i].normalized)},
                   {"candidates", candidates_json(candidates(set, post[i]))},
                   {"expected_utility", set.expected_utility}});
  }
  return json_response(200, std::move(out));
}

Response AnnotationService::list_documents() const {
  Json out;
  auto& arr = out["documents"] = Json::array();
  std::shared_lock lock(mutex_);
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    std::size_t annotated = 0;
    std::vector<bool> seen(docs_[d].doc.size(), false);
    for (const auto& r : log_) {
      if (r.document == d && !seen[r.token]) {
        seen[r.token] = true;
        ++annotated;
      }
    }
    arr.push_back({{"id", std::to_string(d)},
                   {"name", docs_[d].doc.name},
                   {"tokens", docs_[d].doc.size()},
                   {"annotated", annotated}});
  }
  return json_response(200, std::move(out));
}

Response AnnotationService::get_document(std::string_view id, std::optional<double> beta) const {
  const auto d = find_document(id);
  if (!d) return error_response(404, "unknown document '" + std::string(id) + "'");
  if (!model_) return error_response(503, "model not loaded");
  std::optional<UtilityConfig> cfg;
  try {
    cfg.emplace(beta.value_or(options_.default_beta), model_->tagset().size());
  } catch (const std::invalid_argument& e) {
    return error_response(400, e.what());
  }
  const auto& loaded = docs_[*d];
  std::vector<const AnnotationRecord*> latest(loaded.doc.size(), nullptr);
  {
    std::shared_lock lock(mutex_);
    for (const auto& r : log_) {
      if (r.document == *d) latest[r.token] = &r;
    }
    Json out;
    out["id"] = std::to_string(*d);
    out["name"] = loaded.doc.name;
    out["beta"] = cfg->beta;
    auto& arr = out["tokens"] = Json::array();
    for (std::size_t i = 0; i < loaded.doc.size(); ++i) {
      const auto& tok = loaded.doc.tokens[i];
      const auto set = ubop(loaded.posteriors[i], *cfg);
      Json t{{"index", i},
             {"surface", tok.surface},
             {"normalized", tok.normalized},
             {"candidates", candidates_json(candidates(set, loaded.posteriors[i]))},
             {"expected_utility", set.expected_utility}};
      t["gold"] = tok.gold ? Json(model_->tagset().label(*tok.gold)) : Json(nullptr);
      t["decision"] = latest[i] ? Json(latest[i]->tag) : Json(nullptr);
      arr.push_back(std::move(t));
    }
    return json_response(200, std::move(out));
  }
}

Response AnnotationService::post_annotation(std::string_view body) {
  const auto req = nlohmann::json::parse(body, nullptr, false);
  if (req.is_discarded() || !req.is_object()) return error_response(400, "request body must be a JSON object");
  AnnotationRecord r;
  std::string doc_id;
  try {
    const auto& d = req.at("document_id");
    doc_id = d.is_string() ? d.get<std::string>() : std::to_string(d.get<std::size_t>());
    r.token = req.at("token_index").get<std::size_t>();
    r.tag = req.at("tag").get<std::string>();
    r.annotator = req.value("annotator", std::string("anonymous"));
    r.timestamp_ms = req.contains("timestamp_ms") ? req.at("timestamp_ms").get<std::int64_t>() : now_ms();
    if (auto s = req.find("shown"); s != req.end()) {
      for (const auto& c : *s) r.shown.push_back({c.at("tag").get<std::string>(), c.at("probability").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    return error_response(400, std::string("malformed annotation: ") + e.what());
  }
  const auto d = find_document(doc_id);
  if (!d) return error_response(404, "unknown document '" + doc_id + "'");
  r.document = *d;
  if (r.token >= docs_[*d].doc.size()) {
    return error_response(422, "token index " + std::to_string(r.token) + " out of range");
  }
  const TagSet* tags = model_ ? &model_->tagset() : nullptr;
  if (tags && !tags->find(r.tag)) return error_response(422, "tag '" + r.tag + "' is not in the tag set");
  if (r.shown.empty() && model_) {
    double beta = options_.default_beta;
    if (auto b = req.find("beta"); b != req.end() && b->is_number()) beta = b->get<double>();
    try {
      const UtilityConfig cfg(beta, tags->size());
      const auto& p = docs_[*d].posteriors[r.token];
      r.shown = candidates(ubop(p, cfg), p);
    } catch (const std::invalid_argument& e) {
      return error_response(400, e.what());
    }
  }
  r.override_candidates = std::none_of(r.shown.begin(), r.shown.end(), [&](const Candidate& c) { return c.tag == r.tag; });

  std::unique_lock lock(mutex_);
  const auto key = std::make_tuple(r.document, r.token, r.annotator, r.timestamp_ms);
  if (auto it = seen_.find(key); it != seen_.end()) {
    return json_response(200, Json{{"id", it->second}, {"duplicate", true}});
  }
  r.id = log_.empty() ? 1 : log_.back().id + 1;
  try {
    append(r);
  } catch (const DataError& e) {
    return error_response(500, e.what());
  }
  seen_.emplace(key, r.id);
  const bool over = r.override_candidates;
  const auto id = r.id;
  log_.push_back(std::move(r));
  return json_response(201, Json{{"id", id}, {"duplicate", false}, {"override", over}});
}

void AnnotationService::append(AnnotationRecord record) {
  if (options_.log_path.empty()) return;
  std::ofstream out(options_.log_path, std::ios::app | std::ios::binary);
  out << record_json(record).dump() << '\n';
  out.flush();
  if (!out) throw DataError("cannot append to annotation log " + options_.log_path.string());
}

Response AnnotationService::export_document(std::string_view id) const {
  const auto d = find_document(id);
  if (!d) return error_response(404, "unknown document '" + std::string(id) + "'");
  if (!model_) return error_response(503, "model not loaded");
  const auto& loaded = docs_[*d];
  std::vector<std::string> chosen(loaded.doc.size());
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    chosen[i] = model_->tagset().label(argmax_tag(loaded.posteriors[i]));
  }
  {
    std::shared_lock lock(mutex_);
    for (const auto& r : log_) {
      if (r.document == *d) chosen[r.token] = r.tag;
    }
  }
  std::ostringstream out;
  for (std::size_t i = 0; i < chosen.size(); ++i) out << loaded.doc.tokens[i].surface << '\t' << chosen[i] << '\n';
  return {200, out.str(), "text/tab-separated-values; charset=utf-8"};
}

Response AnnotationService::tagset() const {
  if (!model_) return error_response(503, "model not loaded");
  Json out;
  out["tags"] = model_->tagset().labels();
  std::vector<std::string> trained;
  for (std::size_t t = 0; t < model_->tagset().size(); ++t) {
    if (model_->support()[t]) trained.push_back(model_->tagset().label(static_cast<TagId>(t)));
  }
  out["trained"] = trained;
  return json_response(200, std::move(out));
}

std::vector<AnnotationRecord> AnnotationService::records() const {
  std::shared_lock lock(mutex_);
  return log_;
}

}  // namespace settag
