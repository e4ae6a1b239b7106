#include "http_server.hpp"

#include <httplib.h>

#include <string>

#include "settag/annotation.hpp"

namespace settag {

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_header("X-Schema-Version", std::to_string(kApiSchemaVersion));
  res.set_content(r.body, r.content_type);
}

}  // namespace

void mount_annotation_api(httplib::Server& server, AnnotationService& service) {
  server.Post("/api/tag", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.tag(req.body));
  });
  server.Get("/api/documents", [&](const httplib::Request&, httplib::Response& res) {
    reply(res, service.list_documents());
  });
  server.Get(R"(/api/documents/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    std::optional<double> beta;
    if (req.has_param("beta")) {
      const auto text = req.get_param_value("beta");
      try {
        std::size_t used = 0;
        beta = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
      } catch (const std::exception&) {
        reply(res, {400, R"({"error":"beta must be a number","schema_version":1})", "application/json"});
        return;
      }
    }
    reply(res, service.get_document(req.matches[1].str(), beta));
  });
  server.Post("/api/annotations", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.post_annotation(req.body));
  });
  server.Get(R"(/api/export/([^/]+))", [&](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.export_document(req.matches[1].str()));
  });
  server.Get("/api/tagset", [&](const httplib::Request&, httplib::Response& res) { reply(res, service.tagset()); });
}

}  // namespace settag
