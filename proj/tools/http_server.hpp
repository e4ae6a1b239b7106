#pragma once

namespace httplib {
class Server;
}

namespace settag {

class AnnotationService;

// Registers the /api routes of `service` on `server`. Every response carries
// an X-Schema-Version header; JSON bodies also contain "schema_version".
void mount_annotation_api(httplib::Server& server, AnnotationService& service);

}  // namespace settag
