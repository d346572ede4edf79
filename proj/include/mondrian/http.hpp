#pragma once

#include <string>

#include "httplib.h"
#include "mondrian/service.hpp"

namespace mondrian {

namespace detail {

inline void send(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(dump(r.body, -1), "application/json");
}

inline bool parse_body(const httplib::Request& req, httplib::Response& res, json& out) {
  if (req.body.empty()) {
    out = json::object();
    return true;
  }
  try {
    out = json::parse(req.body);
    return true;
  } catch (const json::parse_error& e) {
    send(res, error_response(400, "bad_request", e.what()));
    return false;
  }
}

}  // namespace detail

/// Registers the JSON API routes of a workspace on a server.
inline void mount(httplib::Server& server, Workspace& ws) {
  using httplib::Request;
  using httplib::Response;

  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS"}});
  server.Options(R"(.*)", [](const Request&, Response& res) { res.status = 204; });

  server.Post("/files", [&ws](const Request& req, Response& res) {
    std::string name = req.get_param_value("name");
    std::string content = req.body;
    if (req.get_header_value("Content-Type").rfind("application/json", 0) == 0) {
      json body;
      if (!detail::parse_body(req, res, body)) return;
      if (!body.is_object() || !body.contains("content") || !body["content"].is_string()) {
        detail::send(res, error_response(400, "bad_request", "body needs a content string"));
        return;
      }
      content = body["content"].get<std::string>();
      name = body.value("name", name);
    }
    detail::send(res, ws.upload(name, content));
  });
  server.Get(R"(/files/([^/]+)/grid)", [&ws](const Request& req, Response& res) {
    detail::send(res, ws.grid(req.matches[1]));
  });
  server.Post(R"(/files/([^/]+)/detect)", [&ws](const Request& req, Response& res) {
    json body;
    if (!detail::parse_body(req, res, body)) return;
    detail::send(res, ws.detect(req.matches[1], body));
  });
  server.Get(R"(/files/([^/]+)/regions)", [&ws](const Request& req, Response& res) {
    detail::send(res, ws.regions(req.matches[1]));
  });
  server.Put(R"(/files/([^/]+)/regions)", [&ws](const Request& req, Response& res) {
    json body;
    if (!detail::parse_body(req, res, body)) return;
    detail::send(res, ws.put_regions(req.matches[1], body));
  });
  server.Post(R"(/files/([^/]+)/split)", [&ws](const Request& req, Response& res) {
    detail::send(res, ws.split(req.matches[1]));
  });
  server.Get("/templates", [&ws](const Request&, Response& res) {
    detail::send(res, ws.templates());
  });
  server.Post("/corpus/infer", [&ws](const Request& req, Response& res) {
    json body;
    if (!detail::parse_body(req, res, body)) return;
    detail::send(res, ws.infer(body));
  });
  server.set_exception_handler([](const Request&, Response& res, std::exception_ptr ep) {
    mondrian::Response r;
    try {
      std::rethrow_exception(ep);
    } catch (const Error& e) {
      r = error_response(e);
    } catch (const std::exception& e) {
      r = error_response(500, "internal", e.what());
    }
    detail::send(res, r);
  });
  server.set_error_handler([](const Request& req, Response& res) {
    if (!res.body.empty()) return;
    detail::send(res, error_response(res.status, res.status == 404 ? "not_found" : "error",
                                     "no route for " + req.method + " " + req.path));
  });
}

}  // namespace mondrian
