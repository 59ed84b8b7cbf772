#include <spdlog/spdlog.h>

#include "httplib.h"

#include "epibias/report_json.hpp"
#include "epibias/server.hpp"

namespace epibias {

namespace {

using nlohmann::json;

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const ApiError& e) { send_json(res, e.status, e.to_json()); }

Error bad_request(const std::string& msg) { return Error(ErrorCode::BadRequest, msg, "request"); }

json parse_body(const httplib::Request& req) {
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw bad_request("request body must be a JSON object");
    return j;
  } catch (const json::parse_error& ex) {
    throw bad_request(std::string("malformed JSON: ") + ex.what());
  }
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (!j[key].is_string()) throw bad_request(std::string("'") + key + "' must be a string");
  return j[key].get<std::string>();
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(',', start);
    if (end == std::string::npos) end = s.size();
    std::string part = s.substr(start, end - start);
    if (!part.empty()) out.push_back(std::move(part));
    start = end + 1;
  }
  return out;
}

json job_json(const JobSnapshot& s) {
  json reports = json::array();
  for (const auto& r : s.reports) reports.push_back(to_json(r));
  json errors = json::array();
  for (const auto& [index, e] : s.errors) errors.push_back({{"index", index}, {"error", e.to_json()["error"]}});
  const double progress = s.total == 0 ? 1.0 : static_cast<double>(s.completed) / static_cast<double>(s.total);
  return {{"job_id", s.id},
          {"status", to_string(s.status)},
          {"total", s.total},
          {"completed", s.completed},
          {"progress", progress},
          {"reports", reports},
          {"errors", errors}};
}

// Wraps a handler so library errors become ApiError responses.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, api_error_for(e));
    } catch (const std::exception& e) {
      spdlog::error("unhandled error on {} {}: {}", req.method, req.path, e.what());
      send_error(res, ApiError{500, "internal", e.what(), ""});
    }
  };
}

}  // namespace

json ApiError::to_json() const {
  return {{"error", {{"code", code}, {"message", message}, {"stage", stage.empty() ? json(nullptr) : json(stage)}}}};
}

ApiError api_error_for(const Error& e) {
  ApiError a;
  a.message = e.what();
  a.stage = e.stage();
  switch (e.code()) {
    case ErrorCode::NotEnoughContext: a.status = 422; a.code = "not_enough_context"; break;
    case ErrorCode::EmptyInput: a.status = 400; a.code = "empty_input"; break;
    case ErrorCode::BackendUnavailable: a.status = 503; a.code = "backend_unavailable"; break;
    case ErrorCode::BadRequest:
    case ErrorCode::MissingSubject:
    case ErrorCode::ParseError: a.status = 400; a.code = "bad_request"; break;
    case ErrorCode::UnknownJob:
    case ErrorCode::UnknownDocument:
    case ErrorCode::UnknownSubject: a.status = 404; a.code = "not_found"; break;
    default: a.status = 500; a.code = "internal"; break;
  }
  return a;
}

ApiServer::ApiServer(std::shared_ptr<const Engine> engine, std::shared_ptr<DocumentStore> documents,
                     ServerConfig config)
    : engine_(std::move(engine)),
      documents_(std::move(documents)),
      config_(std::move(config)),
      http_(std::make_unique<httplib::Server>()) {
  jobs_ = std::make_unique<JobManager>(
      [engine = engine_](const BatchItem& item) { return analyze_sentence(item.text, item.subject, *engine); },
      config_.workers);
  routes();
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::routes() {
  httplib::Server& s = *http_;
  s.set_default_headers({{"Access-Control-Allow-Origin", config_.cors_origin},
                         {"Access-Control-Allow-Headers", "Content-Type"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  s.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}});
  });

  s.Post("/analyze", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    if (!body.contains("text") || !body["text"].is_string()) throw bad_request("'text' is required");
    const std::string text = body["text"].get<std::string>();
    const auto subject = optional_string(body, "subject");
    send_json(res, 200, to_json(analyze_sentence(text, subject, *engine_)));
  }));

  s.Post("/batch", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const json body = parse_body(req);
    std::vector<BatchItem> items;
    if (body.contains("document_ids")) {
      if (!documents_) throw Error(ErrorCode::UnknownDocument, "no document store loaded", "batch");
      if (!body["document_ids"].is_array()) throw bad_request("'document_ids' must be an array");
      for (const json& id : body["document_ids"]) {
        if (!id.is_string()) throw bad_request("document ids must be strings");
        const auto doc = documents_->get(id.get<std::string>());
        if (!doc) throw Error(ErrorCode::UnknownDocument, "unknown document " + id.get<std::string>(), "batch");
        items.push_back({doc->headline, doc->subject, doc->id});
      }
    } else if (body.contains("texts")) {
      if (!body["texts"].is_array()) throw bad_request("'texts' must be an array");
      for (const json& t : body["texts"]) {
        if (t.is_string()) {
          items.push_back({t.get<std::string>(), std::nullopt, std::nullopt});
        } else if (t.is_object() && t.contains("text") && t["text"].is_string()) {
          items.push_back({t["text"].get<std::string>(), optional_string(t, "subject"), std::nullopt});
        } else {
          throw bad_request("each text must be a string or {text, subject?}");
        }
      }
    } else {
      throw bad_request("expected 'document_ids' or 'texts'");
    }
    const std::string id = jobs_->submit(std::move(items));
    send_json(res, 202, {{"job_id", id}});
  }));

  s.Get(R"(/batch/([A-Za-z0-9\-]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, job_json(jobs_->snapshot(req.matches[1].str())));
  }));

  s.Get("/breakdown", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const std::vector<std::string> subjects = split_csv(req.get_param_value("subjects"));
    if (subjects.size() != 2) throw bad_request("'subjects' must name two subjects, e.g. subjects=Meghan,Kate");
    double margin = 0.25;
    if (req.has_param("margin")) {
      try {
        margin = std::stod(req.get_param_value("margin"));
      } catch (const std::exception&) {
        throw bad_request("'margin' must be a number");
      }
    }
    const std::vector<AnalysisReport> reports =
        req.has_param("job") ? jobs_->snapshot(req.get_param_value("job")).reports : jobs_->completed_reports();
    send_json(res, 200, breakdown_document(reports, subjects[0], subjects[1], margin));
  }));

  s.Get(R"(/lexicon/(.+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, to_json(engine_->lexicon->lookup(req.matches[1].str())));
  }));

  s.Get(R"(/resources/([a-z_]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const std::string name = req.matches[1].str();
    const auto type = parse_bias_type(name);
    const BiasResource* r = type ? engine_->resources->find(*type) : nullptr;
    if (!r) {
      send_error(res, ApiError{404, "not_found", "unknown bias type " + name, "resources"});
      return;
    }
    send_json(res, 200, to_json(*r));
  }));

  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send_error(res, ApiError{res.status, res.status == 404 ? "not_found" : "bad_request", "no such route", ""});
  });
}

bool ApiServer::listen(const std::string& host, int port) {
  spdlog::info("listening on {}:{}", host, port);
  return http_->listen(host, port);
}

int ApiServer::start_background(const std::string& host) {
  const int port = http_->bind_to_any_port(host);
  if (port <= 0) throw Error(ErrorCode::IoError, "cannot bind a port on " + host, "server");
  background_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return port;
}

void ApiServer::stop() {
  if (http_) http_->stop();
  if (background_.joinable()) background_.join();
}

}  // namespace epibias
