#include "radmine/http_api.h"

#include <charconv>

#include "httplib.h"

namespace radmine {

namespace {

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string code,
                std::string message, Json detail = Json::object()) {
  send_json(res, status,
            {{"code", std::move(code)}, {"message", std::move(message)},
             {"detail", std::move(detail)}});
}

void send_bootstrap_error(httplib::Response& res, const BootstrapError& e) {
  Json ids = Json::array();
  for (const auto& id : e.ids()) ids.push_back(id.str());
  Json detail = {{"ids", ids}};
  int status = 409;
  if (e.kind() == BootstrapError::Kind::kQuotaUnmet) {
    status = 412;
    detail["remaining"] = e.remaining();
  }
  if (e.ids().size() == 1) detail["sentence_id"] = e.ids().front().str();
  send_error(res, status, std::string(bootstrap_error_code(e.kind())), e.what(), detail);
}

}  // namespace

ApiServer::ApiServer(BootstrapSession* session, std::shared_ptr<const PhraseReport> report,
                     uint64_t default_min_freq)
    : session_(session),
      report_(std::move(report)),
      default_min_freq_(default_min_freq),
      server_(std::make_unique<httplib::Server>()) {
  routes();
}

ApiServer::~ApiServer() { stop(); }

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    int bound = server_->bind_to_any_port(host);
    if (bound < 0) throw std::runtime_error("cannot bind " + host);
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void ApiServer::listen() { server_->listen_after_bind(); }

void ApiServer::start() {
  thread_ = std::thread([this] { listen(); });
  server_->wait_until_ready();
}

void ApiServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void ApiServer::routes() {
  httplib::Server& s = *server_;

  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    if (res.status == 404) {
      send_error(res, 404, "not_found", "no route for " + req.method + " " + req.path);
    }
  });
  s.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          send_error(res, 500, "internal", e.what());
        } catch (...) {
          send_error(res, 500, "internal", "unknown error");
        }
      });

  auto need_session = [this](httplib::Response& res) {
    if (session_) return true;
    send_error(res, 503, "no_session", "no bootstrap session is loaded");
    return false;
  };

  s.Get("/api/health", [this](const httplib::Request&, httplib::Response& res) {
    Json body = {{"status", "ok"}, {"session", session_ != nullptr},
                 {"report", report_ != nullptr}};
    if (session_) {
      QueueView q = session_->queue();
      body["iteration"] = q.iteration;
      body["round_open"] = q.round_open;
      body["complete"] = q.complete;
      body["events"] = session_->events_applied();
      body["model_hash"] = session_->current_model_hash();
    }
    send_json(res, 200, body);
  });

  s.Get("/api/queue", [this, need_session](const httplib::Request&, httplib::Response& res) {
    if (!need_session(res)) return;
    send_json(res, 200, session_->queue().to_json());
  });

  s.Post("/api/labels", [this, need_session](const httplib::Request& req,
                                             httplib::Response& res) {
    if (!need_session(res)) return;
    Json body = Json::parse(req.body, nullptr, false);
    if (body.is_discarded()) {
      send_error(res, 400, "malformed_body", "request body is not valid JSON");
      return;
    }
    AnnotationRecord record;
    try {
      record = annotation_from_json(body);
    } catch (const std::invalid_argument& e) {
      send_error(res, 400, "malformed_body", e.what());
      return;
    }
    try {
      send_json(res, 200, to_json(session_->submit(record)));
    } catch (const BootstrapError& e) {
      send_bootstrap_error(res, e);
    }
  });

  s.Post("/api/rounds/close", [this, need_session](const httplib::Request&,
                                                   httplib::Response& res) {
    if (!need_session(res)) return;
    try {
      session_->close();
    } catch (const BootstrapError& e) {
      send_bootstrap_error(res, e);
      return;
    }
    auto history = session_->history();
    Json body = {{"closed", to_json(history.back(), false)},
                 {"queue", session_->queue().to_json()}};
    send_json(res, 200, body);
  });

  s.Get("/api/iterations", [this, need_session](const httplib::Request&,
                                                httplib::Response& res) {
    if (!need_session(res)) return;
    Json rows = Json::array();
    for (const auto& r : session_->history()) rows.push_back(to_json(r, false));
    send_json(res, 200, {{"iterations", rows}});
  });

  s.Get("/api/phrases", [this](const httplib::Request& req, httplib::Response& res) {
    if (!report_) {
      send_error(res, 404, "no_report", "no phrase report is available; run extract");
      return;
    }
    uint64_t min_freq = default_min_freq_;
    if (req.has_param("min_freq")) {
      std::string v = req.get_param_value("min_freq");
      auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), min_freq);
      if (ec != std::errc() || p != v.data() + v.size() || min_freq == 0) {
        send_error(res, 400, "bad_parameter", "min_freq must be a positive integer",
                   {{"min_freq", v}});
        return;
      }
    }
    Json rows = Json::array();
    for (size_t i = 0; i < report_->rows.size(); ++i) {
      const ReportRow& row = report_->rows[i];
      if (row.stat.frequency < min_freq) continue;
      Json r = row_to_json(row, i + 1);
      r.erase("exemplars");
      r["exemplar_ids"] = Json::array();
      for (const auto& id : row.stat.exemplars) r["exemplar_ids"].push_back(id.str());
      rows.push_back(std::move(r));
    }
    send_json(res, 200, {{"min_freq", min_freq}, {"phrases", rows}});
  });

  s.Get(R"(/api/phrases/(.+)/sentences)", [this](const httplib::Request& req,
                                                 httplib::Response& res) {
    std::string phrase = req.matches[1];
    if (!report_) {
      send_error(res, 404, "no_report", "no phrase report is available; run extract");
      return;
    }
    const ReportRow* row = report_->find(phrase);
    if (!row) {
      send_error(res, 404, "unknown_phrase", "phrase '" + phrase + "' is not in the report",
                 {{"phrase", phrase}});
      return;
    }
    Json r = row_to_json(*row, 0);
    r.erase("rank");
    send_json(res, 200, r);
  });
}

}  // namespace radmine
