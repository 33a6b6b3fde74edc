#ifndef RADMINE_HTTP_API_H_
#define RADMINE_HTTP_API_H_

#include <memory>
#include <string>
#include <thread>

#include "radmine/event_log.h"
#include "radmine/report.h"

namespace httplib {
class Server;
}

namespace radmine {

// JSON over HTTP for the annotation loop and the phrase browser.
//
//   GET  /api/health
//   GET  /api/queue
//   POST /api/labels          AnnotationRecord
//   POST /api/rounds/close
//   GET  /api/iterations
//   GET  /api/phrases?min_freq=N
//   GET  /api/phrases/{phrase}/sentences
//
// Errors are {"code", "message", "detail"} with status 400 (malformed
// request), 404 (unknown route, phrase or missing report), 409 (label for an
// id not being served, duplicate label, no open round), 412 (close before the
// quota is met; detail.remaining) or 503 (no session loaded).
// Only the two POST routes change state.
class ApiServer {
 public:
  // Either pointer may be null; the matching routes then answer 503 / 404.
  // `report` should be rendered with min_freq 1 so any threshold can be served.
  ApiServer(BootstrapSession* session, std::shared_ptr<const PhraseReport> report,
            uint64_t default_min_freq = kDefaultMinFreq);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  void listen();  // blocks until stop()
  void start();   // listen() on a background thread
  void stop();

 private:
  void routes();

  BootstrapSession* session_;
  std::shared_ptr<const PhraseReport> report_;
  uint64_t default_min_freq_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace radmine

#endif  // RADMINE_HTTP_API_H_
