#ifndef RADMINE_EVENT_LOG_H_
#define RADMINE_EVENT_LOG_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "radmine/bootstrap.h"
#include "radmine/json_io.h"

namespace radmine {

class ReplayError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One line of events.jsonl.
struct Event {
  uint64_t seq = 0;
  std::string type;  // init | round_open | label | round_close
  uint32_t iteration = 0;
  Json payload = Json::object();
  std::string timestamp;

  Json to_json() const;
  static Event from_json(const Json& j);
};

// Append-only JSON-lines log. Every append is flushed and fsync'd before it
// returns.
class EventLog {
 public:
  EventLog() = default;
  explicit EventLog(std::string path);  // opens for append, creating the file
  ~EventLog();
  EventLog(const EventLog&) = delete;
  EventLog& operator=(const EventLog&) = delete;

  void append(const Event& event);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  int fd_ = -1;
};

// An unterminated final line (a write cut short by a crash) is dropped.
// Any other malformed line throws ReplayError.
std::vector<Event> read_events(const std::string& path);

struct SessionSpec {
  std::string seed_path;  // labeled file
  std::string pool_path;  // sentence store
  BootstrapConfig config;
  bool auto_open = true;  // open the next round whenever one closes
};

struct QueueView {
  uint32_t iteration = 0;
  bool round_open = false;
  bool complete = false;  // no further round can open
  size_t fp_collected = 0;
  size_t fp_quota = 0;
  size_t queue_size = 0;  // K
  std::vector<QueueItem> items;

  Json to_json() const;
};

// Shared mutex that does not starve writers. A pending writer holds the
// gate, so readers that arrive after it queue behind it.
class WriterPreferringMutex {
 public:
  void lock() {
    std::lock_guard gate(gate_);
    mu_.lock();
  }
  void unlock() { mu_.unlock(); }
  void lock_shared() {
    std::lock_guard gate(gate_);
    mu_.lock_shared();
  }
  void unlock_shared() { mu_.unlock_shared(); }

 private:
  std::mutex gate_;
  std::shared_mutex mu_;
};

// A bootstrap run persisted under one directory:
//   events.jsonl      every mutation, in order
//   snapshot.json     state as of the last closed round
//   models/model-tN.bin
// Reads take a shared lock; mutations are serialized by a single writer lock
// and are logged before they are acknowledged.
class BootstrapSession {
 public:
  static std::unique_ptr<BootstrapSession> create(const std::string& dir,
                                                  const SessionSpec& spec);
  // Snapshot plus the events logged after it.
  static std::unique_ptr<BootstrapSession> load(const std::string& dir);
  // Rebuilds state from the init event alone. With a non-empty out_dir the
  // replayed log, snapshot and models are written there.
  static std::unique_ptr<BootstrapSession> replay(const std::string& log_path,
                                                  const std::string& out_dir = "");

  QueueView queue() const;
  std::vector<IterationRecord> history() const;
  std::string digest() const;
  std::string current_model_hash() const;
  ClassifierModel model() const;
  std::vector<LabeledSentence> training_set() const;
  const BootstrapConfig& config() const { return config_; }
  const std::string& dir() const { return dir_; }
  uint64_t events_applied() const;

  SubmitAck submit(AnnotationRecord record);
  // Closes the open round if the quota is met or the pool has run dry.
  void close();
  // Opens a round if none is open (only needed when auto_open is off).
  void open();

 private:
  BootstrapSession() = default;

  void apply(const Event& event);
  void log_locked(const std::string& type, Json payload);
  void log_locked(const std::string& type, Json payload, uint32_t iteration);
  void log_close_locked();
  void after_close_locked();
  void write_snapshot_locked();

  mutable WriterPreferringMutex mu_;
  std::string dir_;
  BootstrapConfig config_;
  bool auto_open_ = true;
  BootstrapState state_;
  std::unique_ptr<EventLog> log_;  // null while replaying
  uint64_t seq_ = 0;
};

}  // namespace radmine

#endif  // RADMINE_EVENT_LOG_H_
