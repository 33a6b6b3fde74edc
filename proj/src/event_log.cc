#include "radmine/event_log.h"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <set>

#include "radmine/hash.h"
#include "radmine/store.h"
#include "radmine/text_util.h"

namespace radmine {

namespace fs = std::filesystem;

namespace {

constexpr const char* kEventsFile = "events.jsonl";
constexpr const char* kSnapshotFile = "snapshot.json";

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string model_rel_path(uint32_t iteration) {
  return "models/model-t" + std::to_string(iteration) + ".bin";
}

struct Inputs {
  std::vector<LabeledSentence> seed;
  std::vector<Sentence> pool;
};

Inputs read_inputs(const Json& init) {
  Inputs in;
  auto check = [](const std::string& path, const std::string& bytes,
                  const std::string& expected) {
    if (hex64(fnv1a64(bytes)) != expected) {
      throw ReplayError("input file " + path + " changed since the session started");
    }
  };
  std::string seed_path = init.at("seed_path").get<std::string>();
  std::string pool_path = init.at("pool_path").get<std::string>();
  std::string seed_bytes = read_file(seed_path);
  std::string pool_bytes = read_file(pool_path);
  check(seed_path, seed_bytes, init.at("seed_fingerprint").get<std::string>());
  check(pool_path, pool_bytes, init.at("pool_fingerprint").get<std::string>());
  in.seed = parse_labeled_file(seed_bytes);
  in.pool = parse_sentence_store(pool_bytes);
  return in;
}

BootstrapConfig config_from_init(const Json& init) {
  BootstrapConfig c;
  merge_json(init.at("config"), &c);
  return c;
}

}  // namespace

Json Event::to_json() const {
  return {{"seq", seq}, {"type", type}, {"iteration", iteration},
          {"payload", payload}, {"timestamp", timestamp}};
}

Event Event::from_json(const Json& j) {
  Event e;
  e.seq = j.at("seq").get<uint64_t>();
  e.type = j.at("type").get<std::string>();
  e.iteration = j.at("iteration").get<uint32_t>();
  e.payload = j.at("payload");
  e.timestamp = j.value("timestamp", "");
  return e;
}

EventLog::EventLog(std::string path) : path_(std::move(path)) {
  fs::path parent = fs::path(path_).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw std::runtime_error("cannot open event log " + path_ + ": " +
                             std::strerror(errno));
  }
}

EventLog::~EventLog() {
  if (fd_ >= 0) ::close(fd_);
}

void EventLog::append(const Event& event) {
  std::string line = event.to_json().dump() + "\n";
  const char* p = line.data();
  size_t left = line.size();
  while (left > 0) {
    ssize_t n = ::write(fd_, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("write to " + path_ + " failed: " + std::strerror(errno));
    }
    p += n;
    left -= static_cast<size_t>(n);
  }
  if (::fsync(fd_) != 0) {
    throw std::runtime_error("fsync of " + path_ + " failed: " + std::strerror(errno));
  }
}

std::vector<Event> read_events(const std::string& path) {
  std::string text = read_file(path);
  std::vector<Event> events;
  size_t start = 0, line_no = 0;
  while (start < text.size()) {
    size_t nl = text.find('\n', start);
    if (nl == std::string::npos) break;  // torn final write
    ++line_no;
    std::string_view line(text.data() + start, nl - start);
    start = nl + 1;
    if (trim(line).empty()) continue;
    try {
      events.push_back(Event::from_json(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw ReplayError(path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return events;
}

Json QueueView::to_json() const {
  Json items_json = Json::array();
  for (const auto& item : items) items_json.push_back(radmine::to_json(item));
  return {{"iteration", iteration},       {"round_open", round_open},
          {"complete", complete},         {"fp_collected", fp_collected},
          {"fp_quota", fp_quota},         {"queue_size", queue_size},
          {"items", std::move(items_json)}};
}

std::unique_ptr<BootstrapSession> BootstrapSession::create(const std::string& dir,
                                                           const SessionSpec& spec) {
  std::string events_path = join(dir, kEventsFile);
  if (fs::exists(events_path) && fs::file_size(events_path) > 0) {
    throw std::runtime_error("a bootstrap session already exists in " + dir);
  }
  spec.config.validate();
  std::string seed_bytes = read_file(spec.seed_path);
  std::string pool_bytes = read_file(spec.pool_path);
  auto seed = parse_labeled_file(seed_bytes);
  auto pool = parse_sentence_store(pool_bytes);

  std::unique_ptr<BootstrapSession> s(new BootstrapSession);
  s->dir_ = dir;
  s->config_ = spec.config;
  s->auto_open_ = spec.auto_open;
  s->state_ = init_state(std::move(seed), pool, s->config_);
  s->log_ = std::make_unique<EventLog>(events_path);

  std::unique_lock lock(s->mu_);
  s->log_locked("init", {{"config", to_json(spec.config)},
                         {"seed_path", fs::absolute(spec.seed_path).string()},
                         {"pool_path", fs::absolute(spec.pool_path).string()},
                         {"seed_fingerprint", hex64(fnv1a64(seed_bytes))},
                         {"pool_fingerprint", hex64(fnv1a64(pool_bytes))},
                         {"auto_open", spec.auto_open},
                         {"model_hash", model_hash(s->state_.model)}});
  s->write_snapshot_locked();
  if (s->auto_open_) {
    open_annotation_round(s->state_, s->config_);
    s->log_locked("round_open", {{"k", s->state_.round->k}});
  }
  return s;
}

std::unique_ptr<BootstrapSession> BootstrapSession::load(const std::string& dir) {
  std::string events_path = join(dir, kEventsFile);
  auto events = read_events(events_path);
  if (events.empty() || events.front().type != "init") {
    throw ReplayError(events_path + " does not start with an init event");
  }
  const Json& init = events.front().payload;

  std::unique_ptr<BootstrapSession> s(new BootstrapSession);
  s->dir_ = dir;
  s->config_ = config_from_init(init);
  s->auto_open_ = init.value("auto_open", true);
  Inputs in = read_inputs(init);

  std::unique_lock lock(s->mu_);
  std::string snap_path = join(dir, kSnapshotFile);
  if (fs::exists(snap_path)) {
    Json snap = Json::parse(read_file(snap_path));
    BootstrapState& st = s->state_;
    st.iteration = snap.at("iteration").get<uint32_t>();
    std::map<SentenceId, std::pair<Label, uint32_t>> added;
    for (const auto& a : snap.at("additions")) {
      auto id = SentenceId::parse(a.at("sentence_id").get<std::string>());
      auto label = parse_label(a.at("label").get<std::string>());
      if (!id || !label) throw ReplayError("malformed snapshot addition");
      added[*id] = {*label, a.at("iteration").get<uint32_t>()};
    }
    st.training_set = std::move(in.seed);
    std::map<SentenceId, std::string> texts;
    for (auto& sent : in.pool) {
      if (added.contains(sent.id)) {
        texts[sent.id] = std::move(sent.text);
      } else {
        st.pool.emplace(sent.id, std::move(sent.text));
      }
    }
    // Additions go back in the order they were labeled.
    std::vector<LabeledSentence> ordered;
    for (const auto& rec_json : snap.at("history")) {
      IterationRecord rec = iteration_from_json(rec_json);
      for (const auto& r : rec.labels) {
        auto it = added.find(r.sentence_id);
        if (it == added.end() || !texts.contains(r.sentence_id)) {
          throw ReplayError("snapshot addition " + r.sentence_id.str() +
                            " is not in the pool file");
        }
        ordered.push_back({r.sentence_id, texts[r.sentence_id], it->second.first,
                           LabelSource::kBootstrap, it->second.second});
      }
      st.history.push_back(std::move(rec));
    }
    if (ordered.size() != added.size()) {
      throw ReplayError("snapshot additions disagree with its history");
    }
    st.training_set.insert(st.training_set.end(), ordered.begin(), ordered.end());
    st.model = load_model(join(dir, snap.at("model_file").get<std::string>()));
    if (model_hash(st.model) != snap.at("model_hash").get<std::string>()) {
      throw ReplayError("snapshot model does not match its recorded hash");
    }
    if (state_digest(st) != snap.at("digest").get<std::string>()) {
      throw ReplayError("snapshot state does not match its recorded digest");
    }
    s->seq_ = snap.at("seq").get<uint64_t>();
  } else {
    s->state_ = init_state(std::move(in.seed), in.pool, s->config_);
    s->seq_ = events.front().seq;
  }
  for (const auto& e : events) {
    if (e.seq > s->seq_) s->apply(e);
  }

  // Drop a torn tail so later appends start on a fresh line.
  std::string raw = read_file(events_path);
  size_t keep = raw.rfind('\n');
  keep = keep == std::string::npos ? 0 : keep + 1;
  if (keep != raw.size()) fs::resize_file(events_path, keep);
  s->log_ = std::make_unique<EventLog>(events_path);
  return s;
}

std::unique_ptr<BootstrapSession> BootstrapSession::replay(const std::string& log_path,
                                                           const std::string& out_dir) {
  auto events = read_events(log_path);
  if (events.empty() || events.front().type != "init") {
    throw ReplayError(log_path + " does not start with an init event");
  }
  const Json& init = events.front().payload;

  std::unique_ptr<BootstrapSession> s(new BootstrapSession);
  s->dir_ = out_dir;
  s->config_ = config_from_init(init);
  s->auto_open_ = init.value("auto_open", true);
  Inputs in = read_inputs(init);

  std::unique_lock lock(s->mu_);
  s->state_ = init_state(std::move(in.seed), in.pool, s->config_);
  if (init.contains("model_hash") &&
      init["model_hash"].get<std::string>() != model_hash(s->state_.model)) {
    throw ReplayError("retrained C_0 does not match the logged model hash");
  }
  s->seq_ = events.front().seq;

  std::unique_ptr<EventLog> copy;
  if (!out_dir.empty()) {
    std::string target = join(out_dir, kEventsFile);
    if (fs::exists(target)) fs::remove(target);
    copy = std::make_unique<EventLog>(target);
    copy->append(events.front());
    s->write_snapshot_locked();
  }
  for (size_t i = 1; i < events.size(); ++i) {
    s->apply(events[i]);
    if (copy) copy->append(events[i]);
  }
  return s;
}

void BootstrapSession::apply(const Event& e) {
  if (e.seq != seq_ + 1) {
    throw ReplayError("event sequence gap: expected " + std::to_string(seq_ + 1) +
                      ", found " + std::to_string(e.seq));
  }
  if (e.iteration != state_.iteration) {
    throw ReplayError("event " + std::to_string(e.seq) + " is for iteration " +
                      std::to_string(e.iteration) + " but replay is at " +
                      std::to_string(state_.iteration));
  }
  try {
    if (e.type == "round_open") {
      open_annotation_round(state_, config_);
    } else if (e.type == "label") {
      submit_label(state_, config_, annotation_from_json(e.payload), false);
    } else if (e.type == "round_close") {
      close_round(state_, config_);
      std::string logged = e.payload.at("model_hash").get<std::string>();
      if (logged != model_hash(state_.model)) {
        throw ReplayError("event " + std::to_string(e.seq) +
                          ": retrained model hash " + model_hash(state_.model) +
                          " differs from logged " + logged);
      }
    } else {
      throw ReplayError("event " + std::to_string(e.seq) + ": unexpected type '" +
                        e.type + "'");
    }
  } catch (const BootstrapError& err) {
    throw ReplayError("event " + std::to_string(e.seq) + " cannot be applied: " +
                      err.what());
  }
  seq_ = e.seq;
  if (e.type == "round_close" && !dir_.empty()) write_snapshot_locked();
}

void BootstrapSession::log_locked(const std::string& type, Json payload) {
  log_locked(type, std::move(payload), state_.iteration);
}

void BootstrapSession::log_locked(const std::string& type, Json payload,
                                  uint32_t iteration) {
  Event e;
  e.seq = seq_ + 1;
  e.type = type;
  e.iteration = iteration;
  e.payload = std::move(payload);
  e.timestamp = utc_timestamp();
  log_->append(e);
  seq_ = e.seq;
}

void BootstrapSession::write_snapshot_locked() {
  Json additions = Json::array();
  for (const auto& s : state_.training_set) {
    if (s.source != LabelSource::kBootstrap) continue;
    additions.push_back({{"sentence_id", s.id.str()},
                         {"label", label_name(s.label)},
                         {"iteration", s.iteration}});
  }
  Json history = Json::array();
  for (const auto& rec : state_.history) history.push_back(to_json(rec));
  std::string rel = model_rel_path(state_.iteration);
  save_model(state_.model, join(dir_, rel));
  Json snap = {{"seq", seq_},
               {"iteration", state_.iteration},
               {"model_file", rel},
               {"model_hash", model_hash(state_.model)},
               {"additions", std::move(additions)},
               {"history", std::move(history)},
               {"digest", state_digest(state_)}};
  write_file_atomic(join(dir_, kSnapshotFile), snap.dump(1) + "\n");
}

// Called after close_round: the event belongs to the round just closed.
void BootstrapSession::log_close_locked() {
  const IterationRecord& closed = state_.history.back();
  log_locked("round_close",
             {{"model_hash", model_hash(state_.model)},
              {"precision_at_k", closed.precision_at_k}},
             closed.iteration);
}

void BootstrapSession::after_close_locked() {
  write_snapshot_locked();
  if (auto_open_ && state_.iteration < config_.max_iterations && !state_.pool.empty()) {
    open_annotation_round(state_, config_);
    log_locked("round_open", {{"k", state_.round->k}});
  }
}

QueueView BootstrapSession::queue() const {
  std::shared_lock lock(mu_);
  QueueView v;
  v.iteration = state_.iteration;
  v.round_open = state_.round.has_value();
  v.complete = !v.round_open && (state_.iteration >= config_.max_iterations ||
                                 state_.pool.empty());
  v.fp_collected = state_.fp_collected();
  v.fp_quota = config_.fp_quota;
  v.queue_size = config_.queue_size;
  v.items = state_.queue_items();
  return v;
}

std::vector<IterationRecord> BootstrapSession::history() const {
  std::shared_lock lock(mu_);
  return state_.history;
}

std::string BootstrapSession::digest() const {
  std::shared_lock lock(mu_);
  return state_digest(state_);
}

std::string BootstrapSession::current_model_hash() const {
  std::shared_lock lock(mu_);
  return model_hash(state_.model);
}

ClassifierModel BootstrapSession::model() const {
  std::shared_lock lock(mu_);
  return state_.model;
}

std::vector<LabeledSentence> BootstrapSession::training_set() const {
  std::shared_lock lock(mu_);
  return state_.training_set;
}

uint64_t BootstrapSession::events_applied() const {
  std::shared_lock lock(mu_);
  return seq_;
}

SubmitAck BootstrapSession::submit(AnnotationRecord record) {
  std::unique_lock lock(mu_);
  if (record.timestamp.empty()) record.timestamp = utc_timestamp();
  SubmitAck ack = submit_label(state_, config_, record, false);
  log_locked("label", to_json(record));
  if (round_closable(state_, config_)) {
    close_round(state_, config_);
    log_close_locked();
    after_close_locked();
    ack.round_closed = true;
  }
  ack.queue_size = state_.round ? state_.round->queue.size() : 0;
  return ack;
}

void BootstrapSession::close() {
  std::unique_lock lock(mu_);
  close_round(state_, config_);
  log_close_locked();
  after_close_locked();
}

void BootstrapSession::open() {
  std::unique_lock lock(mu_);
  open_annotation_round(state_, config_);
  log_locked("round_open", {{"k", state_.round->k}});
}

}  // namespace radmine
