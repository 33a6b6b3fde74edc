#include "radmine/cli.h"

#include <signal.h>

#include <filesystem>
#include <iostream>
#include <set>

#include "CLI11.hpp"
#include "radmine/annotator.h"
#include "radmine/config.h"
#include "radmine/event_log.h"
#include "radmine/hash.h"
#include "radmine/http_api.h"
#include "radmine/pipeline.h"
#include "radmine/report.h"
#include "radmine/store.h"
#include "radmine/synth.h"
#include "radmine/text_util.h"

namespace radmine {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config_path;
  uint64_t seed = 0;
  bool seed_given = false;
  std::string out = "work";
};

void add_common(CLI::App* sub, Common* c) {
  sub->add_option("--config", c->config_path, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option_function<uint64_t>(
      "--seed",
      [c](const uint64_t& v) {
        c->seed = v;
        c->seed_given = true;
      },
      "Run seed; overrides the config");
  sub->add_option("--out", c->out, "Workspace directory")->capture_default_str();
}

std::optional<Config> requested_config(const Common& c) {
  std::optional<Config> cfg;
  if (!c.config_path.empty()) cfg = Config::load(c.config_path);
  if (c.seed_given) {
    if (!cfg) {
      cfg = fs::exists(WorkspacePaths{c.out}.run())
                ? PipelineRun::open(c.out, std::nullopt).config()
                : Config{};
    }
    cfg->seed = c.seed;
  }
  return cfg;
}

PipelineRun open_run(const Common& c) { return PipelineRun::open(c.out, requested_config(c)); }

// Marks a stage running; a completed stage is never re-entered.
void begin(PipelineRun& run, Stage stage) {
  if (run.status(stage) == StageStatus::kComplete) {
    throw PipelineError(PipelineError::Kind::kStatusRegression,
                        "stage '" + std::string(stage_name(stage)) +
                            "' is already complete in " + run.run_id() +
                            "; start a new run with a fresh --out");
  }
  if (run.status(stage) == StageStatus::kPending) run.advance(stage, StageStatus::kRunning);
}

void missing_input(Stage stage, const std::string& what) {
  throw PipelineError(PipelineError::Kind::kStagePrecondition,
                      "stage '" + std::string(stage_name(stage)) + "' requires " + what);
}

bool session_exists(const std::string& dir) {
  fs::path p = fs::path(dir) / "events.jsonl";
  return fs::exists(p) && fs::file_size(p) > 0;
}

std::string absolute(const std::string& path) { return fs::absolute(path).string(); }

// ---- ingest ---------------------------------------------------------------

struct IngestArgs {
  std::string root;
  std::string min_date;
  bool include_undated = false;
  unsigned threads = 0;
  CLI::Option* threads_opt = nullptr;
};

int do_ingest(const Common& c, const IngestArgs& a, std::ostream& out) {
  PipelineRun run = open_run(c);
  IngestOptions opts = run.config().corpus;
  if (!a.min_date.empty()) {
    auto d = parse_date(a.min_date);
    if (!d) throw std::invalid_argument("--min-date is not a date: " + a.min_date);
    opts.filter.min_publish_date = *d;
  }
  if (a.include_undated) opts.filter.include_undated = true;
  if (a.threads_opt->count()) opts.threads = a.threads;

  begin(run, Stage::kIngest);
  IngestResult r = ingest_corpus(a.root, opts);
  std::vector<Sentence> sentences = segment_corpus(r.articles, &r.report);
  std::string store = write_sentence_store(sentences);
  write_file_atomic(run.paths().sentences(), store);
  write_file_atomic(run.paths().ingest_report(), r.report.to_json() + "\n");
  run.set_corpus_fingerprint(hex64(fnv1a64(store)));
  run.advance(Stage::kIngest, StageStatus::kComplete);
  out << r.report.to_json() << "\n";
  return 0;
}

// ---- train ----------------------------------------------------------------

int do_train(const Common& c, const std::string& seed_set, std::ostream& out) {
  PipelineRun run = open_run(c);
  begin(run, Stage::kTrain);
  std::vector<LabeledSentence> data = load_labeled_file(seed_set);
  TrainResult tr = train(data, run.config().train_options());
  save_model(tr.model, run.paths().model());
  write_file_atomic(run.paths().model_text(), export_model_text(tr.model));
  Json metrics = {{"examples", data.size()},
                  {"train_count", tr.train_count},
                  {"validation", to_json(tr.validation)},
                  {"model_hash", model_hash(tr.model)},
                  {"seed_set", absolute(seed_set)}};
  write_file_atomic(run.paths().metrics(), metrics.dump(2) + "\n");
  run.advance(Stage::kTrain, StageStatus::kComplete);
  out << metrics.dump() << "\n";
  return 0;
}

// ---- score ----------------------------------------------------------------

int do_score(const Common& c, const std::string& model_path,
             const std::string& sentences_path, std::ostream& out) {
  PipelineRun run = open_run(c);
  if (run.status(Stage::kExtract) != StageStatus::kPending) {
    throw PipelineError(PipelineError::Kind::kStatusRegression,
                        "predictions are frozen once extract has started in " +
                            run.run_id());
  }
  ClassifierModel model;
  std::string source;
  if (!model_path.empty()) {
    model = load_model(model_path);
    source = absolute(model_path);
  } else if (session_exists(run.paths().session())) {
    auto s = BootstrapSession::load(run.paths().session());
    model = s->model();
    source = "bootstrap C_" + std::to_string(s->queue().iteration);
  } else if (fs::exists(run.paths().model())) {
    model = load_model(run.paths().model());
    source = run.paths().model();
  } else {
    throw PipelineError(PipelineError::Kind::kStagePrecondition,
                        "score requires a model: run train or bootstrap-serve first, "
                        "or pass --model");
  }
  std::vector<Sentence> sentences;
  if (!sentences_path.empty()) {
    sentences = load_sentence_store(sentences_path);
  } else {
    run.require(Stage::kExtract, Stage::kIngest);
    sentences = load_sentence_store(run.paths().sentences());
  }
  std::vector<Prediction> ranked = rank_descending(score(model, sentences));
  write_file_atomic(run.paths().predictions(), write_predictions(ranked));
  double threshold = run.config().classifier.threshold;
  size_t positive = std::count_if(ranked.begin(), ranked.end(),
                                  [&](const Prediction& p) { return p.score >= threshold; });
  out << Json{{"scored", ranked.size()},
              {"positive", positive},
              {"threshold", threshold},
              {"model", source},
              {"model_hash", model_hash(model)}}
             .dump()
      << "\n";
  return 0;
}

// ---- bootstrap-serve ------------------------------------------------------

struct ServeArgs {
  std::string seed_set;
  std::string pool;
  std::vector<std::string> labels;
  std::string annotator;
  bool close = false;
  bool open = false;
  bool queue = false;
  std::string host;
  int port = -1;
  std::string port_file;
};

std::shared_ptr<const PhraseReport> load_served_report(const PipelineRun& run) {
  if (run.status(Stage::kExtract) != StageStatus::kComplete) return nullptr;
  auto stats = parse_phrase_file(read_file(run.paths().phrases()));
  auto mined = load_sentence_store(run.paths().mined());
  return std::make_shared<const PhraseReport>(render_report(stats, mined, 1));
}

void block_stop_signals(sigset_t* set) {
  sigemptyset(set);
  sigaddset(set, SIGINT);
  sigaddset(set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, set, nullptr);
}

int do_serve(const Common& c, const ServeArgs& a, std::ostream& out, std::ostream& err) {
  PipelineRun run = open_run(c);
  const Config& cfg = run.config();
  std::string dir = run.paths().session();
  std::unique_ptr<BootstrapSession> session;
  if (!session_exists(dir)) {
    if (a.seed_set.empty()) {
      missing_input(Stage::kBootstrap,
                    "a session; none exists in " + dir + ", pass --seed-set to start one");
    }
    std::string pool = a.pool;
    if (pool.empty()) {
      run.require(Stage::kBootstrap, Stage::kIngest);
      pool = run.paths().sentences();
    }
    begin(run, Stage::kBootstrap);
    session = BootstrapSession::create(
        dir, {absolute(a.seed_set), absolute(pool), cfg.bootstrap_config(), cfg.auto_open});
  } else {
    if (!a.seed_set.empty() || !a.pool.empty()) {
      err << "note: session exists in " << dir << "; --seed-set and --pool are ignored\n";
    }
    session = BootstrapSession::load(dir);
  }

  bool acted = false;
  for (const std::string& spec : a.labels) {
    acted = true;
    size_t eq = spec.rfind('=');
    std::optional<SentenceId> id;
    std::optional<Label> label;
    if (eq != std::string::npos) {
      id = SentenceId::parse(spec.substr(0, eq));
      label = parse_label(spec.substr(eq + 1));
    }
    if (!id || !label) {
      throw std::invalid_argument("--label expects ID=pos|neg, got '" + spec + "'");
    }
    SubmitAck ack = session->submit({*id, *label, a.annotator, ""});
    out << to_json(ack).dump() << "\n";
  }
  if (a.open) {
    acted = true;
    session->open();
  }
  if (a.close) {
    acted = true;
    session->close();
    out << to_json(session->history().back(), false).dump() << "\n";
  }
  if (a.queue) {
    acted = true;
    out << session->queue().to_json().dump(2) << "\n";
  }
  if (session->queue().complete && run.status(Stage::kBootstrap) != StageStatus::kComplete) {
    run.advance(Stage::kBootstrap, StageStatus::kComplete);
  }
  if (acted) return 0;

  sigset_t stop;
  block_stop_signals(&stop);
  ApiServer server(session.get(), load_served_report(run), cfg.report_min_freq);
  std::string host = a.host.empty() ? cfg.host : a.host;
  int port = server.bind(host, a.port >= 0 ? a.port : cfg.port);
  if (!a.port_file.empty()) write_file_atomic(a.port_file, std::to_string(port) + "\n");
  err << "serving http://" << host << ":" << port << "/api (Ctrl-C to stop)\n";
  server.start();
  int sig = 0;
  sigwait(&stop, &sig);
  server.stop();
  pthread_sigmask(SIG_UNBLOCK, &stop, nullptr);
  if (session->queue().complete && run.status(Stage::kBootstrap) != StageStatus::kComplete) {
    run.advance(Stage::kBootstrap, StageStatus::kComplete);
  }
  return 0;
}

// ---- extract --------------------------------------------------------------

int do_extract(const Common& c, std::optional<double> threshold_flag, std::ostream& out) {
  PipelineRun run = open_run(c);
  run.require(Stage::kExtract, Stage::kIngest);
  if (!fs::exists(run.paths().predictions())) {
    missing_input(Stage::kExtract, "predictions; run score first");
  }
  begin(run, Stage::kExtract);
  double threshold = threshold_flag.value_or(run.config().extract_threshold);
  std::vector<Prediction> preds = parse_predictions(read_file(run.paths().predictions()));
  std::vector<Sentence> sentences = load_sentence_store(run.paths().sentences());

  std::set<SentenceId> known;
  for (const Sentence& s : sentences) known.insert(s.id);
  std::set<SentenceId> chosen;
  for (const Prediction& p : preds) {
    if (!known.contains(p.sentence_id)) {
      throw std::runtime_error("prediction for " + p.sentence_id.str() +
                               " has no sentence in the store");
    }
    if (p.score >= threshold) chosen.insert(p.sentence_id);
  }
  std::vector<Sentence> mined;
  PhraseCounter counter;
  for (const Sentence& s : sentences) {
    if (!chosen.contains(s.id)) continue;
    for (const NounPhrase& np : noun_phrases_in(s)) counter.add(np);
    mined.push_back(s);
  }
  std::vector<PhraseStat> stats = counter.finish();
  write_file_atomic(run.paths().mined(), write_sentence_store(mined));
  write_file_atomic(run.paths().phrases(), write_phrase_file(stats));
  Json summary = {{"threshold", threshold},
                  {"sentences_scored", preds.size()},
                  {"sentences_mined", mined.size()},
                  {"noun_phrases", counter.total()},
                  {"distinct_phrases", stats.size()}};
  write_file_atomic(run.paths().extract_summary(), summary.dump(2) + "\n");
  run.advance(Stage::kExtract, StageStatus::kComplete);
  out << summary.dump() << "\n";
  return 0;
}

// ---- report ---------------------------------------------------------------

int do_report(const Common& c, std::optional<uint64_t> min_freq_flag, size_t top,
              std::ostream& out) {
  PipelineRun run = open_run(c);
  run.require(Stage::kReport, Stage::kExtract);
  uint64_t min_freq = min_freq_flag.value_or(run.config().report_min_freq);
  if (run.status(Stage::kReport) == StageStatus::kPending) {
    run.advance(Stage::kReport, StageStatus::kRunning);
  }
  auto stats = parse_phrase_file(read_file(run.paths().phrases()));
  auto mined = load_sentence_store(run.paths().mined());
  PhraseReport report = render_report(stats, mined, min_freq);
  write_file_atomic(run.paths().report_tsv(), write_report_tsv(report));
  write_file_atomic(run.paths().report_json(), report_to_json(report).dump(2) + "\n");
  if (run.status(Stage::kReport) != StageStatus::kComplete) {
    run.advance(Stage::kReport, StageStatus::kComplete);
  }
  out << "phrases with frequency >= " << min_freq << ": " << report.rows.size() << "\n";
  for (size_t i = 0; i < report.rows.size() && i < top; ++i) {
    out << (i + 1) << "\t" << report.rows[i].stat.normalized << "\t"
        << report.rows[i].stat.frequency << "\n";
  }
  return 0;
}

// ---- replay-log -----------------------------------------------------------

int do_replay(const Common& c, const std::string& log, const std::string& compare,
              std::ostream& out, std::ostream& err) {
  if (!c.config_path.empty() || c.seed_given) {
    err << "note: replay-log takes its config and seed from the log's init event\n";
  }
  std::string target = (fs::path(c.out) / "replay").string();
  auto s = BootstrapSession::replay(log, target);
  QueueView q = s->queue();
  Json ids = Json::array();
  for (const auto& item : q.items) ids.push_back(item.sentence_id.str());
  Json summary = {{"iteration", q.iteration},
                  {"round_open", q.round_open},
                  {"events", s->events_applied()},
                  {"model_hash", s->current_model_hash()},
                  {"digest", s->digest()},
                  {"queue", ids},
                  {"out", target}};
  int status = 0;
  if (!compare.empty()) {
    auto other = BootstrapSession::load(compare);
    bool match = other->digest() == s->digest() &&
                 other->current_model_hash() == s->current_model_hash();
    summary["compare"] = {{"dir", compare}, {"digest", other->digest()}, {"match", match}};
    status = match ? 0 : 1;
  }
  out << summary.dump(2) << "\n";
  return status;
}

// ---- synth-experiment -----------------------------------------------------

struct SynthArgs {
  std::string write_corpus;
  size_t articles = ScaleConfig{}.articles;
  size_t sentences_per_article = ScaleConfig{}.sentences_per_article;
};

int do_synth(const Common& c, const SynthArgs& a, std::ostream& out) {
  PipelineRun run = open_run(c);
  const Config& cfg = run.config();
  if (!a.write_corpus.empty()) {
    ScaleConfig sc;
    sc.seed = cfg.seed;
    sc.articles = a.articles;
    sc.sentences_per_article = a.sentences_per_article;
    ScaleStats st = write_scale_corpus(a.write_corpus, sc);
    out << Json{{"dir", a.write_corpus}, {"files", st.files}, {"sentences", st.sentences}}
               .dump()
        << "\n";
    return 0;
  }

  std::string dir = (fs::path(c.out) / "synth").string();
  if (session_exists(dir + "/session")) {
    throw PipelineError(PipelineError::Kind::kStatusRegression,
                        "a synthetic experiment already ran in " + dir +
                            "; use a fresh --out");
  }
  SynthCorpus corpus = generate_bootstrap_corpus(cfg.synth_config());
  write_file_atomic(dir + "/seed.tsv", write_labeled_file(corpus.seed));
  write_file_atomic(dir + "/pool.tsv", write_sentence_store(corpus.pool));
  write_file_atomic(dir + "/truth.tsv", write_truth_file(corpus.truth));

  auto session = BootstrapSession::create(
      dir + "/session",
      {absolute(dir + "/seed.tsv"), absolute(dir + "/pool.tsv"), cfg.bootstrap_config(),
       cfg.auto_open});
  SimulatedAnnotator annotator(corpus.truth, cfg.synth_noise, cfg.seed);
  while (!session->queue().complete) {
    if (!session->queue().round_open) session->open();
    run_simulated_round(*session, annotator);
  }

  std::vector<IterationRecord> history = session->history();
  Json rows = Json::array();
  out << "t\tprecision@K\tK\tlabels\tpositives\tnegatives\n";
  for (const auto& r : history) {
    rows.push_back(to_json(r, false));
    char line[128];
    std::snprintf(line, sizeof(line), "%u\t%.3f\t%zu\t%zu\t%zu\t%zu\n", r.iteration,
                  r.precision_at_k, r.k, r.positives + r.negatives, r.positives,
                  r.negatives);
    out << line;
  }
  bool monotone = true;
  for (size_t i = 1; i < history.size(); ++i) {
    monotone = monotone && history[i].precision_at_k >= history[i - 1].precision_at_k;
  }
  double gain = history.empty() ? 0.0
                                : history.back().precision_at_k - history.front().precision_at_k;
  Json summary = {{"seed", cfg.seed},
                  {"pool_size", corpus.pool.size()},
                  {"iterations", rows},
                  {"non_decreasing", monotone},
                  {"gain", gain}};
  write_file_atomic(dir + "/history.json", summary.dump(2) + "\n");
  out << "non-decreasing: " << (monotone ? "yes" : "no") << ", gain: " << gain << "\n";
  return 0;
}

std::string error_name(const std::exception& e) {
  if (auto* p = dynamic_cast<const PipelineError*>(&e)) {
    return std::string(error_kind_name(p->kind()));
  }
  if (auto* b = dynamic_cast<const BootstrapError*>(&e)) {
    return std::string(bootstrap_error_code(b->kind()));
  }
  if (dynamic_cast<const ConfigError*>(&e)) return "ConfigError";
  if (dynamic_cast<const ReportError*>(&e)) return "ReportError";
  if (dynamic_cast<const ReplayError*>(&e)) return "ReplayError";
  if (dynamic_cast<const CorpusError*>(&e)) return "CorpusError";
  if (dynamic_cast<const ModelFormatError*>(&e)) return "ModelFormatError";
  if (dynamic_cast<const TrainingError*>(&e)) return "TrainingError";
  return "error";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"radmine: mine radiological findings from article corpora", "radmine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "radmine 0.3.0");

  Common common;
  auto* ingest = app.add_subcommand("ingest", "Read a corpus into the sentence store");
  IngestArgs ia;
  ingest->add_option("--root", ia.root, "Corpus directory")->required();
  ingest->add_option("--min-date", ia.min_date, "Keep articles published after this date");
  ingest->add_flag("--include-undated", ia.include_undated, "Keep articles without a date");
  ia.threads_opt = ingest->add_option("--threads", ia.threads, "Reader threads (0 = all)");

  auto* train_cmd = app.add_subcommand("train", "Train C_0 on a labeled seed set");
  std::string train_seed_set;
  train_cmd->add_option("--seed-set", train_seed_set, "Labeled TSV: sentence_id, label, text")
      ->required()
      ->check(CLI::ExistingFile);

  auto* score_cmd = app.add_subcommand("score", "Score and rank the sentence store");
  std::string score_model, score_sentences;
  score_cmd->add_option("--model", score_model, "Model file (default: latest in workspace)")
      ->check(CLI::ExistingFile);
  score_cmd->add_option("--sentences", score_sentences, "Sentence store to score")
      ->check(CLI::ExistingFile);

  auto* serve = app.add_subcommand(
      "bootstrap-serve",
      "Run the annotation loop. With --label/--open/--close/--queue the actions are "
      "applied and the command exits; otherwise the HTTP API is served.");
  ServeArgs sa;
  serve->add_option("--seed-set", sa.seed_set, "Labeled seed TSV (starts a new session)")
      ->check(CLI::ExistingFile);
  serve->add_option("--pool", sa.pool, "Sentence store to mine (default: ingested store)")
      ->check(CLI::ExistingFile);
  serve->add_option("--label", sa.labels, "Submit a label, ID=pos|neg (repeatable)");
  serve->add_option("--annotator", sa.annotator, "Annotator id recorded with --label");
  serve->add_flag("--open", sa.open, "Open a round if none is open");
  serve->add_flag("--close", sa.close, "Close the open round");
  serve->add_flag("--queue", sa.queue, "Print the current queue");
  serve->add_option("--host", sa.host, "Bind address (default: config)");
  serve->add_option("--port", sa.port, "Port, 0 for any (default: config)");
  serve->add_option("--port-file", sa.port_file, "Write the bound port here");

  auto* extract = app.add_subcommand("extract", "Extract noun phrases from positive sentences");
  double extract_threshold = 0.5;
  auto* extract_threshold_opt =
      extract->add_option("--threshold", extract_threshold, "Score threshold (default: config)");

  auto* report = app.add_subcommand("report", "Render the phrase report");
  uint64_t min_freq = kDefaultMinFreq;
  size_t top = 20;
  auto* min_freq_opt =
      report->add_option("--min-freq", min_freq, "Minimum phrase frequency (default: config)")
          ->check(CLI::PositiveNumber);
  report->add_option("--top", top, "Rows to print")->capture_default_str();

  auto* replay = app.add_subcommand("replay-log", "Rebuild session state from an event log");
  std::string replay_log, replay_compare;
  replay->add_option("--log", replay_log, "events.jsonl")->required()->check(CLI::ExistingFile);
  replay->add_option("--compare", replay_compare, "Session directory to compare against")
      ->check(CLI::ExistingDirectory);

  auto* synth = app.add_subcommand(
      "synth-experiment",
      "Run the bootstrap loop on a synthetic corpus with a simulated annotator, or write "
      "a full-size synthetic article corpus with --write-corpus");
  SynthArgs ya;
  synth->add_option("--write-corpus", ya.write_corpus, "Write CORD-19 style JSON here");
  synth->add_option("--articles", ya.articles, "Articles for --write-corpus")
      ->capture_default_str();
  synth->add_option("--sentences-per-article", ya.sentences_per_article,
                    "Sentences per article for --write-corpus")
      ->capture_default_str();

  for (CLI::App* sub : {ingest, train_cmd, score_cmd, serve, extract, report, replay, synth}) {
    add_common(sub, &common);
  }

  std::vector<const char*> argv{"radmine"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return 2;
  }

  try {
    if (*ingest) return do_ingest(common, ia, out);
    if (*train_cmd) return do_train(common, train_seed_set, out);
    if (*score_cmd) return do_score(common, score_model, score_sentences, out);
    if (*serve) return do_serve(common, sa, out, err);
    if (*extract) {
      std::optional<double> t;
      if (extract_threshold_opt->count()) t = extract_threshold;
      return do_extract(common, t, out);
    }
    if (*report) {
      std::optional<uint64_t> m;
      if (min_freq_opt->count()) m = min_freq;
      return do_report(common, m, top, out);
    }
    if (*replay) return do_replay(common, replay_log, replay_compare, out, err);
    if (*synth) return do_synth(common, ya, out);
  } catch (const std::exception& e) {
    err << "error: " << error_name(e) << ": " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace radmine
