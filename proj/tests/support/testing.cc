#include "testing.h"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "radmine/store.h"
#include "radmine/text_util.h"

namespace radmine::testing {

namespace fs = std::filesystem;

std::string data_path(const std::string& relative) {
  return std::string(RADMINE_DATA_DIR) + "/" + relative;
}

std::string read_data(const std::string& relative) {
  return read_file(data_path(relative));
}

std::vector<std::string> data_lines(const std::string& relative) {
  std::vector<std::string> out;
  std::string text = read_data(relative);
  for (std::string_view line : split(text, '\n')) {
    if (line.empty() || line.front() == '#') continue;
    out.emplace_back(line);
  }
  return out;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  fs::path p = fs::temp_directory_path() /
               ("radmine-test-" + std::to_string(::getpid()) + "-" +
                std::to_string(counter++));
  fs::remove_all(p);
  fs::create_directories(p);
  path_ = p.string();
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::vector<Sentence> golden_sentences() {
  std::vector<Sentence> out;
  for (const std::string& line : data_lines("golden/np_sentences.tsv")) {
    auto fields = split(line, '\t');
    if (fields.size() != 2) throw std::runtime_error("bad golden line: " + line);
    Sentence s;
    s.id = SentenceId::parse(fields[0]).value();
    s.text = std::string(fields[1]);
    s.span = {0, s.text.size()};
    out.push_back(std::move(s));
  }
  return out;
}

SynthCorpus small_corpus(uint64_t seed, size_t pool_size) {
  SynthConfig c;
  c.seed = seed;
  c.pool_size = pool_size;
  c.sources = 12;
  c.seed_positives = 60;
  c.seed_negatives = 60;
  c.finding_rate = 0.2;
  c.distractor_rate = 0.2;
  return generate_bootstrap_corpus(c);
}

BootstrapConfig small_bootstrap_config(size_t queue_size, size_t fp_quota) {
  BootstrapConfig c;
  c.queue_size = queue_size;
  c.fp_quota = fp_quota;
  c.retrain.features.dimension = 1u << 14;
  c.retrain.seed = 3;
  return c;
}

void write_corpus_files(const SynthCorpus& corpus, const std::string& dir) {
  fs::create_directories(dir);
  write_file_atomic(dir + "/seed.tsv", write_labeled_file(corpus.seed));
  write_file_atomic(dir + "/pool.tsv", write_sentence_store(corpus.pool));
}

namespace {

const std::vector<std::string> kVocab = {
    "the",       "a",          "bilateral", "pleural",    "effusion",  "effusions",
    "ground-glass", "opacity", "opacities", "consolidation", "patient", "patients",
    "showed",    "with",       "and",       "in",         "lung",      "lungs",
    "lower",     "lobe",       "CT",        "chest",      "multiple",  "nodules",
    "was",       "observed",   "of",        "3",          "septal",    "thickening",
    "crazy-paving", "pattern", "diffuse",   "lesions",    "Dr.",       "Wuhan",
};

}  // namespace

std::string Gen::word() {
  size_t n = 1 + rng_.below(10);
  std::string w;
  for (size_t i = 0; i < n; ++i) w += char('a' + rng_.below(26));
  return w;
}

std::string Gen::vocab_word() { return pick(kVocab); }

std::string Gen::sentence() {
  size_t n = 1 + rng_.below(14);
  std::string s;
  for (size_t i = 0; i < n; ++i) {
    if (i) s += coin(0.1) ? ", " : " ";
    if (coin(0.05)) s += "(";
    s += coin(0.8) ? vocab_word() : word();
    if (coin(0.05)) s += ")";
  }
  return s;
}

std::string Gen::messy_text() {
  static const std::string kChars =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
      " .,;:!?()[]-'\"/%\t";
  size_t n = rng_.below(60);
  std::string s;
  for (size_t i = 0; i < n; ++i) s += kChars[rng_.below(kChars.size())];
  return s;
}

std::string Gen::paragraph(size_t sentences) {
  std::string p;
  for (size_t i = 0; i < sentences; ++i) {
    std::string s = sentence();
    s[0] = char(std::toupper(static_cast<unsigned char>(s[0])));
    if (!p.empty()) p += ' ';
    p += s;
    p += coin(0.8) ? "." : (coin() ? "?" : "!");
  }
  return p;
}

SentenceId Gen::sentence_id() {
  return SentenceId{"a" + std::to_string(rng_.below(50)),
                    static_cast<uint32_t>(rng_.below(4)),
                    static_cast<uint32_t>(rng_.below(8))};
}

}  // namespace radmine::testing
