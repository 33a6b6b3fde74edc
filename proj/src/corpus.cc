#include "radmine/corpus.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <filesystem>
#include <map>
#include <thread>

#include "json.hpp"
#include "radmine/text_util.h"

namespace radmine {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool parse_int(std::string_view s, int* out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!is_digit(c)) return false;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), *out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

bool valid_article_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id) {
    if (is_space(c) || c == ',' || static_cast<unsigned char>(c) < 0x20) {
      return false;
    }
  }
  return true;
}

std::optional<Date> parse_date_field(std::string_view text,
                                     std::string_view what) {
  std::string_view t = trim(text);
  if (t.empty()) return std::nullopt;
  auto d = parse_date(t);
  if (!d) throw CorpusError("unparseable " + std::string(what) + " '" +
                            std::string(t) + "'");
  return d;
}

struct FileOutcome {
  std::string path;
  std::optional<Article> article;
  std::string error;
};

FileOutcome load_document(const fs::path& path) {
  FileOutcome out;
  out.path = path.string();
  try {
    std::string contents = read_file(out.path);
    if (path.extension() == ".json") {
      out.article = parse_cord19_json(contents);
    } else {
      out.article = parse_line_document(contents);
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

std::map<std::string, std::optional<Date>> load_metadata_index(
    const fs::path& path, IngestReport* report) {
  std::map<std::string, std::optional<Date>> index;
  std::string contents = read_file(path.string());
  size_t line_no = 0;
  for (std::string_view line : split(contents, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    if (line_no == 1 && line.starts_with("article_id")) continue;
    auto fields = split(line, '\t');
    std::string where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() != 2 || !valid_article_id(fields[0])) {
      report->skipped.push_back({where, "malformed metadata row"});
      continue;
    }
    std::string_view date_text = trim(fields[1]);
    if (date_text.empty()) continue;  // no override
    auto date = parse_date(date_text);
    if (!date) {
      report->skipped.push_back(
          {where, "unparseable publish date '" + std::string(date_text) + "'"});
      continue;
    }
    index[std::string(fields[0])] = date;
  }
  return index;
}

}  // namespace

std::string Date::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::optional<Date> parse_date(std::string_view text) {
  auto parts = split(text, '-');
  if (parts.empty() || parts.size() > 3) return std::nullopt;
  Date d;
  if (parts[0].size() != 4 || !parse_int(parts[0], &d.year)) return std::nullopt;
  if (parts.size() >= 2) {
    if (parts[1].size() != 2 || !parse_int(parts[1], &d.month)) {
      return std::nullopt;
    }
    if (d.month < 1 || d.month > 12) return std::nullopt;
  }
  if (parts.size() == 3) {
    if (parts[2].size() != 2 || !parse_int(parts[2], &d.day)) {
      return std::nullopt;
    }
    if (d.day < 1 || d.day > days_in_month(d.year, d.month)) return std::nullopt;
  }
  return d;
}

std::string SentenceId::str() const {
  return article_id + ":" + std::to_string(paragraph) + ":" +
         std::to_string(index);
}

std::optional<SentenceId> SentenceId::parse(std::string_view text) {
  size_t second = text.rfind(':');
  if (second == std::string_view::npos || second == 0) return std::nullopt;
  size_t first = text.rfind(':', second - 1);
  if (first == std::string_view::npos || first == 0) return std::nullopt;
  int para = 0, idx = 0;
  if (!parse_int(text.substr(first + 1, second - first - 1), &para) ||
      !parse_int(text.substr(second + 1), &idx)) {
    return std::nullopt;
  }
  SentenceId id{std::string(text.substr(0, first)),
                static_cast<uint32_t>(para), static_cast<uint32_t>(idx)};
  if (!valid_article_id(id.article_id)) return std::nullopt;
  return id;
}

bool CorpusFilter::admits(const Article& article) const {
  if (!article.publish_date) return include_undated;
  return *article.publish_date > min_publish_date;
}

std::string IngestReport::to_json() const {
  json j;
  j["files_read"] = files_read;
  j["files_skipped"] = files_skipped;
  j["articles_kept"] = articles_kept;
  j["sentences_emitted"] = sentences_emitted;
  j["skipped"] = json::array();
  for (const auto& s : skipped) {
    j["skipped"].push_back({{"path", s.path}, {"cause", s.cause}});
  }
  return j.dump(2);
}

Article parse_cord19_json(std::string_view contents) {
  json doc;
  try {
    doc = json::parse(contents);
  } catch (const json::parse_error& e) {
    throw CorpusError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw CorpusError("document is not a JSON object");
  auto id = doc.find("paper_id");
  if (id == doc.end() || !id->is_string()) {
    throw CorpusError("missing string field paper_id");
  }
  Article a;
  a.article_id = id->get<std::string>();
  if (!valid_article_id(a.article_id)) {
    throw CorpusError("invalid paper_id '" + a.article_id + "'");
  }
  const json* date = nullptr;
  if (auto meta = doc.find("metadata"); meta != doc.end()) {
    if (!meta->is_object()) throw CorpusError("metadata is not an object");
    if (auto t = meta->find("title"); t != meta->end() && t->is_string()) {
      a.title = t->get<std::string>();
    }
    if (auto p = meta->find("publish_time"); p != meta->end()) date = &*p;
  }
  if (auto p = doc.find("publish_time"); p != doc.end()) date = &*p;
  if (date != nullptr && !date->is_null()) {
    if (!date->is_string()) throw CorpusError("publish_time is not a string");
    a.publish_date =
        parse_date_field(date->get_ref<const std::string&>(), "publish_time");
  }
  for (const char* section : {"abstract", "body_text"}) {
    auto it = doc.find(section);
    if (it == doc.end() || it->is_null()) continue;
    if (!it->is_array()) {
      throw CorpusError(std::string(section) + " is not an array");
    }
    for (const auto& block : *it) {
      auto text = block.is_object() ? block.find("text") : block.end();
      if (!block.is_object() || text == block.end() || !text->is_string()) {
        throw CorpusError(std::string(section) + " entry lacks a text string");
      }
      a.paragraphs.push_back(text->get<std::string>());
    }
  }
  return a;
}

// Line format:
//   #article<TAB>id<TAB>date-or-dash<TAB>title
//   paragraph
//   paragraph
Article parse_line_document(std::string_view contents) {
  auto lines = split(contents, '\n');
  std::string_view header = lines.front();
  if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
  auto fields = split(header, '\t');
  if (fields.size() < 3 || fields[0] != "#article") {
    throw CorpusError("missing '#article' header line");
  }
  Article a;
  a.article_id = std::string(fields[1]);
  if (!valid_article_id(a.article_id)) {
    throw CorpusError("invalid article id '" + a.article_id + "'");
  }
  if (trim(fields[2]) != "-") {
    a.publish_date = parse_date_field(fields[2], "publish date");
  }
  if (fields.size() > 3) a.title = std::string(fields[3]);
  for (size_t i = 1; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty()) continue;
    a.paragraphs.emplace_back(line);
  }
  return a;
}

IngestResult ingest_corpus(const std::string& root,
                           const IngestOptions& options) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw CorpusError("corpus root is not a readable directory: " + root);
  }
  IngestResult result;
  IngestReport& report = result.report;

  std::vector<fs::path> files;
  fs::path index_path;
  auto it = fs::recursive_directory_iterator(
      root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw CorpusError("cannot read corpus root " + root + ": " + ec.message());
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw CorpusError("error walking " + root + ": " + ec.message());
    if (!it->is_regular_file()) continue;
    const fs::path& p = it->path();
    if (p.filename() == "metadata.tsv" && p.parent_path() == fs::path(root)) {
      index_path = p;
    } else if (p.extension() == ".json" || p.extension() == ".txt") {
      files.push_back(p);
    }
  }
  std::sort(files.begin(), files.end());

  std::map<std::string, std::optional<Date>> index;
  if (!index_path.empty()) index = load_metadata_index(index_path, &report);

  std::vector<FileOutcome> outcomes(files.size());
  unsigned threads = options.threads ? options.threads
                                     : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<size_t>(1, files.size()));
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < files.size(); i = next++) {
      outcomes[i] = load_document(files[i]);
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  // Merge in path order so duplicate resolution is deterministic.
  std::map<std::string, std::string> seen;  // article_id -> path
  for (auto& outcome : outcomes) {
    ++report.files_read;
    if (!outcome.article) {
      ++report.files_skipped;
      report.skipped.push_back({outcome.path, outcome.error});
      continue;
    }
    Article& a = *outcome.article;
    if (auto prev = seen.find(a.article_id); prev != seen.end()) {
      ++report.files_skipped;
      report.skipped.push_back(
          {outcome.path, "duplicate article_id '" + a.article_id +
                             "' (first seen in " + prev->second + ")"});
      continue;
    }
    seen.emplace(a.article_id, outcome.path);
    if (auto entry = index.find(a.article_id); entry != index.end()) {
      a.publish_date = entry->second;
    }
    if (!options.filter.admits(a)) continue;
    result.articles.push_back(std::move(a));
  }
  std::sort(result.articles.begin(), result.articles.end(),
            [](const Article& x, const Article& y) {
              return x.article_id < y.article_id;
            });
  report.articles_kept = result.articles.size();
  return result;
}

const std::vector<std::string>& sentence_abbreviations() {
  static const std::vector<std::string> kList = {
      "fig.", "dr.", "e.g.", "i.e.", "et al.", "vs.", "no.", "approx.", "eq."};
  return kList;
}

namespace {

// True if `text` (ending in '.') ends with a listed abbreviation that starts
// at a word boundary.
bool ends_with_abbreviation(std::string_view text) {
  for (const auto& abbr : sentence_abbreviations()) {
    if (!ends_with_ci(text, abbr)) continue;
    size_t start = text.size() - abbr.size();
    if (start == 0) return true;
    char before = text[start - 1];
    if (is_space(before) || before == '(' || before == '[' || before == '"' ||
        before == '\'') {
      return true;
    }
  }
  return false;
}

void push_trimmed(std::string_view paragraph, size_t begin, size_t end,
                  std::vector<Span>* out) {
  while (begin < end && is_space(paragraph[begin])) ++begin;
  while (end > begin && is_space(paragraph[end - 1])) --end;
  if (begin < end) out->push_back({begin, end});
}

}  // namespace

std::vector<Span> segment_paragraph(std::string_view p) {
  std::vector<Span> spans;
  size_t start = 0;
  int depth = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    char c = p[i];
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      if (depth > 0) --depth;
    }
    if (c != '.' && c != '?' && c != '!') continue;
    if (i + 1 >= p.size() || !is_space(p[i + 1])) continue;
    size_t next = i + 1;
    while (next < p.size() && is_space(p[next])) ++next;
    if (next == p.size()) break;
    if (!is_upper(p[next]) && !is_digit(p[next])) continue;
    if (depth > 0) continue;
    if (c == '.' && ends_with_abbreviation(p.substr(start, i + 1 - start))) {
      continue;
    }
    push_trimmed(p, start, i + 1, &spans);
    start = next;
    depth = 0;
  }
  push_trimmed(p, start, p.size(), &spans);
  return spans;
}

std::vector<Sentence> segment_sentences(const Article& article) {
  std::vector<Sentence> out;
  for (size_t pi = 0; pi < article.paragraphs.size(); ++pi) {
    const std::string& para = article.paragraphs[pi];
    uint32_t si = 0;
    for (const Span& span : segment_paragraph(para)) {
      out.push_back({SentenceId{article.article_id, static_cast<uint32_t>(pi), si++},
                     para.substr(span.begin, span.end - span.begin), span});
    }
  }
  return out;
}

std::vector<Sentence> segment_corpus(const std::vector<Article>& articles,
                                     IngestReport* report) {
  std::vector<Sentence> out;
  for (const Article& a : articles) {
    auto sentences = segment_sentences(a);
    out.insert(out.end(), std::make_move_iterator(sentences.begin()),
               std::make_move_iterator(sentences.end()));
  }
  if (report != nullptr) report->sentences_emitted = out.size();
  return out;
}

}  // namespace radmine
