#include "radmine/synth.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <span>

#include "json.hpp"
#include "radmine/text_util.h"

namespace radmine {

namespace {

using Words = std::span<const char* const>;

constexpr const char* kModality[] = {
    "chest CT", "CT", "HRCT", "thin-section CT", "the chest radiograph",
    "the initial CT scan", "follow-up CT", "chest X-ray", "the admission CT",
    "repeat CT", "low-dose CT", "the baseline CT"};
constexpr const char* kShowed[] = {"showed", "revealed", "demonstrated", "displayed",
                                   "indicated"};
constexpr const char* kAdjective[] = {
    "bilateral", "multifocal", "peripheral", "patchy", "subpleural", "diffuse",
    "scattered", "multiple", "extensive", "mild", "nodular", "confluent"};
constexpr const char* kFinding[] = {
    "ground-glass opacities", "consolidation", "interlobular septal thickening",
    "crazy-paving pattern", "air bronchograms", "reticular opacities",
    "fibrous stripes", "pleural effusion", "bronchial wall thickening",
    "halo sign", "reversed halo sign", "vascular enlargement",
    "pulmonary nodules", "mediastinal lymphadenopathy", "traction bronchiectasis",
    "pleural thickening"};
constexpr const char* kLocation[] = {
    "in both lungs", "in the lower lobes", "in the right lower lobe",
    "in the left upper lobe", "along the pleura", "in the posterior segments",
    "with a peripheral distribution", "in the subpleural regions",
    "in the right middle lobe", "in the left lower lobe"};
constexpr const char* kSeen[] = {"were seen", "were observed", "were present",
                                 "were found", "were noted"};
constexpr const char* kOrdinal[] = {"first", "second", "third", "fourth", "fifth",
                                    "sixth", "youngest", "oldest"};
constexpr const char* kCity[] = {"Wuhan", "Lombardy", "Seoul", "Madrid", "New York",
                                 "Tehran", "Shenzhen", "Hubei"};
constexpr const char* kDrug[] = {"lopinavir", "ritonavir", "oseltamivir",
                                 "remdesivir", "hydroxychloroquine", "interferon",
                                 "methylprednisolone", "arbidol"};
constexpr const char* kSymptom[] = {"fever", "dry cough", "fatigue", "myalgia",
                                    "dyspnea", "sore throat", "diarrhea", "headache"};
constexpr const char* kLab[] = {"lymphocyte counts", "C-reactive protein levels",
                                "D-dimer levels", "procalcitonin levels",
                                "interleukin-6 levels", "platelet counts"};
constexpr const char* kTrend[] = {"decreased", "increased", "remained stable",
                                  "normalized", "fluctuated"};
constexpr const char* kMonth[] = {"January", "February", "March", "April", "May",
                                  "June"};

std::string capitalize(std::string s) {
  if (!s.empty() && is_lower(s[0])) s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

struct Picker {
  Rng& rng;
  const char* operator()(Words w) { return w[rng.below(w.size())]; }
  std::string num(uint64_t lo, uint64_t hi) {
    return std::to_string(lo + rng.below(hi - lo + 1));
  }
};

// "adjective finding [and finding] location"
std::string finding_phrase(Rng& rng) {
  Picker p{rng};
  std::string s = std::string(p(kAdjective)) + " " + p(kFinding);
  if (rng.below(2) == 0) s += std::string(" and ") + p(kFinding);
  return s + " " + p(kLocation);
}

}  // namespace

SentenceGenerator::SentenceGenerator(uint64_t seed, size_t n_sources) : rng_(seed) {
  // Names are spliced from three-letter pieces of the finding vocabulary, so
  // their character n-grams carry no class signal of their own.
  std::set<std::string> piece_set;
  for (Words bank : {Words(kFinding), Words(kAdjective), Words(kLocation)}) {
    for (std::string_view phrase : bank) {
      for (auto word : split(phrase, ' ')) {
        for (size_t i = 0; i + 3 <= word.size(); i += 3) {
          std::string_view piece = word.substr(i, 3);
          if (std::all_of(piece.begin(), piece.end(), is_lower)) piece_set.emplace(piece);
        }
      }
    }
  }
  std::vector<std::string> pieces(piece_set.begin(), piece_set.end());
  Rng names(mix64(seed ^ 0x736f75726365));
  std::set<std::string> seen;
  while (sources_.size() < n_sources) {
    std::string name = pieces[names.below(pieces.size())] +
                       pieces[names.below(pieces.size())];
    if (names.below(2) == 0) name += pieces[names.below(pieces.size())];
    if (seen.insert(name).second) sources_.push_back(capitalize(name));
  }
}

std::string SentenceGenerator::finding() {
  Picker p{rng_};
  std::string s;
  switch (rng_.below(7)) {
    case 6:
      s = std::string(p(kModality)) + " " + p(kShowed) + " " + finding_phrase(rng_) + ".";
      break;
    case 5:
      return listing(2 + rng_.below(2));
    case 0:
      s = std::string(p(kModality)) + " " + p(kShowed) + " " + p(kAdjective) + " " +
          p(kFinding) + " " + p(kLocation) + ".";
      break;
    case 1:
      s = std::string(p(kAdjective)) + " " + p(kFinding) + " " + p(kSeen) + " " +
          p(kLocation) + " on " + p(kModality) + ".";
      break;
    case 2:
      s = "On day " + p.num(2, 21) + ", " + p(kModality) + " " + p(kShowed) + " " +
          p(kAdjective) + " " + p(kFinding) + " and " + p(kFinding) + ".";
      break;
    case 3:
      s = std::string("The ") + p(kOrdinal) + " patient had " + p(kAdjective) + " " +
          p(kFinding) + " " + p(kLocation) + ".";
      break;
    default:
      s = std::string(p(kModality)) + " images of this patient " + p(kShowed) + " " +
          p(kFinding) + " " + p(kLocation) + ", which progressed to " + p(kFinding) +
          ".";
      break;
  }
  return capitalize(std::move(s));
}

std::string SentenceGenerator::listing(size_t n_findings) {
  Picker p{rng_};
  std::string s = std::string(p(kModality)) + " " + p(kShowed) + " " + p(kAdjective) +
                  " " + p(kFinding);
  for (size_t i = 1; i < n_findings; ++i) {
    s += i + 1 == n_findings ? " and " : ", ";
    s += p(kFinding);
  }
  return capitalize(s + " " + p(kLocation) + ".");
}

std::string SentenceGenerator::report() {
  Picker p{rng_};
  std::string s;
  if (rng_.below(2) == 0) {
    s = std::string(p(kModality)) + ": " + p(kAdjective) + " " + p(kFinding) + " " +
        p(kLocation) + ".";
  } else {
    s = std::string("Impression: ") + p(kAdjective) + " " + p(kFinding) + " and " +
        p(kFinding) + " " + p(kLocation) + ".";
  }
  return capitalize(std::move(s));
}

std::string SentenceGenerator::distractor() {
  std::string s = finding();
  s.insert(s.size() - 1, " (" + sources_[rng_.below(sources_.size())] + ")");
  return s;
}

std::string SentenceGenerator::generic() {
  Picker p{rng_};
  std::string s;
  switch (rng_.below(8)) {
    case 0:
      s = std::string("The patient was admitted with ") + p(kSymptom) + " and " +
          p(kSymptom) + " after returning from " + p(kCity) + ".";
      break;
    case 1:
      s = "A total of " + p.num(12, 900) + " patients were enrolled between " +
          p(kMonth) + " and " + p(kMonth) + " 2020.";
      break;
    case 2:
      s = std::string(p(kLab)) + " " + p(kTrend) + " in " + p.num(3, 120) +
          " patients during hospitalization.";
      break;
    case 3:
      s = std::string("Treatment with ") + p(kDrug) + " and " + p(kDrug) +
          " was started on day " + p.num(1, 10) + ".";
      break;
    case 4:
      s = std::string("Public health measures reduced transmission in ") + p(kCity) +
          " by " + p.num(10, 80) + "%.";
      break;
    case 5:
      s = "The median incubation period was " + p.num(3, 14) + " days among " +
          p.num(20, 500) + " confirmed cases.";
      break;
    case 6:
      s = "Nucleic acid testing confirmed infection in " + p.num(2, 300) +
          " close contacts of the index patient.";
      break;
    default:
      s = std::string("Oxygen therapy was given to ") + p.num(2, 80) +
          " patients with " + p(kSymptom) + ".";
      break;
  }
  return capitalize(std::move(s));
}

SynthCorpus generate_bootstrap_corpus(const SynthConfig& config) {
  if (config.finding_rate < 0 || config.distractor_rate < 0 ||
      config.finding_rate + config.distractor_rate > 1) {
    throw std::invalid_argument("synthetic rates must be non-negative and sum to <= 1");
  }
  SynthCorpus out;
  SentenceGenerator gen(config.seed, config.sources);
  Rng mix(mix64(config.seed));

  for (size_t i = 0; i < config.seed_positives; ++i) {
    out.seed.push_back(LabeledSentence::seed({"seed-pos", 0, uint32_t(i)}, gen.report(),
                                             Label::kPositive));
  }
  for (size_t i = 0; i < config.seed_negatives; ++i) {
    out.seed.push_back(LabeledSentence::seed({"seed-neg", 0, uint32_t(i)},
                                             gen.generic(), Label::kNegative));
  }

  size_t n_find = static_cast<size_t>(config.pool_size * config.finding_rate);
  size_t n_dist = static_cast<size_t>(config.pool_size * config.distractor_rate);
  std::vector<int> kinds(config.pool_size, 0);  // 1 finding, 2 distractor
  for (size_t i = 0; i < n_find; ++i) kinds[i] = 1;
  for (size_t i = n_find; i < n_find + n_dist; ++i) kinds[i] = 2;
  mix.shuffle(std::span<int>(kinds));

  out.pool.reserve(config.pool_size);
  for (size_t i = 0; i < config.pool_size; ++i) {
    char article[32];
    std::snprintf(article, sizeof(article), "pool-%03zu", i / 1000);
    SentenceId id{article, 0, static_cast<uint32_t>(i % 1000)};
    std::string text = kinds[i] == 1   ? gen.finding()
                       : kinds[i] == 2 ? gen.distractor()
                                       : gen.generic();
    out.truth[id] = kinds[i] == 1 ? Label::kPositive : Label::kNegative;
    out.pool.push_back({std::move(id), std::move(text), {}});
  }
  return out;
}

ScaleStats write_scale_corpus(const std::string& dir, const ScaleConfig& config) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  SentenceGenerator gen(config.seed);
  Rng rng(mix64(config.seed ^ 0x7363616c65));
  ScaleStats stats;
  size_t total = config.articles + config.old_articles + config.undated_articles;
  for (size_t a = 0; a < total; ++a) {
    char id[32];
    std::snprintf(id, sizeof(id), "scale-%05zu", a);
    nlohmann::json doc;
    doc["paper_id"] = id;
    doc["metadata"]["title"] = "Synthetic study " + std::to_string(a);
    char date[16];
    if (a < config.articles) {
      std::snprintf(date, sizeof(date), "2020-%02d-%02d", int(1 + rng.below(12)),
                    int(1 + rng.below(28)));
      doc["metadata"]["publish_time"] = date;
    } else if (a < config.articles + config.old_articles) {
      std::snprintf(date, sizeof(date), "%d-%02d-%02d", int(2015 + rng.below(5)),
                    int(1 + rng.below(11)), int(1 + rng.below(28)));
      doc["metadata"]["publish_time"] = date;
    }
    nlohmann::json body = nlohmann::json::array();
    std::string paragraph;
    size_t in_paragraph = 0;
    for (size_t s = 0; s < config.sentences_per_article; ++s) {
      uint64_t roll = rng.below(100);
      std::string sentence = roll < 15   ? gen.finding()
                             : roll < 25 ? gen.distractor()
                                         : gen.generic();
      if (!paragraph.empty()) paragraph += ' ';
      paragraph += sentence;
      if (++in_paragraph == config.sentences_per_paragraph ||
          s + 1 == config.sentences_per_article) {
        body.push_back({{"text", paragraph}, {"section", "Results"}});
        paragraph.clear();
        in_paragraph = 0;
      }
    }
    doc["body_text"] = std::move(body);
    write_file_atomic((fs::path(dir) / (std::string(id) + ".json")).string(),
                      doc.dump());
    ++stats.files;
    if (a < config.articles) stats.sentences += config.sentences_per_article;
  }
  return stats;
}

}  // namespace radmine
