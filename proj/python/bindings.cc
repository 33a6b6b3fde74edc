#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "radmine/classifier.h"
#include "radmine/config.h"
#include "radmine/features.h"
#include "radmine/event_log.h"
#include "radmine/json_io.h"
#include "radmine/npx.h"
#include "radmine/textproc.h"

namespace py = pybind11;

namespace radmine {
namespace {

// Structured values cross the boundary as JSON text; the Python package
// decodes them.

Config config_from(const std::string& json) {
  return json.empty() ? Config{} : Config::from_json(Json::parse(json));
}

SentenceId id_from(const std::string& text) {
  auto id = SentenceId::parse(text);
  if (!id) throw std::invalid_argument("not a sentence id: '" + text + "'");
  return *id;
}

Label label_from(const std::string& text) {
  auto label = parse_label(text);
  if (!label) throw std::invalid_argument("not a label: '" + text + "'");
  return *label;
}

using Triple = std::tuple<std::string, double, double>;

std::vector<Prediction> predictions_from(const std::vector<Triple>& rows) {
  std::vector<Prediction> out;
  for (const auto& [id, score, margin] : rows) out.push_back({id_from(id), score, margin});
  return out;
}

std::vector<Triple> triples(const std::vector<Prediction>& preds) {
  std::vector<Triple> out;
  for (const auto& p : preds) out.emplace_back(p.sentence_id.str(), p.score, p.margin);
  return out;
}

}  // namespace
}  // namespace radmine

PYBIND11_MODULE(_core, m) {
  using namespace radmine;

  static py::handle bootstrap_error =
      py::exception<BootstrapError>(m, "BootstrapError", PyExc_RuntimeError).release();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const BootstrapError& e) {
      std::string code(bootstrap_error_code(e.kind()));
      py::object err = py::reinterpret_borrow<py::object>(bootstrap_error)(code, e.what());
      err.attr("code") = code;
      if (e.kind() == BootstrapError::Kind::kQuotaUnmet) err.attr("remaining") = e.remaining();
      PyErr_SetObject(bootstrap_error.ptr(), err.ptr());
    }
  });

  m.def("tag", [](const std::string& sentence) {
    std::vector<std::tuple<std::string, size_t, size_t, std::string>> out;
    for (const Token& t : tag_sentence(sentence)) {
      out.emplace_back(t.text, t.span.begin, t.span.end,
                       t.tag ? std::string(tag_name(*t.tag)) : "");
    }
    return out;
  });

  m.def("segment", [](const std::string& paragraph) {
    std::vector<std::string> out;
    for (const Span& s : segment_paragraph(paragraph)) {
      out.push_back(paragraph.substr(s.begin, s.end - s.begin));
    }
    return out;
  });

  m.def("noun_phrases", [](const std::string& text, const std::string& sentence_id) {
    std::vector<std::tuple<std::string, std::string, size_t, size_t>> out;
    for (const NounPhrase& np : noun_phrases_in({id_from(sentence_id), text, {}})) {
      out.emplace_back(np.raw, np.normalized, np.span.begin, np.span.end);
    }
    return out;
  }, py::arg("text"), py::arg("sentence_id") = "s:0:0");

  m.def("aggregate", [](const std::vector<std::pair<std::string, std::string>>& occurrences,
                        size_t exemplar_cap) {
    PhraseCounter counter(exemplar_cap);
    for (const auto& [phrase, id] : occurrences) counter.add(phrase, id_from(id));
    std::vector<std::tuple<std::string, uint64_t, std::vector<std::string>>> out;
    for (const PhraseStat& s : counter.finish()) {
      std::vector<std::string> ids;
      for (const auto& id : s.exemplars) ids.push_back(id.str());
      out.emplace_back(s.normalized, s.frequency, ids);
    }
    return out;
  }, py::arg("occurrences"), py::arg("exemplar_cap") = kExemplarCap);

  m.def("featurize", [](const std::string& text, const std::string& config) {
    SparseVector v = featurize(text, config_from(config).classifier.features);
    std::vector<std::pair<uint32_t, double>> out;
    for (size_t i = 0; i < v.indices.size(); ++i) out.emplace_back(v.indices[i], v.values[i]);
    return out;
  }, py::arg("text"), py::arg("config") = "");

  m.def("default_config", [] { return Config{}.to_json().dump(); });

  py::class_<ClassifierModel>(m, "Model")
      .def("score", [](const ClassifierModel& model, const std::string& text) {
        return model.score(text);
      })
      .def("margin", [](const ClassifierModel& model, const std::string& text) {
        return model.margin(featurize(text, model.features()));
      })
      .def("score_many", [](const ClassifierModel& model,
                            const std::vector<std::pair<std::string, std::string>>& rows) {
        std::vector<Sentence> sentences;
        for (const auto& [id, text] : rows) sentences.push_back({id_from(id), text, {}});
        return triples(score(model, sentences));
      })
      .def_property_readonly("hash", [](const ClassifierModel& model) { return model_hash(model); })
      .def("to_bytes", [](const ClassifierModel& model) { return py::bytes(serialize_model(model)); })
      .def_static("from_bytes", [](const py::bytes& b) { return deserialize_model(std::string(b)); })
      .def("save", [](const ClassifierModel& model, const std::string& path) { save_model(model, path); })
      .def_static("load", &load_model);

  m.def("train", [](const std::vector<std::tuple<std::string, std::string, std::string>>& rows,
                    const std::string& config) {
    std::vector<LabeledSentence> data;
    for (const auto& [id, text, label] : rows) {
      data.push_back(LabeledSentence::seed(id_from(id), text, label_from(label)));
    }
    TrainResult r;
    {
      py::gil_scoped_release release;
      r = train(data, config_from(config).train_options());
    }
    Json metrics = {{"train_count", r.train_count}, {"validation", to_json(r.validation)}};
    return std::make_pair(std::move(r.model), metrics.dump());
  }, py::arg("rows"), py::arg("config") = "");

  m.def("rank", [](const std::vector<Triple>& rows) {
    return triples(rank_descending(predictions_from(rows)));
  });

  m.def("precision_at_k", [](const std::vector<Triple>& ranked,
                             const std::map<std::string, std::string>& truth, size_t k) {
    TruthMap t;
    for (const auto& [id, label] : truth) t[id_from(id)] = label_from(label);
    return precision_at_k(predictions_from(ranked), t, k);
  });

  py::class_<BootstrapSession>(m, "Session")
      .def_static("create", [](const std::string& dir, const std::string& seed_path,
                               const std::string& pool_path, const std::string& config) {
        Config cfg = config_from(config);
        py::gil_scoped_release release;
        return BootstrapSession::create(
            dir, {seed_path, pool_path, cfg.bootstrap_config(), cfg.auto_open});
      }, py::arg("dir"), py::arg("seed_path"), py::arg("pool_path"), py::arg("config") = "")
      .def_static("load", [](const std::string& dir) {
        py::gil_scoped_release release;
        return BootstrapSession::load(dir);
      })
      .def_static("replay", [](const std::string& log, const std::string& dir) {
        py::gil_scoped_release release;
        return BootstrapSession::replay(log, dir);
      })
      .def("queue", [](const BootstrapSession& s) { return s.queue().to_json().dump(); })
      .def("history", [](const BootstrapSession& s) {
        Json rows = Json::array();
        for (const auto& r : s.history()) rows.push_back(to_json(r, false));
        return rows.dump();
      })
      .def("submit", [](BootstrapSession& s, const std::string& id, const std::string& label,
                        const std::string& annotator) {
        AnnotationRecord record{id_from(id), label_from(label), annotator, ""};
        SubmitAck ack;
        {
          py::gil_scoped_release release;
          ack = s.submit(record);
        }
        return to_json(ack).dump();
      }, py::arg("sentence_id"), py::arg("label"), py::arg("annotator") = "")
      .def("open", [](BootstrapSession& s) {
        py::gil_scoped_release release;
        s.open();
      })
      .def("close", [](BootstrapSession& s) {
        {
          py::gil_scoped_release release;
          s.close();
        }
        return to_json(s.history().back(), false).dump();
      })
      .def_property_readonly("digest", &BootstrapSession::digest)
      .def_property_readonly("model_hash", &BootstrapSession::current_model_hash)
      .def_property_readonly("events", &BootstrapSession::events_applied);
}
