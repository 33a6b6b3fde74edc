#ifndef RADMINE_JSON_IO_H_
#define RADMINE_JSON_IO_H_

#include "json.hpp"
#include "radmine/bootstrap.h"
#include "radmine/classifier.h"
#include "radmine/features.h"

namespace radmine {

using Json = nlohmann::json;

Json to_json(const FeatureConfig& c);
Json to_json(const Hyperparameters& h);
Json to_json(const TrainOptions& o);
Json to_json(const BootstrapConfig& c);
Json to_json(const ValidationMetrics& m);
Json to_json(const AnnotationRecord& r);
Json to_json(const IterationRecord& r, bool with_details = true);
Json to_json(const QueueItem& item);
Json to_json(const SubmitAck& ack);

// Missing keys keep their defaults; wrong types throw Json::exception.
void merge_json(const Json& j, FeatureConfig* c);
void merge_json(const Json& j, Hyperparameters* h);
void merge_json(const Json& j, TrainOptions* o);
void merge_json(const Json& j, BootstrapConfig* c);

AnnotationRecord annotation_from_json(const Json& j);  // throws std::invalid_argument
IterationRecord iteration_from_json(const Json& j);

std::string utc_timestamp();  // "2026-10-15T12:34:56Z"

}  // namespace radmine

#endif  // RADMINE_JSON_IO_H_
