#pragma once

#include <string>

#include <json.hpp>

#include "hslab/embeddings.hpp"
#include "hslab/extraction.hpp"
#include "hslab/geometry.hpp"
#include "hslab/gradients.hpp"
#include "hslab/space.hpp"

namespace hslab {

using json = nlohmann::json;

/// Interchange document: {"name", "dist", "weights", "coords"? }.
json space_to_json(const MetricMeasureSpace& space);
MetricMeasureSpace space_from_json(const json& doc);
MetricMeasureSpace load_space(const std::string& path);
void save_json(const json& doc, const std::string& path);

json to_json(const Ball& b);
json to_json(const geometry::GeometrySummary& g);
json to_json(const SolverReport& r);
json to_json(const ConstructionFamily& f);
json to_json(const RatioRow& r);
json to_json(const EmbeddingReport& r);
json to_json(const ChainCertificate& c);
json to_json(const BallVerdict& v);
json to_json(const ExtractionReport& r);

/// FNV-1a over the serialized JSON; stable across runs and platforms.
std::string digest(const json& doc);

/// Report envelope with config echo, config/space digests, and the
/// timestamp kept in its own field so the rest of the document is
/// reproducible byte for byte.
json report_envelope(const json& config, const json& space_doc, json result);

/// CSV export of the per-ball tables (header row, comma separated,
/// '.' decimal point).
std::string embedding_csv(const EmbeddingReport& r);
std::string extraction_csv(const ExtractionReport& r);

} // namespace hslab
