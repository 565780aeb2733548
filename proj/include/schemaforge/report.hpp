#pragma once

#include <string>

#include "schemaforge/qlearn.hpp"

namespace schemaforge {

/// Shortest round-trip-exact rendering ("%.17g").
std::string format_seconds(double value);

/// Header `episode,episode_best_cost_seconds,global_best_cost_seconds`, one
/// row per episode. Byte-identical for identical reports.
std::string convergence_csv_text(const TrainingReport& report);

/// Deterministic report body; wall-clock time is deliberately left out so
/// identical runs produce identical files.
std::string report_text(const TrainingReport& report);

/// Human-readable catalog summary written by the ingest command.
std::string catalog_cache_text(const AttributeCatalog& cat);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace schemaforge
