#include "schemaforge/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace schemaforge {

std::string format_seconds(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string convergence_csv_text(const TrainingReport& report) {
  std::string out = "episode,episode_best_cost_seconds,global_best_cost_seconds\n";
  for (const ConvergencePoint& point : report.convergence) {
    out += std::to_string(point.episode);
    out += ',';
    out += format_seconds(point.episode_best_cost);
    out += ',';
    out += format_seconds(point.global_best_cost);
    out += '\n';
  }
  return out;
}

std::string report_text(const TrainingReport& report) {
  std::string out;
  out += "best_schema: " + report.best_canon + "\n";
  out += "best_cost_seconds: " + format_seconds(report.best_cost) + "\n";
  out += "storage_bytes: " + std::to_string(report.storage_bytes) + "\n";
  out += "episodes: " + std::to_string(report.convergence.size()) + "\n";
  out += "per_query_costs:\n";
  for (const auto& [id, cost] : report.per_query_costs)
    out += "  " + id + ": " + format_seconds(cost) + "\n";
  return out;
}

std::string catalog_cache_text(const AttributeCatalog& cat) {
  std::string out;
  out += "n=" + std::to_string(cat.json_key_count()) + "\n";
  out += "m=" + std::to_string(cat.predicate_count()) + "\n";
  out += "p=" + std::to_string(cat.rel_attribute_count()) + "\n";
  out += "q=" + std::to_string(cat.q()) + "\n";
  out += "threshold1=" + std::to_string(cat.threshold1()) + "\n";
  out += "threshold2=" + std::to_string(cat.threshold2()) + "\n";
  for (int id : cat.action_ids())
    out += std::to_string(id) + "|" + to_string(cat.band_of(id)) + "|" + cat.name_of(id) + "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
}

}  // namespace schemaforge
