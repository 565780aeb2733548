#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "schemaforge/error.hpp"

namespace schemaforge {

enum class ValueKind { String, Number, Bool };

const char* to_string(ValueKind kind);

/// One scalar cell. Numbers and booleans keep their source rendering so the
/// rest of the pipeline can stay string-typed.
struct Scalar {
  ValueKind kind = ValueKind::String;
  std::string text;

  bool operator==(const Scalar&) const = default;
};

/// A flattened JSON field: nested objects become '.'-joined key paths, arrays
/// keep their elements in source order.
struct JsonField {
  std::string key;
  bool is_array = false;
  std::vector<Scalar> values;  // exactly one element when !is_array
};

struct JsonDoc {
  std::string object_id;
  std::vector<JsonField> fields;
};

struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;
};

struct RelTable {
  std::string name;
  std::vector<std::string> columns;      // header order
  std::vector<std::string> key_columns;  // declared in the run config
  std::vector<std::vector<std::string>> rows;
};

struct SourceDataset {
  std::vector<JsonDoc> json_docs;
  std::vector<Triple> rdf_triples;
  std::vector<RelTable> rel_tables;

  std::size_t rel_row_count() const;
};

struct CsvSource {
  std::string table;
  std::string path;
  std::vector<std::string> key_columns;
};

/// Flat `key = value` file; '#' starts a comment line.
using KeyValueConfig = std::map<std::string, std::string>;

KeyValueConfig load_key_value_file(const std::string& path);

struct IngestConfig {
  std::string json_path;  // empty = source absent
  std::string rdf_path;
  std::vector<CsvSource> csv_sources;
  int threshold1 = 0;
  int threshold2 = 0;
  std::string constraint_pool_path;
  std::string workload_path;
  std::string stats_path;
  double c_scan = 1e-7;
  double c_join = 3e-7;
  KeyValueConfig raw;  // the whole file, for keys owned by other layers
};

/// Loads a run configuration. Relative paths inside the file resolve against
/// the config file's own directory. `csv_paths` entries look like
/// `table:path:key1+key2`, comma-separated.
IngestConfig load_ingest_config(const std::string& path);

/// Parses every configured source into memory. Throws FileNotFound,
/// MalformedLine, or DuplicateObjectId.
SourceDataset ingest_sources(const IngestConfig& config);

// Individual parsers, exposed for tests and tools.
std::vector<JsonDoc> parse_json_lines(const std::string& path);
std::vector<Triple> parse_ntriples(const std::string& path);
RelTable parse_csv_table(const CsvSource& source);

}  // namespace schemaforge
