#include "schemaforge/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"

namespace schemaforge {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

const char* to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::String: return "string";
    case ValueKind::Number: return "number";
    case ValueKind::Bool: return "bool";
  }
  return "?";
}

std::size_t SourceDataset::rel_row_count() const {
  std::size_t total = 0;
  for (const auto& table : rel_tables) total += table.rows.size();
  return total;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

void require_file(const std::string& path) {
  if (!fs::exists(path)) throw FileNotFound(path);
}

std::ifstream open_file(const std::string& path) {
  require_file(path);
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

}  // namespace

KeyValueConfig load_key_value_file(const std::string& path) {
  std::ifstream in = open_file(path);
  KeyValueConfig kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw MalformedLine(path, line_no, "expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw MalformedLine(path, line_no, "empty key");
    kv[key] = value;
  }
  return kv;
}

IngestConfig load_ingest_config(const std::string& path) {
  KeyValueConfig kv = load_key_value_file(path);
  fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string& p) -> std::string {
    if (p.empty()) return p;
    fs::path fp(p);
    return fp.is_absolute() ? fp.string() : (base / fp).lexically_normal().string();
  };

  IngestConfig cfg;
  cfg.raw = kv;
  auto get = [&](const char* key) -> std::string {
    auto it = kv.find(key);
    return it == kv.end() ? std::string() : it->second;
  };

  cfg.json_path = resolve(get("json_path"));
  cfg.rdf_path = resolve(get("rdf_path"));
  cfg.constraint_pool_path = resolve(get("constraint_pool_path"));
  cfg.workload_path = resolve(get("workload_path"));
  cfg.stats_path = resolve(get("stats_path"));

  auto get_int = [&](const char* key, int def) {
    std::string v = get(key);
    if (v.empty()) return def;
    try {
      return std::stoi(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string(key) + " is not an integer: '" + v + "'");
    }
  };
  auto get_double = [&](const char* key, double def) {
    std::string v = get(key);
    if (v.empty()) return def;
    try {
      return std::stod(v);
    } catch (const std::exception&) {
      throw ConfigError(std::string(key) + " is not a number: '" + v + "'");
    }
  };

  cfg.threshold1 = get_int("threshold1", 0);
  cfg.threshold2 = get_int("threshold2", 0);
  cfg.c_scan = get_double("c_scan", cfg.c_scan);
  cfg.c_join = get_double("c_join", cfg.c_join);
  if (cfg.threshold1 < 0 || cfg.threshold2 < cfg.threshold1)
    throw ConfigError("thresholds must satisfy 0 <= threshold1 <= threshold2");
  if (cfg.c_scan < 0 || cfg.c_join < 0)
    throw ConfigError("cost constants must be nonnegative");

  std::string csvs = get("csv_paths");
  if (!csvs.empty()) {
    for (const std::string& entry : split(csvs, ',')) {
      std::string e = trim(entry);
      if (e.empty()) continue;
      std::vector<std::string> parts = split(e, ':');
      if (parts.size() != 3)
        throw ConfigError("csv_paths entry '" + e + "' is not table:path:keycols");
      CsvSource src;
      src.table = trim(parts[0]);
      src.path = resolve(trim(parts[1]));
      for (const std::string& k : split(parts[2], '+')) {
        std::string kt = trim(k);
        if (!kt.empty()) src.key_columns.push_back(kt);
      }
      if (src.table.empty() || src.path.empty() || src.key_columns.empty())
        throw ConfigError("csv_paths entry '" + e + "' is incomplete");
      cfg.csv_sources.push_back(std::move(src));
    }
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// JSON lines
// ---------------------------------------------------------------------------

namespace {

Scalar scalar_of(const ojson& v) {
  if (v.is_string()) return {ValueKind::String, v.get<std::string>()};
  if (v.is_boolean()) return {ValueKind::Bool, v.get<bool>() ? "true" : "false"};
  if (v.is_number()) return {ValueKind::Number, v.dump()};
  // non-scalar array elements are kept as their compact JSON rendering
  return {ValueKind::String, v.dump()};
}

void flatten_object(const ojson& obj, const std::string& prefix, JsonDoc& doc) {
  for (const auto& [key, value] : obj.items()) {
    std::string path = prefix.empty() ? key : prefix + "." + key;
    if (value.is_null()) continue;  // missing key, no row
    if (value.is_object()) {
      flatten_object(value, path, doc);
    } else if (value.is_array()) {
      JsonField field{path, true, {}};
      field.values.reserve(value.size());
      for (const auto& elem : value) field.values.push_back(scalar_of(elem));
      doc.fields.push_back(std::move(field));
    } else {
      doc.fields.push_back(JsonField{path, false, {scalar_of(value)}});
    }
  }
}

}  // namespace

std::vector<JsonDoc> parse_json_lines(const std::string& path) {
  std::ifstream in = open_file(path);
  std::vector<JsonDoc> docs;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  std::size_t ordinal = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++ordinal;
    ojson j;
    try {
      j = ojson::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw MalformedLine(path, line_no, e.what());
    }
    if (!j.is_object())
      throw MalformedLine(path, line_no, "top-level value is not an object");

    JsonDoc doc;
    if (auto it = j.find("_id"); it != j.end()) {
      if (it->is_string())
        doc.object_id = it->get<std::string>();
      else if (it->is_number_integer())
        doc.object_id = it->dump();
      else
        throw MalformedLine(path, line_no, "_id must be a string or integer");
      j.erase(it);
    } else {
      doc.object_id = std::to_string(ordinal);
    }
    if (!seen_ids.insert(doc.object_id).second)
      throw DuplicateObjectId(doc.object_id);

    flatten_object(j, "", doc);
    docs.push_back(std::move(doc));
  }
  return docs;
}

// ---------------------------------------------------------------------------
// N-Triples
// ---------------------------------------------------------------------------

namespace {

// Reads one term starting at `pos`; returns its text with IRI brackets and
// literal quotes stripped. Literal suffixes (@lang, ^^<type>) are dropped.
std::string read_term(const std::string& line, std::size_t& pos,
                      const std::string& file, std::size_t line_no, bool allow_literal) {
  while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
  if (pos >= line.size()) throw MalformedLine(file, line_no, "missing term");

  if (line[pos] == '<') {
    std::size_t end = line.find('>', pos + 1);
    if (end == std::string::npos) throw MalformedLine(file, line_no, "unterminated IRI");
    std::string iri = line.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    return iri;
  }
  if (line.compare(pos, 2, "_:") == 0) {
    std::size_t end = pos;
    while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
    std::string label = line.substr(pos, end - pos);
    pos = end;
    return label;
  }
  if (allow_literal && line[pos] == '"') {
    std::string out;
    std::size_t i = pos + 1;
    for (; i < line.size(); ++i) {
      char c = line[i];
      if (c == '\\') {
        if (i + 1 >= line.size()) throw MalformedLine(file, line_no, "dangling escape");
        char esc = line[++i];
        switch (esc) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: out += esc; break;
        }
      } else if (c == '"') {
        break;
      } else {
        out += c;
      }
    }
    if (i >= line.size()) throw MalformedLine(file, line_no, "unterminated literal");
    pos = i + 1;
    // skip @lang / ^^<datatype>
    if (pos < line.size() && line[pos] == '@') {
      while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    } else if (line.compare(pos, 2, "^^") == 0) {
      pos += 2;
      if (pos < line.size() && line[pos] == '<') {
        std::size_t end = line.find('>', pos);
        if (end == std::string::npos) throw MalformedLine(file, line_no, "unterminated datatype IRI");
        pos = end + 1;
      }
    }
    return out;
  }
  throw MalformedLine(file, line_no, "unrecognized term");
}

}  // namespace

std::vector<Triple> parse_ntriples(const std::string& path) {
  std::ifstream in = open_file(path);
  std::vector<Triple> triples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;

    std::size_t pos = 0;
    Triple triple;
    triple.subject = read_term(line, pos, path, line_no, false);
    triple.predicate = read_term(line, pos, path, line_no, false);
    triple.object = read_term(line, pos, path, line_no, true);
    while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
    if (pos >= line.size() || line[pos] != '.')
      throw MalformedLine(path, line_no, "statement does not end with '.'");
    if (!trim(line.substr(pos + 1)).empty())
      throw MalformedLine(path, line_no, "trailing content after '.'");
    if (triple.subject.empty() || triple.predicate.empty() || triple.object.empty())
      throw MalformedLine(path, line_no, "empty triple field");
    triples.push_back(std::move(triple));
  }
  return triples;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> parse_csv_record(const std::string& line, const std::string& file,
                                          std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      if (!cur.empty()) throw MalformedLine(file, line_no, "quote inside unquoted field");
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c == '\r' && i + 1 == line.size()) {
      // tolerate CRLF input
    } else {
      cur += c;
    }
  }
  if (quoted) throw MalformedLine(file, line_no, "unterminated quoted field");
  fields.push_back(cur);
  return fields;
}

}  // namespace

RelTable parse_csv_table(const CsvSource& source) {
  std::ifstream in = open_file(source.path);
  RelTable table;
  table.name = source.table;
  table.key_columns = source.key_columns;

  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!have_header && trim(line).empty()) continue;
    std::vector<std::string> record = parse_csv_record(line, source.path, line_no);
    if (!have_header) {
      table.columns = std::move(record);
      have_header = true;
      continue;
    }
    if (record.size() != table.columns.size())
      throw MalformedLine(source.path, line_no,
                          "row has " + std::to_string(record.size()) + " fields, header has " +
                              std::to_string(table.columns.size()));
    table.rows.push_back(std::move(record));
  }
  return table;  // an empty file yields a table with no columns and no rows
}

SourceDataset ingest_sources(const IngestConfig& config) {
  SourceDataset ds;
  if (!config.json_path.empty()) ds.json_docs = parse_json_lines(config.json_path);
  if (!config.rdf_path.empty()) ds.rdf_triples = parse_ntriples(config.rdf_path);
  for (const CsvSource& src : config.csv_sources) ds.rel_tables.push_back(parse_csv_table(src));
  return ds;
}

}  // namespace schemaforge
