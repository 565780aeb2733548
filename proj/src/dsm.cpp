#include "schemaforge/dsm.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>

namespace schemaforge {

namespace {

void append_scalar(std::map<int, BinaryTable>& tables, std::map<int, bool>& kind_set, int id,
                   const std::string& entity, const Scalar& value) {
  BinaryTable& table = tables[id];
  if (!kind_set[id]) {
    table.table_id = id;
    table.kind = value.kind;
    kind_set[id] = true;
  } else if (table.kind != value.kind) {
    table.kind = ValueKind::String;  // mixed occurrences degrade to string
  }
  table.rows.emplace_back(entity, value.text);
}

ValueKind unified_array_kind(const std::vector<Scalar>& values) {
  ValueKind kind = values.front().kind;
  for (const Scalar& v : values)
    if (v.kind != kind) return ValueKind::String;
  return kind;
}

}  // namespace

JsonDecomposition decompose_json(const std::vector<JsonDoc>& docs, const AttributeCatalog& cat) {
  JsonDecomposition out;
  std::map<int, bool> kind_set;
  for (const JsonDoc& doc : docs) {
    for (const JsonField& field : doc.fields) {
      if (!cat.has_name(field.key)) throw UnknownKey(field.key);
      if (!field.is_array) {
        append_scalar(out.binaries, kind_set, cat.id_of(field.key), doc.object_id,
                      field.values.front());
        continue;
      }
      if (field.values.empty()) continue;
      ValueKind kind = unified_array_kind(field.values);
      ArrayTable& table = kind == ValueKind::Number ? out.numbers
                          : kind == ValueKind::Bool ? out.bools
                                                    : out.strings;
      for (std::size_t i = 0; i < field.values.size(); ++i)
        table.rows.push_back(
            {doc.object_id, field.key, static_cast<int>(i), field.values[i].text});
    }
  }
  return out;
}

std::map<int, BinaryTable> decompose_rdf(const std::vector<Triple>& triples,
                                         const AttributeCatalog& cat) {
  std::map<int, BinaryTable> out;
  for (const Triple& triple : triples) {
    if (!cat.has_name(triple.predicate)) throw UnknownPredicate(triple.predicate);
    int id = cat.id_of(triple.predicate);
    BinaryTable& table = out[id];
    table.table_id = id;
    table.rows.emplace_back(triple.subject, triple.object);
  }
  return out;
}

std::map<int, BinaryTable> decompose_relational(const std::vector<RelTable>& tables,
                                                const AttributeCatalog& cat) {
  std::map<int, BinaryTable> out;
  std::map<int, bool> kind_set;
  for (const RelTable& table : tables) {
    if (table.columns.empty()) continue;

    std::vector<std::size_t> key_idx;
    for (const std::string& key : table.key_columns) {
      auto it = std::find(table.columns.begin(), table.columns.end(), key);
      if (it == table.columns.end()) throw MissingKeyColumn(table.name, key);
      key_idx.push_back(static_cast<std::size_t>(it - table.columns.begin()));
    }

    for (const std::vector<std::string>& row : table.rows) {
      std::string entity;
      for (std::size_t i = 0; i < key_idx.size(); ++i) {
        if (i > 0) entity += kEntitySeparator;
        entity += row[key_idx[i]];
      }
      for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (std::find(key_idx.begin(), key_idx.end(), c) != key_idx.end()) continue;
        if (!cat.has_name(table.columns[c])) throw UnknownKey(table.columns[c]);
        append_scalar(out, kind_set, cat.id_of(table.columns[c]), entity,
                      Scalar{ValueKind::String, row[c]});
      }
    }
  }
  return out;
}

DsmStore DsmStore::build(const SourceDataset& ds, const AttributeCatalog& cat) {
  DsmStore store;
  JsonDecomposition json = decompose_json(ds.json_docs, cat);
  store.binaries_ = std::move(json.binaries);
  store.arr_string_ = std::move(json.strings);
  store.arr_number_ = std::move(json.numbers);
  store.arr_bool_ = std::move(json.bools);

  for (auto& [id, table] : decompose_rdf(ds.rdf_triples, cat))
    store.binaries_.emplace(id, std::move(table));
  for (auto& [id, table] : decompose_relational(ds.rel_tables, cat))
    store.binaries_.emplace(id, std::move(table));

  for (const ArrayTable* arr : {&store.arr_string_, &store.arr_number_, &store.arr_bool_}) {
    for (const ArrayRow& row : arr->rows) {
      std::vector<ValueKind>& kinds = store.array_kinds_[row.key];
      if (std::find(kinds.begin(), kinds.end(), arr->kind) == kinds.end())
        kinds.push_back(arr->kind);
    }
  }
  return store;
}

const BinaryTable* DsmStore::binary(int table_id) const {
  auto it = binaries_.find(table_id);
  return it == binaries_.end() ? nullptr : &it->second;
}

const ArrayTable& DsmStore::array_table(ValueKind kind) const {
  switch (kind) {
    case ValueKind::Number: return arr_number_;
    case ValueKind::Bool: return arr_bool_;
    case ValueKind::String: break;
  }
  return arr_string_;
}

std::size_t DsmStore::row_count(int table_id) const {
  const BinaryTable* table = binary(table_id);
  return table ? table->rows.size() : 0;
}

const std::vector<ValueKind>& DsmStore::array_kinds_of(const std::string& key) const {
  static const std::vector<ValueKind> empty;
  auto it = array_kinds_.find(key);
  return it == array_kinds_.end() ? empty : it->second;
}

std::uint64_t DsmStore::total_value_cells() const {
  std::uint64_t total = 0;
  for (const auto& [id, table] : binaries_) total += table.rows.size();
  total += arr_string_.rows.size() + arr_number_.rows.size() + arr_bool_.rows.size();
  return total;
}

// ---------------------------------------------------------------------------
// CSV dump
// ---------------------------------------------------------------------------

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string sanitize_name(const std::string& name) {
  std::string out;
  for (char c : name) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  return out;
}

}  // namespace

void dump_store_csv(const DsmStore& store, const AttributeCatalog& cat, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& [id, table] : store.binaries()) {
    std::string path =
        dir + "/" + std::to_string(id) + "_" + sanitize_name(cat.name_of(id)) + ".csv";
    std::ofstream out(path);
    out << "entity,value\n";
    for (const auto& [entity, value] : table.rows)
      out << csv_escape(entity) << ',' << csv_escape(value) << '\n';
  }
  for (ValueKind kind : {ValueKind::String, ValueKind::Number, ValueKind::Bool}) {
    std::ofstream out(dir + "/array_" + to_string(kind) + ".csv");
    out << "objId,key,index,val\n";
    for (const ArrayRow& row : store.array_table(kind).rows)
      out << csv_escape(row.obj_id) << ',' << csv_escape(row.key) << ',' << row.index << ','
          << csv_escape(row.value) << '\n';
  }
}

}  // namespace schemaforge
