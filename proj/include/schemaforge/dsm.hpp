#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "schemaforge/catalog.hpp"

namespace schemaforge {

/// Composite relational keys are rendered as a single entity string with this
/// separator, so every DSM table has one logical entity column.
inline constexpr char kEntitySeparator = '\x1F';

/// Two-column table holding every (entity, value) occurrence of one
/// key/predicate/attribute. The value kind is inferred from the first
/// occurrence; mixed occurrences degrade the table to String.
struct BinaryTable {
  int table_id = 0;
  ValueKind kind = ValueKind::String;
  std::vector<std::pair<std::string, std::string>> rows;
};

struct ArrayRow {
  std::string obj_id;
  std::string key;
  int index = 0;  // 0-based, contiguous per (obj_id, key)
  std::string value;
};

struct ArrayTable {
  ValueKind kind = ValueKind::String;
  std::vector<ArrayRow> rows;
};

struct JsonDecomposition {
  std::map<int, BinaryTable> binaries;
  ArrayTable strings{ValueKind::String, {}};
  ArrayTable numbers{ValueKind::Number, {}};
  ArrayTable bools{ValueKind::Bool, {}};
};

JsonDecomposition decompose_json(const std::vector<JsonDoc>& docs, const AttributeCatalog& cat);
std::map<int, BinaryTable> decompose_rdf(const std::vector<Triple>& triples,
                                         const AttributeCatalog& cat);
std::map<int, BinaryTable> decompose_relational(const std::vector<RelTable>& tables,
                                                const AttributeCatalog& cat);

/// The fully decomposed physical storage: one binary table per id with scalar
/// occurrences, plus the three typed array tables. Immutable once built.
class DsmStore {
 public:
  static DsmStore build(const SourceDataset& ds, const AttributeCatalog& cat);

  const std::map<int, BinaryTable>& binaries() const { return binaries_; }
  /// nullptr when the id has no scalar occurrence (array-only keys).
  const BinaryTable* binary(int table_id) const;
  const ArrayTable& array_table(ValueKind kind) const;
  std::size_t row_count(int table_id) const;

  /// Kinds of array rows stored under a JSON key name; empty for keys that
  /// never carried an array.
  const std::vector<ValueKind>& array_kinds_of(const std::string& key) const;

  /// Scalar plus array value cells, for conservation checks.
  std::uint64_t total_value_cells() const;

 private:
  std::map<int, BinaryTable> binaries_;
  ArrayTable arr_string_{ValueKind::String, {}};
  ArrayTable arr_number_{ValueKind::Number, {}};
  ArrayTable arr_bool_{ValueKind::Bool, {}};
  std::map<std::string, std::vector<ValueKind>> array_kinds_;
};

/// Writes every DSM table as CSV into `dir`: `<id>_<name>.csv` with header
/// `entity,value`, and the array tables as `array_<kind>.csv` with header
/// `objId,key,index,val`.
void dump_store_csv(const DsmStore& store, const AttributeCatalog& cat, const std::string& dir);

}  // namespace schemaforge
