#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "schemaforge/dsm.hpp"
#include "schemaforge/schema_state.hpp"

namespace schemaforge {

/// Physical counterpart of one schema table: an entity column plus one value
/// column per attribute id, ascending. nullopt cells are SQL NULLs.
struct MaterializedTable {
  int table_id = 0;
  std::vector<int> attr_ids;

  struct Row {
    std::string entity;
    std::vector<std::optional<std::string>> values;
  };
  std::vector<Row> rows;
};

struct MaterializedSchema {
  std::map<int, MaterializedTable> tables;
  std::map<int, int> attr_home;   // attribute id -> table id
  const DsmStore* store = nullptr;  // array tables stay in the store

  std::size_t row_count(int table_id) const;
  const MaterializedTable& table_of_attr(int attr_id) const;
};

/// Realizes a schema state over the DSM store. Singleton tables mirror their
/// binary tables exactly; multi-attribute tables are the full outer join of
/// their operand tables on the entity key, one row per distinct entity,
/// ordered by entity. Throws IncompatibleEntityDomains when a table's
/// attributes are not pool-connected.
MaterializedSchema materialize(const SchemaDict& tables, const DsmStore& store,
                               const ConstraintPool& pool);

/// Deterministic size: per row, the byte length of every cell (entity
/// included, nulls count 0) plus 8 bytes of row overhead. Array tables are
/// part of the physical schema and are included.
std::uint64_t storage_size(const MaterializedSchema& ms);

}  // namespace schemaforge
