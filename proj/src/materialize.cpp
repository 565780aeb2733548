#include "schemaforge/materialize.hpp"

#include <algorithm>
#include <unordered_map>

namespace schemaforge {

std::size_t MaterializedSchema::row_count(int table_id) const {
  auto it = tables.find(table_id);
  return it == tables.end() ? 0 : it->second.rows.size();
}

const MaterializedTable& MaterializedSchema::table_of_attr(int attr_id) const {
  auto it = attr_home.find(attr_id);
  if (it == attr_home.end()) throw UnknownAttribute(attr_id);
  return tables.at(it->second);
}

namespace {

MaterializedTable materialize_singleton(int table_id, int attr_id, const DsmStore& store) {
  MaterializedTable table;
  table.table_id = table_id;
  table.attr_ids = {attr_id};
  if (const BinaryTable* bin = store.binary(attr_id)) {
    table.rows.reserve(bin->rows.size());
    for (const auto& [entity, value] : bin->rows)
      table.rows.push_back({entity, {value}});
  }
  return table;
}

MaterializedTable materialize_merged(int table_id, const std::vector<int>& attr_ids,
                                     const DsmStore& store) {
  // Full outer join on the entity key: one row per distinct entity, first
  // occurrence wins when an operand repeats an entity.
  std::vector<std::unordered_map<std::string, const std::string*>> value_of(attr_ids.size());
  std::vector<std::string> entities;
  for (std::size_t c = 0; c < attr_ids.size(); ++c) {
    if (const BinaryTable* bin = store.binary(attr_ids[c])) {
      for (const auto& [entity, value] : bin->rows) {
        if (value_of[c].emplace(entity, &value).second &&
            std::none_of(value_of.begin(), value_of.begin() + static_cast<long>(c),
                         [&](const auto& m) { return m.count(entity) != 0; }))
          entities.push_back(entity);
      }
    }
  }
  std::sort(entities.begin(), entities.end());

  MaterializedTable table;
  table.table_id = table_id;
  table.attr_ids = attr_ids;
  table.rows.reserve(entities.size());
  for (const std::string& entity : entities) {
    MaterializedTable::Row row;
    row.entity = entity;
    row.values.reserve(attr_ids.size());
    for (std::size_t c = 0; c < attr_ids.size(); ++c) {
      auto it = value_of[c].find(entity);
      row.values.push_back(it == value_of[c].end() ? std::optional<std::string>{}
                                                   : std::optional<std::string>{*it->second});
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace

MaterializedSchema materialize(const SchemaDict& tables, const DsmStore& store,
                               const ConstraintPool& pool) {
  MaterializedSchema ms;
  ms.store = &store;
  for (const auto& [table_id, attrs] : tables) {
    if (attrs.size() > 1 && !pool.connected(attrs)) {
      std::string ids;
      for (int id : attrs) ids += (ids.empty() ? "" : " ") + std::to_string(id);
      throw IncompatibleEntityDomains("table [" + ids + "] has no pool-declared join keys");
    }
    ms.tables.emplace(table_id, attrs.size() == 1
                                    ? materialize_singleton(table_id, attrs.front(), store)
                                    : materialize_merged(table_id, attrs, store));
    for (int id : attrs) ms.attr_home[id] = table_id;
  }
  return ms;
}

std::uint64_t storage_size(const MaterializedSchema& ms) {
  std::uint64_t total = 0;
  for (const auto& [id, table] : ms.tables) {
    for (const MaterializedTable::Row& row : table.rows) {
      total += 8 + row.entity.size();
      for (const auto& value : row.values)
        if (value) total += value->size();
    }
  }
  if (ms.store) {
    for (ValueKind kind : {ValueKind::String, ValueKind::Number, ValueKind::Bool}) {
      for (const ArrayRow& row : ms.store->array_table(kind).rows)
        total += 8 + row.obj_id.size() + row.key.size() +
                 std::to_string(row.index).size() + row.value.size();
    }
  }
  return total;
}

}  // namespace schemaforge
