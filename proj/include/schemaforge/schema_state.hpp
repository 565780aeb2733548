#pragma once

#include <map>
#include <string>
#include <vector>

#include "schemaforge/catalog.hpp"

namespace schemaforge {

/// A relational schema as a partition of the catalog's attribute ids. Each
/// table is keyed by the minimum attribute id it holds and its list stays
/// strictly ascending.
using SchemaDict = std::map<int, std::vector<int>>;

struct SchemaState {
  SchemaDict tables;
  std::string canon;  // always encode_state(tables)
};

/// Serializes tables in ascending table-id order, ids space-separated, with
/// the reserved separator "0" between tables: {1:[1,3],2:[2]} -> "1 3 0 2".
std::string encode_state(const SchemaDict& tables);

/// Inverse of encode_state; accepts only canonical strings. Throws
/// MalformedEncoding on empty segments, non-ascending lists, duplicate ids,
/// or tables out of order.
SchemaDict decode_state(const std::string& encoded);

SchemaState make_state(SchemaDict tables);

/// D0: every catalog id in its own singleton table.
SchemaState initial_state(const AttributeCatalog& cat);

/// Throws MalformedEncoding when the dict does not partition the catalog's
/// action set exactly.
void validate_partition(const SchemaDict& tables, const AttributeCatalog& cat);

/// Table id housing an attribute. Throws UnknownAttribute.
int table_of(const SchemaDict& tables, int attr_id);

struct JoinOutcome {
  bool accepted = false;
  SchemaState state;  // next state when accepted, the input state otherwise
};

/// Moves the action's singleton table into `target_table`. The merged table
/// is keyed by the minimum id of the union. A pool veto rejects the join and
/// leaves the state unchanged; structural misuse throws (ActionNotSingleton,
/// UnknownTarget).
JoinOutcome apply_join(const SchemaState& state, int action, int target_table,
                       const ConstraintPool& pool);

}  // namespace schemaforge
