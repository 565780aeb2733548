#include "schemaforge/schema_state.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace schemaforge {

std::string encode_state(const SchemaDict& tables) {
  std::string out;
  bool first_table = true;
  for (const auto& [id, attrs] : tables) {
    if (!first_table) out += " 0 ";
    first_table = false;
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      if (i > 0) out += ' ';
      out += std::to_string(attrs[i]);
    }
  }
  return out;
}

SchemaDict decode_state(const std::string& encoded) {
  std::istringstream in(encoded);
  std::vector<std::vector<int>> segments(1);
  std::string token;
  while (in >> token) {
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw MalformedEncoding("token '" + token + "' is not an integer");
    }
    if (value < 0) throw MalformedEncoding("negative id " + token);
    if (value == 0) {
      segments.emplace_back();  // separator
    } else {
      segments.back().push_back(value);
    }
  }
  if (segments.size() == 1 && segments.front().empty()) return {};  // empty state

  SchemaDict tables;
  std::set<int> seen;
  int prev_table_id = 0;
  for (const std::vector<int>& attrs : segments) {
    if (attrs.empty()) throw MalformedEncoding("empty table segment");
    for (std::size_t i = 1; i < attrs.size(); ++i)
      if (attrs[i] <= attrs[i - 1])
        throw MalformedEncoding("attribute list not strictly ascending");
    for (int id : attrs)
      if (!seen.insert(id).second)
        throw MalformedEncoding("attribute id " + std::to_string(id) + " appears twice");
    int table_id = attrs.front();
    if (table_id <= prev_table_id) throw MalformedEncoding("tables not in ascending id order");
    prev_table_id = table_id;
    tables.emplace(table_id, attrs);
  }
  return tables;
}

SchemaState make_state(SchemaDict tables) {
  SchemaState state;
  state.canon = encode_state(tables);
  state.tables = std::move(tables);
  return state;
}

SchemaState initial_state(const AttributeCatalog& cat) {
  SchemaDict tables;
  for (int id : cat.action_ids()) tables.emplace(id, std::vector<int>{id});
  return make_state(std::move(tables));
}

void validate_partition(const SchemaDict& tables, const AttributeCatalog& cat) {
  std::set<int> covered;
  for (const auto& [table_id, attrs] : tables) {
    if (attrs.empty() || attrs.front() != table_id)
      throw MalformedEncoding("table " + std::to_string(table_id) +
                              " is not keyed by its minimum attribute id");
    for (int id : attrs) {
      if (!cat.has_id(id))
        throw MalformedEncoding("attribute id " + std::to_string(id) +
                                " is not in the catalog");
      if (!covered.insert(id).second)
        throw MalformedEncoding("attribute id " + std::to_string(id) + " appears twice");
    }
  }
  if (covered.size() != static_cast<std::size_t>(cat.q()))
    throw MalformedEncoding("state covers " + std::to_string(covered.size()) + " of " +
                            std::to_string(cat.q()) + " attribute ids");
}

int table_of(const SchemaDict& tables, int attr_id) {
  for (const auto& [table_id, attrs] : tables)
    if (std::binary_search(attrs.begin(), attrs.end(), attr_id)) return table_id;
  throw UnknownAttribute(attr_id);
}

JoinOutcome apply_join(const SchemaState& state, int action, int target_table,
                       const ConstraintPool& pool) {
  int home = table_of(state.tables, action);
  if (state.tables.at(home).size() != 1) throw ActionNotSingleton(action);

  auto target_it = state.tables.find(target_table);
  if (target_it == state.tables.end() || target_table == home)
    throw UnknownTarget(target_table);

  if (!pool.allows_into(action, target_it->second)) return {false, state};

  SchemaDict next = state.tables;
  next.erase(home);
  std::vector<int> merged = next.at(target_table);
  merged.insert(std::upper_bound(merged.begin(), merged.end(), action), action);
  next.erase(target_table);
  next.emplace(merged.front(), std::move(merged));  // table id = min attribute id
  return {true, make_state(std::move(next))};
}

}  // namespace schemaforge
