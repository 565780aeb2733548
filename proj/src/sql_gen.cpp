#include "schemaforge/sql_gen.hpp"

#include <algorithm>
#include <set>

namespace schemaforge {

std::string sql_quote(const std::string& raw) {
  std::string out = "'";
  for (char c : raw) {
    if (c == '\'') out += '\'';
    out += c;
  }
  out += '\'';
  return out;
}

namespace {

std::string table_name(int table_id) { return "t" + std::to_string(table_id); }
std::string column_name(int attr_id) { return "a" + std::to_string(attr_id); }

const char* op_symbol(FilterOp op) {
  switch (op) {
    case FilterOp::Eq: return "=";
    case FilterOp::Lt: return "<";
    case FilterOp::Gt: return ">";
  }
  return "=";
}

}  // namespace

std::string rewrite_query(const LogicalQuery& query, const SchemaDict& tables,
                          const AttributeCatalog& cat) {
  // Resolve every referenced name and the minimal covering table set.
  std::vector<int> select_ids;
  std::set<int> referenced;
  for (const std::string& name : query.select) {
    int id = cat.id_of(name);
    select_ids.push_back(id);
    referenced.insert(id);
  }
  for (const Filter& filter : query.filters) {
    if (filter.name == "_entity") continue;
    referenced.insert(cat.id_of(filter.name));
  }

  std::set<int> covering;
  for (int id : referenced) covering.insert(table_of(tables, id));
  bool qualified = covering.size() > 1;
  int base = *covering.begin();

  auto column = [&](int attr_id) {
    int home = table_of(tables, attr_id);
    return qualified ? table_name(home) + "." + column_name(attr_id) : column_name(attr_id);
  };
  auto entity_column = [&] {
    return qualified ? table_name(base) + ".entity" : std::string("entity");
  };

  std::string sql = "SELECT ";
  for (std::size_t i = 0; i < select_ids.size(); ++i) {
    if (i > 0) sql += ", ";
    sql += column(select_ids[i]);
  }
  sql += " FROM " + table_name(base);
  for (int tid : covering) {
    if (tid == base) continue;
    sql += " INNER JOIN " + table_name(tid) + " ON " + table_name(base) + ".entity = " +
           table_name(tid) + ".entity";
  }

  std::vector<std::string> predicates;
  for (int id : referenced) {
    // Guard attributes living in merged tables against outer-join nulls.
    if (tables.at(table_of(tables, id)).size() > 1)
      predicates.push_back(column(id) + " IS NOT NULL");
  }
  for (const Filter& filter : query.filters) {
    std::string lhs = filter.name == "_entity" ? entity_column() : column(cat.id_of(filter.name));
    predicates.push_back(lhs + " " + op_symbol(filter.op) + " " + sql_quote(filter.literal));
  }
  for (std::size_t i = 0; i < predicates.size(); ++i)
    sql += (i == 0 ? " WHERE " : " AND ") + predicates[i];
  return sql;
}

std::string generate_ddl(const SchemaDict& tables, const AttributeCatalog& cat) {
  std::string sql;
  (void)cat;
  for (const auto& [table_id, attrs] : tables) {
    sql += "CREATE TABLE " + table_name(table_id) + " (entity TEXT";
    for (int id : attrs) sql += ", " + column_name(id) + " TEXT";
    sql += ");\n";
  }
  sql += "CREATE TABLE ArrayStringTable (objId TEXT, key TEXT, idx INTEGER, valStr TEXT);\n";
  sql += "CREATE TABLE ArrayNumberTable (objId TEXT, key TEXT, idx INTEGER, valNum REAL);\n";
  sql += "CREATE TABLE ArrayBoolTable (objId TEXT, key TEXT, idx INTEGER, valBool INTEGER);\n";
  return sql;
}

std::string generate_load(const MaterializedSchema& ms) {
  std::string sql;
  for (const auto& [table_id, table] : ms.tables) {
    for (const MaterializedTable::Row& row : table.rows) {
      sql += "INSERT INTO " + table_name(table_id) + " VALUES (" + sql_quote(row.entity);
      for (const auto& value : row.values)
        sql += value ? ", " + sql_quote(*value) : std::string(", NULL");
      sql += ");\n";
    }
  }
  if (ms.store) {
    struct ArraySpec {
      ValueKind kind;
      const char* table;
      bool quote_value;
    };
    for (const ArraySpec& spec : {ArraySpec{ValueKind::String, "ArrayStringTable", true},
                                  ArraySpec{ValueKind::Number, "ArrayNumberTable", false},
                                  ArraySpec{ValueKind::Bool, "ArrayBoolTable", false}}) {
      for (const ArrayRow& row : ms.store->array_table(spec.kind).rows) {
        std::string value = spec.quote_value ? sql_quote(row.value)
                            : spec.kind == ValueKind::Bool ? (row.value == "true" ? "1" : "0")
                                                           : row.value;
        sql += std::string("INSERT INTO ") + spec.table + " VALUES (" + sql_quote(row.obj_id) +
               ", " + sql_quote(row.key) + ", " + std::to_string(row.index) + ", " + value +
               ");\n";
      }
    }
  }
  return sql;
}

std::string generate_queries_sql(const Workload& workload, const SchemaDict& tables,
                                 const AttributeCatalog& cat) {
  std::string sql;
  for (const LogicalQuery& query : workload.queries) {
    sql += "-- " + query.id + "\n";
    sql += rewrite_query(query, tables, cat) + ";\n";
  }
  return sql;
}

}  // namespace schemaforge
