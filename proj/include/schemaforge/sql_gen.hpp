#pragma once

#include <string>

#include "schemaforge/materialize.hpp"
#include "schemaforge/workload.hpp"

namespace schemaforge {

/// Single-quoted SQL string literal with quote doubling.
std::string sql_quote(const std::string& raw);

/// Rewrites one logical query against the given state: a SELECT joining (on
/// entity-key equality) exactly the tables covering the query's attributes
/// and filters. Table names are `t<table_id>`, columns `entity` and
/// `a<attribute_id>`. Attributes housed in a multi-attribute table get an
/// IS NOT NULL guard so outer-join padding rows never change the answer.
std::string rewrite_query(const LogicalQuery& query, const SchemaDict& tables,
                          const AttributeCatalog& cat);

/// One CREATE TABLE per table of the state plus the three fixed array
/// tables. `index` is emitted as `idx` (reserved word in common engines).
std::string generate_ddl(const SchemaDict& tables, const AttributeCatalog& cat);

/// INSERT statements reproducing every materialized row, nulls as SQL NULL,
/// plus the array-table rows.
std::string generate_load(const MaterializedSchema& ms);

/// queries.sql: a `-- <query-id>` comment line before each rewritten
/// statement.
std::string generate_queries_sql(const Workload& workload, const SchemaDict& tables,
                                 const AttributeCatalog& cat);

}  // namespace schemaforge
