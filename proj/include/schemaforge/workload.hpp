#pragma once

#include <string>
#include <vector>

#include "schemaforge/error.hpp"

namespace schemaforge {

enum class FilterOp { Eq, Lt, Gt };

const char* to_string(FilterOp op);

/// One predicate against an attribute name, or against the entity key when
/// the name is the reserved `_entity`.
struct Filter {
  std::string name;
  FilterOp op = FilterOp::Eq;
  std::string literal;
};

/// A workload query independent of any physical schema: what to return and
/// which rows qualify. Rewriting binds it to the current state's tables.
struct LogicalQuery {
  std::string id;
  std::vector<std::string> select;
  std::vector<Filter> filters;
};

struct Workload {
  std::vector<LogicalQuery> queries;
};

/// File format, one query per line:
///   <id>;<select names comma-separated>;<filter>[,<filter>...]
/// each filter `<name>:<op>:<literal>` with op in {eq, lt, gt}; the third
/// field may be empty. '#' starts a comment line.
Workload parse_workload(const std::string& path);
Workload parse_workload_text(const std::string& text, const std::string& file_label);

}  // namespace schemaforge
