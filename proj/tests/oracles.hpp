#pragma once

// Independent oracles used to cross-check the implementation. Everything in
// this header is deliberately written as straight-line logic over plain data
// and must not call the code paths it verifies.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "schemaforge/catalog.hpp"
#include "schemaforge/materialize.hpp"
#include "schemaforge/workload.hpp"

namespace sforacle {

/// Non-blank, non-comment lines of a file.
inline std::size_t count_data_lines(const std::string& path, char comment = '#') {
  std::ifstream in(path);
  std::size_t count = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::size_t b = line.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) continue;
    if (line[b] == comment) continue;
    ++count;
  }
  return count;
}

/// Random set partition of `ids`, canonicalized: blocks keyed by their
/// minimum element, members ascending.
inline std::map<int, std::vector<int>> random_partition(std::mt19937_64& rng,
                                                        const std::vector<int>& ids) {
  std::vector<std::vector<int>> blocks;
  for (int id : ids) {
    std::uint64_t pick = rng() % (blocks.size() + 1);
    if (pick == blocks.size())
      blocks.push_back({id});
    else
      blocks[pick].push_back(id);
  }
  std::map<int, std::vector<int>> partition;
  for (std::vector<int>& block : blocks) {
    std::sort(block.begin(), block.end());
    partition[block.front()] = block;
  }
  return partition;
}

/// All set partitions of `ids` (Bell-number many; keep the set small).
inline std::vector<std::vector<std::vector<int>>> all_partitions(const std::vector<int>& ids) {
  std::vector<std::vector<std::vector<int>>> out;
  std::vector<std::vector<int>> current;
  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == ids.size()) {
      out.push_back(current);
      return;
    }
    for (std::vector<int>& block : current) {
      block.push_back(ids[i]);
      self(self, i + 1);
      block.pop_back();
    }
    current.push_back({ids[i]});
    self(self, i + 1);
    current.pop_back();
  };
  recurse(recurse, 0);
  return out;
}

/// Connectivity of one block under an explicit edge list.
inline bool block_connected(const std::vector<int>& block,
                            const std::set<std::pair<int, int>>& edges) {
  if (block.size() <= 1) return true;
  std::set<int> reached{block.front()};
  bool grew = true;
  while (grew) {
    grew = false;
    for (int id : block) {
      if (reached.count(id)) continue;
      for (int r : reached) {
        if (edges.count({std::min(id, r), std::max(id, r)})) {
          reached.insert(id);
          grew = true;
          break;
        }
      }
    }
  }
  return reached.size() == block.size();
}

// ---------------------------------------------------------------------------
// Nested-loop query evaluation over materialized tables. Mirrors the
// rewritten SQL semantics: inner join of the covering tables on the entity
// key, every referenced attribute non-null, filters compared bytewise.
// ---------------------------------------------------------------------------

using AnswerRow = std::vector<std::string>;
using AnswerMultiset = std::vector<AnswerRow>;  // sorted for comparison

inline AnswerMultiset nested_loop_eval(const schemaforge::MaterializedSchema& ms,
                                       const schemaforge::LogicalQuery& query,
                                       const schemaforge::AttributeCatalog& cat) {
  using namespace schemaforge;

  std::vector<int> referenced;
  for (const std::string& name : query.select) referenced.push_back(cat.id_of(name));
  for (const Filter& f : query.filters)
    if (f.name != "_entity") referenced.push_back(cat.id_of(f.name));

  std::vector<int> covering;
  for (int id : referenced) {
    int home = ms.attr_home.at(id);
    if (std::find(covering.begin(), covering.end(), home) == covering.end())
      covering.push_back(home);
  }
  std::sort(covering.begin(), covering.end());

  // One combined record per join result: entity + attr id -> value.
  struct Record {
    std::string entity;
    std::map<int, std::optional<std::string>> values;
  };
  std::vector<Record> joined;
  bool first = true;
  for (int tid : covering) {
    const MaterializedTable& table = ms.tables.at(tid);
    std::vector<Record> next;
    for (const auto& row : table.rows) {
      Record rec;
      rec.entity = row.entity;
      for (std::size_t c = 0; c < table.attr_ids.size(); ++c)
        rec.values[table.attr_ids[c]] = row.values[c];
      if (first) {
        next.push_back(std::move(rec));
      } else {
        for (const Record& left : joined) {
          if (left.entity != rec.entity) continue;
          Record merged = left;
          for (const auto& [id, v] : rec.values) merged.values[id] = v;
          next.push_back(std::move(merged));
        }
      }
    }
    joined = std::move(next);
    first = false;
  }

  AnswerMultiset answers;
  for (const Record& rec : joined) {
    bool ok = true;
    for (int id : referenced) {
      auto it = rec.values.find(id);
      if (it == rec.values.end() || !it->second) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    for (const Filter& f : query.filters) {
      std::string lhs = f.name == "_entity" ? rec.entity : *rec.values.at(cat.id_of(f.name));
      int cmp = lhs.compare(f.literal);
      bool pass = f.op == FilterOp::Eq   ? cmp == 0
                  : f.op == FilterOp::Lt ? cmp < 0
                                         : cmp > 0;
      if (!pass) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    AnswerRow row;
    for (const std::string& name : query.select) row.push_back(*rec.values.at(cat.id_of(name)));
    answers.push_back(std::move(row));
  }
  std::sort(answers.begin(), answers.end());
  return answers;
}

// ---------------------------------------------------------------------------
// Full outer join of (entity, value) operand tables, one row per distinct
// entity, for checking merged-table materialization on functional data.
// ---------------------------------------------------------------------------

inline std::set<std::vector<std::string>> outer_join_rows(
    const std::vector<std::vector<std::pair<std::string, std::string>>>& operands,
    const std::string& null_marker) {
  std::set<std::string> entities;
  for (const auto& table : operands)
    for (const auto& [entity, value] : table) entities.insert(entity);

  std::set<std::vector<std::string>> rows;
  for (const std::string& entity : entities) {
    std::vector<std::string> row{entity};
    for (const auto& table : operands) {
      auto it = std::find_if(table.begin(), table.end(),
                             [&](const auto& r) { return r.first == entity; });
      row.push_back(it == table.end() ? null_marker : it->second);
    }
    rows.insert(std::move(row));
  }
  return rows;
}

/// Straight-line restatement of the analytic per-query formula: scan every
/// accessed table once, then join them in ascending-id order paying
/// |L| + |R| per join.
inline double query_cost_formula(const std::vector<std::uint64_t>& accessed_rows_ascending,
                                 std::uint64_t array_rows, double c_scan, double c_join) {
  std::uint64_t scanned = array_rows;
  for (std::uint64_t rows : accessed_rows_ascending) scanned += rows;
  std::uint64_t joined = 0;
  for (std::size_t i = 1; i < accessed_rows_ascending.size(); ++i)
    joined += accessed_rows_ascending[i - 1] + accessed_rows_ascending[i];
  return c_scan * static_cast<double>(scanned) + c_join * static_cast<double>(joined);
}

}  // namespace sforacle
