#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "schemaforge/materialize.hpp"
#include "schemaforge/sql_gen.hpp"
#include "schemaforge/workload.hpp"

struct sqlite3;

namespace schemaforge {

/// Knobs of the analytic cost model. Row counts default to the materialized
/// cardinalities; entries here override them per table id.
struct CostStatistics {
  std::map<int, std::uint64_t> row_counts;
  double c_scan = 1e-7;  // seconds per scanned row
  double c_join = 3e-7;  // seconds per joined row
};

/// Overrides from a text file with one `table_id=rows` line per entry.
CostStatistics load_statistics(const std::string& path, CostStatistics base = {});

/// Reward of moving from a schema costing t_p to one costing t_n; negative
/// when the join made things worse.
double compute_reward(double t_p, double t_n);

/// Deterministic per-workload cost. Per query: c_scan times the rows of each
/// accessed table (array tables included when the query touches an
/// array-carrying key), plus c_join times the sum of (|L| + |R|) over the
/// joins chaining the accessed tables in ascending table-id order. A query
/// whose attributes share one table pays no join term.
double analytic_cost(const MaterializedSchema& ms, const Workload& workload,
                     const CostStatistics& stats, const AttributeCatalog& cat);

std::vector<std::pair<std::string, double>> analytic_per_query_costs(
    const MaterializedSchema& ms, const Workload& workload, const CostStatistics& stats,
    const AttributeCatalog& cat);

struct SqlResult {
  std::uint64_t rows = 0;
  double seconds = 0.0;
};

/// Driver contract: textual SQL in, (row count, elapsed seconds) out.
class SqlDriver {
 public:
  virtual ~SqlDriver() = default;
  virtual SqlResult execute(const std::string& sql) = 0;
};

struct QueryRun {
  std::string id;
  std::string sql;
};

/// Runs every query three times against a prepared database and returns the
/// sum of the per-query median elapsed times.
double executor_evaluate(const std::vector<QueryRun>& queries, SqlDriver& driver);

/// evaluate() memoizes by canonical state string; concurrent evaluations of
/// different states are safe.
class CostEnvironment {
 public:
  virtual ~CostEnvironment() = default;
  double evaluate(const SchemaState& state);
  virtual std::vector<std::pair<std::string, double>> per_query_costs(
      const SchemaState& state) = 0;

 protected:
  virtual double measure(const SchemaState& state) = 0;

 private:
  std::mutex mu_;
  std::unordered_map<std::string, double> cache_;
};

/// Pure analytic environment: deterministic, machine-independent.
class AnalyticEnvironment final : public CostEnvironment {
 public:
  AnalyticEnvironment(const DsmStore& store, const AttributeCatalog& cat,
                      const ConstraintPool& pool, Workload workload, CostStatistics stats);
  std::vector<std::pair<std::string, double>> per_query_costs(const SchemaState& state) override;

 protected:
  double measure(const SchemaState& state) override;

 private:
  const DsmStore& store_;
  const AttributeCatalog& cat_;
  const ConstraintPool& pool_;
  Workload workload_;
  CostStatistics stats_;
};

using DriverFactory = std::function<std::unique_ptr<SqlDriver>()>;

/// Realizes each state in an external SQL engine: fresh driver, DDL + load,
/// then three timed runs per rewritten query (medians summed).
class ExecutorEnvironment final : public CostEnvironment {
 public:
  ExecutorEnvironment(const DsmStore& store, const AttributeCatalog& cat,
                      const ConstraintPool& pool, Workload workload, DriverFactory factory);
  std::vector<std::pair<std::string, double>> per_query_costs(const SchemaState& state) override;

 protected:
  double measure(const SchemaState& state) override;

 private:
  std::unique_ptr<SqlDriver> prepare(const SchemaState& state,
                                     std::vector<QueryRun>& queries) const;

  const DsmStore& store_;
  const AttributeCatalog& cat_;
  const ConstraintPool& pool_;
  Workload workload_;
  DriverFactory factory_;
};

/// Embedded SQLite driver; target is a filesystem path or ":memory:".
class SqliteDriver final : public SqlDriver {
 public:
  explicit SqliteDriver(const std::string& target = ":memory:");
  ~SqliteDriver() override;
  SqliteDriver(const SqliteDriver&) = delete;
  SqliteDriver& operator=(const SqliteDriver&) = delete;

  SqlResult execute(const std::string& sql) override;

 private:
  sqlite3* db_ = nullptr;
};

/// Accepts `sqlite::memory:`, `sqlite:<path>`, or a bare path.
DriverFactory driver_factory_from_url(const std::string& url);

}  // namespace schemaforge
