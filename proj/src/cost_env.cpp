#include "schemaforge/cost_env.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <sqlite3.h>

namespace schemaforge {

CostStatistics load_statistics(const std::string& path, CostStatistics base) {
  if (!std::filesystem::exists(path)) throw FileNotFound(path);
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = line;
    t.erase(0, t.find_first_not_of(" \t\r\n"));
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) throw MalformedLine(path, line_no, "expected 'table_id=rows'");
    try {
      int id = std::stoi(t.substr(0, eq));
      long long rows = std::stoll(t.substr(eq + 1));
      if (rows < 0) throw std::invalid_argument("negative");
      base.row_counts[id] = static_cast<std::uint64_t>(rows);
    } catch (const std::exception&) {
      throw MalformedLine(path, line_no, "expected 'table_id=rows'");
    }
  }
  return base;
}

double compute_reward(double t_p, double t_n) { return t_p - t_n; }

namespace {

std::uint64_t table_rows(const MaterializedSchema& ms, const CostStatistics& stats,
                         int table_id) {
  auto it = stats.row_counts.find(table_id);
  return it != stats.row_counts.end() ? it->second
                                      : static_cast<std::uint64_t>(ms.row_count(table_id));
}

double one_query_cost(const MaterializedSchema& ms, const LogicalQuery& query,
                      const CostStatistics& stats, const AttributeCatalog& cat) {
  std::set<int> referenced;
  for (const std::string& name : query.select) referenced.insert(cat.id_of(name));
  for (const Filter& filter : query.filters) {
    if (filter.name != "_entity") referenced.insert(cat.id_of(filter.name));
  }

  std::set<int> accessed;
  std::set<ValueKind> array_kinds;
  for (int id : referenced) {
    auto it = ms.attr_home.find(id);
    if (it == ms.attr_home.end()) throw UnknownAttribute(id);
    accessed.insert(it->second);
    if (ms.store) {
      for (ValueKind kind : ms.store->array_kinds_of(cat.name_of(id))) array_kinds.insert(kind);
    }
  }

  std::uint64_t scanned = 0;
  for (int tid : accessed) scanned += table_rows(ms, stats, tid);
  for (ValueKind kind : array_kinds) scanned += ms.store->array_table(kind).rows.size();

  // Joins chain the accessed tables in ascending id order; each join pays
  // the cardinalities of both operands. Array tables never join.
  std::uint64_t joined = 0;
  if (accessed.size() > 1) {
    std::vector<int> order(accessed.begin(), accessed.end());
    for (std::size_t i = 1; i < order.size(); ++i)
      joined += table_rows(ms, stats, order[i - 1]) + table_rows(ms, stats, order[i]);
  }
  return stats.c_scan * static_cast<double>(scanned) +
         stats.c_join * static_cast<double>(joined);
}

}  // namespace

double analytic_cost(const MaterializedSchema& ms, const Workload& workload,
                     const CostStatistics& stats, const AttributeCatalog& cat) {
  double total = 0.0;
  for (const LogicalQuery& query : workload.queries)
    total += one_query_cost(ms, query, stats, cat);
  return total;
}

std::vector<std::pair<std::string, double>> analytic_per_query_costs(
    const MaterializedSchema& ms, const Workload& workload, const CostStatistics& stats,
    const AttributeCatalog& cat) {
  std::vector<std::pair<std::string, double>> out;
  out.reserve(workload.queries.size());
  for (const LogicalQuery& query : workload.queries)
    out.emplace_back(query.id, one_query_cost(ms, query, stats, cat));
  return out;
}

double executor_evaluate(const std::vector<QueryRun>& queries, SqlDriver& driver) {
  double total = 0.0;
  for (const QueryRun& query : queries) {
    double elapsed[3];
    for (double& run : elapsed) {
      try {
        run = driver.execute(query.sql).seconds;
      } catch (const SqlError&) {
        throw;
      } catch (const Timeout&) {
        throw;
      } catch (const Error& e) {
        throw SqlError(query.id, e.what());
      }
    }
    std::sort(std::begin(elapsed), std::end(elapsed));
    total += elapsed[1];  // median of three
  }
  return total;
}

double CostEnvironment::evaluate(const SchemaState& state) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(state.canon);
    if (it != cache_.end()) return it->second;
  }
  double cost = measure(state);
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(state.canon, cost).first->second;
}

AnalyticEnvironment::AnalyticEnvironment(const DsmStore& store, const AttributeCatalog& cat,
                                         const ConstraintPool& pool, Workload workload,
                                         CostStatistics stats)
    : store_(store), cat_(cat), pool_(pool), workload_(std::move(workload)),
      stats_(std::move(stats)) {}

double AnalyticEnvironment::measure(const SchemaState& state) {
  return analytic_cost(materialize(state.tables, store_, pool_), workload_, stats_, cat_);
}

std::vector<std::pair<std::string, double>> AnalyticEnvironment::per_query_costs(
    const SchemaState& state) {
  return analytic_per_query_costs(materialize(state.tables, store_, pool_), workload_, stats_,
                                  cat_);
}

ExecutorEnvironment::ExecutorEnvironment(const DsmStore& store, const AttributeCatalog& cat,
                                         const ConstraintPool& pool, Workload workload,
                                         DriverFactory factory)
    : store_(store), cat_(cat), pool_(pool), workload_(std::move(workload)),
      factory_(std::move(factory)) {}

std::unique_ptr<SqlDriver> ExecutorEnvironment::prepare(const SchemaState& state,
                                                        std::vector<QueryRun>& queries) const {
  MaterializedSchema ms = materialize(state.tables, store_, pool_);
  std::unique_ptr<SqlDriver> driver = factory_();

  std::string setup;
  for (const auto& [table_id, table] : ms.tables)
    setup += "DROP TABLE IF EXISTS t" + std::to_string(table_id) + ";\n";
  for (const char* arr : {"ArrayStringTable", "ArrayNumberTable", "ArrayBoolTable"})
    setup += std::string("DROP TABLE IF EXISTS ") + arr + ";\n";
  setup += generate_ddl(state.tables, cat_);
  setup += generate_load(ms);

  std::istringstream statements(setup);
  std::string statement;
  while (std::getline(statements, statement)) {
    if (statement.empty()) continue;
    try {
      driver->execute(statement);
    } catch (const Error& e) {
      throw SqlError("", e.what());
    }
  }

  queries.clear();
  for (const LogicalQuery& query : workload_.queries)
    queries.push_back({query.id, rewrite_query(query, state.tables, cat_)});
  return driver;
}

double ExecutorEnvironment::measure(const SchemaState& state) {
  std::vector<QueryRun> queries;
  std::unique_ptr<SqlDriver> driver = prepare(state, queries);
  return executor_evaluate(queries, *driver);
}

std::vector<std::pair<std::string, double>> ExecutorEnvironment::per_query_costs(
    const SchemaState& state) {
  std::vector<QueryRun> queries;
  std::unique_ptr<SqlDriver> driver = prepare(state, queries);
  std::vector<std::pair<std::string, double>> out;
  for (const QueryRun& query : queries)
    out.emplace_back(query.id, executor_evaluate({query}, *driver));
  return out;
}

// ---------------------------------------------------------------------------
// SQLite driver
// ---------------------------------------------------------------------------

SqliteDriver::SqliteDriver(const std::string& target) {
  if (sqlite3_open(target.c_str(), &db_) != SQLITE_OK) {
    std::string message = db_ ? sqlite3_errmsg(db_) : "out of memory";
    if (db_) sqlite3_close(db_);
    db_ = nullptr;
    throw Error("cannot open sqlite database '" + target + "': " + message);
  }
}

SqliteDriver::~SqliteDriver() {
  if (db_) sqlite3_close(db_);
}

SqlResult SqliteDriver::execute(const std::string& sql) {
  auto count_rows = [](void* counter, int, char**, char**) {
    ++*static_cast<std::uint64_t*>(counter);
    return 0;
  };
  SqlResult result;
  char* err = nullptr;
  auto start = std::chrono::steady_clock::now();
  int rc = sqlite3_exec(db_, sql.c_str(), count_rows, &result.rows, &err);
  auto stop = std::chrono::steady_clock::now();
  result.seconds = std::chrono::duration<double>(stop - start).count();
  if (rc != SQLITE_OK) {
    std::string message = err ? err : "sqlite error";
    sqlite3_free(err);
    throw Error(message);
  }
  return result;
}

DriverFactory driver_factory_from_url(const std::string& url) {
  std::string target = url;
  if (target.rfind("sqlite:", 0) == 0) target = target.substr(7);
  if (target.empty()) target = ":memory:";
  return [target] { return std::make_unique<SqliteDriver>(target); };
}

}  // namespace schemaforge
