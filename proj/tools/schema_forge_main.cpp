// schema-forge: learn a relational schema for multi-model data by
// reinforcement learning over join actions.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "schemaforge/cost_env.hpp"
#include "schemaforge/dsm.hpp"
#include "schemaforge/qlearn.hpp"
#include "schemaforge/report.hpp"
#include "schemaforge/sql_gen.hpp"

namespace sf = schemaforge;
namespace fs = std::filesystem;

namespace {

struct LoadedRun {
  sf::IngestConfig config;
  sf::SourceDataset dataset;
  sf::AttributeCatalog catalog;
  sf::ConstraintPool pool;
};

void require_file(const std::string& path) {
  if (!fs::exists(path)) throw sf::FileNotFound(path);
}

LoadedRun load_run(const std::string& config_path) {
  require_file(config_path);
  LoadedRun run{sf::load_ingest_config(config_path), {}, sf::AttributeCatalog{}, {}};
  if (!run.config.json_path.empty()) require_file(run.config.json_path);
  if (!run.config.rdf_path.empty()) require_file(run.config.rdf_path);
  for (const sf::CsvSource& src : run.config.csv_sources) require_file(src.path);

  run.dataset = sf::ingest_sources(run.config);
  run.catalog = sf::AttributeCatalog::build(run.dataset, run.config.threshold1,
                                            run.config.threshold2);
  run.pool = run.config.constraint_pool_path.empty()
                 ? sf::ConstraintPool::defaults_for(run.catalog)
                 : sf::ConstraintPool::from_file(run.config.constraint_pool_path, run.catalog);
  return run;
}

sf::Workload load_workload(const sf::IngestConfig& config) {
  if (config.workload_path.empty()) return {};
  require_file(config.workload_path);
  return sf::parse_workload(config.workload_path);
}

sf::CostStatistics load_stats(const sf::IngestConfig& config) {
  sf::CostStatistics stats;
  stats.c_scan = config.c_scan;
  stats.c_join = config.c_join;
  if (!config.stats_path.empty()) {
    require_file(config.stats_path);
    stats = sf::load_statistics(config.stats_path, std::move(stats));
  }
  return stats;
}

int cmd_ingest(const std::string& config_path, const std::string& out_dir,
               const std::string& dump_dir) {
  LoadedRun run = load_run(config_path);

  std::cout << "json objects:    " << run.dataset.json_docs.size() << "\n";
  std::cout << "rdf triples:     " << run.dataset.rdf_triples.size() << "\n";
  std::cout << "relational rows: " << run.dataset.rel_row_count() << "\n";
  std::cout << "json keys (n):   " << run.catalog.json_key_count() << "\n";
  std::cout << "predicates (m):  " << run.catalog.predicate_count() << "\n";
  std::cout << "attributes (p):  " << run.catalog.rel_attribute_count() << "\n";
  std::cout << "action space q:  " << run.catalog.q() << "\n";

  fs::create_directories(out_dir);
  std::string cache_path = (fs::path(out_dir) / "catalog.cache").string();
  sf::write_text_file(cache_path, sf::catalog_cache_text(run.catalog));
  std::cout << "catalog cache:   " << cache_path << "\n";

  if (!dump_dir.empty()) {
    sf::DsmStore store = sf::DsmStore::build(run.dataset, run.catalog);
    sf::dump_store_csv(store, run.catalog, dump_dir);
    std::cout << "dsm tables:      " << dump_dir << "\n";
  }
  return 0;
}

// Config-file training keys, overridden by explicit flags.
sf::TrainConfig train_config_from(const sf::IngestConfig& config) {
  sf::TrainConfig cfg;
  auto lookup = [&](const char* key) -> std::optional<std::string> {
    auto it = config.raw.find(key);
    if (it == config.raw.end() || it->second.empty()) return std::nullopt;
    return it->second;
  };
  try {
    if (auto v = lookup("episodes")) cfg.episodes = std::stoi(*v);
    if (auto v = lookup("epsilon")) cfg.epsilon = std::stod(*v);
    if (auto v = lookup("alpha")) cfg.alpha = std::stod(*v);
    if (auto v = lookup("gamma")) cfg.gamma = std::stod(*v);
    if (auto v = lookup("max_iters")) cfg.max_iterations = std::stoi(*v);
    if (auto v = lookup("seed")) cfg.seed = std::stoull(*v);
    if (auto v = lookup("workers")) cfg.workers = std::stoi(*v);
  } catch (const std::exception&) {
    throw sf::ConfigError("bad numeric training key in config file");
  }
  return cfg;
}

void validate_train_config(const sf::TrainConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) throw sf::ConfigError("alpha must be in (0, 1]");
  if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0)) throw sf::ConfigError("gamma must be in [0, 1]");
  if (!(cfg.epsilon >= 0.0 && cfg.epsilon <= 1.0))
    throw sf::ConfigError("epsilon must be in [0, 1]");
  if (cfg.episodes < 0) throw sf::ConfigError("episodes must be >= 0");
  if (cfg.max_iterations <= 0) throw sf::ConfigError("max-iters must be > 0");
  if (cfg.workers < 1) throw sf::ConfigError("workers must be >= 1");
}

struct TrainFlags {
  std::optional<int> episodes;
  std::optional<double> epsilon, alpha, gamma;
  std::optional<int> max_iters;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::string env = "analytic";
  std::string out_dir = ".";
};

int cmd_train(const std::string& config_path, const TrainFlags& flags) {
  LoadedRun run = load_run(config_path);
  sf::Workload workload = load_workload(run.config);
  sf::CostStatistics stats = load_stats(run.config);
  sf::DsmStore store = sf::DsmStore::build(run.dataset, run.catalog);

  sf::TrainConfig cfg = train_config_from(run.config);
  if (flags.episodes) cfg.episodes = *flags.episodes;
  if (flags.epsilon) cfg.epsilon = *flags.epsilon;
  if (flags.alpha) cfg.alpha = *flags.alpha;
  if (flags.gamma) cfg.gamma = *flags.gamma;
  if (flags.max_iters) cfg.max_iterations = *flags.max_iters;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.workers) cfg.workers = *flags.workers;
  validate_train_config(cfg);

  std::unique_ptr<sf::CostEnvironment> env;
  if (flags.env == "analytic") {
    env = std::make_unique<sf::AnalyticEnvironment>(store, run.catalog, run.pool, workload,
                                                    stats);
  } else if (flags.env == "sql") {
    const char* url = std::getenv("SCHEMAFORGE_DB_URL");
    env = std::make_unique<sf::ExecutorEnvironment>(
        store, run.catalog, run.pool, workload,
        sf::driver_factory_from_url(url ? url : "sqlite::memory:"));
  } else {
    throw sf::ConfigError("unknown environment '" + flags.env + "'");
  }

  sf::DoubleQTables qt(run.catalog);
  sf::TrainingReport report = sf::train(cfg, run.catalog, store, *env, run.pool, qt);

  fs::path out(flags.out_dir);
  fs::create_directories(out);
  sf::write_text_file((out / "convergence.csv").string(), sf::convergence_csv_text(report));
  sf::write_text_file((out / "report.txt").string(), sf::report_text(report));
  sf::write_text_file((out / "best_schema.sql").string(),
                      sf::generate_ddl(sf::decode_state(report.best_canon), run.catalog));
  std::ostringstream qt_dump;
  qt.dump(qt_dump);
  sf::write_text_file((out / "qtables.txt").string(), qt_dump.str());

  std::cout << "best schema: " << report.best_canon << "\n";
  std::cout << "best cost:   " << sf::format_seconds(report.best_cost) << " s\n";
  std::cout << "storage:     " << report.storage_bytes << " bytes\n";
  std::cout << "wall time:   " << sf::format_seconds(report.wall_time_seconds) << " s\n";
  std::cout << "outputs:     " << out.string() << "\n";
  return 0;
}

int cmd_export_ddl(const std::string& schema, const std::string& config_path,
                   const std::string& out_dir) {
  LoadedRun run = load_run(config_path);
  sf::SchemaDict tables = sf::decode_state(schema);
  sf::validate_partition(tables, run.catalog);

  sf::DsmStore store = sf::DsmStore::build(run.dataset, run.catalog);
  sf::MaterializedSchema ms = sf::materialize(tables, store, run.pool);

  fs::path out(out_dir);
  fs::create_directories(out);
  sf::write_text_file((out / "schema.sql").string(), sf::generate_ddl(tables, run.catalog));
  sf::write_text_file((out / "load.sql").string(), sf::generate_load(ms));
  if (!run.config.workload_path.empty()) {
    sf::Workload workload = load_workload(run.config);
    sf::write_text_file((out / "queries.sql").string(),
                        sf::generate_queries_sql(workload, tables, run.catalog));
  }
  std::cout << "wrote schema.sql and load.sql to " << out.string() << "\n";
  return 0;
}

bool is_usage_error(const sf::Error& e) {
  return dynamic_cast<const sf::FileNotFound*>(&e) || dynamic_cast<const sf::ConfigError*>(&e) ||
         dynamic_cast<const sf::MalformedLine*>(&e) ||
         dynamic_cast<const sf::MalformedEncoding*>(&e) ||
         dynamic_cast<const sf::ThresholdTooSmall*>(&e) ||
         dynamic_cast<const sf::MissingKeyColumn*>(&e) ||
         dynamic_cast<const sf::DuplicateObjectId*>(&e) ||
         dynamic_cast<const sf::UnknownAttribute*>(&e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"schema-forge: relational schema search for multi-model data"};
  app.require_subcommand(1);

  std::string config_path;
  std::string ingest_out = ".";
  std::string dump_dir;
  auto* ingest = app.add_subcommand("ingest", "parse sources, build the attribute catalog");
  ingest->add_option("--config", config_path, "run configuration file")->required();
  ingest->add_option("--out", ingest_out, "directory for catalog.cache (default .)");
  ingest->add_option("--dump-dsm", dump_dir, "also dump every DSM table as CSV here");

  TrainFlags flags;
  auto* train = app.add_subcommand(
      "train", "run the schema search (flags override config-file values)");
  train->add_option("--config", config_path, "run configuration file")->required();
  train->add_option("--episodes", flags.episodes, "number of episodes (default 100)");
  train->add_option("--epsilon", flags.epsilon, "exploration probability (default 0.1)");
  train->add_option("--alpha", flags.alpha, "learning rate (default 0.1)");
  train->add_option("--gamma", flags.gamma, "discount factor (default 0.9)");
  train->add_option("--max-iters", flags.max_iters, "per-episode step cap (default 100)");
  train->add_option("--seed", flags.seed, "RNG seed (default 0)");
  train->add_option("--env", flags.env, "cost environment: analytic|sql (default analytic)")
      ->check(CLI::IsMember({"analytic", "sql"}));
  train->add_option("--out", flags.out_dir, "output directory (default .)");
  train->add_option("--workers", flags.workers, "parallel environment evaluations");

  std::string schema;
  std::string export_out = ".";
  auto* export_ddl =
      app.add_subcommand("export-ddl", "emit DDL and load script for a schema state");
  export_ddl->add_option("--schema", schema, "canonical state string")->required();
  export_ddl->add_option("--config", config_path, "run configuration file")->required();
  export_ddl->add_option("--out", export_out, "output directory (default .)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(config_path, ingest_out, dump_dir);
    if (train->parsed()) return cmd_train(config_path, flags);
    if (export_ddl->parsed()) return cmd_export_ddl(schema, config_path, export_out);
  } catch (const sf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_usage_error(e) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
