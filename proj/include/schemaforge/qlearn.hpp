#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "schemaforge/cost_env.hpp"
#include "schemaforge/schema_state.hpp"

namespace schemaforge {

struct TrainConfig {
  double alpha = 0.1;      // learning rate
  double gamma = 0.9;      // discount
  double epsilon = 0.1;    // exploration probability
  int episodes = 100;
  int max_iterations = 100;  // per-episode step cap
  std::uint64_t seed = 0;
  int workers = 1;  // parallel environment evaluations; 1 = inline
};

using Rng = std::mt19937_64;

// Pinned draw primitives so runs reproduce bit-exactly regardless of the
// standard library's distribution implementations.
double uniform_real01(Rng& rng);
std::size_t uniform_index(Rng& rng, std::size_t n);

/// The two learned tables. QT_a maps canonical state strings to per-action
/// values and grows lazily, zero-initialized. QT_join is a dense q x q
/// matrix: rows are action ids, columns are join-target table ids.
class DoubleQTables {
 public:
  explicit DoubleQTables(const AttributeCatalog& cat);

  int q() const { return static_cast<int>(ids_.size()); }

  double qta(const std::string& state, int action) const;
  void set_qta(const std::string& state, int action, double value);
  /// max over the given actions of qta(state, .); 0 for an empty set.
  double max_qta(const std::string& state, const std::vector<int>& actions) const;

  double qtjoin(int action, int target_table) const;
  void set_qtjoin(int action, int target_table, double value);

  /// Text dump: a `qta` section of `<state>|<action>=<value>` lines followed
  /// by a `qtjoin` section of `<action>,<tableid>=<value>` lines. Values
  /// round-trip exactly.
  void dump(std::ostream& out) const;
  void load(std::istream& in, const std::string& file_label);

  bool operator==(const DoubleQTables& other) const;

 private:
  int index_of(int id) const;

  std::vector<int> ids_;        // catalog ids, ascending
  std::map<int, int> index_;    // id -> 0..q-1
  std::unordered_map<std::string, std::map<int, double>> qt_a_;
  std::vector<double> qt_join_;  // row-major, q*q
};

/// epsilon-greedy over the remaining actions; greedy ties break to the
/// lowest id. Throws EmptyActionSpace.
int select_action(const DoubleQTables& qt, const std::string& state,
                  const std::vector<int>& remaining, double epsilon, Rng& rng);

/// Join targets the pool admits for this action: every table of the state
/// except the action's own, ascending.
std::vector<int> join_candidates(int action, const SchemaState& state,
                                 const ConstraintPool& pool);

/// epsilon-greedy over the action's QT_join row restricted to the allowed
/// candidates; ties break to the lowest table id. Throws NoJoinCandidate.
int select_join_target(const DoubleQTables& qt, int action, const SchemaState& state,
                       const ConstraintPool& pool, double epsilon, Rng& rng);

/// One-step updates after an executed step:
///   QT_a[s][a]      += alpha * (r + gamma * max_{a' in remaining} QT_a[s'][a'] - QT_a[s][a])
///   QT_join[a][t]   += alpha * (r - QT_join[a][t])        (when a target exists)
/// The max over an empty remaining set is 0.
void update(DoubleQTables& qt, const std::string& state, int action, std::optional<int> target,
            double reward, const std::string& next_state, const std::vector<int>& remaining,
            const TrainConfig& cfg);

struct EpisodeStep {
  std::string state;
  int action = 0;
  std::optional<int> target;  // empty for no-op steps
  bool accepted = false;
  double reward = 0.0;
  std::string next_state;
  double cost_seconds = 0.0;  // workload cost of the schema after this step
};

struct EpisodeTrace {
  std::vector<EpisodeStep> steps;
  std::string best_canon;  // cheapest state evaluated this episode (s0 included)
  double best_cost = 0.0;
};

/// One episode: consume the action set (or hit the iteration cap), joining
/// greedily/exploratorily and rewarding by query-time reduction. Actions
/// whose table is no longer a singleton, and actions with no pool-allowed
/// target, are consumed as zero-reward no-ops. Environment failures
/// propagate and abort the episode.
EpisodeTrace run_episode(DoubleQTables& qt, const SchemaState& s0, CostEnvironment& env,
                         const ConstraintPool& pool, const AttributeCatalog& cat,
                         const TrainConfig& cfg, Rng& rng);

struct ConvergencePoint {
  int episode = 0;
  double episode_best_cost = 0.0;
  double global_best_cost = 0.0;
};

struct TrainingReport {
  std::string best_canon;
  double best_cost = 0.0;
  std::vector<std::pair<std::string, double>> per_query_costs;  // workload order
  std::vector<ConvergencePoint> convergence;                    // one row per episode
  std::uint64_t storage_bytes = 0;
  double wall_time_seconds = 0.0;
};

/// Runs cfg.episodes episodes and tracks the cheapest state ever visited.
/// With episodes = 0 the report carries the initial schema and its cost.
/// The workload lives inside the environment; per-query costs in the report
/// follow its order.
TrainingReport train(const TrainConfig& cfg, const AttributeCatalog& cat, const DsmStore& store,
                     CostEnvironment& env, const ConstraintPool& pool, DoubleQTables& qt);

}  // namespace schemaforge
