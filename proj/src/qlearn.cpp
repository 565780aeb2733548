#include "schemaforge/qlearn.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <future>
#include <istream>
#include <ostream>

namespace schemaforge {

double uniform_real01(Rng& rng) {
  // 53 random mantissa bits -> [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
  // modulo bias is ~n/2^64, irrelevant at these sizes
  return static_cast<std::size_t>(rng() % n);
}

DoubleQTables::DoubleQTables(const AttributeCatalog& cat) : ids_(cat.action_ids()) {
  for (std::size_t i = 0; i < ids_.size(); ++i) index_[ids_[i]] = static_cast<int>(i);
  qt_join_.assign(ids_.size() * ids_.size(), 0.0);
}

int DoubleQTables::index_of(int id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw UnknownAttribute(id);
  return it->second;
}

double DoubleQTables::qta(const std::string& state, int action) const {
  auto row = qt_a_.find(state);
  if (row == qt_a_.end()) return 0.0;
  auto cell = row->second.find(action);
  return cell == row->second.end() ? 0.0 : cell->second;
}

void DoubleQTables::set_qta(const std::string& state, int action, double value) {
  qt_a_[state][action] = value;
}

double DoubleQTables::max_qta(const std::string& state, const std::vector<int>& actions) const {
  double best = 0.0;
  bool any = false;
  for (int action : actions) {
    double v = qta(state, action);
    if (!any || v > best) {
      best = v;
      any = true;
    }
  }
  return any ? best : 0.0;
}

double DoubleQTables::qtjoin(int action, int target_table) const {
  return qt_join_[static_cast<std::size_t>(index_of(action)) * ids_.size() +
                  static_cast<std::size_t>(index_of(target_table))];
}

void DoubleQTables::set_qtjoin(int action, int target_table, double value) {
  qt_join_[static_cast<std::size_t>(index_of(action)) * ids_.size() +
           static_cast<std::size_t>(index_of(target_table))] = value;
}

bool DoubleQTables::operator==(const DoubleQTables& other) const {
  if (ids_ != other.ids_ || qt_join_ != other.qt_join_) return false;
  if (qt_a_.size() != other.qt_a_.size()) return false;
  for (const auto& [state, row] : qt_a_) {
    auto it = other.qt_a_.find(state);
    if (it == other.qt_a_.end() || it->second != row) return false;
  }
  return true;
}

namespace {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void DoubleQTables::dump(std::ostream& out) const {
  out << "qta\n";
  std::vector<const std::string*> states;
  states.reserve(qt_a_.size());
  for (const auto& [state, row] : qt_a_) states.push_back(&state);
  std::sort(states.begin(), states.end(),
            [](const std::string* a, const std::string* b) { return *a < *b; });
  for (const std::string* state : states)
    for (const auto& [action, value] : qt_a_.at(*state))
      out << *state << '|' << action << '=' << format_value(value) << '\n';

  out << "qtjoin\n";
  for (int a : ids_)
    for (int t : ids_) out << a << ',' << t << '=' << format_value(qtjoin(a, t)) << '\n';
}

void DoubleQTables::load(std::istream& in, const std::string& file_label) {
  std::string line;
  std::size_t line_no = 0;
  enum { Expecting_qta, In_qta, In_qtjoin } section = Expecting_qta;

  auto parse_value = [&](const std::string& text) {
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
      throw MalformedLine(file_label, line_no, "bad value '" + text + "'");
    return v;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (section == Expecting_qta) {
      if (line != "qta") throw MalformedLine(file_label, line_no, "expected 'qta' header");
      section = In_qta;
      continue;
    }
    if (line == "qtjoin") {
      section = In_qtjoin;
      continue;
    }
    std::size_t eq = line.rfind('=');
    if (eq == std::string::npos) throw MalformedLine(file_label, line_no, "missing '='");
    double value = parse_value(line.substr(eq + 1));

    if (section == In_qta) {
      std::size_t bar = line.rfind('|', eq);
      if (bar == std::string::npos) throw MalformedLine(file_label, line_no, "missing '|'");
      std::string state = line.substr(0, bar);
      int action = 0;
      try {
        action = std::stoi(line.substr(bar + 1, eq - bar - 1));
      } catch (const std::exception&) {
        throw MalformedLine(file_label, line_no, "bad action id");
      }
      if (!index_.count(action)) throw MalformedLine(file_label, line_no, "unknown action id");
      set_qta(state, action, value);
    } else {
      std::size_t comma = line.find(',');
      if (comma == std::string::npos || comma > eq)
        throw MalformedLine(file_label, line_no, "missing ','");
      int action = 0, target = 0;
      try {
        action = std::stoi(line.substr(0, comma));
        target = std::stoi(line.substr(comma + 1, eq - comma - 1));
      } catch (const std::exception&) {
        throw MalformedLine(file_label, line_no, "bad id pair");
      }
      if (!index_.count(action) || !index_.count(target))
        throw MalformedLine(file_label, line_no, "unknown id in pair");
      set_qtjoin(action, target, value);
    }
  }
  if (section == Expecting_qta)
    throw MalformedLine(file_label, line_no, "empty dump, expected 'qta' header");
}

// ---------------------------------------------------------------------------
// Selection
// ---------------------------------------------------------------------------

namespace {

// Greedy pick with ties broken to the lowest id; `value` maps id -> Q.
template <typename ValueFn>
int epsilon_greedy(const std::vector<int>& candidates, double epsilon, Rng& rng,
                   ValueFn&& value) {
  if (uniform_real01(rng) < epsilon)
    return candidates[uniform_index(rng, candidates.size())];
  int best = candidates.front();
  double best_value = value(best);
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    double v = value(candidates[i]);
    if (v > best_value) {  // strict: equal values keep the lower id
      best = candidates[i];
      best_value = v;
    }
  }
  return best;
}

}  // namespace

int select_action(const DoubleQTables& qt, const std::string& state,
                  const std::vector<int>& remaining, double epsilon, Rng& rng) {
  if (remaining.empty()) throw EmptyActionSpace();
  return epsilon_greedy(remaining, epsilon, rng,
                        [&](int action) { return qt.qta(state, action); });
}

std::vector<int> join_candidates(int action, const SchemaState& state,
                                 const ConstraintPool& pool) {
  int home = table_of(state.tables, action);
  std::vector<int> candidates;
  for (const auto& [table_id, attrs] : state.tables) {
    if (table_id == home) continue;
    if (pool.allows_into(action, attrs)) candidates.push_back(table_id);
  }
  return candidates;  // std::map iteration keeps them ascending
}

int select_join_target(const DoubleQTables& qt, int action, const SchemaState& state,
                       const ConstraintPool& pool, double epsilon, Rng& rng) {
  std::vector<int> candidates = join_candidates(action, state, pool);
  if (candidates.empty()) throw NoJoinCandidate(action);
  return epsilon_greedy(candidates, epsilon, rng,
                        [&](int target) { return qt.qtjoin(action, target); });
}

void update(DoubleQTables& qt, const std::string& state, int action, std::optional<int> target,
            double reward, const std::string& next_state, const std::vector<int>& remaining,
            const TrainConfig& cfg) {
  double old_qa = qt.qta(state, action);
  double bootstrap = cfg.gamma * qt.max_qta(next_state, remaining);
  qt.set_qta(state, action, old_qa + cfg.alpha * (reward + bootstrap - old_qa));

  if (target) {
    // One-step value update: QT_join has no successor state of its own.
    double old_qj = qt.qtjoin(action, *target);
    qt.set_qtjoin(action, *target, old_qj + cfg.alpha * (reward - old_qj));
  }
}

// ---------------------------------------------------------------------------
// Episode and training loops
// ---------------------------------------------------------------------------

namespace {

// Warm the environment's memo cache for every candidate join of this step.
// Values are never consulted before selection, so this only moves work onto
// worker threads; results are identical with any worker count.
void prewarm_candidates(CostEnvironment& env, const SchemaState& state, int action,
                        const std::vector<int>& candidates, const ConstraintPool& pool,
                        int workers) {
  std::vector<std::future<void>> in_flight;
  for (int target : candidates) {
    JoinOutcome outcome = apply_join(state, action, target, pool);
    if (!outcome.accepted) continue;
    in_flight.push_back(std::async(std::launch::async,
                                   [&env, next = std::move(outcome.state)] { env.evaluate(next); }));
    if (in_flight.size() >= static_cast<std::size_t>(workers)) {
      for (auto& f : in_flight) f.get();
      in_flight.clear();
    }
  }
  for (auto& f : in_flight) f.get();
}

}  // namespace

EpisodeTrace run_episode(DoubleQTables& qt, const SchemaState& s0, CostEnvironment& env,
                         const ConstraintPool& pool, const AttributeCatalog& cat,
                         const TrainConfig& cfg, Rng& rng) {
  EpisodeTrace trace;
  SchemaState current = s0;
  double previous_cost = env.evaluate(current);  // t_p, memoized across episodes
  trace.best_canon = current.canon;
  trace.best_cost = previous_cost;

  std::vector<int> remaining = cat.action_ids();
  int iterations = 0;
  while (!remaining.empty() && iterations < cfg.max_iterations) {
    ++iterations;
    int action = select_action(qt, current.canon, remaining, cfg.epsilon, rng);
    remaining.erase(std::lower_bound(remaining.begin(), remaining.end(), action));

    EpisodeStep step;
    step.state = current.canon;
    step.action = action;

    bool singleton = current.tables.at(table_of(current.tables, action)).size() == 1;
    std::vector<int> candidates =
        singleton ? join_candidates(action, current, pool) : std::vector<int>{};

    if (!candidates.empty()) {
      if (cfg.workers > 1 && candidates.size() > 1)
        prewarm_candidates(env, current, action, candidates, pool, cfg.workers);
      int target = select_join_target(qt, action, current, pool, cfg.epsilon, rng);
      JoinOutcome outcome = apply_join(current, action, target, pool);
      double next_cost = env.evaluate(outcome.state);
      double reward = compute_reward(previous_cost, next_cost);
      update(qt, current.canon, action, target, reward, outcome.state.canon, remaining, cfg);

      step.target = target;
      step.accepted = true;
      step.reward = reward;
      step.next_state = outcome.state.canon;
      step.cost_seconds = next_cost;

      current = std::move(outcome.state);
      previous_cost = next_cost;
      if (next_cost < trace.best_cost) {
        trace.best_cost = next_cost;
        trace.best_canon = current.canon;
      }
    } else {
      // Consumed action cannot join anything: zero-reward no-op.
      update(qt, current.canon, action, std::nullopt, 0.0, current.canon, remaining, cfg);
      step.accepted = false;
      step.next_state = current.canon;
      step.cost_seconds = previous_cost;
    }
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

TrainingReport train(const TrainConfig& cfg, const AttributeCatalog& cat, const DsmStore& store,
                     CostEnvironment& env, const ConstraintPool& pool, DoubleQTables& qt) {
  auto started = std::chrono::steady_clock::now();

  TrainingReport report;
  SchemaState s0 = initial_state(cat);
  std::string best_canon = s0.canon;
  double best_cost = env.evaluate(s0);

  Rng rng(cfg.seed);
  for (int episode = 0; episode < cfg.episodes; ++episode) {
    EpisodeTrace trace = run_episode(qt, s0, env, pool, cat, cfg, rng);
    if (trace.best_cost < best_cost) {
      best_cost = trace.best_cost;
      best_canon = trace.best_canon;
    }
    report.convergence.push_back({episode, trace.best_cost, best_cost});
  }

  report.best_canon = best_canon;
  report.best_cost = best_cost;
  SchemaState best = make_state(decode_state(best_canon));
  report.per_query_costs = env.per_query_costs(best);
  report.storage_bytes = storage_size(materialize(best.tables, store, pool));
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace schemaforge
