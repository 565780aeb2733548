#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schemaforge/ingest.hpp"

namespace schemaforge {

enum class Band { JsonKey, Predicate, RelAttribute };

const char* to_string(Band band);

/// Integer ids double as join actions and as DSM table ids. JSON keys occupy
/// [1, n], predicates (threshold1, threshold1 + m], relational attributes
/// (threshold2, threshold2 + p]. Within each band ids are dense and assigned
/// in lexicographic name order, so rebuilding from the same dataset is
/// deterministic.
class AttributeCatalog {
 public:
  static AttributeCatalog build(const SourceDataset& ds, int threshold1, int threshold2);

  int q() const { return static_cast<int>(action_ids_.size()); }
  int json_key_count() const { return n_; }
  int predicate_count() const { return m_; }
  int rel_attribute_count() const { return p_; }
  int threshold1() const { return threshold1_; }
  int threshold2() const { return threshold2_; }

  bool has_id(int id) const { return name_of_.count(id) != 0; }
  bool has_name(const std::string& name) const { return id_of_.count(name) != 0; }
  int id_of(const std::string& name) const;
  const std::string& name_of(int id) const;
  Band band_of(int id) const;

  /// All assigned ids, ascending. This is the action set A.
  const std::vector<int>& action_ids() const { return action_ids_; }

  /// Position of an id within action_ids(), 0-based.
  int dense_index(int id) const;

  /// Declared key columns of the source table a relational attribute came
  /// from. Empty for JSON keys and predicates.
  const std::vector<std::string>& rel_key_columns(int id) const;

 private:
  int n_ = 0, m_ = 0, p_ = 0;
  int threshold1_ = 0, threshold2_ = 0;
  std::map<std::string, int> id_of_;
  std::map<int, std::string> name_of_;
  std::vector<int> action_ids_;
  std::map<int, int> dense_index_;
  std::map<int, std::vector<std::string>> rel_key_columns_;
};

/// Whitelist of attribute pairs whose tables may join, annotated with the
/// join-key column of both sides. With no explicit file the pool defaults to
/// same-model pairs: JSON keys join on the object id, predicates on the
/// subject, relational attributes on identical declared key-column lists.
class ConstraintPool {
 public:
  struct JoinColumns {
    std::string left;
    std::string right;
  };

  static ConstraintPool defaults_for(const AttributeCatalog& catalog);
  /// One pair per line: `idA,idB,colA=colB`. '#' starts a comment.
  static ConstraintPool from_file(const std::string& path, const AttributeCatalog& catalog);

  bool allows(int a, int b) const;
  std::optional<JoinColumns> join_columns(int a, int b) const;

  /// A join action may target a table when the pool admits the action paired
  /// with at least one attribute already housed there.
  bool allows_into(int action, const std::vector<int>& table_attrs) const;

  /// True when the attribute set forms a single pool-connected block, which
  /// every multi-attribute table must before it can be materialized.
  bool connected(const std::vector<int>& attrs) const;

 private:
  bool explicit_ = false;
  std::map<std::pair<int, int>, JoinColumns> pairs_;
  // Copied catalog facts backing the default rule.
  std::map<int, Band> band_;
  std::map<int, std::vector<std::string>> rel_keys_;
};

}  // namespace schemaforge
