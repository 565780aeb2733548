#include "schemaforge/catalog.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

namespace schemaforge {

const char* to_string(Band band) {
  switch (band) {
    case Band::JsonKey: return "json";
    case Band::Predicate: return "rdf";
    case Band::RelAttribute: return "relational";
  }
  return "?";
}

namespace {

std::vector<std::string> non_key_columns(const RelTable& table) {
  for (const std::string& key : table.key_columns) {
    if (std::find(table.columns.begin(), table.columns.end(), key) == table.columns.end()) {
      if (table.columns.empty() && table.rows.empty()) return {};  // empty source file
      throw MissingKeyColumn(table.name, key);
    }
  }
  std::vector<std::string> out;
  for (const std::string& col : table.columns) {
    if (std::find(table.key_columns.begin(), table.key_columns.end(), col) ==
        table.key_columns.end())
      out.push_back(col);
  }
  return out;
}

}  // namespace

AttributeCatalog AttributeCatalog::build(const SourceDataset& ds, int threshold1,
                                         int threshold2) {
  std::set<std::string> json_keys;
  for (const JsonDoc& doc : ds.json_docs)
    for (const JsonField& field : doc.fields) json_keys.insert(field.key);

  std::set<std::string> predicates;
  for (const Triple& triple : ds.rdf_triples) predicates.insert(triple.predicate);

  // Relational attribute identity is the bare column name; a name shared by
  // several source tables maps to one id (and one little table).
  std::set<std::string> attributes;
  std::map<std::string, std::vector<std::string>> attr_keys;
  for (const RelTable& table : ds.rel_tables) {
    for (const std::string& col : non_key_columns(table)) {
      if (attributes.insert(col).second) attr_keys[col] = table.key_columns;
    }
  }

  AttributeCatalog cat;
  cat.n_ = static_cast<int>(json_keys.size());
  cat.m_ = static_cast<int>(predicates.size());
  cat.p_ = static_cast<int>(attributes.size());
  cat.threshold1_ = threshold1;
  cat.threshold2_ = threshold2;

  if (cat.n_ > threshold1)
    throw ThresholdTooSmall("json", std::to_string(cat.n_) + " keys exceed threshold1 = " +
                                        std::to_string(threshold1));
  if (threshold1 + cat.m_ > threshold2)
    throw ThresholdTooSmall("rdf", std::to_string(cat.m_) + " predicates exceed threshold2 - threshold1 = " +
                                       std::to_string(threshold2 - threshold1));

  int next = 1;
  for (const std::string& name : json_keys) {  // std::set iterates lexicographically
    cat.id_of_[name] = next;
    cat.name_of_[next] = name;
    ++next;
  }
  next = threshold1 + 1;
  for (const std::string& name : predicates) {
    cat.id_of_[name] = next;
    cat.name_of_[next] = name;
    ++next;
  }
  next = threshold2 + 1;
  for (const std::string& name : attributes) {
    cat.id_of_[name] = next;
    cat.name_of_[next] = name;
    cat.rel_key_columns_[next] = attr_keys[name];
    ++next;
  }

  for (const auto& [id, name] : cat.name_of_) {
    cat.dense_index_[id] = static_cast<int>(cat.action_ids_.size());
    cat.action_ids_.push_back(id);
  }
  return cat;
}

int AttributeCatalog::id_of(const std::string& name) const {
  auto it = id_of_.find(name);
  if (it == id_of_.end()) throw UnknownAttribute(name);
  return it->second;
}

const std::string& AttributeCatalog::name_of(int id) const {
  auto it = name_of_.find(id);
  if (it == name_of_.end()) throw UnknownAttribute(id);
  return it->second;
}

Band AttributeCatalog::band_of(int id) const {
  if (!has_id(id)) throw UnknownAttribute(id);
  if (id <= threshold1_) return Band::JsonKey;
  if (id <= threshold2_) return Band::Predicate;
  return Band::RelAttribute;
}

int AttributeCatalog::dense_index(int id) const {
  auto it = dense_index_.find(id);
  if (it == dense_index_.end()) throw UnknownAttribute(id);
  return it->second;
}

const std::vector<std::string>& AttributeCatalog::rel_key_columns(int id) const {
  static const std::vector<std::string> empty;
  auto it = rel_key_columns_.find(id);
  return it == rel_key_columns_.end() ? empty : it->second;
}

// ---------------------------------------------------------------------------
// ConstraintPool
// ---------------------------------------------------------------------------

namespace {

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (const std::string& n : names) {
    if (!out.empty()) out += '+';
    out += n;
  }
  return out;
}

}  // namespace

ConstraintPool ConstraintPool::defaults_for(const AttributeCatalog& catalog) {
  ConstraintPool pool;
  pool.explicit_ = false;
  for (int id : catalog.action_ids()) {
    pool.band_[id] = catalog.band_of(id);
    if (pool.band_[id] == Band::RelAttribute) pool.rel_keys_[id] = catalog.rel_key_columns(id);
  }
  return pool;
}

ConstraintPool ConstraintPool::from_file(const std::string& path,
                                         const AttributeCatalog& catalog) {
  if (!std::filesystem::exists(path)) throw FileNotFound(path);
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);

  ConstraintPool pool;
  pool.explicit_ = true;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = line;
    t.erase(0, t.find_first_not_of(" \t\r\n"));
    if (t.empty() || t[0] == '#') continue;

    int id_a = 0, id_b = 0;
    std::size_t c1 = t.find(',');
    std::size_t c2 = c1 == std::string::npos ? std::string::npos : t.find(',', c1 + 1);
    std::size_t eq = c2 == std::string::npos ? std::string::npos : t.find('=', c2 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos || eq == std::string::npos)
      throw MalformedLine(path, line_no, "expected 'idA,idB,colA=colB'");
    try {
      id_a = std::stoi(t.substr(0, c1));
      id_b = std::stoi(t.substr(c1 + 1, c2 - c1 - 1));
    } catch (const std::exception&) {
      throw MalformedLine(path, line_no, "ids must be integers");
    }
    if (!catalog.has_id(id_a) || !catalog.has_id(id_b))
      throw MalformedLine(path, line_no, "pair references an id outside the catalog");
    JoinColumns cols{t.substr(c2 + 1, eq - c2 - 1), t.substr(eq + 1)};
    while (!cols.right.empty() && (cols.right.back() == '\r' || cols.right.back() == ' '))
      cols.right.pop_back();
    if (id_a > id_b) {
      std::swap(id_a, id_b);
      std::swap(cols.left, cols.right);
    }
    pool.pairs_[{id_a, id_b}] = cols;
  }
  return pool;
}

bool ConstraintPool::allows(int a, int b) const {
  if (a == b) return false;
  if (explicit_) return pairs_.count({std::min(a, b), std::max(a, b)}) != 0;
  auto ba = band_.find(a);
  auto bb = band_.find(b);
  if (ba == band_.end() || bb == band_.end() || ba->second != bb->second) return false;
  if (ba->second == Band::RelAttribute) return rel_keys_.at(a) == rel_keys_.at(b);
  return true;
}

std::optional<ConstraintPool::JoinColumns> ConstraintPool::join_columns(int a, int b) const {
  if (!allows(a, b)) return std::nullopt;
  if (explicit_) {
    JoinColumns cols = pairs_.at({std::min(a, b), std::max(a, b)});
    if (a > b) std::swap(cols.left, cols.right);
    return cols;
  }
  switch (band_.at(a)) {
    case Band::JsonKey: return JoinColumns{"objId", "objId"};
    case Band::Predicate: return JoinColumns{"subject", "subject"};
    case Band::RelAttribute: {
      std::string keys = join_names(rel_keys_.at(a));
      return JoinColumns{keys, keys};
    }
  }
  return std::nullopt;
}

bool ConstraintPool::allows_into(int action, const std::vector<int>& table_attrs) const {
  return std::any_of(table_attrs.begin(), table_attrs.end(),
                     [&](int attr) { return allows(action, attr); });
}

bool ConstraintPool::connected(const std::vector<int>& attrs) const {
  if (attrs.size() <= 1) return true;
  std::vector<int> reached{attrs.front()};
  std::vector<int> pending(attrs.begin() + 1, attrs.end());
  bool grew = true;
  while (grew && !pending.empty()) {
    grew = false;
    for (auto it = pending.begin(); it != pending.end();) {
      bool linked = std::any_of(reached.begin(), reached.end(),
                                [&](int r) { return allows(*it, r); });
      if (linked) {
        reached.push_back(*it);
        it = pending.erase(it);
        grew = true;
      } else {
        ++it;
      }
    }
  }
  return pending.empty();
}

}  // namespace schemaforge
