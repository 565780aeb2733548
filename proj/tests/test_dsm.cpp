#include <map>
#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"

#include "schemaforge/dsm.hpp"
#include "schemaforge/schema_state.hpp"

using namespace schemaforge;

namespace {

Scalar str(const char* s) { return {ValueKind::String, s}; }
Scalar num(const char* s) { return {ValueKind::Number, s}; }

}  // namespace

TEST_CASE("json arrays shred into the typed array table, order preserved") {
  SourceDataset ds;
  JsonDoc doc{"1", {}};
  doc.fields.push_back({"items", true, {str("product1"), str("product2")}});
  ds.json_docs = {doc};
  AttributeCatalog cat = AttributeCatalog::build(ds, 10, 20);

  JsonDecomposition dec = decompose_json(ds.json_docs, cat);
  CHECK(dec.binaries.empty());  // array-only key has no binary table
  REQUIRE(dec.strings.rows.size() == 2);
  CHECK(dec.strings.rows[0].obj_id == "1");
  CHECK(dec.strings.rows[0].key == "items");
  CHECK(dec.strings.rows[0].index == 0);
  CHECK(dec.strings.rows[0].value == "product1");
  CHECK(dec.strings.rows[1].index == 1);
  CHECK(dec.strings.rows[1].value == "product2");
}

TEST_CASE("json decomposition: scalars, empty objects, unknown keys") {
  SourceDataset ds;
  JsonDoc a{"1", {}};
  a.fields.push_back({"customer", false, {str("Mary")}});
  JsonDoc b{"2", {}};  // no keys: no rows
  JsonDoc c{"3", {}};
  c.fields.push_back({"customer", false, {str("Ann")}});
  JsonDoc d{"4", {}};
  d.fields.push_back({"customer", false, {str("Bob")}});
  ds.json_docs = {a, b, c, d};
  AttributeCatalog cat = AttributeCatalog::build(ds, 10, 20);

  JsonDecomposition dec = decompose_json(ds.json_docs, cat);
  REQUIRE(dec.binaries.size() == 1);
  const BinaryTable& customer = dec.binaries.at(cat.id_of("customer"));

  // flat-scan oracle: count occurrences of the key across the raw docs
  std::size_t occurrences = 0;
  for (const JsonDoc& doc : ds.json_docs)
    for (const JsonField& field : doc.fields)
      if (field.key == "customer") ++occurrences;
  CHECK(customer.rows.size() == occurrences);
  CHECK(customer.rows.size() == 3);
  CHECK(customer.rows[0] == std::pair<std::string, std::string>{"1", "Mary"});

  JsonDoc rogue{"9", {}};
  rogue.fields.push_back({"unseen", false, {str("x")}});
  CHECK_THROWS_AS(decompose_json({rogue}, cat), UnknownKey);
}

TEST_CASE("mixed-kind arrays degrade whole to the string table") {
  SourceDataset ds;
  JsonDoc doc{"1", {}};
  doc.fields.push_back({"mixed", true, {num("1"), str("a"), num("2")}});
  ds.json_docs = {doc};
  AttributeCatalog cat = AttributeCatalog::build(ds, 10, 20);

  JsonDecomposition dec = decompose_json(ds.json_docs, cat);
  CHECK(dec.numbers.rows.empty());
  REQUIRE(dec.strings.rows.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(dec.strings.rows[i].index == i);  // contiguous
}

TEST_CASE("rdf decomposition groups triples by predicate") {
  SUBCASE("documented example") {
    SourceDataset ds;
    ds.rdf_triples = {{"p1", "bornIn", "Helsinki"}, {"p2", "bornIn", "Oslo"}};
    AttributeCatalog cat = AttributeCatalog::build(ds, 10, 20);
    auto tables = decompose_rdf(ds.rdf_triples, cat);
    REQUIRE(tables.size() == 1);
    const BinaryTable& born = tables.at(cat.id_of("bornIn"));
    REQUIRE(born.rows.size() == 2);
    CHECK(born.rows[0] == std::pair<std::string, std::string>{"p1", "Helsinki"});
    CHECK(born.rows[1] == std::pair<std::string, std::string>{"p2", "Oslo"});
  }

  SUBCASE("zero triples, zero tables") {
    SourceDataset ds;
    AttributeCatalog cat = AttributeCatalog::build(ds, 10, 20);
    CHECK(decompose_rdf(ds.rdf_triples, cat).empty());
  }

  SUBCASE("row counts sum to the triple count, per-predicate grouping oracle") {
    SourceDataset ds;
    const char* predicates[] = {"p1", "p2", "p3", "p1", "p1", "p2", "p3", "p1", "p2", "p1"};
    int n = 0;
    for (const char* p : predicates)
      ds.rdf_triples.push_back({"s" + std::to_string(n++), p, "o"});
    AttributeCatalog cat = AttributeCatalog::build(ds, 10, 20);
    auto tables = decompose_rdf(ds.rdf_triples, cat);
    CHECK(tables.size() == 3);

    std::map<std::string, std::size_t> groups;  // independent group-by
    for (const Triple& t : ds.rdf_triples) ++groups[t.predicate];
    std::size_t total = 0;
    for (const auto& [id, table] : tables) {
      CHECK(table.rows.size() == groups.at(cat.name_of(id)));
      total += table.rows.size();
    }
    CHECK(total == 10);
  }

  SUBCASE("unknown predicate") {
    SourceDataset ds;
    ds.rdf_triples = {{"s", "p", "o"}};
    AttributeCatalog cat = AttributeCatalog::build(ds, 10, 20);
    CHECK_THROWS_AS(decompose_rdf({{"s", "q", "o"}}, cat), UnknownPredicate);
  }
}

TEST_CASE("relational decomposition: one little table per non-key attribute") {
  SUBCASE("single non-key attribute") {
    SourceDataset ds;
    RelTable orders;
    orders.name = "orders";
    orders.columns = {"id", "totalPrice"};
    orders.key_columns = {"id"};
    orders.rows = {{"o1", "100"}, {"o2", "250"}};
    ds.rel_tables = {orders};
    AttributeCatalog cat = AttributeCatalog::build(ds, 0, 0);

    auto tables = decompose_relational(ds.rel_tables, cat);
    REQUIRE(tables.size() == 1);
    const BinaryTable& price = tables.at(cat.id_of("totalPrice"));
    REQUIRE(price.rows.size() == 2);
    CHECK(price.rows[0] == std::pair<std::string, std::string>{"o1", "100"});
  }

  SUBCASE("only key columns: no little tables") {
    SourceDataset ds;
    RelTable keys;
    keys.name = "k";
    keys.columns = {"id"};
    keys.key_columns = {"id"};
    keys.rows = {{"a"}, {"b"}};
    ds.rel_tables = {keys};
    AttributeCatalog cat = AttributeCatalog::build(ds, 0, 0);
    CHECK(decompose_relational(ds.rel_tables, cat).empty());
  }

  SUBCASE("projection oracle: 1 key + 3 attributes, 5 rows") {
    SourceDataset ds;
    RelTable wide;
    wide.name = "w";
    wide.columns = {"id", "c1", "c2", "c3"};
    wide.key_columns = {"id"};
    for (int r = 0; r < 5; ++r)
      wide.rows.push_back({"r" + std::to_string(r), "a" + std::to_string(r),
                           "b" + std::to_string(r), "c" + std::to_string(r)});
    ds.rel_tables = {wide};
    AttributeCatalog cat = AttributeCatalog::build(ds, 0, 0);

    auto tables = decompose_relational(ds.rel_tables, cat);
    CHECK(tables.size() == 3);
    for (std::size_t col = 1; col <= 3; ++col) {
      const BinaryTable& t = tables.at(cat.id_of(wide.columns[col]));
      REQUIRE(t.rows.size() == 5);
      for (int r = 0; r < 5; ++r) {  // column-projection oracle
        CHECK(t.rows[r].first == wide.rows[r][0]);
        CHECK(t.rows[r].second == wide.rows[r][col]);
      }
    }
  }

  SUBCASE("composite keys render with the unit separator") {
    SourceDataset ds;
    RelTable lines;
    lines.name = "lines";
    lines.columns = {"order", "line", "sku"};
    lines.key_columns = {"order", "line"};
    lines.rows = {{"o1", "1", "SKU9"}};
    ds.rel_tables = {lines};
    AttributeCatalog cat = AttributeCatalog::build(ds, 0, 0);
    auto tables = decompose_relational(ds.rel_tables, cat);
    CHECK(tables.at(cat.id_of("sku")).rows[0].first ==
          std::string("o1") + kEntitySeparator + "1");
  }

  SUBCASE("missing declared key column") {
    SourceDataset good;  // catalog built from a well-formed dataset
    RelTable t;
    t.name = "t";
    t.columns = {"id", "v"};
    t.key_columns = {"id"};
    t.rows = {{"1", "x"}};
    good.rel_tables = {t};
    AttributeCatalog cat = AttributeCatalog::build(good, 0, 0);

    RelTable bad = t;
    bad.key_columns = {"nope"};
    CHECK_THROWS_AS(decompose_relational({bad}, cat), MissingKeyColumn);
  }
}

TEST_CASE("initial state maps every id to its singleton table") {
  SUBCASE("paper-scale catalog") {
    AttributeCatalog cat = AttributeCatalog::build(sftest::toy_dataset(), 10, 20);
    SchemaState s0 = initial_state(cat);
    REQUIRE(s0.tables.size() == 8);
    for (int id : {1, 2, 3, 4, 11, 12, 13, 21})
      CHECK(s0.tables.at(id) == std::vector<int>{id});
  }
  SUBCASE("empty catalog") {
    AttributeCatalog cat = AttributeCatalog::build(SourceDataset{}, 0, 0);
    CHECK(initial_state(cat).tables.empty());
    CHECK(initial_state(cat).canon.empty());
  }
  SUBCASE("q = 3") {
    SourceDataset ds;
    JsonDoc d{"1", {}};
    for (const char* k : {"a", "b", "c"}) d.fields.push_back({k, false, {str("v")}});
    ds.json_docs = {d};
    AttributeCatalog cat = AttributeCatalog::build(ds, 3, 3);
    CHECK(initial_state(cat).tables.size() == 3);
  }
}

namespace {

// Random multi-model dataset plus an independent count of its scalar cells.
SourceDataset random_dataset(std::mt19937_64& rng, std::uint64_t& expected_cells) {
  SourceDataset ds;
  expected_cells = 0;
  auto coin = [&](double p) { return (rng() % 1000) < p * 1000; };

  int docs = static_cast<int>(rng() % 6);
  const char* keys[] = {"k1", "k2", "k3", "k4"};
  for (int i = 0; i < docs; ++i) {
    JsonDoc doc{std::to_string(i + 1), {}};
    for (const char* key : keys) {
      if (coin(0.4)) continue;  // sparse
      if (coin(0.3)) {
        std::size_t len = rng() % 4;
        JsonField field{key, true, {}};
        for (std::size_t e = 0; e < len; ++e) {
          field.values.push_back(coin(0.5) ? num(std::to_string(e).c_str()) : str("s"));
          ++expected_cells;
        }
        doc.fields.push_back(std::move(field));
      } else {
        doc.fields.push_back({key, false, {str("v")}});
        ++expected_cells;
      }
    }
    ds.json_docs.push_back(std::move(doc));
  }

  int triples = static_cast<int>(rng() % 8);
  const char* preds[] = {"pa", "pb", "pc"};
  for (int i = 0; i < triples; ++i) {
    ds.rdf_triples.push_back({"s" + std::to_string(rng() % 4), preds[rng() % 3], "o"});
    ++expected_cells;
  }

  if (coin(0.7)) {
    RelTable rel;
    rel.name = "r";
    rel.columns = {"id", "x", "y"};
    rel.key_columns = {"id"};
    int rows = static_cast<int>(rng() % 5);
    for (int r = 0; r < rows; ++r) {
      rel.rows.push_back({std::to_string(r), "xv", "yv"});
      expected_cells += 2;  // two non-key columns
    }
    ds.rel_tables = {rel};
  }
  return ds;
}

}  // namespace

TEST_CASE("value-cell conservation over randomized fixtures") {
  std::mt19937_64 rng(20240811);
  for (int round = 0; round < 30; ++round) {
    std::uint64_t expected = 0;
    SourceDataset ds = random_dataset(rng, expected);
    AttributeCatalog cat = AttributeCatalog::build(ds, 10, 20);
    DsmStore store = DsmStore::build(ds, cat);
    CHECK(store.total_value_cells() == expected);
  }
}

TEST_CASE("array element order survives a shuffled rebuild") {
  // sorting one (objId, key) group by index must reproduce the source array
  SourceDataset ds;
  JsonDoc doc{"7", {}};
  std::vector<Scalar> items;
  for (int i = 0; i < 10; ++i) items.push_back(str(("v" + std::to_string(i)).c_str()));
  doc.fields.push_back({"list", true, items});
  ds.json_docs = {doc};
  AttributeCatalog cat = AttributeCatalog::build(ds, 5, 5);
  DsmStore store = DsmStore::build(ds, cat);

  std::vector<ArrayRow> rows = store.array_table(ValueKind::String).rows;
  std::shuffle(rows.begin(), rows.end(), std::mt19937_64(1));
  std::sort(rows.begin(), rows.end(),
            [](const ArrayRow& a, const ArrayRow& b) { return a.index < b.index; });
  for (int i = 0; i < 10; ++i) CHECK(rows[i].value == items[i].text);
}

TEST_CASE("store lookup and csv dump") {
  SourceDataset ds = sftest::toy_dataset();
  AttributeCatalog cat = AttributeCatalog::build(ds, 10, 20);
  DsmStore store = DsmStore::build(ds, cat);

  CHECK(store.row_count(cat.id_of("customer")) == 3);
  CHECK(store.row_count(cat.id_of("items")) == 0);  // array-only key
  CHECK(store.binary(cat.id_of("items")) == nullptr);
  CHECK(store.binary(cat.id_of("bornIn"))->rows.size() == 3);
  CHECK(store.array_kinds_of("items") == std::vector<ValueKind>{ValueKind::String});
  CHECK(store.array_kinds_of("customer").empty());
  CHECK(store.binary(cat.id_of("totalPrice"))->kind == ValueKind::Number);
  CHECK(store.binary(cat.id_of("isMember"))->kind == ValueKind::Bool);

  sftest::TempDir dir("dump");
  dump_store_csv(store, cat, dir.path().string());
  std::string customer_csv = sftest::read_file(dir.file("1_customer.csv"));
  CHECK(customer_csv.rfind("entity,value\n", 0) == 0);
  CHECK(customer_csv.find("Mary,Mary") != std::string::npos);
  std::string arrays_csv = sftest::read_file(dir.file("array_string.csv"));
  CHECK(arrays_csv.find("Mary,items,0,product1") != std::string::npos);
}
