#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace schemaforge {

/// Base of every schema-forge failure.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A referenced file does not exist.
class FileNotFound : public Error {
 public:
  explicit FileNotFound(const std::string& path)
      : Error(path + " not found"), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Bad key, value, or structure in a configuration file.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// An input line that could not be parsed.
class MalformedLine : public Error {
 public:
  MalformedLine(const std::string& file, std::size_t line_no, const std::string& detail)
      : Error(file + ":" + std::to_string(line_no) + ": " + detail),
        file_(file),
        line_no_(line_no) {}
  const std::string& file() const { return file_; }
  std::size_t line_no() const { return line_no_; }

 private:
  std::string file_;
  std::size_t line_no_;
};

/// Two JSON documents carry the same object id.
class DuplicateObjectId : public Error {
 public:
  explicit DuplicateObjectId(const std::string& id)
      : Error("duplicate JSON object id '" + id + "'") {}
};

/// An id band does not fit between its threshold boundaries.
class ThresholdTooSmall : public Error {
 public:
  ThresholdTooSmall(const std::string& band, const std::string& detail)
      : Error("threshold too small for " + band + " band: " + detail), band_(band) {}
  const std::string& band() const { return band_; }

 private:
  std::string band_;
};

class UnknownKey : public Error {
 public:
  explicit UnknownKey(const std::string& key)
      : Error("JSON key '" + key + "' is not in the catalog") {}
};

class UnknownPredicate : public Error {
 public:
  explicit UnknownPredicate(const std::string& predicate)
      : Error("predicate '" + predicate + "' is not in the catalog") {}
};

class MissingKeyColumn : public Error {
 public:
  MissingKeyColumn(const std::string& table, const std::string& column)
      : Error("table '" + table + "' has no declared key column '" + column + "'") {}
};

/// A state string that is not a valid canonical encoding, or a decoded
/// dictionary that does not partition the catalog's action set.
class MalformedEncoding : public Error {
 public:
  using Error::Error;
};

class ActionNotSingleton : public Error {
 public:
  explicit ActionNotSingleton(int action)
      : Error("action " + std::to_string(action) + " no longer names a singleton table") {}
};

class UnknownTarget : public Error {
 public:
  explicit UnknownTarget(int table_id)
      : Error("table id " + std::to_string(table_id) + " is not a valid join target") {}
};

class IncompatibleEntityDomains : public Error {
 public:
  using Error::Error;
};

class UnknownAttribute : public Error {
 public:
  explicit UnknownAttribute(const std::string& name)
      : Error("unknown attribute '" + name + "'") {}
  explicit UnknownAttribute(int id)
      : Error("unknown attribute id " + std::to_string(id)) {}
};

class EmptyActionSpace : public Error {
 public:
  EmptyActionSpace() : Error("no actions remain to choose from") {}
};

class NoJoinCandidate : public Error {
 public:
  explicit NoJoinCandidate(int action)
      : Error("no pool-allowed join target for action " + std::to_string(action)) {}
};

class SqlError : public Error {
 public:
  SqlError(const std::string& query_id, const std::string& message)
      : Error("query " + (query_id.empty() ? std::string("<ddl>") : query_id) + ": " + message),
        query_id_(query_id) {}
  const std::string& query_id() const { return query_id_; }

 private:
  std::string query_id_;
};

class Timeout : public Error {
 public:
  explicit Timeout(const std::string& query_id)
      : Error("query " + query_id + " timed out"), query_id_(query_id) {}
  const std::string& query_id() const { return query_id_; }

 private:
  std::string query_id_;
};

}  // namespace schemaforge
