#include "schemaforge/workload.hpp"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace schemaforge {

const char* to_string(FilterOp op) {
  switch (op) {
    case FilterOp::Eq: return "eq";
    case FilterOp::Lt: return "lt";
    case FilterOp::Gt: return "gt";
  }
  return "?";
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

FilterOp parse_op(const std::string& op, const std::string& file, std::size_t line_no) {
  if (op == "eq") return FilterOp::Eq;
  if (op == "lt") return FilterOp::Lt;
  if (op == "gt") return FilterOp::Gt;
  throw MalformedLine(file, line_no, "unknown filter op '" + op + "'");
}

}  // namespace

Workload parse_workload_text(const std::string& text, const std::string& file_label) {
  Workload workload;
  std::set<std::string> ids;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;

    std::vector<std::string> parts = split(t, ';');
    if (parts.size() < 2 || parts.size() > 3)
      throw MalformedLine(file_label, line_no, "expected '<id>;<selects>[;<filters>]'");

    LogicalQuery query;
    query.id = trim(parts[0]);
    if (query.id.empty()) throw MalformedLine(file_label, line_no, "empty query id");
    if (!ids.insert(query.id).second)
      throw MalformedLine(file_label, line_no, "duplicate query id '" + query.id + "'");

    for (const std::string& name : split(parts[1], ',')) {
      std::string n = trim(name);
      if (!n.empty()) query.select.push_back(n);
    }
    if (query.select.empty())
      throw MalformedLine(file_label, line_no, "query has an empty select list");

    if (parts.size() == 3 && !trim(parts[2]).empty()) {
      for (const std::string& spec : split(parts[2], ',')) {
        std::vector<std::string> f = split(trim(spec), ':');
        if (f.size() != 3)
          throw MalformedLine(file_label, line_no, "filter '" + spec +
                                                       "' is not <name>:<op>:<literal>");
        Filter filter;
        filter.name = trim(f[0]);
        filter.op = parse_op(trim(f[1]), file_label, line_no);
        filter.literal = f[2];
        if (filter.name.empty()) throw MalformedLine(file_label, line_no, "empty filter name");
        query.filters.push_back(std::move(filter));
      }
    }
    workload.queries.push_back(std::move(query));
  }
  return workload;
}

Workload parse_workload(const std::string& path) {
  if (!std::filesystem::exists(path)) throw FileNotFound(path);
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_workload_text(buf.str(), path);
}

}  // namespace schemaforge
