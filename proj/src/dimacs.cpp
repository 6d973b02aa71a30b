#include "rbdsat/dimacs.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace rbdsat {

DimacsError::DimacsError(std::size_t line, std::size_t column, const std::string& what)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> split_tokens(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size()) break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

long long to_int(const Token& t, std::size_t line_no) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
  if (ec != std::errc() || ptr != t.text.data() + t.text.size())
    throw DimacsError(line_no, t.column, "expected integer, got '" + std::string(t.text) + "'");
  return value;
}

}  // namespace

ParseResult parse_dimacs(std::string_view text, const DimacsOptions& options) {
  ParseResult result;
  bool have_header = false;
  std::vector<std::vector<Literal>> raw;  // in file order
  std::vector<Literal> current;
  std::size_t current_line = 0, current_col = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::size_t raw_clause_count = 0;
  std::size_t tautologies = 0;

  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    auto tokens = split_tokens(line);
    if (tokens.empty()) continue;
    if (tokens[0].text[0] == 'c') continue;
    if (tokens[0].text == "p") {
      if (have_header) throw DimacsError(line_no, tokens[0].column, "duplicate header");
      if (tokens.size() != 4 || tokens[1].text != "cnf")
        throw DimacsError(line_no, tokens[0].column, "malformed header, expected 'p cnf <vars> <clauses>'");
      auto n = to_int(tokens[2], line_no);
      auto m = to_int(tokens[3], line_no);
      if (n < 0) throw DimacsError(line_no, tokens[2].column, "negative variable count");
      if (m < 0) throw DimacsError(line_no, tokens[3].column, "negative clause count");
      result.declared_variables = static_cast<int>(n);
      result.declared_clauses = static_cast<int>(m);
      have_header = true;
      continue;
    }
    if (!have_header) throw DimacsError(line_no, tokens[0].column, "clause data before 'p cnf' header");

    for (const auto& t : tokens) {
      auto lit = to_int(t, line_no);
      if (lit == 0) {
        std::sort(current.begin(), current.end());
        current.erase(std::unique(current.begin(), current.end()), current.end());
        bool tautology = false;
        for (std::size_t i = 1; i < current.size(); ++i)
          if (current[i - 1].var == current[i].var) tautology = true;
        ++raw_clause_count;
        if (tautology) {
          if (!options.sanitize)
            throw DimacsError(current_line ? current_line : line_no,
                              current_line ? current_col : t.column,
                              "tautological clause (contains a literal and its negation)");
          ++tautologies;
        } else {
          raw.push_back(std::move(current));
        }
        current.clear();
        current_line = 0;
        continue;
      }
      long long v = lit < 0 ? -lit : lit;
      if (v > result.declared_variables)
        throw DimacsError(line_no, t.column,
                          "variable " + std::to_string(v) + " exceeds declared count " +
                              std::to_string(result.declared_variables));
      if (current.empty() && current_line == 0) {
        current_line = line_no;
        current_col = t.column;
      }
      current.push_back(Literal::from_dimacs(static_cast<int>(lit)));
    }
  }
  if (!have_header) throw DimacsError(line_no, 1, "missing 'p cnf' header");
  if (!current.empty()) throw DimacsError(current_line, current_col, "clause not terminated by 0");

  if (tautologies)
    result.warnings.push_back("removed " + std::to_string(tautologies) + " tautological clause(s)");
  if (raw_clause_count != static_cast<std::size_t>(result.declared_clauses))
    result.warnings.push_back("header declares " + std::to_string(result.declared_clauses) +
                              " clauses, found " + std::to_string(raw_clause_count));

  std::set<std::vector<Literal>> seen;
  std::vector<Clause> clauses;
  std::size_t duplicates = 0;
  for (auto& lits : raw) {
    if (!seen.insert(lits).second) {
      ++duplicates;
      continue;
    }
    clauses.push_back(Clause{static_cast<ClauseId>(clauses.size() + 1), std::move(lits)});
  }
  if (duplicates)
    result.warnings.push_back("collapsed " + std::to_string(duplicates) + " duplicate clause(s)");

  result.formula = Formula::from_normalized(std::move(clauses));
  for (Var v = 1; v <= result.declared_variables; ++v)
    if (!result.formula.has_variable(v)) result.dropped_variables.push_back(v);
  if (!result.dropped_variables.empty())
    result.warnings.push_back("dropped " + std::to_string(result.dropped_variables.size()) +
                              " variable(s) without occurrences");
  return result;
}

ParseResult parse_dimacs(std::istream& in, const DimacsOptions& options) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_dimacs(buf.str(), options);
}

ParseResult parse_dimacs_file(const std::string& path, const DimacsOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_dimacs(in, options);
}

std::string serialize_dimacs(const Formula& phi) {
  Var max_var = phi.variables().empty() ? 0 : phi.variables().back();
  std::string out = "p cnf " + std::to_string(max_var) + " " + std::to_string(phi.clause_count());
  for (const auto& c : phi.clauses()) {
    out += '\n';
    for (const auto& l : c.literals) {
      out += std::to_string(l.to_dimacs());
      out += ' ';
    }
    out += '0';
  }
  return out;
}

}  // namespace rbdsat
