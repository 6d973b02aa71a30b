#include "rbdsat/cnf.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace rbdsat {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::size_t index_of(const std::vector<Var>& sorted, Var v) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
  return (it != sorted.end() && *it == v) ? static_cast<std::size_t>(it - sorted.begin()) : npos;
}

std::vector<Var> collect_vars(const std::vector<Clause>& clauses) {
  std::vector<Var> vars;
  for (const auto& c : clauses)
    for (const auto& l : c.literals) vars.push_back(l.var);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // root is the smallest index, i.e. smallest clause id
  }
};

// Component label per clause index, labels numbered by first appearance.
std::vector<std::size_t> component_labels(const Formula& phi, std::size_t& count) {
  const auto& clauses = phi.clauses();
  const auto& vars = phi.variables();
  DisjointSets ds(clauses.size());
  std::vector<std::size_t> first(vars.size(), npos);
  for (std::size_t ci = 0; ci < clauses.size(); ++ci) {
    for (const auto& l : clauses[ci].literals) {
      auto vi = index_of(vars, l.var);
      if (first[vi] == npos)
        first[vi] = ci;
      else
        ds.unite(first[vi], ci);
    }
  }
  std::vector<std::size_t> label(clauses.size(), npos);
  std::vector<std::size_t> root_label(clauses.size(), npos);
  count = 0;
  for (std::size_t ci = 0; ci < clauses.size(); ++ci) {
    auto r = ds.find(ci);
    if (root_label[r] == npos) root_label[r] = count++;
    label[ci] = root_label[r];
  }
  return label;
}

}  // namespace

std::optional<Polarity> Clause::polarity_of(Var v) const {
  auto it = std::lower_bound(literals.begin(), literals.end(), v,
                             [](const Literal& l, Var x) { return l.var < x; });
  if (it != literals.end() && it->var == v) return it->polarity;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Assignment

Assignment::Assignment(std::initializer_list<Literal> lits) {
  for (const auto& l : lits) set(l);
}

void Assignment::set(Var v, Polarity p) {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const Literal& l, Var x) { return l.var < x; });
  if (it != entries_.end() && it->var == v) {
    if (it->polarity != p)
      throw FormulaError("conflicting assignment for variable " + std::to_string(v));
    return;
  }
  entries_.insert(it, Literal{v, p});
}

std::optional<Polarity> Assignment::get(Var v) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const Literal& l, Var x) { return l.var < x; });
  if (it != entries_.end() && it->var == v) return it->polarity;
  return std::nullopt;
}

Assignment Assignment::united(const Assignment& other) const {
  Assignment out;
  out.entries_.reserve(entries_.size() + other.entries_.size());
  std::merge(entries_.begin(), entries_.end(), other.entries_.begin(), other.entries_.end(),
             std::back_inserter(out.entries_));
  for (std::size_t i = 1; i < out.entries_.size(); ++i)
    if (out.entries_[i - 1].var == out.entries_[i].var)
      throw FormulaError("assignment domains overlap on variable " +
                         std::to_string(out.entries_[i].var));
  return out;
}

std::vector<Var> Assignment::variables() const {
  std::vector<Var> out;
  out.reserve(entries_.size());
  for (const auto& l : entries_) out.push_back(l.var);
  return out;
}

// ---------------------------------------------------------------------------
// Formula

Formula::Formula(std::vector<Clause> clauses) : clauses_(std::move(clauses)) {
  for (auto& c : clauses_) {
    for (const auto& l : c.literals)
      if (l.var <= 0) throw FormulaError("variable ids must be positive");
    std::sort(c.literals.begin(), c.literals.end());
    c.literals.erase(std::unique(c.literals.begin(), c.literals.end()), c.literals.end());
    for (std::size_t i = 1; i < c.literals.size(); ++i)
      if (c.literals[i - 1].var == c.literals[i].var)
        throw FormulaError("clause " + std::to_string(c.id) + " contains a complementary pair on " +
                           std::to_string(c.literals[i].var));
  }
  std::sort(clauses_.begin(), clauses_.end(),
            [](const Clause& a, const Clause& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < clauses_.size(); ++i)
    if (clauses_[i - 1].id == clauses_[i].id)
      throw FormulaError("duplicate clause id " + std::to_string(clauses_[i].id));
  vars_ = collect_vars(clauses_);
}

Formula Formula::from_normalized(std::vector<Clause> clauses) {
  Formula f;
  f.clauses_ = std::move(clauses);
  f.vars_ = collect_vars(f.clauses_);
  return f;
}

Formula Formula::from_dimacs_clauses(const std::vector<std::vector<int>>& clauses) {
  std::vector<Clause> out;
  out.reserve(clauses.size());
  ClauseId id = 1;
  for (const auto& c : clauses) {
    Clause cl{id++, {}};
    for (int lit : c) {
      if (lit == 0) throw FormulaError("literal 0 is not a literal");
      cl.literals.push_back(Literal::from_dimacs(lit));
    }
    out.push_back(std::move(cl));
  }
  return Formula(std::move(out));
}

std::size_t Formula::length() const {
  std::size_t n = 0;
  for (const auto& c : clauses_) n += c.width();
  return n;
}

bool Formula::has_empty_clause() const {
  return std::any_of(clauses_.begin(), clauses_.end(),
                     [](const Clause& c) { return c.literals.empty(); });
}

bool Formula::has_variable(Var v) const { return index_of(vars_, v) != npos; }

const Clause* Formula::find_clause(ClauseId id) const {
  auto it = std::lower_bound(clauses_.begin(), clauses_.end(), id,
                             [](const Clause& c, ClauseId x) { return c.id < x; });
  return (it != clauses_.end() && it->id == id) ? &*it : nullptr;
}

std::vector<ClauseId> Formula::clause_ids() const {
  std::vector<ClauseId> ids;
  ids.reserve(clauses_.size());
  for (const auto& c : clauses_) ids.push_back(c.id);
  return ids;
}

int Formula::max_clause_width() const {
  std::size_t w = 0;
  for (const auto& c : clauses_) w = std::max(w, c.width());
  return static_cast<int>(w);
}

Formula Formula::restrict_to(std::span<const ClauseId> ids) const {
  std::vector<ClauseId> sorted(ids.begin(), ids.end());
  std::sort(sorted.begin(), sorted.end());
  Formula out;
  for (const auto& c : clauses_)
    if (std::binary_search(sorted.begin(), sorted.end(), c.id)) out.clauses_.push_back(c);
  out.vars_ = collect_vars(out.clauses_);
  return out;
}

std::string Formula::canonical_key() const {
  std::string key;
  key.reserve(clauses_.size() * 8);
  for (const auto& c : clauses_) {
    key += std::to_string(c.id);
    key += ':';
    for (const auto& l : c.literals) {
      key += std::to_string(l.to_dimacs());
      key += ',';
    }
    key += ';';
  }
  return key;
}

// ---------------------------------------------------------------------------
// Operations

namespace {

template <class Lookup>
Formula apply_with(const Formula& phi, Lookup&& value_of) {
  std::vector<Clause> out;
  out.reserve(phi.clause_count());
  for (const auto& c : phi.clauses()) {
    bool satisfied = false;
    Clause reduced{c.id, {}};
    reduced.literals.reserve(c.literals.size());
    for (const auto& l : c.literals) {
      auto v = value_of(l.var);
      if (!v) {
        reduced.literals.push_back(l);
      } else if (*v == l.polarity) {
        satisfied = true;
        break;
      }
    }
    if (!satisfied) out.push_back(std::move(reduced));
  }
  return Formula::from_normalized(std::move(out));
}

}  // namespace

Formula apply(const Formula& phi, const Assignment& tau) {
  if (tau.empty()) return phi;
  return apply_with(phi, [&](Var v) { return tau.get(v); });
}

Formula apply(const Formula& phi, Literal lit) {
  return apply_with(phi, [&](Var v) -> std::optional<Polarity> {
    if (v == lit.var) return lit.polarity;
    return std::nullopt;
  });
}

bool satisfies(const Formula& phi, const Assignment& tau) {
  for (const auto& c : phi.clauses()) {
    bool sat = false;
    for (const auto& l : c.literals) {
      auto v = tau.get(l.var);
      if (v && *v == l.polarity) {
        sat = true;
        break;
      }
    }
    if (!sat) return false;
  }
  return true;
}

std::vector<Formula> components(const Formula& phi) {
  std::size_t count = 0;
  auto label = component_labels(phi, count);
  std::vector<std::vector<Clause>> parts(count);
  for (std::size_t ci = 0; ci < phi.clause_count(); ++ci)
    parts[label[ci]].push_back(phi.clauses()[ci]);
  std::vector<Formula> out;
  out.reserve(count);
  for (auto& p : parts) out.push_back(Formula::from_normalized(std::move(p)));
  return out;
}

std::size_t component_count(const Formula& phi) {
  std::size_t count = 0;
  component_labels(phi, count);
  return count;
}

std::string to_string(const Vertex& v) {
  return (v.is_clause() ? "c" : "x") + std::to_string(v.id);
}

// ---------------------------------------------------------------------------
// IncidenceGraph

IncidenceGraph::IncidenceGraph(Formula phi) : phi_(std::move(phi)) {
  occurrences_.resize(phi_.variable_count());
  for (const auto& c : phi_.clauses())
    for (const auto& l : c.literals)
      occurrences_[index_of(phi_.variables(), l.var)].emplace_back(c.id, l.polarity);
}

std::size_t IncidenceGraph::var_index(Var v) const { return index_of(phi_.variables(), v); }

bool IncidenceGraph::has_vertex(const Vertex& v) const {
  return v.is_clause() ? phi_.find_clause(v.id) != nullptr : var_index(v.id) != npos;
}

std::vector<IncidenceGraph::Edge> IncidenceGraph::neighbors(const Vertex& v) const {
  std::vector<Edge> out;
  if (v.is_clause()) {
    if (const Clause* c = phi_.find_clause(v.id))
      for (const auto& l : c->literals) out.push_back({Vertex::variable(l.var), l.polarity});
  } else {
    auto vi = var_index(v.id);
    if (vi != npos)
      for (const auto& [cid, pol] : occurrences_[vi]) out.push_back({Vertex::clause(cid), pol});
  }
  return out;
}

std::optional<Polarity> IncidenceGraph::edge(Var v, ClauseId c) const {
  const Clause* cl = phi_.find_clause(c);
  return cl ? cl->polarity_of(v) : std::nullopt;
}

std::vector<Vertex> IncidenceGraph::vertices() const {
  std::vector<Vertex> out;
  for (const auto& c : phi_.clauses()) out.push_back(Vertex::clause(c.id));
  for (Var v : phi_.variables()) out.push_back(Vertex::variable(v));
  return out;
}

std::optional<std::vector<Vertex>> shortest_path(const IncidenceGraph& g,
                                                 std::span<const Vertex> sources,
                                                 std::span<const Vertex> targets) {
  std::vector<Vertex> src(sources.begin(), sources.end());
  std::vector<Vertex> dst(targets.begin(), targets.end());
  std::sort(src.begin(), src.end());
  src.erase(std::unique(src.begin(), src.end()), src.end());
  std::sort(dst.begin(), dst.end());
  dst.erase(std::unique(dst.begin(), dst.end()), dst.end());

  // Vertex index: clauses first (in id order), then variables.
  const auto& clauses = g.formula().clauses();
  const auto& vars = g.formula().variables();
  auto index = [&](const Vertex& v) -> std::size_t {
    if (v.is_clause()) {
      auto it = std::lower_bound(clauses.begin(), clauses.end(), v.id,
                                 [](const Clause& c, ClauseId x) { return c.id < x; });
      return (it != clauses.end() && it->id == v.id) ? static_cast<std::size_t>(it - clauses.begin())
                                                      : npos;
    }
    auto vi = index_of(vars, v.id);
    return vi == npos ? npos : clauses.size() + vi;
  };
  const std::size_t n = clauses.size() + vars.size();
  std::vector<std::size_t> parent(n, npos);
  std::vector<bool> seen(n, false), is_target(n, false);
  std::vector<Vertex> vertex_of(n);
  for (std::size_t i = 0; i < clauses.size(); ++i) vertex_of[i] = Vertex::clause(clauses[i].id);
  for (std::size_t i = 0; i < vars.size(); ++i) vertex_of[clauses.size() + i] = Vertex::variable(vars[i]);

  for (const auto& t : dst) {
    auto i = index(t);
    if (i != npos) is_target[i] = true;
  }
  std::vector<std::size_t> layer;
  for (const auto& s : src) {
    auto i = index(s);
    if (i == npos || seen[i]) continue;
    seen[i] = true;
    layer.push_back(i);
  }
  while (!layer.empty()) {
    // Layer entries are in discovery order; the winning target is the smallest.
    std::size_t best = npos;
    for (auto i : layer)
      if (is_target[i] && (best == npos || vertex_of[i] < vertex_of[best])) best = i;
    if (best != npos) {
      std::vector<Vertex> path;
      for (auto i = best; i != npos; i = parent[i]) path.push_back(vertex_of[i]);
      std::reverse(path.begin(), path.end());
      return path;
    }
    std::vector<std::size_t> next;
    for (auto i : layer) {
      for (const auto& e : g.neighbors(vertex_of[i])) {
        auto j = index(e.to);
        if (seen[j]) continue;
        seen[j] = true;
        parent[j] = i;
        next.push_back(j);
      }
    }
    layer = std::move(next);
  }
  return std::nullopt;
}

int component_diameter(const Formula& phi) {
  IncidenceGraph g(phi);
  auto verts = g.vertices();
  int diameter = 0;
  for (const auto& s : verts) {
    std::vector<Vertex> frontier{s};
    std::vector<Vertex> seen{s};
    int dist = 0;
    while (true) {
      std::vector<Vertex> next;
      for (const auto& v : frontier)
        for (const auto& e : g.neighbors(v))
          if (std::find(seen.begin(), seen.end(), e.to) == seen.end()) {
            seen.push_back(e.to);
            next.push_back(e.to);
          }
      if (next.empty()) break;
      ++dist;
      frontier = std::move(next);
    }
    diameter = std::max(diameter, dist);
  }
  return diameter;
}

std::string to_string(const Formula& phi) {
  std::ostringstream os;
  os << '{';
  bool first_clause = true;
  for (const auto& c : phi.clauses()) {
    if (!first_clause) os << ", ";
    first_clause = false;
    os << '{';
    bool first = true;
    for (const auto& l : c.literals) {
      if (!first) os << ' ';
      first = false;
      os << l.to_dimacs();
    }
    os << '}';
  }
  os << '}';
  return os.str();
}

}  // namespace rbdsat
