#include "rbdsat/obstruction.hpp"

#include <algorithm>
#include <stdexcept>

namespace rbdsat {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("parameter bound overflows 64 bits");
  return r;
}

std::int64_t pow3(int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r = checked_mul(r, 3);
  return r;
}

}  // namespace

std::int64_t lambda(int k) {
  if (k < 0) throw std::invalid_argument("k must be >= 0");
  if (k > 60) throw std::overflow_error("lambda(k) overflows 64 bits");
  return std::int64_t{4} << k;
}

std::int64_t g(int i, int d, int k) {
  if (d > i) throw std::invalid_argument("g(i,d,k) needs d <= i");
  return checked_mul(checked_mul(pow3(i - d), lambda(k)), d);
}

std::int64_t depth_bound(int k) {
  return checked_mul(checked_mul(pow3(k), lambda(k)), static_cast<std::int64_t>(k) * k);
}

// ---------------------------------------------------------------------------

ObstructionPtr ObstructionTree::base(const Clause& clause) {
  if (clause.width() == 0) throw std::invalid_argument("obstruction base needs a nonempty clause");
  auto t = std::shared_ptr<ObstructionTree>(new ObstructionTree());
  t->kind_ = Kind::Base;
  t->degree_ = t->level_ = static_cast<int>(clause.width());
  t->clause_ = clause.id;
  t->elements_.push_back(Vertex::clause(clause.id));
  for (const auto& l : clause.literals) t->elements_.push_back(Vertex::variable(l.var));
  std::sort(t->elements_.begin(), t->elements_.end());
  return t;
}

ObstructionPtr ObstructionTree::join(ObstructionPtr left, std::vector<Vertex> path, ObstructionPtr right) {
  if (!left || !right) throw std::invalid_argument("join needs two subtrees");
  if (left->level_ != right->level_ || left->degree_ != right->degree_)
    throw std::invalid_argument("joined subtrees must share level and degree");
  auto t = std::shared_ptr<ObstructionTree>(new ObstructionTree());
  t->kind_ = Kind::Join;
  t->level_ = left->level_ + 1;
  t->degree_ = left->degree_;
  t->elements_ = left->elements_;
  t->elements_.insert(t->elements_.end(), path.begin(), path.end());
  t->elements_.insert(t->elements_.end(), right->elements_.begin(), right->elements_.end());
  std::sort(t->elements_.begin(), t->elements_.end());
  t->elements_.erase(std::unique(t->elements_.begin(), t->elements_.end()), t->elements_.end());
  t->left_ = std::move(left);
  t->right_ = std::move(right);
  t->path_ = std::move(path);
  return t;
}

std::vector<ClauseId> ObstructionTree::clauses() const {
  std::vector<ClauseId> out;
  for (const auto& v : elements_)
    if (v.is_clause()) out.push_back(v.id);
  return out;
}

std::vector<Var> ObstructionTree::variables() const {
  std::vector<Var> out;
  for (const auto& v : elements_)
    if (v.is_variable()) out.push_back(v.id);
  return out;
}

bool ObstructionTree::contains(const Vertex& v) const {
  return std::binary_search(elements_.begin(), elements_.end(), v);
}

std::vector<Var> destroy_neighborhood(const ObstructionTree& t, const Formula& g) {
  auto out = t.variables();
  if (t.kind() == ObstructionTree::Kind::Base) return out;
  std::vector<std::pair<Var, unsigned>> seen;  // polarity bitmask per variable
  for (ClauseId id : t.clauses()) {
    const Clause* c = g.find_clause(id);
    if (!c) continue;
    for (const auto& l : c->literals) seen.emplace_back(l.var, l.polarity == Polarity::Positive ? 1u : 2u);
  }
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 0; i < seen.size();) {
    unsigned mask = 0;
    std::size_t j = i;
    for (; j < seen.size() && seen[j].first == seen[i].first; ++j) mask |= seen[j].second;
    if (mask == 3) out.push_back(seen[i].first);
    i = j;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct ObstructionValidator {
  const Formula& host;
  int k;
  std::vector<ObstructionViolation> out;

  void add(const std::string& path, std::string msg) { out.push_back({path, std::move(msg)}); }

  bool has_vertex(const Vertex& v) const {
    return v.is_clause() ? host.find_clause(v.id) != nullptr : host.has_variable(v.id);
  }

  bool adjacent(const Vertex& a, const Vertex& b) const {
    if (a.kind == b.kind) return false;
    const Vertex& c = a.is_clause() ? a : b;
    const Vertex& x = a.is_clause() ? b : a;
    const Clause* cl = host.find_clause(c.id);
    return cl && cl->polarity_of(x.id).has_value();
  }

  void visit(const ObstructionTree& t, int i, int d, const std::string& path) {
    if (t.level() != i)
      add(path, "level " + std::to_string(t.level()) + " where " + std::to_string(i) + " is expected");
    if (t.degree() != d)
      add(path, "degree " + std::to_string(t.degree()) + " where " + std::to_string(d) + " is expected");
    if (d < 1) add(path, "degree must be at least 1");
    if (i < d) {
      add(path, "level below degree");
      return;
    }

    if (t.kind() == ObstructionTree::Kind::Base) {
      if (i != d) add(path, "base tree at level " + std::to_string(i) + " above its degree");
      const Clause* c = host.find_clause(t.clause());
      if (!c) {
        add(path, "base clause " + std::to_string(t.clause()) + " not in the formula");
        return;
      }
      if (static_cast<int>(c->width()) != d)
        add(path, "base clause " + std::to_string(c->id) + " has width " + std::to_string(c->width()) +
                      ", expected " + std::to_string(d));
      std::vector<Var> vars;
      for (const auto& l : c->literals) vars.push_back(l.var);
      if (vars != t.variables()) add(path, "base variables differ from the clause's variables");
    } else {
      visit(*t.left(), i - 1, d, path + "/left");
      visit(*t.right(), i - 1, d, path + "/right");
      auto n1 = destroy_neighborhood(*t.left(), host);
      auto n2 = destroy_neighborhood(*t.right(), host);
      std::vector<Var> common;
      std::set_intersection(n1.begin(), n1.end(), n2.begin(), n2.end(), std::back_inserter(common));
      if (!common.empty())
        add(path, "destroy neighborhoods of the joined trees share variable " + std::to_string(common.front()));
      const auto& p = t.path();
      if (p.empty()) {
        add(path, "empty join path");
      } else {
        for (const auto& v : p)
          if (!has_vertex(v)) add(path, "path vertex " + to_string(v) + " not in the formula");
        for (std::size_t j = 1; j < p.size(); ++j)
          if (!adjacent(p[j - 1], p[j]))
            add(path, "path vertices " + to_string(p[j - 1]) + " and " + to_string(p[j]) + " are not adjacent");
        const auto length = static_cast<std::int64_t>(p.size()) - 1;
        if (length > lambda(k))
          add(path, "path length " + std::to_string(length) + " exceeds lambda_k = " + std::to_string(lambda(k)));
        if (!t.left()->contains(p.front())) add(path, "path does not start in the left tree");
        if (!t.right()->contains(p.back())) add(path, "path does not end in the right tree");
      }
    }

    const auto vbound = checked_mul(pow3(i - d), lambda(k));
    if (static_cast<std::int64_t>(t.elements().size()) > vbound)
      add(path, "tree has " + std::to_string(t.elements().size()) + " vertices, bound " + std::to_string(vbound));
    const auto nd = destroy_neighborhood(t, host);
    if (static_cast<std::int64_t>(nd.size()) > g(i, d, k))
      add(path, "destroy neighborhood has " + std::to_string(nd.size()) + " variables, bound " +
                    std::to_string(g(i, d, k)));
  }

};

}  // namespace

std::vector<ObstructionViolation> validate_obstruction(const ObstructionTree& t, const Formula& host, int i,
                                                       int d, int k) {
  ObstructionValidator v{host, k, {}};
  if (k < 0) {
    v.add("root", "k must be >= 0");
    return v.out;
  }
  v.visit(t, i, d, "root");
  return v.out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string vertex_text(const Vertex& v) { return to_string(v); }

Vertex parse_vertex(const std::string& s) {
  if (s.size() < 2 || (s[0] != 'c' && s[0] != 'x')) throw std::invalid_argument("bad path vertex '" + s + "'");
  std::size_t used = 0;
  int id = std::stoi(s.substr(1), &used);
  if (used != s.size() - 1 || id <= 0) throw std::invalid_argument("bad path vertex '" + s + "'");
  return s[0] == 'c' ? Vertex::clause(id) : Vertex::variable(id);
}

nlohmann::json tree_to_json(const ObstructionTree& t) {
  nlohmann::json j;
  if (t.kind() == ObstructionTree::Kind::Base) {
    j["kind"] = "base";
    j["clause"] = t.clause();
    j["vars"] = t.variables();
  } else {
    j["kind"] = "join";
    j["level"] = t.level();
    j["left"] = tree_to_json(*t.left());
    auto path = nlohmann::json::array();
    for (const auto& v : t.path()) path.push_back(vertex_text(v));
    j["path"] = std::move(path);
    j["right"] = tree_to_json(*t.right());
  }
  return j;
}

ObstructionPtr tree_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw std::invalid_argument("obstruction node needs 'kind'");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "base") {
    Clause c{j.at("clause").get<ClauseId>(), {}};
    for (Var v : j.at("vars").get<std::vector<Var>>()) c.literals.push_back({v, Polarity::Positive});
    std::sort(c.literals.begin(), c.literals.end());
    return ObstructionTree::base(c);
  }
  if (kind == "join") {
    std::vector<Vertex> path;
    for (const auto& s : j.at("path")) path.push_back(parse_vertex(s.get<std::string>()));
    auto t = ObstructionTree::join(tree_from_json(j.at("left")), std::move(path), tree_from_json(j.at("right")));
    if (j.contains("level") && j["level"].get<int>() != t->level())
      throw std::invalid_argument("join level does not match its subtrees");
    return t;
  }
  throw std::invalid_argument("unknown obstruction node kind '" + kind + "'");
}

}  // namespace

nlohmann::json obstruction_to_json(const ObstructionCertificate& cert) {
  nlohmann::json j;
  j["schema"] = "rbdsat.obstruction/1";
  j["k"] = cert.k;
  j["level"] = cert.tree->level();
  j["degree"] = cert.tree->degree();
  auto tau = nlohmann::json::array();
  for (const auto& l : cert.host_assignment.literals()) tau.push_back(l.to_dimacs());
  j["host_assignment"] = std::move(tau);
  j["tree"] = tree_to_json(*cert.tree);
  return j;
}

ObstructionCertificate obstruction_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.value("schema", "") != "rbdsat.obstruction/1")
    throw std::invalid_argument("not an rbdsat.obstruction/1 document");
  try {
    ObstructionCertificate cert;
    cert.k = j.at("k").get<int>();
    for (int lit : j.value("host_assignment", std::vector<int>{})) {
      if (lit == 0) throw std::invalid_argument("host assignment literal 0");
      cert.host_assignment.set(Literal::from_dimacs(lit));
    }
    cert.tree = tree_from_json(j.at("tree"));
    return cert;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed obstruction document: ") + e.what());
  }
}

}  // namespace rbdsat
