#include "doctest.h"
#include "rbdsat/detector.hpp"
#include "rbdsat/generators.hpp"
#include "rbdsat/obstruction.hpp"
#include "rbdsat/oracle.hpp"

using namespace rbdsat;

namespace {

Formula F(const std::vector<std::vector<int>>& c) { return Formula::from_dimacs_clauses(c); }

const Clause& clause(const Formula& f, ClauseId id) { return *f.find_clause(id); }

// Two var-disjoint 2-clauses c1 = {x1, x2}, c2 = {x5, x6} joined through
// c3 = {x2, x3}, c4 = {x3, -x4}, c5 = {x4, x5}; z = x4 only touches c4, c5.
Formula joined_pair() { return F({{1, 2}, {5, 6}, {2, 3}, {3, -4}, {4, 5}}); }

}  // namespace

TEST_CASE("lambda and g") {
  CHECK(lambda(0) == 4);
  CHECK(lambda(3) == 32);
  CHECK(g(2, 2, 2) == 4 * 4 * 2);
  CHECK(g(3, 1, 2) == 144);
  CHECK(depth_bound(1) == 24);
  CHECK(depth_bound(12) == 531441LL * 16384 * 144);
  CHECK_THROWS(g(1, 2, 2));
}

TEST_CASE("base destroy neighborhood is the clause's variables") {
  auto f = F({{1, -2}});
  auto t = ObstructionTree::base(clause(f, 1));
  CHECK(t->level() == 2);
  CHECK(t->degree() == 2);
  CHECK(destroy_neighborhood(*t, f) == std::vector<Var>{1, 2});
  CHECK(validate_obstruction(*t, f, 2, 2, 2).empty());
  CHECK_THROWS(ObstructionTree::base(Clause{1, {}}));
}

TEST_CASE("join destroy neighborhood") {
  auto f = joined_pair();
  auto t1 = ObstructionTree::base(clause(f, 1));
  auto t2 = ObstructionTree::base(clause(f, 2));
  std::vector<Vertex> path{Vertex::variable(2), Vertex::clause(3), Vertex::variable(3), Vertex::clause(4),
                           Vertex::variable(4), Vertex::clause(5), Vertex::variable(5)};
  auto t = ObstructionTree::join(t1, path, t2);
  CHECK(t->level() == 3);
  // x4 is negative in c4 and positive in c5, both in cla(T); it is already in
  // var(T) through the path, so N† = var(T).
  CHECK(destroy_neighborhood(*t, f) == t->variables());
  CHECK(validate_obstruction(*t, f, 3, 2, 2).empty());
}

TEST_CASE("join destroy neighborhood picks up outside variables") {
  // x9 occurs in both bases, so their neighborhoods overlap.
  auto f = F({{1, 2, 9}, {5, 6, -9}, {2, 3}, {3, 5}});
  auto t1 = ObstructionTree::base(clause(f, 1));
  auto t2 = ObstructionTree::base(clause(f, 2));
  // Bases with degree 3 need a path ending in V(T2).
  std::vector<Vertex> path{Vertex::variable(2), Vertex::clause(3), Vertex::variable(3), Vertex::clause(4),
                           Vertex::variable(5)};
  auto t = ObstructionTree::join(t1, path, t2);
  auto v = validate_obstruction(*t, f, 4, 3, 2);
  bool overlap = false;
  for (const auto& x : v) overlap |= x.message.find("share variable 9") != std::string::npos;
  CHECK(overlap);

  // Outside variable seen with both polarities, no base overlap.
  auto h = F({{1, 2}, {5, 6}, {2, 3}, {3, 5}, {7, 2}, {-7, 5}});
  auto u = ObstructionTree::join(ObstructionTree::base(clause(h, 1)),
                                 {Vertex::variable(2), Vertex::clause(3), Vertex::variable(3), Vertex::clause(4),
                                  Vertex::variable(5)},
                                 ObstructionTree::base(clause(h, 2)));
  auto un = destroy_neighborhood(*u, h);
  // c5, c6 are not in cla(T), so x7 does not qualify.
  CHECK(std::find(un.begin(), un.end(), 7) == un.end());
  // x7 is positive in c3 and negative in c4, both path clauses, but off the path.
  auto h2 = F({{1, 2}, {5, 6}, {2, 3, 7}, {3, 5, -7}});
  auto u2 = ObstructionTree::join(ObstructionTree::base(clause(h2, 1)),
                                  {Vertex::variable(2), Vertex::clause(3), Vertex::variable(3), Vertex::clause(4),
                                   Vertex::variable(5)},
                                  ObstructionTree::base(clause(h2, 2)));
  auto un2 = destroy_neighborhood(*u2, h2);
  CHECK(un2 == std::vector<Var>{1, 2, 3, 5, 6, 7});
}

TEST_CASE("validate rejects mutated witnesses") {
  auto f = joined_pair();
  auto t1 = ObstructionTree::base(clause(f, 1));
  auto t2 = ObstructionTree::base(clause(f, 2));

  // Overlapping destroy neighborhoods: join a tree with itself.
  auto self = ObstructionTree::join(t1, {Vertex::variable(1)}, t1);
  CHECK_FALSE(validate_obstruction(*self, f, 3, 2, 2).empty());

  // Path not ending in the right tree.
  auto short_path = ObstructionTree::join(t1, {Vertex::variable(2), Vertex::clause(3)}, t2);
  CHECK_FALSE(validate_obstruction(*short_path, f, 3, 2, 2).empty());

  // Non-adjacent path vertices.
  auto jump = ObstructionTree::join(t1, {Vertex::variable(2), Vertex::variable(5)}, t2);
  CHECK_FALSE(validate_obstruction(*jump, f, 3, 2, 2).empty());

  // Wrong level or degree.
  CHECK_FALSE(validate_obstruction(*t1, f, 3, 2, 2).empty());
  CHECK_FALSE(validate_obstruction(*t1, f, 1, 1, 2).empty());
  // Clause narrower in the host than the tree claims.
  CHECK_FALSE(validate_obstruction(*t1, apply(f, Literal{1, Polarity::Negative}), 2, 2, 2).empty());
}

TEST_CASE("path longer than lambda_k is rejected") {
  auto f = F({{1, 2}, {5, 6}, {2, 3}, {3, 4}, {4, 5}});
  auto t1 = ObstructionTree::base(clause(f, 1));
  auto t2 = ObstructionTree::base(clause(f, 2));
  std::vector<Vertex> path{Vertex::clause(1), Vertex::variable(2), Vertex::clause(3), Vertex::variable(3),
                           Vertex::clause(4), Vertex::variable(4), Vertex::clause(5), Vertex::variable(5),
                           Vertex::clause(2)};
  auto t = ObstructionTree::join(t1, path, t2);
  // Length 8 > lambda(0) = 4 but <= lambda(1) = 8.
  bool too_long = false;
  for (const auto& v : validate_obstruction(*t, f, 3, 2, 0)) too_long |= v.message.find("path length") != std::string::npos;
  CHECK(too_long);
  for (const auto& v : validate_obstruction(*t, f, 3, 2, 1)) CHECK(v.message.find("path length") == std::string::npos);
}

TEST_CASE("obstruction json round trip") {
  auto f = joined_pair();
  auto r = find_obstruction_or_backdoor(f, 3, 2, 2);
  REQUIRE(r.kind == DetectionOutcome::Kind::Obstruction);
  ObstructionCertificate cert{r.obstruction, Assignment{{7, Polarity::Negative}}, 2};
  auto j = obstruction_to_json(cert);
  CHECK(j["schema"] == "rbdsat.obstruction/1");
  auto back = obstruction_from_json(j);
  CHECK(obstruction_to_json(back) == j);
  CHECK(back.tree->elements() == r.obstruction->elements());
  CHECK(validate_obstruction(*back.tree, f, 3, 2, 2).empty());
  auto bad = j;
  bad["tree"]["path"] = {"q1"};
  CHECK_THROWS(obstruction_from_json(bad));
}

namespace {

void check_properties(const ObstructionTree& t, const Formula& g, int i, int d, int k) {
  REQUIRE(validate_obstruction(t, g, i, d, k).empty());
  const auto nd = destroy_neighborhood(t, g);
  const auto vars = t.variables();
  const auto cla = t.clauses();
  for (Var x : g.variables()) {
    if (std::binary_search(nd.begin(), nd.end(), x)) continue;
    auto hp = apply(g, Literal{x, Polarity::Positive});
    auto hn = apply(g, Literal{x, Polarity::Negative});
    const bool in_pos = validate_obstruction(t, hp, i, d, k).empty();
    const bool in_neg = validate_obstruction(t, hn, i, d, k).empty();
    // Destroy neighborhood: survives in some branch.
    CHECK((in_pos || in_neg));
    // Lifting: N† is the same in the residual.
    if (in_pos) CHECK(destroy_neighborhood(t, hp) == nd);
    if (in_neg) CHECK(destroy_neighborhood(t, hn) == nd);
    // Locality: no edge of polarity p to cla(T) means survival under x -> p.
    if (std::binary_search(vars.begin(), vars.end(), x)) continue;
    for (Polarity p : {Polarity::Positive, Polarity::Negative}) {
      bool touches = false;
      for (ClauseId c : cla) touches |= g.find_clause(c)->polarity_of(x) == p;
      if (!touches) CHECK(validate_obstruction(t, p == Polarity::Positive ? hp : hn, i, d, k).empty());
    }
  }
}

}  // namespace

TEST_CASE("destroy neighborhood, lifting and locality on detector witnesses") {
  int trees = 0;
  ExactOracle oracle;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    auto f = gen_random(8, 10, 3, seed);
    DetectorOptions opts;
    opts.on_obstruction = [&](const ObstructionTree& t, const Formula& host, int level) {
      if (t.kind() != ObstructionTree::Kind::Join) return;
      check_properties(t, host, level, t.degree(), 3);
      CHECK(oracle.srbd_at_most(host, level - 1) == false);
      ++trees;
    };
    find_srb(f, 3, opts);
  }
  CHECK(trees > 0);
}
