#include <gtest/gtest.h>

#include <cmath>

#include "repel/errors.hpp"
#include "repel/tree.hpp"

using namespace repel;

namespace {

const char* kTwo = R"({"root":"a","vertices":[{"id":"a"},{"id":"b","parent":"a"}],"edges":[{"a":"a","b":"b","c":1.0}]})";

RootedTree killed_path3() {
  return RootedTree::build("a", {{"a", "", 0.0}, {"b", "a", 0.0}, {"c", "b", 1.0}},
                           {{"a", "b", 1.0, 1.0}, {"b", "c", 1.0, 1.0}});
}

}  // namespace

TEST(Tree, TwoVertexSpec) {
  const RootedTree t = parse_tree_spec(kTwo);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t.id(t.root()), "a");
  EXPECT_DOUBLE_EQ(t.cstar(0, 1), 1.0);
  EXPECT_TRUE(t.is_symmetric());
  EXPECT_TRUE(t.is_recurrent());
}

TEST(Tree, StarDegree) {
  const RootedTree t = parse_tree_spec(R"({"root":"o","vertices":[{"id":"o"},{"id":"x","parent":"o"},
    {"id":"y","parent":"o"},{"id":"z","parent":"o"}],"edges":[{"a":"o","b":"x","c":1},{"a":"o","b":"y","c":1},
    {"from":"o","to":"z","c_fwd":2,"c_bwd":0.5}]})");
  EXPECT_EQ(t.degree(t.root()), 3u);
  const Vertex z = t.index("z");
  EXPECT_DOUBLE_EQ(t.conductance(0, z), 2.0);
  EXPECT_DOUBLE_EQ(t.conductance(z, 0), 0.5);
  EXPECT_DOUBLE_EQ(t.cstar(z, 0), 1.0);
  EXPECT_FALSE(t.is_symmetric());
}

TEST(Tree, BreadthFirstOrder) {
  const RootedTree t = RootedTree::build("r", {{"r", "", 0}, {"q", "m", 0}, {"m", "r", 0}, {"b", "r", 0}},
                                         {{"r", "m", 1, 1}, {"r", "b", 1, 1}, {"m", "q", 1, 1}});
  EXPECT_EQ(t.id(1), "b");
  EXPECT_EQ(t.id(2), "m");
  EXPECT_EQ(t.id(3), "q");
  for (Vertex v = 1; v < t.size(); ++v) EXPECT_LT(t.parent(v), v);
  EXPECT_EQ(t.depth(3), 2u);
  EXPECT_TRUE(t.is_ancestor_or_self(2, 3));
  EXPECT_FALSE(t.is_ancestor_or_self(1, 3));
}

TEST(Tree, RejectsInvalidSpecs) {
  EXPECT_THROW(parse_tree_spec(R"({"root":"a","vertices":[{"id":"a"},{"id":"b","parent":"a"}],
    "edges":[{"a":"a","b":"b","c":0}]})"),
               ValidationError);
  EXPECT_THROW(parse_tree_spec(R"({"root":"a","vertices":[{"id":"a"},{"id":"b","parent":"c"},{"id":"c","parent":"b"}],
    "edges":[{"a":"b","b":"c","c":1}]})"),
               ValidationError);
  EXPECT_THROW(parse_tree_spec(R"({"root":"a","vertices":[{"id":"a"},{"id":"b"}],"edges":[]})"), ValidationError);
  EXPECT_THROW(parse_tree_spec(R"({"root":"a","vertices":[{"id":"a"},{"id":"a"}],"edges":[]})"), ValidationError);
  EXPECT_THROW(parse_tree_spec("{not json"), ParseError);
  EXPECT_THROW(parse_tree_spec(R"({"vertices":[]})"), ParseError);
}

TEST(Tree, SerializeRoundTrip) {
  const RootedTree t = killed_path3();
  const std::string s = serialize_tree_spec(t);
  const RootedTree u = parse_tree_spec(s);
  EXPECT_EQ(serialize_tree_spec(u), s);
  ASSERT_EQ(u.size(), t.size());
  for (Vertex v = 0; v < t.size(); ++v) {
    EXPECT_EQ(u.id(v), t.id(v));
    EXPECT_DOUBLE_EQ(u.killing(v), t.killing(v));
  }
}

TEST(Tree, HittingProbability) {
  EXPECT_EQ(hitting_probability(make_path_tree(4)), std::vector<double>(4, 1.0));
  const RootedTree two = RootedTree::build("a", {{"a", "", 0}, {"b", "a", 1.0}}, {{"a", "b", 1, 1}});
  EXPECT_NEAR(hitting_probability(two)[1], 0.5, 1e-15);
  const auto h = hitting_probability(killed_path3());
  EXPECT_NEAR(h[1], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(h[2], 1.0 / 3.0, 1e-15);
}

TEST(Tree, HTransform) {
  const RootedTree two = RootedTree::build("a", {{"a", "", 0}, {"b", "a", 1.0}}, {{"a", "b", 1, 1}});
  const RootedTree h = h_transform(two);
  EXPECT_TRUE(h.is_recurrent());
  EXPECT_NEAR(h.conductance(0, 1), 0.5, 1e-15);
  EXPECT_NEAR(h.conductance(1, 0), 2.0, 1e-15);

  const RootedTree t = killed_path3();
  const RootedTree ht = h_transform(t);
  for (Vertex v = 1; v < t.size(); ++v)
    EXPECT_NEAR(ht.c_down(v) * ht.c_up(v), t.c_down(v) * t.c_up(v), 1e-14);
  const RootedTree hh = h_transform(ht);
  for (Vertex v = 1; v < t.size(); ++v) {
    EXPECT_NEAR(hh.c_down(v), ht.c_down(v), 1e-14);
    EXPECT_NEAR(hh.c_up(v), ht.c_up(v), 1e-14);
  }
  const RootedTree plain = make_path_tree(3);
  EXPECT_EQ(serialize_tree_spec(h_transform(plain)), serialize_tree_spec(plain));
}

TEST(Tree, Admissibility) {
  const RootedTree t = make_path_tree(3);
  EXPECT_TRUE(is_admissible(t, {1.0, 0.5, 0.0}, 0.0));
  EXPECT_FALSE(is_admissible(t, {1.0, 0.5, 0.0}, 0.5));
  EXPECT_FALSE(is_admissible(t, {1.0, 0.0, 0.5}, 0.0));
  EXPECT_FALSE(is_admissible(t, {0.0, 0.5, 0.5}, 0.0));
  EXPECT_FALSE(is_admissible(t, {1.0, 0.5}, 0.0));
  EXPECT_THROW(check_admissible(t, {1.0, -0.5, 0.0}, 0.0), DomainError);
}

TEST(Tree, PathRecords) {
  const RootedTree t = make_path_tree(3);
  PathRecord p;
  p.start = 0;
  p.jumps = {{0.5, 1}, {1.0, 2}, {1.75, 1}, {2.0, 0}};
  p.lifetime = 3.0;
  EXPECT_NO_THROW(validate_path(t, p));
  const auto L = local_times(p, 3);
  EXPECT_DOUBLE_EQ(L[0], 1.5);
  EXPECT_DOUBLE_EQ(L[1], 0.75);
  EXPECT_DOUBLE_EQ(L[2], 0.75);
  EXPECT_EQ(p.at(0.2), 0u);
  EXPECT_EQ(p.at(1.2), 2u);
  EXPECT_EQ(p.end(), 0u);

  const PathRecord q = print_on(p, {true, false, true});
  EXPECT_DOUBLE_EQ(q.lifetime, 2.25);
  ASSERT_EQ(q.jumps.size(), 2u);
  EXPECT_EQ(q.jumps[0].target, 2u);
  EXPECT_DOUBLE_EQ(q.jumps[0].time, 0.5);

  PathRecord bad = p;
  bad.jumps[0].target = 2;
  EXPECT_THROW(validate_path(t, bad), DomainError);
  bad = p;
  bad.jumps[1].time = 0.1;
  EXPECT_THROW(validate_path(t, bad), DomainError);
  bad = p;
  bad.lifetime = 1.9;
  EXPECT_THROW(validate_path(t, bad), DomainError);
}
