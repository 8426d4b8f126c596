/*
 * Copyright 2026 The nncui Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <random>

#include "gtest/gtest.h"
#include "nncui/distance.h"
#include "nncui/errors.h"
#include "test_support.h"

namespace nncui {
namespace {

using testing_support::FloydWarshall;
using testing_support::GraphFromEdges;
using testing_support::kInf;

KnowledgeGraph WorkedExampleGraph() {
  // veins is_a blood vessels; brain stem ... head through two intermediates,
  // with edge directions mixed so the path has to go up and down.
  return GraphFromEdges({{"C0042449", "C0005847"},
                         {"C0006121", "C0006104"},
                         {"C0926510", "C0006104"},
                         {"C0926510", "C0018670"}});
}

TEST(ShortestPathLength, DirectlyConnected) {
  EXPECT_EQ(ShortestPathLength(WorkedExampleGraph(), "C0042449", "C0005847"),
            Distance::Hops(1));
}

TEST(ShortestPathLength, ThreeHopsAcrossDirections) {
  EXPECT_EQ(ShortestPathLength(WorkedExampleGraph(), "C0006121", "C0018670"),
            Distance::Hops(3));
}

TEST(ShortestPathLength, Identity) {
  EXPECT_EQ(ShortestPathLength(WorkedExampleGraph(), "C0006121", "C0006121"),
            Distance::Hops(0));
}

TEST(ShortestPathLength, DisjointComponents) {
  const auto d = ShortestPathLength(WorkedExampleGraph(), "C0042449", "C0018670");
  EXPECT_FALSE(d.reachable());
  EXPECT_EQ(d, Distance::Unreachable());
  EXPECT_FALSE(d.Within(1000));
  EXPECT_EQ(d.ToString(), "unreachable");
}

TEST(ShortestPathLength, UnknownConcept) {
  try {
    ShortestPathLength(WorkedExampleGraph(), "C0042449", "C9999999");
    FAIL();
  } catch (const LookupError& e) {
    EXPECT_EQ(e.concept_id(), "C9999999");
  }
}

TEST(BoundedNeighborhood, RadiusZeroIsEmpty) {
  const auto g = WorkedExampleGraph();
  for (const auto& name : g.names()) {
    EXPECT_TRUE(BoundedNeighborhood(g, name, 0).empty());
  }
}

TEST(BoundedNeighborhood, DirectPair) {
  EXPECT_EQ(BoundedNeighborhood(WorkedExampleGraph(), "C0042449", 1),
            (std::vector<std::string>{"C0005847"}));
}

TEST(BoundedNeighborhood, ChainRadiusTwo) {
  // d-b, b-a, a-c
  const auto g = GraphFromEdges({{"d", "b"}, {"b", "a"}, {"a", "c"}});
  const FloydWarshall fw(g);
  std::vector<std::string> expected;
  for (const auto& y : g.names()) {
    const int d = fw.Dist("d", y);
    if (d > 0 && d <= 2) expected.push_back(y);
  }
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(expected, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(BoundedNeighborhood(g, "d", 2), expected);
}

TEST(BoundedNeighborhood, UnknownConcept) {
  EXPECT_THROW(BoundedNeighborhood(WorkedExampleGraph(), "nope", 1), LookupError);
}

TEST(DistanceProperties, AgreesWithFloydWarshall) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 49;
    const auto g = testing_support::RandomGraph(rng, n, 1.5 / static_cast<double>(n));
    const FloydWarshall fw(g);
    BfsWorkspace bfs(g);
    for (NodeId x = 0; x < n; ++x) {
      for (NodeId y = 0; y < n; ++y) {
        const int expected = fw.Dist(g.name(x), g.name(y));
        const Distance got = bfs.ShortestPath(x, y);
        if (expected == kInf) {
          EXPECT_FALSE(got.reachable());
        } else {
          ASSERT_TRUE(got.reachable());
          EXPECT_EQ(static_cast<int>(got.hops()), expected);
        }
      }
    }
  }
}

TEST(DistanceProperties, NeighborhoodMatchesOracleSymmetricAndMonotone) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + trial;
    const auto g = testing_support::RandomGraph(rng, n, 2.0 / static_cast<double>(n));
    const FloydWarshall fw(g);
    BfsWorkspace bfs(g);
    for (std::uint32_t r = 0; r <= 4; ++r) {
      for (NodeId x = 0; x < n; ++x) {
        const auto hood = bfs.Neighborhood(x, r);
        EXPECT_LT(hood.size(), g.num_nodes());
        EXPECT_FALSE(std::binary_search(hood.begin(), hood.end(), x));
        std::vector<NodeId> expected;
        for (NodeId y = 0; y < n; ++y) {
          const int d = fw.Dist(g.name(x), g.name(y));
          if (d > 0 && d <= static_cast<int>(r)) expected.push_back(y);
        }
        EXPECT_EQ(hood, expected);
        const auto wider = bfs.Neighborhood(x, r + 1);
        EXPECT_TRUE(std::includes(wider.begin(), wider.end(), hood.begin(), hood.end()));
        for (NodeId y : hood) {
          const auto back = bfs.Neighborhood(y, r);
          EXPECT_TRUE(std::binary_search(back.begin(), back.end(), x));
        }
      }
    }
  }
}

TEST(DistanceProperties, TriangleInequality) {
  std::mt19937 rng(29);
  const auto g = testing_support::RandomGraph(rng, 25, 0.12);
  BfsWorkspace bfs(g);
  for (NodeId x = 0; x < 25; ++x)
    for (NodeId y = 0; y < 25; ++y)
      for (NodeId z = 0; z < 25; ++z) {
        const Distance xy = bfs.ShortestPath(x, y);
        const Distance yz = bfs.ShortestPath(y, z);
        const Distance xz = bfs.ShortestPath(x, z);
        EXPECT_EQ(xy, bfs.ShortestPath(y, x));
        if (xy.reachable() && yz.reachable()) {
          ASSERT_TRUE(xz.reachable());
          EXPECT_LE(xz.hops(), xy.hops() + yz.hops());
        }
      }
}

}  // namespace
}  // namespace nncui
