/*
 * Copyright 2026 The wtn Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "testkit/testkit.hpp"
#include "wtn/error.hpp"
#include "wtn/regomax.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

using namespace wtn;

namespace {

std::shared_ptr<const CountryRegistry> registry_of(std::vector<std::string> codes) {
    return std::make_shared<const CountryRegistry>(std::move(codes));
}

double max_abs_diff(const DenseMatrix& a, const testkit::Dense& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - b[i][j]));
    return worst;
}

std::vector<std::size_t> random_subset(std::mt19937_64& gen, std::size_t n, std::size_t size) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::shuffle(all.begin(), all.end(), gen);
    all.resize(size);
    return all;
}

ReducedGoogleMatrix from_rows(std::vector<std::vector<double>> rows) {
    ReducedGoogleMatrix r;
    r.matrix = DenseMatrix(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        r.nodes.push_back(i);
        for (std::size_t j = 0; j < rows.size(); ++j) r.matrix(i, j) = rows[i][j];
    }
    return r;
}

} // namespace

TEST_SUITE("regomax") {

TEST_CASE("node subset validation") {
    CHECK_THROWS_AS(NodeSubset({}, 4), Error);
    CHECK_THROWS_AS(NodeSubset({0, 1, 2, 3}, 4), Error);
    CHECK_THROWS_AS(NodeSubset({0, 0}, 4), Error);
    CHECK_THROWS_AS(NodeSubset({4}, 4), Error);
    const NodeSubset s({3, 1}, 5);
    CHECK(s.complement() == std::vector<std::size_t>{0, 2, 4});

    const auto by_country = NodeSubset::of_countries(std::vector<std::size_t>{2, 0}, NodeSpace(3, 2));
    CHECK(std::vector<std::size_t>(by_country.nodes().begin(), by_country.nodes().end()) ==
          std::vector<std::size_t>{2, 5, 0, 3});
}

TEST_CASE("two-node network reduces to the 1x1 matrix (1)") {
    const MoneyMatrix money(registry_of({"A", "B"}), 2018, 1, {{0, 1, 0, 2.0}});
    const auto g = build_google(money, Direction::direct);
    const auto r = reduced_google_matrix(g, NodeSubset({0}, 2));
    CHECK(r.size() == 1);
    CHECK(std::abs(r.matrix(0, 0) - 1.0) < 1e-14);
    const auto oracle = testkit::dense_regomax_oracle(testkit::densify(g), std::vector<std::size_t>{0});
    CHECK(std::abs(oracle[0][0] - 1.0) < 1e-14);
}

TEST_CASE("three-node fixture matches the dense block formula") {
    const MoneyMatrix money(registry_of({"A", "B", "C"}), 2018, 1,
                            {{0, 1, 0, 2.0}, {0, 2, 1, 5.0}, {0, 0, 1, 1.0}});
    const auto g = build_google(money, Direction::direct);
    const std::vector<std::size_t> nodes = {0, 2};
    const auto r = reduced_google_matrix(g, NodeSubset(nodes, 3));
    const auto oracle = testkit::dense_regomax_oracle(testkit::dense_google(money, Direction::direct, 0.5), nodes);
    CHECK(max_abs_diff(r.matrix, oracle) < 1e-12);
}

TEST_CASE("random fixtures: oracle, stochasticity, PageRank restriction, Neumann path") {
    std::mt19937_64 gen(2024);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        CAPTURE(seed);
        const auto money = testkit::synthetic_money({seed, 3 + seed % 8, 1 + seed % 5, 0.3});
        const auto direction = seed % 2 ? Direction::direct : Direction::inverted;
        const auto g = build_google(money, direction);
        const auto n = g.size();
        const auto nr = 1 + static_cast<std::size_t>(gen() % std::min<std::size_t>(10, n - 1));
        const auto nodes = random_subset(gen, n, nr);
        const NodeSubset subset(nodes, n);

        const auto dense = reduced_google_matrix(g, subset);
        const auto oracle = testkit::dense_regomax_oracle(testkit::densify(g), nodes);
        CHECK(max_abs_diff(dense.matrix, oracle) < 1e-10);

        for (std::size_t j = 0; j < nr; ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < nr; ++i) {
                CHECK(dense.matrix(i, j) >= 0.0);
                col += dense.matrix(i, j);
            }
            CHECK(std::abs(col - 1.0) < 1e-10);
        }

        const auto full = pagerank(g).vector.values;
        std::vector<double> restricted;
        double mass = 0.0;
        for (auto node : nodes) mass += full[node];
        for (auto node : nodes) restricted.push_back(full[node] / mass);
        CHECK(testkit::l1_distance(reduced_pagerank(dense), restricted) < 1e-8);

        RegomaxOptions neumann;
        neumann.dense_threshold = 0;
        const auto series = reduced_google_matrix(g, subset, neumann);
        double worst = 0.0;
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nr; ++j)
                worst = std::max(worst, std::abs(series.matrix(i, j) - dense.matrix(i, j)));
        CHECK(worst < 1e-10);
    }
}

TEST_CASE("permuting the subset permutes G_R") {
    const auto money = testkit::synthetic_money({9, 6, 3, 0.4});
    const auto g = build_google(money, Direction::direct);
    const std::vector<std::size_t> nodes = {4, 11, 0, 7, 15};
    const std::vector<std::size_t> perm = {2, 4, 0, 3, 1};
    std::vector<std::size_t> permuted;
    for (auto p : perm) permuted.push_back(nodes[p]);
    const auto a = reduced_google_matrix(g, NodeSubset(nodes, g.size()));
    const auto b = reduced_google_matrix(g, NodeSubset(permuted, g.size()));
    for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = 0; j < perm.size(); ++j)
            CHECK(std::abs(b.matrix(i, j) - a.matrix(perm[i], perm[j])) < 1e-13);
}

TEST_CASE("friends network") {
    const auto r = from_rows({{0.2, 0.1, 0.5}, {0.7, 0.3, 0.2}, {0.1, 0.6, 0.3}});

    SUBCASE("k = 1 keeps the dominant column entry") {
        const auto net = friends_network(r, 1);
        REQUIRE(net.edges.size() == 3);
        CHECK(net.edges[0] == FriendEdge{0, 1, 0.7});
        CHECK(net.edges[1] == FriendEdge{1, 2, 0.6});
        CHECK(net.edges[2] == FriendEdge{2, 0, 0.5});
    }
    SUBCASE("k = N_r - 1 is the complete off-diagonal set") {
        const auto net = friends_network(r, 2);
        CHECK(net.edges.size() == 6);
        for (const auto& e : net.edges) CHECK(e.source != e.target);
    }
    SUBCASE("row semantics read rows") {
        const auto net = friends_network(r, 1, FriendSemantics::row);
        CHECK(net.edges[0] == FriendEdge{0, 2, 0.5});
        CHECK(net.edges[1] == FriendEdge{1, 0, 0.7});
    }
    SUBCASE("ties go to the earlier node") {
        const auto tied = from_rows({{0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}, {0.5, 0.5, 0.0}});
        const auto net = friends_network(tied, 1);
        CHECK(net.edges[0].target == 1);
        CHECK(net.edges[1].target == 0);
        CHECK(net.edges[2].target == 0);
    }
    SUBCASE("k out of range") {
        CHECK_THROWS_AS(friends_network(r, 0), Error);
        CHECK_THROWS_AS(friends_network(r, 3), Error);
    }
}

TEST_CASE("exports are labelled") {
    const MoneyMatrix money(registry_of({"A", "B", "C"}), 2018, 2,
                            {{0, 1, 0, 2.0}, {1, 2, 1, 5.0}, {0, 0, 2, 1.0}});
    const auto g = build_google(money, Direction::direct);
    const NodeSpace space(money);
    const auto r = reduced_google_matrix(g, NodeSubset::of_countries(std::vector<std::size_t>{0, 1}, space));
    std::ostringstream matrix, edges;
    write_reduced_matrix(matrix, r, money.registry(), space);
    write_friends(edges, friends_network(r, 1), money.registry(), space);
    CHECK(matrix.str().rfind("node,A:0,A:1,B:0,B:1\nA:0,", 0) == 0);
    CHECK(edges.str().rfind("source,target,weight\nA:0,", 0) == 0);
}

} // TEST_SUITE
