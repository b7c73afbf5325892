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
#include "wtn/gmatrix.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <numeric>
#include <sstream>

using namespace wtn;

namespace {

std::shared_ptr<const CountryRegistry> registry_of(std::size_t n) {
    std::vector<std::string> codes;
    for (std::size_t i = 0; i < n; ++i) codes.push_back(std::string(1, static_cast<char>('A' + i)));
    return std::make_shared<const CountryRegistry>(std::move(codes));
}

// 2 countries, 1 product, B imports 7 from A.
MoneyMatrix single_link() { return MoneyMatrix(registry_of(2), 2018, 1, {{0, 1, 0, 7.0}}); }

double sum(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0); }

} // namespace

TEST_SUITE("gmatrix") {

TEST_CASE("node layout is product-major") {
    const NodeSpace space(3, 2);
    CHECK(space.size() == 6);
    CHECK(space.node(2, 1) == 5);
    CHECK(space.country_of(5) == 2);
    CHECK(space.product_of(5) == 1);
}

TEST_CASE("single link normalization, both directions") {
    const auto money = single_link();
    const auto direct = build_stochastic(money, Direction::direct);
    CHECK(direct.stored(1, 0) == 1.0);
    CHECK_FALSE(direct.is_dangling(0));
    CHECK(direct.is_dangling(1));

    const auto inverted = build_stochastic(money, Direction::inverted);
    CHECK(inverted.stored(0, 1) == 1.0);
    CHECK(inverted.is_dangling(0));
    CHECK_FALSE(inverted.is_dangling(1));
}

TEST_CASE("proportional column normalization") {
    const MoneyMatrix money(registry_of(3), 2018, 1, {{0, 1, 0, 3.0}, {0, 2, 0, 1.0}});
    const auto s = build_stochastic(money, Direction::direct);
    CHECK(s.stored(1, 0) == 0.75);
    CHECK(s.stored(2, 0) == 0.25);
    CHECK(s.dangling_count() == 2);
}

TEST_CASE("links stay inside their product block") {
    const MoneyMatrix money(registry_of(2), 2018, 2, {{0, 1, 0, 1.0}, {1, 0, 1, 2.0}});
    const auto s = build_stochastic(money, Direction::direct);
    const NodeSpace space(2, 2);
    CHECK(s.stored(space.node(1, 0), space.node(0, 0)) == 1.0);
    CHECK(s.stored(space.node(0, 1), space.node(1, 1)) == 1.0);
    CHECK(s.row_idx().size() == 2);
}

TEST_CASE("empty network is rejected") {
    const MoneyMatrix empty(registry_of(2), 2018, 1, {});
    CHECK_THROWS_AS(build_stochastic(empty, Direction::direct), Error);
    CHECK_THROWS_AS(build_personalization(empty), Error);
}

TEST_CASE("personalization weights products by volume") {
    SUBCASE("single product is uniform") {
        const auto v = build_personalization(single_link());
        CHECK(v.values == std::vector<double>{0.5, 0.5});
    }
    SUBCASE("volumes 75 and 25 over two countries") {
        // V_p / (N_c V): 75/200 and 25/200.
        const MoneyMatrix money(registry_of(2), 2018, 2, {{0, 1, 0, 75.0}, {1, 0, 1, 25.0}});
        const auto v = build_personalization(money);
        CHECK(v.values == std::vector<double>{0.375, 0.375, 0.125, 0.125});
    }
    SUBCASE("zero-volume product gets no teleportation") {
        const MoneyMatrix money(registry_of(2), 2018, 3, {{0, 1, 0, 1.0}, {2, 0, 1, 1.0}});
        const auto v = build_personalization(money);
        CHECK(v.values[2] == 0.0);
        CHECK(v.values[3] == 0.0);
        CHECK(sum(v.values) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("volume-by-country splits a product by node turnover") {
        const MoneyMatrix money(registry_of(3), 2018, 1, {{0, 1, 0, 3.0}, {0, 2, 0, 1.0}});
        const auto v = build_personalization(money, PersonalizationMode::volume_by_country);
        CHECK(v.values == std::vector<double>{0.5, 0.375, 0.125});
    }
}

TEST_CASE("make_google validates damping") {
    const auto money = single_link();
    auto make = [&](double alpha) {
        return make_google(build_stochastic(money, Direction::direct), build_personalization(money),
                           alpha);
    };
    CHECK_NOTHROW(make(0.5));
    CHECK_THROWS_AS(make(1.0), Error);
    CHECK_THROWS_AS(make(0.0), Error);
    CHECK_THROWS_AS(make(-0.1), Error);
    CHECK_THROWS_AS(make_google(build_stochastic(money, Direction::direct),
                                PersonalizationVector{{1.0}}, 0.5),
                    Error);
}

TEST_CASE("uniform S and uniform v give the uniform matrix") {
    // An all-dangling S is the uniform matrix.
    const StochasticMatrix uniform(NodeSpace(2, 2), std::vector<std::size_t>(5, 0), {}, {},
                                   std::vector<std::uint8_t>(4, 1));
    const auto g = make_google(uniform, PersonalizationVector{{0.25, 0.25, 0.25, 0.25}}, 0.5);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(g.entry(i, j) == 0.25);
}

TEST_CASE("apply") {
    const std::size_t n = 4;
    const StochasticMatrix uniform(NodeSpace(4, 1), std::vector<std::size_t>(n + 1, 0), {}, {},
                                   std::vector<std::uint8_t>(n, 1));
    const std::vector<double> vv = {0.1, 0.2, 0.3, 0.4};
    const auto g = make_google(uniform, PersonalizationVector{vv}, 0.5);

    SUBCASE("x = v gives 0.5/N + 0.5 v") {
        const auto y = wtn::apply(g, vv);
        for (std::size_t i = 0; i < n; ++i) CHECK(y[i] == doctest::Approx(0.5 / n + 0.5 * vv[i]));
    }
    SUBCASE("zero maps to zero") {
        const std::vector<double> zero(n, 0.0);
        CHECK(wtn::apply(g, zero) == zero);
    }
    SUBCASE("dimension mismatch") {
        const std::vector<double> x(3, 0.1);
        CHECK_THROWS_AS(wtn::apply(g, x), Error);
    }
}

TEST_CASE("apply on a 3-node chain matches a dense multiply") {
    // A -> B -> C, C dangling.
    const MoneyMatrix money(registry_of(3), 2018, 1, {{0, 1, 0, 2.0}, {0, 2, 1, 5.0}});
    const auto g = build_google(money, Direction::direct);
    const auto dense = testkit::dense_google(money, Direction::direct, 0.5);
    const std::vector<double> x = {0.2, 0.5, 0.3};
    const auto y = wtn::apply(g, x);
    for (std::size_t i = 0; i < 3; ++i) {
        double expected = 0.0;
        for (std::size_t j = 0; j < 3; ++j) expected += dense[i][j] * x[j];
        CHECK(std::abs(y[i] - expected) < 1e-15);
    }
    CHECK(std::abs(sum(y) - 1.0) < 1e-12);
}

TEST_CASE("random fixtures: stochasticity, duality, mass, personalization") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        CAPTURE(seed);
        testkit::SyntheticSpec spec{seed, 3 + seed % 7, 1 + seed % 4, 0.2 + 0.02 * (seed % 30)};
        const auto money = testkit::synthetic_money(spec);

        const auto inv = build_stochastic(money, Direction::inverted);
        CHECK(inv == build_stochastic(money.transposed(), Direction::direct));
        const auto v = build_personalization(money).values;
        const auto vt = build_personalization(money.transposed()).values;
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(v[i] - vt[i]) < 1e-15);

        for (auto d : {Direction::direct, Direction::inverted}) {
            const auto g = build_google(money, d);
            const auto dense = testkit::densify_by_apply(g);
            const auto oracle = testkit::dense_google(money, d, 0.5);
            double worst_sum = 0.0, worst_entry = 0.0;
            for (std::size_t j = 0; j < g.size(); ++j) {
                double col = 0.0;
                for (std::size_t i = 0; i < g.size(); ++i) {
                    col += dense[i][j];
                    worst_entry = std::max(worst_entry, std::abs(dense[i][j] - oracle[i][j]));
                }
                worst_sum = std::max(worst_sum, std::abs(col - 1.0));
            }
            CHECK(worst_sum < 1e-12);
            CHECK(worst_entry < 1e-15);

            std::vector<double> x(g.size());
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = static_cast<double>((i * 7 + seed) % 5);
            CHECK(std::abs(sum(wtn::apply(g, x)) - sum(x)) < 1e-12 * std::max(1.0, sum(x)));
        }
    }
}

TEST_CASE("matrix dump") {
    const auto g = build_google(single_link(), Direction::direct);
    std::ostringstream triplets, sidecar;
    write_triplets(triplets, g);
    write_sidecar(sidecar, g);
    CHECK(triplets.str() == "row,col,value\n1,0,1\n");
    CHECK(sidecar.str() == "alpha=0.5\nn=2\ndirection=direct\ndangling=1\nv=0.5;0.5\n");
}

} // TEST_SUITE
