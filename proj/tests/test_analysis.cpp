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
#include "wtn/analysis.hpp"
#include "wtn/error.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>

using namespace wtn;

namespace {

std::shared_ptr<const CountryRegistry> registry_of(std::vector<std::string> codes) {
    return std::make_shared<const CountryRegistry>(std::move(codes));
}

} // namespace

TEST_SUITE("analysis") {

TEST_CASE("trade balance formula") {
    const std::vector<double> p = {0.2, 0.1, 0.0, 0.0};
    const std::vector<double> pstar = {0.2, 0.3, 0.5, 0.0};
    const auto b = trade_balance(p, pstar);
    CHECK(*b.values[0] == 0.0);
    CHECK(*b.values[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(*b.values[2] == 1.0);
    CHECK_FALSE(b.values[3].has_value());

    const std::vector<double> shorter = {0.1};
    CHECK_THROWS_AS(trade_balance(p, shorter), Error);
    const std::vector<double> negative = {-0.1, 0.1, 0.1, 0.1};
    CHECK_THROWS_AS(trade_balance(negative, pstar), Error);
}

TEST_CASE("balances stay within [-1, 1]") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto money = testkit::synthetic_money({seed, 8, 3, 0.25});
        for (auto source : {ProbabilitySource::gma, ProbabilitySource::iea}) {
            for (const auto& b : country_balance(money, source).values) {
                REQUIRE(b.has_value());
                CHECK(std::abs(*b) <= 1.0);
            }
        }
    }
}

TEST_CASE("one-way two-country trade: GMA and IEA agree in sign") {
    const MoneyMatrix money(registry_of({"A", "B"}), 2018, 1, {{0, 1, 0, 5.0}});
    const auto gma = country_balance(money, ProbabilitySource::gma);
    const auto iea = country_balance(money, ProbabilitySource::iea);
    CHECK(*iea.values[0] == 1.0);
    CHECK(*iea.values[1] == -1.0);
    CHECK(*gma.values[0] > 0.0);
    CHECK(*gma.values[1] < 0.0);
}

TEST_CASE("symmetric trade balances to zero") {
    const MoneyMatrix money(registry_of({"A", "B"}), 2018, 1, {{0, 1, 0, 3.0}, {0, 0, 1, 3.0}});
    for (auto source : {ProbabilitySource::gma, ProbabilitySource::iea})
        for (const auto& b : country_balance(money, source).values) CHECK(std::abs(*b) < 1e-10);
}

TEST_CASE("perturb_money") {
    const auto money = testkit::synthetic_money({4, 5, 4, 0.5});
    SUBCASE("delta = 0 is the identity") {
        CHECK(perturb_money(money, GlobalProduct{3}, 0.0) == money);
    }
    SUBCASE("global target scales one slice") {
        const auto doubled = perturb_money(money, GlobalProduct{3}, 1.0);
        for (std::size_t i = 0; i < money.entries().size(); ++i) {
            const auto& before = money.entries()[i];
            const auto& after = doubled.entries()[i];
            CHECK(after.value == (before.product == 3 ? 2.0 * before.value : before.value));
        }
    }
    SUBCASE("country target scales that country's exports of the product") {
        const auto scaled = perturb_money(money, CountryProduct{2, 3}, 0.5);
        for (std::size_t i = 0; i < money.entries().size(); ++i) {
            const auto& e = money.entries()[i];
            const bool hit = e.product == 3 && e.exporter == 2;
            CHECK(scaled.entries()[i].value == (hit ? 1.5 * e.value : e.value));
        }
        const auto by_imports =
            perturb_money(money, CountryProduct{2, 3}, 0.5, PerturbationSide::imports);
        for (std::size_t i = 0; i < money.entries().size(); ++i) {
            const auto& e = money.entries()[i];
            const bool hit = e.product == 3 && e.importer == 2;
            CHECK(by_imports.entries()[i].value == (hit ? 1.5 * e.value : e.value));
        }
    }
    SUBCASE("delta <= -1 is rejected") {
        CHECK_THROWS_AS(perturb_money(money, GlobalProduct{1}, -1.0), Error);
        CHECK_THROWS_AS(perturb_money(money, GlobalProduct{9}, 0.1), Error);
    }
}

TEST_CASE("zero-volume product has zero sensitivity") {
    // Product 1 carries no flows.
    const MoneyMatrix money(registry_of({"A", "B", "C"}), 2018, 2,
                            {{0, 1, 0, 5.0}, {0, 2, 1, 2.0}, {0, 0, 2, 1.0}});
    for (auto source : {ProbabilitySource::gma, ProbabilitySource::iea}) {
        SensitivityConfig config;
        config.target = GlobalProduct{1};
        config.source = source;
        for (const auto& d : balance_sensitivity(money, config).values) CHECK(*d == 0.0);
    }
}

TEST_CASE("single-product network is blind to a global price change") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto money = testkit::synthetic_money({seed, 7, 1, 0.4});
        for (auto source : {ProbabilitySource::gma, ProbabilitySource::iea}) {
            SensitivityConfig config;
            config.source = source;
            for (const auto& d : balance_sensitivity(money, config).values) CHECK(std::abs(*d) < 1e-8);
        }
    }
}

TEST_CASE("central differences are second order") {
    const auto money = testkit::synthetic_money({11, 6, 3, 0.5});
    SensitivityConfig config;
    config.target = GlobalProduct{1};
    config.step = 0.1;
    std::size_t checked = 0;
    for (auto source : {ProbabilitySource::gma, ProbabilitySource::iea}) {
        config.source = source;
        const auto r = richardson_check(money, config);
        for (std::size_t c = 0; c < r.ratio.size(); ++c) {
            if (std::abs(*r.d_half[c] - *r.d_quarter[c]) < 1e-8) continue;
            CAPTURE(c);
            CHECK(*r.ratio[c] >= 3.0);
            CHECK(*r.ratio[c] <= 5.0);
            ++checked;
        }
    }
    CHECK(checked > 4);
}

TEST_CASE("country-product sensitivity and reports") {
    const auto money = testkit::synthetic_money({5, 6, 2, 0.5});
    SensitivityConfig config;
    config.target = CountryProduct{0, 1};
    const auto result = balance_sensitivity(money, config);
    CHECK(result.reports.size() == 4);
    for (const auto& r : result.reports) CHECK(r.converged);
    // Pricing up a country's exports lifts its own export-side weight.
    CHECK(*result.values[0] > 0.0);

    config.rank.solver.max_iter = 2;
    CHECK_THROWS_AS(balance_sensitivity(money, config), ConvergenceError);
    config.rank.solver.max_iter = 1000;
    config.step = 0.0;
    CHECK_THROWS_AS(balance_sensitivity(money, config), Error);
    config.step = 1.0;
    CHECK_THROWS_AS(balance_sensitivity(money, config), Error);
}

} // TEST_SUITE
