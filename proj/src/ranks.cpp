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

#include "wtn/ranks.hpp"

#include "wtn/error.hpp"
#include "wtn/format.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <numeric>
#include <ostream>

namespace wtn {

namespace {

template <typename Less>
std::vector<std::size_t> ranks_from_order(std::size_t n, Less tie_less, std::span<const double> p) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (p[a] != p[b]) return p[a] > p[b];
        return tie_less(a, b);
    });
    std::vector<std::size_t> k(n);
    for (std::size_t pos = 0; pos < n; ++pos) k[order[pos]] = pos + 1;
    return k;
}

RankTable make_table(std::vector<std::string> entities, const ProbabilityVector& p,
                     const ProbabilityVector& pstar, const ProbabilityVector& phat,
                     const ProbabilityVector& phatstar,
                     const std::function<std::vector<std::size_t>(std::span<const double>)>& order) {
    RankTable t;
    t.entities = std::move(entities);
    t.p = p.values;
    t.pstar = pstar.values;
    t.phat = phat.values;
    t.phatstar = phatstar.values;
    t.k = order(t.p);
    t.kstar = order(t.pstar);
    t.khat = order(t.phat);
    t.khatstar = order(t.phatstar);
    return t;
}

} // namespace

RankResult pagerank(const GoogleMatrix& g, const SolverOptions& options) {
    if (!(options.tol > 0.0)) throw Error("pagerank tolerance must be positive");
    const auto n = g.size();
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    std::vector<double> y(n);

    SolverReport report;
    for (std::size_t it = 1; it <= options.max_iter; ++it) {
        wtn::apply(g, x, y);
        double sum = 0.0;
        for (double v : y) sum += v;
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] /= sum;
            residual += std::abs(y[i] - x[i]);
        }
        x.swap(y);
        report.iterations = it;
        report.residual = residual;
        if (residual < options.tol) {
            report.converged = true;
            break;
        }
    }
    const auto kind = g.direction() == Direction::direct ? ProbabilityKind::pagerank
                                                         : ProbabilityKind::cheirank;
    return {ProbabilityVector{std::move(x), kind}, report};
}

std::vector<std::size_t> order_indexes(std::span<const double> p,
                                       std::span<const std::size_t> tie_keys) {
    if (tie_keys.size() != p.size()) throw Error("order_indexes: tie key count mismatch");
    return ranks_from_order(
        p.size(), [&](std::size_t a, std::size_t b) { return tie_keys[a] < tie_keys[b]; }, p);
}

std::vector<std::size_t> order_indexes(std::span<const double> p,
                                       std::span<const std::string> tie_labels) {
    if (tie_labels.size() != p.size()) throw Error("order_indexes: tie label count mismatch");
    return ranks_from_order(
        p.size(),
        [&](std::size_t a, std::size_t b) {
            if (tie_labels[a] != tie_labels[b]) return tie_labels[a] < tie_labels[b];
            return a < b;
        },
        p);
}

std::vector<std::size_t> order_indexes(std::span<const double> p) {
    return ranks_from_order(p.size(), std::less<std::size_t>{}, p);
}

std::vector<std::size_t> order_node_indexes(std::span<const double> p, const NodeSpace& space) {
    if (p.size() != space.size()) throw Error("order_node_indexes: dimension mismatch");
    // Registry indexes are alphabetical, so (country, product) order is (code, product) order.
    std::vector<std::size_t> keys(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        keys[i] = space.country_of(i) * space.products() + space.product_of(i);
    return order_indexes(p, keys);
}

std::vector<std::size_t> invert_indexes(std::span<const std::size_t> k) {
    std::vector<std::size_t> entity(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) entity.at(k[i] - 1) = i;
    return entity;
}

ProbabilityVector aggregate_country(const ProbabilityVector& nodes, const NodeSpace& space) {
    if (nodes.size() != space.size()) throw Error("aggregate_country: dimension mismatch");
    ProbabilityVector out{std::vector<double>(space.countries(), 0.0), nodes.kind};
    for (std::size_t p = 0; p < space.products(); ++p)
        for (std::size_t c = 0; c < space.countries(); ++c)
            out.values[c] += nodes.values[space.node(c, p)];
    return out;
}

ProbabilityVector aggregate_product(const ProbabilityVector& nodes, const NodeSpace& space) {
    if (nodes.size() != space.size()) throw Error("aggregate_product: dimension mismatch");
    ProbabilityVector out{std::vector<double>(space.products(), 0.0), nodes.kind};
    for (std::size_t p = 0; p < space.products(); ++p)
        for (std::size_t c = 0; c < space.countries(); ++c)
            out.values[p] += nodes.values[space.node(c, p)];
    return out;
}

VolumeProbabilities volume_probabilities(const MoneyMatrix& money) {
    const double total = money.total_volume();
    if (total <= 0.0) throw Error("money matrix has no flows: volume probabilities undefined");
    const NodeSpace space(money);
    VolumeProbabilities out{{std::vector<double>(space.size(), 0.0), ProbabilityKind::import_volume},
                            {std::vector<double>(space.size(), 0.0), ProbabilityKind::export_volume}};
    for (const auto& e : money.entries()) {
        out.imports.values[space.node(e.importer, e.product)] += e.value;
        out.exports.values[space.node(e.exporter, e.product)] += e.value;
    }
    for (auto& x : out.imports.values) x /= total;
    for (auto& x : out.exports.values) x /= total;
    return out;
}

NetworkRanking rank_network(const MoneyMatrix& money, const RankOptions& options) {
    const auto v = build_personalization(money, options.personalization);
    auto solve = [&](Direction d) {
        return pagerank(make_google(build_stochastic(money, d), v, options.alpha, d),
                        options.solver);
    };
    auto cheirank = std::async(std::launch::async, solve, Direction::inverted);
    auto direct = solve(Direction::direct);
    auto inverted = cheirank.get();
    auto volumes = volume_probabilities(money);

    return NetworkRanking{NodeSpace(money),
                          std::move(direct.vector),
                          std::move(inverted.vector),
                          std::move(volumes.imports),
                          std::move(volumes.exports),
                          direct.report,
                          inverted.report};
}

RankTable country_rank_table(const NetworkRanking& r, const CountryRegistry& registry) {
    if (registry.size() != r.space.countries()) throw Error("registry does not match ranking");
    return make_table(registry.codes(), aggregate_country(r.pagerank, r.space),
                      aggregate_country(r.cheirank, r.space),
                      aggregate_country(r.import_volume, r.space),
                      aggregate_country(r.export_volume, r.space),
                      [](std::span<const double> p) { return order_indexes(p); });
}

RankTable product_rank_table(const NetworkRanking& r) {
    std::vector<std::string> labels;
    for (std::size_t p = 0; p < r.space.products(); ++p) labels.push_back(std::to_string(p));
    return make_table(std::move(labels), aggregate_product(r.pagerank, r.space),
                      aggregate_product(r.cheirank, r.space),
                      aggregate_product(r.import_volume, r.space),
                      aggregate_product(r.export_volume, r.space),
                      [](std::span<const double> p) { return order_indexes(p); });
}

RankTable node_rank_table(const NetworkRanking& r, const CountryRegistry& registry) {
    if (registry.size() != r.space.countries()) throw Error("registry does not match ranking");
    std::vector<std::string> labels(r.space.size());
    for (std::size_t i = 0; i < labels.size(); ++i)
        labels[i] = node_label(registry, r.space, i);
    const auto space = r.space;
    return make_table(std::move(labels), r.pagerank, r.cheirank, r.import_volume, r.export_volume,
                      [space](std::span<const double> p) { return order_node_indexes(p, space); });
}

void write_rank_table(std::ostream& out, const RankTable& t) {
    out << "entity,P,Pstar,K,Kstar,Phat,Phatstar,Khat,Khatstar\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        out << t.entities[i] << ',' << format_double(t.p[i]) << ',' << format_double(t.pstar[i])
            << ',' << t.k[i] << ',' << t.kstar[i] << ',' << format_double(t.phat[i]) << ','
            << format_double(t.phatstar[i]) << ',' << t.khat[i] << ',' << t.khatstar[i] << '\n';
    }
}

void write_top_table(std::ostream& out, const RankTable& t, std::size_t top) {
    const auto by_k = invert_indexes(t.k);
    const auto by_kstar = invert_indexes(t.kstar);
    const auto by_khat = invert_indexes(t.khat);
    const auto by_khatstar = invert_indexes(t.khatstar);
    out << "rank,pagerank,cheirank,importrank,exportrank\n";
    for (std::size_t r = 0; r < std::min(top, t.size()); ++r) {
        out << r + 1 << ',' << t.entities[by_k[r]] << ',' << t.entities[by_kstar[r]] << ','
            << t.entities[by_khat[r]] << ',' << t.entities[by_khatstar[r]] << '\n';
    }
}

} // namespace wtn
