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

#pragma once

#include "wtn/gmatrix.hpp"
#include "wtn/ingest.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace wtn {

enum class ProbabilityKind { pagerank, cheirank, import_volume, export_volume };

/// Distribution over nodes, countries or products, depending on context.
struct ProbabilityVector {
    std::vector<double> values;
    ProbabilityKind kind = ProbabilityKind::pagerank;

    std::size_t size() const noexcept { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
};

struct SolverReport {
    std::size_t iterations = 0;
    double residual = 0.0; ///< L1 distance between the last two iterates
    bool converged = false;
};

struct SolverOptions {
    double tol = 1e-12;
    std::size_t max_iter = 1000;
};

struct RankResult {
    ProbabilityVector vector;
    SolverReport report;
};

/// Power iteration from the uniform vector, renormalized after every step.
/// A run that exhausts max_iter returns converged = false rather than throwing.
RankResult pagerank(const GoogleMatrix& g, const SolverOptions& options = {});

/// K[i] = 1-based position of entity i in descending order of p.
/// Equal probabilities are ordered by ascending tie key.
std::vector<std::size_t> order_indexes(std::span<const double> p,
                                       std::span<const std::size_t> tie_keys);
/// Ties broken by ascending label.
std::vector<std::size_t> order_indexes(std::span<const double> p,
                                       std::span<const std::string> tie_labels);
/// Ties broken by entity position.
std::vector<std::size_t> order_indexes(std::span<const double> p);

/// Node ordering with ties broken by (country code, product index).
std::vector<std::size_t> order_node_indexes(std::span<const double> p, const NodeSpace& space);

/// Entity ids listed by rank: result[K-1] = entity.
std::vector<std::size_t> invert_indexes(std::span<const std::size_t> k);

ProbabilityVector aggregate_country(const ProbabilityVector& nodes, const NodeSpace& space);
ProbabilityVector aggregate_product(const ProbabilityVector& nodes, const NodeSpace& space);

struct VolumeProbabilities {
    ProbabilityVector imports; ///< P-hat over nodes
    ProbabilityVector exports; ///< P-hat-star over nodes
};

VolumeProbabilities volume_probabilities(const MoneyMatrix& money);

struct RankOptions {
    double alpha = kDefaultAlpha;
    PersonalizationMode personalization = PersonalizationMode::uniform_by_product;
    SolverOptions solver;
};

/// Node-level PageRank, CheiRank and volume probabilities of one network.
struct NetworkRanking {
    NodeSpace space;
    ProbabilityVector pagerank;
    ProbabilityVector cheirank;
    ProbabilityVector import_volume;
    ProbabilityVector export_volume;
    SolverReport pagerank_report;
    SolverReport cheirank_report;

    bool converged() const noexcept {
        return pagerank_report.converged && cheirank_report.converged;
    }
};

/// G and G* are solved concurrently; the results do not depend on scheduling.
NetworkRanking rank_network(const MoneyMatrix& money, const RankOptions& options = {});

struct RankTable {
    std::vector<std::string> entities;
    std::vector<double> p, pstar, phat, phatstar;
    std::vector<std::size_t> k, kstar, khat, khatstar;

    std::size_t size() const noexcept { return entities.size(); }
};

RankTable country_rank_table(const NetworkRanking& ranking, const CountryRegistry& registry);
/// Product entities are labelled by their index.
RankTable product_rank_table(const NetworkRanking& ranking);
/// Node entities are labelled `CODE:product`.
RankTable node_rank_table(const NetworkRanking& ranking, const CountryRegistry& registry);

/// `entity,P,Pstar,K,Kstar,Phat,Phatstar,Khat,Khatstar`, one row per entity.
void write_rank_table(std::ostream& out, const RankTable& table);

/// Top-`top` entities under each of K, K*, K-hat, K-hat*: `rank,pagerank,cheirank,importrank,exportrank`.
void write_top_table(std::ostream& out, const RankTable& table, std::size_t top);

} // namespace wtn
