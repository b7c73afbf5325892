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
#include "wtn/ranks.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace wtn {

/// Row-major dense matrix.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    std::span<const double> data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Ordered, duplicate-free selection of 1 <= N_r < N nodes.
class NodeSubset {
public:
    NodeSubset(std::vector<std::size_t> nodes, std::size_t network_size);

    /// Every product node of the listed countries, country-major.
    static NodeSubset of_countries(std::span<const std::size_t> countries, const NodeSpace& space);

    std::span<const std::size_t> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    std::size_t network_size() const noexcept { return network_size_; }
    /// Remaining nodes in ascending order.
    std::vector<std::size_t> complement() const;

private:
    std::vector<std::size_t> nodes_;
    std::size_t network_size_;
};

struct ReducedGoogleMatrix {
    std::vector<std::size_t> nodes; ///< node id of each row/column
    Direction direction = Direction::direct;
    DenseMatrix matrix;

    std::size_t size() const noexcept { return nodes.size(); }
};

struct RegomaxOptions {
    /// Complements up to this size are factorized densely; larger ones use
    /// the Neumann series.
    std::size_t dense_threshold = 4096;
    double neumann_tol = 1e-12;
    std::size_t neumann_max_terms = 1'000'000;
};

/// G_R = G_rr + G_rs (1 - G_ss)^{-1} G_sr.
ReducedGoogleMatrix reduced_google_matrix(const GoogleMatrix& g, const NodeSubset& subset,
                                          const RegomaxOptions& options = {});

/// Stationary vector of G_R by a dense linear solve; sums to 1.
std::vector<double> reduced_pagerank(const ReducedGoogleMatrix& reduced);

enum class FriendSemantics {
    column, ///< column j holds transitions out of j: edges j -> i, weight G_R(i, j)
    row,    ///< row j holds transitions into j: edges j -> i, weight G_R(j, i)
};

struct FriendEdge {
    std::size_t source = 0; ///< node id
    std::size_t target = 0; ///< node id
    double weight = 0.0;

    friend bool operator==(const FriendEdge&, const FriendEdge&) = default;
};

struct FriendsNetwork {
    std::size_t k = 0;
    std::vector<FriendEdge> edges; ///< grouped by source in subset order, strongest first
};

/// The k strongest off-diagonal links of every node; ties go to the earlier subset position.
FriendsNetwork friends_network(const ReducedGoogleMatrix& reduced, std::size_t k = 4,
                               FriendSemantics semantics = FriendSemantics::column);

/// Header row of node labels, then one labelled row per node.
void write_reduced_matrix(std::ostream& out, const ReducedGoogleMatrix& reduced,
                          const CountryRegistry& registry, const NodeSpace& space);

/// `source,target,weight` edge list.
void write_friends(std::ostream& out, const FriendsNetwork& network,
                   const CountryRegistry& registry, const NodeSpace& space);

} // namespace wtn
