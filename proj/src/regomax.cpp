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

#include "wtn/regomax.hpp"

#include "wtn/error.hpp"
#include "wtn/format.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>

namespace wtn {

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Dense column j of G over all N rows.
void google_column(const GoogleMatrix& g, std::size_t j, std::vector<double>& col) {
    const auto n = g.size();
    const auto& s = g.stochastic();
    const double alpha = g.alpha();
    const double uniform = s.is_dangling(j) ? alpha / static_cast<double>(n) : 0.0;
    const auto v = g.personalization();
    for (std::size_t i = 0; i < n; ++i) col[i] = (1.0 - alpha) * v[i] + uniform;
    for (auto k = s.col_ptr()[j]; k < s.col_ptr()[j + 1]; ++k)
        col[s.row_idx()[k]] += alpha * s.values()[k];
}

Eigen::MatrixXd reduce_dense(const GoogleMatrix& g, std::span<const std::size_t> r,
                             std::span<const std::size_t> s) {
    const auto n = g.size();
    const auto nr = static_cast<Eigen::Index>(r.size());
    const auto ns = static_cast<Eigen::Index>(s.size());
    std::vector<std::size_t> pos_r(n, kNone), pos_s(n, kNone);
    for (std::size_t a = 0; a < r.size(); ++a) pos_r[r[a]] = a;
    for (std::size_t a = 0; a < s.size(); ++a) pos_s[s[a]] = a;

    Eigen::MatrixXd g_rr(nr, nr), g_rs(nr, ns), g_sr(ns, nr);
    Eigen::MatrixXd one_minus_g_ss = Eigen::MatrixXd::Identity(ns, ns);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) {
        google_column(g, j, col);
        const bool in_r = pos_r[j] != kNone;
        const auto cj = static_cast<Eigen::Index>(in_r ? pos_r[j] : pos_s[j]);
        for (std::size_t i = 0; i < n; ++i) {
            const bool row_r = pos_r[i] != kNone;
            const auto ci = static_cast<Eigen::Index>(row_r ? pos_r[i] : pos_s[i]);
            if (in_r) {
                (row_r ? g_rr(ci, cj) : g_sr(ci, cj)) = col[i];
            } else if (row_r) {
                g_rs(ci, cj) = col[i];
            } else {
                one_minus_g_ss(ci, cj) -= col[i];
            }
        }
    }

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(one_minus_g_ss);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) throw Error("1 - G_ss is singular (rcond " + format_double(rcond) + ")");
    const Eigen::MatrixXd paths = lu.solve(g_sr);
    return g_rr + g_rs * paths;
}

Eigen::MatrixXd reduce_neumann(const GoogleMatrix& g, std::span<const std::size_t> r,
                               std::span<const std::size_t> s, const RegomaxOptions& options) {
    const auto n = g.size();
    const auto nr = static_cast<Eigen::Index>(r.size());
    Eigen::MatrixXd out(nr, nr);
    std::vector<double> col(n), term(n), next(n), acc(n);

    for (Eigen::Index a = 0; a < nr; ++a) {
        google_column(g, r[static_cast<std::size_t>(a)], col);
        // term = G_sr column, supported on s only.
        std::fill(term.begin(), term.end(), 0.0);
        for (auto i : s) term[i] = col[i];
        acc = term;
        bool converged = false;
        for (std::size_t m = 0; m < options.neumann_max_terms; ++m) {
            wtn::apply(g, term, next);
            double norm = 0.0;
            for (auto i : r) next[i] = 0.0;
            for (auto i : s) {
                acc[i] += next[i];
                norm += std::abs(next[i]);
            }
            term.swap(next);
            if (norm < options.neumann_tol) {
                converged = true;
                break;
            }
        }
        if (!converged) throw ConvergenceError("Neumann series for (1 - G_ss)^-1 did not converge");
        // G_rs acc, read off the r rows of G applied to acc restricted to s.
        wtn::apply(g, acc, next);
        for (Eigen::Index b = 0; b < nr; ++b) {
            const auto i = r[static_cast<std::size_t>(b)];
            out(b, a) = col[i] + next[i];
        }
    }
    return out;
}

} // namespace

NodeSubset::NodeSubset(std::vector<std::size_t> nodes, std::size_t network_size)
    : nodes_(std::move(nodes)), network_size_(network_size) {
    if (nodes_.empty()) throw Error("node subset is empty");
    if (nodes_.size() >= network_size_) throw Error("node subset must leave a non-empty complement");
    std::vector<std::uint8_t> seen(network_size_, 0);
    for (auto node : nodes_) {
        if (node >= network_size_) throw Error("node id out of range: " + std::to_string(node));
        if (seen[node]++) throw Error("duplicate node in subset: " + std::to_string(node));
    }
}

NodeSubset NodeSubset::of_countries(std::span<const std::size_t> countries,
                                    const NodeSpace& space) {
    std::vector<std::size_t> nodes;
    for (auto c : countries) {
        if (c >= space.countries()) throw Error("country index out of range");
        for (std::size_t p = 0; p < space.products(); ++p) nodes.push_back(space.node(c, p));
    }
    return NodeSubset(std::move(nodes), space.size());
}

std::vector<std::size_t> NodeSubset::complement() const {
    std::vector<std::uint8_t> in(network_size_, 0);
    for (auto node : nodes_) in[node] = 1;
    std::vector<std::size_t> rest;
    rest.reserve(network_size_ - nodes_.size());
    for (std::size_t i = 0; i < network_size_; ++i)
        if (!in[i]) rest.push_back(i);
    return rest;
}

ReducedGoogleMatrix reduced_google_matrix(const GoogleMatrix& g, const NodeSubset& subset,
                                          const RegomaxOptions& options) {
    if (subset.network_size() != g.size()) throw Error("subset does not match the network size");
    const auto r = subset.nodes();
    const auto s = subset.complement();
    const Eigen::MatrixXd reduced = s.size() <= options.dense_threshold
                                        ? reduce_dense(g, r, s)
                                        : reduce_neumann(g, r, s, options);

    ReducedGoogleMatrix out{std::vector<std::size_t>(r.begin(), r.end()), g.direction(),
                            DenseMatrix(r.size(), r.size())};
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j)
            out.matrix(i, j) = reduced(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return out;
}

std::vector<double> reduced_pagerank(const ReducedGoogleMatrix& reduced) {
    const auto n = static_cast<Eigen::Index>(reduced.size());
    // (1 - G_R) p = 0 with the last equation replaced by sum(p) = 1.
    Eigen::MatrixXd a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            a(i, j) = (i == j ? 1.0 : 0.0) -
                      reduced.matrix(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    a.row(n - 1).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs(n - 1) = 1.0;
    const Eigen::VectorXd p = a.partialPivLu().solve(rhs);
    return std::vector<double>(p.data(), p.data() + n);
}

FriendsNetwork friends_network(const ReducedGoogleMatrix& reduced, std::size_t k,
                               FriendSemantics semantics) {
    const auto n = reduced.size();
    if (k < 1 || k + 1 > n)
        throw Error("k must lie in [1, N_r - 1] = [1, " + std::to_string(n > 0 ? n - 1 : 0) + "]");
    auto weight = [&](std::size_t from, std::size_t to) {
        return semantics == FriendSemantics::column ? reduced.matrix(to, from)
                                                    : reduced.matrix(from, to);
    };
    FriendsNetwork net{k, {}};
    net.edges.reserve(n * k);
    std::vector<std::size_t> candidates;
    for (std::size_t j = 0; j < n; ++j) {
        candidates.clear();
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) candidates.push_back(i);
        std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
            return weight(j, a) > weight(j, b);
        });
        for (std::size_t m = 0; m < k; ++m) {
            const auto i = candidates[m];
            net.edges.push_back({reduced.nodes[j], reduced.nodes[i], weight(j, i)});
        }
    }
    return net;
}

void write_reduced_matrix(std::ostream& out, const ReducedGoogleMatrix& reduced,
                          const CountryRegistry& registry, const NodeSpace& space) {
    out << "node";
    for (auto node : reduced.nodes) out << ',' << node_label(registry, space, node);
    out << '\n';
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        out << node_label(registry, space, reduced.nodes[i]);
        for (std::size_t j = 0; j < reduced.size(); ++j)
            out << ',' << format_double(reduced.matrix(i, j));
        out << '\n';
    }
}

void write_friends(std::ostream& out, const FriendsNetwork& network,
                   const CountryRegistry& registry, const NodeSpace& space) {
    out << "source,target,weight\n";
    for (const auto& e : network.edges)
        out << node_label(registry, space, e.source) << ',' << node_label(registry, space, e.target)
            << ',' << format_double(e.weight) << '\n';
}

} // namespace wtn
