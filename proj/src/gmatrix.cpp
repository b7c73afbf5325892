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

#include "wtn/gmatrix.hpp"

#include "wtn/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <tuple>

#include "wtn/format.hpp"

namespace wtn {

std::string_view to_string(Direction d) noexcept {
    return d == Direction::direct ? "direct" : "inverted";
}

std::string_view to_string(PersonalizationMode m) noexcept {
    return m == PersonalizationMode::uniform_by_product ? "uniform-by-product"
                                                        : "volume-by-country";
}

PersonalizationMode parse_personalization_mode(std::string_view text) {
    if (text == "uniform-by-product") return PersonalizationMode::uniform_by_product;
    if (text == "volume-by-country") return PersonalizationMode::volume_by_country;
    throw Error("unknown personalization mode: " + std::string(text));
}

StochasticMatrix::StochasticMatrix(NodeSpace space, std::vector<std::size_t> col_ptr,
                                   std::vector<std::size_t> row_idx, std::vector<double> values,
                                   std::vector<std::uint8_t> dangling)
    : space_(space), col_ptr_(std::move(col_ptr)), row_idx_(std::move(row_idx)),
      values_(std::move(values)), dangling_(std::move(dangling)) {
    const auto n = space_.size();
    if (col_ptr_.size() != n + 1 || dangling_.size() != n || row_idx_.size() != values_.size() ||
        col_ptr_.back() != values_.size())
        throw Error("inconsistent stochastic matrix storage");
}

std::size_t StochasticMatrix::dangling_count() const noexcept {
    return static_cast<std::size_t>(std::count(dangling_.begin(), dangling_.end(), 1));
}

double StochasticMatrix::stored(std::size_t row, std::size_t column) const {
    const auto first = row_idx_.begin() + static_cast<std::ptrdiff_t>(col_ptr_.at(column));
    const auto last = row_idx_.begin() + static_cast<std::ptrdiff_t>(col_ptr_.at(column + 1));
    const auto it = std::lower_bound(first, last, row);
    if (it == last || *it != row) return 0.0;
    return values_[static_cast<std::size_t>(it - row_idx_.begin())];
}

GoogleMatrix::GoogleMatrix(StochasticMatrix s, PersonalizationVector v, double alpha,
                           Direction direction)
    : s_(std::move(s)), v_(std::move(v)), alpha_(alpha), direction_(direction) {}

double GoogleMatrix::entry(std::size_t row, std::size_t column) const {
    const double link = s_.is_dangling(column) ? 1.0 / static_cast<double>(size())
                                               : s_.stored(row, column);
    return alpha_ * link + (1.0 - alpha_) * v_.values.at(row);
}

StochasticMatrix build_stochastic(const MoneyMatrix& money, Direction direction) {
    if (money.total_volume() <= 0.0) throw Error("money matrix has no flows: no network to build");
    const NodeSpace space(money);
    const auto n = space.size();

    struct Link {
        std::size_t col;
        std::size_t row;
        double value;
    };
    std::vector<Link> links;
    links.reserve(money.entries().size());
    for (const auto& e : money.entries()) {
        const auto exporter = space.node(e.exporter, e.product);
        const auto importer = space.node(e.importer, e.product);
        if (direction == Direction::direct) {
            links.push_back({exporter, importer, e.value});
        } else {
            links.push_back({importer, exporter, e.value});
        }
    }
    std::sort(links.begin(), links.end(), [](const Link& a, const Link& b) {
        return std::tie(a.col, a.row) < std::tie(b.col, b.row);
    });

    std::vector<std::size_t> col_ptr(n + 1, 0);
    std::vector<std::size_t> row_idx;
    std::vector<double> values;
    std::vector<std::uint8_t> dangling(n, 0);
    row_idx.reserve(links.size());
    values.reserve(links.size());

    std::size_t k = 0;
    for (std::size_t col = 0; col < n; ++col) {
        col_ptr[col] = row_idx.size();
        const auto begin = k;
        double outflow = 0.0;
        for (; k < links.size() && links[k].col == col; ++k) outflow += links[k].value;
        if (outflow <= 0.0) {
            dangling[col] = 1;
            continue;
        }
        for (auto m = begin; m < k; ++m) {
            row_idx.push_back(links[m].row);
            values.push_back(links[m].value / outflow);
        }
    }
    col_ptr[n] = row_idx.size();
    return StochasticMatrix(space, std::move(col_ptr), std::move(row_idx), std::move(values),
                            std::move(dangling));
}

PersonalizationVector build_personalization(const MoneyMatrix& money, PersonalizationMode mode) {
    const double total = money.total_volume();
    if (total <= 0.0) throw Error("money matrix has no flows: personalization undefined");
    const NodeSpace space(money);
    PersonalizationVector v{std::vector<double>(space.size(), 0.0)};

    if (mode == PersonalizationMode::uniform_by_product) {
        const double countries = static_cast<double>(space.countries());
        for (std::size_t p = 0; p < space.products(); ++p) {
            const double weight = money.product_volume(p) / (countries * total);
            for (std::size_t c = 0; c < space.countries(); ++c) v.values[space.node(c, p)] = weight;
        }
    } else {
        for (const auto& e : money.entries()) {
            v.values[space.node(e.importer, e.product)] += e.value;
            v.values[space.node(e.exporter, e.product)] += e.value;
        }
        for (auto& x : v.values) x /= 2.0 * total;
    }
    return v;
}

GoogleMatrix make_google(StochasticMatrix s, PersonalizationVector v, double alpha,
                         Direction direction) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error("damping factor must lie in (0, 1), got " + format_double(alpha));
    if (v.values.size() != s.size()) throw Error("personalization vector has wrong dimension");
    double sum = 0.0;
    for (double x : v.values) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw Error("personalization entries must be >= 0");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-10) throw Error("personalization vector must sum to 1");
    return GoogleMatrix(std::move(s), std::move(v), alpha, direction);
}

GoogleMatrix build_google(const MoneyMatrix& money, Direction direction, double alpha,
                          PersonalizationMode mode) {
    return make_google(build_stochastic(money, direction), build_personalization(money, mode),
                       alpha, direction);
}

void apply(const GoogleMatrix& g, std::span<const double> x, std::span<double> y) {
    const auto n = g.size();
    if (x.size() != n || y.size() != n)
        throw Error("apply: vector length " + std::to_string(x.size()) + " does not match N=" +
                    std::to_string(n));
    const auto& s = g.stochastic();
    const auto col_ptr = s.col_ptr();
    const auto row_idx = s.row_idx();
    const auto values = s.values();

    std::fill(y.begin(), y.end(), 0.0);
    double mass = 0.0;
    double dangling_mass = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double xj = x[j];
        mass += xj;
        if (s.is_dangling(j)) {
            dangling_mass += xj;
            continue;
        }
        for (auto k = col_ptr[j]; k < col_ptr[j + 1]; ++k) y[row_idx[k]] += values[k] * xj;
    }

    const double alpha = g.alpha();
    const double uniform = alpha * dangling_mass / static_cast<double>(n);
    const double teleport = (1.0 - alpha) * mass;
    const auto v = g.personalization();
    for (std::size_t i = 0; i < n; ++i) y[i] = alpha * y[i] + uniform + teleport * v[i];
}

std::vector<double> apply(const GoogleMatrix& g, std::span<const double> x) {
    std::vector<double> y(g.size());
    wtn::apply(g, x, y);
    return y;
}

std::string node_label(const CountryRegistry& registry, const NodeSpace& space, std::size_t node) {
    return registry.code(space.country_of(node)) + ":" + std::to_string(space.product_of(node));
}

void write_triplets(std::ostream& out, const GoogleMatrix& g) {
    const auto& s = g.stochastic();
    out << "row,col,value\n";
    for (std::size_t j = 0; j < s.size(); ++j) {
        for (auto k = s.col_ptr()[j]; k < s.col_ptr()[j + 1]; ++k)
            out << s.row_idx()[k] << ',' << j << ',' << format_double(s.values()[k]) << '\n';
    }
}

void write_sidecar(std::ostream& out, const GoogleMatrix& g) {
    const auto& s = g.stochastic();
    out << "alpha=" << format_double(g.alpha()) << '\n';
    out << "n=" << g.size() << '\n';
    out << "direction=" << to_string(g.direction()) << '\n';
    out << "dangling=";
    bool first = true;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (!s.is_dangling(j)) continue;
        out << (first ? "" : ";") << j;
        first = false;
    }
    out << "\nv=";
    first = true;
    for (double x : g.personalization()) {
        out << (first ? "" : ";") << format_double(x);
        first = false;
    }
    out << '\n';
}

} // namespace wtn
