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

#include "wtn/ingest.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wtn {

/// Node layout over (country, product) pairs: node = product * N_c + country.
class NodeSpace {
public:
    NodeSpace() = default;
    NodeSpace(std::size_t countries, std::size_t products)
        : countries_(countries), products_(products) {}
    explicit NodeSpace(const MoneyMatrix& money)
        : NodeSpace(money.country_count(), money.product_count()) {}

    std::size_t countries() const noexcept { return countries_; }
    std::size_t products() const noexcept { return products_; }
    std::size_t size() const noexcept { return countries_ * products_; }

    std::size_t node(std::size_t country, std::size_t product) const noexcept {
        return product * countries_ + country;
    }
    std::size_t country_of(std::size_t node) const noexcept { return node % countries_; }
    std::size_t product_of(std::size_t node) const noexcept { return node / countries_; }

    friend bool operator==(const NodeSpace&, const NodeSpace&) = default;

private:
    std::size_t countries_ = 0;
    std::size_t products_ = 0;
};

/// Direct flows feed PageRank (column = exporter node); inverted flows feed
/// CheiRank (column = importer node).
enum class Direction { direct, inverted };

std::string_view to_string(Direction d) noexcept;

/// How the teleportation mass of a product is spread over its country nodes.
enum class PersonalizationMode {
    uniform_by_product, ///< v(c,p) = V_p / (N_c V)
    volume_by_country,  ///< v(c,p) = (import(c,p) + export(c,p)) / (2 V)
};

std::string_view to_string(PersonalizationMode m) noexcept;
PersonalizationMode parse_personalization_mode(std::string_view text);

/// Column-compressed stochastic matrix. Dangling columns carry no stored
/// entries and stand for the uniform column 1/N.
class StochasticMatrix {
public:
    StochasticMatrix(NodeSpace space, std::vector<std::size_t> col_ptr,
                     std::vector<std::size_t> row_idx, std::vector<double> values,
                     std::vector<std::uint8_t> dangling);

    const NodeSpace& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return space_.size(); }

    std::span<const std::size_t> col_ptr() const noexcept { return col_ptr_; }
    std::span<const std::size_t> row_idx() const noexcept { return row_idx_; }
    std::span<const double> values() const noexcept { return values_; }

    bool is_dangling(std::size_t column) const { return dangling_.at(column) != 0; }
    std::size_t dangling_count() const noexcept;

    /// Stored value S_ij; 0 for dangling columns (their implicit 1/N is not stored).
    double stored(std::size_t row, std::size_t column) const;

    friend bool operator==(const StochasticMatrix&, const StochasticMatrix&) = default;

private:
    NodeSpace space_;
    std::vector<std::size_t> col_ptr_;
    std::vector<std::size_t> row_idx_;
    std::vector<double> values_;
    std::vector<std::uint8_t> dangling_;
};

struct PersonalizationVector {
    std::vector<double> values;
};

/// G = alpha S + (1 - alpha) v 1^T, never densified.
class GoogleMatrix {
public:
    GoogleMatrix(StochasticMatrix s, PersonalizationVector v, double alpha, Direction direction);

    const StochasticMatrix& stochastic() const noexcept { return s_; }
    std::span<const double> personalization() const noexcept { return v_.values; }
    double alpha() const noexcept { return alpha_; }
    Direction direction() const noexcept { return direction_; }
    const NodeSpace& space() const noexcept { return s_.space(); }
    std::size_t size() const noexcept { return s_.size(); }

    /// G_ij evaluated from the three terms.
    double entry(std::size_t row, std::size_t column) const;

private:
    StochasticMatrix s_;
    PersonalizationVector v_;
    double alpha_;
    Direction direction_;
};

inline constexpr double kDefaultAlpha = 0.5;

StochasticMatrix build_stochastic(const MoneyMatrix& money, Direction direction);

PersonalizationVector build_personalization(
    const MoneyMatrix& money, PersonalizationMode mode = PersonalizationMode::uniform_by_product);

GoogleMatrix make_google(StochasticMatrix s, PersonalizationVector v, double alpha = kDefaultAlpha,
                         Direction direction = Direction::direct);

/// Convenience: stochastic + personalization + damping in one step.
GoogleMatrix build_google(const MoneyMatrix& money, Direction direction,
                          double alpha = kDefaultAlpha,
                          PersonalizationMode mode = PersonalizationMode::uniform_by_product);

/// y = alpha S x + alpha (sum of dangling x) / N + (1 - alpha) (sum x) v.
/// Columns are visited in ascending order, so the result is reproducible.
std::vector<double> apply(const GoogleMatrix& g, std::span<const double> x);
void apply(const GoogleMatrix& g, std::span<const double> x, std::span<double> y);

/// `CODE:product`, e.g. `USA:7`.
std::string node_label(const CountryRegistry& registry, const NodeSpace& space, std::size_t node);

/// Writes S as `row,col,value` triplets.
void write_triplets(std::ostream& out, const GoogleMatrix& g);
/// Writes `alpha=`, `n=`, `direction=`, `dangling=` and `v=` lines.
void write_sidecar(std::ostream& out, const GoogleMatrix& g);

} // namespace wtn
