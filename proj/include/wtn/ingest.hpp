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

#include <array>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace wtn {

/// One row of the trade input: `value_usd` of SITC section `product`
/// shipped from `exporter` to `importer` during `year`.
struct TradeRecord {
    int year = 0;
    std::string exporter;
    std::string importer;
    std::size_t product = 0;
    double value_usd = 0.0;

    friend bool operator==(const TradeRecord&, const TradeRecord&) = default;
};

/// The ten one-digit sections of SITC Rev. 1.
class ProductCatalog {
public:
    static constexpr std::size_t kSize = 10;

    static constexpr std::size_t size() noexcept { return kSize; }
    static std::string_view label(std::size_t product);
    static const std::array<std::string_view, kSize>& labels() noexcept;
};

/// Maps a member country code onto the code of the bloc that replaces it.
using AggregationMap = std::map<std::string, std::string, std::less<>>;

/// Dense, alphabetically ordered index over canonical country codes.
///
/// Aggregated members never appear as entries; their flows are routed to the
/// bloc code through `canonical()`.
class CountryRegistry {
public:
    CountryRegistry() = default;
    explicit CountryRegistry(std::vector<std::string> codes, AggregationMap aggregation = {});

    /// Registry over every canonical code named as exporter or importer.
    static CountryRegistry from_records(std::span<const TradeRecord> records,
                                        AggregationMap aggregation = {});

    std::size_t size() const noexcept { return codes_.size(); }
    const std::vector<std::string>& codes() const noexcept { return codes_; }
    const std::string& code(std::size_t index) const { return codes_.at(index); }

    const std::string& display_name(std::size_t index) const { return names_.at(index); }
    void set_display_name(std::string_view code, std::string name);

    std::optional<std::size_t> find(std::string_view code) const;
    /// Throws wtn::Error naming the code when it is not registered.
    std::size_t index_of(std::string_view code) const;

    const AggregationMap& aggregation() const noexcept { return aggregation_; }
    /// The bloc code for an aggregated member, otherwise `code` itself.
    std::string_view canonical(std::string_view code) const;

    friend bool operator==(const CountryRegistry&, const CountryRegistry&) = default;

private:
    std::vector<std::string> codes_;
    std::vector<std::string> names_;
    AggregationMap aggregation_;
};

struct MoneyEntry {
    std::size_t product = 0;
    std::size_t importer = 0;
    std::size_t exporter = 0;
    double value = 0.0;

    friend bool operator==(const MoneyEntry&, const MoneyEntry&) = default;
};

/// Sparse tensor of USD flows: entry (p, c, c') is the value of product p
/// exported from country c' to country c.
///
/// Entries are kept sorted by (product, exporter, importer), strictly
/// positive and off-diagonal. Instances are immutable.
class MoneyMatrix {
public:
    /// Duplicate coordinates are summed in the order given; zero values are
    /// dropped. Throws on negative or non-finite values, out-of-range indexes
    /// and diagonal entries.
    MoneyMatrix(std::shared_ptr<const CountryRegistry> registry, int year,
                std::size_t product_count, std::vector<MoneyEntry> entries);

    std::size_t country_count() const noexcept { return registry_->size(); }
    std::size_t product_count() const noexcept { return product_count_; }
    int year() const noexcept { return year_; }
    const CountryRegistry& registry() const noexcept { return *registry_; }
    const std::shared_ptr<const CountryRegistry>& registry_ptr() const noexcept { return registry_; }

    std::span<const MoneyEntry> entries() const noexcept { return entries_; }
    double at(std::size_t product, std::size_t importer, std::size_t exporter) const;

    double total_volume() const noexcept { return total_; }
    double product_volume(std::size_t product) const { return product_totals_.at(product); }

    /// Same tensor with every flow reversed (importer and exporter swapped).
    MoneyMatrix transposed() const;

    friend bool operator==(const MoneyMatrix& a, const MoneyMatrix& b) {
        return a.year_ == b.year_ && a.product_count_ == b.product_count_ &&
               *a.registry_ == *b.registry_ && a.entries_ == b.entries_;
    }

private:
    std::shared_ptr<const CountryRegistry> registry_;
    int year_;
    std::size_t product_count_;
    std::vector<MoneyEntry> entries_;
    std::vector<double> product_totals_;
    double total_ = 0.0;
};

/// Product index of an SITC code: its leading digit.
std::size_t sitc_to_product(std::string_view code);

/// Reads `year,exporter,importer,sitc,value_usd` rows and keeps those of
/// `year`. Every row is validated, including rows of other years.
std::vector<TradeRecord> parse_trade_records(std::istream& source, int year);

/// Reads `member_code,bloc_code` pairs; a header line is optional.
AggregationMap parse_aggregation(std::istream& source);

/// Rewrites member codes to their bloc, drops self flows and merges flows
/// that collapse onto the same (year, product, exporter, importer).
std::vector<TradeRecord> apply_aggregation(std::span<const TradeRecord> records,
                                           const CountryRegistry& registry);

MoneyMatrix assemble_money_matrix(std::span<const TradeRecord> records,
                                  std::shared_ptr<const CountryRegistry> registry);

/// parse -> aggregate -> registry -> assemble, for one year of one file.
MoneyMatrix load_money_matrix(std::istream& source, int year, const AggregationMap& aggregation = {});

} // namespace wtn
