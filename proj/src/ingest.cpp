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

#include "wtn/ingest.hpp"

#include "wtn/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <istream>
#include <tuple>

namespace wtn {

namespace {

constexpr std::array<std::string_view, ProductCatalog::kSize> kProductLabels = {
    "Food and live animals",
    "Beverages and tobacco",
    "Crude materials, inedible, except fuels",
    "Mineral fuels, lubricants and related materials",
    "Animal and vegetable oils and fats",
    "Chemicals and related products, n.e.s.",
    "Basic manufactures",
    "Machinery and transport equipment",
    "Miscellaneous manufactured articles",
    "Goods not classified elsewhere",
};

std::string_view trim(std::string_view s) {
    auto is_space = [](char ch) { return std::isspace(static_cast<unsigned char>(ch)) != 0; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            return fields;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

// Strips a UTF-8 byte order mark from the first line.
std::string_view strip_bom(std::string_view s) {
    if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
    return s;
}

bool valid_country_code(std::string_view code) {
    return !code.empty() && std::all_of(code.begin(), code.end(), [](char ch) {
        return std::isalnum(static_cast<unsigned char>(ch)) != 0;
    });
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return out;
}

} // namespace

std::string_view ProductCatalog::label(std::size_t product) {
    if (product >= kSize) throw Error("product index out of range: " + std::to_string(product));
    return kProductLabels[product];
}

const std::array<std::string_view, ProductCatalog::kSize>& ProductCatalog::labels() noexcept {
    return kProductLabels;
}

CountryRegistry::CountryRegistry(std::vector<std::string> codes, AggregationMap aggregation)
    : codes_(std::move(codes)), aggregation_(std::move(aggregation)) {
    for (const auto& [member, bloc] : aggregation_) {
        if (aggregation_.contains(bloc))
            throw Error("bloc " + bloc + " is itself aggregated");
        if (member == bloc) throw Error("country " + member + " aggregated onto itself");
    }
    std::sort(codes_.begin(), codes_.end());
    codes_.erase(std::unique(codes_.begin(), codes_.end()), codes_.end());
    for (const auto& code : codes_) {
        if (aggregation_.contains(code))
            throw Error("aggregated member " + code + " cannot be a registry entry");
    }
    names_ = codes_;
}

CountryRegistry CountryRegistry::from_records(std::span<const TradeRecord> records,
                                              AggregationMap aggregation) {
    const CountryRegistry mapper({}, aggregation);
    std::vector<std::string> codes;
    codes.reserve(2 * records.size());
    for (const auto& r : records) {
        codes.emplace_back(mapper.canonical(r.exporter));
        codes.emplace_back(mapper.canonical(r.importer));
    }
    return CountryRegistry(std::move(codes), std::move(aggregation));
}

void CountryRegistry::set_display_name(std::string_view code, std::string name) {
    names_[index_of(code)] = std::move(name);
}

std::optional<std::size_t> CountryRegistry::find(std::string_view code) const {
    const auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
    if (it == codes_.end() || *it != code) return std::nullopt;
    return static_cast<std::size_t>(it - codes_.begin());
}

std::size_t CountryRegistry::index_of(std::string_view code) const {
    if (auto idx = find(code)) return *idx;
    throw Error("unknown country code: " + std::string(code));
}

std::string_view CountryRegistry::canonical(std::string_view code) const {
    const auto it = aggregation_.find(code);
    return it == aggregation_.end() ? code : std::string_view(it->second);
}

MoneyMatrix::MoneyMatrix(std::shared_ptr<const CountryRegistry> registry, int year,
                         std::size_t product_count, std::vector<MoneyEntry> entries)
    : registry_(std::move(registry)), year_(year), product_count_(product_count) {
    if (!registry_) throw Error("money matrix requires a registry");
    if (product_count_ == 0) throw Error("money matrix requires at least one product");
    const auto n_c = registry_->size();
    for (const auto& e : entries) {
        if (e.product >= product_count_ || e.importer >= n_c || e.exporter >= n_c)
            throw Error("money entry index out of range");
        if (!std::isfinite(e.value) || e.value < 0.0)
            throw Error("money entry must be finite and non-negative");
        if (e.importer == e.exporter && e.value != 0.0)
            throw Error("self flow of " + registry_->code(e.importer) + " on the diagonal");
    }
    auto key = [](const MoneyEntry& e) { return std::tie(e.product, e.exporter, e.importer); };
    std::stable_sort(entries.begin(), entries.end(),
                     [&](const MoneyEntry& a, const MoneyEntry& b) { return key(a) < key(b); });

    entries_.reserve(entries.size());
    for (const auto& e : entries) {
        if (!entries_.empty() && key(entries_.back()) == key(e)) {
            entries_.back().value += e.value;
        } else {
            entries_.push_back(e);
        }
    }
    std::erase_if(entries_, [](const MoneyEntry& e) { return e.value == 0.0; });

    product_totals_.assign(product_count_, 0.0);
    for (const auto& e : entries_) product_totals_[e.product] += e.value;
    for (double v : product_totals_) total_ += v;
}

double MoneyMatrix::at(std::size_t product, std::size_t importer, std::size_t exporter) const {
    const MoneyEntry probe{product, importer, exporter, 0.0};
    const auto it = std::lower_bound(
        entries_.begin(), entries_.end(), probe, [](const MoneyEntry& a, const MoneyEntry& b) {
            return std::tie(a.product, a.exporter, a.importer) <
                   std::tie(b.product, b.exporter, b.importer);
        });
    if (it == entries_.end() || it->product != product || it->importer != importer ||
        it->exporter != exporter)
        return 0.0;
    return it->value;
}

MoneyMatrix MoneyMatrix::transposed() const {
    std::vector<MoneyEntry> flipped(entries_.begin(), entries_.end());
    for (auto& e : flipped) std::swap(e.importer, e.exporter);
    return MoneyMatrix(registry_, year_, product_count_, std::move(flipped));
}

std::size_t sitc_to_product(std::string_view code) {
    code = trim(code);
    if (code.empty()) throw Error("empty SITC code");
    const char lead = code.front();
    if (lead < '0' || lead > '9') throw Error("invalid SITC code: " + std::string(code));
    return static_cast<std::size_t>(lead - '0');
}

std::vector<TradeRecord> parse_trade_records(std::istream& source, int year) {
    static constexpr std::array<std::string_view, 5> kHeader = {"year", "exporter", "importer",
                                                                "sitc", "value_usd"};
    std::vector<TradeRecord> records;
    std::string line;
    std::size_t line_no = 0;
    bool seen_header = false;

    while (std::getline(source, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1) view = strip_bom(view);
        if (trim(view).empty()) continue;

        const auto fields = split_fields(view);
        if (!seen_header) {
            if (fields.size() != kHeader.size() ||
                !std::equal(fields.begin(), fields.end(), kHeader.begin()))
                throw ParseError(line_no, "expected header year,exporter,importer,sitc,value_usd");
            seen_header = true;
            continue;
        }
        if (fields.size() != kHeader.size())
            throw ParseError(line_no, "expected 5 columns, found " + std::to_string(fields.size()));

        TradeRecord rec;
        {
            const auto f = fields[0];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), rec.year);
            if (ec != std::errc() || ptr != f.data() + f.size() || f.empty())
                throw ParseError(line_no, "non-numeric year '" + std::string(f) + "'");
        }
        if (!valid_country_code(fields[1]))
            throw ParseError(line_no, "invalid exporter code '" + std::string(fields[1]) + "'");
        if (!valid_country_code(fields[2]))
            throw ParseError(line_no, "invalid importer code '" + std::string(fields[2]) + "'");
        rec.exporter = upper(fields[1]);
        rec.importer = upper(fields[2]);
        try {
            rec.product = sitc_to_product(fields[3]);
        } catch (const Error& e) {
            throw ParseError(line_no, e.what());
        }
        {
            const auto f = fields[4];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), rec.value_usd);
            if (ec != std::errc() || ptr != f.data() + f.size() || f.empty() ||
                !std::isfinite(rec.value_usd))
                throw ParseError(line_no, "non-numeric value '" + std::string(f) + "'");
            if (rec.value_usd < 0.0)
                throw ParseError(line_no, "negative value '" + std::string(f) + "'");
            rec.value_usd += 0.0; // -0 -> +0
        }
        if (rec.year == year) records.push_back(std::move(rec));
    }
    if (!seen_header) throw ParseError(line_no, "missing header");
    if (records.empty()) throw NoRecordsError(year);
    return records;
}

AggregationMap parse_aggregation(std::istream& source) {
    AggregationMap map;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(source, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1) view = strip_bom(view);
        if (trim(view).empty() || trim(view).front() == '#') continue;
        const auto fields = split_fields(view);
        if (fields.size() != 2) throw ParseError(line_no, "expected member_code,bloc_code");
        if (map.empty() && fields[0] == "member_code" && fields[1] == "bloc_code") continue;
        if (!valid_country_code(fields[0]) || !valid_country_code(fields[1]))
            throw ParseError(line_no, "invalid country code");
        const auto member = upper(fields[0]);
        const auto bloc = upper(fields[1]);
        const auto [it, inserted] = map.emplace(member, bloc);
        if (!inserted && it->second != bloc)
            throw ParseError(line_no, member + " mapped to both " + it->second + " and " + bloc);
    }
    return map;
}

std::vector<TradeRecord> apply_aggregation(std::span<const TradeRecord> records,
                                           const CountryRegistry& registry) {
    std::vector<TradeRecord> mapped;
    mapped.reserve(records.size());
    for (const auto& r : records) {
        TradeRecord m = r;
        m.exporter = std::string(registry.canonical(r.exporter));
        m.importer = std::string(registry.canonical(r.importer));
        if (m.exporter == m.importer) continue;
        mapped.push_back(std::move(m));
    }
    auto key = [](const TradeRecord& r) {
        return std::tie(r.year, r.product, r.exporter, r.importer);
    };
    std::stable_sort(mapped.begin(), mapped.end(),
                     [&](const TradeRecord& a, const TradeRecord& b) { return key(a) < key(b); });

    std::vector<TradeRecord> merged;
    merged.reserve(mapped.size());
    for (auto& r : mapped) {
        if (!merged.empty() && key(merged.back()) == key(r)) {
            merged.back().value_usd += r.value_usd;
        } else {
            merged.push_back(std::move(r));
        }
    }
    return merged;
}

MoneyMatrix assemble_money_matrix(std::span<const TradeRecord> records,
                                  std::shared_ptr<const CountryRegistry> registry) {
    if (!registry) throw Error("assemble_money_matrix: null registry");
    const int year = records.empty() ? 0 : records.front().year;
    std::vector<MoneyEntry> entries;
    entries.reserve(records.size());
    for (const auto& r : records) {
        if (r.year != year) throw Error("records span more than one year");
        if (r.product >= ProductCatalog::size())
            throw Error("product index out of range: " + std::to_string(r.product));
        const auto exporter = registry->index_of(r.exporter);
        const auto importer = registry->index_of(r.importer);
        if (exporter == importer) throw Error("self flow of " + r.exporter + " must be aggregated away");
        entries.push_back({r.product, importer, exporter, r.value_usd});
    }
    return MoneyMatrix(std::move(registry), year, ProductCatalog::size(), std::move(entries));
}

MoneyMatrix load_money_matrix(std::istream& source, int year, const AggregationMap& aggregation) {
    const auto records = parse_trade_records(source, year);
    const auto aggregated = apply_aggregation(records, CountryRegistry({}, aggregation));
    auto registry = std::make_shared<const CountryRegistry>(
        CountryRegistry::from_records(aggregated, aggregation));
    return assemble_money_matrix(aggregated, std::move(registry));
}

} // namespace wtn
