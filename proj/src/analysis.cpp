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

#include "wtn/analysis.hpp"

#include "wtn/error.hpp"
#include "wtn/format.hpp"

#include <future>
#include <utility>

namespace wtn {

namespace {

struct PerturbedRun {
    BalanceVector balance;
    std::vector<SolverReport> reports;
};

PerturbedRun run_perturbed(const MoneyMatrix& money, const SensitivityConfig& config,
                           double delta) {
    const auto perturbed = perturb_money(money, config.target, delta, config.side);
    const NodeSpace space(perturbed);
    if (config.source == ProbabilitySource::iea) {
        const auto volumes = volume_probabilities(perturbed);
        return {trade_balance(aggregate_country(volumes.imports, space).values,
                              aggregate_country(volumes.exports, space).values,
                              ProbabilitySource::iea),
                {}};
    }
    const auto ranking = rank_network(perturbed, config.rank);
    if (!ranking.converged()) {
        const auto& bad =
            ranking.pagerank_report.converged ? ranking.cheirank_report : ranking.pagerank_report;
        throw ConvergenceError("perturbed ranking at delta=" + format_double(delta) +
                               " did not converge: " + std::to_string(bad.iterations) +
                               " iterations, residual " + format_double(bad.residual));
    }
    return {country_balance(ranking, ProbabilitySource::gma),
            {ranking.pagerank_report, ranking.cheirank_report}};
}

std::vector<std::optional<double>> central_difference(const BalanceVector& plus,
                                                      const BalanceVector& minus, double h) {
    std::vector<std::optional<double>> d(plus.size());
    for (std::size_t c = 0; c < d.size(); ++c) {
        if (plus.values[c] && minus.values[c]) d[c] = (*plus.values[c] - *minus.values[c]) / (2.0 * h);
    }
    return d;
}

} // namespace

std::string_view to_string(ProbabilitySource s) noexcept {
    return s == ProbabilitySource::gma ? "gma" : "iea";
}

BalanceVector trade_balance(std::span<const double> p, std::span<const double> pstar,
                            ProbabilitySource source) {
    if (p.size() != pstar.size()) throw Error("trade_balance: vectors differ in length");
    BalanceVector b{std::vector<std::optional<double>>(p.size()), source};
    for (std::size_t c = 0; c < p.size(); ++c) {
        if (p[c] < 0.0 || pstar[c] < 0.0) throw Error("trade_balance: negative probability");
        const double sum = pstar[c] + p[c];
        if (sum > 0.0) b.values[c] = (pstar[c] - p[c]) / sum;
    }
    return b;
}

BalanceVector country_balance(const NetworkRanking& ranking, ProbabilitySource source) {
    const auto& in = source == ProbabilitySource::gma ? ranking.pagerank : ranking.import_volume;
    const auto& out = source == ProbabilitySource::gma ? ranking.cheirank : ranking.export_volume;
    return trade_balance(aggregate_country(in, ranking.space).values,
                         aggregate_country(out, ranking.space).values, source);
}

BalanceVector country_balance(const MoneyMatrix& money, ProbabilitySource source,
                              const RankOptions& options) {
    SensitivityConfig config;
    config.source = source;
    config.rank = options;
    return run_perturbed(money, config, 0.0).balance;
}

std::string describe(const PerturbationTarget& target, const CountryRegistry& registry) {
    if (const auto* g = std::get_if<GlobalProduct>(&target))
        return "product " + std::to_string(g->product);
    const auto& cp = std::get<CountryProduct>(target);
    return registry.code(cp.country) + " product " + std::to_string(cp.product);
}

MoneyMatrix perturb_money(const MoneyMatrix& money, const PerturbationTarget& target, double delta,
                          PerturbationSide side) {
    if (!(delta > -1.0)) throw Error("perturbation requires 1 + delta > 0, got delta=" +
                                     format_double(delta));
    const double scale = 1.0 + delta;
    std::vector<MoneyEntry> entries(money.entries().begin(), money.entries().end());

    if (const auto* g = std::get_if<GlobalProduct>(&target)) {
        if (g->product >= money.product_count()) throw Error("perturbation product out of range");
        for (auto& e : entries)
            if (e.product == g->product) e.value *= scale;
    } else {
        const auto& cp = std::get<CountryProduct>(target);
        if (cp.product >= money.product_count() || cp.country >= money.country_count())
            throw Error("perturbation target out of range");
        for (auto& e : entries) {
            const auto who = side == PerturbationSide::exports ? e.exporter : e.importer;
            if (e.product == cp.product && who == cp.country) e.value *= scale;
        }
    }
    return MoneyMatrix(money.registry_ptr(), money.year(), money.product_count(), std::move(entries));
}

SensitivityVector balance_sensitivity(const MoneyMatrix& money, const SensitivityConfig& config) {
    const double h = config.step;
    if (!(h > 0.0 && h < 1.0)) throw Error("sensitivity step must lie in (0, 1)");

    auto minus_run = std::async(std::launch::async, run_perturbed, std::cref(money),
                                std::cref(config), -h);
    auto plus = run_perturbed(money, config, h);
    auto minus = minus_run.get();

    SensitivityVector out;
    out.values = central_difference(plus.balance, minus.balance, h);
    out.config = config;
    out.reports = std::move(plus.reports);
    out.reports.insert(out.reports.end(), minus.reports.begin(), minus.reports.end());
    return out;
}

RichardsonDiagnostic richardson_check(const MoneyMatrix& money, const SensitivityConfig& config) {
    RichardsonDiagnostic r;
    auto at = [&](double h) {
        auto c = config;
        c.step = h;
        return balance_sensitivity(money, c).values;
    };
    r.d_h = at(config.step);
    r.d_half = at(config.step / 2.0);
    r.d_quarter = at(config.step / 4.0);
    r.ratio.resize(r.d_h.size());
    for (std::size_t c = 0; c < r.ratio.size(); ++c) {
        if (!r.d_h[c] || !r.d_half[c] || !r.d_quarter[c]) continue;
        const double denom = *r.d_half[c] - *r.d_quarter[c];
        if (denom != 0.0) r.ratio[c] = (*r.d_h[c] - *r.d_half[c]) / denom;
    }
    return r;
}

} // namespace wtn
