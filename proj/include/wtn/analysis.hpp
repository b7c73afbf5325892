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
#include "wtn/ranks.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace wtn {

/// GMA balances come from PageRank/CheiRank, IEA balances from raw
/// import/export volume.
enum class ProbabilitySource { gma, iea };

std::string_view to_string(ProbabilitySource s) noexcept;

/// B_c = (P*_c - P_c) / (P*_c + P_c); empty where both probabilities vanish.
struct BalanceVector {
    std::vector<std::optional<double>> values;
    ProbabilitySource source = ProbabilitySource::gma;

    std::size_t size() const noexcept { return values.size(); }
};

BalanceVector trade_balance(std::span<const double> p, std::span<const double> pstar,
                            ProbabilitySource source = ProbabilitySource::gma);

/// Balance of every country from one network, using the given probabilities.
BalanceVector country_balance(const MoneyMatrix& money, ProbabilitySource source,
                              const RankOptions& options = {});
BalanceVector country_balance(const NetworkRanking& ranking, ProbabilitySource source);

/// Price change of product `product` everywhere.
struct GlobalProduct {
    std::size_t product = 0;
};

/// Price change of product `product` originating from `country`.
struct CountryProduct {
    std::size_t country = 0;
    std::size_t product = 0;
};

using PerturbationTarget = std::variant<GlobalProduct, CountryProduct>;

/// Which flows of a CountryProduct target are scaled.
enum class PerturbationSide { exports, imports };

std::string describe(const PerturbationTarget& target, const CountryRegistry& registry);

/// Multiplies the targeted flows by (1 + delta). Requires delta > -1.
MoneyMatrix perturb_money(const MoneyMatrix& money, const PerturbationTarget& target, double delta,
                          PerturbationSide side = PerturbationSide::exports);

struct SensitivityConfig {
    PerturbationTarget target = GlobalProduct{};
    double step = 0.01;
    ProbabilitySource source = ProbabilitySource::gma;
    PerturbationSide side = PerturbationSide::exports;
    RankOptions rank;
};

struct SensitivityVector {
    std::vector<std::optional<double>> values; ///< dB_c/d delta per country
    SensitivityConfig config;
    /// PageRank and CheiRank reports of the +h run, then of the -h run (GMA only).
    std::vector<SolverReport> reports;
};

/// Central difference [B(+h) - B(-h)] / 2h, each side a full rebuild of the
/// network from the perturbed money matrix. Throws ConvergenceError when a
/// perturbed ranking does not converge.
SensitivityVector balance_sensitivity(const MoneyMatrix& money, const SensitivityConfig& config);

/// Central differences at h, h/2 and h/4 and the ratio
/// (D_h - D_h/2) / (D_h/2 - D_h/4), which tends to 4 for a smooth balance.
struct RichardsonDiagnostic {
    std::vector<std::optional<double>> d_h, d_half, d_quarter, ratio;
};

RichardsonDiagnostic richardson_check(const MoneyMatrix& money, const SensitivityConfig& config);

} // namespace wtn
