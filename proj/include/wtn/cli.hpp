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

#include "wtn/analysis.hpp"
#include "wtn/gmatrix.hpp"
#include "wtn/regomax.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wtn::cli {

struct RunConfig {
    std::filesystem::path input;
    int year = 2018;
    std::optional<std::filesystem::path> aggregate;
    double alpha = kDefaultAlpha;
    double tol = 1e-12;
    std::size_t max_iter = 1000;
    PersonalizationMode personalization = PersonalizationMode::uniform_by_product;

    /// Products whose global price sensitivity is computed.
    std::vector<std::size_t> sens_products = {3, 7};
    /// When set, sensitivities are to the price of this country's goods.
    std::optional<std::string> sens_country;
    double step = 0.01;
    PerturbationSide side = PerturbationSide::exports;

    /// Country codes for the reduced network; empty picks a default.
    std::vector<std::string> subset;
    std::size_t k = 4;
    FriendSemantics semantics = FriendSemantics::column;

    std::size_t top = 20;
    std::size_t index_cutoff = 61;
    bool svg = true;
    bool dump_matrix = false;

    std::filesystem::path out = ".";
};

/// Fills in derived defaults (input from WTN_DATA_DIR) and validates the config.
RunConfig resolve(RunConfig config);

MoneyMatrix load(const RunConfig& config);

// Each command writes its artifacts under config.out and returns their paths.
// Failures (bad input, non-convergence) throw.
std::vector<std::filesystem::path> cmd_rank(const RunConfig& config, const MoneyMatrix& money);
std::vector<std::filesystem::path> cmd_balance(const RunConfig& config, const MoneyMatrix& money);
std::vector<std::filesystem::path> cmd_sensitivity(const RunConfig& config,
                                                   const MoneyMatrix& money);
std::vector<std::filesystem::path> cmd_regomax(const RunConfig& config, const MoneyMatrix& money);
std::vector<std::filesystem::path> cmd_pipeline(const RunConfig& config, const MoneyMatrix& money);

/// Default REGOMAX countries: EUU, USA, CHN, RUS when all are present,
/// otherwise the top four countries by PageRank.
std::vector<std::string> default_subset(const MoneyMatrix& money, const RankOptions& options);

} // namespace wtn::cli
