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

#include "wtn/cli.hpp"
#include "wtn/error.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

using wtn::cli::RunConfig;

void add_options(CLI::App& cmd, RunConfig& c, std::string& personalization, std::string& side,
                 std::string& semantics) {
    cmd.add_option("--input", c.input,
                   "Trade records (year,exporter,importer,sitc,value_usd); defaults to "
                   "$WTN_DATA_DIR/trade_<year>.csv");
    cmd.add_option("--year", c.year, "Year to analyse")->capture_default_str();
    cmd.add_option("--aggregate", c.aggregate, "member_code,bloc_code aggregation file");
    cmd.add_option("--alpha", c.alpha, "Damping factor in (0,1)")->capture_default_str();
    cmd.add_option("--tol", c.tol, "L1 tolerance of the power iteration")->capture_default_str();
    cmd.add_option("--max-iter", c.max_iter, "Power iteration cap")->capture_default_str();
    cmd.add_option("--personalization", personalization,
                   "uniform-by-product or volume-by-country")
        ->capture_default_str();
    cmd.add_option("--sens-product", c.sens_products, "SITC product(s) 0-9 to perturb")
        ->delimiter(',')
        ->capture_default_str();
    cmd.add_option("--sens-country", c.sens_country,
                   "Perturb only this country's flows of the product");
    cmd.add_option("--sens-side", side, "exports or imports (with --sens-country)")
        ->capture_default_str();
    cmd.add_option("--step", c.step, "Finite-difference step h")->capture_default_str();
    cmd.add_option("--subset", c.subset, "Countries for the reduced Google matrix")
        ->delimiter(',');
    cmd.add_option("--k", c.k, "Strongest links kept per node")->capture_default_str();
    cmd.add_option("--friends", semantics, "column or row selection of links")
        ->capture_default_str();
    cmd.add_option("--top", c.top, "Rows of the top-rank table")->capture_default_str();
    cmd.add_option("--index-cutoff", c.index_cutoff,
                   "Only indexes below this value appear in rank planes")
        ->capture_default_str();
    cmd.add_flag("!--no-svg", c.svg, "Skip SVG rank-plane plots");
    cmd.add_flag("--dump-matrix", c.dump_matrix, "Also write S triplets, alpha and v");
    cmd.add_option("--out", c.out, "Output directory")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Google matrix analysis of the multiproduct world trade network.\n"
                 "Environment: WTN_DATA_DIR supplies the default input directory."};
    app.require_subcommand(1);

    RunConfig config;
    std::string personalization = "uniform-by-product";
    std::string side = "exports";
    std::string semantics = "column";

    using Command = std::vector<std::filesystem::path> (*)(const RunConfig&, const wtn::MoneyMatrix&);
    const std::map<std::string, std::pair<std::string, Command>> commands = {
        {"rank", {"PageRank/CheiRank and Import/Export rank tables, rank planes", &wtn::cli::cmd_rank}},
        {"balance", {"Trade balance per country from both probability sources", &wtn::cli::cmd_balance}},
        {"sensitivity", {"Balance sensitivity to product prices", &wtn::cli::cmd_sensitivity}},
        {"regomax", {"Reduced Google matrices and strongest-link networks", &wtn::cli::cmd_regomax}},
        {"pipeline", {"All of the above for one year", &wtn::cli::cmd_pipeline}},
    };
    for (const auto& [name, entry] : commands) {
        auto* sub = app.add_subcommand(name, entry.first);
        add_options(*sub, config, personalization, side, semantics);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        config.personalization = wtn::parse_personalization_mode(personalization);
        if (side == "exports") {
            config.side = wtn::PerturbationSide::exports;
        } else if (side == "imports") {
            config.side = wtn::PerturbationSide::imports;
        } else {
            throw wtn::Error("--sens-side must be exports or imports");
        }
        if (semantics == "column") {
            config.semantics = wtn::FriendSemantics::column;
        } else if (semantics == "row") {
            config.semantics = wtn::FriendSemantics::row;
        } else {
            throw wtn::Error("--friends must be column or row");
        }

        config = wtn::cli::resolve(std::move(config));
        const auto money = wtn::cli::load(config);
        const auto& name = app.get_subcommands().front()->get_name();
        for (const auto& path : commands.at(name).second(config, money))
            std::cout << path.string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "wtn: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
