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
#include "wtn/format.hpp"
#include "wtn/ranks.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace wtn::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

RankOptions rank_options(const RunConfig& c) {
    RankOptions o;
    o.alpha = c.alpha;
    o.personalization = c.personalization;
    o.solver.tol = c.tol;
    o.solver.max_iter = c.max_iter;
    return o;
}

class Output {
public:
    explicit Output(const RunConfig& config) : dir_(config.out) { fs::create_directories(dir_); }

    template <typename Writer>
    void write(const std::string& name, Writer&& writer) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot open " + path.string() + " for writing");
        writer(out);
        out.flush();
        if (!out) throw Error("failed writing " + path.string());
        written_.push_back(path);
    }

    void write_json(const std::string& name, const json& doc) {
        write(name, [&](std::ostream& out) { out << doc.dump(2) << '\n'; });
    }

    std::vector<fs::path> take() { return std::move(written_); }

private:
    fs::path dir_;
    std::vector<fs::path> written_;
};

json report_json(const SolverReport& r) {
    return {{"iterations", r.iterations}, {"residual", r.residual}, {"converged", r.converged}};
}

json run_json(const RunConfig& c, const MoneyMatrix& money) {
    return {{"input", c.input.filename().string()},
            {"year", money.year()},
            {"countries", money.country_count()},
            {"products", money.product_count()},
            {"alpha", c.alpha},
            {"tol", c.tol},
            {"max_iter", c.max_iter},
            {"personalization", std::string(to_string(c.personalization))}};
}

void require_converged(const NetworkRanking& r) {
    for (const auto* rep : {&r.pagerank_report, &r.cheirank_report}) {
        if (!rep->converged)
            throw ConvergenceError("ranking did not converge after " +
                                   std::to_string(rep->iterations) + " iterations (residual " +
                                   format_double(rep->residual) + ")");
    }
}

std::string optional_text(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

void write_plane_csv(std::ostream& out, const RankTable& t, bool volume, std::size_t cutoff) {
    out << (volume ? "entity,Khat,Khatstar\n" : "entity,K,Kstar\n");
    const auto& k = volume ? t.khat : t.k;
    const auto& ks = volume ? t.khatstar : t.kstar;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (k[i] < cutoff && ks[i] < cutoff) out << t.entities[i] << ',' << k[i] << ',' << ks[i] << '\n';
}

void write_plane_svg(std::ostream& out, const RankTable& t, bool volume, std::size_t cutoff) {
    constexpr double kSize = 640.0;
    constexpr double kMargin = 56.0;
    const double plot = kSize - 2.0 * kMargin;
    const double span = std::max<double>(1.0, static_cast<double>(cutoff) - 1.0);
    auto at = [&](std::size_t index) { return (static_cast<double>(index) - 1.0) / span * plot; };
    char buf[256];

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
           "viewBox=\"0 0 640 640\" font-family=\"sans-serif\" font-size=\"9\">\n";
    out << "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.1f\" y=\"%.1f\" width=\"%.1f\" height=\"%.1f\" fill=\"none\" "
                  "stroke=\"black\"/>\n",
                  kMargin, kMargin, plot, plot);
    out << buf;
    const char* xl = volume ? "ImportRank K&#770;" : "PageRank K";
    const char* yl = volume ? "ExportRank K&#770;*" : "CheiRank K*";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"320\" y=\"624\" text-anchor=\"middle\" font-size=\"13\">%s</text>\n"
                  "<text x=\"18\" y=\"320\" text-anchor=\"middle\" font-size=\"13\" "
                  "transform=\"rotate(-90 18 320)\">%s</text>\n",
                  xl, yl);
    out << buf;
    for (std::size_t tick = 1; tick < cutoff; tick += 10) {
        std::snprintf(buf, sizeof buf,
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"middle\">%zu</text>\n"
                      "<text x=\"%.1f\" y=\"%.1f\" text-anchor=\"end\">%zu</text>\n",
                      kMargin + at(tick), kSize - kMargin + 14.0, tick, kMargin - 6.0,
                      kSize - kMargin - at(tick) + 3.0, tick);
        out << buf;
    }
    const auto& k = volume ? t.khat : t.k;
    const auto& ks = volume ? t.khatstar : t.kstar;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (k[i] >= cutoff || ks[i] >= cutoff) continue;
        const double x = kMargin + at(k[i]);
        const double y = kSize - kMargin - at(ks[i]);
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.1f\" cy=\"%.1f\" r=\"4\" fill=\"#3465a4\" "
                      "fill-opacity=\"0.7\"/><text x=\"%.1f\" y=\"%.1f\">",
                      x, y, x + 5.0, y - 5.0);
        out << buf << t.entities[i] << "</text>\n";
    }
    out << "</svg>\n";
}

std::size_t country_index(const MoneyMatrix& money, const std::string& code) {
    return money.registry().index_of(money.registry().canonical(code));
}

std::string target_tag(const PerturbationTarget& target, const CountryRegistry& registry) {
    if (const auto* g = std::get_if<GlobalProduct>(&target)) return "p" + std::to_string(g->product);
    const auto& cp = std::get<CountryProduct>(target);
    return registry.code(cp.country) + "_p" + std::to_string(cp.product);
}

} // namespace

RunConfig resolve(RunConfig c) {
    if (c.input.empty()) {
        const char* dir = std::getenv("WTN_DATA_DIR");
        if (dir == nullptr || *dir == '\0')
            throw Error("no --input given and WTN_DATA_DIR is not set");
        c.input = fs::path(dir) / ("trade_" + std::to_string(c.year) + ".csv");
    }
    if (!fs::exists(c.input)) throw Error("input file not found: " + c.input.string());
    if (c.aggregate && !fs::exists(*c.aggregate))
        throw Error("aggregation file not found: " + c.aggregate->string());
    if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw Error("--alpha must lie in (0, 1)");
    if (!(c.tol > 0.0)) throw Error("--tol must be positive");
    if (!(c.step > 0.0 && c.step < 1.0)) throw Error("--step must lie in (0, 1)");
    for (auto p : c.sens_products)
        if (p >= ProductCatalog::size()) throw Error("--sens-product must be a digit 0-9");
    if (c.k == 0) throw Error("--k must be positive");
    return c;
}

MoneyMatrix load(const RunConfig& c) {
    AggregationMap aggregation;
    if (c.aggregate) {
        std::ifstream in(*c.aggregate, std::ios::binary);
        if (!in) throw Error("cannot read " + c.aggregate->string());
        aggregation = parse_aggregation(in);
    }
    std::ifstream in(c.input, std::ios::binary);
    if (!in) throw Error("cannot read " + c.input.string());
    try {
        return load_money_matrix(in, c.year, aggregation);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), c.input.string() + ": " + e.what());
    }
}

std::vector<fs::path> cmd_rank(const RunConfig& c, const MoneyMatrix& money) {
    const auto ranking = rank_network(money, rank_options(c));
    require_converged(ranking);
    const auto& registry = money.registry();
    const auto countries = country_rank_table(ranking, registry);

    Output out(c);
    out.write("ranks_countries.csv", [&](std::ostream& o) { write_rank_table(o, countries); });
    out.write("ranks_products.csv",
              [&](std::ostream& o) { write_rank_table(o, product_rank_table(ranking)); });
    out.write("ranks_nodes.csv",
              [&](std::ostream& o) { write_rank_table(o, node_rank_table(ranking, registry)); });
    out.write("top_countries.csv", [&](std::ostream& o) { write_top_table(o, countries, c.top); });
    out.write("plane_gma.csv",
              [&](std::ostream& o) { write_plane_csv(o, countries, false, c.index_cutoff); });
    out.write("plane_iea.csv",
              [&](std::ostream& o) { write_plane_csv(o, countries, true, c.index_cutoff); });
    if (c.svg) {
        out.write("plane_gma.svg",
                  [&](std::ostream& o) { write_plane_svg(o, countries, false, c.index_cutoff); });
        out.write("plane_iea.svg",
                  [&](std::ostream& o) { write_plane_svg(o, countries, true, c.index_cutoff); });
    }
    out.write("volumes.csv", [&](std::ostream& o) {
        std::vector<double> imports(money.country_count(), 0.0), exports(money.country_count(), 0.0);
        for (const auto& e : money.entries()) {
            imports[e.importer] += e.value;
            exports[e.exporter] += e.value;
        }
        o << "country,import_usd,export_usd\n";
        for (std::size_t i = 0; i < imports.size(); ++i)
            o << registry.code(i) << ',' << format_double(imports[i]) << ','
              << format_double(exports[i]) << '\n';
    });
    if (c.dump_matrix) {
        for (auto d : {Direction::direct, Direction::inverted}) {
            const auto g = build_google(money, d, c.alpha, c.personalization);
            const auto stem = "google_" + std::string(to_string(d));
            out.write(stem + ".triplets.csv", [&](std::ostream& o) { write_triplets(o, g); });
            out.write(stem + ".meta", [&](std::ostream& o) { write_sidecar(o, g); });
        }
    }
    json manifest = run_json(c, money);
    manifest["command"] = "rank";
    manifest["pagerank"] = report_json(ranking.pagerank_report);
    manifest["cheirank"] = report_json(ranking.cheirank_report);
    manifest["top"] = c.top;
    manifest["index_cutoff"] = c.index_cutoff;
    out.write_json("rank_manifest.json", manifest);
    return out.take();
}

std::vector<fs::path> cmd_balance(const RunConfig& c, const MoneyMatrix& money) {
    const auto ranking = rank_network(money, rank_options(c));
    require_converged(ranking);
    const auto gma = country_balance(ranking, ProbabilitySource::gma);
    const auto iea = country_balance(ranking, ProbabilitySource::iea);

    Output out(c);
    out.write("balance.csv", [&](std::ostream& o) {
        o << "country,B_gma,B_iea\n";
        for (std::size_t i = 0; i < gma.size(); ++i)
            o << money.registry().code(i) << ',' << optional_text(gma.values[i]) << ','
              << optional_text(iea.values[i]) << '\n';
    });
    return out.take();
}

std::vector<fs::path> cmd_sensitivity(const RunConfig& c, const MoneyMatrix& money) {
    const auto& registry = money.registry();
    std::vector<PerturbationTarget> targets;
    for (auto p : c.sens_products) {
        if (c.sens_country) {
            targets.push_back(CountryProduct{country_index(money, *c.sens_country), p});
        } else {
            targets.push_back(GlobalProduct{p});
        }
    }

    Output out(c);
    for (const auto& target : targets) {
        const auto tag = "sensitivity_" + target_tag(target, registry);
        json manifest = run_json(c, money);
        manifest["command"] = "sensitivity";
        manifest["target"] = describe(target, registry);
        manifest["side"] = c.side == PerturbationSide::exports ? "exports" : "imports";
        manifest["step"] = c.step;
        manifest["method"] = "central difference";

        std::vector<std::pair<ProbabilitySource, RichardsonDiagnostic>> diagnostics;
        for (auto source : {ProbabilitySource::gma, ProbabilitySource::iea}) {
            SensitivityConfig config;
            config.target = target;
            config.step = c.step;
            config.source = source;
            config.side = c.side;
            config.rank = rank_options(c);
            const auto result = balance_sensitivity(money, config);
            const auto name = tag + "_" + std::string(to_string(source)) + ".csv";
            out.write(name, [&](std::ostream& o) {
                o << "country,dB_ddelta\n";
                for (std::size_t i = 0; i < result.values.size(); ++i)
                    o << registry.code(i) << ',' << optional_text(result.values[i]) << '\n';
            });
            json stats = json::array();
            for (const auto& r : result.reports) stats.push_back(report_json(r));
            manifest["solver"][std::string(to_string(source))] = stats;
            diagnostics.emplace_back(source, richardson_check(money, config));
        }
        out.write(tag + "_richardson.csv", [&](std::ostream& o) {
            o << "country,source,D_h,D_h2,D_h4,ratio\n";
            for (const auto& [source, d] : diagnostics)
                for (std::size_t i = 0; i < d.d_h.size(); ++i)
                    o << registry.code(i) << ',' << to_string(source) << ','
                      << optional_text(d.d_h[i]) << ',' << optional_text(d.d_half[i]) << ','
                      << optional_text(d.d_quarter[i]) << ',' << optional_text(d.ratio[i]) << '\n';
        });
        out.write_json(tag + "_manifest.json", manifest);
    }
    return out.take();
}

std::vector<std::string> default_subset(const MoneyMatrix& money, const RankOptions& options) {
    const std::vector<std::string> preferred = {"EUU", "USA", "CHN", "RUS"};
    const auto& registry = money.registry();
    if (std::all_of(preferred.begin(), preferred.end(),
                    [&](const auto& code) { return registry.find(code).has_value(); }))
        return preferred;
    const auto ranking = rank_network(money, options);
    require_converged(ranking);
    const auto table = country_rank_table(ranking, registry);
    const auto by_rank = invert_indexes(table.k);
    std::vector<std::string> codes;
    for (std::size_t r = 0; r < std::min<std::size_t>(4, by_rank.size() - 1); ++r)
        codes.push_back(registry.code(by_rank[r]));
    return codes;
}

std::vector<fs::path> cmd_regomax(const RunConfig& c, const MoneyMatrix& money) {
    const auto codes = c.subset.empty() ? default_subset(money, rank_options(c)) : c.subset;
    std::vector<std::size_t> countries;
    for (const auto& code : codes) countries.push_back(country_index(money, code));
    const NodeSpace space(money);
    const auto subset = NodeSubset::of_countries(countries, space);

    Output out(c);
    json manifest = run_json(c, money);
    manifest["command"] = "regomax";
    manifest["subset"] = codes;
    manifest["k"] = c.k;
    manifest["semantics"] = c.semantics == FriendSemantics::column ? "column" : "row";
    for (auto d : {Direction::direct, Direction::inverted}) {
        const auto g = build_google(money, d, c.alpha, c.personalization);
        const auto reduced = reduced_google_matrix(g, subset);
        const auto friends = friends_network(reduced, c.k, c.semantics);
        const auto name = std::string(to_string(d));
        out.write("regomax_" + name + ".csv", [&](std::ostream& o) {
            write_reduced_matrix(o, reduced, money.registry(), space);
        });
        out.write("friends_" + name + ".csv",
                  [&](std::ostream& o) { write_friends(o, friends, money.registry(), space); });
        manifest["nodes"] = subset.size();
    }
    out.write_json("regomax_manifest.json", manifest);
    return out.take();
}

std::vector<fs::path> cmd_pipeline(const RunConfig& c, const MoneyMatrix& money) {
    std::vector<fs::path> all;
    for (auto* cmd : {&cmd_rank, &cmd_balance, &cmd_sensitivity, &cmd_regomax}) {
        auto files = cmd(c, money);
        all.insert(all.end(), files.begin(), files.end());
    }
    return all;
}

} // namespace wtn::cli
