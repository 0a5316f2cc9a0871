// dimer: command-line front end over the dimer library.
//
// Exit codes: 0 success, 1 domain error (invalid model, degenerate polygon,
// no perfect matching), 2 I/O or parse error. Errors go to stderr as JSON.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dimer/dimer.hpp"

namespace {

using dimer::Json;

void emit_error(const std::string& kind, const std::string& message) {
    Json j{{"error", kind}, {"message", message}};
    std::cerr << j.dump() << '\n';
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw dimer::ParseError("cannot write '" + path + "'");
    out << text;
    if (!out) throw dimer::ParseError("failed writing '" + path + "'");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<std::string> split_ids(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

dimer::PerfectMatching matching_from_ids(const dimer::TorusGraph& g, const std::string& list) {
    dimer::PerfectMatching m;
    for (const auto& id : split_ids(list)) m.edges.push_back(g.edge_index(id));
    std::sort(m.edges.begin(), m.edges.end());
    if (!dimer::is_perfect_matching(g, m)) throw dimer::DomainError("--ref is not a perfect matching");
    return m;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dimer models on the torus: matchings, polygons, consistency and cancellativization"};
    app.require_subcommand(1);

    std::string file;
    std::string out_path;

    auto* validate = app.add_subcommand("validate", "Check that a model is a dimer model");
    validate->add_option("file", file, "Model JSON")->required();

    std::string ref;
    auto* matchings = app.add_subcommand("matchings", "Enumerate perfect matchings with height changes");
    matchings->add_option("file", file, "Model JSON")->required();
    matchings->add_option("--ref", ref, "Reference matching as comma-separated edge ids");

    auto* charpoly = app.add_subcommand("charpoly", "Characteristic polynomial");
    charpoly->add_option("file", file, "Model JSON")->required();

    std::string kind = "char";
    auto* polygon = app.add_subcommand("polygon", "Characteristic or zigzag polygon (canonical form)");
    polygon->add_option("file", file, "Model JSON")->required();
    polygon->add_option("--kind", kind, "char or zigzag")->check(CLI::IsMember({"char", "zigzag"}));

    auto* check = app.add_subcommand("check", "Consistency report with witnesses");
    check->add_option("file", file, "Model JSON")->required();

    std::string preserve = "zigzag";
    std::string log_path;
    auto* cancel = app.add_subcommand("cancel", "Remove edges until the model is consistent");
    cancel->add_option("file", file, "Model JSON")->required();
    cancel->add_option("--preserve", preserve, "Polygon to keep: zigzag or char")
        ->check(CLI::IsMember({"zigzag", "char"}));
    cancel->add_option("--out", out_path, "Output model (default stdout)");
    cancel->add_option("--log", log_path, "Rewrite log, JSON lines");

    std::string family = "hex";
    int rows = 3;
    int cols = 3;
    double p = 0.1;
    std::uint64_t seed = 0;
    auto* gen = app.add_subcommand("gen", "Random subgraph of a lattice model");
    gen->add_option("--family", family, "hex or square")->check(CLI::IsMember({"hex", "square"}));
    gen->add_option("--rows", rows, "Supercell rows")->check(CLI::PositiveNumber);
    gen->add_option("--cols", cols, "Supercell columns")->check(CLI::PositiveNumber);
    gen->add_option("--delete", p, "Edge deletion probability")->check(CLI::Range(0.0, 0.999));
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--out", out_path, "Output model (default stdout)");

    std::string highlight;
    auto* render = app.add_subcommand("render", "SVG of the fundamental domain");
    render->add_option("file", file, "Model JSON")->required();
    render->add_option("--out", out_path, "SVG path (default stdout)");
    render->add_option("--highlight", highlight, "Comma-separated edge ids to emphasise");

    std::size_t n = 100;
    std::string census_family = "mixed";
    std::optional<double> census_p;
    unsigned threads = 0;
    auto* census = app.add_subcommand("census", "CSV census of random models, one row per seed");
    census->add_option("--n", n, "Number of models");
    census->add_option("--family", census_family, "hex, square or mixed (alternating by seed)")
        ->check(CLI::IsMember({"hex", "square", "mixed"}));
    census->add_option("--seed", seed, "First seed; record i uses seed + i");
    census->add_option("--rows", rows, "Supercell rows")->check(CLI::PositiveNumber);
    census->add_option("--cols", cols, "Supercell columns")->check(CLI::PositiveNumber);
    census->add_option("--delete", census_p, "Deletion probability (default alternates 0.1 / 0.2)")
        ->check(CLI::Range(0.0, 0.999));
    census->add_option("--threads", threads, "Worker threads (0 = all cores)");
    census->add_option("--out", out_path, "CSV path (default stdout)");

    std::string format = "json";
    auto* quiver = app.add_subcommand("quiver", "Dual quiver with relations");
    quiver->add_option("file", file, "Model JSON")->required();
    quiver->add_option("--format", format, "json or dot")->check(CLI::IsMember({"json", "dot"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("usage", e.what());
        return 2;
    }

    try {
        if (*validate) {
            auto outcome = dimer::validate(dimer::load_raw_graph(file));
            std::cout << dump(dimer::to_json(outcome.report));
            return outcome.report.ok() ? 0 : 1;
        }
        if (*gen) {
            auto m = dimer::random_model(dimer::family_from_string(family), rows, cols, p, seed);
            write_output(out_path, dimer::serialize(m.graph));
            return 0;
        }
        if (*census) {
            std::vector<dimer::ModelParams> params;
            for (std::size_t i = 0; i < n; ++i) {
                auto mp = dimer::standard_params(seed + i);
                if (census_family != "mixed") mp.family = dimer::family_from_string(census_family);
                if (census_p) mp.p = *census_p;
                mp.rows = rows;
                mp.cols = cols;
                params.push_back(mp);
            }
            write_output(out_path, dimer::census_csv(dimer::run_census(params, threads)));
            return 0;
        }

        auto g = dimer::load_graph(file);
        if (*matchings) {
            std::optional<dimer::PerfectMatching> r;
            if (!ref.empty()) r = matching_from_ids(g, ref);
            auto c = dimer::MatchingCensus::of(g, r);
            c.require_matching();
            std::cout << dump(dimer::to_json(g, c));
        } else if (*charpoly) {
            std::cout << dump(dimer::to_json(dimer::characteristic_polynomial(g)));
        } else if (*polygon) {
            auto poly = kind == "char" ? dimer::characteristic_polygon(g) : dimer::zigzag_polygon(g);
            std::cout << dimer::to_json(poly).dump() << '\n';
        } else if (*check) {
            Json j = dimer::to_json(g, dimer::is_consistent(g));
            j["zigzag_paths"] = dimer::to_json(g, dimer::zigzag_paths(g));
            std::cout << dump(j);
        } else if (*cancel) {
            auto res = preserve == "char" ? dimer::cancellativize_char(g) : dimer::cancellativize_zigzag(g);
            write_output(out_path, dimer::serialize(res.graph));
            if (!log_path.empty()) write_output(log_path, res.log.to_jsonl());
        } else if (*render) {
            dimer::RenderOptions opt;
            for (const auto& id : split_ids(highlight)) opt.highlight.insert(id);
            write_output(out_path, dimer::render_svg(g.raw(), opt));
        } else if (*quiver) {
            auto q = dimer::derive_quiver(g);
            std::cout << (format == "dot" ? dimer::to_dot(q) : dump(dimer::to_json(q)));
        }
        return 0;
    } catch (const dimer::ParseError& e) {
        emit_error("parse", e.what());
        return 2;
    } catch (const dimer::DomainError& e) {
        emit_error("domain", e.what());
        return 1;
    } catch (const dimer::InternalError& e) {
        emit_error("internal", e.what());
        return 1;
    } catch (const std::exception& e) {
        emit_error("unexpected", e.what());
        return 1;
    }
}
