// Command line front end: validate map files, report coupling regimes, graph
// the sync function, bound its variation, scan a coupling grid, and isolate
// exceptional couplings.  All numeric output is either exact rational text
// or 15-significant-digit decimals, so repeated runs are byte-identical.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "syncvar/errors.hpp"
#include "syncvar/map_io.hpp"
#include "syncvar/variation.hpp"

using namespace syncvar;

namespace {

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write output file: " + path);
    out << text;
}

Gamma parse_gamma(const std::string& text) { return Gamma(Rational::parse(text)); }

std::string render(const Rational& r, bool exact) { return exact ? r.str() : r.decimal_str(); }

struct CommonArgs {
    std::string file;
    std::string out;
    std::string format = "csv";
    bool exact = false;
};

int run_validate(const CommonArgs& args) {
    MapDocument doc = load_map_file(args.file);
    std::string report;
    if (!doc.name.empty()) report += "name: " + doc.name + "\n";
    report += "atoms: " + std::to_string(doc.map.atom_count()) + "\n";
    report += "breakpoints:";
    for (const auto& b : doc.map.breakpoints()) report += " " + b.str();
    report += "\nmax_slope: " + doc.map.max_abs_slope().str() + "\n";
    report += "expanding: yes\n";

    TransitionMatrix matrix = validate_markov(doc.map);
    report += "markov: yes\nmatrix:\n";
    for (int i = 0; i < matrix.n; ++i) {
        for (int j = 0; j < matrix.n; ++j) report += (j ? " " : "") + std::string(matrix.at(i, j) ? "1" : "0");
        report += "\n";
    }
    if (!matrix.irreducible)
        throw ValidationError("transition matrix is not transitive: the atom graph has " +
                              std::to_string(1 + *std::max_element(matrix.component_of.begin(),
                                                                   matrix.component_of.end())) +
                              " strongly connected components");
    report += "transitive: yes\n";
    write_output(report, args.out);
    return 0;
}

int run_regimes(const CommonArgs& args) {
    MapDocument doc = load_map_file(args.file);
    MapAnalysis analysis = analyze_map(doc.map);
    write_output(regimes_report_json(analysis, doc.name, args.exact), args.out);
    return 0;
}

int run_exceptional(const CommonArgs& args) {
    MapDocument doc = load_map_file(args.file);
    MapAnalysis analysis = analyze_map(doc.map);
    write_output(exceptional_report_json(analysis, doc.name, args.exact), args.out);
    return 0;
}

int run_graph(const CommonArgs& args, const std::string& gamma_str, long points,
              const std::string& tol_str) {
    MapDocument doc = load_map_file(args.file);
    Gamma gamma = parse_gamma(gamma_str);
    Rational tol = Rational::parse(tol_str);
    if (tol.sign() <= 0) throw ValidationError("tolerance must be positive");
    if (!args.exact && tol < Rational(1, 10000000000000L))
        throw ValidationError("tolerance below double precision; use --exact");

    // One row per grid point, two rows (both one-sided limits) per interior
    // breakpoint.  Evaluating at tol/2 keeps the printed error bound at or
    // below the requested tolerance after conversion slop.
    std::map<Rational, std::set<Side>> rows;
    rows[Rational(0)] = {Side::Right};
    rows[Rational(1)] = {Side::Left};
    const auto& bps = doc.map.breakpoints();
    for (size_t i = 1; i + 1 < bps.size(); ++i) rows[bps[i]] = {Side::Left, Side::Right};
    for (long i = 1; i + 1 < points; ++i) {
        Rational x(i, points - 1);
        if (!doc.map.is_breakpoint(x)) rows[x] = {Side::Right};
    }
    Rational half_tol = tol / Rational(2);

    bool json = args.format == "json";
    std::string out;
    if (!json) out = "x,side,phi,error_bound\n";
    bool first = true;
    if (json) out = "[\n";
    for (const auto& [x, sides] : rows) {
        for (Side side : sides) {
            SyncValue v = eval_sync(doc.map, SidedPoint{x, side}, gamma, half_tol);
            std::string xs = render(x, args.exact);
            std::string phi = args.exact ? v.exact_value->str() : format_significant(v.value);
            std::string err = args.exact ? v.exact_error->str() : format_significant(v.error_bound);
            if (json) {
                if (!first) out += ",\n";
                out += "  {\"x\": \"" + xs + "\", \"side\": \"" + side_char(side) +
                       "\", \"phi\": \"" + phi + "\", \"error_bound\": \"" + err + "\"}";
                first = false;
            } else {
                out += xs + "," + side_char(side) + "," + phi + "," + err + "\n";
            }
        }
    }
    if (json) out += "\n]\n";
    write_output(out, args.out);
    return 0;
}

int run_variation(const CommonArgs& args, const std::string& gamma_str, int depth, int kmax) {
    MapDocument doc = load_map_file(args.file);
    Gamma gamma = parse_gamma(gamma_str);
    MapAnalysis analysis = analyze_map(doc.map);
    VariationOptions opts;
    opts.kmax = kmax;
    opts.max_depth = depth;
    VariationReport rep = analyze_variation(analysis, gamma, opts);
    if (args.format == "csv") {
        if (!rep.certificate)
            throw ValidationError("no divergence certificate at gamma = " + gamma.value().str() +
                                  "; the growth table needs one (verdict: " +
                                  verdict_name(rep.verdict) + ")");
        write_output(growth_table_csv(*rep.certificate), args.out);
    } else {
        write_output(variation_report_json(rep, args.exact), args.out);
    }
    return 0;
}

int run_scan(const CommonArgs& args, const std::string& grid, int depth, int kmax) {
    MapDocument doc = load_map_file(args.file);
    auto c1 = grid.find(':');
    auto c2 = grid.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw ValidationError("grid must be lo:hi:step, e.g. 0.05:0.95:0.05");
    Rational lo = Rational::parse(grid.substr(0, c1));
    Rational hi = Rational::parse(grid.substr(c1 + 1, c2 - c1 - 1));
    Rational step = Rational::parse(grid.substr(c2 + 1));
    if (step.sign() <= 0) throw ValidationError("grid step must be positive");
    if (!(Rational(0) < lo && lo <= hi && hi < Rational(1)))
        throw ValidationError("grid must satisfy 0 < lo <= hi < 1");

    MapAnalysis analysis = analyze_map(doc.map);
    SubdivisionProfile profile = SubdivisionProfile::build(doc.map, depth);

    std::string out = "gamma,regime,verdict,lower_bound,upper_bound\n";
    for (Rational x = lo; x <= hi; x += step) {
        Gamma gamma(x);
        Regime regime = classify_regime(analysis, gamma);
        VariationVerdict verdict = variation_verdict(analysis, gamma, regime);
        Rational lower = profile.lower_bound(gamma);
        UpperBoundResult upper = variation_upper_bound(doc.map, analysis.matrix,
                                                       analysis.thresholds.entropy, gamma, kmax);
        out += render(x, args.exact);
        out += ",";
        out += regime_name(regime);
        out += ",";
        out += verdict_name(verdict);
        out += ",";
        out += render(lower, args.exact);
        out += ",";
        out += upper.available ? render(upper.value, args.exact) : "unavailable";
        out += "\n";
    }
    write_output(out, args.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sync functions of expanding piecewise affine Markov maps: exact evaluation, "
                 "variation bounds, and coupling regimes"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string gamma_str;
    std::string tol_str = "0.000000001";
    std::string grid;
    long points = 1000;
    int depth = 8;
    int kmax = 256;

    auto add_common = [&](CLI::App* cmd, bool with_format) {
        cmd->add_option("map-file", args.file, "JSON map description")->required();
        cmd->add_option("--out", args.out, "write the report to this file instead of stdout");
        cmd->add_flag("--exact", args.exact, "print exact rationals instead of decimals");
        if (with_format)
            cmd->add_option("--format", args.format, "output format")
                ->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* validate = app.add_subcommand("validate", "Check the Markov partition conditions");
    validate->add_option("map-file", args.file, "JSON map description")->required();
    validate->add_option("--out", args.out, "write the report to this file instead of stdout");

    CLI::App* regimes =
        app.add_subcommand("regimes", "Coupling thresholds, entropy, Lyapunov exponent");
    add_common(regimes, false);

    CLI::App* graph = app.add_subcommand("graph", "Tabulate the sync function on a grid");
    add_common(graph, true);
    graph->add_option("--gamma", gamma_str, "coupling in (0,1), decimal or p/q")->required();
    graph->add_option("--points", points, "grid point count")->check(CLI::Range(2L, 100000000L));
    graph->add_option("--tol", tol_str, "evaluation tolerance, decimal or p/q");

    CLI::App* variation =
        app.add_subcommand("variation", "Variation bounds and verdict at one coupling");
    add_common(variation, true);
    variation->add_option("--gamma", gamma_str, "coupling in (0,1), decimal or p/q")->required();
    variation->add_option("--depth", depth, "deepest subdivision level")->check(CLI::Range(0, 30));
    variation->add_option("--kmax", kmax, "series truncation length")->check(CLI::Range(1, 100000));
    variation->get_option("--format")->default_str("json");

    CLI::App* scan = app.add_subcommand("scan", "Sweep a coupling grid");
    add_common(scan, false);
    scan->add_option("grid", grid, "coupling grid lo:hi:step")->required();
    scan->add_option("--depth", depth, "subdivision level for lower bounds")
        ->check(CLI::Range(0, 30));
    scan->add_option("--kmax", kmax, "series truncation length")->check(CLI::Range(1, 100000));

    CLI::App* exceptional =
        app.add_subcommand("exceptional", "Witness equations and exceptional couplings");
    add_common(exceptional, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    // variation defaults to JSON unless --format csv was given explicitly.
    if (app.got_subcommand(variation) && variation->get_option("--format")->count() == 0)
        args.format = "json";

    try {
        if (app.got_subcommand(validate)) return run_validate(args);
        if (app.got_subcommand(regimes)) return run_regimes(args);
        if (app.got_subcommand(graph)) return run_graph(args, gamma_str, points, tol_str);
        if (app.got_subcommand(variation)) return run_variation(args, gamma_str, depth, kmax);
        if (app.got_subcommand(scan)) return run_scan(args, grid, depth, kmax);
        if (app.got_subcommand(exceptional)) return run_exceptional(args);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
