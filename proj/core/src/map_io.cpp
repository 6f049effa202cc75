#include "syncvar/map_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "syncvar/errors.hpp"

namespace syncvar {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError("map file: " + path + ": " + what);
}

Rational rational_field(const json& v, const std::string& path) {
    std::string text;
    if (v.is_string()) {
        text = v.get<std::string>();
    } else if (v.is_number_integer()) {
        text = std::to_string(v.get<long long>());
    } else {
        fail(path, "expected an exact rational string like \"1/4\"");
    }
    try {
        return Rational::parse(text);
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

std::vector<Rational> rational_array(const json& v, const std::string& path) {
    if (!v.is_array()) fail(path, "expected an array");
    std::vector<Rational> out;
    out.reserve(v.size());
    for (size_t i = 0; i < v.size(); ++i)
        out.push_back(rational_field(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::string rat(const Rational& r, bool exact) {
    return exact ? r.str() : r.decimal_str();
}

ordered enclosure_json(const Enclosure& e) {
    return ordered{{"lo", format_significant(e.lo)}, {"hi", format_significant(e.hi)}};
}

ordered root_json(const RootEnclosure& r, bool exact) {
    ordered j;
    j["lo"] = rat(r.lo, exact);
    j["hi"] = rat(r.hi, exact);
    j["exact"] = r.exact;
    return j;
}

ordered witness_json(const ExceptionalWitness& w, bool exact) {
    ordered j;
    j["kind"] = w.kind == WitnessKind::SlopeMismatch ? "slope-mismatch" : "discontinuity";
    j["breakpoint"] = rat(w.a, exact);
    j["preimage"] = rat(w.z.x, exact);
    j["preimage_side"] = std::string(1, side_char(w.z.side));
    j["depth"] = w.n;
    ordered path = ordered::array();
    for (const auto& x : w.path) path.push_back(rat(x, exact));
    j["path"] = std::move(path);
    return j;
}

ordered polynomial_json(const GammaPolynomial& g) {
    ordered j;
    ordered coeffs = ordered::array();
    for (int i = 0; i <= g.poly.degree(); ++i) coeffs.push_back(g.poly.coeff(i).str());
    j["coefficients"] = std::move(coeffs);
    j["degree"] = g.poly.degree();
    j["degree_bound"] = g.degree_bound;
    j["stripped_zero_order"] = g.stripped_zero_order;
    return j;
}

} // namespace

std::string format_significant(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

MapDocument parse_map_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("map file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("map file: top level must be an object");
    if (!doc.contains("breakpoints")) fail("breakpoints", "missing");
    if (!doc.contains("images")) fail("images", "missing");

    std::vector<Rational> breakpoints = rational_array(doc["breakpoints"], "breakpoints");

    const json& images = doc["images"];
    if (!images.is_array()) fail("images", "expected an array");
    if (breakpoints.size() < 2 || images.size() + 1 != breakpoints.size())
        fail("images", "expected exactly " +
                           std::to_string(breakpoints.size() < 2 ? 0 : breakpoints.size() - 1) +
                           " [left,right] image pairs for " + std::to_string(breakpoints.size()) +
                           " breakpoints");
    std::vector<std::pair<Rational, Rational>> pairs;
    pairs.reserve(images.size());
    for (size_t i = 0; i < images.size(); ++i) {
        const std::string path = "images[" + std::to_string(i) + "]";
        if (!images[i].is_array() || images[i].size() != 2)
            fail(path, "expected a [left,right] pair");
        pairs.emplace_back(rational_field(images[i][0], path + "[0]"),
                           rational_field(images[i][1], path + "[1]"));
    }

    MapDocument result{PiecewiseAffineMap::build(std::move(breakpoints), std::move(pairs)), {}};

    if (doc.contains("name")) {
        if (!doc["name"].is_string()) fail("name", "expected a string");
        result.name = doc["name"].get<std::string>();
    }
    if (doc.contains("expected_partition")) {
        std::vector<Rational> expected = rational_array(doc["expected_partition"], "expected_partition");
        const auto& actual = result.map.breakpoints();
        if (expected.size() != actual.size())
            fail("expected_partition", "has " + std::to_string(expected.size()) +
                                           " points but the map has " +
                                           std::to_string(actual.size()) + " breakpoints");
        for (size_t i = 0; i < expected.size(); ++i)
            if (expected[i] != actual[i])
                fail("expected_partition[" + std::to_string(i) + "]",
                     "is " + expected[i].str() + " but the map breakpoint is " + actual[i].str());
    }
    return result;
}

MapDocument load_map_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read map file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_map_json(buf.str());
}

std::string map_to_json(const PiecewiseAffineMap& map, const std::string& name) {
    ordered j;
    if (!name.empty()) j["name"] = name;
    ordered bps = ordered::array();
    for (const auto& b : map.breakpoints()) bps.push_back(b.str());
    j["breakpoints"] = std::move(bps);
    ordered images = ordered::array();
    for (int a = 0; a < map.atom_count(); ++a)
        images.push_back(ordered::array({map.image_left(a).str(), map.image_right(a).str()}));
    j["images"] = std::move(images);
    return j.dump(2) + "\n";
}

std::string regimes_report_json(const MapAnalysis& analysis, const std::string& name, bool exact) {
    const RegimeThresholds& t = analysis.thresholds;
    ordered j;
    if (!name.empty()) j["name"] = name;
    j["atoms"] = analysis.matrix.n;
    ordered matrix = ordered::array();
    for (int i = 0; i < analysis.matrix.n; ++i) {
        ordered row = ordered::array();
        for (int k = 0; k < analysis.matrix.n; ++k) row.push_back(analysis.matrix.at(i, k) ? 1 : 0);
        matrix.push_back(std::move(row));
    }
    j["matrix"] = std::move(matrix);
    j["irreducible"] = analysis.matrix.irreducible;
    j["expanding"] = analysis.map.expanding();
    j["max_slope"] = rat(t.K, exact);
    j["gamma_lipschitz"] = rat(t.gamma_lipschitz, exact);
    j["gamma_variation"] = ordered{{"lo", rat(t.gamma_variation_lo, exact)},
                                   {"hi", rat(t.gamma_variation_hi, exact)}};
    j["gamma_lyapunov"] = enclosure_json(t.gamma_lyapunov);
    j["entropy"] = enclosure_json(t.entropy.h);
    j["lyapunov_exponent"] = enclosure_json(t.acim.lyapunov);

    // Candidate couplings must defeat every witness at once, so only the
    // common roots count, and only those meeting (e^{-h_top}, 1).
    ordered candidates = ordered::array();
    for (const auto& r : common_candidate_roots(analysis.polynomials))
        if (r.hi > t.gamma_variation_lo && r.lo < Rational(1))
            candidates.push_back(root_json(r, exact));
    j["exceptional_candidates"] = std::move(candidates);
    return j.dump(2) + "\n";
}

std::string exceptional_report_json(const MapAnalysis& analysis, const std::string& name,
                                    bool exact) {
    ordered j;
    if (!name.empty()) j["name"] = name;
    ordered list = ordered::array();
    for (const auto& g : analysis.polynomials) {
        ordered w = witness_json(g.witness, exact);
        w["polynomial"] = polynomial_json(g);
        ordered roots = ordered::array();
        for (const auto& r : g.roots_in_window) roots.push_back(root_json(r, exact));
        w["roots"] = std::move(roots);
        list.push_back(std::move(w));
    }
    j["witnesses"] = std::move(list);
    ordered common = ordered::array();
    for (const auto& r : common_candidate_roots(analysis.polynomials))
        common.push_back(root_json(r, exact));
    j["common_roots"] = std::move(common);
    return j.dump(2) + "\n";
}

std::string variation_report_json(const VariationReport& rep, bool exact) {
    ordered j;
    j["gamma"] = rat(rep.gamma, exact);
    j["regime"] = regime_name(rep.regime);
    j["verdict"] = verdict_name(rep.verdict);
    ordered upper;
    upper["available"] = rep.upper.available;
    if (rep.upper.available)
        upper["value"] = rat(rep.upper.value, exact);
    else
        upper["reason"] = rep.upper.reason;
    j["upper_bound"] = std::move(upper);
    ordered lows = ordered::array();
    for (const auto& [depth, value] : rep.lower_bounds)
        lows.push_back(ordered{{"depth", depth}, {"value", rat(value, exact)}});
    j["lower_bounds"] = std::move(lows);
    if (rep.certificate) {
        const DivergenceCertificate& c = *rep.certificate;
        ordered cert;
        ordered cycle = ordered::array();
        for (const auto& x : c.cycle) cycle.push_back(rat(x, exact));
        cert["cycle"] = std::move(cycle);
        cert["gap"] = rat(c.gap, exact);
        ordered growth = ordered::array();
        for (const auto& t : c.growth_terms)
            growth.push_back(ordered{{"n", t.n},
                                     {"cylinders", t.cylinder_count.str()},
                                     {"term", rat(t.term, exact)}});
        cert["growth"] = std::move(growth);
        j["certificate"] = std::move(cert);
    }
    return j.dump(2) + "\n";
}

std::string growth_table_csv(const DivergenceCertificate& cert) {
    std::string out = "n,cylinders,bound\n";
    for (const auto& t : cert.growth_terms) {
        out += std::to_string(t.n);
        out += ',';
        out += t.cylinder_count.str();
        out += ',';
        out += t.term.decimal_str();
        out += '\n';
    }
    return out;
}

} // namespace syncvar
