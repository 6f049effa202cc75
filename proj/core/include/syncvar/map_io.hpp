#pragma once

#include <string>

#include "syncvar/variation.hpp"

namespace syncvar {

// A map file: exact rational breakpoints and per-atom endpoint images, plus
// optional metadata.
struct MapDocument {
    PiecewiseAffineMap map;
    std::string name;
};

// Parses {"breakpoints": ["0","1/4","1"], "images": [["0","1"],["1","0"]]}
// with optional "name" and "expected_partition" (cross-checked against the
// breakpoints).  All failures are ValidationErrors naming the field.
MapDocument parse_map_json(const std::string& text);
MapDocument load_map_file(const std::string& path);

std::string map_to_json(const PiecewiseAffineMap& map, const std::string& name = "");

// snprintf %.{digits}g wrapper shared by every emitter.
std::string format_significant(double v, int digits = 15);

// JSON reports (two-space indent, fixed key order).  exact switches rational
// values from 15-digit decimals to "p/q" strings.
std::string regimes_report_json(const MapAnalysis& analysis, const std::string& name, bool exact);
std::string variation_report_json(const VariationReport& rep, bool exact);
std::string exceptional_report_json(const MapAnalysis& analysis, const std::string& name,
                                    bool exact);

// CSV table (n, cylinders, bound) of certificate growth terms.
std::string growth_table_csv(const DivergenceCertificate& cert);

} // namespace syncvar
