#pragma once

#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "finsec/band_operator.hpp"
#include "finsec/finite_sections.hpp"
#include "finsec/limit_operator.hpp"
#include "finsec/set_geometry.hpp"
#include "finsec/stability.hpp"

namespace finsec::io {

using nlohmann::json;

/// "%.17g", with "inf", "-inf" and "nan" spelled out.
std::string format_double(double v);

Complex parse_complex(const json& j);
json complex_to_json(Complex c);

/// Group names: "Z", "Zd" (e.g. "Z2"), "Fn" (e.g. "F2"), "H".
/// JSON: a name string, or {"kind": "Z" | "lattice" | "free" | "heisenberg",
/// "dim": d, "rank": n}. `omega` (may be null) is a list of element literals.
Group parse_group(const json& descriptor, const json& omega);
json group_to_json(const Group& group);

/// Text literal: "3" or "1:-2" on lattices, "aB" or "e" on free groups,
/// "1:0:-1" on the Heisenberg group.
Element parse_element_literal(const Group& group, std::string_view text);
/// Accepts a literal string, an integer (Z) or an array of coordinates.
Element parse_element(const Group& group, const json& j);
json element_to_json(const Group& group, const Element& g);

FiniteSet parse_set(const Group& group, const json& j);
json set_to_json(const Group& group, const FiniteSet& s);

/// A number or [re, im] is a constant. Objects carry "rule" (constant,
/// perturbed, periodic, periodic_perturbed), "value", "period", "table" and
/// "exceptions": [{"at": element, "value": c}].
Diagonal parse_diagonal(const Group& group, const json& j);
json diagonal_to_json(const Group& group, const Diagonal& d);

/// {"terms": [{"shift": element, "diagonal": ...}]}, "value" may replace
/// "diagonal". A string is read as the shorthand "c@t; c@t; ...".
BandOperator parse_operator(const std::shared_ptr<const Group>& group, const json& j);
BandOperator parse_operator_shorthand(const std::shared_ptr<const Group>& group,
                                      std::string_view text);
json operator_to_json(const BandOperator& a);

/// {"type": "balls", "scale": s, "offset": o} or {"type": "explicit", "sets": [...]}.
SectionSequence parse_sections(const Group& group, const json& j);
json sections_to_json(const Group& group, const SectionSequence& seq);

/// {"prefix": [...], "cycle": [...]}, or the text form "a,b|c" (prefix|cycle).
GeodesicPath parse_path(const Group& group, const json& j);
json path_to_json(const Group& group, const GeodesicPath& path);

Thresholds parse_thresholds(const json& j, Thresholds base = {});
json thresholds_to_json(const Thresholds& t);

/// Row-major CSV, each entry written as "re,im".
void write_matrix_csv(std::ostream& os, const Matrix& m);
json section_matrix_to_json(const Group& group, const SectionMatrix& m);

json nesting_to_json(const Group& group, const NestingReport& r);
json inflating_to_json(const Group& group, const InflatingSequence& s);
json assembled_to_json(const Group& group, const AssembledOp& op);
json limit_result_to_json(const Group& group, const LimitResult& r);

/// n,size,sigma_min,condition
void write_scan_csv(std::ostream& os, const StabilityReport& r);
json scan_to_json(const StabilityReport& r);
json probe_to_json(const Probe& p);
json prediction_to_json(const Group& group, const Prediction& p);
json comparison_to_json(const Comparison& c);

}  // namespace finsec::io
