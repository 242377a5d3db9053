#include "finsec_tools/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "finsec/errors.hpp"

namespace finsec::io {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(sep, start);
    out.push_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
    throw InvalidInput("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

double parse_real(std::string_view s) {
  s = trim(s);
  std::string buf(s);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw InvalidInput("not a number: '" + buf + "'");
  }
  return v;
}

json real_to_json(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InvalidInput("complex value must be a number or [re, im], got " + j.dump());
}

json complex_to_json(Complex c) {
  if (c.imag() == 0.0) return c.real();
  return json::array({c.real(), c.imag()});
}

Group parse_group(const json& descriptor, const json& omega) {
  std::string kind;
  int size = 0;
  if (descriptor.is_string()) {
    const auto name = descriptor.get<std::string>();
    if (name == "Z") {
      kind = "lattice";
      size = 1;
    } else if (name == "H") {
      kind = "heisenberg";
    } else if (name.size() >= 2 && (name[0] == 'Z' || name[0] == 'F')) {
      kind = name[0] == 'Z' ? "lattice" : "free";
      size = static_cast<int>(parse_int(std::string_view(name).substr(1)));
    } else {
      throw InvalidInput("unknown group '" + name + "' (expected Z, Zd, Fn or H)");
    }
  } else if (descriptor.is_object()) {
    kind = descriptor.at("kind").get<std::string>();
    if (kind == "Z") {
      kind = "lattice";
      size = 1;
    } else if (kind == "lattice") {
      size = descriptor.value("dim", 1);
    } else if (kind == "free") {
      size = descriptor.at("rank").get<int>();
    } else if (kind != "heisenberg") {
      throw InvalidInput("unknown group kind '" + kind + "'");
    }
  } else {
    throw InvalidInput("group descriptor must be a string or an object");
  }

  auto make = [&](std::vector<Element> gens) {
    if (kind == "lattice") return Group::integer_lattice(size, std::move(gens));
    if (kind == "free") return Group::free_group(size, std::move(gens));
    return Group::heisenberg(std::move(gens));
  };
  Group standard = kind == "lattice" ? Group::integer_lattice(size)
                   : kind == "free"  ? Group::free_group(size)
                                     : Group::heisenberg();
  if (omega.is_null()) return standard;
  std::vector<Element> gens;
  if (omega.is_string()) {
    for (auto part : split(omega.get<std::string>(), ',')) {
      gens.push_back(parse_element_literal(standard, part));
    }
  } else if (omega.is_array()) {
    for (const auto& w : omega) gens.push_back(parse_element(standard, w));
  } else {
    throw InvalidInput("omega must be a list of elements");
  }
  return make(std::move(gens));
}

json group_to_json(const Group& group) {
  switch (group.kind()) {
    case GroupKind::IntegerLattice:
      return {{"kind", "lattice"}, {"dim", group.rank()}};
    case GroupKind::FreeGroup:
      return {{"kind", "free"}, {"rank", group.rank()}};
    case GroupKind::Heisenberg:
      return {{"kind", "heisenberg"}};
  }
  return nullptr;
}

Element parse_element_literal(const Group& group, std::string_view text) {
  text = trim(text);
  if (group.kind() == GroupKind::FreeGroup) return group.word(text);
  std::vector<std::int64_t> coords;
  for (auto part : split(text, ':')) coords.push_back(parse_int(part));
  return group.element(std::move(coords));
}

Element parse_element(const Group& group, const json& j) {
  if (j.is_string()) return parse_element_literal(group, j.get<std::string>());
  if (j.is_number_integer()) {
    if (group.kind() != GroupKind::IntegerLattice || group.rank() != 1) {
      throw InvalidInput("bare integers denote elements of Z only");
    }
    return group.element({j.get<std::int64_t>()});
  }
  if (j.is_array()) {
    if (group.kind() == GroupKind::FreeGroup) {
      throw InvalidInput("free group elements are written as words like \"aB\"");
    }
    std::vector<std::int64_t> coords;
    for (const auto& c : j) {
      if (!c.is_number_integer()) throw InvalidInput("element coordinates must be integers");
      coords.push_back(c.get<std::int64_t>());
    }
    return group.element(std::move(coords));
  }
  throw InvalidInput("cannot read a group element from " + j.dump());
}

json element_to_json(const Group& group, const Element& g) {
  if (group.kind() == GroupKind::FreeGroup) return group.format(g);
  if (group.kind() == GroupKind::IntegerLattice && g.size() == 1) return g[0];
  json a = json::array();
  for (auto c : g.data()) a.push_back(c);
  return a;
}

FiniteSet parse_set(const Group& group, const json& j) {
  std::vector<Element> pts;
  if (j.is_string()) {
    for (auto part : split(j.get<std::string>(), ',')) pts.push_back(parse_element_literal(group, part));
  } else if (j.is_array()) {
    for (const auto& x : j) pts.push_back(parse_element(group, x));
  } else {
    throw InvalidInput("a set must be a list of elements");
  }
  return FiniteSet(std::move(pts));
}

json set_to_json(const Group& group, const FiniteSet& s) {
  json a = json::array();
  for (const auto& g : s) a.push_back(element_to_json(group, g));
  return a;
}

Diagonal parse_diagonal(const Group& group, const json& j) {
  if (!j.is_object()) return Diagonal::constant(parse_complex(j));
  const auto rule = j.value("rule", std::string("constant"));
  std::map<Element, Complex> exceptions;
  if (j.contains("exceptions")) {
    for (const auto& e : j.at("exceptions")) {
      exceptions[parse_element(group, e.at("at"))] = parse_complex(e.at("value"));
    }
  }
  if (rule == "constant" || rule == "perturbed") {
    if (rule == "constant" && !exceptions.empty()) {
      throw InvalidInput("constant rule takes no exceptions; use \"perturbed\"");
    }
    return Diagonal::perturbed(parse_complex(j.at("value")), std::move(exceptions));
  }
  if (rule == "periodic" || rule == "periodic_perturbed") {
    if (group.kind() != GroupKind::IntegerLattice) {
      throw InvalidInput("periodic rules need an integer lattice group");
    }
    if (rule == "periodic" && !exceptions.empty()) {
      throw InvalidInput("periodic rule takes no exceptions; use \"periodic_perturbed\"");
    }
    auto period = j.at("period").get<std::vector<std::int64_t>>();
    std::vector<Complex> table;
    for (const auto& v : j.at("table")) table.push_back(parse_complex(v));
    return Diagonal::periodic(std::move(period), std::move(table), std::move(exceptions));
  }
  throw InvalidInput("unknown diagonal rule '" + rule + "'");
}

json diagonal_to_json(const Group& group, const Diagonal& d) {
  json j;
  j["rule"] = rule_name(d.rule());
  if (d.has_periodic_base()) {
    j["period"] = d.period();
    json t = json::array();
    for (auto c : d.table()) t.push_back(complex_to_json(c));
    j["table"] = t;
  } else {
    j["value"] = complex_to_json(d.table().front());
  }
  if (!d.exceptions().empty()) {
    json e = json::array();
    for (const auto& [x, v] : d.exceptions()) {
      e.push_back({{"at", element_to_json(group, x)}, {"value", complex_to_json(v)}});
    }
    j["exceptions"] = e;
  }
  return j;
}

BandOperator parse_operator_shorthand(const std::shared_ptr<const Group>& group,
                                      std::string_view text) {
  BandOperator a(group);
  for (auto term : split(text, ';')) {
    term = trim(term);
    if (term.empty()) continue;
    auto at = term.find('@');
    if (at == std::string_view::npos) {
      throw InvalidInput("operator term '" + std::string(term) + "' must look like coefficient@shift");
    }
    a.add_term(parse_element_literal(*group, term.substr(at + 1)),
               Diagonal::constant(parse_real(term.substr(0, at))));
  }
  return a;
}

BandOperator parse_operator(const std::shared_ptr<const Group>& group, const json& j) {
  if (j.is_string()) return parse_operator_shorthand(group, j.get<std::string>());
  BandOperator a(group);
  for (const auto& term : j.at("terms")) {
    const auto shift = parse_element(*group, term.at("shift"));
    if (term.contains("diagonal")) {
      a.add_term(shift, parse_diagonal(*group, term.at("diagonal")));
    } else {
      a.add_term(shift, Diagonal::constant(parse_complex(term.at("value"))));
    }
  }
  return a;
}

json operator_to_json(const BandOperator& a) {
  json terms = json::array();
  for (const auto& [t, b] : a.terms()) {
    terms.push_back({{"shift", element_to_json(a.group(), t)}, {"diagonal", diagonal_to_json(a.group(), b)}});
  }
  return {{"terms", terms}};
}

SectionSequence parse_sections(const Group& group, const json& j) {
  if (j.is_null()) return SectionSequence::balls(group);
  const auto type = j.value("type", std::string("balls"));
  if (type == "balls") return SectionSequence::balls(group, j.value("scale", 1), j.value("offset", 0));
  if (type == "explicit") {
    std::vector<FiniteSet> sets;
    for (const auto& s : j.at("sets")) sets.push_back(parse_set(group, s));
    return SectionSequence::explicit_sets(group, std::move(sets));
  }
  throw InvalidInput("unknown section type '" + type + "'");
}

json sections_to_json(const Group& group, const SectionSequence& seq) {
  if (seq.is_ball_sequence()) {
    return {{"type", "balls"}, {"scale", seq.scale()}, {"offset", seq.offset()}};
  }
  json sets = json::array();
  for (int n = 1; n <= *seq.length(); ++n) sets.push_back(set_to_json(group, seq.at(n)));
  return {{"type", "explicit"}, {"sets", sets}};
}

GeodesicPath parse_path(const Group& group, const json& j) {
  GeodesicPath p;
  auto letters = [&](const json& list) {
    std::vector<Element> out;
    if (list.is_string()) {
      for (auto part : split(list.get<std::string>(), ',')) {
        if (!trim(part).empty()) out.push_back(parse_element_literal(group, part));
      }
    } else {
      for (const auto& x : list) out.push_back(parse_element(group, x));
    }
    return out;
  };
  if (j.is_string()) {
    const auto text = j.get<std::string>();
    auto bar = text.find('|');
    if (bar == std::string::npos) {
      p.prefix = letters(json(text));
    } else {
      p.prefix = letters(json(text.substr(0, bar)));
      p.cycle = letters(json(text.substr(bar + 1)));
    }
    return p;
  }
  if (j.contains("prefix")) p.prefix = letters(j.at("prefix"));
  if (j.contains("cycle")) p.cycle = letters(j.at("cycle"));
  return p;
}

json path_to_json(const Group& group, const GeodesicPath& path) {
  json prefix = json::array();
  json cycle = json::array();
  for (const auto& w : path.prefix) prefix.push_back(element_to_json(group, w));
  for (const auto& w : path.cycle) cycle.push_back(element_to_json(group, w));
  return {{"prefix", prefix}, {"cycle", cycle}};
}

Thresholds parse_thresholds(const json& j, Thresholds base) {
  if (j.is_null()) return base;
  base.tau_stab = j.value("tau_stab", base.tau_stab);
  base.tau_inv = j.value("tau_inv", base.tau_inv);
  base.trend = j.value("trend", base.trend);
  base.zero = j.value("zero", base.zero);
  base.decay_factor = j.value("decay_factor", base.decay_factor);
  if (base.tau_stab <= 0 || base.tau_inv <= 0 || base.zero < 0 || base.trend < 0 ||
      base.trend >= 1 || base.decay_factor <= 1) {
    throw InvalidInput("thresholds out of range");
  }
  return base;
}

json thresholds_to_json(const Thresholds& t) {
  return {{"tau_stab", t.tau_stab}, {"tau_inv", t.tau_inv}, {"trend", t.trend},
          {"zero", t.zero},         {"decay_factor", t.decay_factor}};
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) os << ',';
      os << format_double(m(i, j).real()) << ',' << format_double(m(i, j).imag());
    }
    os << '\n';
  }
}

json section_matrix_to_json(const Group& group, const SectionMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.entries.rows(); ++i) {
    json r = json::array();
    json c = json::array();
    for (Eigen::Index j = 0; j < m.entries.cols(); ++j) {
      r.push_back(m.entries(i, j).real());
      c.push_back(m.entries(i, j).imag());
    }
    re.push_back(r);
    im.push_back(c);
  }
  return {{"window", set_to_json(group, m.window)},
          {"provenance", m.provenance},
          {"re", re},
          {"im", im}};
}

json nesting_to_json(const Group& group, const NestingReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) {
    json x = {{"n", e.n}, {"nested", e.nested}};
    x["witness"] = e.witness ? element_to_json(group, *e.witness) : json(nullptr);
    entries.push_back(x);
  }
  json out = {{"all_nested", r.all_nested()}, {"entries", entries}};
  out["first_failure"] = r.first_failure() ? json(*r.first_failure()) : json(nullptr);
  return out;
}

json inflating_to_json(const Group& group, const InflatingSequence& s) {
  json v = json::array();
  json blocks = json::array();
  for (std::size_t n = 0; n < s.v.size(); ++n) {
    v.push_back(element_to_json(group, s.v[n]));
    blocks.push_back(set_to_json(group, s.blocks[n]));
  }
  return {{"v", v},
          {"blocks", blocks},
          {"strong", s.strong},
          {"disjoint", is_inflating(group, s.targets, s.v)}};
}

json assembled_to_json(const Group& group, const AssembledOp& op) {
  json blocks = json::array();
  for (std::size_t n = 0; n < op.blocks.size(); ++n) {
    blocks.push_back({{"n", n + 1},
                      {"v", element_to_json(group, op.shifts[n])},
                      {"block", set_to_json(group, op.blocks[n])}});
  }
  SectionMatrix m{op.window, op.entries, "assemble"};
  json out = section_matrix_to_json(group, m);
  out["blocks"] = blocks;
  out["dropped"] = op.dropped;
  out["warnings"] = op.warnings;
  return out;
}

json limit_result_to_json(const Group& group, const LimitResult& r) {
  json out = {{"converged", r.converged()}};
  json branches = json::array();
  for (const auto& b : r.branches) {
    branches.push_back({{"offset", element_to_json(group, b.offset)}, {"operator", operator_to_json(b.op)}});
  }
  out["branches"] = branches;
  if (r.failure) {
    const auto& f = *r.failure;
    json fail = {{"reason", f.reason}, {"index_a", f.index_a}, {"index_b", f.index_b},
                 {"value_a", complex_to_json(f.value_a)}, {"value_b", complex_to_json(f.value_b)}};
    fail["band_element"] = f.band_element ? element_to_json(group, *f.band_element) : json(nullptr);
    fail["point"] = f.point ? element_to_json(group, *f.point) : json(nullptr);
    out["failure"] = fail;
  } else {
    out["failure"] = nullptr;
  }
  return out;
}

void write_scan_csv(std::ostream& os, const StabilityReport& r) {
  os << "n,size,sigma_min,condition\n";
  for (const auto& rec : r.records) {
    os << rec.n << ',' << rec.size << ',' << format_double(rec.sigma_min) << ','
       << format_double(rec.condition) << '\n';
  }
}

json scan_to_json(const StabilityReport& r) {
  json records = json::array();
  for (const auto& rec : r.records) {
    records.push_back({{"n", rec.n},
                       {"size", rec.size},
                       {"sigma_min", rec.sigma_min},
                       {"condition", real_to_json(rec.condition)}});
  }
  return {{"verdict", verdict_name(r.verdict)},
          {"thresholds", thresholds_to_json(r.thresholds)},
          {"records", records}};
}

json probe_to_json(const Probe& p) {
  json curve = json::array();
  for (const auto& pt : p.curve) curve.push_back({{"size", pt.size}, {"sigma_min", pt.sigma_min}});
  return {{"method", probe_method_name(p.method)},
          {"verdict", verdict_name(p.verdict)},
          {"min_sigma", real_to_json(p.min_sigma())},
          {"curve", curve}};
}

json prediction_to_json(const Group& group, const Prediction& p) {
  json cands = json::array();
  for (const auto& c : p.inventory.candidates) {
    json x = {{"kind", candidate_kind_name(c.kind)}, {"label", c.label}};
    x["path"] = c.path ? path_to_json(group, *c.path) : json(nullptr);
    x["shift"] = c.shift ? element_to_json(group, *c.shift) : json(nullptr);
    x["offset"] = c.offset ? element_to_json(group, *c.offset) : json(nullptr);
    x["operator"] = operator_to_json(c.op);
    x["probe"] = probe_to_json(c.probe);
    cands.push_back(x);
  }
  json out = {{"verdict", verdict_name(p.verdict)},
              {"note", p.note},
              {"uniform_bound_checked", p.uniform_bound_checked},
              {"not_convergent", p.inventory.not_convergent},
              {"candidates", cands}};
  out["uniform_bound"] = p.uniform_bound ? real_to_json(*p.uniform_bound) : json(nullptr);
  return out;
}

json comparison_to_json(const Comparison& c) {
  return {{"agreement", agreement_name(c.agreement)},
          {"scan", verdict_name(c.scan)},
          {"prediction", verdict_name(c.prediction)}};
}

}  // namespace finsec::io
