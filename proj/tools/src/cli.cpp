#include "finsec_tools/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <Eigen/Core>

#include "CLI11.hpp"
#include "finsec/errors.hpp"
#include "finsec_tools/io.hpp"

#ifndef FINSEC_VERSION
#define FINSEC_VERSION "0.0.0"
#endif

namespace finsec::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

const std::set<std::string> kSpecKeys = {
    "group",  "omega",      "operator", "operator_b", "sections",    "set",
    "ball",   "n_lo",       "n_hi",     "n_max",      "count",       "strong",
    "direction", "window",  "ray",      "paths",      "points",      "generator",
    "w_star", "shifts",     "letter_rays", "probe",   "thresholds",  "out",
    "search_radius", "probe_radius", "tolerance"};

struct Flags {
  std::string group;
  std::string omega;
  std::string op;
  std::string op_b;
  std::string set;
  std::string direction;
  std::string ray;
  std::string points;
  std::string w_star;
  std::string generator;
  std::string window;
  std::string out;
  std::string spec;
  std::vector<std::string> paths;
  std::vector<std::string> shifts;
  int ball = 0;
  int scale = 1;
  int offset = 0;
  int n_lo = 1;
  int n_hi = 1;
  int n_max = 2;
  int count = 1;
  int probe_depth = 0;
  int probe_max_dim = 0;
  int symbol_samples = 0;
  double tau_stab = 0;
  double tau_inv = 0;
  double trend = 0;
  bool strong = false;
  bool no_letter_rays = false;
};

// Flag values that look like JSON are parsed as JSON, the rest stay strings.
json flag_value(const std::string& text) {
  if (!text.empty() && (text.front() == '{' || text.front() == '[' || text.front() == '"')) {
    return json::parse(text);
  }
  return text;
}

class Session {
 public:
  Session(json spec, std::ostream& out) : spec_(std::move(spec)), out_(out) {
    for (const auto& [key, value] : spec_.items()) {
      if (!kSpecKeys.count(key)) throw InvalidInput("unknown spec field '" + key + "'");
    }
    group_ = std::make_shared<const Group>(
        io::parse_group(spec_.value("group", json("Z")), spec_.value("omega", json(nullptr))));
    out_dir_ = spec_.value("out", std::string("finsec_out"));
    resolved_["group"] = io::group_to_json(*group_);
    resolved_["omega"] = io::set_to_json(*group_, group_->generators());
  }

  const Group& group() const { return *group_; }
  const std::shared_ptr<const Group>& group_ptr() const { return group_; }
  const json& spec() const { return spec_; }
  bool has(const std::string& key) const { return spec_.contains(key) && !spec_[key].is_null(); }

  template <typename T>
  T get(const std::string& key, T fallback) {
    T v = has(key) ? spec_[key].get<T>() : fallback;
    resolved_[key] = v;
    return v;
  }

  json& resolved() { return resolved_; }

  BandOperator op(const std::string& key) {
    if (!has(key)) throw InvalidInput("missing operator '" + key + "'");
    auto a = io::parse_operator(group_, spec_[key]);
    resolved_[key] = io::operator_to_json(a);
    return a;
  }

  SectionSequence sections() {
    auto seq = has("sections") ? io::parse_sections(*group_, spec_["sections"])
                               : SectionSequence::balls(*group_);
    resolved_["sections"] = io::sections_to_json(*group_, seq);
    return seq;
  }

  /// The finite set Y: "set" if given, else Omega_ball.
  FiniteSet window() {
    if (has("set")) {
      auto y = io::parse_set(*group_, spec_["set"]);
      resolved_["set"] = io::set_to_json(*group_, y);
      return y;
    }
    int r = get("ball", 1);
    if (r < 0) throw InvalidInput("ball radius must be non-negative");
    return ball(*group_, r);
  }

  Thresholds thresholds() {
    auto t = io::parse_thresholds(spec_.value("thresholds", json(nullptr)));
    resolved_["thresholds"] = io::thresholds_to_json(t);
    return t;
  }

  InventoryConfig inventory() {
    InventoryConfig c;
    c.thresholds = thresholds();
    c.letter_rays = get("letter_rays", c.letter_rays);
    if (has("paths")) {
      for (const auto& p : spec_["paths"]) c.directions.push_back(io::parse_path(*group_, p));
    }
    json dirs = json::array();
    for (const auto& p : c.directions) dirs.push_back(io::path_to_json(*group_, p));
    resolved_["paths"] = dirs;
    if (has("shifts")) {
      for (const auto& s : spec_["shifts"]) c.shifts.push_back(io::parse_element(*group_, s));
    }
    resolved_["shifts"] = io::set_to_json(*group_, FiniteSet(c.shifts));
    if (has("w_star")) c.w_star = io::parse_element(*group_, spec_["w_star"]);
    resolved_["w_star"] = io::element_to_json(*group_, c.w_star.value_or(group_->identity()));
    json probe = spec_.value("probe", json::object());
    c.probe_depth = probe.value("depth", c.probe_depth);
    c.probe_max_dim = probe.value("max_dim", c.probe_max_dim);
    c.symbol_samples = probe.value("symbol_samples", c.symbol_samples);
    if (c.probe_depth < 1 || c.probe_max_dim < 1 || c.symbol_samples < 1) {
      throw InvalidInput("probe settings must be positive");
    }
    resolved_["probe"] = {{"depth", c.probe_depth},
                          {"max_dim", c.probe_max_dim},
                          {"symbol_samples", c.symbol_samples}};
    return c;
  }

  void write_json(const std::string& name, const json& j) {
    write_text(name, j.dump(2) + "\n");
  }

  void write_text(const std::string& name, const std::string& text) {
    fs::create_directories(out_dir_);
    std::ofstream f(out_dir_ / name, std::ios::binary);
    if (!f) throw InvalidInput("cannot write " + (out_dir_ / name).string());
    f << text;
    artifacts_.push_back(name);
  }

  void finish(const std::string& command, json report, int exit_code) {
    json manifest;
    manifest["tool"] = "finsec";
    manifest["command"] = command;
    manifest["versions"] = {
        {"finsec", FINSEC_VERSION},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                      "." + std::to_string(EIGEN_MINOR_VERSION)},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"cli11", CLI11_VERSION}};
    manifest["inputs"] = spec_;
    resolved_["max_matrix_dim"] = max_matrix_dim();
    resolved_["max_ball_size"] = group_->max_ball_size();
    resolved_["out"] = out_dir_.string();
    if (!resolved_.contains("thresholds")) resolved_["thresholds"] = io::thresholds_to_json({});
    manifest["resolved"] = resolved_;
    manifest["exit_code"] = exit_code;
    auto artifacts = artifacts_;
    artifacts.push_back("run_manifest.json");
    manifest["artifacts"] = artifacts;
    write_json("run_manifest.json", manifest);
    report["artifacts"] = artifacts;
    report["exit_code"] = exit_code;
    out_ << report.dump(2) << "\n";
  }

 private:
  json spec_;
  std::ostream& out_;
  std::shared_ptr<const Group> group_;
  fs::path out_dir_;
  json resolved_ = json::object();
  std::vector<std::string> artifacts_;
};

int verdict_exit(Verdict v) {
  switch (v) {
    case Verdict::Stable:
      return kExitOk;
    case Verdict::Unstable:
      return kExitUnstable;
    case Verdict::Inconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

std::string matrix_csv(const Matrix& m) {
  std::ostringstream os;
  io::write_matrix_csv(os, m);
  return os.str();
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

int cmd_ball(Session& s) {
  int r = s.get("ball", 1);
  if (r < 0) throw InvalidInput("ball radius must be non-negative");
  auto bs = balls(s.group(), r);
  json sizes = json::array();
  for (const auto& b : bs) sizes.push_back(b.size());
  const auto& top = bs.back();
  s.write_json("ball.json", {{"radius", r},
                             {"size", top.size()},
                             {"growth_profile", sizes},
                             {"elements", io::set_to_json(s.group(), top)}});
  s.finish("ball", {{"radius", r}, {"size", top.size()}, {"growth_profile", sizes}}, kExitOk);
  return kExitOk;
}

int cmd_boundary(Session& s) {
  auto y = s.window();
  auto inner = interior(s.group(), y);
  auto bd = boundary(s.group(), y);
  json report = {{"size", y.size()},
                 {"interior_size", inner.size()},
                 {"boundary", io::set_to_json(s.group(), bd)}};
  json full = report;
  full["set"] = io::set_to_json(s.group(), y);
  full["interior"] = io::set_to_json(s.group(), inner);
  s.write_json("boundary.json", full);
  s.finish("boundary", report, kExitOk);
  return kExitOk;
}

int cmd_nesting(Session& s) {
  auto seq = s.sections();
  int n_max = s.get("n_max", seq.length().value_or(10));
  auto report = io::nesting_to_json(s.group(), check_nesting(seq, n_max));
  s.write_json("nesting.json", report);
  s.finish("nesting-check", report, kExitOk);
  return kExitOk;
}

int cmd_truncate(Session& s) {
  auto a = s.op("operator");
  auto m = truncate(a, s.window());
  s.write_json("truncate.json", io::section_matrix_to_json(s.group(), m));
  s.write_text("truncate.csv", matrix_csv(m.entries));
  s.finish("truncate",
           {{"dim", m.dim()}, {"window", io::set_to_json(s.group(), m.window)},
            {"sigma_min", m.dim() ? sigma_min(m.entries) : 0.0}},
           kExitOk);
  return kExitOk;
}

int cmd_ideal_gen(Session& s) {
  auto y = s.window();
  std::vector<Element> omegas;
  if (s.has("generator")) {
    omegas.push_back(io::parse_element(s.group(), s.spec()["generator"]));
    s.resolved()["generator"] = io::element_to_json(s.group(), omegas.front());
  } else {
    for (const auto& w : s.group().generators()) omegas.push_back(w);
  }
  auto bd = boundary(s.group(), y);
  auto proj = boundary_projection(s.group(), y);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(y.size()), static_cast<Eigen::Index>(y.size()));
  json gens = json::array();
  std::ostringstream csv;
  csv << "omega,element,value\n";
  bool inside_boundary = true;
  for (const auto& w : omegas) {
    auto g = ideal_generator(s.group(), w, y);
    std::vector<Element> support;
    for (std::size_t i = 0; i < y.size(); ++i) {
      auto v = g.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
      if (v != 0.0) support.push_back(y[i]);
      csv << s.group().format(w) << ',' << s.group().format(y[i]) << ',' << v << '\n';
    }
    acc = acc.cwiseMax(g.entries.real());
    FiniteSet sup(std::move(support));
    inside_boundary = inside_boundary && sup.is_subset_of(bd);
    gens.push_back({{"omega", io::element_to_json(s.group(), w)},
                    {"support", io::set_to_json(s.group(), sup)}});
  }
  json report = {{"size", y.size()},
                 {"generators", gens},
                 {"boundary", io::set_to_json(s.group(), bd)},
                 {"supports_in_boundary", inside_boundary},
                 {"max_equals_boundary_projection",
                  s.has("generator") ? json(nullptr) : json(acc.cast<Complex>() == proj.entries)}};
  s.write_json("ideal_gen.json", report);
  s.write_text("ideal_gen.csv", csv.str());
  s.finish("ideal-gen", report, kExitOk);
  return kExitOk;
}

int cmd_quasicomm(Session& s) {
  auto a = s.op("operator");
  auto b = s.op("operator_b");
  auto y = s.window();
  auto q = quasicommutator(a, b, y);
  std::vector<Element> rows;
  std::vector<Element> cols;
  for (Eigen::Index i = 0; i < q.entries.rows(); ++i) {
    for (Eigen::Index j = 0; j < q.entries.cols(); ++j) {
      if (q.entries(i, j) != Complex{}) {
        rows.push_back(y[static_cast<std::size_t>(i)]);
        cols.push_back(y[static_cast<std::size_t>(j)]);
      }
    }
  }
  json report = {{"dim", q.dim()},
                 {"max_abs", max_abs(q.entries)},
                 {"support_rows", io::set_to_json(s.group(), FiniteSet(rows))},
                 {"support_cols", io::set_to_json(s.group(), FiniteSet(cols))}};
  json full = io::section_matrix_to_json(s.group(), q);
  full.update(report);
  s.write_json("quasicomm.json", full);
  s.write_text("quasicomm.csv", matrix_csv(q.entries));
  s.finish("quasicomm", report, kExitOk);
  return kExitOk;
}

InflatingSequence inflating_from(Session& s, const SectionSequence& seq, int count) {
  InflateOptions options;
  options.strong = s.get("strong", false);
  options.search_radius = s.get("search_radius", options.search_radius);
  if (s.has("direction")) {
    options.direction = io::parse_element(s.group(), s.spec()["direction"]);
    s.resolved()["direction"] = io::element_to_json(s.group(), *options.direction);
  }
  return build_inflating(seq, count, options);
}

int cmd_inflate(Session& s) {
  auto seq = s.sections();
  int count = s.get("count", 3);
  auto inf = inflating_from(s, seq, count);
  auto report = io::inflating_to_json(s.group(), inf);
  s.write_json("inflate.json", report);
  s.finish("inflate", {{"v", report["v"]}, {"disjoint", report["disjoint"]}}, kExitOk);
  return kExitOk;
}

int cmd_assemble(Session& s) {
  auto a = s.op("operator");
  auto seq = s.sections();
  int count = s.get("count", 3);
  auto inf = inflating_from(s, seq, count);
  auto mode = s.get("window", std::string("default"));
  FiniteSet w;
  if (mode == "default") {
    w = default_assembly_window(s.group(), inf);
  } else if (mode == "blocks") {
    w = block_union_window(inf);
  } else {
    throw InvalidInput("window must be 'default' or 'blocks'");
  }
  std::vector<SectionMatrix> sections;
  for (const auto& y : seq.range(1, count)) sections.push_back(truncate(a, y));
  auto op = assemble_op(s.group(), sections, inf, w);
  s.write_json("assemble.json", io::assembled_to_json(s.group(), op));
  s.write_text("assemble.csv", matrix_csv(op.entries));
  s.finish("assemble",
           {{"dim", op.window.size()}, {"dropped", op.dropped}, {"warnings", op.warnings},
            {"v", io::inflating_to_json(s.group(), inf)["v"]}},
           kExitOk);
  return kExitOk;
}

std::vector<GeodesicPath> paths_of(Session& s) {
  std::vector<GeodesicPath> out;
  if (s.has("paths")) {
    for (const auto& p : s.spec()["paths"]) out.push_back(io::parse_path(s.group(), p));
  }
  json resolved = json::array();
  for (const auto& p : out) resolved.push_back(io::path_to_json(s.group(), p));
  s.resolved()["paths"] = resolved;
  return out;
}

int cmd_limit_op(Session& s) {
  auto a = s.op("operator");
  auto paths = paths_of(s);
  int sources = (s.has("ray") ? 1 : 0) + (s.has("points") ? 1 : 0) + static_cast<int>(paths.size());
  if (sources != 1) throw InvalidInput("limit-op needs exactly one of --ray, --path, --points");
  std::optional<SequenceSpec> h;
  if (s.has("ray")) {
    h = SequenceSpec::ray(io::parse_element(s.group(), s.spec()["ray"]));
  } else if (s.has("points")) {
    const auto& p = s.spec()["points"];
    std::vector<Element> pts;
    if (p.is_string()) {
      // Given order, not canonical set order.
      std::stringstream ss(p.get<std::string>());
      std::string item;
      while (std::getline(ss, item, ',')) pts.push_back(io::parse_element_literal(s.group(), item));
    } else {
      for (const auto& x : p) pts.push_back(io::parse_element(s.group(), x));
    }
    h = SequenceSpec::explicit_points(std::move(pts));
  } else {
    if (!paths.front().is_infinite()) throw InvalidInput("limit-op paths need a cycle");
    h = SequenceSpec::inverse_geodesic(paths.front());
  }
  LimitOptions options;
  options.probe_radius = s.get("probe_radius", options.probe_radius);
  options.tolerance = s.get("tolerance", options.tolerance);
  auto result = limit_operator(a, *h, options);
  auto report = io::limit_result_to_json(s.group(), result);
  report["sequence"] = h->describe(s.group());
  s.write_json("limit_op.json", report);
  int code = result.converged() ? kExitOk : kExitInconclusive;
  s.finish("limit-op", report, code);
  return code;
}

int cmd_limit_set(Session& s) {
  auto paths = paths_of(s);
  if (paths.size() != 1) throw InvalidInput("limit-set needs exactly one --path");
  const auto& path = paths.front();
  int n_max = s.get("n_max", 8);
  if (path.length() && *path.length() < n_max + 1) {
    throw InvalidInput("finite path needs at least n_max + 1 letters");
  }
  WordMetric metric(s.group(), n_max + 1);
  auto non_geodesic = first_non_geodesic(s.group(), path, n_max + 1, metric);
  auto gap = first_limit_set_gap(s.group(), path, n_max + 1, metric);
  auto layers = limit_set_layers(s.group(), path, n_max);
  json sizes = json::array();
  json ls = json::array();
  FiniteSet acc;
  for (const auto& l : layers) {
    sizes.push_back(l.size());
    ls.push_back(io::set_to_json(s.group(), l));
    acc = set_union(acc, l);
  }
  json report = {{"n_max", n_max},
                 {"layer_sizes", sizes},
                 {"union_size", acc.size()},
                 {"first_non_geodesic", non_geodesic ? json(*non_geodesic) : json(nullptr)},
                 {"first_gap", gap ? json(*gap) : json(nullptr)},
                 {"nested", !gap.has_value()}};
  json full = report;
  full["layers"] = ls;
  full["union"] = io::set_to_json(s.group(), acc);
  s.write_json("limit_set.json", full);
  s.finish("limit-set", report, kExitOk);
  return kExitOk;
}

StabilityReport run_scan(Session& s, const BandOperator& a) {
  auto seq = s.sections();
  int n_lo = s.get("n_lo", 1);
  int n_hi = s.get("n_hi", seq.length().value_or(20));
  auto report = stability_scan(a, seq, n_lo, n_hi, s.thresholds());
  std::ostringstream csv;
  io::write_scan_csv(csv, report);
  s.write_text("scan.csv", csv.str());
  s.write_json("scan.json", io::scan_to_json(report));
  return report;
}

Prediction run_predict(Session& s, const BandOperator& a) {
  auto prediction = predict_stability(a, s.inventory());
  s.write_json("predict.json", io::prediction_to_json(s.group(), prediction));
  std::ostringstream csv;
  csv << "candidate,kind,method,size,sigma_min\n";
  for (std::size_t i = 0; i < prediction.inventory.candidates.size(); ++i) {
    const auto& c = prediction.inventory.candidates[i];
    for (const auto& pt : c.probe.curve) {
      csv << i << ',' << candidate_kind_name(c.kind) << ',' << probe_method_name(c.probe.method)
          << ',' << pt.size << ',' << io::format_double(pt.sigma_min) << '\n';
    }
  }
  s.write_text("predict_curves.csv", csv.str());
  return prediction;
}

json prediction_summary(const Group& g, const Prediction& p) {
  json cands = json::array();
  for (const auto& c : p.inventory.candidates) {
    json x = {{"label", c.label},
              {"kind", candidate_kind_name(c.kind)},
              {"method", probe_method_name(c.probe.method)},
              {"verdict", verdict_name(c.probe.verdict)}};
    double m = c.probe.min_sigma();
    x["min_sigma"] = std::isfinite(m) ? json(m) : json(nullptr);
    cands.push_back(x);
  }
  (void)g;
  return {{"verdict", verdict_name(p.verdict)},
          {"note", p.note},
          {"not_convergent", p.inventory.not_convergent},
          {"candidates", cands}};
}

int cmd_scan(Session& s) {
  auto a = s.op("operator");
  auto report = run_scan(s, a);
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& r : report.records) lo = std::min(lo, r.sigma_min);
  int code = verdict_exit(report.verdict);
  s.finish("scan",
           {{"verdict", verdict_name(report.verdict)},
            {"records", report.records.size()},
            {"min_sigma", std::isfinite(lo) ? json(lo) : json(nullptr)}},
           code);
  return code;
}

int cmd_predict(Session& s) {
  auto a = s.op("operator");
  auto p = run_predict(s, a);
  int code = verdict_exit(p.verdict);
  s.finish("predict", prediction_summary(s.group(), p), code);
  return code;
}

int cmd_compare(Session& s) {
  auto a = s.op("operator");
  auto scan = run_scan(s, a);
  auto p = run_predict(s, a);
  auto c = compare(scan, p);
  auto report = io::comparison_to_json(c);
  s.write_json("compare.json", report);
  int code = kExitInconclusive;
  if (c.agreement == Agreement::Disagree) {
    code = kExitDisagree;
  } else if (c.agreement == Agreement::Agree) {
    code = verdict_exit(c.scan);
  }
  report["prediction_detail"] = prediction_summary(s.group(), p);
  s.finish("compare", report, code);
  return code;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite sections of band operators on discrete groups", "finsec"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  std::map<std::string, CLI::Option*> opts;
  auto str = [&](const std::string& name, std::string& target, const std::string& help) {
    opts[name] = app.add_option("--" + name, target, help);
  };
  str("group", f.group, "Z, Zd, Fn, H, or a JSON descriptor");
  str("omega", f.omega, "generating set, comma separated literals");
  str("op", f.op, "operator: \"c@t; c@t\" shorthand or JSON");
  str("op-b", f.op_b, "second operator (quasicomm)");
  str("set", f.set, "finite set Y, comma separated literals or JSON");
  str("direction", f.direction, "inflate along powers of this element");
  str("ray", f.ray, "limit-op along g^n");
  str("points", f.points, "limit-op along explicit points");
  str("w-star", f.w_star, "w* for boundary compressions");
  str("generator", f.generator, "omega for ideal-gen");
  str("window", f.window, "assemble window: default or blocks");
  str("out", f.out, "artifact directory (default finsec_out)");
  opts["spec"] = app.add_option("--spec", f.spec, "JSON experiment file; its fields win over flags")
                     ->check(CLI::ExistingFile);
  opts["path"] = app.add_option("--path", f.paths, "geodesic path \"prefix|cycle\" (repeatable)");
  opts["shift"] = app.add_option("--shift", f.shifts, "extra shift candidate (repeatable)");
  opts["ball"] = app.add_option("--ball", f.ball, "Y = Omega_n");
  opts["scale"] = app.add_option("--scale", f.scale, "sections Y_n = Omega_{scale n + offset}");
  opts["offset"] = app.add_option("--offset", f.offset, "sections offset");
  opts["n-lo"] = app.add_option("--n-lo", f.n_lo, "first section index");
  opts["n-hi"] = app.add_option("--n-hi", f.n_hi, "last section index");
  opts["n-max"] = app.add_option("--n-max", f.n_max, "depth for nesting-check and limit-set");
  opts["count"] = app.add_option("--count", f.count, "number of inflating blocks");
  opts["probe-depth"] = app.add_option("--probe-depth", f.probe_depth, "largest probe radius");
  opts["probe-max-dim"] = app.add_option("--probe-max-dim", f.probe_max_dim, "largest probe window");
  opts["symbol-samples"] = app.add_option("--symbol-samples", f.symbol_samples, "symbol samples per axis");
  opts["tau-stab"] = app.add_option("--tau-stab", f.tau_stab, "scan stability floor");
  opts["tau-inv"] = app.add_option("--tau-inv", f.tau_inv, "probe invertibility floor");
  opts["trend"] = app.add_option("--trend", f.trend, "allowed relative dip");
  opts["strong"] = app.add_flag("--strong", f.strong, "strong inflating targets");
  opts["no-letter-rays"] = app.add_flag("--no-letter-rays", f.no_letter_rays,
                                        "skip the letter ray directions in predict");

  std::string command;
  for (const char* name : {"ball", "boundary", "nesting-check", "truncate", "ideal-gen", "quasicomm",
                           "inflate", "assemble", "limit-op", "limit-set", "scan", "predict",
                           "compare"}) {
    app.add_subcommand(name)->callback([&command, name] { command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "finsec: " << e.what() << "\n";
    return kExitUsage;
  }

  auto given = [&](const std::string& name) { return opts.at(name)->count() > 0; };
  try {
    json spec = json::object();
    auto put = [&](const std::string& flag, const std::string& key, const json& v) {
      if (given(flag)) spec[key] = v;
    };
    if (given("group")) spec["group"] = flag_value(f.group);
    if (given("omega")) spec["omega"] = flag_value(f.omega);
    if (given("op")) spec["operator"] = flag_value(f.op);
    if (given("op-b")) spec["operator_b"] = flag_value(f.op_b);
    if (given("set")) spec["set"] = flag_value(f.set);
    if (given("direction")) spec["direction"] = flag_value(f.direction);
    if (given("ray")) spec["ray"] = flag_value(f.ray);
    if (given("points")) spec["points"] = flag_value(f.points);
    if (given("w-star")) spec["w_star"] = flag_value(f.w_star);
    if (given("generator")) spec["generator"] = flag_value(f.generator);
    put("window", "window", f.window);
    put("out", "out", f.out);
    put("ball", "ball", f.ball);
    put("n-lo", "n_lo", f.n_lo);
    put("n-hi", "n_hi", f.n_hi);
    put("n-max", "n_max", f.n_max);
    put("count", "count", f.count);
    if (given("strong")) spec["strong"] = true;
    if (given("no-letter-rays")) spec["letter_rays"] = false;
    if (given("scale") || given("offset")) {
      spec["sections"] = {{"type", "balls"}, {"scale", f.scale}, {"offset", f.offset}};
    }
    if (given("path")) {
      spec["paths"] = json::array();
      for (const auto& p : f.paths) spec["paths"].push_back(flag_value(p));
    }
    if (given("shift")) {
      spec["shifts"] = json::array();
      for (const auto& p : f.shifts) spec["shifts"].push_back(flag_value(p));
    }
    if (given("probe-depth")) spec["probe"]["depth"] = f.probe_depth;
    if (given("probe-max-dim")) spec["probe"]["max_dim"] = f.probe_max_dim;
    if (given("symbol-samples")) spec["probe"]["symbol_samples"] = f.symbol_samples;
    if (given("tau-stab")) spec["thresholds"]["tau_stab"] = f.tau_stab;
    if (given("tau-inv")) spec["thresholds"]["tau_inv"] = f.tau_inv;
    if (given("trend")) spec["thresholds"]["trend"] = f.trend;
    if (given("spec")) {
      std::ifstream file(f.spec);
      auto patch = json::parse(file);
      if (!patch.is_object()) throw InvalidInput("spec file must hold a JSON object");
      spec.merge_patch(patch);
    }

    Session session(std::move(spec), out);
    static const std::map<std::string, std::function<int(Session&)>> commands = {
        {"ball", cmd_ball},           {"boundary", cmd_boundary},   {"nesting-check", cmd_nesting},
        {"truncate", cmd_truncate},   {"ideal-gen", cmd_ideal_gen}, {"quasicomm", cmd_quasicomm},
        {"inflate", cmd_inflate},     {"assemble", cmd_assemble},   {"limit-op", cmd_limit_op},
        {"limit-set", cmd_limit_set}, {"scan", cmd_scan},           {"predict", cmd_predict},
        {"compare", cmd_compare}};
    return commands.at(command)(session);
  } catch (const CapacityExceeded& e) {
    err << "finsec: capacity exceeded: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const InvalidInput& e) {
    err << "finsec: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << "finsec: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "finsec: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace finsec::cli
