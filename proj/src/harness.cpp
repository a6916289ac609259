#include "scnlse/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "scnlse/error.hpp"

namespace scnlse {

using nlohmann::json;

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = {"soliton-propagation", "ehrenfest",       "residual-scaling",
                                                 "concentration",       "identity-suite", "cylindrical-check"};
  return names;
}

namespace {

// ---------------------------------------------------------------------------
// Schema reading

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

class Block {
 public:
  Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return j_.contains(key); }

  double number(const std::string& key, double def) {
    const json* v = find(key);
    return v ? as_number(*v, join(path_, key)) : def;
  }

  double required_number(const std::string& key) {
    const json* v = find(key);
    if (!v) throw ConfigError(join(path_, key), "required value is missing");
    return as_number(*v, join(path_, key));
  }

  double positive(const std::string& key, double def) {
    const double v = number(key, def);
    if (!(v > 0.0)) throw ConfigError(join(path_, key), "must be positive");
    return v;
  }

  std::size_t count(const std::string& key, std::size_t def) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_number_integer() || v->get<long long>() < 1)
      throw ConfigError(join(path_, key), "expected a positive integer");
    return v->get<std::size_t>();
  }

  bool boolean(const std::string& key, bool def) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_boolean()) throw ConfigError(join(path_, key), "expected true or false");
    return v->get<bool>();
  }

  std::string text(const std::string& key, const std::string& def) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_string()) throw ConfigError(join(path_, key), "expected a string");
    return v->get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> def) {
    const json* v = find(key);
    if (!v) return def;
    if (!v->is_array()) throw ConfigError(join(path_, key), "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v->size(); ++i) out.push_back(as_number((*v)[i], join(path_, key) + "[" + std::to_string(i) + "]"));
    return out;
  }

  std::optional<Block> child(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return Block(*v, join(path_, key));
  }

  Block required_child(const std::string& key) {
    auto c = child(key);
    if (!c) throw ConfigError(join(path_, key), "required block is missing");
    return *c;
  }

  const json* raw(const std::string& key) { return find(key); }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!used_.count(k)) throw ConfigError(join(path_, k), "unknown key");
  }

 private:
  const json* find(const std::string& key) {
    used_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  static double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(path, "must be finite");
    return d;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

bool is_power_of_two(std::size_t n) { return n >= 16 && (n & (n - 1)) == 0; }

GridSpec read_grid(Block g, int dim, GridSpec def) {
  def.dim = dim;
  def.lo = g.number("lo", def.lo);
  def.hi = g.number("hi", def.hi);
  if (!(def.lo < def.hi)) throw ConfigError(join(g.path(), "hi"), "must exceed lo");
  def.n = g.count("n", def.n);
  if (!is_power_of_two(def.n)) throw ConfigError(join(g.path(), "n"), "must be a power of two >= 16");
  g.finish();
  return def;
}

// "hbar" is a number, or a strictly decreasing list when `sweep` is set.
std::vector<double> read_hbar(Block& p, bool sweep, std::vector<double> def) {
  const std::string path = join(p.path(), "hbar");
  const json* v = p.raw("hbar");
  if (!v) return def;
  std::vector<double> hs;
  if (sweep) {
    if (!v->is_array()) throw ConfigError(path, "expected a list of hbar values");
    hs = p.numbers("hbar", {});
    if (hs.size() < 3) throw ConfigError(path, "slope fits need at least 3 hbar values");
    for (std::size_t k = 0; k < hs.size(); ++k) {
      if (!(hs[k] > 0.0)) throw ConfigError(path + "[" + std::to_string(k) + "]", "must be positive");
      if (k > 0 && !(hs[k] < hs[k - 1])) throw ConfigError(path, "values must be strictly decreasing");
    }
  } else {
    hs = {p.positive("hbar", 1.0)};
  }
  return hs;
}

double read_kappa_squared(Block& p, double def) {
  if (p.has("kappa") && p.has("kappa_squared"))
    throw ConfigError(join(p.path(), "kappa"), "give kappa or kappa_squared, not both");
  if (p.has("kappa")) {
    const double k = p.positive("kappa", 1.0);
    return k * k;
  }
  return p.positive("kappa_squared", def);
}

AnalyticFunction read_analytic(Block& b, const std::string& key) {
  const json* v = b.raw(key);
  if (!v) return AnalyticFunction::zero();
  const std::string path = join(b.path(), key);
  if (!v->is_array()) throw ConfigError(path, "expected a list of polynomial coefficients");
  std::vector<cplx> coeffs;
  for (std::size_t i = 0; i < v->size(); ++i) {
    const json& c = (*v)[i];
    const std::string cp = path + "[" + std::to_string(i) + "]";
    if (c.is_number()) {
      coeffs.emplace_back(c.get<double>(), 0.0);
    } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
      coeffs.emplace_back(c[0].get<double>(), c[1].get<double>());
    } else {
      throw ConfigError(cp, "expected a number or a [re, im] pair");
    }
  }
  return AnalyticFunction::polynomial(std::move(coeffs));
}

SolitonParams read_soliton(Block s) {
  SolitonParams p;
  p.xi = s.number("xi", 0.0);
  p.eta = s.required_number("eta");
  if (!(p.eta > 0.0)) throw ConfigError(join(s.path(), "eta"), "must be positive");
  p.x0 = s.number("x0", 0.0);
  p.phi0 = s.number("phi0", 0.0);
  p.f = read_analytic(s, "f");
  s.finish();
  return p;
}

SeparatedClass1Params read_class1(Block b, SeparatedClass1Params p) {
  p.c1 = b.required_number("c1");
  p.c2 = b.number("c2", p.c2);
  p.c3 = b.number("c3", p.c3);
  p.c4 = b.number("c4", p.c4);
  p.anchor = b.number("anchor", p.anchor);
  p.cells = b.count("cells", p.cells);
  b.finish();
  return p;
}

SeparatedClass2Params read_class2(Block b, SeparatedClass2Params p) {
  p.c1 = b.required_number("c1");
  if (p.c1 == 0.0) throw ConfigError(join(b.path(), "c1"), "must be nonzero");
  p.c2 = b.number("c2", p.c2);
  p.c3 = b.number("c3", p.c3);
  p.c4 = b.number("c4", p.c4);
  p.a1 = b.number("a1", p.a1);
  p.a2 = b.number("a2", p.a2);
  p.a3 = b.number("a3", p.a3);
  p.a4 = b.number("a4", p.a4);
  const double sign = b.number("p_sign", p.p_sign);
  if (sign != 1.0 && sign != -1.0) throw ConfigError(join(b.path(), "p_sign"), "must be 1 or -1");
  p.p_sign = int(sign);
  p.anchor = b.number("anchor", p.anchor);
  p.cells = b.count("cells", p.cells);
  b.finish();
  return p;
}

CylindricalParams read_cylindrical(Block b, CylindricalParams p) {
  p.c1 = b.required_number("c1");
  if (p.c1 == 0.0) throw ConfigError(join(b.path(), "c1"), "must be nonzero");
  p.c2 = b.number("c2", p.c2);
  p.c3 = b.number("c3", p.c3);
  p.a1 = b.number("a1", p.a1);
  p.a2 = b.number("a2", p.a2);
  p.a3 = b.number("a3", p.a3);
  p.b1 = b.number("b1", p.b1);
  b.finish();
  return p;
}

PotentialConfig read_potential(std::optional<Block> b, const std::string& required_type, PotentialConfig def) {
  if (!b) {
    if (def.type != required_type && required_type != "zero")
      throw ConfigError("potential", "required block is missing");
    return def;
  }
  PotentialConfig pc = def;
  pc.type = b->text("type", required_type);
  if (pc.type != required_type)
    throw ConfigError(join(b->path(), "type"), "this scenario needs a '" + required_type + "' potential");
  if (pc.type == "harmonic") {
    pc.omega = b->positive("omega", pc.omega);
    pc.center = b->number("center", pc.center);
  } else if (pc.type == "separated") {
    pc.v0.coeffs = b->numbers("v0", pc.v0.coeffs);
    pc.v1.coeffs = b->numbers("v1", pc.v1.coeffs);
  }
  b->finish();
  return pc;
}

// family must hold exactly the named block
Block family_block(Block& root, const std::string& name) {
  Block fam = root.required_child("family");
  Block b = fam.required_child(name);
  fam.finish();
  return b;
}

OutputOptions read_output(std::optional<Block> b) {
  OutputOptions o;
  if (!b) return o;
  o.directory = b->text("directory", o.directory);
  o.snapshots = b->boolean("snapshots", o.snapshots);
  o.plotdata = b->boolean("plotdata", o.plotdata);
  if (const json* f = b->raw("formats")) {
    const std::string path = join(b->path(), "formats");
    if (!f->is_array()) throw ConfigError(path, "expected a list of formats");
    for (std::size_t i = 0; i < f->size(); ++i)
      if (!(*f)[i].is_string() || (*f)[i].get<std::string>() != "csv")
        throw ConfigError(path + "[" + std::to_string(i) + "]", "only \"csv\" is supported");
  }
  b->finish();
  return o;
}

SolitonScenario read_soliton_propagation(Block& root) {
  SolitonScenario sc;
  PropagationSetup& s = sc.setup;
  s.soliton = read_soliton(family_block(root, "soliton"));
  if (auto g = root.child("grid")) s.grid = read_grid(*g, 1, s.grid);
  if (auto p = root.child("params")) {
    s.phys.hbar = read_hbar(*p, false, {s.phys.hbar})[0];
    s.phys.mass = p->positive("mass", s.phys.mass);
    s.phys.kappa_squared = read_kappa_squared(*p, s.phys.kappa_squared);
    p->finish();
  }
  read_potential(root.child("potential"), "zero", {});
  if (auto v = root.child("solver")) {
    s.dt = v->positive("dt", s.dt);
    s.t_end = v->positive("t_end", s.t_end);
    s.snapshot_every = v->count("snapshot_every", s.snapshot_every);
    v->finish();
  }
  return sc;
}

EhrenfestSetup read_ehrenfest(Block& root) {
  EhrenfestSetup s;
  s.soliton = read_soliton(family_block(root, "soliton"));
  if (auto g = root.child("grid")) s.grid = read_grid(*g, 1, s.grid);
  if (auto p = root.child("params")) {
    s.phys.hbar = read_hbar(*p, false, {s.phys.hbar})[0];
    s.phys.mass = p->positive("mass", s.phys.mass);
    s.phys.kappa_squared = read_kappa_squared(*p, s.phys.kappa_squared);
    s.r_values = p->numbers("r", s.r_values);
    if (s.r_values.empty()) throw ConfigError(join(p->path(), "r"), "needs at least one value");
    p->finish();
  }
  PotentialConfig def;
  def.type = "harmonic";
  def.omega = s.omega;
  const PotentialConfig pc = read_potential(root.child("potential"), "harmonic", def);
  if (pc.center != 0.0) throw ConfigError("potential.center", "the centroid comparison assumes a trap at the origin");
  s.omega = pc.omega;
  if (auto v = root.child("solver")) {
    s.dt = v->positive("dt", s.dt);
    s.t_end = v->positive("t_end", s.t_end);
    s.sample_every = v->count("snapshot_every", s.sample_every);
    s.classical_dt = v->positive("classical_dt", s.classical_dt);
    v->finish();
  }
  return s;
}

ResidualScalingSetup read_residual_scaling(Block& root) {
  ResidualScalingSetup s = default_residual_scaling();
  s.family = read_class1(family_block(root, "separated1"), s.family);
  if (auto g = root.child("grid")) s.grid = read_grid(*g, 1, s.grid);
  if (auto p = root.child("params")) {
    s.hbars = read_hbar(*p, true, s.hbars);
    s.mass = p->positive("mass", s.mass);
    s.kappa_squared = read_kappa_squared(*p, s.kappa_squared);
    p->finish();
  }
  s.potential = read_potential(root.child("potential"), "separated", s.potential);
  if (auto e = root.child("evaluation")) {
    s.t = e->number("t", s.t);
    e->finish();
  }
  return s;
}

ConcentrationSetup read_concentration(Block& root) {
  ConcentrationSetup s;
  s.soliton = read_soliton(family_block(root, "soliton"));
  if (auto g = root.child("grid")) s.grid = read_grid(*g, 1, s.grid);
  if (auto p = root.child("params")) {
    s.hbars = read_hbar(*p, true, s.hbars);
    s.mass = p->positive("mass", s.mass);
    s.kappa_squared = read_kappa_squared(*p, s.kappa_squared);
    s.reference_hbar = p->positive("reference_hbar", s.reference_hbar);
    p->finish();
  }
  read_potential(root.child("potential"), "zero", {});
  return s;
}

IdentitySetup read_identity(Block& root) {
  IdentitySetup s = default_identity_setup();
  if (auto fam = root.child("family")) {
    if (auto b = fam->child("soliton")) s.soliton = read_soliton(*b);
    if (auto b = fam->child("separated1")) s.class1 = read_class1(*b, s.class1);
    if (auto b = fam->child("separated2")) s.class2 = read_class2(*b, s.class2);
    if (auto b = fam->child("cylindrical")) s.cylindrical = read_cylindrical(*b, s.cylindrical);
    fam->finish();
  }
  if (auto p = root.child("params")) {
    s.hbar = read_hbar(*p, false, {s.hbar})[0];
    s.mass = p->positive("mass", s.mass);
    s.kappa_squared = read_kappa_squared(*p, s.kappa_squared);
    p->finish();
  }
  s.potential = read_potential(root.child("potential"), "separated", s.potential);
  if (auto e = root.child("evaluation")) {
    s.t = e->number("t", s.t);
    s.samples = e->count("samples", s.samples);
    const double seed = e->number("seed", double(s.seed));
    if (seed < 0.0 || seed != std::floor(seed)) throw ConfigError(join(e->path(), "seed"), "expected an integer >= 0");
    s.seed = std::uint64_t(seed);
    e->finish();
  }
  return s;
}

CylindricalSetup read_cylindrical_check(Block& root) {
  CylindricalSetup s;
  s.params = read_cylindrical(family_block(root, "cylindrical"), s.params);
  if (auto g = root.child("grid")) {
    s.n = g->count("n", s.n);
    if (!is_power_of_two(s.n)) throw ConfigError(join(g->path(), "n"), "must be a power of two >= 16");
    s.half_width_per_hbar = g->positive("half_width_per_hbar", s.half_width_per_hbar);
    g->finish();
  }
  if (auto p = root.child("params")) {
    s.hbars = read_hbar(*p, true, s.hbars);
    s.mass = p->positive("mass", s.mass);
    s.kappa_squared = read_kappa_squared(*p, s.kappa_squared);
    p->finish();
  }
  read_potential(root.child("potential"), "zero", {});
  return s;
}

// ---------------------------------------------------------------------------
// Rows and files

// Short form for case ids and tolerance labels; values keep 17 digits.
std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

class Report {
 public:
  explicit Report(std::string scenario) : scenario_(std::move(scenario)) {}

  void below(const std::string& case_id, const std::string& metric, double v, double tol) {
    add(case_id, metric, v, "<" + label(tol), v < tol);
  }
  void at_least(const std::string& case_id, const std::string& metric, double v, double tol) {
    add(case_id, metric, v, ">=" + label(tol), v >= tol);
  }
  void within(const std::string& case_id, const std::string& metric, double v, double target, double tol) {
    add(case_id, metric, v, label(target) + "+-" + label(tol), std::abs(v - target) <= tol);
  }
  void info(const std::string& case_id, const std::string& metric, double v) { add(case_id, metric, v, "report", true); }
  void add(const std::string& case_id, const std::string& metric, double v, std::string tol, bool pass) {
    rows.push_back({scenario_, case_id, metric, v, std::move(tol), pass && !std::isnan(v)});
  }

  std::vector<ReportRow> rows;

 private:
  std::string scenario_;
};

class Table {
 public:
  explicit Table(std::initializer_list<std::string> header) {
    bool first = true;
    for (const auto& h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }
  Table& row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      out_ << (first ? "" : ",") << format_number(v);
      first = false;
    }
    out_ << '\n';
    return *this;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string centroid_csv(const std::vector<CentroidSample>& samples) {
  Table t({"t", "mean_x", "mean_p", "classical_x", "classical_p"});
  for (const auto& c : samples) t.row({c.t, c.mean_x, c.mean_p, c.classical_x, c.classical_p});
  return t.str();
}

std::string field_csv(const ComplexField& psi) {
  const bool two_d = psi.grid.dim() == 2;
  Table t = two_d ? Table({"x", "y", "re", "im", "density"}) : Table({"x", "re", "im", "density"});
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const Coord x = psi.grid.point(j);
    const cplx v = psi[j];
    if (two_d)
      t.row({x[0], x[1], v.real(), v.imag(), std::norm(v)});
    else
      t.row({x[0], v.real(), v.imag(), std::norm(v)});
  }
  return t.str();
}

std::string density_csv(const ComplexField& psi) {
  const bool two_d = psi.grid.dim() == 2;
  Table t = two_d ? Table({"x", "y", "density"}) : Table({"x", "density"});
  for (std::size_t j = 0; j < psi.size(); ++j) {
    const Coord x = psi.grid.point(j);
    if (two_d)
      t.row({x[0], x[1], std::norm(psi[j])});
    else
      t.row({x[0], std::norm(psi[j])});
  }
  return t.str();
}

std::string scaling_csv(const std::vector<double>& hbars, const std::vector<double>& values, const ScalingReport& fit,
                        const std::string& value_name) {
  Table t({"hbar", value_name, "fitted"});
  for (std::size_t k = 0; k < hbars.size(); ++k)
    t.row({hbars[k], values[k], std::exp(fit.intercept) * std::pow(hbars[k], fit.slope)});
  return t.str();
}

std::string snapshot_name(std::size_t k) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snapshots/snapshot_%04zu.csv", k);
  return buf;
}

std::string r_label(double r) { return "r=" + label(r); }

// Tolerances of the scenario rows; the acceptance binary pins the same values.
constexpr double kL2 = 1e-4;
constexpr double kMassDrift = 1e-10;
constexpr double kVelocity = 1e-3;
constexpr double kCentroid = 5e-3;
constexpr double kEhrenfestLaw = 1e-3;
constexpr double kLeadingSlope = 0.9;
constexpr double kCorrectedSlope = 1.8;
constexpr double kConcentrationSlope = 0.02;
constexpr double kVariance = 1e-6;
constexpr double kBall = 0.99;
constexpr double kSymmetry = 1e-14;
constexpr double kDtRatio = 0.8;
constexpr double kStepNorm = 1e-12;

void soliton_propagation(const SolitonScenario& sc, const OutputOptions& opt, Report& rep, ScenarioOutput& out) {
  PropagationSetup s = sc.setup;
  s.keep_snapshots = opt.snapshots;
  const PropagationResult r = run_propagation(s);
  const double v0 = 2.0 * s.soliton.xi / s.phys.mass;
  rep.below("A1", "l2_error", r.l2_error, kL2);
  rep.below("A1", "mass_drift", r.mass_drift, kMassDrift);
  rep.add("A1", "peak_velocity_error", std::abs(r.velocity - v0), "<=" + label(kVelocity),
          std::abs(r.velocity - v0) <= kVelocity);
  rep.info("A1", "peak_velocity", r.velocity);
  rep.below("A8", "max_step_norm_change", r.max_step_change, kStepNorm);
  const DtConvergenceResult c = run_dt_halving(s);
  rep.info("A8", "error_dt_vs_reference", c.reference_errors[0]);
  rep.info("A8", "error_half_dt_vs_reference", c.reference_errors[1]);
  rep.within("A8", "dt_halving_ratio", c.reference_ratio, 4.0, kDtRatio);
  rep.info("A8", "dt_halving_ratio_vs_exact", c.exact_ratio);
  if (opt.plotdata) {
    out.files.push_back({"plotdata/centroid.csv", centroid_csv(r.centroid)});
    Table t({"x", "density", "exact_density"});
    for (std::size_t j = 0; j < r.final_field.size(); ++j)
      t.row({r.final_field.grid.point(j)[0], std::norm(r.final_field[j]), std::norm(r.exact_field[j])});
    out.files.push_back({"plotdata/density.csv", t.str()});
  }
  if (opt.snapshots)
    for (std::size_t k = 0; k < r.snapshots.size(); ++k) out.files.push_back({snapshot_name(k), field_csv(r.snapshots[k])});
}

void ehrenfest(const EhrenfestSetup& s, const OutputOptions& opt, Report& rep, ScenarioOutput& out) {
  const EhrenfestResult r = run_ehrenfest(s);
  for (std::size_t k = 0; k < r.runs.size(); ++k) {
    const auto& run = r.runs[k];
    const std::string id = r_label(run.r);
    rep.below(id, "centroid_x_error", run.max_dx, kCentroid);
    rep.below(id, "centroid_p_error", run.max_dp, kCentroid);
    rep.below(id, "position_law_residual", run.max_position_law, kEhrenfestLaw);
    rep.below(id, "momentum_law_residual", run.max_momentum_law, kEhrenfestLaw);
    rep.below(id, "mass_drift", run.mass_drift, kMassDrift);
    if (opt.plotdata) {
      if (k == 0) out.files.push_back({"plotdata/centroid.csv", centroid_csv(run.centroid)});
      out.files.push_back({"plotdata/centroid_" + std::to_string(k) + ".csv", centroid_csv(run.centroid)});
    }
  }
  if (opt.plotdata) {
    const PotentialSpec pot = PotentialSpec::harmonic({s.omega, s.omega}, {0.0, 0.0}, s.phys.mass);
    const PhysParams pp = s.phys.params();
    Table t({"t", "x", "p", "H"});
    for (const auto& z : r.classical.points) t.row({z.t, z.x[0], z.p[0], classical_hamiltonian(z, pot, pp)});
    out.files.push_back({"plotdata/trajectory.csv", t.str()});
  }
}

void residual_scaling(const ResidualScalingSetup& s, const OutputOptions& opt, Report& rep, ScenarioOutput& out) {
  const ResidualScalingResult r = run_residual_scaling(s);
  for (std::size_t k = 0; k < r.hbars.size(); ++k) {
    const std::string h = "hbar=" + label(r.hbars[k]);
    rep.info("leading/" + h, "relative_residual", r.leading[k]);
    rep.info("corrected/" + h, "relative_residual", r.corrected[k]);
  }
  rep.at_least("leading", "residual_slope", r.leading_fit.slope, kLeadingSlope);
  rep.at_least("corrected", "residual_slope", r.corrected_fit.slope, kCorrectedSlope);
  if (opt.plotdata) {
    out.files.push_back({"plotdata/scaling.csv", scaling_csv(r.hbars, r.leading, r.leading_fit, "residual")});
    out.files.push_back(
        {"plotdata/scaling_corrected.csv", scaling_csv(r.hbars, r.corrected, r.corrected_fit, "residual")});
  }
}

void concentration(const ConcentrationSetup& s, const OutputOptions& opt, Report& rep, ScenarioOutput& out) {
  const ConcentrationResult r = run_concentration(s);
  rep.within("position", "width_slope", r.scaling.slope, 1.0, kConcentrationSlope);
  rep.info("momentum", "width_slope", r.scaling.momentum_slope);
  rep.below("reference", "variance_error", std::abs(r.reference_variance - r.reference_oracle), kVariance);
  rep.info("reference", "variance", r.reference_variance);
  rep.at_least("smallest_hbar", "mass_in_ball", r.ball_fraction, kBall);
  rep.add("all", "uncertainty", r.uncertainty_ok ? 1.0 : 0.0, "==1", r.uncertainty_ok);
  if (opt.plotdata) {
    Table m({"hbar", "mean_x", "mean_p", "var_x", "var_p", "cov_xp"});
    for (const auto& rec : r.records) m.row({rec.hbar, rec.mean_x[0], rec.mean_p[0], rec.var_x(0), rec.var_p(0), rec.cov_xp(0)});
    out.files.push_back({"plotdata/moments.csv", m.str()});
    out.files.push_back({"plotdata/scaling.csv", scaling_csv(r.scaling.hbars, r.scaling.values, r.scaling, "width")});
    const PhysParams pp = PhysParams::with_kappa_squared(s.hbars.back(), s.mass, s.kappa_squared);
    out.files.push_back({"plotdata/density.csv", density_csv(one_soliton(s.soliton, make_grid(s.grid), 0.0, pp))});
  }
}

void identity_suite(const IdentitySetup& s, Report& rep) {
  for (const auto& c : run_identity_suite(s)) rep.below(c.family, c.metric, c.value, c.tolerance);
}

void cylindrical_check(const CylindricalSetup& s, const OutputOptions& opt, Report& rep, ScenarioOutput& out) {
  const CylindricalResult r = run_cylindrical(s);
  for (std::size_t k = 0; k < r.hbars.size(); ++k)
    rep.info("hbar=" + label(r.hbars[k]), "relative_residual", r.residuals[k]);
  rep.add("sweep", "residual_monotone", r.monotone ? 1.0 : 0.0, "==1", r.monotone);
  rep.info("sweep", "residual_slope", r.fit.slope);
  rep.below("sweep", "radial_symmetry_error", r.symmetry_error, kSymmetry);
  if (opt.plotdata) {
    out.files.push_back({"plotdata/scaling.csv", scaling_csv(r.hbars, r.residuals, r.fit, "residual")});
    out.files.push_back({"plotdata/density.csv", density_csv(r.smallest)});
  }
  if (opt.snapshots) out.files.push_back({"snapshots/cylindrical.csv", field_csv(r.smallest)});
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open " + path.string() + " for writing");
  f << content;
  f.close();
  if (!f) throw Error("write failed for " + path.string());
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentConfig parse_config(const json& doc) {
  Block root(doc, "");
  ExperimentConfig cfg;
  const json* sc = root.raw("scenario");
  if (!sc) throw ConfigError("scenario", "required value is missing");
  if (!sc->is_string()) throw ConfigError("scenario", "expected a string");
  cfg.scenario = sc->get<std::string>();
  if (cfg.scenario == "soliton-propagation")
    cfg.setup = read_soliton_propagation(root);
  else if (cfg.scenario == "ehrenfest")
    cfg.setup = read_ehrenfest(root);
  else if (cfg.scenario == "residual-scaling")
    cfg.setup = read_residual_scaling(root);
  else if (cfg.scenario == "concentration")
    cfg.setup = read_concentration(root);
  else if (cfg.scenario == "identity-suite")
    cfg.setup = read_identity(root);
  else if (cfg.scenario == "cylindrical-check")
    cfg.setup = read_cylindrical_check(root);
  else
    throw ConfigError("scenario", "unknown scenario '" + cfg.scenario + "' (see list-scenarios)");
  cfg.output = read_output(root.child("output"));
  root.finish();
  return cfg;
}

json load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open config file " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw Error(path + ": " + e.what());
  }
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("", "override '" + assignment + "' is not key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::string path;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError(key, "empty component in override path");
    path = join(path, part);
    if (!node->is_object()) throw ConfigError(path, "cannot override inside a non-object value");
    if (dot == std::string::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

const std::vector<AcceptanceMetric>& acceptance_metrics() {
  static const std::vector<AcceptanceMetric> table = {
      {"A1", "soliton-propagation", "A1", "l2_error"},
      {"A1", "soliton-propagation", "A1", "mass_drift"},
      {"A1", "soliton-propagation", "A1", "peak_velocity_error"},
      {"A2", "ehrenfest", "", "centroid_x_error"},
      {"A2", "ehrenfest", "", "centroid_p_error"},
      {"A3", "residual-scaling", "leading", "residual_slope"},
      {"A4", "residual-scaling", "corrected", "residual_slope"},
      {"A5", "concentration", "position", "width_slope"},
      {"A5", "concentration", "reference", "variance_error"},
      {"A5", "concentration", "smallest_hbar", "mass_in_ball"},
      {"A6", "identity-suite", "", "representation_identity"},
      {"A6", "identity-suite", "", "first_integral_residual"},
      {"A6", "identity-suite", "", "hj_residual"},
      {"A6", "identity-suite", "", "transport_phase"},
      {"A6", "identity-suite", "", "transport_envelope"},
      {"A6", "identity-suite", "", "reduction_phase"},
      {"A6", "identity-suite", "", "reduction_envelope"},
      {"A7", "cylindrical-check", "sweep", "residual_monotone"},
      {"A7", "cylindrical-check", "sweep", "radial_symmetry_error"},
      {"A8", "soliton-propagation", "A8", "dt_halving_ratio"},
      {"A8", "soliton-propagation", "A8", "max_step_norm_change"},
  };
  return table;
}

bool ScenarioOutput::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return !rows.empty();
}

ScenarioOutput run_scenario(const ExperimentConfig& config) {
  ScenarioOutput out;
  Report rep(config.scenario);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, SolitonScenario>)
            soliton_propagation(s, config.output, rep, out);
          else if constexpr (std::is_same_v<T, EhrenfestSetup>)
            ehrenfest(s, config.output, rep, out);
          else if constexpr (std::is_same_v<T, ResidualScalingSetup>)
            residual_scaling(s, config.output, rep, out);
          else if constexpr (std::is_same_v<T, ConcentrationSetup>)
            concentration(s, config.output, rep, out);
          else if constexpr (std::is_same_v<T, IdentitySetup>)
            identity_suite(s, rep);
          else
            cylindrical_check(s, config.output, rep, out);
        },
        config.setup);
  } catch (const std::exception& e) {
    rep.add("scenario", "scenario_error", std::numeric_limits<double>::quiet_NaN(), "no error", false);
    out.errors.push_back(e.what());
  }
  if (out.errors.empty())
    for (const auto& m : acceptance_metrics()) {
      if (m.scenario != config.scenario) continue;
      bool found = false;
      for (const auto& r : rep.rows) found = found || (r.metric == m.metric && (m.case_id.empty() || r.case_id == m.case_id));
      if (!found) rep.add(m.criterion, "missing:" + m.metric, std::numeric_limits<double>::quiet_NaN(), "present", false);
    }
  out.timings.emplace_back(config.scenario,
                           std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  out.rows = std::move(rep.rows);
  return out;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string results_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream s;
  s << "scenario,case,metric,value,tolerance,pass\n";
  for (const auto& r : rows)
    s << r.scenario << ',' << r.case_id << ',' << r.metric << ',' << format_number(r.value) << ',' << r.tolerance
      << ',' << (r.pass ? "true" : "false") << '\n';
  return s.str();
}

void emit(const ScenarioOutput& output, const std::string& directory) {
  if (output.rows.empty()) throw Error("emit: the scenario produced no report rows");
  const std::filesystem::path root(directory);
  write_file(root / "results.csv", results_csv(output.rows));
  std::ostringstream timing;
  timing << "label,seconds\n";
  for (const auto& [label, secs] : output.timings) timing << label << ',' << format_number(secs) << '\n';
  write_file(root / "timing.csv", timing.str());
  if (!output.errors.empty()) {
    std::string text;
    for (const auto& e : output.errors) text += e + '\n';
    write_file(root / "errors.txt", text);
  }
  for (const auto& f : output.files) write_file(root / f.path, f.content);
}

}  // namespace scnlse
