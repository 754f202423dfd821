#include "cvwit/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "cvwit/activation.hpp"
#include "cvwit/errors.hpp"
#include "cvwit/serialize.hpp"
#include "cvwit/states.hpp"

namespace cvwit::cli {

using nlohmann::json;

namespace {

// ---------------------------------------------------------- config access

template <class T>
T get_or(json& j, const char* key, T def) {
  if (!j.is_object()) throw ConfigError(std::string("expected an object around '") + key + "'");
  if (!j.contains(key)) j[key] = def;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class T>
T require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

Complex complex_of(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ConfigError("complex values are a number or [re, im]");
}

Complex complex_or(json& j, const char* key, Complex def) {
  if (!j.contains(key)) j[key] = json::array({def.real(), def.imag()});
  return complex_of(j[key]);
}

json& object_or(json& j, const char* key) {
  if (!j.contains(key)) j[key] = json::object();
  if (!j[key].is_object()) throw ConfigError(std::string("'") + key + "' must be an object");
  return j[key];
}

FockCutoff cutoff_of(json& cfg, int def) {
  const int d = get_or(cfg, "cutoff", def);
  if (d < 2) throw ConfigError("cutoff must be at least 2");
  return FockCutoff(d);
}

std::size_t budget_of(json& cfg) {
  return get_or<std::size_t>(cfg, "budget", kDefaultProductBudget);
}

GaussianFidelityConfig fidelity_of(json& cfg) {
  GaussianFidelityConfig f;
  f.seeds = get_or<std::vector<std::uint64_t>>(cfg, "seeds", f.seeds);
  if (f.seeds.empty()) throw ConfigError("seed list must not be empty");
  json& o = object_or(cfg, "optimizer");
  f.starts = get_or(o, "starts", f.starts);
  f.r_max = get_or(o, "r_max", f.r_max);
  f.f_tol = get_or(o, "f_tol", f.f_tol);
  f.max_iter = get_or(o, "max_iter", f.max_iter);
  return f;
}

DepthSearchConfig search_of(json& cfg, DepthSearchConfig d = {}) {
  json& s = object_or(cfg, "search");
  d.radius = get_or(s, "radius", d.radius);
  d.radial_points = get_or(s, "radial_points", d.radial_points);
  d.angular_points = get_or(s, "angular_points", d.angular_points);
  d.refine_starts = get_or(s, "refine_starts", d.refine_starts);
  d.f_tol = get_or(s, "f_tol", d.f_tol);
  d.max_iter = get_or(s, "max_iter", d.max_iter);
  return d;
}

WitnessBox box_of(json& cfg) {
  json& b = object_or(cfg, "box");
  WitnessBox box{get_or(b, "n", 1.0), get_or(b, "m", 1.0)};
  box.validate();
  return box;
}

EcQuadrature parse_quadrature(const std::string& s) {
  if (s == "q") return EcQuadrature::Q;
  if (s == "p") return EcQuadrature::P;
  if (s == "both") return EcQuadrature::Both;
  throw ConfigError("EC quadrature must be q, p or both");
}

// ------------------------------------------------------------------ states

PureState pure_kind(json& spec, FockCutoff cutoff, const std::string& kind) {
  if (kind == "fock") return fock(require<int>(spec, "n"), cutoff);
  if (kind == "coherent") return coherent(complex_or(spec, "alpha", 0.0), cutoff);
  if (kind == "squeezed") {
    GaussianPureParams p{complex_or(spec, "alpha", 0.0), get_or(spec, "r", 0.0), get_or(spec, "phi", 0.0)};
    return gaussian_pure(p, cutoff);
  }
  if (kind == "cat") return cat(complex_or(spec, "alpha", 1.0), get_or(spec, "sign", -1), cutoff);
  if (kind == "photon_subtracted") return photon_subtracted_squeezed(get_or(spec, "r", 0.5), cutoff);
  if (kind == "gkp") {
    GkpParams p;
    if (spec.contains("db")) {
      p.epsilon = gkp_epsilon_from_db(require<double>(spec, "db"));
    } else {
      p.epsilon = get_or(spec, "epsilon", p.epsilon);
    }
    p.logical = parse_gkp_logical(get_or<std::string>(spec, "logical", "zero"));
    p.peak_window = get_or(spec, "peak_window", 0);
    return gkp_damped(p, cutoff, get_or(spec, "tail_guard", 1e-6));
  }
  throw ConfigError("unknown pure state kind '" + kind + "'");
}

DensityMatrix apply_channel_spec(json& ch, const DensityMatrix& rho) {
  const auto kind = require<std::string>(ch, "kind");
  if (kind == "loss") return apply_loss(rho, {get_or(ch, "eta", 1.0)});
  if (kind == "noise") {
    GaussNoiseParams p{require<double>(ch, "sigma2"), get_or(ch, "quad_order", 15)};
    return GaussianNoiseChannel(p, rho.cutoff()).apply(rho);
  }
  if (kind == "damping") return damping(rho, require<double>(ch, "epsilon"));
  if (kind == "ec") {
    const double eps = require<double>(ch, "ancilla_epsilon");
    const auto anc = gkp_damped({eps, GkpLogical::Plus, 0}, rho.cutoff());
    return gkp_ec_round(rho, anc, parse_quadrature(get_or<std::string>(ch, "quadrature", "both")));
  }
  if (kind == "rotation") {
    const double th = get_or(ch, "theta", 0.0);
    Vector u(rho.dim());
    for (int n = 0; n < rho.dim(); ++n) u(n) = std::polar(1.0, th * n);
    return DensityMatrix(u.asDiagonal() * rho.matrix() * u.conjugate().asDiagonal(), rho.leakage());
  }
  if (kind == "displacement") {
    const Matrix d = DisplacementGenerator(rho.cutoff()).displacement(complex_or(ch, "alpha", 0.0));
    return DensityMatrix(d * rho.matrix() * d.adjoint(), rho.leakage());
  }
  throw ConfigError("unknown channel kind '" + kind + "'");
}

DensityMatrix apply_channels(json& spec, DensityMatrix rho) {
  if (!spec.contains("channels")) return rho;
  if (!spec["channels"].is_array()) throw ConfigError("'channels' must be a list");
  for (auto& ch : spec["channels"]) rho = apply_channel_spec(ch, rho);
  return rho;
}

}  // namespace

PureState build_pure_state(json& spec, FockCutoff cutoff) {
  const auto kind = require<std::string>(spec, "kind");
  if (spec.contains("channels") && !spec["channels"].empty()) throw ConfigError("a pure state spec cannot carry channels");
  return pure_kind(spec, cutoff, kind);
}

DensityMatrix build_state(json& spec, FockCutoff cutoff) {
  const auto kind = require<std::string>(spec, "kind");
  if (kind == "thermal") return apply_channels(spec, thermal(get_or(spec, "nbar", 1.0), cutoff));
  if (kind == "mixture") {
    if (!spec.contains("components") || !spec["components"].is_array() || spec["components"].empty()) {
      throw ConfigError("mixture needs a nonempty 'components' list");
    }
    Matrix acc = Matrix::Zero(cutoff.dim(), cutoff.dim());
    double total = 0.0;
    double leak = 0.0;
    for (auto& c : spec["components"]) {
      const double w = require<double>(c, "weight");
      if (w < 0.0) throw ConfigError("mixture weights must be nonnegative");
      if (!c.contains("state")) throw ConfigError("mixture component needs 'state'");
      const DensityMatrix r = build_state(c["state"], cutoff);
      acc += w * r.matrix();
      total += w;
      leak = std::max(leak, r.leakage());
    }
    if (!(total > 0.0)) throw ConfigError("mixture weights sum to zero");
    return apply_channels(spec, DensityMatrix(acc / total, leak));
  }
  return apply_channels(spec, pure_kind(spec, cutoff, kind).density());
}

namespace {

// --------------------------------------------------------------- witnesses

WitnessSpec build_witness(json& spec, const DensityMatrix& rho, const WitnessBox& box,
                          const GaussianFidelityConfig& fid, const DepthSearchConfig& search) {
  const auto kind = get_or<std::string>(spec, "kind", "optimal_displaced_parity");
  if (kind == "displaced_parity") {
    return WitnessSpec{DisplacedParity{complex_or(spec, "alpha", 0.0)}, box, FreeSet::WignerPositive, 1.0, false};
  }
  if (kind == "optimal_displaced_parity") {
    const auto r = negativity_depth(rho, search);
    spec["found_alpha"] = json::array({r.argmin_alpha.real(), r.argmin_alpha.imag()});
    return WitnessSpec{DisplacedParity{r.argmin_alpha}, box, FreeSet::WignerPositive, 1.0, false};
  }
  if (kind == "pure_projector" || kind == "two_copy_projector") {
    if (!spec.contains("state")) throw ConfigError("projector witness needs 'state'");
    PureState psi = build_pure_state(spec["state"], rho.cutoff());
    double lam = 0.0;
    if (spec.contains("lambda")) {
      lam = require<double>(spec, "lambda");
    } else {
      lam = gaussian_fidelity(psi, fid).lambda_g;
      spec["computed_lambda"] = lam;
    }
    if (kind == "pure_projector") {
      return WitnessSpec{PureProjector{psi, lam}, box, FreeSet::ConvexGaussianHull, 1.0, false};
    }
    return WitnessSpec{TwoCopyProjector{psi, lam}, box, FreeSet::GaussianTwoCopy, 1.0, false};
  }
  throw ConfigError("unknown witness kind '" + kind + "'");
}

std::string finish_json(json body, const std::string& command, const json& cfg, int cutoff, double leak) {
  OutputMeta meta{command, cfg, cutoff, leak};
  body["meta"] = meta_json(meta);
  return body.dump(2) + "\n";
}

std::string finish_csv(const CsvTable& t, const std::string& command, const json& cfg, int cutoff, double leak) {
  OutputMeta meta{command, cfg, cutoff, leak};
  std::ostringstream os;
  write_csv(os, meta, t);
  return os.str();
}

std::vector<double> grid_or(json& cfg, const char* key, std::vector<double> def) {
  auto v = get_or(cfg, key, def);
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

// ---------------------------------------------------------------- commands

std::string cmd_wigner(json& cfg) {
  const FockCutoff cutoff = cutoff_of(cfg, 40);
  json& st = object_or(cfg, "state");
  if (!st.contains("kind")) st["kind"] = "fock", st["n"] = 1;
  const DensityMatrix rho = build_state(st, cutoff);
  const double radius = get_or(cfg, "radius", 0.0);
  const int res = get_or(cfg, "resolution", 40);
  const WignerGrid g = wigner_grid(rho, radius, res);
  cfg["resolved_radius"] = g.radius;
  cfg["dropped_points"] = g.dropped.size();
  return finish_csv(wigner_table(g), "wigner", cfg, cutoff.dim(), rho.leakage());
}

std::string cmd_negativity_depth(json& cfg) {
  const FockCutoff cutoff = cutoff_of(cfg, 40);
  json& st = object_or(cfg, "state");
  if (!st.contains("kind")) st["kind"] = "fock", st["n"] = 1;
  const DensityMatrix rho = build_state(st, cutoff);
  const auto search = search_of(cfg);
  const auto r = negativity_depth(rho, search);
  json body = to_json(r);
  body["activated_E"] = std::numbers::pi / 4.0 * r.depth;
  body["activated_S"] = std::numbers::pi / 2.0 * r.depth;
  return finish_json(body, "negativity-depth", cfg, cutoff.dim(), rho.leakage());
}

std::string cmd_loss_sweep(json& cfg) {
  const int n = get_or(cfg, "fock_n", 1);
  const FockCutoff cutoff = cutoff_of(cfg, std::max(25, n + 20));
  const auto etas = grid_or(cfg, "eta_grid", {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0});
  FamilySearchConfig fs;
  fs.depth = search_of(cfg);
  const DensityMatrix in = fock(n, cutoff).density();
  const Matrix parity_m = parity_op(cutoff).matrix();
  const WitnessSpec parity{DisplacedParity{0.0}, {1.0, 1.0}, FreeSet::WignerPositive, 1.0, false};
  CsvTable t{{"eta", "parity_expectation", "wn_lower_bound", "activated_E", "activated_S", "classification"},
             {}};
  double leak = 0.0;
  for (double eta : etas) {
    const DensityMatrix rho = apply_loss(in, {eta});
    leak = std::max(leak, rho.leakage());
    const MonotoneBound b = lower_bound(rho, fs, FreeSet::WignerPositive, {1.0, 1.0});
    // Below threshold the search witness is arbitrary; plain parity keeps q tied to eta.
    const WitnessSpec w = b.lower > 0.0 && b.witness_used ? *b.witness_used : parity;
    const auto ent = activate_entanglement(rho, w);
    const auto ste = activate_steering(rho, w);
    t.rows.push_back({format_number(eta), format_number(rho.expectation(parity_m)), format_number(b.lower),
                      format_number(ent.entanglement), format_number(ste.steering),
                      std::string(to_string(ste.classification))});
  }
  return finish_csv(t, "loss-sweep", cfg, cutoff.dim(), leak);
}

std::vector<GkpRow> gkp_sweep(const GkpSweepConfig& cfg) {
  if (cfg.db.empty()) throw ConfigError("gkp sweep needs at least one squeezing value");
  if (!(cfg.eta >= 0.0 && cfg.eta <= 1.0)) throw ConfigError("eta must lie in [0,1]");
  std::vector<double> dbs = cfg.db;
  std::sort(dbs.begin(), dbs.end());
  std::vector<GkpRow> rows;
  for (double db : dbs) {
    GkpRow row;
    row.db = db;
    row.epsilon = gkp_epsilon_from_db(db);
    const double eps_anc = cfg.ancilla_epsilon.value_or(row.epsilon);
    row.cutoff = cfg.fixed_cutoff > 0
                     ? cfg.fixed_cutoff
                     : std::max(gkp_required_cutoff(row.epsilon, cfg.tail_guard),
                                cfg.ec ? gkp_required_cutoff(eps_anc, cfg.tail_guard) : 2);
    const FockCutoff cutoff(row.cutoff);
    const PureState code = gkp_damped({row.epsilon, cfg.logical, 0}, cutoff, cfg.tail_guard);
    const DensityMatrix in = code.density();
    DensityMatrix out = apply_loss(in, {cfg.eta});
    double leak = code.leakage();
    if (cfg.ec) {
      const PureState anc = gkp_damped({eps_anc, GkpLogical::Plus, 0}, cutoff, cfg.tail_guard);
      out = cfg.explicit_two_mode ? gkp_ec_round_explicit(out, anc, cfg.quadrature, cfg.budget)
                                  : gkp_ec_round(out, anc, cfg.quadrature);
      leak = std::max(leak, out.leakage());
    }
    const auto din = negativity_depth(WignerEvaluator(in, kDisplacementGuard, cfg.search.radius), cfg.search.radius, cfg.search);
    const auto dout = negativity_depth(WignerEvaluator(out, kDisplacementGuard, cfg.search.radius), cfg.search.radius, cfg.search);
    row.e_in = std::max(0.0, -din.min_parity) / 2.0;
    row.e_out = std::max(0.0, -dout.min_parity) / 2.0;
    row.infidelity = 1.0 - fidelity(code, out);
    row.leakage = leak;
    rows.push_back(row);
  }
  return rows;
}

std::string cmd_gkp_sweep(json& cfg) {
  GkpSweepConfig g;
  if (cfg.contains("epsilon_list")) {
    for (double e : require<std::vector<double>>(cfg, "epsilon_list")) g.db.push_back(gkp_squeezing_db(e));
  } else {
    g.db = get_or(cfg, "db_list", std::vector<double>{4.0, 6.0, 8.0, 10.0, 12.0, 14.0, 16.0, 17.0});
  }
  g.eta = get_or(cfg, "eta", 0.9);
  g.logical = parse_gkp_logical(get_or<std::string>(cfg, "logical", "zero"));
  g.fixed_cutoff = get_or(cfg, "cutoff", 0);
  g.tail_guard = get_or(cfg, "tail_guard", 1e-6);
  g.budget = budget_of(cfg);
  json& ec = object_or(cfg, "ec");
  g.ec = get_or(ec, "enabled", true);
  g.quadrature = parse_quadrature(get_or<std::string>(ec, "quadrature", "both"));
  g.explicit_two_mode = get_or(ec, "explicit_two_mode", false);
  if (!ec.contains("ancilla_epsilon")) ec["ancilla_epsilon"] = nullptr;
  if (!ec["ancilla_epsilon"].is_null()) g.ancilla_epsilon = require<double>(ec, "ancilla_epsilon");
  g.search = search_of(cfg, g.search);
  if (!(g.search.radius > 0.0)) throw ConfigError("gkp sweep needs a positive search radius");

  const auto rows = gkp_sweep(g);
  CsvTable t{{"squeezing_dB", "epsilon", "cutoff", "E_in", "E_out", "infidelity", "leakage"}, {}};
  double leak = 0.0;
  int top = 0;
  for (const auto& r : rows) {
    t.rows.push_back({format_number(r.db), format_number(r.epsilon), std::to_string(r.cutoff), format_number(r.e_in),
                      format_number(r.e_out), format_number(r.infidelity), format_number(r.leakage)});
    leak = std::max(leak, r.leakage);
    top = std::max(top, r.cutoff);
  }
  return finish_csv(t, "gkp-sweep", cfg, top, leak);
}

std::string cmd_pure_bounds(json& cfg) {
  const FockCutoff cutoff = cutoff_of(cfg, 40);
  json& st = object_or(cfg, "state");
  if (!st.contains("kind")) st["kind"] = "fock", st["n"] = 1;
  const PureState psi = build_pure_state(st, cutoff);
  const auto b = pure_state_bounds(psi, fidelity_of(cfg));
  json body = to_json(b.fidelity);
  body["gng_lower"] = b.gng_lower;
  body["sng_lower"] = b.sng_lower;
  body["entanglement_floor_gng"] = b.gng_lower / 2.0;
  body["entanglement_floor_sng"] = b.sng_lower / 2.0;
  body["steering_floor_gng"] = b.gng_lower;
  body["steering_floor_sng"] = b.sng_lower;
  return finish_json(body, "pure-bounds", cfg, cutoff.dim(), psi.leakage());
}

std::string cmd_activate(json& cfg) {
  const FockCutoff cutoff = cutoff_of(cfg, 40);
  json& st = object_or(cfg, "state");
  if (!st.contains("kind")) st["kind"] = "fock", st["n"] = 1;
  const DensityMatrix rho = build_state(st, cutoff);
  const WitnessBox box = box_of(cfg);
  const auto fid = fidelity_of(cfg);
  const auto search = search_of(cfg);
  const WitnessSpec w = build_witness(object_or(cfg, "witness"), rho, box, fid, search);
  const auto ent = activate_entanglement(rho, w);
  const auto ste = activate_steering(rho, w);
  json body{{"entanglement_channel", to_json(ent)}, {"steering_channel", to_json(ste)}, {"witness", to_json(w)}};
  return finish_json(body, "activate", cfg, cutoff.dim(), rho.leakage());
}

std::string cmd_boundary_mix(json& cfg) {
  const FockCutoff cutoff = cutoff_of(cfg, 25);
  json& sig = object_or(cfg, "sigma");
  if (!sig.contains("kind")) {
    sig = json{{"kind", "mixture"},
               {"components",
                json::array({json{{"weight", 0.5}, {"state", {{"kind", "fock"}, {"n", 0}}}},
                             json{{"weight", 0.5}, {"state", {{"kind", "fock"}, {"n", 1}}}}})}};
  }
  json& tau_spec = object_or(cfg, "tau");
  if (!tau_spec.contains("kind")) tau_spec = json{{"kind", "fock"}, {"n", 1}};
  const DensityMatrix sigma = build_state(sig, cutoff);
  const DensityMatrix tau = build_state(tau_spec, cutoff);
  json& wit = object_or(cfg, "witness");
  const Complex alpha = complex_or(wit, "alpha", 0.0);
  wit["kind"] = "displaced_parity";
  const Matrix d = DisplacementGenerator(cutoff).displacement(alpha);
  const OperatorMatrix x = OperatorMatrix::hermitian(d * parity_op(cutoff).matrix() * d.adjoint());
  const auto ts = grid_or(cfg, "t_grid", {0.0, 0.25, 0.5, 0.75, 1.0});
  FamilySearchConfig fs;
  fs.depth = search_of(cfg);
  const auto pts = exact_boundary_mixture(sigma, tau, x, ts, fs);
  CsvTable t{{"t", "exact_value", "searched_lower", "consistent"}, {}};
  for (const auto& p : pts) {
    t.rows.push_back({format_number(p.t), format_number(p.exact), format_number(p.searched_lower),
                      p.consistent ? "true" : "false"});
  }
  return finish_csv(t, "boundary-mix", cfg, cutoff.dim(), std::max(sigma.leakage(), tau.leakage()));
}

std::string cmd_property_suite(json& cfg) {
  const FockCutoff cutoff = cutoff_of(cfg, 30);
  if (!cfg.contains("states")) {
    cfg["states"] = json::array({json{{"kind", "fock"}, {"n", 1}},
                                 json{{"kind", "fock"}, {"n", 1}, {"channels", json::array({{{"kind", "loss"}, {"eta", 0.8}}})}},
                                 json{{"kind", "cat"}, {"alpha", 1.0}, {"sign", -1}},
                                 json{{"kind", "fock"}, {"n", 2}}});
  }
  if (!cfg.contains("channels")) {
    cfg["channels"] = json::array({json{{"kind", "loss"}, {"eta", 0.7}},
                                   json{{"kind", "noise"}, {"sigma2", 0.05}, {"quad_order", 11}},
                                   json{{"kind", "rotation"}, {"theta", 0.7}}});
  }
  const FreeSet fs = parse_free_set(get_or<std::string>(cfg, "free_set", "wigner_positive"));
  const WitnessBox box = box_of(cfg);
  FamilySearchConfig search;
  search.depth = search_of(cfg);
  search.fidelity = fidelity_of(cfg);

  std::vector<DensityMatrix> states;
  double leak = 0.0;
  for (auto& s : cfg["states"]) {
    states.push_back(build_state(s, cutoff));
    leak = std::max(leak, states.back().leakage());
  }
  std::vector<FreeChannel> channels;
  for (auto& c : cfg["channels"]) {
    const auto kind = require<std::string>(c, "kind");
    std::vector<FreeSet> free_for{FreeSet::WignerPositive};
    if (kind == "rotation" || kind == "displacement") {
      free_for = {FreeSet::WignerPositive, FreeSet::ConvexGaussianHull, FreeSet::GaussianTwoCopy};
    } else if (kind != "loss" && kind != "noise") {
      throw ConfigError("property suite channels are loss, noise, rotation or displacement");
    }
    json spec = c;
    channels.push_back({spec.dump(), [spec](const DensityMatrix& r) mutable { return apply_channel_spec(spec, r); },
                        free_for});
  }
  const auto rep = property_suite(states, channels, fs, box, search);
  return finish_json(to_json(rep), "property-suite", cfg, cutoff.dim(), leak);
}

// -------------------------------------------------------------------- CLI

json load_config(const std::string& path, const Overrides& o) {
  json cfg = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
      in >> cfg;
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
  }
  if (o.cutoff) cfg["cutoff"] = *o.cutoff;
  if (o.seeds) cfg["seeds"] = *o.seeds;
  if (o.budget) cfg["budget"] = *o.budget;
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{"Continuous-variable resource witnesses and activation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::string config_path;
  std::string out_path;
  std::optional<int> cutoff;
  std::string seed_list;
  std::optional<std::size_t> budget;

  using Handler = std::string (*)(json&);
  const std::vector<std::pair<std::string, Handler>> commands{
      {"wigner", cmd_wigner},           {"negativity-depth", cmd_negativity_depth},
      {"loss-sweep", cmd_loss_sweep},   {"gkp-sweep", cmd_gkp_sweep},
      {"pure-bounds", cmd_pure_bounds}, {"activate", cmd_activate},
      {"boundary-mix", cmd_boundary_mix}, {"property-suite", cmd_property_suite},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, fn] : commands) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--cutoff", cutoff, "Fock cutoff (overrides the config)");
    sub->add_option("--out", out_path, "output file (default: stdout)");
    sub->add_option("--seed-list", seed_list, "comma-separated optimizer seeds");
    sub->add_option("--budget", budget, "largest product-space dimension to materialize");
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    Overrides o;
    o.cutoff = cutoff;
    o.budget = budget;
    if (!seed_list.empty()) {
      std::vector<std::uint64_t> seeds;
      std::stringstream ss(seed_list);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          seeds.push_back(std::stoull(item));
        } catch (const std::exception&) {
          throw ConfigError("bad seed '" + item + "'");
        }
      }
      o.seeds = seeds;
    }
    json cfg = load_config(config_path, o);
    std::string text;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) text = commands[i].second(cfg);
    }
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw ConfigError("cannot write '" + out_path + "'");
      out << text;
    }
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kConfigError;
  } catch (const DimensionError& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kConfigError;
  } catch (const TruncationError& e) {
    std::cerr << "truncation: " << e.what() << "\n";
    return kTruncationError;
  } catch (const BudgetError& e) {
    std::cerr << "budget: " << e.what() << "\n";
    return kTruncationError;
  } catch (const InvariantError& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return kInvariantError;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
}

}  // namespace cvwit::cli
