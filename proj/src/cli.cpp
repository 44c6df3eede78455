#include "specflow/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "specflow/flowlab.hpp"
#include "specflow/hamlab.hpp"
#include "specflow/ratner.hpp"

namespace specflow::cli {

namespace {

using config::json;

std::string str(const mpz_class& z) { return z.get_str(); }
std::string str(const mpq_class& q) { return q.get_str(); }

json int_vector(const linalg::IntVector& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back(z.get_str());
  return a;
}

json long_vector(const std::vector<long>& v) {
  json a = json::array();
  for (long z : v) a.push_back(z);
  return a;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json roof_json(const RoofPC& f) {
  json j;
  j["alpha"] = f.ctx().describe();
  json xi = json::array(), d = json::array(), v = json::array();
  for (const auto& x : f.xi()) xi.push_back(x.to_string());
  for (const auto& x : f.d()) d.push_back(x.to_string());
  for (const auto& x : f.values()) v.push_back(x.to_string());
  j["xi"] = xi;
  j["d"] = d;
  j["values"] = v;
  return j;
}

Report check_props(const config::ExperimentConfig& cfg) {
  const RoofPC f = config::build_roof(cfg);
  Report r;
  const auto p1 = check_p1(f);
  const auto p2 = check_p2(f);
  const auto wm = weak_mixing_verdict(f);
  json& s = r.summary;
  s["subcommand"] = "check-props";
  s["roof"] = roof_json(f);
  s["p1"] = p1.holds ? "holds" : "fails";
  s["p1_selections_checked"] = p1.selections_checked;
  json lat = json::array();
  for (const auto& v : p1.lattice) lat.push_back(int_vector(v));
  s["relation_lattice"] = lat;
  bool witness_ok = true;
  if (p1.witness) {
    s["p1_witness"] = int_vector(*p1.witness);
    witness_ok = combine(f.d(), *p1.witness).is_zero();
    s["p1_witness_verified"] = witness_ok;
  } else {
    s["p1_witness"] = nullptr;
  }
  s["p2"] = p2.holds ? "holds" : "fails";
  json p2d;
  p2d["qalpha_span_member"] = p2.qalpha_span.member;
  p2d["qalpha_span_detail"] = p2.qalpha_span.detail;
  p2d["rational_span_member"] = p2.rational_span_member;
  p2d["identity_coefficients"] = p2.identity_coefficients ? int_vector(*p2.identity_coefficients) : json(nullptr);
  p2d["identity_note"] = p2.identity_note;
  s["p2_detail"] = p2d;
  s["weak_mixing"] = wm.weakly_mixing;
  s["weak_mixing_reason"] = wm.reason;
  r.csv = "property,verdict\np1," + std::string(p1.holds ? "holds" : "fails") + "\np2," +
          (p2.holds ? "holds" : "fails") + "\nweak_mixing," + (wm.weakly_mixing ? "true" : "false") + "\n";
  if (!witness_ok) r.exit_code = 1;
  return r;
}

Report birkhoff_audit(const config::ExperimentConfig& cfg) {
  const RoofPC f = config::build_roof(cfg);
  const long n_max = config::require_long(cfg.params, "n_max");
  const long grid = config::require_long(cfg.params, "grid");
  const double float_tol = config::require_double(cfg.params, "float_tol");
  const long points = config::get_long(cfg.params, "cocycle_points", 16);
  if (n_max < 1 || grid < 1 || points < 1 || !(float_tol > 0))
    throw Error(ErrorKind::InvalidArgument, "birkhoff-audit: n_max, grid, cocycle_points and float_tol must be positive");
  const auto audit = dk_audit(f, n_max, static_cast<std::size_t>(grid), float_tol);
  Report r;
  json& s = r.summary;
  s["subcommand"] = "birkhoff-audit";
  s["roof"] = roof_json(f);
  s["variation"] = audit.variation.to_string();
  json rows = json::array();
  r.csv = "n,q_n,max_deviation,max_deviation_double,max_float_gap,within_variation\n";
  for (const auto& row : audit.rows) {
    json jr;
    jr["n"] = row.n;
    jr["q_n"] = str(row.q_n);
    jr["max_deviation"] = row.max_deviation.to_string();
    jr["max_deviation_double"] = row.max_deviation_double;
    jr["max_float_gap"] = row.max_float_gap;
    jr["within_variation"] = row.within_variation;
    rows.push_back(jr);
    r.csv += std::to_string(row.n) + "," + str(row.q_n) + ",\"" + row.max_deviation.to_string() + "\"," +
             fmt(row.max_deviation_double) + "," + fmt(row.max_float_gap) + "," + (row.within_variation ? "1" : "0") +
             "\n";
  }
  s["rows"] = rows;
  s["dk_all_within"] = audit.all_within;
  s["float_agrees"] = audit.float_agrees;

  // cocycle identity f^(m+n)(x) = f^(m)(x) + f^(n)(x + m alpha)
  bool cocycle = true;
  const long steps[] = {1, 2, 3, 5, 8, 13};
  for (long k = 0; k < points; ++k) {
    const SymReal x = SymReal::rational(f.basis(), mpq_class(k, points));
    for (long m : steps)
      for (long n : steps)
        if (!(birkhoff(f, x, m + n) - birkhoff(f, x, m) - birkhoff(f, orbit_point(x, m), n)).is_zero()) cocycle = false;
  }
  s["cocycle_identity"] = cocycle;
  if (!audit.all_within || !audit.float_agrees || !cocycle) r.exit_code = 1;
  return r;
}

Report ratner_witness(const config::ExperimentConfig& cfg) {
  const RoofPC f = config::build_roof(cfg);
  const std::uint64_t seed = config::require_seed(cfg);
  const long count = config::require_long(cfg.params, "pairs");
  const long j_max = config::get_long(cfg.params, "j_max", 10000);
  if (count < 1 || j_max < 1) throw Error(ErrorKind::InvalidArgument, "ratner-witness: pairs and j_max must be positive");
  const RatnerConstants k = ratner_constants(f, j_max);
  const long n_min = config::get_long(cfg.params, "n_min", f.ctx().q(4).get_si());
  const auto pairs = sample_close_pairs(f, k, n_min, static_cast<std::size_t>(count), seed);
  Report r;
  json& s = r.summary;
  s["subcommand"] = "ratner-witness";
  s["roof"] = roof_json(f);
  s["seed"] = seed;
  json kc;
  kc["c"] = str(k.c);
  kc["C"] = k.big_c;
  kc["H"] = k.h;
  kc["R"] = str(k.r);
  kc["kappa"] = str(k.kappa);
  kc["kappa_double"] = k.kappa.get_d();
  kc["N"] = n_min;
  kc["delta_N"] = str(k.delta(n_min));
  s["constants"] = kc;
  json rows = json::array();
  r.csv = "pair,s,M,L,rho,L_over_M,rechecked,rho_in_F,kappa_ok,n_ok,all_in_V,split_ok\n";
  std::size_t passing = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& cp = pairs[i];
    const auto w = find_witness(f, k, cp.x, cp.y, n_min);
    const bool re = recheck_witness(f, cp.x, cp.y, w);
    const bool ok = re && w.rho_in_f && w.kappa_ok && w.n_ok && w.all_in_v;
    passing += ok;
    json jr;
    jr["x"] = cp.x.to_string();
    jr["gap"] = str(cp.gap);
    jr["s"] = w.s;
    jr["M"] = w.m;
    jr["L"] = w.l;
    jr["rho"] = w.rho.to_string();
    jr["rho_coeffs"] = long_vector(w.rho_coeffs);
    jr["rechecked"] = re;
    jr["rho_in_F"] = w.rho_in_f;
    jr["kappa_ok"] = w.kappa_ok;
    jr["n_ok"] = w.n_ok;
    jr["all_in_V"] = w.all_in_v;
    jr["split_ok"] = w.split_ok;
    jr["trace_segments"] = w.trace.size();
    rows.push_back(jr);
    r.csv += std::to_string(i) + "," + std::to_string(w.s) + "," + std::to_string(w.m) + "," + std::to_string(w.l) +
             ",\"" + w.rho.to_string() + "\"," + fmt(static_cast<double>(w.l) / static_cast<double>(w.m)) + "," +
             (re ? "1" : "0") + "," + (w.rho_in_f ? "1" : "0") + "," + (w.kappa_ok ? "1" : "0") + "," +
             (w.n_ok ? "1" : "0") + "," + (w.all_in_v ? "1" : "0") + "," + (w.split_ok ? "1" : "0") + "\n";
  }
  s["witnesses"] = rows;
  s["passing"] = passing;
  s["all_pass"] = passing == pairs.size();
  if (passing != pairs.size()) r.exit_code = 1;
  return r;
}

std::vector<double> shift_set(const RoofPC& f, long bound) {
  std::set<double> vals;
  const std::size_t p = f.p();
  std::vector<double> d;
  for (const auto& x : f.d()) d.push_back(x.to_double());
  std::vector<long> r(p, -bound);
  for (;;) {
    double v = 0;
    for (std::size_t i = 0; i < p; ++i) v += static_cast<double>(r[i]) * d[i];
    if (std::abs(v) > 1e-12) vals.insert(v);
    std::size_t i = 0;
    while (i < p && r[i] == bound) r[i++] = -bound;
    if (i == p) break;
    ++r[i];
  }
  return {vals.begin(), vals.end()};
}

Report r_property(const config::ExperimentConfig& cfg) {
  const RoofPC f = config::build_roof(cfg);
  RPropertyOptions opt;
  opt.seed = config::require_seed(cfg);
  opt.t0 = config::require_double(cfg.params, "t0");
  opt.eps = config::require_double(cfg.params, "eps");
  const long trials = config::require_long(cfg.params, "trials");
  const long p_bound = config::get_long(cfg.params, "p_bound", 2);
  opt.rho_offset = config::get_double(cfg.params, "rho_offset", 0.0);
  if (trials < 1 || p_bound < 1 || !(opt.eps > 0 && opt.eps < 1))
    throw Error(ErrorKind::InvalidArgument, "r-property: trials, p_bound must be positive and eps in (0,1)");
  opt.trials = static_cast<std::size_t>(trials);
  const RatnerConstants k = ratner_constants(f, config::get_long(cfg.params, "j_max", 10000));
  opt.n_min = config::get_long(cfg.params, "n_min", f.ctx().q(4).get_si());
  opt.p_set = shift_set(f, p_bound);
  const auto st = verify_r_property(f, k, opt);
  Report r;
  json& s = r.summary;
  s["subcommand"] = "r-property";
  s["roof"] = roof_json(f);
  s["seed"] = opt.seed;
  s["t0"] = opt.t0;
  s["eps"] = opt.eps;
  s["rho_offset"] = opt.rho_offset;
  s["p_set_size"] = opt.p_set.size();
  s["trials"] = opt.trials;
  s["passing"] = st.passing;
  s["pass_rate"] = st.pass_rate;
  s["verdict"] = st.verdict;
  json rows = json::array();
  r.csv = "trial,distance,M,L,shift,shift_in_P,fraction,pass\n";
  for (std::size_t i = 0; i < st.pairs.size(); ++i) {
    const auto& p = st.pairs[i];
    json jr;
    jr["distance"] = p.distance;
    jr["M"] = p.m;
    jr["L"] = p.l;
    jr["shift"] = p.shift;
    jr["shift_in_P"] = p.shift_in_p;
    jr["fraction"] = p.fraction;
    jr["pass"] = p.pass;
    rows.push_back(jr);
    r.csv += std::to_string(i) + "," + fmt(p.distance) + "," + std::to_string(p.m) + "," + std::to_string(p.l) + "," +
             fmt(p.shift) + "," + (p.shift_in_p ? "1" : "0") + "," + fmt(p.fraction) + "," + (p.pass ? "1" : "0") + "\n";
  }
  s["pairs"] = rows;
  if (!st.verdict && opt.rho_offset == 0) r.exit_code = 1;
  return r;
}

Report rigidity_scan(const config::ExperimentConfig& cfg) {
  const RoofPC f = config::build_roof(cfg);
  const std::uint64_t seed = config::require_seed(cfg);
  const long n_min = config::require_long(cfg.params, "n_min");
  const long n_max = config::require_long(cfg.params, "n_max");
  const long grid = config::require_long(cfg.params, "grid");
  const long samples = config::require_long(cfg.params, "samples");
  const double mass_factor = config::require_double(cfg.params, "mass_factor");
  const double radius_factor = config::require_double(cfg.params, "radius_factor");
  if (!cfg.params.contains("rect") || !cfg.params["rect"].is_array() || cfg.params["rect"].size() != 4)
    throw Error(ErrorKind::InvalidArgument, "rigidity-scan: params.rect must be [x0, x1, s0, s1]");
  if (n_min < 1 || n_max < n_min || grid < 1000 || samples < 1000)
    throw Error(ErrorKind::InvalidArgument, "rigidity-scan: need 1 <= n_min <= n_max, grid >= 1000, samples >= 1000");
  std::vector<SymReal> rc;
  for (const auto& e : cfg.params["rect"]) {
    if (!e.is_string() && !e.is_number_integer())
      throw Error(ErrorKind::InvalidArgument, "rigidity-scan: rect entries must be expressions");
    rc.push_back(SymReal::parse(f.basis(), e.is_string() ? e.get<std::string>() : std::to_string(e.get<long>())));
  }
  const std::vector<Rect> a{make_rect(f, rc[0], rc[1], rc[2], rc[3])};
  const auto meas = phase_measure(f, a);
  Report r;
  json& s = r.summary;
  s["subcommand"] = "rigidity-scan";
  s["roof"] = roof_json(f);
  s["seed"] = seed;
  s["rect_measure"] = meas.ratio;
  json rows = json::array();
  r.csv = "n,q_n,atoms,d_set,all_in_predicted,heaviest_atom,mass,t,estimate,radius,bound,pass\n";
  bool all = true;
  for (long n = n_min; n <= n_max; ++n) {
    const auto rep = qn_distribution(f, n, static_cast<std::size_t>(grid));
    const auto& top = rep.atoms.front();
    const double t = rep.t_n + top.value_double;
    const auto est = correlation(f, a, a, t, static_cast<std::size_t>(samples), seed + static_cast<std::uint64_t>(n));
    const double mass = rep.u.get_d();
    const double bound = mass_factor * mass * meas.ratio - radius_factor * est.radius;
    const bool atoms_ok = rep.all_in_predicted && rep.atoms.size() <= rep.d_set.size();
    const bool pass = atoms_ok && est.estimate >= bound;
    all = all && pass;
    json jr;
    jr["n"] = n;
    jr["q_n"] = str(rep.q_n);
    jr["gamma"] = rep.gamma.to_string();
    json atoms = json::array();
    for (const auto& at : rep.atoms) atoms.push_back({{"value", at.value.to_string()}, {"mass", str(at.mass)}});
    jr["atoms"] = atoms;
    jr["d_set_size"] = rep.d_set.size();
    jr["all_in_predicted"] = rep.all_in_predicted;
    jr["t"] = t;
    jr["estimate"] = est.estimate;
    jr["radius"] = est.radius;
    jr["bound"] = bound;
    jr["pass"] = pass;
    rows.push_back(jr);
    r.csv += std::to_string(n) + "," + str(rep.q_n) + "," + std::to_string(rep.atoms.size()) + "," +
             std::to_string(rep.d_set.size()) + "," + (rep.all_in_predicted ? "1" : "0") + ",\"" +
             top.value.to_string() + "\"," + str(top.mass) + "," + fmt(t) + "," + fmt(est.estimate) + "," +
             fmt(est.radius) + "," + fmt(bound) + "," + (pass ? "1" : "0") + "\n";
  }
  s["rows"] = rows;
  s["all_pass"] = all;
  if (!all) r.exit_code = 1;
  return r;
}

Report eigen_test(const config::ExperimentConfig& cfg) {
  const RoofPC f = config::build_roof(cfg);
  std::vector<SymReal> rs;
  if (cfg.params.contains("r")) {
    if (!cfg.params["r"].is_array()) throw Error(ErrorKind::InvalidArgument, "eigen-test: params.r must be an array");
    for (const auto& e : cfg.params["r"]) {
      if (!e.is_string() && !e.is_number_integer())
        throw Error(ErrorKind::InvalidArgument, "eigen-test: r entries must be expressions");
      rs.push_back(SymReal::parse(f.basis(), e.is_string() ? e.get<std::string>() : std::to_string(e.get<long>())));
    }
  } else {
    const long p_max = config::require_long(cfg.params, "p_max");
    const long q_max = config::require_long(cfg.params, "q_max");
    if (p_max < 1 || q_max < 1) throw Error(ErrorKind::InvalidArgument, "eigen-test: p_max and q_max must be positive");
    std::set<mpq_class> seen;
    for (long q = 1; q <= q_max; ++q)
      for (long p = -p_max; p <= p_max; ++p) {
        if (p == 0) continue;
        mpq_class v(p, q);
        v.canonicalize();
        if (seen.insert(v).second) rs.push_back(SymReal::rational(f.basis(), v));
      }
  }
  Report r;
  json& s = r.summary;
  s["subcommand"] = "eigen-test";
  s["roof"] = roof_json(f);
  json rows = json::array();
  r.csv = "r,verdict,classes_ok,integral_ok\n";
  bool any = false;
  for (const auto& v : rs) {
    const auto rep = eigenvalue_criterion(f, v);
    any = any || rep.solvable;
    json jr;
    jr["r"] = v.to_string();
    jr["verdict"] = rep.solvable ? "solvable" : "not_solvable";
    json sums = json::array();
    for (const auto& c : rep.class_sums) sums.push_back(c.to_string());
    jr["class_sums"] = sums;
    jr["classes_ok"] = rep.clause_classes;
    jr["integral_ok"] = rep.clause_integral;
    jr["scaled_integral"] = rep.scaled_integral.to_string();
    rows.push_back(jr);
    r.csv += "\"" + v.to_string() + "\"," + (rep.solvable ? "solvable" : "not_solvable") + "," +
             (rep.clause_classes ? "1" : "0") + "," + (rep.clause_integral ? "1" : "0") + "\n";
  }
  s["results"] = rows;
  s["any_solvable"] = any;
  return r;
}

Report coboundary(const config::ExperimentConfig& cfg) {
  const auto ctx = config::build_alpha(cfg.alpha);
  const long n_modes = config::require_long(cfg.params, "n_modes");
  const long grid = config::require_long(cfg.params, "grid");
  const double tol = config::require_double(cfg.params, "tolerance");
  if (!cfg.params.contains("zeta") || !cfg.params["zeta"].is_array())
    throw Error(ErrorKind::InvalidArgument, "coboundary: params.zeta must be an array of {n, re, im}");
  if (n_modes < 1 || grid < 1) throw Error(ErrorKind::InvalidArgument, "coboundary: n_modes and grid must be positive");
  std::vector<TrigMode> zeta;
  for (const auto& m : cfg.params["zeta"]) {
    if (!m.is_object() || !m.contains("n") || !m["n"].is_number_integer())
      throw Error(ErrorKind::InvalidArgument, "coboundary: each mode needs integer n");
    const double re = m.value("re", 0.0), im = m.value("im", 0.0);
    zeta.push_back({m["n"].get<long>(), {re, im}});
  }
  const auto res = coboundary_reduce(zeta, ctx, n_modes, static_cast<std::size_t>(grid), tol);
  Report r;
  json& s = r.summary;
  s["subcommand"] = "coboundary";
  s["alpha"] = ctx.describe();
  json modes = json::array();
  r.csv = "n,re,im\n";
  for (const auto& m : res.u) {
    modes.push_back({{"n", m.n}, {"re", m.c.real()}, {"im", m.c.imag()}});
    r.csv += std::to_string(m.n) + "," + fmt(m.c.real()) + "," + fmt(m.c.imag()) + "\n";
  }
  s["u"] = modes;
  s["residual"] = res.residual;
  s["grid_points"] = res.grid_points;
  s["tolerance"] = tol;
  s["within_tolerance"] = res.within_tolerance;
  if (!res.within_tolerance) r.exit_code = 1;
  return r;
}

double circle_error(double a, double b, double period) {
  double d = std::fmod(a - b, period);
  if (d < 0) d += period;
  return std::min(d, period - d);
}

json profile_json(const HamiltonianSystem& sys, const SectionProfile& prof) {
  json s;
  s["system"] = sys.name;
  s["alpha1"] = sys.alpha1;
  s["alpha2"] = sys.alpha2;
  s["x0"] = prof.transversal.x0;
  s["orientation"] = prof.transversal.orientation;
  s["grid"] = prof.samples.size();
  s["tol"] = prof.tol;
  s["failures"] = prof.failures;
  json errs = json::array();
  for (std::size_t i = 0; i < prof.samples.size(); ++i)
    if (!prof.samples[i].ok) errs.push_back({{"index", i}, {"s", prof.samples[i].s}, {"error", prof.samples[i].error}});
  s["failed_points"] = errs;
  s["rotation"] = prof.rotation;
  s["rotation_expected"] = prof.rotation_expected;
  s["rotation_spread"] = prof.rotation_spread;
  json jumps = json::array();
  for (const auto& j : prof.jumps)
    jumps.push_back({{"beta", j.beta}, {"d", j.d}, {"left_limit", j.left_limit}, {"right_limit", j.right_limit}});
  s["jumps"] = jumps;
  s["jump_sum"] = prof.jump_sum;
  s["max_abs_jump"] = prof.max_abs_jump;
  s["return_time_integral"] = prof.integral;
  s["beta_matching"] = "unchecked";
  return s;
}

Report ham_section(const config::ExperimentConfig& cfg) {
  const auto sys = config::build_hamiltonian(cfg.hamiltonian);
  const long grid = config::require_long(cfg.params, "grid");
  const double tol = config::require_double(cfg.params, "tol");
  const double rot_tol = config::require_double(cfg.params, "rotation_tol");
  const double jump_tol = config::require_double(cfg.params, "jump_sum_tol");
  const long orbits = config::get_long(cfg.params, "svg_orbits", 24);
  if (grid < 8 || !(tol > 0) || orbits < 0) throw Error(ErrorKind::InvalidArgument, "ham-section: bad grid, tol or svg_orbits");
  const auto tr = make_transversal(sys, config::transversal_x0(cfg.hamiltonian));
  const auto prof = section_profile(sys, tr, static_cast<std::size_t>(grid), tol);
  Report r;
  r.summary = profile_json(sys, prof);
  r.summary["subcommand"] = "ham-section";
  const double rot_err = circle_error(prof.rotation, prof.rotation_expected, sys.alpha2);
  const bool rot_ok = rot_err <= rot_tol;
  const bool jump_ok = prof.jumps.empty() || std::abs(prof.jump_sum) <= jump_tol * prof.max_abs_jump;
  r.summary["rotation_error"] = rot_err;
  r.summary["rotation_ok"] = rot_ok;
  r.summary["jump_sum_ok"] = jump_ok;
  r.csv = profile_csv(prof);
  if (cfg.format == "svg") r.svg = phase_portrait_svg(sys, tr, static_cast<std::size_t>(orbits), 1e-8);
  if (prof.failures > 0 || !rot_ok || !jump_ok) r.exit_code = 1;
  return r;
}

Report ham_area(const config::ExperimentConfig& cfg) {
  const auto sys = config::build_hamiltonian(cfg.hamiltonian);
  const std::uint64_t seed = config::require_seed(cfg);
  const long grid = config::require_long(cfg.params, "grid");
  const double tol = config::require_double(cfg.params, "tol");
  const long samples = config::require_long(cfg.params, "samples");
  const double disc_tol = config::require_double(cfg.params, "discrepancy_tol");
  if (grid < 8 || samples < 1 || !(tol > 0)) throw Error(ErrorKind::InvalidArgument, "ham-area: bad grid, tol or samples");
  const auto tr = make_transversal(sys, config::transversal_x0(cfg.hamiltonian));
  const auto prof = section_profile(sys, tr, static_cast<std::size_t>(grid), tol);
  const auto area = area_identity_check(sys, tr, prof, static_cast<std::size_t>(samples), seed);
  Report r;
  json& s = r.summary;
  s["subcommand"] = "ham-area";
  s["system"] = sys.name;
  s["seed"] = seed;
  s["samples"] = area.samples;
  s["mc_integral"] = area.mc_integral;
  s["mc_radius"] = area.mc_radius;
  s["ec_fraction"] = area.ec_fraction;
  s["profile_integral"] = area.profile_integral;
  s["profile_failures"] = prof.failures;
  s["discrepancy"] = area.discrepancy;
  s["discrepancy_tol"] = disc_tol;
  const bool ok = area.discrepancy <= disc_tol && prof.failures == 0;
  s["pass"] = ok;
  r.csv = "mc_integral,mc_radius,profile_integral,discrepancy\n" + fmt(area.mc_integral) + "," + fmt(area.mc_radius) +
          "," + fmt(area.profile_integral) + "," + fmt(area.discrepancy) + "\n";
  if (!ok) r.exit_code = 1;
  return r;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + p.string() + "'");
  out << text;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"check-props", "birkhoff-audit", "ratner-witness",
                                              "r-property",  "rigidity-scan",  "eigen-test",
                                              "coboundary",  "ham-section",    "ham-area"};
  return names;
}

Report execute(const std::string& sub, const config::ExperimentConfig& cfg) {
  if (sub == "check-props") return check_props(cfg);
  if (sub == "birkhoff-audit") return birkhoff_audit(cfg);
  if (sub == "ratner-witness") return ratner_witness(cfg);
  if (sub == "r-property") return r_property(cfg);
  if (sub == "rigidity-scan") return rigidity_scan(cfg);
  if (sub == "eigen-test") return eigen_test(cfg);
  if (sub == "coboundary") return coboundary(cfg);
  if (sub == "ham-section") return ham_section(cfg);
  if (sub == "ham-area") return ham_area(cfg);
  throw Error(ErrorKind::InvalidArgument, "unknown subcommand '" + sub + "'");
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
      return 2;
    case ErrorKind::AssertionFailed:
      return 1;
    default:
      return 3;
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Special flows over rotations: property checks, audits and numerical experiments"};
  app.require_subcommand(1);
  std::string config_path, out_dir, format;
  std::optional<std::uint64_t> seed;
  for (const auto& name : subcommands()) {
    auto* sc = app.add_subcommand(name);
    sc->add_option("--config", config_path, "experiment JSON")->required();
    sc->add_option("--out", out_dir, "directory for report files");
    sc->add_option("--seed", seed, "overrides the config seed");
    sc->add_option("--format", format, "stdout format")->check(CLI::IsMember({"csv", "json", "svg"}));
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string sub = app.get_subcommands().front()->get_name();
  try {
    auto cfg = config::load_config_file(config_path);
    if (seed) cfg.seed = seed;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!format.empty()) cfg.format = format;
    if (cfg.format == "svg" && sub != "ham-section")
      throw Error(ErrorKind::InvalidArgument, "svg output is only available for ham-section");
    const Report rep = execute(sub, cfg);
    const std::string json_text = rep.summary.dump(2) + "\n";
    if (!cfg.out_dir.empty()) {
      std::filesystem::create_directories(cfg.out_dir);
      const std::filesystem::path dir(cfg.out_dir);
      write_file(dir / "report.json", json_text);
      if (!rep.csv.empty()) write_file(dir / "report.csv", rep.csv);
      if (!rep.svg.empty()) write_file(dir / "portrait.svg", rep.svg);
    }
    if (cfg.format == "csv")
      std::cout << rep.csv;
    else if (cfg.format == "svg")
      std::cout << rep.svg;
    else
      std::cout << json_text;
    return rep.exit_code;
  } catch (const Error& e) {
    std::cerr << "specflow " << sub << ": " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "specflow " << sub << ": " << e.what() << "\n";
    return 2;
  }
}

}  // namespace specflow::cli
