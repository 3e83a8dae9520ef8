#pragma once

// Configuration parsing and subcommand bodies for the gclm tool.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "gclm/acceptance.hpp"
#include "gclm/analytic.hpp"
#include "gclm/classify.hpp"
#include "gclm/dynamics.hpp"
#include "gclm/io.hpp"
#include "gclm/norms.hpp"
#include "gclm/phaseplane.hpp"
#include "gclm/spectral.hpp"

namespace gclm::cli {

using io::json;

enum ExitCode : int { Ok = 0, VerifyFailed = 1, ConfigFailure = 2, RuntimeFailure = 3 };

struct Globals {
  std::optional<std::filesystem::path> out;
  std::size_t threads = default_threads();
  std::uint64_t seed = acceptance::default_seed;
};

// Config access.

[[noreturn]] inline void config_error(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

inline void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) config_error(where + ": expected an object");
}

inline void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  require_object(j, where);
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) config_error(where + ": unknown key '" + k + "'");
  }
}

inline double number(const json& j, const char* key, const std::string& where, std::optional<double> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    config_error(where + ": missing '" + key + "'");
  }
  if (!j[key].is_number()) config_error(where + "." + key + ": expected a number");
  return j[key].get<double>();
}

inline std::size_t count(const json& j, const char* key, const std::string& where, std::optional<std::size_t> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    config_error(where + ": missing '" + key + "'");
  }
  if (!j[key].is_number_unsigned()) config_error(where + "." + key + ": expected a non-negative integer");
  return j[key].get<std::size_t>();
}

inline bool flag(const json& j, const char* key, const std::string& where, bool def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_boolean()) config_error(where + "." + key + ": expected true or false");
  return j[key].get<bool>();
}

inline const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) config_error(where + ": missing '" + key + "'");
  return j[key];
}

inline ModelParams parse_model(const json& j) {
  check_keys(j, {"a", "sigma", "nu", "domain"}, "model");
  ModelParams p;
  p.a = number(j, "a", "model");
  p.sigma = number(j, "sigma", "model");
  p.nu = number(j, "nu", "model");
  if (j.contains("domain")) {
    const std::string d = j["domain"].is_string() ? j["domain"].get<std::string>() : "";
    if (d == "circle") p.domain = Domain::Circle;
    else if (d == "real_line") p.domain = Domain::RealLine;
    else config_error("model.domain: expected \"circle\" or \"real_line\"");
  }
  if (!is_pole_system(p)) config_error("model: a must be 0 or 0.5 and sigma 0 or 1");
  if (!(p.nu >= 0.0)) config_error("model.nu: must be >= 0");
  return p;
}

inline IntegratorOptions parse_tolerances(const json& cfg) {
  IntegratorOptions opt;
  if (!cfg.contains("tolerances")) return opt;
  const json& j = cfg["tolerances"];
  check_keys(j, {"rtol", "atol", "eps_collapse", "max_steps", "rescale_time"}, "tolerances");
  opt.rtol = number(j, "rtol", "tolerances", opt.rtol);
  opt.atol = number(j, "atol", "tolerances", opt.atol);
  opt.eps_collapse = number(j, "eps_collapse", "tolerances", opt.eps_collapse);
  opt.max_steps = count(j, "max_steps", "tolerances", opt.max_steps);
  opt.rescale_time = flag(j, "rescale_time", "tolerances", opt.rescale_time);
  if (!(opt.rtol > 0.0 && opt.atol >= 0.0)) config_error("tolerances: rtol must be > 0, atol >= 0");
  return opt;
}

using AnyState = std::variant<PoleFamilyState, DoublePoleState, RealReducedState>;

// Random a = 0 pole data with ||w||_B0 = b0.
inline PoleFamilyState random_poles(std::size_t n, double b0, double omega_av, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) { return a + (b - a) * std::generate_canonical<double, 53>(rng); };
  PoleFamilyState s;
  s.omega_av = omega_av;
  for (std::size_t k = 0; k < n; ++k)
    s.poles.push_back(Pole{cplx(uni(-1.0, 1.0), uni(-1.0, 1.0)), cplx(uni(0.3, 3.0), uni(-1.0, 1.0))});
  const double scale = b0 / wiener_norm(s);
  for (auto& p : s.poles) p.amp *= scale;
  return s;
}

inline AnyState parse_state(const json& j, std::uint64_t seed) {
  require_object(j, "state");
  if (!j.contains("kind") || !j["kind"].is_string()) config_error("state: missing string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "poles") {
    check_keys(j, {"kind", "t", "poles", "omega_av"}, "state");
    PoleFamilyState s;
    s.t = number(j, "t", "state", 0.0);
    s.omega_av = number(j, "omega_av", "state", 0.0);
    const json& poles = member(j, "poles", "state");
    if (!poles.is_array() || poles.empty()) config_error("state.poles: expected a non-empty array");
    for (std::size_t k = 0; k < poles.size(); ++k) {
      const std::string where = "state.poles[" + std::to_string(k) + "]";
      check_keys(poles[k], {"amp", "loc"}, where);
      s.poles.push_back(Pole{io::complex_from_json(member(poles[k], "amp", where), where + ".amp"),
                             io::complex_from_json(member(poles[k], "loc", where), where + ".loc")});
    }
    return s;
  }
  if (kind == "random_poles") {
    check_keys(j, {"kind", "count", "b0", "omega_av"}, "state");
    const std::size_t n = count(j, "count", "state");
    const double b0 = number(j, "b0", "state");
    if (n == 0 || !(b0 > 0.0)) config_error("state: count must be >= 1 and b0 > 0");
    return random_poles(n, b0, number(j, "omega_av", "state", 0.0), seed);
  }
  if (kind == "double_pole") {
    check_keys(j, {"kind", "t", "amp2", "loc", "omega_av", "gauge_q"}, "state");
    return DoublePoleState{number(j, "t", "state", 0.0), io::complex_from_json(member(j, "amp2", "state"), "state.amp2"),
                           io::complex_from_json(member(j, "loc", "state"), "state.loc"),
                           number(j, "omega_av", "state", 0.0), number(j, "gauge_q", "state", 0.0)};
  }
  if (kind == "real") {
    check_keys(j, {"kind", "t", "omega2i", "vc"}, "state");
    return RealReducedState{number(j, "t", "state", 0.0), number(j, "omega2i", "state"), number(j, "vc", "state")};
  }
  config_error("state.kind: expected poles, random_poles, double_pole or real");
}

inline void check_state_model(const AnyState& s, const ModelParams& p) {
  const bool family = std::holds_alternative<PoleFamilyState>(s);
  if (family != (p.a == 0.0)) config_error("state: 'poles' goes with a = 0, 'double_pole' and 'real' with a = 0.5");
}

inline json load_config(const std::optional<std::string>& path) {
  if (!path) return json::object();
  std::ifstream in(*path);
  if (!in) config_error("cannot open config '" + *path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) config_error("config must be a single JSON object");
  return j;
}

inline std::filesystem::path output_dir(const Globals& g) {
  const auto dir = g.out.value_or(std::filesystem::path("."));
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_json(const std::filesystem::path& file, const json& j) {
  std::ofstream os(file);
  if (!os) throw Error(ErrorKind::InvalidArgument, "cannot write " + file.string());
  os << j.dump(2) << '\n';
}

inline bool integrator_failed(EventKind k) { return k == EventKind::InvalidState || k == EventKind::StepUnderflow; }

// simulate

inline int cmd_simulate(const json& cfg, const Globals& g) {
  check_keys(cfg, {"model", "state", "horizon", "tolerances", "output_times", "fit_exponents"}, "simulate");
  const ModelParams p = parse_model(member(cfg, "model", "simulate"));
  const AnyState s0 = parse_state(member(cfg, "state", "simulate"), g.seed);
  check_state_model(s0, p);
  const double horizon = number(cfg, "horizon", "simulate");
  IntegratorOptions opt = parse_tolerances(cfg);
  if (cfg.contains("output_times")) {
    const json& ts = cfg["output_times"];
    if (!ts.is_array()) config_error("simulate.output_times: expected an array");
    for (const auto& t : ts) {
      if (!t.is_number()) config_error("simulate.output_times: expected numbers");
      opt.output_times.push_back(t.get<double>());
    }
  }
  const bool fit = flag(cfg, "fit_exponents", "simulate", false);
  const auto dir = output_dir(g);
  return std::visit(
      [&](const auto& s) {
        auto tr = fit ? resolve_approach(s, p, horizon, opt) : integrate(s, p, horizon, opt);
        {
          std::ofstream os(dir / "trajectory.csv");
          io::write_trajectory(os, tr);
        }
        json ev = io::event_json(tr);
        ev["norms_initial"] = json{{"l2", l2_norm(s)}, {"b0", wiener_norm(s)}};
        if (fit && (tr.event.kind == EventKind::CollapseToZero || tr.event.kind == EventKind::CollapseToInfinity)) {
          try {
            ev["exponents"] = io::to_json(estimate_exponents(tr));
          } catch (const Error& e) {
            ev["exponents"] = json{{"error", e.what()}};
          }
        }
        write_json(dir / "event.json", ev);
        std::printf("%s at t = %s (%zu samples)\n", to_string(tr.event.kind), io::format_double(tr.event.t_event).c_str(),
                    tr.samples.size());
        return integrator_failed(tr.event.kind) ? RuntimeFailure : Ok;
      },
      s0);
}

// exact

inline std::vector<double> parse_times(const json& cfg, const std::string& where) {
  std::vector<double> times;
  if (cfg.contains("times")) {
    const json& ts = cfg["times"];
    if (!ts.is_array()) config_error(where + ".times: expected an array");
    for (const auto& t : ts) {
      if (!t.is_number()) config_error(where + ".times: expected numbers");
      times.push_back(t.get<double>());
    }
    return times;
  }
  const double t_end = number(cfg, "t_end", where);
  const std::size_t n = count(cfg, "n", where, 201);
  if (n < 2) config_error(where + ".n: must be >= 2");
  for (std::size_t i = 0; i < n; ++i) times.push_back(t_end * double(i) / double(n - 1));
  return times;
}

inline int cmd_exact(const json& cfg, const Globals& g) {
  check_keys(cfg, {"model", "state", "times", "t_end", "n"}, "exact");
  const ModelParams p = parse_model(member(cfg, "model", "exact"));
  const AnyState s0 = parse_state(member(cfg, "state", "exact"), g.seed);
  check_state_model(s0, p);
  const auto times = parse_times(cfg, "exact");
  const auto dir = output_dir(g);
  std::ofstream os(dir / "exact.csv");
  std::string stop;
  std::size_t rows = 0;
  if (const auto* s = std::get_if<PoleFamilyState>(&s0)) {
    if (p.domain != Domain::Circle) config_error("exact: closed forms cover the periodic domain only");
    io::CsvWriter w(os, io::csv_header(*s));
    for (double t : times) {
      try {
        w.row(io::csv_row(p.sigma == 0.0 ? exact_a0_sigma0(*s, p.nu, t) : exact_a0_sigma1(*s, p.nu, t)));
        ++rows;
      } catch (const Error& e) {
        stop = "t = " + io::format_double(t) + ": " + e.what();
        break;
      }
    }
  } else if (const auto* r = std::get_if<RealReducedState>(&s0)) {
    if (p.sigma != 0.0 || p.domain != Domain::Circle) config_error("exact: a = 0.5 needs sigma = 0 on the circle");
    io::CsvWriter w(os, io::csv_header(*r));
    for (double t : times) {
      try {
        w.row(io::csv_row(implicit_a05_sigma0(*r, p.nu, t)));
        ++rows;
      } catch (const Error& e) {
        stop = "t = " + io::format_double(t) + ": " + e.what();
        break;
      }
    }
  } else {
    config_error("exact: state kind must be 'poles' (a = 0) or 'real' (a = 0.5)");
  }
  std::printf("%zu rows written\n", rows);
  if (!stop.empty()) std::fprintf(stderr, "stopped at %s\n", stop.c_str());
  return Ok;
}

// classify

inline json classify_json(const json& cfg, const Globals& g) {
  check_keys(cfg, {"a", "sigma", "nu", "vc0", "omega2i0", "state", "horizon", "tolerances"}, "classify");
  ModelParams p;
  p.a = number(cfg, "a", "classify");
  p.sigma = number(cfg, "sigma", "classify");
  p.nu = number(cfg, "nu", "classify");
  if (!is_pole_system(p)) config_error("classify: a must be 0 or 0.5 and sigma 0 or 1");
  const IntegratorOptions opt = parse_tolerances(cfg);
  if (p.a == 0.0) {
    const AnyState s = parse_state(member(cfg, "state", "classify"), g.seed);
    check_state_model(s, p);
    const auto& ps = std::get<PoleFamilyState>(s);
    ClassificationResult c;
    try {
      const auto pred = predict_tc_a0(ps, p, number(cfg, "horizon", "classify", 1e3));
      c.verdict = pred.kind == EventKind::CollapseToZero ? Verdict::BlowupA : Verdict::BlowupB;
      c.t_c = pred.t_c;
      c.x_c = pred.x_c;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotCollapsing) throw;
      c.note = e.what();
    }
    return io::to_json(c);
  }
  if (cfg.contains("state")) config_error("classify: a = 0.5 takes vc0 and omega2i0");
  const RealReducedState s{0.0, number(cfg, "omega2i0", "classify"), number(cfg, "vc0", "classify")};
  validate(s);
  if (p.sigma == 0.0) return io::to_json(classify_a05_sigma0(s, p.nu));
  if (!(p.nu > 0.0)) config_error("classify: sigma = 1 needs nu > 0");
  ClassificationResult c;
  const PhasePoint pt = acceptance::phase_point(s, p.nu);
  RegionSpec spec;
  const Region region = region_membership(pt, spec);
  if (region == Region::Omega) {
    c.verdict = Verdict::GlobalExistence;
    c.note = "initial point inside the invariant global region";
    return io::to_json(c);
  }
  const double horizon = number(cfg, "horizon", "classify", 100.0 / p.nu);
  if (const auto pred = predict_tc_a05(s, p, horizon, opt)) {
    c.verdict = pred->kind == EventKind::CollapseToZero ? Verdict::BlowupA : Verdict::BlowupB;
    c.t_c = pred->t_c;
    c.x_c = pred->x_c;
    c.alpha = 1.0 / 3.0;
    c.beta = 1.0;
    c.r_c = 0.0;
  } else {
    c.note = "no collapse before the horizon";
  }
  return io::to_json(c);
}

inline int cmd_classify(const json& cfg, const Globals& g) {
  const json j = classify_json(cfg, g);
  std::printf("%s\n", j.dump().c_str());
  if (g.out) write_json(output_dir(g) / "classify.json", j);
  return Ok;
}

// phase-map

inline int cmd_phase_map(const json& cfg, const Globals& g) {
  check_keys(cfg, {"sigma", "grid", "horizon", "region", "tolerances"}, "phase-map");
  const double sig = number(cfg, "sigma", "phase-map");
  if (sig != 0.0 && sig != 1.0) config_error("phase-map.sigma: expected 0 or 1");
  const int sigma = int(sig);
  PhaseGrid grid;
  if (cfg.contains("grid")) {
    const json& j = cfg["grid"];
    check_keys(j, {"v_min", "v_max", "y_min", "y_max", "nv", "ny", "in_omega"}, "grid");
    grid.v_min = number(j, "v_min", "grid", grid.v_min);
    grid.v_max = number(j, "v_max", "grid", grid.v_max);
    grid.y_min = number(j, "y_min", "grid", grid.y_min);
    grid.y_max = number(j, "y_max", "grid", grid.y_max);
    grid.nv = count(j, "nv", "grid", grid.nv);
    grid.ny = count(j, "ny", "grid", grid.ny);
    grid.in_omega = flag(j, "in_omega", "grid", grid.in_omega);
  }
  RegionSpec spec;
  spec.sigma = sigma;
  if (cfg.contains("region")) {
    const json& j = cfg["region"];
    check_keys(j, {"c1", "lambda", "mu", "rho", "vc0"}, "region");
    spec.c1 = number(j, "c1", "region", spec.c1);
    spec.lambda = number(j, "lambda", "region", spec.lambda);
    spec.mu = number(j, "mu", "region", spec.mu);
    if (j.contains("rho")) spec.rho = number(j, "rho", "region");
    if (j.contains("vc0")) spec.vc0 = number(j, "vc0", "region");
  }
  try {
    check_spec(spec);
  } catch (const Error& e) {
    config_error(e.what());
  }
  const double horizon = number(cfg, "horizon", "phase-map", 50.0);
  const auto cells = phase_map(grid, sigma, horizon, spec, g.threads, parse_tolerances(cfg));
  std::ofstream os(output_dir(g) / "phase_map.csv");
  io::CsvWriter w(os, {"vc", grid.in_omega ? "omega_over_nu" : "p", "p", "region", "boundary", "outcome", "t_event",
                       "note"});
  std::size_t failed = 0;
  for (const auto& c : cells) {
    if (c.outcome == Outcome::Failed) ++failed;
    w.row_text({io::format_double(c.vc), io::format_double(c.y), io::format_double(c.p), to_string(c.region),
                c.boundary ? "1" : "0", to_string(c.outcome), io::format_double(c.t_event), "\"" + c.note + "\""});
  }
  std::printf("%zu cells, %zu failed\n", cells.size(), failed);
  return Ok;
}

// field

inline int cmd_field(const json& cfg, const Globals& g) {
  check_keys(cfg, {"model", "state", "n", "t", "pde_dt", "tolerances"}, "field");
  const ModelParams p = parse_model(member(cfg, "model", "field"));
  if (p.domain != Domain::Circle) config_error("field: periodic domain only");
  const AnyState s0 = parse_state(member(cfg, "state", "field"), g.seed);
  check_state_model(s0, p);
  const std::size_t n = count(cfg, "n", "field", 512);
  const double t = number(cfg, "t", "field", 0.0);
  const IntegratorOptions opt = parse_tolerances(cfg);
  SpectralField w, u;
  double t_out = t;
  if (cfg.contains("pde_dt")) {
    if (std::holds_alternative<RealReducedState>(s0)) config_error("field: pde_dt needs a 'poles' or 'double_pole' state");
    const double dt = number(cfg, "pde_dt", "field");
    std::visit(
        [&](const auto& s) {
          if constexpr (!std::is_same_v<std::decay_t<decltype(s)>, RealReducedState>) {
            PdeOptions po;
            double q = 0.0;
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, DoublePoleState>) q = s.gauge_q;
            po.u_mean = [q](double) { return q; };
            const auto run = simulate_pde(sample_state(s, n), p, t, dt, po);
            w = run.fields.back();
            t_out = s.t + run.times.back();
            u = velocity_field(w, q);
          }
        },
        s0);
  } else {
    std::visit(
        [&](const auto& s) {
          auto st = s;
          if (t > s.t) {
            const auto tr = integrate(s, p, t, opt);
            if (tr.event.kind != EventKind::HorizonReached)
              throw Error(ErrorKind::InvalidState, std::string("run stopped early: ") + to_string(tr.event.kind));
            st = tr.event.state;
          }
          t_out = st.t;
          if constexpr (std::is_same_v<std::decay_t<decltype(st)>, PoleFamilyState>) {
            w = sample_state(st, n);
            u = velocity_field(w, 0.0);
          } else {
            DoublePoleState d;
            if constexpr (std::is_same_v<std::decay_t<decltype(st)>, RealReducedState>) d = embed(st);
            else d = st;
            w = sample_state(d, n);
            u = sample_field([&](double x) { return eval_velocity(d, x); }, n);
          }
        },
        s0);
  }
  std::ofstream os(output_dir(g) / "field.csv");
  io::CsvWriter csv(os, {"t", "x", "omega", "u"});
  for (std::size_t j = 0; j < n; ++j) csv.row({t_out, -pi + 2.0 * pi * double(j) / double(n), w.values[j], u.values[j]});
  const auto norms = grid_norms(w);
  std::printf("t = %s  L2 = %s  B0 = %s\n", io::format_double(t_out).c_str(), io::format_double(norms.l2).c_str(),
              io::format_double(norms.b0).c_str());
  return Ok;
}

// verify

inline json result_json(const acceptance::CriterionResult& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back(json{{"check", c.what}, {"measured", c.measured}, {"expected", c.expected}, {"pass", c.pass}});
  json j{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"seconds", r.seconds}, {"checks", checks}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

inline void print_result(std::FILE* f, const acceptance::CriterionResult& r) {
  std::fprintf(f, "%-4s %2d  %-48s %8.2fs\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
  for (const auto& c : r.checks)
    std::fprintf(f, "        %-4s %-58s %-22.12g %s\n", c.pass ? "ok" : "FAIL", c.what.c_str(), c.measured,
                 c.expected.c_str());
  if (!r.error.empty()) std::fprintf(f, "        error: %s\n", r.error.c_str());
}

inline int cmd_verify(const json& cfg, std::vector<int> ids, const Globals& g) {
  check_keys(cfg, {"criteria"}, "verify");
  if (ids.empty() && cfg.contains("criteria")) {
    if (!cfg["criteria"].is_array()) config_error("verify.criteria: expected an array of ids");
    for (const auto& c : cfg["criteria"]) {
      if (!c.is_number_integer()) config_error("verify.criteria: expected integers");
      ids.push_back(c.get<int>());
    }
  }
  if (ids.empty()) ids = acceptance::all_criteria();
  for (int id : ids)
    if (id < 1 || id > 13) config_error("verify: criterion ids run from 1 to 13");
  bool all = true;
  json report = json::array();
  for (int id : ids) {
    const auto r = acceptance::run_criterion(id, g.threads, g.seed);
    print_result(stdout, r);
    std::fflush(stdout);
    all = all && r.pass;
    report.push_back(result_json(r));
  }
  if (g.out) write_json(output_dir(g) / "verify.json", json{{"seed", g.seed}, {"pass", all}, {"criteria", report}});
  return all ? Ok : VerifyFailed;
}

}  // namespace gclm::cli
