#include "wft/cli.hpp"

#include <atomic>
#include <cstdio>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

namespace wft {

namespace {

Real jnum(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_string()) return parse_real(v.get<std::string>());
  if (!v.is_number()) throw DomainError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::vector<Real> jvec(const json& j, const char* key) {
  std::vector<Real> out;
  for (const json& v : j.at(key)) out.push_back(v.get<double>());
  return out;
}

State parse_state(const std::string& s) {
  auto g = parse_grid(s);
  if (g.size() != 3) throw DomainError("state '" + s + "' must be u,v,w");
  return {g[0], g[1], g[2]};
}

ConvexFlux flux_from(const json& datum, Real k) {
  if (k > 0) return ConvexFlux::quadratic_flux(k);
  if (datum.contains("flux")) return ConvexFlux::quadratic_flux(jnum(datum.at("flux"), "k"));
  return ConvexFlux::burgers();
}

void emit(const json& j, const std::string& out) {
  if (out.empty() || out == "-") std::cout << j.dump(2) << '\n';
  else write_json_file(out, j);
}

int parse_failure(const CLI::Error& e, CLI::App& app) {
  const int code = app.exit(e);
  return code == 0 ? kExitPass : kExitInputError;
}

}  // namespace

ScalarProfile scalar_profile_from_json(const json& j) {
  try {
    const std::string type = j.at("type").get<std::string>();
    if (type == "riemann") return ScalarProfile::riemann(jnum(j, "uL"), jnum(j, "uR"), j.contains("x0") ? jnum(j, "x0") : 0);
    if (type == "steps") return ScalarProfile::steps(jvec(j, "breakpoints"), jvec(j, "values"));
    if (type == "constant") return ScalarProfile::constant(jnum(j, "value"));
    if (type == "fourier")
      return ScalarProfile::fourier(j.contains("a") ? jvec(j, "a") : std::vector<Real>{},
                                    j.contains("b") ? jvec(j, "b") : std::vector<Real>{});
    throw DomainError("unknown scalar datum type '" + type + "'");
  } catch (const json::exception& e) {
    throw DomainError(std::string("scalar datum: ") + e.what());
  }
}

std::vector<Real> parse_grid(const std::string& s) {
  std::vector<Real> out;
  if (s.find(':') != std::string::npos) {
    std::vector<Real> p;
    std::string tok;
    std::istringstream is(s);
    while (std::getline(is, tok, ':')) p.push_back(parse_real(tok));
    if (p.size() != 3 || !(p[2] > 0) || !(p[1] >= p[0])) throw DomainError("grid '" + s + "' must be lo:hi:step with step > 0");
    const auto n = static_cast<std::size_t>(std::llround((p[1] - p[0]) / p[2])) + 1;
    for (std::size_t i = 0; i < n; ++i) out.push_back(p[0] + p[2] * static_cast<Real>(i));
    return out;
  }
  std::string tok;
  std::istringstream is(s);
  while (std::getline(is, tok, ',')) out.push_back(parse_real(tok));
  if (out.empty()) throw DomainError("empty list");
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::set<std::uint64_t> seen;
  std::string tok;
  std::istringstream is(s);
  auto add = [&](std::uint64_t v) {
    if (!seen.insert(v).second) throw DomainError("duplicate seed " + std::to_string(v));
    out.push_back(v);
  };
  try {
    while (std::getline(is, tok, ',')) {
      const auto dash = tok.find('-');
      if (dash == std::string::npos) {
        add(std::stoull(tok));
        continue;
      }
      const auto lo = std::stoull(tok.substr(0, dash)), hi = std::stoull(tok.substr(dash + 1));
      if (hi < lo) throw DomainError("bad seed range '" + tok + "'");
      for (auto v = lo; v <= hi; ++v) add(v);
    }
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const DomainError*>(&e)) throw;
    throw DomainError("malformed seed list '" + s + "'");
  }
  if (out.empty()) throw DomainError("empty seed list");
  return out;
}

RunConfig run_config_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("config must be a JSON object");
  static const std::set<std::string> known = {"eps",  "kind",  "seed",   "budget",     "mesh",     "radius",
                                              "norm", "base",  "J_max",  "ft",         "precision", "adversarial",
                                              "analysis", "support_lo", "support_hi", "teeth", "modes",
                                              "perturbation_mesh", "layout", "inserts"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw DomainError("unknown config key '" + it.key() + "'");
  RunConfig c;
  c.datum = datum_spec_from_json(j);
  try {
    if (j.contains("J_max")) c.J_max = j.at("J_max").get<int>();
    if (j.contains("ft")) {
      c.ft_overrides = j.at("ft");
      if (!c.ft_overrides.is_object()) throw DomainError("'ft' must be an object");
    }
    if (j.contains("precision")) {
      const auto pr = j.at("precision").get<std::string>();
      if (pr != "double" && pr != "extended") throw DomainError("precision must be double or extended");
      c.extended_precision = pr == "extended";
    }
    if (j.contains("adversarial")) {
      const json& a = j.at("adversarial");
      const ScenarioParams sp = derive_params(c.datum.eps);
      c.adversarial_strength = a.contains("strength") ? jnum(a, "strength") : sp.omega * sp.omega;
      if (a.contains("count")) c.adversarial_count = a.at("count").get<int>();
      if (a.contains("lag")) c.adversarial_lag = jnum(a, "lag");
      if (!(*c.adversarial_strength > 0) || c.adversarial_count < 1)
        throw DomainError("adversarial: strength must be > 0 and count >= 1");
    }
    if (j.contains("analysis")) {
      const json& a = j.at("analysis");
      if (a.contains("min_generations")) c.analysis.min_generations = a.at("min_generations").get<int>();
      if (a.contains("K_cap")) c.analysis.K_cap = jnum(a, "K_cap");
      if (a.contains("confinement_time")) c.analysis.confinement_time = jnum(a, "confinement_time");
    }
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  if (c.datum.kind == DatumKind::Perturbed && !j.contains("budget")) c.datum.perturbation.budget = derive_params(c.datum.eps).r / 2;
  if (c.extended_precision && !kExtendedPrecision)
    throw DomainError("config requests extended precision; rebuild with -DWFT_EXTENDED_PRECISION=ON");
  return c;
}

SimulateResult simulate_config(const RunConfig& cfg) {
  SimulateResult out;
  BuiltDatum bd = build_datum(cfg.datum);
  out.sp = bd.sp;
  SystemParams p(bd.sp.eta);
  const int J = cfg.J_max >= 0 ? cfg.J_max : (cfg.datum.kind == DatumKind::PiecewiseZ ? 5 : 3);
  FTParams fp = default_ft_params(bd.sp, J);
  if (cfg.datum.kind == DatumKind::CompressionV) fp.t_end = 2;
  json inserts = json::array();
  if (cfg.adversarial_strength) {
    fp.delta_rar = std::max(fp.delta_rar, *cfg.adversarial_strength * Real(1.001));
    fp = ft_params_from_json(cfg.ft_overrides, fp);
    auto cal = calibrate_adversarial(bd.datum, bd.sp, fp, *cfg.adversarial_strength, cfg.adversarial_count,
                                     cfg.adversarial_lag);
    for (std::size_t k = 0; k < cal.inserts.size(); ++k) {
      bd.datum = adversarial_rarefaction(bd.datum, bd.sp, p, cal.inserts[k].strength, cal.inserts[k].placement);
      inserts.push_back({{"strength", cal.inserts[k].strength},
                         {"placement", cal.inserts[k].placement},
                         {"target_time", cal.target_times[k]},
                         {"arrival_time", cal.arrival_times[k]}});
    }
  } else {
    fp = ft_params_from_json(cfg.ft_overrides, fp);
  }
  out.sol = evolve(bd.datum, fp, p);
  out.extra = {{"kind", to_string(cfg.datum.kind)},
               {"datum_spec", to_json(cfg.datum)},
               {"J_max", J},
               {"adversarial_inserts", inserts},
               {"mollify_radius", bd.mollify_radius},
               {"perturbation_norm", bd.perturbation_norm},
               {"analysis",
                {{"min_generations", cfg.analysis.min_generations},
                 {"K_cap", cfg.analysis.K_cap},
                 {"confinement_time", cfg.analysis.confinement_time}}}};
  return out;
}

namespace {

int cmd_scalar(const std::string& op, const std::string& datum_path, Real t, const std::string& xs_spec, Real k,
               bool burgers, Real a, Real b, Real threshold, int trials, std::uint64_t seed,
               const std::string& times, Real amplitude, int modes, int samples, const std::string& out) {
  const json dj = read_json_file(datum_path);
  const ScalarProfile u0 = scalar_profile_from_json(dj);
  const ConvexFlux flux = flux_from(dj, burgers ? Real(0.5) : k);
  if (op == "probe") {
    ProbeOptions po;
    po.times = parse_grid(times);
    po.trials = trials;
    po.seed = seed;
    po.amplitude = amplitude;
    po.modes = modes;
    po.samples = samples;
    const auto g = parse_grid(xs_spec);
    po.x_lo = g.front();
    po.x_hi = g.back();
    if (threshold > 0) po.jump_threshold = threshold;
    const ProbeReport r = schaeffer_probe(flux, u0, po);
    emit({{"trials", trials}, {"seed", seed}, {"times", po.times}, {"counts", r.counts},
          {"counts_half", r.counts_half}, {"unstable", r.unstable}, {"stable", r.stable()}},
         out);
    return r.stable() ? kExitPass : kExitVerdictFail;
  }
  if (!(t > 0)) throw DomainError("--t must be > 0");
  const ScalarSolutionSample s = lax_oleinik_solve(flux, u0, t, parse_grid(xs_spec));
  if (op == "solve") {
    if (out.empty() || out == "-") {
      std::printf("t,x,u,y_min\n");
      for (std::size_t i = 0; i < s.x.size(); ++i)
        std::printf("%s,%s,%s,%s\n", fmt_real(s.t).c_str(), fmt_real(s.x[i]).c_str(), fmt_real(s.u[i]).c_str(),
                    fmt_real(s.y[i]).c_str());
    } else {
      write_scalar_csv(out, s);
    }
    return kExitPass;
  }
  if (op == "check-oleinik") {
    const OleinikReport r = check_oleinik(s, flux);
    json j = {{"pass", r.pass}, {"max_ratio", r.max_ratio}};
    if (r.witness) j["witness"] = {s.x[r.witness->first], s.x[r.witness->second]};
    emit(j, out);
    return r.pass ? kExitPass : kExitVerdictFail;
  }
  if (op == "check-adl") {
    if (!(b > a)) throw DomainError("check-adl needs --a < --b");
    const AdlReport r = check_adl_lower(s, flux, a, b);
    emit({{"pass", r.pass}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"y_minus", r.y_minus}, {"y_plus", r.y_plus}}, out);
    return r.pass ? kExitPass : kExitVerdictFail;
  }
  if (op == "census") {
    const Real sup_f2 = flux.quadratic ? 2 * flux.k : Real(1);
    const Real thr = threshold > 0 ? threshold : default_census_threshold(s, sup_f2);
    json shocks = json::array();
    for (const auto& c : shock_census(s, thr)) shocks.push_back({{"x", c.x}, {"jump", c.jump}});
    emit({{"t", t}, {"threshold", thr}, {"count", shocks.size()}, {"shocks", shocks}}, out);
    return kExitPass;
  }
  throw DomainError("unknown scalar operation '" + op + "'");
}

int cmd_simulate(const std::string& config_path, const std::string& datum_csv, Real eps, const std::string& outdir,
                 const std::string& seeds_spec, int jobs, const std::vector<std::string>& sets) {
  json cj = config_path.empty() ? json::object() : read_json_file(config_path);
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw DomainError("--set expects key=value, got '" + kv + "'");
    json v;
    try {
      v = json::parse(kv.substr(eq + 1));
    } catch (const json::exception&) {
      v = kv.substr(eq + 1);
    }
    if (!cj.contains("ft")) cj["ft"] = json::object();
    cj["ft"][kv.substr(0, eq)] = v;
  }
  if (!datum_csv.empty()) {
    // Explicit datum: scenario parameters from eps only, no generator.
    const ScenarioParams sp = derive_params(cj.contains("eps") ? jnum(cj, "eps") : eps);
    SystemParams p(sp.eta);
    FTParams fp = default_ft_params(sp, cj.contains("J_max") ? cj.at("J_max").get<int>() : 3);
    if (cj.contains("ft")) fp = ft_params_from_json(cj.at("ft"), fp);
    const StepFunction d = read_datum_csv(datum_csv);
    const FTSolution sol = evolve(d, fp, p);
    write_run(outdir, sol, sp.eps, {{"kind", "file"}, {"datum_file", datum_csv}});
    if (sol.truncated) std::fprintf(stderr, "evolution truncated; partial outputs in %s\n", outdir.c_str());
    return sol.truncated ? kExitTruncated : kExitPass;
  }
  if (config_path.empty()) throw DomainError("simulate needs --config or --datum");

  std::vector<std::optional<std::uint64_t>> seeds;
  if (seeds_spec.empty()) seeds.emplace_back();
  else
    for (auto s : parse_seeds(seeds_spec)) seeds.emplace_back(s);
  std::vector<RunConfig> cfgs;
  for (const auto& s : seeds) {
    json c = cj;
    if (s) c["seed"] = *s;
    cfgs.push_back(run_config_from_json(c));
  }
  fs::create_directories(outdir);
  std::vector<int> codes(cfgs.size(), kExitPass);
  std::vector<std::string> messages(cfgs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < cfgs.size();) {
      const fs::path dir = seeds[i] ? fs::path(outdir) / ("seed_" + std::to_string(*seeds[i])) : fs::path(outdir);
      try {
        SimulateResult r = simulate_config(cfgs[i]);
        if (seeds[i]) r.extra["seed"] = *seeds[i];
        write_run(dir, r.sol, r.sp.eps, r.extra);
        if (r.sol.truncated) {
          codes[i] = kExitTruncated;
          messages[i] = "evolution truncated; partial outputs in " + dir.string();
        }
      } catch (const DomainError& e) {
        codes[i] = kExitInputError;
        messages[i] = e.what();
      } catch (const std::exception& e) {
        codes[i] = kExitInternal;
        messages[i] = e.what();
      }
    }
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(cfgs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  int code = kExitPass;
  for (std::size_t i = 0; i < cfgs.size(); ++i) {
    if (!messages[i].empty())
      std::fprintf(stderr, "%s%s\n", seeds[i] ? ("seed " + std::to_string(*seeds[i]) + ": ").c_str() : "",
                   messages[i].c_str());
    code = std::max(code, codes[i]);
  }
  return code;
}

int cmd_analyze(const std::string& dir, int min_generations, Real K_cap, const std::string& out) {
  LoadedRun run = read_run(dir);
  const ScenarioParams sp = derive_params(run.eps);
  const std::string kind = run.summary.value("kind", std::string("file"));
  const fs::path report = out.empty() ? fs::path(dir) / "report.json" : fs::path(out);
  write_diagram_csv(fs::path(dir) / "diagram.csv", run.sol);
  if (kind == to_string(DatumKind::CompressionV)) {
    const CollapseReport r = collapse_check(run.sol, sp);
    write_json_file(report, to_json(r));
    return r.pass ? kExitPass : kExitVerdictFail;
  }
  PatternOptions po;
  if (run.summary.contains("analysis")) {
    const json& a = run.summary.at("analysis");
    po.min_generations = a.value("min_generations", po.min_generations);
    po.K_cap = a.value("K_cap", po.K_cap);
    po.confinement_time = a.value("confinement_time", po.confinement_time);
  }
  if (min_generations > 0) po.min_generations = min_generations;
  if (K_cap > 0) po.K_cap = K_cap;
  const PatternReport r = verify_pattern(run.sol, sp, po);
  write_json_file(report, to_json(r));
  std::printf("%s: generations %d, verdict %s\n", dir.c_str(), r.generations_found, r.pass ? "pass" : "fail");
  return r.pass ? kExitPass : kExitVerdictFail;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Wave-front tracking for a 3x3 system of conservation laws"};
  app.require_subcommand(1);

  auto* scalar = app.add_subcommand("scalar", "Lax-Oleinik solutions of convex scalar laws");
  std::string s_op, s_datum, s_xs = "-5:5:0.01", s_out, s_times = "2,3,4";
  Real s_t = 1, s_k = 0, s_a = 0, s_b = 0, s_thr = 0, s_amp = Real(0.05);
  bool s_burgers = false;
  int s_trials = 4, s_modes = 4, s_samples = 1000;
  std::uint64_t s_seed = 0;
  scalar->add_option("op", s_op, "solve | check-oleinik | check-adl | census | probe")
      ->required()
      ->check(CLI::IsMember({"solve", "check-oleinik", "check-adl", "census", "probe"}));
  scalar->add_option("--datum", s_datum, "scalar datum JSON")->required();
  scalar->add_option("--t", s_t, "time");
  scalar->add_option("--xs", s_xs, "sample grid lo:hi:step or list (probe: window ends)");
  scalar->add_flag("--burgers", s_burgers, "f(z) = z^2/2 (default)");
  scalar->add_option("--k", s_k, "f(z) = k z^2");
  scalar->add_option("--a", s_a, "left end for check-adl");
  scalar->add_option("--b", s_b, "right end for check-adl");
  scalar->add_option("--threshold", s_thr, "census jump threshold");
  scalar->add_option("--trials", s_trials, "probe trials");
  scalar->add_option("--seed", s_seed, "probe seed");
  scalar->add_option("--times", s_times, "probe times");
  scalar->add_option("--amplitude", s_amp, "probe perturbation amplitude");
  scalar->add_option("--modes", s_modes, "probe Fourier modes");
  scalar->add_option("--samples", s_samples, "probe samples per census");
  scalar->add_option("--out", s_out, "output file (default stdout)");

  auto* scenario = app.add_subcommand("scenario", "scenario data");
  scenario->require_subcommand(1);
  auto* gen = scenario->add_subcommand("gen", "write the datum of a scenario config as CSV");
  std::string g_config, g_out, g_params;
  gen->add_option("--config", g_config, "scenario config JSON")->required();
  gen->add_option("--out", g_out, "datum CSV")->required();
  gen->add_option("--params", g_params, "derived parameters JSON");

  auto* riemann = app.add_subcommand("riemann", "Riemann problems");
  riemann->require_subcommand(1);
  auto* rsolve = riemann->add_subcommand("solve", "solve one Riemann problem");
  std::string r_ul, r_ur, r_out;
  Real r_eps = Real(0.3), r_eta = -1;
  rsolve->add_option("--ul", r_ul, "left state u,v,w")->required();
  rsolve->add_option("--ur", r_ur, "right state u,v,w")->required();
  rsolve->add_option("--eps", r_eps, "eta = eps^2");
  rsolve->add_option("--eta", r_eta, "coupling parameter");
  rsolve->add_option("--out", r_out, "output JSON (default stdout)");

  auto* certify = app.add_subcommand("certify", "eigenstructure certificate on a grid of |U| < 1");
  Real c_eta = Real(0.09);
  int c_res = 16;
  std::string c_out;
  certify->add_option("--eta", c_eta, "coupling parameter");
  certify->add_option("--resolution", c_res, "grid points per axis");
  certify->add_option("--out", c_out, "output JSON (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "evolve scenario data by front tracking");
  std::string m_config, m_datum, m_out, m_seeds;
  Real m_eps = Real(0.3);
  int m_jobs = 1;
  std::vector<std::string> m_sets;
  simulate->add_option("--config", m_config, "scenario config JSON");
  simulate->add_option("--datum", m_datum, "explicit datum CSV instead of a generated one");
  simulate->add_option("--eps", m_eps, "eps for --datum runs");
  simulate->add_option("--out", m_out, "output directory")->required();
  simulate->add_option("--seeds", m_seeds, "seed list, e.g. 1,2,5-9 (one subdirectory per seed)");
  simulate->add_option("--jobs", m_jobs, "concurrent runs")->check(CLI::PositiveNumber);
  simulate->add_option("--set", m_sets, "front-tracking override key=value");

  auto* analyze = app.add_subcommand("analyze", "pattern verdict for a run directory");
  std::string a_dir, a_out;
  int a_min_gen = 0;
  Real a_kcap = 0;
  analyze->add_option("dir", a_dir, "run directory")->required();
  analyze->add_option("--min-generations", a_min_gen, "required generations");
  analyze->add_option("--K-cap", a_kcap, "largest admissible decay constant");
  analyze->add_option("--out", a_out, "report JSON (default <dir>/report.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return parse_failure(e, app);
  }

  try {
    if (*scalar)
      return cmd_scalar(s_op, s_datum, s_t, s_xs, s_k, s_burgers, s_a, s_b, s_thr, s_trials, s_seed, s_times, s_amp,
                        s_modes, s_samples, s_out);
    if (*gen) {
      const RunConfig cfg = run_config_from_json(read_json_file(g_config));
      const BuiltDatum bd = build_datum(cfg.datum);
      write_datum_csv(g_out, bd.datum);
      if (!g_params.empty()) {
        json j = to_json(bd.sp);
        j["breakpoints"] = bd.datum.size();
        j["tv"] = bd.datum.total_variation();
        j["mollify_radius"] = bd.mollify_radius;
        j["perturbation_norm"] = bd.perturbation_norm;
        write_json_file(g_params, j);
      }
      return kExitPass;
    }
    if (*rsolve) {
      SystemParams p(r_eta > 0 ? r_eta : r_eps * r_eps);
      RiemannDiagnostics diag;
      const RiemannSolution sol = solve_riemann(parse_state(r_ul), parse_state(r_ur), p, {}, &diag);
      json j = to_json(sol);
      j["eta"] = p.eta();
      j["iterations"] = diag.iterations;
      j["residual"] = diag.residual;
      emit(j, r_out);
      return kExitPass;
    }
    if (*certify) {
      const CertificateReport r = certify_domain(SystemParams(c_eta), c_res);
      emit(to_json(r), c_out);
      return r.pass ? kExitPass : kExitVerdictFail;
    }
    if (*simulate) return cmd_simulate(m_config, m_datum, m_eps, m_out, m_seeds, m_jobs, m_sets);
    if (*analyze) return cmd_analyze(a_dir, a_min_gen, a_kcap, a_out);
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kExitInternal;
  }
  return kExitInputError;
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("wft");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace wft
