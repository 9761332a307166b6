#include "wft/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace wft {

std::string fmt_real(Real x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", static_cast<double>(x));
  return buf;
}

Real parse_real(const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw DomainError("trailing characters");
    return static_cast<Real>(v);
  } catch (const std::exception&) {
    throw DomainError("malformed number '" + s + "'");
  }
}

namespace {

json jreal(Real x) {
  if (std::isfinite(x)) return static_cast<double>(x);
  return fmt_real(x);
}

Real get_real(const json& j) {
  if (j.is_string()) return parse_real(j.get<std::string>());
  if (!j.is_number()) throw DomainError("expected a number, got " + j.dump());
  return static_cast<Real>(j.get<double>());
}

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  if constexpr (std::is_same_v<T, Real>) out = get_real(j.at(key));
  else out = j.at(key).get<T>();
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw DomainError("cannot write " + path.string());
  return os;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path, const std::string& header) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot read " + path.string());
  std::string line;
  if (!std::getline(is, line) || line != header)
    throw DomainError(path.string() + ": expected header '" + header + "'");
  const std::size_t cols = split(header, ',').size();
  std::vector<std::vector<std::string>> rows;
  std::size_t n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (line.empty()) continue;
    auto r = split(line, ',');
    if (r.size() != cols) throw DomainError(path.string() + ": line " + std::to_string(n) + " has wrong column count");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string join_ids(const std::vector<FrontId>& ids) {
  std::string s;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (k) s += ';';
    s += std::to_string(ids[k]);
  }
  return s;
}

std::vector<FrontId> parse_ids(const std::string& s) {
  std::vector<FrontId> out;
  if (s.empty()) return out;
  for (const auto& t : split(s, ';')) {
    try {
      out.push_back(std::stoll(t));
    } catch (const std::exception&) {
      throw DomainError("malformed id list '" + s + "'");
    }
  }
  return out;
}

json state_json(const State& U) { return json::array({jreal(U.u), jreal(U.v), jreal(U.w)}); }

}  // namespace

void write_datum_csv(const fs::path& path, const StepFunction& d) {
  auto os = open_out(path);
  os << "x,u,v,w\n";
  auto row = [&](const std::string& x, const State& U) {
    os << x << ',' << fmt_real(U.u) << ',' << fmt_real(U.v) << ',' << fmt_real(U.w) << '\n';
  };
  row("-inf", d.values.front());
  for (std::size_t k = 0; k < d.breakpoints.size(); ++k) row(fmt_real(d.breakpoints[k]), d.values[k + 1]);
}

StepFunction read_datum_csv(const fs::path& path) {
  auto rows = read_csv(path, "x,u,v,w");
  if (rows.empty() || rows[0][0] != "-inf") throw DomainError(path.string() + ": first row must be the left tail (x=-inf)");
  StepFunction d;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& r = rows[k];
    if (k) d.breakpoints.push_back(parse_real(r[0]));
    d.values.push_back({parse_real(r[1]), parse_real(r[2]), parse_real(r[3])});
  }
  d.validate();
  return d;
}

void write_fronts_csv(const fs::path& path, const FTSolution& sol) {
  auto os = open_out(path);
  os << "id,family,kind,birth_t,death_t,x_birth,speed,strength,generation,lineage,uL,vL,wL,uR,vR,wR\n";
  for (const Front& f : sol.fronts) {
    os << f.id << ',' << family_index(f.family) << ',' << (f.kind == WaveKind::Shock ? "S" : "R") << ','
       << fmt_real(f.birth_t) << ',' << fmt_real(f.death_t) << ',' << fmt_real(f.x_birth) << ',' << fmt_real(f.speed)
       << ',' << fmt_real(f.strength) << ',' << f.generation << ',' << join_ids(f.parents) << ','
       << fmt_real(f.left.u) << ',' << fmt_real(f.left.v) << ',' << fmt_real(f.left.w) << ',' << fmt_real(f.right.u)
       << ',' << fmt_real(f.right.v) << ',' << fmt_real(f.right.w) << '\n';
  }
}

void write_events_csv(const fs::path& path, const FTSolution& sol) {
  auto os = open_out(path);
  os << "t,x,in_ids,out_ids,V,Q,F,tv,np_total,simplified\n";
  for (const Event& e : sol.events)
    os << fmt_real(e.t) << ',' << fmt_real(e.x) << ',' << join_ids(e.in_ids) << ',' << join_ids(e.out_ids) << ','
       << fmt_real(e.glimm.V) << ',' << fmt_real(e.glimm.Q) << ',' << fmt_real(e.glimm.F) << ',' << fmt_real(e.tv)
       << ',' << fmt_real(e.np_total) << ',' << (e.simplified ? 1 : 0) << '\n';
}

void write_diagram_csv(const fs::path& path, const FTSolution& sol) {
  auto os = open_out(path);
  os << "id,family,t,x,strength\n";
  for (const Front& f : sol.fronts) {
    const Real end = std::min(f.death_t, sol.horizon);
    if (end < f.birth_t) continue;
    for (Real t : {f.birth_t, end})
      os << f.id << ',' << family_index(f.family) << ',' << fmt_real(t) << ',' << fmt_real(f.position(t)) << ','
         << fmt_real(f.strength) << '\n';
  }
}

void write_scalar_csv(const fs::path& path, const ScalarSolutionSample& s) {
  auto os = open_out(path);
  os << "t,x,u,y_min\n";
  for (std::size_t i = 0; i < s.x.size(); ++i)
    os << fmt_real(s.t) << ',' << fmt_real(s.x[i]) << ',' << fmt_real(s.u[i]) << ',' << fmt_real(s.y[i]) << '\n';
}

json to_json(const FTParams& p) {
  return {{"delta_rar", jreal(p.delta_rar)},
          {"thresh_simplified", jreal(p.thresh_simplified)},
          {"np_speed", jreal(p.np_speed)},
          {"t_end", jreal(p.t_end)},
          {"max_fronts", p.max_fronts},
          {"clip_lo", jreal(p.clip_lo)},
          {"clip_hi", jreal(p.clip_hi)},
          {"min_strength", jreal(p.min_strength)},
          {"glimm_C", jreal(p.glimm_C)},
          {"big_wave_threshold", jreal(p.big_wave_threshold)},
          {"merge_tol", jreal(p.merge_tol)},
          {"np_absorb_tol", jreal(p.np_absorb_tol)}};
}

FTParams ft_params_from_json(const json& j, FTParams p) {
  if (!j.is_object()) throw DomainError("front-tracking overrides must be a JSON object");
  static const char* keys[] = {"delta_rar", "thresh_simplified", "np_speed", "t_end", "max_fronts", "clip_lo",
                               "clip_hi", "min_strength", "glimm_C", "big_wave_threshold", "merge_tol",
                               "np_absorb_tol"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::find(std::begin(keys), std::end(keys), it.key()) == std::end(keys))
      throw DomainError("unknown front-tracking parameter '" + it.key() + "'");
  read_opt(j, "delta_rar", p.delta_rar);
  read_opt(j, "thresh_simplified", p.thresh_simplified);
  read_opt(j, "np_speed", p.np_speed);
  read_opt(j, "t_end", p.t_end);
  read_opt(j, "max_fronts", p.max_fronts);
  read_opt(j, "clip_lo", p.clip_lo);
  read_opt(j, "clip_hi", p.clip_hi);
  read_opt(j, "min_strength", p.min_strength);
  read_opt(j, "glimm_C", p.glimm_C);
  read_opt(j, "big_wave_threshold", p.big_wave_threshold);
  read_opt(j, "merge_tol", p.merge_tol);
  read_opt(j, "np_absorb_tol", p.np_absorb_tol);
  p.validate();
  return p;
}

json to_json(const ScenarioParams& sp) {
  return {{"eps", jreal(sp.eps)},     {"q", jreal(sp.q)},          {"eta", jreal(sp.eta)},
          {"omega", jreal(sp.omega)}, {"r", jreal(sp.r)},          {"Ttilde", jreal(sp.Ttilde)},
          {"rho", jreal(sp.rho)},     {"a", jreal(sp.a)},          {"U_I", state_json(sp.U_I)},
          {"J_max_feasible", sp.J_max_feasible}};
}

json to_json(const RiemannSolution& sol) {
  json waves = json::array();
  for (const Wave& w : sol.waves)
    waves.push_back({{"family", family_index(w.family)},
                     {"kind", kind_name(w.kind)},
                     {"strength", jreal(w.strength)},
                     {"left", state_json(w.left)},
                     {"right", state_json(w.right)},
                     {"speed_lo", jreal(w.speed_lo)},
                     {"speed_hi", jreal(w.speed_hi)}});
  return {{"waves", waves}};
}

json to_json(const CertificateReport& r) {
  json j = {{"pass", r.pass},
            {"resolution", r.resolution},
            {"points", r.points},
            {"lambda_min", {jreal(r.lambda_min[0]), jreal(r.lambda_min[1]), jreal(r.lambda_min[2])}},
            {"lambda_max", {jreal(r.lambda_max[0]), jreal(r.lambda_max[1]), jreal(r.lambda_max[2])}},
            {"min_gap12", jreal(r.min_gap12)},
            {"min_gap23", jreal(r.min_gap23)},
            {"max_gn_error_analytic", jreal(r.max_gn_error_analytic)},
            {"max_gn_error_fd", jreal(r.max_gn_error_fd)},
            {"violations", r.violations}};
  if (r.witness) j["witness"] = state_json(*r.witness);
  return j;
}

namespace {

json trajectory_json(const Trajectory& tr) {
  return {{"fronts", tr.ids.size()},
          {"t_begin", jreal(tr.t_begin)},
          {"t_end", jreal(tr.t_end)},
          {"drift", tr.empty() ? json(nullptr) : jreal(tr.drift())},
          {"max_strength_jump", jreal(tr.max_strength_jump)},
          {"drift_flags", tr.drift_flags}};
}

}  // namespace

json to_json(const PatternReport& r) {
  json gens = json::array();
  for (const auto& g : r.reflections.generations)
    gens.push_back({{"j", g.j},
                    {"R_strength", jreal(g.R_strength)},
                    {"S_strength", jreal(g.S_strength)},
                    {"R_id", g.R_id},
                    {"S_id", g.S_id},
                    {"R_time", jreal(g.R_time)},
                    {"S_time", jreal(g.S_time)}});
  json canc = json::array();
  for (const auto& c : r.reflections.cancellations)
    canc.push_back({{"t", jreal(c.t)},
                    {"x", jreal(c.x)},
                    {"family", family_index(c.family)},
                    {"generation", c.generation},
                    {"shock_in", jreal(c.shock_in)},
                    {"rarefaction_in", jreal(c.rarefaction_in)},
                    {"shock_out", jreal(c.shock_out)}});
  json funcs = json::array();
  for (const auto& f : r.functionals)
    funcs.push_back({{"t", jreal(f.t)}, {"j", f.j}, {"V13", jreal(f.f.V13)}, {"R13", jreal(f.f.R13)}});
  json j = {{"pass", r.pass},
            {"incomplete", r.incomplete},
            {"big_shocks",
             {{"found", r.big.found},
              {"message", r.big.message},
              {"meeting_time", r.big.meeting_time ? jreal(*r.big.meeting_time) : json(nullptr)},
              {"Jl", trajectory_json(r.big.Jl)},
              {"Jr", trajectory_json(r.big.Jr)}}},
            {"generations", gens},
            {"cancellations", canc},
            {"parity_violations", r.reflections.parity_violations},
            {"generations_found", r.generations_found},
            {"J_used", r.J_used},
            {"noise_floor", jreal(r.noise_floor)},
            {"monotone_decay", r.monotone_decay},
            {"confinement",
             {{"left_violations", r.confinement.left_violations},
              {"right_violations", r.confinement.right_violations},
              {"left_strength", jreal(r.confinement.left_strength)},
              {"right_strength", jreal(r.confinement.right_strength)}}},
            {"functionals", funcs},
            {"criteria",
             {{"big_shocks", r.crit_big_shocks},
              {"generations", r.crit_generations},
              {"decay", r.crit_decay},
              {"confinement", r.crit_confinement},
              {"resolved", r.crit_resolved}}},
            {"notes", r.notes}};
  if (r.fit)
    j["fit"] = {{"ratio", jreal(r.fit->ratio)},
                {"K_low", jreal(r.fit->K_low)},
                {"K_high", jreal(r.fit->K_high)},
                {"K", jreal(r.fit->K)},
                {"J_used", r.fit->J_used}};
  return j;
}

json to_json(const CollapseReport& r) {
  json shocks = json::array();
  for (const auto& s : r.shocks)
    shocks.push_back({{"family", family_index(s.family)},
                      {"id", s.id},
                      {"x", jreal(s.x)},
                      {"speed", jreal(s.speed)},
                      {"strength", jreal(s.strength)}});
  return {{"pass", r.pass},
          {"t_bar", r.t_bar ? jreal(*r.t_bar) : json(nullptr)},
          {"shocks", shocks},
          {"residual13", jreal(r.residual13)},
          {"residual_other", jreal(r.residual_other)},
          {"failures", r.failures}};
}

json to_json(const DatumSpec& d) {
  json adv = json::array();
  for (const auto& a : d.adversarial) adv.push_back({{"strength", jreal(a.strength)}, {"placement", jreal(a.placement)}});
  return {{"eps", jreal(d.eps)},
          {"kind", to_string(d.kind)},
          {"mesh", jreal(d.mesh)},
          {"radius", jreal(d.radius)},
          {"base", to_string(d.base)},
          {"norm", to_string(d.perturbation.norm)},
          {"seed", d.perturbation.seed},
          {"budget", jreal(d.perturbation.budget)},
          {"support_lo", jreal(d.perturbation.support_lo)},
          {"support_hi", jreal(d.perturbation.support_hi)},
          {"teeth", d.perturbation.teeth},
          {"modes", d.perturbation.modes},
          {"perturbation_mesh", jreal(d.perturbation.mesh)},
          {"layout",
           {{"focus1", jreal(d.layout.focus1)},
            {"focus3", jreal(d.layout.focus3)},
            {"strength13", jreal(d.layout.strength13)},
            {"strength2", jreal(d.layout.strength2)}}},
          {"inserts", adv}};
}

DatumSpec datum_spec_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("scenario config must be a JSON object");
  DatumSpec d;
  try {
    read_opt(j, "eps", d.eps);
    if (j.contains("kind")) d.kind = datum_kind_from_string(j.at("kind").get<std::string>());
    read_opt(j, "mesh", d.mesh);
    read_opt(j, "radius", d.radius);
    if (j.contains("base")) d.base = datum_kind_from_string(j.at("base").get<std::string>());
    if (j.contains("norm")) d.perturbation.norm = norm_type_from_string(j.at("norm").get<std::string>());
    read_opt(j, "seed", d.perturbation.seed);
    read_opt(j, "budget", d.perturbation.budget);
    read_opt(j, "support_lo", d.perturbation.support_lo);
    read_opt(j, "support_hi", d.perturbation.support_hi);
    read_opt(j, "teeth", d.perturbation.teeth);
    read_opt(j, "modes", d.perturbation.modes);
    read_opt(j, "perturbation_mesh", d.perturbation.mesh);
    if (j.contains("layout")) {
      const json& l = j.at("layout");
      read_opt(l, "focus1", d.layout.focus1);
      read_opt(l, "focus3", d.layout.focus3);
      read_opt(l, "strength13", d.layout.strength13);
      read_opt(l, "strength2", d.layout.strength2);
    }
    if (j.contains("inserts"))
      for (const json& a : j.at("inserts")) d.adversarial.push_back({get_real(a.at("strength")), get_real(a.at("placement"))});
  } catch (const json::exception& e) {
    throw DomainError(std::string("scenario config: ") + e.what());
  }
  return d;
}

json run_summary(const FTSolution& sol, Real eps) {
  return {{"eps", jreal(eps)},
          {"params", to_json(sol.params)},
          {"eta", jreal(sol.eta)},
          {"horizon", jreal(sol.horizon)},
          {"truncated", sol.truncated},
          {"fronts", sol.fronts.size()},
          {"events", sol.events.size()},
          {"simplified_events", sol.simplified_events},
          {"pruned_waves", sol.pruned_waves},
          {"clipped_fronts", sol.clipped_fronts},
          {"max_np_total", jreal(sol.max_np_total)},
          {"created_np_total", jreal(sol.created_np_total)},
          {"absorbed_total", jreal(sol.absorbed_total)},
          {"max_live_fronts", sol.max_live_fronts},
          {"initial_glimm", {jreal(sol.initial_glimm.V), jreal(sol.initial_glimm.Q), jreal(sol.initial_glimm.F)}},
          {"initial_tv", jreal(sol.initial_tv)}};
}

void write_run(const fs::path& dir, const FTSolution& sol, Real eps, const json& extra) {
  fs::create_directories(dir);
  write_datum_csv(dir / "datum.csv", sol.datum);
  write_fronts_csv(dir / "fronts.csv", sol);
  write_events_csv(dir / "events.csv", sol);
  json s = run_summary(sol, eps);
  for (auto it = extra.begin(); it != extra.end(); ++it) s[it.key()] = it.value();
  write_json_file(dir / "run.json", s);
}

LoadedRun read_run(const fs::path& dir) {
  for (const char* f : {"run.json", "datum.csv", "fronts.csv", "events.csv"})
    if (!fs::exists(dir / f)) throw DomainError("missing " + (dir / f).string());
  LoadedRun out;
  out.summary = read_json_file(dir / "run.json");
  FTSolution& sol = out.sol;
  try {
    out.eps = get_real(out.summary.at("eps"));
    sol.params = ft_params_from_json(out.summary.at("params"), FTParams{});
    sol.eta = get_real(out.summary.at("eta"));
    sol.horizon = get_real(out.summary.at("horizon"));
    sol.truncated = out.summary.at("truncated").get<bool>();
    sol.simplified_events = out.summary.at("simplified_events").get<std::size_t>();
    sol.pruned_waves = out.summary.at("pruned_waves").get<std::size_t>();
    sol.clipped_fronts = out.summary.at("clipped_fronts").get<std::size_t>();
    sol.max_np_total = get_real(out.summary.at("max_np_total"));
    sol.created_np_total = get_real(out.summary.at("created_np_total"));
    sol.absorbed_total = get_real(out.summary.at("absorbed_total"));
    sol.max_live_fronts = out.summary.at("max_live_fronts").get<std::size_t>();
    const json& g = out.summary.at("initial_glimm");
    sol.initial_glimm = {get_real(g.at(0)), get_real(g.at(1)), get_real(g.at(2))};
    sol.initial_tv = get_real(out.summary.at("initial_tv"));
  } catch (const json::exception& e) {
    throw DomainError("run.json: " + std::string(e.what()));
  }
  sol.datum = read_datum_csv(dir / "datum.csv");
  for (const auto& r : read_csv(dir / "fronts.csv",
                                "id,family,kind,birth_t,death_t,x_birth,speed,strength,generation,lineage,uL,vL,wL,uR,vR,wR")) {
    Front f;
    f.id = std::stoll(r[0]);
    if (f.id != static_cast<FrontId>(sol.fronts.size())) throw DomainError("fronts.csv: ids out of sequence");
    f.family = family_from_index(std::stoi(r[1]));
    if (r[2] != "S" && r[2] != "R") throw DomainError("fronts.csv: kind must be S or R");
    f.kind = r[2] == "S" ? WaveKind::Shock : WaveKind::Rarefaction;
    f.birth_t = parse_real(r[3]);
    f.death_t = parse_real(r[4]);
    f.x_birth = parse_real(r[5]);
    f.speed = parse_real(r[6]);
    f.strength = parse_real(r[7]);
    f.generation = std::stoi(r[8]);
    f.parents = parse_ids(r[9]);
    f.left = {parse_real(r[10]), parse_real(r[11]), parse_real(r[12])};
    f.right = {parse_real(r[13]), parse_real(r[14]), parse_real(r[15])};
    sol.fronts.push_back(std::move(f));
  }
  for (const auto& r : read_csv(dir / "events.csv", "t,x,in_ids,out_ids,V,Q,F,tv,np_total,simplified")) {
    Event e;
    e.t = parse_real(r[0]);
    e.x = parse_real(r[1]);
    e.in_ids = parse_ids(r[2]);
    e.out_ids = parse_ids(r[3]);
    e.glimm = {parse_real(r[4]), parse_real(r[5]), parse_real(r[6])};
    e.tv = parse_real(r[7]);
    e.np_total = parse_real(r[8]);
    e.simplified = r[9] == "1";
    for (FrontId id : e.in_ids)
      if (id < 0 || id >= static_cast<FrontId>(sol.fronts.size())) throw DomainError("events.csv: unknown front id");
    for (FrontId id : e.out_ids)
      if (id < 0 || id >= static_cast<FrontId>(sol.fronts.size())) throw DomainError("events.csv: unknown front id");
    sol.events.push_back(std::move(e));
  }
  return out;
}

json read_json_file(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot read " + path.string());
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw DomainError(path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const json& j) {
  auto os = open_out(path);
  os << j.dump(2) << '\n';
}

}  // namespace wft
