#include "superode_cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "superode/parse.hpp"
#include "superode/series.hpp"
#include "superode/symmetry.hpp"
#include "superode_cli/system_file.hpp"

namespace superode::cli {

namespace {

struct Options {
  std::string input;
  std::string out;
  // reduce / homogenize
  std::string prefix = "Y";
  std::string u = "u";
  // analyze
  bool homogenize_first = false;
  std::size_t samples = 2000;
  std::uint64_t seed = 12345;
  std::size_t basis_bound = 40;
  std::size_t power_basis_bound = 8;
  // series
  std::size_t order = 8;
  std::string csv;
  double t_end = 1.0;
  std::size_t csv_samples = 100;
  // symmetry
  std::optional<std::size_t> degree;
  std::vector<std::string> free;
  std::string format = "json";
  // simulate / riccati / difference
  std::string scheme = "rk4";
  double step = 1e-3;
  std::string h = "1/10";
  std::size_t steps = 20;
  double tol = 1e-8;
};

std::string show(const GrassmannElement& g, const ConstantRegistry& reg) { return format_constant(g, reg); }

json vector_json(const std::vector<Variable>& vars, const SuperVector& v, const ConstantRegistry& reg) {
  json j = json::object();
  for (std::size_t i = 0; i < vars.size(); ++i) j[vars[i].name] = show(v[i], reg);
  return j;
}

json vector_exact(const std::vector<Variable>& vars, const SuperVector& v) {
  json j = json::object();
  for (std::size_t i = 0; i < vars.size(); ++i) j[vars[i].name] = grassmann_to_json(v[i]);
  return j;
}

json real_matrix_json(const RealMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputError("cannot write '" + path + "'");
      out_ = file_.get();
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_;
};

void emit(const json& j, const Options& o, std::ostream& out) {
  Sink sink(o.out, out);
  sink.stream() << j.dump(2) << '\n';
}

int cmd_reduce(const Options& o, std::ostream& out) {
  const SystemFile f = parse_system(o.input);
  const FlowSpec flow = f.as_flow();
  ReductionOptions ro;
  ro.prefix = o.prefix;
  const ReductionResult r = reduce_to_quadratic(flow, ro);
  const VerificationReport v = verify_reduction(flow, r);
  SystemFile reduced = with_flow(f, r.reduced, f.name.empty() ? "reduced" : f.name + "-reduced");
  json dict = json::object();
  for (const auto& [name, w] : r.dictionary) dict[name] = w.to_string();
  json j = {{"system", serialize(reduced)}, {"dictionary", dict}, {"added_variables", r.dictionary.size()},
            {"verify_reduction", v.ok}};
  if (!v.ok) j["counterexample"] = v.counterexample;
  emit(j, o, out);
  return v.ok ? kExitOk : kExitVerification;
}

int cmd_homogenize(const Options& o, std::ostream& out) {
  const SystemFile f = parse_system(o.input);
  const QuadraticSystem h = homogenize(f.as_quadratic(), o.u);
  SystemFile g = with_flow(f, h.to_flow(f.policy), f.name.empty() ? "homogenized" : f.name + "-homogenized");
  g.kind = SystemKind::quadratic;
  g.flow.reset();
  g.quadratic = h;
  g.variables = h.variables();
  if (!f.initial.empty()) g.initial.emplace(o.u, GrassmannElement::scalar(f.budget, Rational(1)));
  json j = serialize(g);
  j["display"] = json::object();
  const FlowSpec flow = h.to_flow(f.policy);
  for (const auto& v : flow.variables())
    j["display"][v.name] = flow.rhs(v.name).to_string([&](const GrassmannElement& c) { return show(c, f.registry); });
  emit(j, o, out);
  return kExitOk;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  const SystemFile f = parse_system(o.input);
  QuadraticSystem s = f.as_quadratic();
  if (o.homogenize_first) s = homogenize(s, o.u);
  WitnessOptions wo;
  wo.samples = o.samples;
  wo.seed = o.seed;
  wo.basis_bound = o.basis_bound;
  wo.power_basis_bound = o.power_basis_bound;
  json j;
  j["variables"] = json::array();
  for (const auto& v : s.variables()) j["variables"].push_back(v.name);
  j["homogeneous"] = s.is_homogeneous();
  const auto aw = associativity_witness(s, wo);
  j["associativity_witness"] = nullptr;
  if (aw) {
    json w = json::array();
    for (const auto& x : *aw) w.push_back(vector_json(s.variables(), x, f.registry));
    j["associativity_witness"] = w;
  }
  j["associative"] = !aw.has_value();
  const auto pw = power_associativity_witness(s, wo);
  j["power_associativity_witness"] = pw ? vector_json(s.variables(), *pw, f.registry) : json(nullptr);
  j["power_associative"] = !pw.has_value();
  j["search"] = {{"samples", wo.samples}, {"seed", wo.seed}, {"basis_bound", wo.basis_bound},
                 {"power_basis_bound", wo.power_basis_bound}};
  j["idempotents"] = json::array();
  if (s.is_homogeneous() && s.budget() == 0)
    for (const auto& x : find_real_idempotents(s)) j["idempotents"].push_back(x);
  emit(j, o, out);
  return kExitOk;
}

int cmd_series(const Options& o, std::ostream& out) {
  const SystemFile f = parse_system(o.input);
  const QuadraticSystem s = f.as_quadratic();
  const SeriesSolution sol = closed_form_truncated(s, f.initial_vector(s), o.order);
  json coeffs = json::array(), exact = json::array(), derivs = json::array();
  for (std::size_t k = 0; k < sol.coeffs.size(); ++k) {
    coeffs.push_back(vector_json(s.variables(), sol.coeffs[k], f.registry));
    exact.push_back(vector_exact(s.variables(), sol.coeffs[k]));
    derivs.push_back(vector_json(s.variables(), sol.derivative(k), f.registry));
  }
  json j = {{"order", sol.order()}, {"exact_truncation", sol.exact_truncation}, {"coeffs", coeffs},
            {"derivatives", derivs}, {"exact", exact}};
  if (!sol.exact_truncation) {
    const auto r = radius_estimate(sol);
    j["radius_estimate"] = r ? json(*r) : json(nullptr);
  }
  emit(j, o, out);

  if (!o.csv.empty()) {
    if (s.budget() != 0) throw InputError("--csv needs real coefficients (L = 0)");
    Trajectory traj;
    traj.scheme = "series";
    const std::size_t n = std::max<std::size_t>(o.csv_samples, 1);
    for (std::size_t i = 0; i <= n; ++i) {
      const double t = o.t_end * static_cast<double>(i) / static_cast<double>(n);
      std::vector<double> x(s.dim(), 0.0);
      for (std::size_t k = sol.coeffs.size(); k-- > 0;)
        for (std::size_t c = 0; c < s.dim(); ++c) x[c] = x[c] * t + sol.coeffs[k][c].body().get_d();
      traj.times.push_back(t);
      traj.states.push_back(std::move(x));
    }
    std::vector<std::string> names;
    for (const auto& v : s.variables()) names.push_back(v.name);
    std::ofstream csv(o.csv);
    if (!csv) throw InputError("cannot write '" + o.csv + "'");
    write_csv(csv, traj, names);
  }
  return kExitOk;
}

int cmd_symmetry(const Options& o, std::ostream& out) {
  const SystemFile f = parse_system(o.input);
  const FlowSpec flow = f.as_flow();
  SolveOptions so;
  so.degree = o.degree.value_or(f.symmetry_degree.value_or(3));
  so.preferred_free = o.free.empty() ? f.symmetry_free : o.free;
  const LinearSolveResult r = solve_commuting(flow, so);
  const auto relations = lambda_relations(r);

  bool all_verified = true;
  std::string failure;
  for (std::size_t i = 0; i < r.nullspace.size(); ++i) {
    const CommutingReport c = verify_commuting(flow, instantiate(r.ansatz, r.nullspace[i]));
    if (!c.ok && all_verified) failure = "nullspace vector " + std::to_string(i) + ": " + c.detail;
    all_verified = all_verified && c.ok;
  }

  if (o.format == "text") {
    Sink sink(o.out, out);
    auto& os = sink.stream();
    os << "degree " << so.degree << ": " << r.unknown_count << " unknowns, " << r.equation_count << " equations, rank "
       << r.rank << ", " << r.free_parameters.size() << " free\n";
    os << "over the constants: " << r.lambda_unknown_count << " unknowns, " << r.lambda_equation_count
       << " equations\n";
    os << "free:";
    for (const auto& p : r.free_parameters) os << ' ' << p;
    os << '\n';
    for (const auto& rel : relations)
      if (!rel.free) os << "  " << format_relation(rel, &f.registry) << '\n';
    os << "verify_commuting: " << (all_verified ? "ok" : failure) << '\n';
  } else {
    json rel = json::array();
    for (const auto& x : relations) {
      json terms = json::object();
      for (const auto& [p, c] : x.terms) terms[p] = show(c, f.registry);
      rel.push_back({{"unknown", x.unknown}, {"free", x.free}, {"found", x.found}, {"terms", terms},
                     {"text", format_relation(x, &f.registry)}});
    }
    json j = {{"degree", so.degree},
              {"unknowns", r.unknown_count},
              {"equations", r.equation_count},
              {"lambda_unknowns", r.lambda_unknown_count},
              {"lambda_equations", r.lambda_equation_count},
              {"rank", r.rank},
              {"nullity", r.nullspace.size()},
              {"free_parameters", r.free_parameters},
              {"relations", rel},
              {"verify_commuting", all_verified}};
    if (!all_verified) j["failure"] = failure;
    emit(j, o, out);
  }
  return all_verified ? kExitOk : kExitVerification;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const SystemFile f = parse_system(o.input);
  const FlowSpec flow = f.as_flow();
  const RealSystem sys = expand_to_real(flow);
  const std::vector<double> x0 = sys.state(f.initial);
  Trajectory traj;
  if (o.scheme == "rk4") {
    traj = rk4_integrate(sys, x0, o.t_end, o.step);
  } else if (o.scheme == "difference") {
    traj = difference_real(sys, x0, parse_rational(o.h).get_d(), o.steps);
  } else {
    throw InputError("unknown scheme '" + o.scheme + "'");
  }
  Sink sink(o.out, out);
  write_csv(sink.stream(), traj, sys.coords);
  return kExitOk;
}

int cmd_riccati(const Options& o, std::ostream& out) {
  const SystemFile f = parse_system(o.input);
  if (!f.riccati) throw InputError(o.input + ": not a riccati system");
  const RiccatiSpec& spec = *f.riccati;
  const RationalMatrix x0 = f.riccati_x0.value_or(RationalMatrix(spec.p, spec.q, Rational(0)));
  const RealMatrix direct = riccati_direct(spec, to_real(x0), o.t_end, o.step);
  const RealMatrix linear = riccati_via_linear(spec, to_real(x0), o.t_end, o.step);
  double diff = 0;
  for (std::size_t i = 0; i < direct.rows(); ++i)
    for (std::size_t k = 0; k < direct.cols(); ++k) diff = std::max(diff, std::abs(direct(i, k) - linear(i, k)));
  const RiccatiDifferenceResult d = riccati_difference(spec, x0, parse_rational(o.h), o.steps);
  json j = {{"t_end", o.t_end},
            {"step", o.step},
            {"direct", real_matrix_json(direct)},
            {"via_linear", real_matrix_json(linear)},
            {"max_difference", diff},
            {"agree", diff <= o.tol},
            {"difference_steps", d.states.size() - 1},
            {"difference_identity", d.identity_holds},
            {"final_state", matrix_to_json(d.states.back())}};
  if (d.first_failure) j["first_failure"] = *d.first_failure;
  emit(j, o, out);
  return diff <= o.tol && d.identity_holds ? kExitOk : kExitVerification;
}

int cmd_difference(const Options& o, std::ostream& out) {
  const SystemFile f = parse_system(o.input);
  const QuadraticSystem s = f.as_quadratic();
  const DifferenceResult d = difference_iterate(f.as_tensor(), f.initial_vector(s), parse_rational(o.h), o.steps);
  json states = json::array();
  for (const auto& x : d.states) states.push_back(vector_json(s.variables(), x, f.registry));
  emit({{"h", o.h}, {"steps", o.steps}, {"equilibrium_start", d.equilibrium_start},
        {"idempotent_start", d.idempotent_start}, {"states", states}},
       o, out);
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out) {
  const SystemFile f = parse_system(o.input);
  bool ok = true;
  json j;
  const SystemFile again = parse_system_json(serialize(f));
  j["round_trip"] = same_model(f, again);
  ok = ok && j["round_trip"].get<bool>();
  if (f.reduction) {
    const VerificationReport v = verify_reduction(f.as_flow(), *f.reduction);
    j["verify_reduction"] = v.ok;
    if (!v.ok) j["reduction_counterexample"] = v.counterexample;
    ok = ok && v.ok;
  }
  if (f.commuting) {
    const CommutingReport c = verify_commuting(f.as_flow(), *f.commuting);
    j["verify_commuting"] = c.ok;
    if (!c.ok) j["commuting_detail"] = c.detail;
    ok = ok && c.ok;
  }
  j["ok"] = ok;
  emit(j, o, out);
  return ok ? kExitOk : kExitVerification;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polynomial ODE systems over Grassmann algebras", "superode"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("system", o.input, "System description (JSON)")->required();
    sub->add_option("--out,-o", o.out, "Write the result here instead of stdout");
    return sub;
  };
  auto h_options = [&](CLI::App* sub) {
    sub->add_option("--h", o.h, "Step size, rational")->capture_default_str();
    sub->add_option("--steps", o.steps, "Number of steps")->capture_default_str();
  };

  auto* reduce = common(app.add_subcommand("reduce", "Reduce to a quadratic system"));
  reduce->add_option("--prefix", o.prefix, "Name prefix for new variables")->capture_default_str();

  auto* homog = common(app.add_subcommand("homogenize", "Absorb constant and linear terms with an even variable"));
  homog->add_option("--u", o.u, "Name of the new variable")->capture_default_str();

  auto* analyze = common(app.add_subcommand("analyze", "Search for (power-)associativity witnesses and idempotents"));
  analyze->add_flag("--homogenize", o.homogenize_first, "Homogenize first");
  analyze->add_option("--u", o.u, "Name of the homogenizing variable")->capture_default_str();
  analyze->add_option("--samples", o.samples, "Random triples to try")->capture_default_str();
  analyze->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  analyze->add_option("--basis-bound", o.basis_bound, "Exhaustive basis search size")->capture_default_str();
  analyze->add_option("--power-basis-bound", o.power_basis_bound, "Exhaustive power search size")
      ->capture_default_str();

  auto* series = common(app.add_subcommand("series", "Exact Taylor coefficients"));
  series->add_option("--order", o.order, "Highest order")->capture_default_str();
  series->add_option("--csv", o.csv, "Also sample the truncated series into this CSV");
  series->add_option("--t-end", o.t_end, "Sampling interval end for --csv")->capture_default_str();
  series->add_option("--samples", o.csv_samples, "Samples for --csv")->capture_default_str();

  auto* symmetry = common(app.add_subcommand("symmetry", "Polynomial commuting flows"));
  symmetry->add_option("--degree", o.degree, "Ansatz degree (default 3)");
  symmetry->add_option("--free", o.free, "Unknowns to keep as free parameters");
  symmetry->add_option("--format", o.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  auto* simulate = common(app.add_subcommand("simulate", "Integrate the real expansion, CSV output"));
  simulate->add_option("--scheme", o.scheme, "rk4 or difference")
      ->check(CLI::IsMember({"rk4", "difference"}))
      ->capture_default_str();
  simulate->add_option("--t-end", o.t_end, "End time")->capture_default_str();
  simulate->add_option("--step", o.step, "RK4 step")->capture_default_str();
  h_options(simulate);

  auto* riccati = common(app.add_subcommand("riccati", "Matrix Riccati: linearization and difference scheme"));
  riccati->add_option("--t-end", o.t_end, "End time")->capture_default_str();
  riccati->add_option("--step", o.step, "RK4 step")->capture_default_str();
  riccati->add_option("--tol", o.tol, "Agreement tolerance")->capture_default_str();
  h_options(riccati);

  auto* difference = common(app.add_subcommand("difference", "Exact forward-difference iteration"));
  h_options(difference);

  auto* verify = common(app.add_subcommand("verify", "Round-trip and check claimed reductions and symmetries"));

  std::vector<std::string> storage{"superode"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (riccati->parsed() && riccati->count("--t-end") == 0) o.t_end = 0.5;

  try {
    if (reduce->parsed()) return cmd_reduce(o, out);
    if (homog->parsed()) return cmd_homogenize(o, out);
    if (analyze->parsed()) return cmd_analyze(o, out);
    if (series->parsed()) return cmd_series(o, out);
    if (symmetry->parsed()) return cmd_symmetry(o, out);
    if (simulate->parsed()) return cmd_simulate(o, out);
    if (riccati->parsed()) return cmd_riccati(o, out);
    if (difference->parsed()) return cmd_difference(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
  } catch (const DivergenceError& e) {
    err << "superode: " << e.what() << " (last finite state at t=" << e.last_valid_time() << ")\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "superode: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace superode::cli
