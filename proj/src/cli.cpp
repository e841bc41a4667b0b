#include "saddle/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "saddle/errors.hpp"
#include "saddle/predict.hpp"
#include "saddle/random.hpp"
#include "saddle/suites.hpp"

namespace saddle::cli {

namespace fs = std::filesystem;

std::vector<double> EtaRange::values() const {
  std::vector<double> out;
  if (!(step > 0.0) || to < from) return out;
  const auto count = static_cast<long>(std::floor((to - from) / step + 1e-9));
  for (long k = 0; k <= count; ++k) out.push_back(from + static_cast<double>(k) * step);
  return out;
}

namespace {

Vector json_vector(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorKind::Config, std::string(what) + " must be an array");
  Vector v;
  for (const Json& x : j) {
    if (!x.is_number()) throw Error(ErrorKind::Config, std::string(what) + " must contain numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

InitSpec init_from_json(const Json& j, const BilinearGame& game) {
  InitSpec spec;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "random") return spec;
    if (s == "witness") {
      spec.kind = InitKind::Witness;
      return spec;
    }
    throw Error(ErrorKind::Config, "init must be \"random\", \"witness\" or an object");
  }
  if (!j.is_object()) throw Error(ErrorKind::Config, "init must be a string or an object");
  if (j.value("random", false)) {
    spec.at_rest = j.value("at_rest", false);
    return spec;
  }
  spec.kind = InitKind::Explicit;
  if (!j.contains("x0") || !j.contains("y0")) throw Error(ErrorKind::Config, "explicit init needs x0 and y0");
  spec.state = IterateState::at_rest(json_vector(j.at("x0"), "x0"), json_vector(j.at("y0"), "y0"));
  if (j.contains("x_prev")) spec.state.x_prev = json_vector(j.at("x_prev"), "x_prev");
  if (j.contains("y_prev")) spec.state.y_prev = json_vector(j.at("y_prev"), "y_prev");
  if (spec.state.x.size() != game.n() || spec.state.x_prev.size() != game.n() || spec.state.y.size() != game.p() ||
      spec.state.y_prev.size() != game.p())
    throw Error(ErrorKind::Config, "init dimensions do not match the game");
  return spec;
}

std::string eta_tag(double eta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", eta);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Config, "cannot write " + path.string());
  f << content;
}

std::vector<double> etas_of(const Experiment& e) {
  std::vector<double> etas = e.etas;
  if (e.eta_range) {
    const std::vector<double> r = e.eta_range->values();
    etas.insert(etas.end(), r.begin(), r.end());
  }
  return etas;
}

std::string comment_for(const Experiment& e) {
  return e.provenance.empty() ? std::string() : "preset " + e.name + ": " + e.provenance;
}

Json trajectory_json(const Trajectory& traj, const BilinearGame& game, const std::optional<PointLimit>& limit,
                     const std::string& provenance) {
  Json steps = Json::array(), xs = Json::array(), ys = Json::array(), dist = Json::array(), g1 = Json::array(),
       g2 = Json::array();
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const IterateState& s = traj.states[k];
    steps.push_back(traj.steps[k]);
    xs.push_back(s.x);
    ys.push_back(s.y);
    dist.push_back(limit ? Json(norm(concat(s.x - limit->x, s.y - limit->y))) : Json(nullptr));
    const Payoffs p = payoffs(game, s.x, s.y);
    g1.push_back(std::isfinite(p.g1) ? Json(p.g1) : Json(nullptr));
    g2.push_back(std::isfinite(p.g2) ? Json(p.g2) : Json(nullptr));
  }
  return Json{{"provenance", provenance},
              {"algorithm", to_string(traj.algorithm)},
              {"eta", traj.eta},
              {"stop_reason", to_string(traj.stop_reason)},
              {"record_stride", traj.record_stride},
              {"t", steps},
              {"x", xs},
              {"y", ys},
              {"dist_limit", dist},
              {"g1", g1},
              {"g2", g2}};
}

struct SweepRow {
  double eta = 0.0;
  bool applicable = false;
  double fitted = 0.0;
  double closed_form = 0.0;
};

SweepRow sweep_point(const Experiment& e, double eta) {
  SweepRow row;
  row.eta = eta;
  const SpectralReport report = rate_report(e.game, eta, e.algo);
  if (!report.convergent()) return row;
  const IterateState init = make_init(e, eta);
  const LimitPrediction pred = predict_limit(e.game, e.algo, init, eta);
  if (!pred.valid) return row;
  const Trajectory traj = run(e.game, e.algo, eta, init, e.run);
  try {
    row.fitted = estimate_rate(traj, pred.point()).fitted_ratio;
  } catch (const Error&) {
    return row;
  }
  row.closed_form = report.lambda_max;
  row.applicable = true;
  return row;
}

std::vector<Experiment> load_experiments(const Options& options) {
  std::vector<Experiment> out;
  if (options.preset) out = preset(*options.preset);
  if (options.config) {
    std::ifstream f(*options.config);
    if (!f) throw Error(ErrorKind::Config, "cannot open config " + *options.config);
    Json j;
    try {
      j = Json::parse(f);
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorKind::Config, std::string("invalid JSON: ") + ex.what());
    }
    out.push_back(experiment_from_json(j));
  }
  if (options.seed)
    for (Experiment& e : out) e.seed = *options.seed;
  return out;
}

}  // namespace

Experiment experiment_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
    if (!j.contains("game")) throw Error(ErrorKind::Config, "config needs a game");
    Experiment e;
    e.name = j.value("name", std::string("experiment"));
    e.provenance = j.value("provenance", std::string());
    e.game = game_from_json(j.at("game"));
    e.algo = parse_algorithm(j.value("algorithm", std::string("OGDA")));
    if (j.contains("eta")) {
      const Json& eta = j.at("eta");
      if (eta.is_number()) {
        e.etas.push_back(eta.get<double>());
      } else {
        e.etas = json_vector(eta, "eta");
      }
    }
    if (j.contains("eta_range")) {
      const Json& r = j.at("eta_range");
      e.eta_range = EtaRange{r.at("from").get<double>(), r.at("to").get<double>(), r.at("step").get<double>()};
      if (!(e.eta_range->step > 0.0)) throw Error(ErrorKind::Config, "eta_range.step must be positive");
    }
    for (double eta : etas_of(e))
      if (!(eta > 0.0) || !std::isfinite(eta)) throw Error(ErrorKind::Config, "step sizes must be positive");
    if (j.contains("init")) e.init = init_from_json(j.at("init"), e.game);
    e.run.max_steps = j.value("max_steps", e.run.max_steps);
    e.run.stop_tol = j.value("stop_tol", e.run.stop_tol);
    e.run.blow_cap = j.value("blow_cap", e.run.blow_cap);
    e.run.record_stride = j.value("record_stride", e.run.record_stride);
    e.seed = j.value("seed", e.seed);
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::Config, ex.what());
  }
}

std::vector<std::string> preset_names() {
  return {"matching-pennies-ogda", "matching-pennies-gda", "wgan-basic", "wgan-dagger", "diag12-sweep",
          "cooperative-ogda",      "cooperative-dogda"};
}

std::vector<Experiment> preset(const std::string& name) {
  auto explicit_init = [](Vector x0, Vector y0) {
    InitSpec s;
    s.kind = InitKind::Explicit;
    s.state = IterateState::at_rest(std::move(x0), std::move(y0));
    return s;
  };
  Experiment e;
  e.name = name;
  if (name == "matching-pennies-ogda" || name == "matching-pennies-gda") {
    const bool gda = name == "matching-pennies-gda";
    e.provenance = gda ? "matching pennies A=(1), GDA at eta=0.3: |(x,y)|^2 grows by 1+eta^2 per step"
                       : "matching pennies A=(1), OGDA at eta=0.3: converges to (0,0)";
    e.game = BilinearGame::zero_sum(Matrix(1, 1, 1.0));
    e.algo = gda ? Algorithm::GDA : Algorithm::OGDA;
    e.etas = {0.3};
    e.init = explicit_init({1.0}, {1.0});
    e.run.max_steps = gda ? 100 : 2000;
    return {e};
  }
  if (name == "wgan-basic") {
    e.provenance = "linear WGAN: A=-I2, b=v=(3,4), c=0; OGDA at eta=0.3 and eta=0.03";
    e.game = BilinearGame::zero_sum(-Matrix::identity(2), {3.0, 4.0}, {0.0, 0.0});
    e.etas = {0.3, 0.03};
    e.init = explicit_init({0.5, 0.5}, {0.0, 0.0});
    e.run.max_steps = 100000;
    e.run.record_stride = 25;
    return {e};
  }
  if (name == "wgan-dagger") {
    const Matrix A = Matrix::diagonal({1.0, 0.5});
    const Vector b = {-1.0, -0.5};  // A_2^T v with A_2 = -A, v = (1, 1)
    Experiment zs = e;
    zs.name = "wgan-dagger-zero-sum";
    zs.provenance = "linear WGAN A=diag(1,1/2), v=(1,1): zero-sum OGDA at the optimal step";
    zs.game = BilinearGame::zero_sum(A, b, {0.0, 0.0});
    zs.etas = {optimal_eta(0.25, 1.0).eta_star};
    zs.init = explicit_init({0.0, 0.0}, {0.0, 0.0});
    zs.run.max_steps = 20000;
    Experiment acc = zs;
    acc.name = "wgan-dagger-accelerated";
    acc.provenance = "linear WGAN A=diag(1,1/2), v=(1,1): player 2 uses B=-(A^dagger)^T, OGDA at eta=0.49";
    acc.game = accelerate(zs.game);
    acc.etas = {0.49};
    return {zs, acc};
  }
  if (name == "diag12-sweep") {
    e.provenance = "A=diag(1,2): step-size sweep over [0.05, 0.30], closed-form optimum eta=0.2804";
    e.game = BilinearGame::zero_sum(Matrix::diagonal({1.0, 2.0}));
    e.eta_range = EtaRange{0.05, 0.30, 0.005};
    e.run.max_steps = 20000;
    return {e};
  }
  if (name == "cooperative-ogda" || name == "cooperative-dogda") {
    const bool dogda = name == "cooperative-dogda";
    e.provenance = dogda ? "A=B=(1), DOGDA at eta=0.2 from x0=y0=1, x_-1=y_-1=0: converges to (0,0)"
                         : "A=B=(1), OGDA at eta=0.2 from x0=y0=1, x_-1=y_-1=0: both payoffs grow without bound";
    e.game = BilinearGame::general(Matrix(1, 1, 1.0), Matrix(1, 1, 1.0));
    e.algo = dogda ? Algorithm::DOGDA : Algorithm::OGDA;
    e.etas = {0.2};
    InitSpec s = explicit_init({1.0}, {1.0});
    s.state.x_prev = {0.0};
    s.state.y_prev = {0.0};
    e.init = s;
    e.run.max_steps = 5000;
    return {e};
  }
  throw Error(ErrorKind::Config, "unknown preset '" + name + "'");
}

IterateState make_init(const Experiment& e, double eta) {
  switch (e.init.kind) {
    case InitKind::Explicit: return e.init.state;
    case InitKind::Witness: {
      try {
        return tight_witness(e.game, eta);
      } catch (const Error& ex) {
        if (ex.kind() != ErrorKind::DivergentRegime) throw;
        return dominant_witness(e.game, eta);
      }
    }
    case InitKind::Random: break;
  }
  Rng rng(e.seed);
  IterateState s = random_init(rng, e.game.n(), e.game.p());
  if (e.init.at_rest) {
    s.x_prev = s.x;
    s.y_prev = s.y;
  }
  return s;
}

int analyze(const std::vector<Experiment>& experiments, const Options& options, std::ostream& out) {
  Json all = Json::array();
  bool applicable = true;
  for (const Experiment& e : experiments) {
    for (double eta : etas_of(e)) {
      const SpectralReport report = rate_report(e.game, eta, e.algo);
      const LimitPrediction pred = predict_limit(e.game, e.algo, make_init(e, eta), eta);
      applicable = applicable && report.convergent() && pred.valid;
      all.push_back({{"name", e.name}, {"provenance", e.provenance}, {"report", to_json(report)}, {"prediction", to_json(pred)}});
    }
  }
  const std::string text = all.dump(2) + "\n";
  write_file(fs::path(options.out_dir) / "analysis.json", text);
  out << text;
  return applicable ? kOk : kInapplicable;
}

int run(const std::vector<Experiment>& experiments, const Options& options, std::ostream& out) {
  bool diverged = false;
  for (const Experiment& e : experiments) {
    for (double eta : etas_of(e)) {
      const IterateState init = make_init(e, eta);
      const Trajectory traj = run(e.game, e.algo, eta, init, e.run);
      const LimitPrediction pred = predict_limit(e.game, e.algo, init, eta);
      const std::optional<PointLimit> limit = pred.valid ? std::optional<PointLimit>(pred.point()) : std::nullopt;
      const std::string stem = e.name + "_eta" + eta_tag(eta);
      std::ostringstream body;
      if (options.format == "json") {
        body << trajectory_json(traj, e.game, limit, comment_for(e)).dump(1) << '\n';
      } else {
        write_trajectory_csv(body, traj, e.game, limit, comment_for(e));
      }
      const fs::path path = fs::path(options.out_dir) / (stem + (options.format == "json" ? ".json" : ".csv"));
      write_file(path, body.str());
      const OutcomeClass outcome = classify(traj, e.game);
      out << e.name << " eta=" << eta_tag(eta) << " algorithm=" << to_string(e.algo)
          << " stop=" << to_string(traj.stop_reason) << " steps=" << traj.steps.back()
          << " outcome=" << to_string(outcome.kind);
      if (limit) out << " final_dist=" << format_double(norm(concat(traj.final_state().x - limit->x, traj.final_state().y - limit->y)));
      out << " file=" << path.string() << '\n';
      diverged = diverged || traj.stop_reason == StopReason::Diverged;
    }
  }
  return diverged ? kInapplicable : kOk;
}

unsigned worker_count(std::size_t tasks) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SADDLE_LAB_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, tasks)));
}

int sweep(const std::vector<Experiment>& experiments, const Options& options, std::ostream& out) {
  bool any = false;
  for (const Experiment& e : experiments) {
    const std::vector<double> etas = etas_of(e);
    std::vector<SweepRow> rows(etas.size());
    const unsigned workers = worker_count(etas.size());
    std::vector<std::thread> pool;
    // Static interleaved partition; each row is written by exactly one worker.
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < etas.size(); k += workers) rows[k] = sweep_point(e, etas[k]);
      });
    for (std::thread& t : pool) t.join();

    std::size_t best = rows.size();
    for (std::size_t k = 0; k < rows.size(); ++k)
      if (rows[k].applicable && (best == rows.size() || rows[k].fitted < rows[best].fitted)) best = k;
    if (best == rows.size()) continue;
    any = true;

    std::ostringstream body;
    if (options.format == "json") {
      Json arr = Json::array();
      for (std::size_t k = 0; k < rows.size(); ++k)
        if (rows[k].applicable)
          arr.push_back({{"eta", rows[k].eta},
                         {"fitted_ratio", rows[k].fitted},
                         {"lambda_max_closed_form", rows[k].closed_form},
                         {"argmin", k == best}});
      body << Json{{"provenance", comment_for(e)}, {"rows", arr}, {"argmin_eta", rows[best].eta}}.dump(2) << '\n';
    } else {
      if (!e.provenance.empty()) body << "# " << comment_for(e) << '\n';
      body << "eta,fitted_ratio,lambda_max_closed_form,argmin\n";
      for (std::size_t k = 0; k < rows.size(); ++k)
        if (rows[k].applicable)
          body << format_double(rows[k].eta) << ',' << format_double(rows[k].fitted) << ','
               << format_double(rows[k].closed_form) << ',' << (k == best ? 1 : 0) << '\n';
    }
    const fs::path path = fs::path(options.out_dir) / (e.name + "_sweep." + (options.format == "json" ? "json" : "csv"));
    write_file(path, body.str());
    out << e.name << " argmin_eta=" << format_double(rows[best].eta) << " fitted=" << format_double(rows[best].fitted)
        << " file=" << path.string() << '\n';
  }
  if (!any) {
    out << "no step size in the requested range is covered by a convergence result\n";
    return kConfigError;
  }
  return kOk;
}

int verify(const std::vector<Experiment>& experiments, const Options& options, std::ostream& out) {
  SuiteOptions suite;
  suite.seed = options.seed.value_or(1);
  VerificationReport report = run_property_suites(suite);
  for (const Experiment& e : experiments) {
    for (double eta : etas_of(e)) {
      const std::string tag = e.name + "@" + format_double(eta);
      const OracleReport o = oracle_reconcile(e.game, eta);
      report.add(tag + ".oracle", o.sizes_match && o.max_distance <= 1e-7, o.max_distance, 1e-7);
      const SpectralReport r = rate_report(e.game, eta, e.algo);
      const IterateState init = make_init(e, eta);
      const LimitPrediction pred = predict_limit(e.game, e.algo, init, eta);
      if (!r.convergent() || !pred.valid) continue;
      const Trajectory traj = run(e.game, e.algo, eta, init, e.run);
      const double dist = norm(concat(traj.final_state().x - pred.x_inf, traj.final_state().y - pred.y_inf));
      const double tol = std::max(1e-8, 1e-6 * norm(init.stacked()));
      report.add(tag + ".limit", dist <= tol, dist, tol);
      if (r.C && e.algo == Algorithm::OGDA) {
        const BoundCheck b = check_bound(traj, r, distance_to_nash(e.game, init), pred.point());
        report.add(tag + ".bound", b.holds, b.worst_ratio, 1.0);
      }
    }
  }
  for (const CheckResult& c : report.checks)
    out << (c.pass ? "PASS " : "FAIL ") << c.name << " measured=" << format_double(c.measured)
        << " tolerance=" << format_double(c.tolerance) << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
  write_file(fs::path(options.out_dir) / "verification.json", to_json(report).dump(2) + "\n");
  return report.all_pass() ? kOk : kVerificationFailure;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimistic gradient dynamics on bilinear games: closed-form rates, limits and checks"};
  app.require_subcommand(1);
  Options options;
  std::string config, preset_name;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config, "experiment config (JSON)");
    sub->add_option("--preset", preset_name, "built-in experiment")->check(CLI::IsMember(preset_names()));
    sub->add_option("--out-dir", options.out_dir, "output directory");
    sub->add_option("--seed", seed, "seed for random initializations and property suites");
    sub->add_option("--format", options.format, "output format")->check(CLI::IsMember({"csv", "json"}));
  };
  CLI::App* a = app.add_subcommand("analyze", "closed-form rate report and limit prediction");
  CLI::App* r = app.add_subcommand("run", "simulate and write trajectories");
  CLI::App* s = app.add_subcommand("sweep", "fit the empirical rate over a step-size range");
  CLI::App* v = app.add_subcommand("verify", "run the property suites and per-config checks");
  for (CLI::App* sub : {a, r, s, v}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, errs;
    const int code = app.exit(e, o, errs);
    out << o.str();
    err << errs.str();
    return code == 0 ? kOk : kConfigError;
  }
  const CLI::App* chosen = app.get_subcommands().front();
  options.command = chosen->get_name();
  if (!config.empty()) options.config = config;
  if (!preset_name.empty()) options.preset = preset_name;
  if (chosen->count("--seed") > 0) options.seed = seed;

  try {
    const std::vector<Experiment> experiments = load_experiments(options);
    if (experiments.empty() && options.command != "verify") {
      err << "error: " << options.command << " needs --config or --preset\n";
      return kConfigError;
    }
    if (options.command == "analyze") return analyze(experiments, options, out);
    if (options.command == "run") return run(experiments, options, out);
    if (options.command == "sweep") return sweep(experiments, options, out);
    return verify(experiments, options, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.kind() == ErrorKind::Config || e.kind() == ErrorKind::DimensionMismatch || e.kind() == ErrorKind::NonFinite)
      return kConfigError;
    return kInapplicable;
  }
}

}  // namespace saddle::cli
