#include "diracnn/driver.hpp"

#include "diracnn/hydrogen.hpp"
#include "diracnn/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace diracnn {

std::string state_label(int n, int kappa) {
  static const char letters[] = "spdfghiklmnoqrtuv";
  const int l = orbital_l(kappa);
  const char letter =
      l < static_cast<int>(sizeof(letters) - 1) ? letters[l] : '?';
  std::ostringstream out;
  out << n << letter << (2 * std::abs(kappa) - 1) << "/2";
  return out.str();
}

int expected_nodes(int n, int kappa, bool principal) {
  return principal ? n - 1 - orbital_l(kappa) : n - 1;
}

std::vector<Level> kappa_levels(const DiracOperator &op, double cutoff) {
  const double floor = op.potentials().sum.minCoeff();
  const double shift = floor - 0.05 * std::abs(floor) - 1e-3;
  std::vector<Level> out;
  if (!(cutoff > shift)) {
    return out;
  }
  int n = 0;
  for (EigenPair &p : levels_below(op, shift, cutoff)) {
    out.push_back({op.kappa(), ++n, std::move(p)});
  }
  return out;
}

double fermi_energy(std::vector<Level> levels, int particles) {
  if (particles < 1) {
    throw std::invalid_argument("fermi_energy: need at least one particle");
  }
  std::sort(levels.begin(), levels.end(), [](const Level &a, const Level &b) {
    return a.pair.energy < b.pair.energy;
  });
  int filled = 0;
  for (const Level &l : levels) {
    filled += 2 * std::abs(l.kappa);
    if (filled >= particles) {
      return l.pair.energy;
    }
  }
  throw std::runtime_error("not enough bound levels to hold " +
                           std::to_string(particles) + " particles");
}

double auto_shift(const std::vector<Level> &same_kappa, std::size_t index) {
  const double e = same_kappa.at(index).pair.energy;
  double offset = 0.05 * std::abs(e);
  if (index > 0) {
    offset = std::min(offset, 0.1 * (e - same_kappa[index - 1].pair.energy));
  }
  return e - offset;
}

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

// "2p3/2" -> "2p3_2", usable in file names
std::string file_stem(std::string label) {
  std::replace(label.begin(), label.end(), '/', '_');
  return label;
}

void log(const RunContext &ctx, const std::string &msg) {
  if (ctx.log) {
    ctx.log(msg);
  }
}

double relative_error(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

void write_text(const fs::path &path, const std::function<void(std::ostream &)> &body) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  body(out);
}

json finish(const RunContext &ctx, const std::string &command, json rows) {
  json doc;
  doc["command"] = command;
  doc["config"] = ctx.config.to_json();
  doc["states"] = std::move(rows);
  fs::create_directories(ctx.out_dir);
  write_text(ctx.out_dir / "energies.json",
             [&](std::ostream &out) { out << doc.dump(2) << '\n'; });
  return doc;
}

// Everything known about one requested state before training.
struct Target {
  int kappa = -1;
  int n = 1;
  double box = 0.0;
  std::string label;
  std::optional<double> published;
};

class System {
public:
  System(const RunConfig &cfg, double box)
      : cfg_(cfg), mesh_(cfg.mesh.build(box)),
        potentials_(eval_potentials(cfg.system.spec(), mesh_)) {}

  const RadialMesh &mesh() const { return mesh_; }

  const DiracOperator &op(int kappa) {
    auto it = ops_.find(kappa);
    if (it == ops_.end()) {
      it = ops_.emplace(kappa, DiracOperator(mesh_, potentials_, kappa,
                                             cfg_.system.units()))
               .first;
    }
    return it->second;
  }

  // Oracle levels of a kappa block up to `cutoff`, cached per cutoff.
  const std::vector<Level> &levels(int kappa, double cutoff) {
    auto key = std::make_pair(kappa, cutoff);
    auto it = levels_.find(key);
    if (it == levels_.end()) {
      it = levels_.emplace(key, kappa_levels(op(kappa), cutoff)).first;
    }
    return it->second;
  }

  // Oracle level with the requested node count, found near `guess` for
  // Coulomb and by scanning the bound spectrum otherwise.
  std::vector<Level> block_through(int kappa, int n) {
    const bool coulomb = cfg_.system.coulomb();
    if (coulomb) {
      std::vector<Level> out;
      const int lowest = orbital_l(kappa) + 1;
      for (int m = lowest; m <= n; ++m) {
        const double exact = hydrogen_energy(m, kappa, cfg_.system.charge,
                                             cfg_.system.speed_of_light);
        const auto pairs = shift_invert_eigs(op(kappa), exact * (1.0 + 1e-3), 1);
        out.push_back({kappa, m - lowest + 1, pairs.at(0)});
      }
      return out;
    }
    const std::vector<Level> &all = levels(kappa, 0.0);
    if (static_cast<int>(all.size()) < n) {
      throw std::runtime_error("kappa = " + std::to_string(kappa) + " has only " +
                               std::to_string(all.size()) +
                               " bound levels in this box; n = " +
                               std::to_string(n) + " requested");
    }
    return {all.begin(), all.begin() + n};
  }

private:
  const RunConfig &cfg_;
  RadialMesh mesh_;
  Potentials potentials_;
  std::map<int, DiracOperator> ops_;
  std::map<std::pair<int, double>, std::vector<Level>> levels_;
};

std::optional<RadialSpinor> analytic_reference(const RunConfig &cfg, int n,
                                               int kappa,
                                               const RadialMesh &mesh) {
  if (!cfg.system.coulomb()) {
    return std::nullopt;
  }
  return hydrogen_wavefunction(n, kappa, cfg.system.charge,
                               cfg.system.speed_of_light, mesh);
}

void check_bracket(const std::vector<Level> &block, double shift,
                   const std::string &label) {
  const double target = block.back().pair.energy;
  const double below =
      block.size() > 1 ? block[block.size() - 2].pair.energy : -INFINITY;
  if (!(shift < target && shift > below)) {
    std::ostringstream msg;
    msg << "inversion point " << shift << " for " << label
        << " must lie between the next lower level (" << below
        << ") and the target level (" << target << ")";
    throw ConfigError(msg.str());
  }
}

void write_state_files(const RunContext &ctx, const std::string &stem,
                       const RadialMesh &mesh, const SolveResult &result,
                       const std::optional<RadialSpinor> &reference) {
  const OutputSection &o = ctx.config.output;
  fs::create_directories(ctx.out_dir);
  if (o.wavefunctions) {
    write_text(ctx.out_dir / ("wavefunction_" + stem + ".csv"),
               [&](std::ostream &out) {
                 write_wavefunction_csv(mesh, result.spinor, reference, out);
               });
  }
  if (o.traces) {
    write_text(ctx.out_dir / ("trace_" + stem + ".csv"),
               [&](std::ostream &out) { write_trace_csv(result.trace, out); });
  }
  if (o.checkpoints) {
    write_text(ctx.out_dir / ("params_" + stem + ".txt"),
               [&](std::ostream &out) { save_params(result.params, out); });
  }
}

json result_row(const std::string &label, int n, int kappa,
                const std::string &method, double shift,
                const SolveResult &r) {
  json row;
  row["state"] = label;
  row["n"] = n;
  row["kappa"] = kappa;
  row["method"] = method;
  row["epsilon"] = r.energy;
  row["shift"] = shift;
  row["epochs"] = r.epochs;
  row["seconds_per_epoch"] = r.seconds_per_epoch;
  row["stop"] = to_string(r.stop);
  row["nodes"] = r.nodes;
  return row;
}

SolveResult train_logged(const RunContext &ctx, const SolveConfig &cfg,
                         const DiracOperator &op, const std::string &what) {
  log(ctx, "training " + what + " (" + to_string(cfg.method) + ", shift " +
               std::to_string(cfg.shift) + ")");
  const int every = std::max(1, cfg.max_epochs / 20);
  SolveResult r = train_state(cfg, op, [&](const TraceEntry &e) {
    if (e.epoch % every == 0) {
      std::ostringstream msg;
      msg.precision(12);
      msg << "  " << what << " epoch " << e.epoch << " epsilon " << e.energy;
      log(ctx, msg.str());
    }
    return true;
  });
  std::ostringstream msg;
  msg.precision(12);
  msg << "  " << what << ": epsilon " << r.energy << " after " << r.epochs
      << " epochs (" << to_string(r.stop) << ")";
  log(ctx, msg.str());
  return r;
}

std::vector<Target> targets(const RunConfig &cfg) {
  const SystemSection &sys = cfg.system;
  const std::size_t count = sys.n.size();
  if (sys.kappa.size() != 1 && sys.kappa.size() != count) {
    throw ConfigError("system.kappa needs one value or one per entry of system.n");
  }
  std::vector<Target> out;
  for (std::size_t i = 0; i < count; ++i) {
    Target t;
    t.kappa = sys.kappa.size() == 1 ? sys.kappa[0] : sys.kappa[i];
    t.n = sys.n[i];
    t.box = cfg.box(i);
    if (sys.coulomb()) {
      try {
        validate_hydrogen(t.n, t.kappa, sys.charge, sys.speed_of_light);
      } catch (const std::invalid_argument &e) {
        throw ConfigError(e.what());
      }
    }
    t.label = state_label(t.n, t.kappa);
    if (!sys.reference.empty()) {
      t.published = sys.reference[i];
    }
    out.push_back(t);
  }
  return out;
}

int block_index(const RunConfig &cfg, const Target &t) {
  // position of the state inside its kappa block, 1 = lowest
  return cfg.system.coulomb() ? t.n - orbital_l(t.kappa) : t.n;
}

} // namespace

json run_solve(const RunContext &ctx) {
  const RunConfig &cfg = ctx.config;
  const std::vector<Target> list = targets(cfg);
  std::map<double, std::unique_ptr<System>> systems;
  // trained states per (box, kappa), reused by the orthonormal chain
  std::map<std::pair<double, int>, std::vector<SolveResult>> chains;
  json rows = json::array();

  for (std::size_t i = 0; i < list.size(); ++i) {
    const Target &t = list[i];
    auto &sys = systems[t.box];
    if (!sys) {
      sys = std::make_unique<System>(cfg, t.box);
    }
    const DiracOperator &op = sys->op(t.kappa);
    const int index = block_index(cfg, t);
    const std::vector<Level> block = sys->block_through(t.kappa, index);
    const double oracle = block.back().pair.energy;
    const auto reference = analytic_reference(cfg, t.n, t.kappa, sys->mesh());
    const double exact =
        cfg.system.coulomb()
            ? hydrogen_energy(t.n, t.kappa, cfg.system.charge, cfg.system.speed_of_light)
            : oracle;

    SolveResult result;
    double shift = 0.0;
    std::string method = to_string(cfg.training.method);
    if (cfg.training.method == Method::orthonormal && index > 1) {
      auto &chain = chains[{t.box, t.kappa}];
      if (chain.empty()) {
        SolveConfig ground = cfg.solve_config(auto_shift(block, 0));
        ground.method = Method::inverse;
        chain.push_back(train_logged(ctx, ground, op, state_label(block[0].n + orbital_l(t.kappa) * cfg.system.coulomb(), t.kappa) + " (lowest)"));
      }
      const double base = chain.front().energy;
      shift = base - 0.02 * std::abs(base);
      while (static_cast<int>(chain.size()) < index) {
        SolveConfig next = cfg.solve_config(shift);
        for (const SolveResult &r : chain) {
          next.lower_states.push_back(r.spinor);
        }
        chain.push_back(train_logged(
            ctx, next, op,
            t.label + " chain step " + std::to_string(chain.size() + 1)));
      }
      result = chain.at(static_cast<std::size_t>(index - 1));
    } else {
      shift = cfg.shift(i).value_or(auto_shift(block, block.size() - 1));
      SolveConfig sc = cfg.solve_config(shift);
      if (sc.method == Method::orthonormal) {
        sc.method = Method::inverse; // the lowest state of a block
        method = "inverse";
      }
      if (sc.method != Method::direct) {
        check_bracket(block, shift, t.label);
      }
      result = train_logged(ctx, sc, op, t.label);
    }

    json row = result_row(t.label, t.n, t.kappa, method, shift, result);
    row["box"] = t.box;
    row["reference"] = exact;
    row["reference_kind"] = cfg.system.coulomb() ? "analytic" : "oracle";
    row["relative_error"] = relative_error(result.energy, exact);
    row["oracle"] = oracle;
    row["expected_nodes"] = expected_nodes(t.n, t.kappa, cfg.system.coulomb());
    if (t.published) {
      row["published"] = *t.published;
      row["relative_error_published"] = relative_error(result.energy, *t.published);
    }
    const std::optional<RadialSpinor> ref =
        reference ? reference : std::optional<RadialSpinor>(block.back().pair.state);
    write_state_files(ctx, file_stem(t.label) + "_" + std::to_string(i), sys->mesh(),
                      result, ref);
    rows.push_back(std::move(row));
  }
  return finish(ctx, "solve", std::move(rows));
}

json run_spectrum(const RunContext &ctx) {
  const RunConfig &cfg = ctx.config;
  const double box = cfg.mesh.box.at(0);
  System sys(cfg, box);

  double cutoff = 0.0;
  if (cfg.system.fermi_energy) {
    cutoff = *cfg.system.fermi_energy;
  } else if (cfg.system.coulomb()) {
    throw ConfigError("spectrum for a Coulomb system needs system.fermi_energy");
  } else {
    std::vector<Level> all;
    for (int k = -cfg.system.max_kappa; k <= cfg.system.max_kappa; ++k) {
      if (k == 0) {
        continue;
      }
      const auto &lv = sys.levels(k, 0.0);
      all.insert(all.end(), lv.begin(), lv.end());
    }
    cutoff = fermi_energy(all, cfg.system.woods_saxon.neutrons);
    std::ostringstream msg;
    msg.precision(10);
    msg << "Fermi energy " << cutoff;
    log(ctx, msg.str());
  }
  // include the Fermi level itself
  const double limit = cutoff + 1e-9 * std::max(1.0, std::abs(cutoff));

  json rows = json::array();
  for (int kappa : cfg.system.kappa) {
    const std::vector<Level> levels = sys.levels(kappa, limit);
    const int l = orbital_l(kappa);
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const Level &lv = levels[k];
      const int n = cfg.system.coulomb() ? lv.n + l : lv.n;
      const std::string label = state_label(n, kappa);
      const double shift = auto_shift(levels, k);
      SolveConfig sc = cfg.solve_config(shift);
      sc.method = Method::inverse;
      const SolveResult r = train_logged(ctx, sc, sys.op(kappa), label);
      json row = result_row(label, n, kappa, "inverse", shift, r);
      row["oracle"] = lv.pair.energy;
      row["relative_error"] = relative_error(r.energy, lv.pair.energy);
      row["expected_nodes"] = expected_nodes(n, kappa, cfg.system.coulomb());
      row["degeneracy"] = 2 * std::abs(kappa);
      write_state_files(ctx, file_stem(label), sys.mesh(), r, lv.pair.state);
      rows.push_back(std::move(row));
    }
  }
  json doc = finish(ctx, "spectrum", std::move(rows));
  doc["fermi_energy"] = cutoff;
  write_text(ctx.out_dir / "energies.json",
             [&](std::ostream &out) { out << doc.dump(2) << '\n'; });
  return doc;
}

json run_benchmark(const RunContext &ctx) {
  const RunConfig &cfg = ctx.config;
  const std::vector<Target> list = targets(cfg);
  std::map<double, std::unique_ptr<System>> systems;
  json rows = json::array();
  for (const Target &t : list) {
    auto &sys = systems[t.box];
    if (!sys) {
      sys = std::make_unique<System>(cfg, t.box);
    }
    const auto start = std::chrono::steady_clock::now();
    const std::vector<Level> block = sys->block_through(t.kappa, block_index(cfg, t));
    const EigenPair &p = block.back().pair;
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json row;
    row["state"] = t.label;
    row["n"] = t.n;
    row["kappa"] = t.kappa;
    row["box"] = t.box;
    row["method"] = "oracle";
    row["epsilon"] = p.energy;
    row["residual"] = p.residual;
    row["nodes"] = count_nodes(p.state.F);
    row["expected_nodes"] = expected_nodes(t.n, t.kappa, cfg.system.coulomb());
    row["seconds"] = seconds;
    if (cfg.system.coulomb()) {
      const double exact =
          hydrogen_energy(t.n, t.kappa, cfg.system.charge, cfg.system.speed_of_light);
      row["analytic"] = exact;
      row["relative_error"] = relative_error(p.energy, exact);
    }
    if (t.published) {
      row["published"] = *t.published;
      row["relative_error_published"] = relative_error(p.energy, *t.published);
    }
    if (cfg.output.wavefunctions) {
      fs::create_directories(ctx.out_dir);
      write_text(ctx.out_dir / ("wavefunction_" + file_stem(t.label) + "_oracle.csv"),
                 [&](std::ostream &out) {
                   write_wavefunction_csv(
                       sys->mesh(), p.state,
                       analytic_reference(cfg, t.n, t.kappa, sys->mesh()), out);
                 });
    }
    log(ctx, t.label + " oracle " + std::to_string(p.energy));
    rows.push_back(std::move(row));
  }
  return finish(ctx, "benchmark", std::move(rows));
}

json run_ablation(const RunContext &ctx) {
  const RunConfig &cfg = ctx.config;
  if (!cfg.system.coulomb()) {
    throw ConfigError("ablation compares against analytic hydrogen; use potential = coulomb");
  }
  const Target t = targets(cfg).at(0);
  System sys(cfg, t.box);
  const DiracOperator &op = sys.op(t.kappa);
  const std::vector<Level> block = sys.block_through(t.kappa, block_index(cfg, t));
  const double shift = cfg.shift(0).value_or(auto_shift(block, block.size() - 1));
  const RadialSpinor exact = *analytic_reference(cfg, t.n, t.kappa, sys.mesh());
  const double exact_energy =
      hydrogen_energy(t.n, t.kappa, cfg.system.charge, cfg.system.speed_of_light);

  struct Experiment {
    std::string name;
    Method method;
    Architecture architecture;
    TrialForm trial;
  };
  const Experiment experiments[] = {
      {"inverse_fully_connected", Method::inverse, Architecture::fully_connected,
       TrialForm::reduced},
      {"inverse_split", Method::inverse, Architecture::split_two_head,
       TrialForm::reduced},
      {"inverse_large_direct", Method::inverse, Architecture::fully_connected,
       TrialForm::large_direct},
      {"direct_split", Method::direct, Architecture::split_two_head,
       TrialForm::reduced},
      {"direct_fully_connected", Method::direct, Architecture::fully_connected,
       TrialForm::reduced},
  };

  json rows = json::array();
  for (const Experiment &e : experiments) {
    SolveConfig sc = cfg.solve_config(e.method == Method::direct ? exact_energy : shift);
    sc.method = e.method;
    sc.architecture = e.architecture;
    sc.trial = e.trial;
    SolveResult r;
    std::string failure;
    try {
      r = train_logged(ctx, sc, op, e.name);
    } catch (const DiracSeaEntry &err) {
      failure = err.what();
    }
    json row;
    row["experiment"] = e.name;
    row["state"] = t.label;
    row["method"] = to_string(e.method);
    row["architecture"] = to_string(e.architecture);
    row["trial"] = to_string(e.trial);
    if (!failure.empty()) {
      row["error"] = failure;
      rows.push_back(std::move(row));
      continue;
    }
    double lowest = INFINITY;
    for (const TraceEntry &te : r.trace) {
      lowest = std::min(lowest, te.energy);
    }
    row["epsilon"] = r.energy;
    row["lowest_epsilon"] = lowest;
    row["shift"] = sc.shift;
    row["epochs"] = r.epochs;
    row["stop"] = to_string(r.stop);
    row["sea_threshold"] = exact_energy - 2.0 * op.units().rest_energy;
    if (r.stop != StopReason::collapsed) {
      const Comparison cmp = export_comparison(r.spinor, exact, sys.mesh());
      row["relative_error"] = relative_error(r.energy, exact_energy);
      row["max_error_F"] = cmp.error_F.maxCoeff();
      row["max_error_G"] = cmp.error_G.maxCoeff();
      row["G_first_point"] = std::abs(cmp.aligned.G[0]);
      row["G_first_point_analytic"] = std::abs(exact.G[0]);
    }
    write_state_files(ctx, e.name, sys.mesh(), r,
                      r.stop == StopReason::collapsed ? std::nullopt
                                                      : std::optional(exact));
    rows.push_back(std::move(row));
  }
  return finish(ctx, "ablation", std::move(rows));
}

} // namespace diracnn
