// Copyright 2026 The gatenet Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gatenet/error.hpp"
#include "gatenet/model/models.hpp"
#include "gatenet/nn/checkpoint.hpp"
#include "gatenet/ode/metrics.hpp"
#include "gatenet/ode/neural_ode.hpp"
#include "gatenet/parallel.hpp"
#include "gatenet/sim/dataset.hpp"
#include "gatenet/sim/integrators.hpp"
#include "gatenet/train/trainer.hpp"
#include "run_config.hpp"
#include "svg.hpp"

namespace gatenet::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// ---------------------------------------------------------------------------
// Flag plumbing. Every flag is stored in a temporary and applied on top of
// the defaults (or the --config file) only when it was given.

struct FlagSet {
  std::vector<std::function<void(RunConfig&)>> apply;
  std::string config_path;

  template <typename T, typename Set>
  void add(CLI::App* app, const std::string& name, const std::string& help, Set set) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app->add_option(name, *value, help);
    apply.push_back([opt, value, set](RunConfig& c) {
      if (opt->count() > 0) set(c, *value);
    });
  }
};

void add_flags(CLI::App* app, FlagSet& f) {
  app->add_option("--config", f.config_path, "RunConfig JSON file (flags override it)");
  f.add<std::string>(app, "--model", "model key: hh1952 | tnnp2004",
                     [](RunConfig& c, const std::string& v) { c.model = v; });
  f.add<std::string>(app, "--variant", "tnnp2004 cell type: epi | endo | mcell",
                     [](RunConfig& c, const std::string& v) { c.variant = v; });
  f.add<std::string>(app, "--scenario", "control | long_qt | short_qt | ito",
                     [](RunConfig& c, const std::string& v) { c.scenario = v; });
  f.add<double>(app, "--cl-min", "shortest cycle length (ms)",
                [](RunConfig& c, double v) { c.cl_min = v; });
  f.add<double>(app, "--cl-max", "longest cycle length (ms)",
                [](RunConfig& c, double v) { c.cl_max = v; });
  f.add<double>(app, "--cl-step", "cycle-length increment (ms)",
                [](RunConfig& c, double v) { c.cl_step = v; });
  f.add<double>(app, "--duration", "simulated time per segment (ms)",
                [](RunConfig& c, double v) { c.duration = v; });
  f.add<double>(app, "--discard", "initial transient dropped (ms)",
                [](RunConfig& c, double v) { c.discard = v; });
  f.add<double>(app, "--dt-inner", "integrator step (ms)",
                [](RunConfig& c, double v) { c.dt_inner = v; });
  f.add<double>(app, "--dt", "sampling step (ms)", [](RunConfig& c, double v) { c.dt = v; });
  f.add<double>(app, "--train-fraction", "fraction of segments used for training",
                [](RunConfig& c, double v) { c.train_fraction = v; });
  f.add<std::uint64_t>(app, "--seed", "random seed (split and initialization)",
                       [](RunConfig& c, std::uint64_t v) { c.seed = v; });
  f.add<std::size_t>(app, "--threads", "worker threads (0 = hardware)",
                     [](RunConfig& c, std::size_t v) { c.threads = v; });
  f.add<double>(app, "--lambda", "weight-regularization factor",
                [](RunConfig& c, double v) { c.train.lambda = v; });
  f.add<double>(app, "--eta", "gate-drift penalty factor",
                [](RunConfig& c, double v) { c.train.eta = v; });
  f.add<double>(app, "--lr", "Adam learning rate",
                [](RunConfig& c, double v) { c.train.learning_rate = v; });
  f.add<int>(app, "--epochs", "training epochs", [](RunConfig& c, int v) { c.train.epochs = v; });
  f.add<std::size_t>(app, "--bptt-window", "truncated BPTT window (steps)",
                     [](RunConfig& c, std::size_t v) { c.train.bptt_window = v; });
  f.add<std::size_t>(app, "--warmup", "forward-only steps at each segment start",
                     [](RunConfig& c, std::size_t v) { c.train.warmup_steps = v; });
  f.add<std::vector<std::string>>(app, "--freeze", "frozen components",
                                  [](RunConfig& c, const std::vector<std::string>& v) {
                                    c.train.freeze = {v.begin(), v.end()};
                                  });
  f.add<std::vector<double>>(app, "--etas", "eta grid for sweep-eta",
                             [](RunConfig& c, const std::vector<double>& v) { c.etas = v; });
  f.add<double>(app, "--eval-cl", "evaluation cycle length (ms)",
                [](RunConfig& c, double v) { c.eval_cycle_length = v; });
  f.add<double>(app, "--eval-duration", "recorded evaluation time (ms)",
                [](RunConfig& c, double v) { c.eval_duration = v; });
  f.add<double>(app, "--eval-pacing", "host pacing before evaluation (ms)",
                [](RunConfig& c, double v) { c.eval_pacing = v; });
  f.add<std::size_t>(app, "--beats", "beats averaged in the metrics",
                     [](RunConfig& c, std::size_t v) { c.eval_beats = v; });
  f.add<std::string>(app, "-o,--output", "output directory",
                     [](RunConfig& c, const std::string& v) { c.output = v; });
  f.add<std::string>(app, "--dataset", "dataset directory",
                     [](RunConfig& c, const std::string& v) { c.dataset = v; });
  f.add<std::string>(app, "--checkpoint", "network checkpoint",
                     [](RunConfig& c, const std::string& v) { c.checkpoint = v; });
  f.add<std::string>(app, "--control", "control checkpoint (evaluate)",
                     [](RunConfig& c, const std::string& v) { c.control = v; });
  f.add<std::string>(app, "--perturbed", "perturbed checkpoint (evaluate)",
                     [](RunConfig& c, const std::string& v) { c.perturbed = v; });
}

RunConfig resolve(const std::string& command, const FlagSet& f) {
  RunConfig c = f.config_path.empty() ? default_config(command)
                                      : load_run_config(f.config_path, command);
  c.command = command;
  for (const auto& a : f.apply) a(c);
  if (c.output.empty()) {
    const char* root = std::getenv(kOutputRootEnv);
    c.output = fs::path(root && *root ? root : "runs") / command;
  }
  c.train.seed = c.seed;
  c.train.threads = c.threads;
  c.validate();
  return c;
}

// ---------------------------------------------------------------------------
// Shared helpers.

model::IonicModel host_model(const RunConfig& c) {
  model::ModelOptions opts;
  if (c.model == "tnnp2004") opts.variant = model::parse_tnnp_variant(c.variant);
  auto m = model::make_model(c.model, opts);
  if (c.scenario != "control") m = model::with_perturbation(m, model::parse_scenario(c.scenario));
  return m;
}

void require(const fs::path& p, const char* what) {
  if (p.empty()) throw UsageError(std::string("--") + what + " is required");
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path.string());
  os << j.dump(2) << '\n';
  if (!os) throw DataError("error writing " + path.string());
}

std::string fmt(double x, int prec = 4) {
  std::ostringstream os;
  os << std::setprecision(prec) << x;
  return os.str();
}

json loss_json(const train::LossTerms& t, train::LossKind kind) {
  if (kind == train::LossKind::kFirstPass) {
    return {{"n1", t.term1}, {"n2", t.term2}, {"reg", t.reg}, {"total", t.total}};
  }
  return {{"data", t.term1}, {"drift", t.term2}, {"reg", t.reg}, {"total", t.total}};
}

// Runs one training pass into `dir`: per-epoch checkpoints, CSV log,
// loss plot, final checkpoint.
train::TrainResult train_into(const fs::path& dir, std::ostream& out, train::LossKind kind,
                              const std::function<train::TrainResult(const train::TrainCallbacks&)>& go) {
  fs::create_directories(dir / "checkpoints");
  std::vector<std::vector<double>> rows;
  train::TrainCallbacks cb;
  cb.on_epoch = [&](const train::EpochRecord& e, const nn::NetworkParams& p) {
    std::ostringstream name;
    name << "epoch_" << std::setw(4) << std::setfill('0') << e.epoch << ".json";
    nn::save_checkpoint(dir / "checkpoints" / name.str(), p);
    rows.push_back({static_cast<double>(e.epoch), e.train.term1, e.train.term2, e.train.reg,
                    e.train.total, e.val_total});
    sim::write_table_csv(dir / "loss_log.csv",
                         {"epoch", "n1_or_data", "n2_or_drift", "reg", "total", "val_total"}, rows);
    out << "epoch " << e.epoch << ": train " << fmt(e.train.total) << " val " << fmt(e.val_total)
        << '\n';
  };
  train::TrainResult r;
  try {
    r = go(cb);
  } catch (const train::TrainingDivergedError& e) {
    nn::save_checkpoint(dir / "checkpoint_last_good.json", e.last_good());
    out << "training diverged in epoch " << e.epoch() << "; last good parameters in "
        << (dir / "checkpoint_last_good.json").string() << '\n';
    throw;
  }
  nn::save_checkpoint(dir / "checkpoint.json", r.params);

  std::vector<Series> s(2);
  s[0].label = "train";
  s[1].label = "validation";
  for (const auto& row : rows) {
    s[0].x.push_back(row[0]);
    s[0].y.push_back(std::log10(std::max(row[4], 1e-300)));
    s[1].x.push_back(row[0]);
    s[1].y.push_back(std::log10(std::max(row[5], 1e-300)));
  }
  write_line_plot(dir / "loss.svg",
                  {kind == train::LossKind::kFirstPass ? "First-pass loss" : "Retraining loss",
                   "epoch", "log10 loss"},
                  s);
  return r;
}

sim::Dataset load_checked_dataset(const RunConfig& c) {
  require(c.dataset, "dataset");
  auto ds = sim::load_dataset(c.dataset);
  if (ds.model_key != c.model) {
    throw DataError("dataset was generated with model " + ds.model_key + ", config says " + c.model);
  }
  return ds;
}

struct Evaluation {
  sim::Trajectory trajectory;
  ode::CurrentSeries currents;
  std::optional<ode::ApMetrics> metrics;  // empty when no complete beat was found
  std::string metrics_error;
};

void compute_metrics(Evaluation& e, const RunConfig& c) {
  try {
    e.metrics = ode::ap_metrics(e.trajectory, "V", "Ca_i", c.eval_beats);
  } catch (const DataError& ex) {
    e.metrics_error = ex.what();
  }
}

// Outputs are written before this is called so that a trace without a
// usable beat can still be inspected.
void require_metrics(const Evaluation& e, const std::string& what) {
  if (!e.metrics) throw DataError(what + ": " + e.metrics_error);
}

Evaluation evaluate_network(const RunConfig& c, const fs::path& checkpoint) {
  const auto params = nn::load_checkpoint(checkpoint);
  const auto host = host_model(c);
  nn::check_compatible(params, host);
  const ode::NeuralOde node(params, host);
  const auto protocol = sim::default_protocol(c.model, c.eval_cycle_length,
                                              std::max(c.eval_cycle_length, c.eval_duration));
  const auto init = ode::paced_initial_state(host, protocol, c.eval_pacing, c.dt_inner);
  Evaluation e;
  e.trajectory = ode::integrate_neural_ode(node, protocol, c.eval_duration, {c.dt_inner, c.dt}, init);
  e.currents = ode::reconstruct_currents(node, e.trajectory);
  compute_metrics(e, c);
  return e;
}

Evaluation evaluate_model(const RunConfig& c) {
  const auto host = host_model(c);
  const auto protocol = sim::default_protocol(c.model, c.eval_cycle_length,
                                              std::max(c.eval_cycle_length, c.eval_duration));
  const auto init = ode::paced_initial_state(host, protocol, c.eval_pacing, c.dt_inner);
  auto p = protocol;
  p.total_duration = std::max(c.eval_duration, p.cycle_length);
  Evaluation e;
  e.trajectory = sim::simulate(host, p, {c.dt_inner, c.dt, 0.0}, init);
  e.currents = ode::reconstruct_currents(host, e.trajectory);
  compute_metrics(e, c);
  return e;
}

json metrics_json(const Evaluation& e) {
  if (!e.metrics) return {{"error", e.metrics_error}};
  const auto& m = *e.metrics;
  json currents = json::object();
  for (const auto& name : e.currents.names) {
    const auto s = ode::beat_current_stats(e.currents, name, m);
    currents[name] = {{"integral", s.integral}, {"peak", s.peak}};
  }
  return {{"apd90", m.apd90},
          {"peak_vm", m.peak_vm},
          {"resting_vm", m.resting_vm},
          {"ca_amplitude", m.ca_amplitude},
          {"beats_detected", m.beats.size()},
          {"beats_averaged", m.averaged.size()},
          {"currents", currents}};
}

Series column_series(const sim::Trajectory& tr, const std::string& var, const std::string& label) {
  Series s;
  s.label = label;
  const auto j = tr.index_of(var);
  for (std::size_t i = 0; i < tr.samples(); ++i) {
    s.x.push_back(tr.time(i));
    s.y.push_back(tr.at(i, j));
  }
  return s;
}

Series current_series(const ode::CurrentSeries& cs, const std::string& name, const std::string& label) {
  return {label, cs.t, cs.values[cs.index_of(name)]};
}

void write_evaluation(const fs::path& dir, const std::string& prefix, const Evaluation& e) {
  sim::write_csv(dir / (prefix + "trajectory.csv"), e.trajectory);
  ode::write_currents_csv(dir / (prefix + "currents.csv"), e.currents);
}

void plot_state(const fs::path& dir, const std::vector<const Evaluation*>& evals,
                const std::vector<std::string>& labels) {
  std::vector<Series> v, ca;
  const bool has_ca = evals.front()->trajectory.dimension() > 0 &&
                      std::find(evals.front()->trajectory.names().begin(),
                                evals.front()->trajectory.names().end(),
                                "Ca_i") != evals.front()->trajectory.names().end();
  for (std::size_t k = 0; k < evals.size(); ++k) {
    v.push_back(column_series(evals[k]->trajectory, "V", labels[k]));
    if (has_ca) ca.push_back(column_series(evals[k]->trajectory, "Ca_i", labels[k]));
  }
  write_line_plot(dir / "vm.svg", {"Transmembrane potential", "t (ms)", "V (mV)"}, v);
  if (has_ca) write_line_plot(dir / "cai.svg", {"Intracellular calcium", "t (ms)", "Ca_i (mM)"}, ca);
  fs::create_directories(dir / "currents");
  for (const auto& name : evals.front()->currents.names) {
    std::vector<Series> s;
    for (std::size_t k = 0; k < evals.size(); ++k) s.push_back(current_series(evals[k]->currents, name, labels[k]));
    write_line_plot(dir / "currents" / (name + ".svg"), {name, "t (ms)", name + " (pA/pF)"}, s);
  }
}

// ---------------------------------------------------------------------------
// Commands.

void cmd_simulate(const RunConfig& c, std::ostream& out) {
  const auto m = host_model(c);
  const auto opts = c.dataset_options();
  out << "simulating " << opts.cycle_lengths.size() << " segments of " << c.model << " ("
      << c.scenario << ")\n";
  auto ds = sim::generate_dataset(m, opts);
  ds.scenario = c.scenario;
  ds.variant = c.variant;
  sim::save_dataset(c.output, ds, opts);
  out << "wrote " << ds.l() << " segments (" << ds.train_indices.size() << " train, "
      << ds.validation_indices.size() << " validation) to " << c.output.string() << '\n';
}

void cmd_train(const RunConfig& c, std::ostream& out) {
  const auto ds = load_checked_dataset(c);
  const auto m = host_model(c);
  const auto r = train_into(c.output, out, train::LossKind::kFirstPass, [&](const auto& cb) {
    return train::train_first_pass(m, ds, c.train, cb);
  });
  const auto rmse = train::one_step_gate_rmse(r.params, ds, ds.validation_indices);
  json gates = json::object();
  for (std::size_t k = 0; k < rmse.size(); ++k) {
    gates[r.params.variable_names[r.params.partition.gnn_gates[k]]] = rmse[k];
  }
  const auto& h = r.report.history;
  write_json(c.output / "report.json",
             {{"initial", loss_json(h.front().train, r.report.kind)},
              {"final", loss_json(h.back().train, r.report.kind)},
              {"final_val_total", h.back().val_total},
              {"validation_gate_rmse", gates}});
  out << "final loss " << fmt(h.back().train.total) << " (initial " << fmt(h.front().train.total)
      << ")\n";
}

train::TrainResult retrain_one(const RunConfig& c, const nn::NetworkParams& pass1,
                               const sim::Dataset& ds, double eta, const fs::path& dir,
                               std::ostream& out) {
  auto tc = c.train;
  tc.eta = eta;
  const auto r = train_into(dir, out, train::LossKind::kSecondPass, [&](const auto& cb) {
    return train::train_second_pass(pass1, ds, tc, cb);
  });
  const auto& h = r.report.history;
  write_json(dir / "report.json", {{"eta", eta},
                                   {"initial", loss_json(h.front().train, r.report.kind)},
                                   {"final", loss_json(h.back().train, r.report.kind)},
                                   {"final_val_total", h.back().val_total}});
  return r;
}

void cmd_retrain(const RunConfig& c, std::ostream& out) {
  require(c.checkpoint, "checkpoint");
  const auto pass1 = nn::load_checkpoint(c.checkpoint);
  nn::check_compatible(pass1, host_model(c));
  const auto ds = load_checked_dataset(c);
  const auto r = retrain_one(c, pass1, ds, c.train.eta, c.output, out);
  out << "final data " << fmt(r.report.final.term1) << " drift " << fmt(r.report.final.term2) << '\n';
}

std::string eta_dir(double eta) { return "eta_" + sim::format_double(eta); }

void cmd_sweep(const RunConfig& c, std::ostream& out) {
  require(c.checkpoint, "checkpoint");
  const auto pass1 = nn::load_checkpoint(c.checkpoint);
  nn::check_compatible(pass1, host_model(c));
  const auto ds = load_checked_dataset(c);
  std::vector<train::LossTerms> finals(c.etas.size());
  std::vector<double> vals(c.etas.size());
  // Arms are independent; their logs are buffered so the output order does
  // not depend on scheduling.
  std::vector<std::ostringstream> logs(c.etas.size());
  auto arm_config = c;
  arm_config.train.threads = 1;
  parallel_for(c.etas.size(), c.threads, [&](std::size_t k) {
    const auto r = retrain_one(arm_config, pass1, ds, c.etas[k], c.output / eta_dir(c.etas[k]), logs[k]);
    finals[k] = r.report.final;
    vals[k] = r.report.history.back().val_total;
  });
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < c.etas.size(); ++k) {
    out << "[eta " << sim::format_double(c.etas[k]) << "]\n" << logs[k].str();
  }
  out << std::left << std::setw(10) << "eta" << std::setw(13) << "data" << std::setw(13) << "drift"
      << std::setw(13) << "reg" << std::setw(13) << "total" << "val_total\n";
  for (std::size_t k = 0; k < c.etas.size(); ++k) {
    const auto& t = finals[k];
    rows.push_back({c.etas[k], t.term1, t.term2, t.reg, t.total, vals[k]});
    out << std::left << std::setw(10) << fmt(c.etas[k]) << std::setw(13) << fmt(t.term1)
        << std::setw(13) << fmt(t.term2) << std::setw(13) << fmt(t.reg) << std::setw(13)
        << fmt(t.total) << fmt(vals[k]) << '\n';
  }
  sim::write_table_csv(c.output / "sweep_summary.csv",
                       {"eta", "data", "drift", "reg", "total", "val_total"}, rows);
}

void cmd_export(const RunConfig& c, std::ostream& out) {
  require(c.checkpoint, "checkpoint");
  const auto e = evaluate_network(c, c.checkpoint);
  write_evaluation(c.output, "", e);
  write_json(c.output / "metrics.json", metrics_json(e));
  plot_state(c.output, {&e}, {"neural ODE"});
  require_metrics(e, "neural ODE");
  out << "APD90 " << fmt(e.metrics->apd90) << " ms, peak " << fmt(e.metrics->peak_vm)
      << " mV, rest " << fmt(e.metrics->resting_vm) << " mV\n";
}

void cmd_evaluate(const RunConfig& c, std::ostream& out) {
  require(c.control, "control");
  require(c.perturbed, "perturbed");
  const auto ctl = evaluate_network(c, c.control);
  const auto per = evaluate_network(c, c.perturbed);
  write_evaluation(c.output, "control_", ctl);
  write_evaluation(c.output, "perturbed_", per);
  plot_state(c.output, {&ctl, &per}, {"control", "perturbed"});
  if (!ctl.metrics || !per.metrics) {
    write_json(c.output / "evaluation.json",
               {{"control", metrics_json(ctl)}, {"perturbed", metrics_json(per)}});
    require_metrics(ctl, "control network");
    require_metrics(per, "perturbed network");
  }
  const auto& cm = *ctl.metrics;
  const auto& pm = *per.metrics;

  json currents = json::object();
  for (const auto& name : ctl.currents.names) {
    const auto a = ode::beat_current_stats(ctl.currents, name, cm);
    const auto b = ode::beat_current_stats(per.currents, name, pm);
    currents[name] = {{"control_integral", a.integral},
                      {"perturbed_integral", b.integral},
                      {"delta_integral", b.integral - a.integral},
                      {"control_peak", a.peak},
                      {"perturbed_peak", b.peak},
                      {"delta_peak", b.peak - a.peak},
                      {"peak_ratio", a.peak != 0.0 ? b.peak / a.peak : 0.0}};
  }
  const json delta = {{"apd90", pm.apd90 - cm.apd90},
                      {"peak_vm", pm.peak_vm - cm.peak_vm},
                      {"resting_vm", pm.resting_vm - cm.resting_vm},
                      {"ca_amplitude", pm.ca_amplitude - cm.ca_amplitude}};
  write_json(c.output / "evaluation.json", {{"control", metrics_json(ctl)},
                                            {"perturbed", metrics_json(per)},
                                            {"delta", delta},
                                            {"currents", currents}});
  out << "delta APD90 " << fmt(delta["apd90"].get<double>()) << " ms\n";
  for (const auto& name : ctl.currents.names) {
    const auto& r = currents[name];
    out << std::left << std::setw(8) << name << " integral " << std::setw(11)
        << fmt(r["control_integral"].get<double>()) << " -> " << std::setw(11)
        << fmt(r["perturbed_integral"].get<double>()) << " peak ratio "
        << fmt(r["peak_ratio"].get<double>()) << '\n';
  }
}

void cmd_currents(const RunConfig& c, std::ostream& out) {
  const auto e = c.checkpoint.empty() ? evaluate_model(c) : evaluate_network(c, c.checkpoint);
  write_evaluation(c.output, "", e);
  write_json(c.output / "metrics.json", metrics_json(e));
  plot_state(c.output, {&e}, {c.checkpoint.empty() ? c.model : "neural ODE"});
  require_metrics(e, "currents");
  for (const auto& name : e.currents.names) {
    const auto s = ode::beat_current_stats(e.currents, name, *e.metrics);
    out << std::left << std::setw(8) << name << " integral " << std::setw(11) << fmt(s.integral)
        << " peak " << fmt(s.peak) << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gatenet: gating neural networks for cardiac ionic models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "gatenet 1.0");

  struct Command {
    const char* name;
    const char* help;
    void (*fn)(const RunConfig&, std::ostream&);
  };
  const Command commands[] = {
      {"simulate", "generate a dataset of paced segments", cmd_simulate},
      {"train", "first-pass training on full-state data", cmd_train},
      {"retrain", "retrain the gate layer on observables", cmd_retrain},
      {"sweep-eta", "retrain once per drift penalty", cmd_sweep},
      {"export-ode", "integrate the network as a neural ODE", cmd_export},
      {"evaluate", "compare control and perturbed networks", cmd_evaluate},
      {"currents", "ionic currents of a model or network", cmd_currents},
  };
  std::map<std::string, FlagSet> flags;
  for (const auto& cmd : commands) add_flags(app.add_subcommand(cmd.name, cmd.help), flags[cmd.name]);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? e.what() : app.help()) << '\n';
      for (auto* sub : app.get_subcommands()) out << sub->help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    for (const auto& cmd : commands) {
      if (!app.got_subcommand(cmd.name)) continue;
      const RunConfig cfg = resolve(cmd.name, flags[cmd.name]);
      fs::create_directories(cfg.output);
      save_run_config(cfg.output / "run_config.json", cfg);
      cmd.fn(cfg, out);
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
}

}  // namespace gatenet::cli
