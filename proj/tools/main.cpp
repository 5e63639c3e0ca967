// Command-line front end: config-driven experiments, the analytic oracle
// table, one-off fits, prediction, and synthetic data export.
//
// Every run writes a small run.txt manifest (command, config, generator
// name, base seed) next to its outputs, so an artifact directory is
// self-describing.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairddp/config.hpp"
#include "fairddp/fairclf.hpp"
#include "fairddp/harness.hpp"
#include "fairddp/ingest.hpp"
#include "fairddp/rng.hpp"
#include "fairddp/synth.hpp"

namespace fs = std::filesystem;
using namespace fairddp;

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required) {
  auto* copt = cmd->add_option("--config", o.config_path, "configuration file");
  if (config_required) copt->required();
  cmd->add_option("--seed", o.seed, "base seed (overrides the config)");
  cmd->add_option("--jobs", o.jobs, "worker threads (overrides the config)");
  cmd->add_option("--out", o.out_dir, "output directory (overrides the config)");
}

ExperimentConfig resolve(const CommonOpts& o) {
  ExperimentConfig cfg =
      o.config_path.empty() ? ExperimentConfig{} : parse_config_file(o.config_path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.jobs) cfg.jobs = *o.jobs;
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  cfg.validate();
  return cfg;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void write_manifest(const fs::path& dir, const std::string& command, const CommonOpts& o,
                    const ExperimentConfig& cfg) {
  auto out = open_out(dir / "run.txt");
  out << "command " << command << "\n"
      << "config " << (o.config_path.empty() ? "(defaults)" : o.config_path) << "\n"
      << "generator " << kRngName << "\n"
      << "seed " << cfg.seed << "\n"
      << "jobs " << cfg.jobs << "\n";
}

int run_experiment(const CommonOpts& o, const std::string& name) {
  const ExperimentConfig cfg = resolve(o);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_manifest(dir, name, o, cfg);

  const bool synth_mode = cfg.mode == ExperimentConfig::Mode::synth;
  const ExperimentResult result = synth_mode ? run_synth_experiment(cfg, &std::cerr)
                                             : run_csv_experiment(cfg, &std::cerr);
  {
    auto out = open_out(dir / "trials.csv");
    write_trials_csv(result, out);
  }
  {
    auto out = open_out(dir / "summary.csv");
    write_summary_csv(result, out);
  }
  if (synth_mode) {
    const auto rows = oracle_report(cfg.synth, cfg.delta_list);
    auto out = open_out(dir / "oracle.csv");
    write_oracle_csv(rows, out);
  }

  std::size_t failed = 0;
  for (const TrialResult& t : result.trials) {
    if (!t.error.empty()) ++failed;
  }
  std::cout << "wrote " << (dir / "trials.csv").string() << " ("
            << result.trials.size() << " trials, " << failed << " failed)\n";
  if (!result.all_completed) {
    std::cerr << "error: " << failed << " trial(s) did not complete\n";
    return 1;
  }
  return 0;
}

int run_oracle(const CommonOpts& o) {
  const ExperimentConfig cfg = resolve(o);
  const auto rows = oracle_report(cfg.synth, cfg.delta_list);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_manifest(dir, "oracle", o, cfg);
  {
    auto out = open_out(dir / "oracle.csv");
    write_oracle_csv(rows, out);
  }
  write_oracle_csv(rows, std::cout);
  return 0;
}

void save_scaler(const fs::path& path, const Standardizer& st) {
  auto out = open_out(path);
  out << "fairddp-scaler 1\n" << st.mean.size() << "\n";
  for (std::size_t j = 0; j < st.mean.size(); ++j) {
    out << format_double(st.mean[j]) << ' ' << format_double(st.sd[j]) << "\n";
  }
}

std::optional<Standardizer> load_scaler(const fs::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string tag;
  int version = 0;
  std::size_t d = 0;
  in >> tag >> version >> d;
  if (!in || tag != "fairddp-scaler" || version != 1)
    throw std::runtime_error("unrecognized scaler file '" + path.string() + "'");
  Standardizer st;
  st.mean.resize(d);
  st.sd.resize(d);
  for (std::size_t j = 0; j < d; ++j) in >> st.mean[j] >> st.sd[j];
  if (!in) throw std::runtime_error("truncated scaler file '" + path.string() + "'");
  return st;
}

// The schema export-synth writes and synth-mode predict reads.
IngestSpec synth_schema() {
  IngestSpec spec;
  spec.label_column = "y";
  spec.positive_label = "1";
  spec.group_column = "a";
  spec.privileged_value = "1";
  spec.feature_columns = {"x1", "x2"};
  return spec;
}

int run_fit(const CommonOpts& o) {
  const ExperimentConfig cfg = resolve(o);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_manifest(dir, "fit", o, cfg);

  const double delta = cfg.delta_list.front();
  const double cl = cfg.offset_c.front();
  Dataset train, val;
  std::optional<Standardizer> st;
  if (cfg.mode == ExperimentConfig::Mode::synth) {
    const std::size_t n = cfg.n_list.front();
    train = sample_synthetic(cfg.synth, n,
                             trial_seed(cfg.seed, 0, cfg.n_list.size(), 0,
                                        cfg.offset_c.size(), 0, cfg.repetitions, 0, 0));
    val = sample_synthetic(cfg.synth, cfg.n_val,
                           trial_seed(cfg.seed, 0, cfg.n_list.size(), 0,
                                      cfg.offset_c.size(), 0, cfg.repetitions, 0, 1));
  } else {
    const IngestResult ingested = load_csv(cfg.ingest);
    const ThreeWaySplit sp =
        split_dataset(ingested.data, cfg.ingest.train_frac, cfg.ingest.val_frac,
                      trial_seed(cfg.seed, 0, 1, 0, cfg.offset_c.size(), 0,
                                 cfg.repetitions, 0, 0));
    st = fit_standardizer(sp.train);
    train = st->apply(sp.train);
    val = st->apply(sp.val);
  }

  const GroupPair groups = split_by_group(train);
  const HyperParams hp =
      resolve_hyperparams(cfg, delta, cl, groups, train.size(), train.dim());
  const SelectedFit sf = fit_with_selection(train, val, hp);
  {
    auto out = open_out(dir / "model.txt");
    sf.model.save(out);
  }
  if (st) save_scaler(dir / "scaler.txt", *st);
  std::cout << "wrote " << (dir / "model.txt").string() << " (delta="
            << format_double(delta) << ", c1=" << format_double(sf.choice.c1)
            << ", c0=" << format_double(sf.choice.c0) << ")\n";
  return 0;
}

int run_predict(const CommonOpts& o, const std::string& model_path,
                const std::string& input_path) {
  const ExperimentConfig cfg = resolve(o);
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_manifest(dir, "predict", o, cfg);

  FittedFairBayes model = [&] {
    std::ifstream in(model_path);
    if (!in) throw std::runtime_error("cannot open '" + model_path + "'");
    return FittedFairBayes::load(in);
  }();
  const std::optional<Standardizer> st =
      load_scaler(fs::path(model_path).parent_path() / "scaler.txt");

  IngestSpec spec =
      cfg.mode == ExperimentConfig::Mode::csv ? cfg.ingest : synth_schema();
  spec.path = input_path;
  const IngestResult ingested = load_csv(spec);
  const Dataset data = st ? st->apply(ingested.data) : ingested.data;

  SplitMix64 gen(derive_seed(cfg.seed, 0x70726564ULL));  // stream tag for prediction draws
  auto out = open_out(dir / "predictions.csv");
  out << "row,a,y,accept_prob,label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const LabeledSample& s = data[i];
    const double accept = model.accept_prob(s.x, s.a);
    const int label = gen.next_u01() < accept ? 1 : 0;
    out << i << ',' << s.a << ',' << s.y << ',' << format_double(accept) << ','
        << label << '\n';
  }
  std::cout << "wrote " << (dir / "predictions.csv").string() << " (" << data.size()
            << " rows, " << ingested.dropped << " dropped)\n";
  return 0;
}

int run_export_synth(const CommonOpts& o) {
  const ExperimentConfig cfg = resolve(o);
  if (cfg.mode != ExperimentConfig::Mode::synth)
    throw std::runtime_error("config: 'experiment.mode' is not synth");
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_manifest(dir, "export-synth", o, cfg);

  const std::size_t n = cfg.n_list.front();
  const Dataset data =
      sample_synthetic(cfg.synth, n,
                       trial_seed(cfg.seed, 0, cfg.n_list.size(), 0, cfg.offset_c.size(),
                                  0, cfg.repetitions, 0, 3));
  auto out = open_out(dir / "synth.csv");
  write_csv(data, out, {"x1", "x2"}, "a", "y");
  std::cout << "wrote " << (dir / "synth.csv").string() << " (" << n << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"group-thresholded demographic-parity classification toolkit"};
  app.require_subcommand(1);
  int rc = 0;

  CommonOpts synth_opts;
  auto* synth_cmd =
      app.add_subcommand("synth-exp", "repeated seeded trials on the synthetic benchmark");
  add_common(synth_cmd, synth_opts, true);
  synth_cmd->callback([&] { rc = run_experiment(synth_opts, "synth-exp"); });

  CommonOpts csv_opts;
  auto* csv_cmd =
      app.add_subcommand("csv-exp", "repeated re-split trials on an ingested table");
  add_common(csv_cmd, csv_opts, true);
  csv_cmd->callback([&] { rc = run_experiment(csv_opts, "csv-exp"); });

  CommonOpts oracle_opts;
  auto* oracle_cmd =
      app.add_subcommand("oracle", "closed-form fair Bayes table for the synthetic family");
  add_common(oracle_cmd, oracle_opts, false);
  oracle_cmd->callback([&] { rc = run_oracle(oracle_opts); });

  CommonOpts fit_opts;
  auto* fit_cmd = app.add_subcommand("fit", "fit one model and save it");
  add_common(fit_cmd, fit_opts, true);
  fit_cmd->callback([&] { rc = run_fit(fit_opts); });

  CommonOpts predict_opts;
  std::string model_path, input_path;
  auto* predict_cmd = app.add_subcommand("predict", "apply a saved model to a CSV file");
  add_common(predict_cmd, predict_opts, false);
  predict_cmd->add_option("--model", model_path, "saved model file")->required();
  predict_cmd->add_option("--in", input_path, "input CSV in the ingest schema")->required();
  predict_cmd->callback(
      [&] { rc = run_predict(predict_opts, model_path, input_path); });

  CommonOpts export_opts;
  auto* export_cmd =
      app.add_subcommand("export-synth", "draw a synthetic dataset and write it as CSV");
  add_common(export_cmd, export_opts, true);
  export_cmd->callback([&] { rc = run_export_synth(export_opts); });

  try {
    CLI11_PARSE(app, argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
