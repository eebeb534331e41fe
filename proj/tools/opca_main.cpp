#include <CLI11.hpp>
#include <iomanip>
#include <iostream>

#include "opca/harness.hpp"
#include "opca/verify.hpp"

namespace {

struct CommonFlags {
  std::string learner = "fpl";
  std::string stream = "sparse-iid";
  int n = 16;
  int k = 2;
  int t_horizon = 1000;
  std::string sigma2 = "auto";
  std::string noise_mode = "fixed";
  int seeds = 20;
  std::uint64_t seed_base = 1;
  int report_every = 0;
  double eta = -1.0;
  double spike = 0.0;
  std::string out = "run.csv";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--learner", f.learner, "fpl|ftl|skip|meg")
      ->check(CLI::IsMember({"fpl", "ftl", "skip", "meg"}));
  cmd->add_option("--stream", f.stream,
                  "sparse-iid|dense-iid|adversarial|diagonal|file:PATH");
  cmd->add_option("--n", f.n, "dimension");
  cmd->add_option("--k", f.k, "target rank");
  cmd->add_option("--t-horizon", f.t_horizon, "number of trials");
  cmd->add_option("--sigma2", f.sigma2, "auto or a nonnegative real");
  cmd->add_option("--noise-mode", f.noise_mode, "fixed|incremental")
      ->check(CLI::IsMember({"fixed", "incremental"}));
  cmd->add_option("--seeds", f.seeds, "number of seeds to average over");
  cmd->add_option("--seed-base", f.seed_base, "first seed value");
  cmd->add_option("--report-every", f.report_every,
                  "trials between report points (0 = T/100)");
  cmd->add_option("--eta", f.eta, "MEG learning rate (<0 = default)");
  cmd->add_option("--spike", f.spike, "SparseIID spike strength rho");
  cmd->add_option("--out", f.out, "output CSV path");
}

opca::ExperimentConfig to_config(const CommonFlags& f) {
  opca::ExperimentConfig cfg;
  cfg.learner_id = f.learner;
  cfg.n = f.n;
  cfg.k = f.k;
  if (f.stream.rfind("file:", 0) == 0) {
    cfg.stream.kind = opca::StreamKind::FromFile;
    cfg.stream.path = f.stream.substr(5);
  } else {
    cfg.stream.kind = opca::parse_stream_kind(f.stream);
  }
  cfg.stream.n = f.n;
  cfg.stream.T = f.t_horizon;
  cfg.stream.seed = f.seed_base;
  cfg.stream.spike = f.spike;
  cfg.sigma2 = (f.sigma2 == "auto") ? -1.0 : std::stod(f.sigma2);
  cfg.noise_mode = (f.noise_mode == "fixed") ? opca::NoiseMode::FixedScaled
                                             : opca::NoiseMode::Incremental;
  cfg.eta = f.eta;
  cfg.num_seeds = f.seeds;
  cfg.seed_base = f.seed_base;
  cfg.report_every = f.report_every;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online PCA regret benchmark"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "run one learner x stream");
  add_common(run_cmd, run_flags);

  CommonFlags sweep_flags;
  std::string axis = "T";
  std::vector<double> values;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "repeat a run along one axis");
  add_common(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--axis", axis, "T|n|sigma2")
      ->check(CLI::IsMember({"T", "n", "sigma2"}));
  sweep_cmd->add_option("--values", values, "axis values")->delimiter(',');

  opca::VerifyOptions vopts;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the acceptance criteria");
  verify_cmd->add_option("--filter", vopts.filter,
                         "only criteria whose name contains this substring");
  verify_cmd->add_option("--out-dir", vopts.out_dir,
                         "directory for emitted curves");
  verify_cmd->add_option("--sigma2-override", vopts.sigma2_override,
                         "force sigma2 in the bound criteria (negative control)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const opca::ExperimentConfig cfg = to_config(run_flags);
      const auto records = opca::run(cfg);
      opca::write_csv(run_flags.out, records);
      opca::write_manifest(run_flags.out, cfg, opca::resolve_params(cfg));
      const auto& fin = records.back();
      std::cout << "T=" << fin.t << " gain=" << fin.cumulative_gain_mean
                << " comparator=" << fin.comparator
                << " regret=" << fin.regret_mean << " +/- " << fin.regret_stderr
                << "\nwrote " << run_flags.out << " and " << run_flags.out
                << ".manifest\n";
      return 0;
    }
    if (*sweep_cmd) {
      const opca::ExperimentConfig cfg = to_config(sweep_flags);
      const auto rows = opca::sweep(cfg, axis, values);
      std::cout << std::setprecision(12);
      std::cout << axis << ",regret_mean,regret_stderr,comparator\n";
      for (const auto& row : rows)
        std::cout << row.axis_value << ',' << row.final_record.regret_mean
                  << ',' << row.final_record.regret_stderr << ','
                  << row.final_record.comparator << '\n';
      if (axis == "T" && rows.size() >= 2) {
        std::vector<double> xs, ys;
        bool positive = true;
        for (const auto& row : rows) {
          xs.push_back(row.axis_value);
          ys.push_back(row.final_record.regret_mean);
          positive = positive && row.final_record.regret_mean > 0.0;
        }
        if (positive)
          std::cout << "# log-log slope: " << opca::loglog_slope(xs, ys)
                    << '\n';
      }
      return 0;
    }
    return opca::report_acceptance(vopts, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
