#include "opca/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace opca {

namespace {

constexpr const char* kVersion = "0.1.0";

std::vector<long> report_points(int T, int every) {
  std::vector<long> pts{0};
  for (long t = every; t <= T; t += every) pts.push_back(t);
  if (pts.back() != T) pts.push_back(T);
  return pts;
}

struct SeedResult {
  std::vector<double> gains;       // cumulative gain at each report point
  std::vector<double> comparators; // lambda_{1:k}(X_{<=t}) at each point
  std::vector<double> wall_ms;     // per-trial wall time within the interval
};

SeedResult run_one_seed(const ExperimentConfig& cfg,
                        const ResolvedParams& resolved, std::uint64_t seed,
                        const std::vector<Instance>* shared_stream) {
  std::vector<Instance> own_stream;
  const std::vector<Instance>* stream = shared_stream;
  if (stream == nullptr) {
    StreamSpec spec = cfg.stream;
    spec.tie_break_seed = seed;
    spec.tie_break_k = cfg.k;
    spec.tie_break_cfg = cfg.eigen_cfg;
    own_stream = generate(spec);
    stream = &own_stream;
  }

  LearnerParams lp;
  lp.n = cfg.n;
  lp.k = cfg.k;
  lp.sigma2 = resolved.sigma2;
  lp.noise_mode = cfg.noise_mode;
  lp.eigen_cfg = cfg.eigen_cfg;
  lp.eta = resolved.eta;
  lp.seed = seed;
  std::unique_ptr<Learner> learner = make_learner(cfg.learner_id, lp);

  const int T = static_cast<int>(stream->size());
  const std::vector<long> pts = report_points(T, resolved.report_every);
  SeedResult res;
  res.gains.reserve(pts.size());
  res.comparators.reserve(pts.size());
  res.wall_ms.reserve(pts.size());
  res.gains.push_back(0.0);
  res.comparators.push_back(0.0);
  res.wall_ms.push_back(0.0);

  SymmetricMatrix cumulative_data(cfg.n);
  double cumulative_gain = 0.0;
  std::size_t next_pt = 1;
  long interval_start = 0;
  auto interval_clock = std::chrono::steady_clock::now();

  for (int t = 1; t <= T; ++t) {
    const Instance& inst = (*stream)[static_cast<std::size_t>(t - 1)];
    const Prediction pred = learner->predict();
    const double g = learner->score(pred, inst);
    const double cap =
        inst.kind() == Instance::Kind::Sparse ? 1.0 : static_cast<double>(cfg.k);
    if (!(g >= -tol::gain_bound && g <= cap + tol::gain_bound)) {
      std::ostringstream msg;
      msg << "run: gain bound violated at trial " << t << " (gain=" << g
          << ", cap=" << cap << ", seed=" << seed
          << ", cumulative data trace=" << cumulative_data.trace() << ")";
      throw std::runtime_error(msg.str());
    }
    cumulative_gain += g;
    learner->update(inst);

    if (inst.kind() == Instance::Kind::Sparse)
      cumulative_data = rank_one_update(cumulative_data, inst.vec());
    else
      cumulative_data = add_scaled(cumulative_data, 1.0, inst.mat());

    if (next_pt < pts.size() && t == pts[next_pt]) {
      const auto now = std::chrono::steady_clock::now();
      const double ms =
          std::chrono::duration<double, std::milli>(now - interval_clock)
              .count();
      res.gains.push_back(cumulative_gain);
      res.comparators.push_back(top_k_value(cumulative_data, cfg.k));
      res.wall_ms.push_back(ms / static_cast<double>(t - interval_start));
      interval_start = t;
      interval_clock = std::chrono::steady_clock::now();
      ++next_pt;
    }
  }
  return res;
}

void mean_stderr(const std::vector<double>& xs, double& mean, double& se) {
  const double n = static_cast<double>(xs.size());
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) {
    se = 0.0;
    return;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  se = std::sqrt(ss / (n - 1.0) / n);
}

}  // namespace

ResolvedParams resolve_params(const ExperimentConfig& cfg) {
  if (cfg.num_seeds < 1)
    throw std::invalid_argument("run: seed list must be non-empty");
  ResolvedParams r;
  if (cfg.sigma2 >= 0.0) {
    r.sigma2 = cfg.sigma2;
  } else if (cfg.learner_id == "fpl") {
    // Regime defaults keyed on the stream's declared sparseness.
    r.sigma2 = stream_is_sparse(cfg.stream)
                   ? 1.0 / (cfg.k * std::sqrt(static_cast<double>(cfg.n)))
                   : 1.0;
  } else {
    r.sigma2 = 0.0;
  }
  if (cfg.eta >= 0.0) {
    r.eta = cfg.eta;
  } else {
    const int T = cfg.stream.T;
    const double lognk = std::log(static_cast<double>(cfg.n) / cfg.k);
    r.eta = (T > 0 && lognk > 0.0) ? std::sqrt(8.0 * lognk / T) : 0.1;
  }
  const int T = cfg.stream.T;
  r.report_every =
      cfg.report_every > 0 ? cfg.report_every : std::max(1, T / 100);
  return r;
}

std::vector<RegretRecord> run(const ExperimentConfig& cfg) {
  if (cfg.stream.kind != StreamKind::FromFile && cfg.stream.n != cfg.n)
    throw std::invalid_argument("run: stream and learner dimensions disagree");
  const ResolvedParams resolved = resolve_params(cfg);

  // Non-adversarial streams are materialized once and shared (oblivious
  // adversary); the adversarial stream is matched to each learner seed.
  std::vector<Instance> shared;
  const bool per_seed_stream =
      cfg.stream.kind == StreamKind::AdversarialAlternating;
  if (!per_seed_stream) {
    shared = generate(cfg.stream);
    for (const Instance& inst : shared)
      if (inst.dim() != cfg.n)
        throw std::invalid_argument("run: instance dimension mismatch");
  }

  std::vector<SeedResult> results(cfg.num_seeds);
  std::vector<std::string> errors(cfg.num_seeds);
  const unsigned workers = std::max(
      1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                             static_cast<unsigned>(cfg.num_seeds)));
  std::vector<std::thread> threads;
  std::mutex next_mutex;
  int next_seed = 0;
  auto worker = [&]() {
    for (;;) {
      int i;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next_seed >= cfg.num_seeds) return;
        i = next_seed++;
      }
      try {
        results[i] = run_one_seed(cfg, resolved, cfg.seed_base + i,
                                  per_seed_stream ? nullptr : &shared);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  for (unsigned w = 0; w < workers; ++w) threads.emplace_back(worker);
  for (std::thread& th : threads) th.join();
  for (const std::string& err : errors)
    if (!err.empty()) throw std::runtime_error(err);

  const std::size_t num_pts = results.front().gains.size();
  const std::vector<long> pts =
      report_points(per_seed_stream ? cfg.stream.T
                                    : static_cast<int>(shared.size()),
                    resolved.report_every);
  std::vector<RegretRecord> records(num_pts);
  std::vector<double> buf(cfg.num_seeds);
  for (std::size_t p = 0; p < num_pts; ++p) {
    RegretRecord& rec = records[p];
    rec.t = pts[p];
    for (int i = 0; i < cfg.num_seeds; ++i) buf[i] = results[i].gains[p];
    mean_stderr(buf, rec.cumulative_gain_mean, rec.cumulative_gain_stderr);
    double comp_se = 0.0;
    for (int i = 0; i < cfg.num_seeds; ++i) buf[i] = results[i].comparators[p];
    mean_stderr(buf, rec.comparator, comp_se);
    for (int i = 0; i < cfg.num_seeds; ++i)
      buf[i] = results[i].comparators[p] - results[i].gains[p];
    mean_stderr(buf, rec.regret_mean, rec.regret_stderr);
    for (int i = 0; i < cfg.num_seeds; ++i) buf[i] = results[i].wall_ms[p];
    double wall_se = 0.0;
    mean_stderr(buf, rec.wall_ms_per_trial, wall_se);
  }
  return records;
}

std::vector<SweepRow> sweep(const ExperimentConfig& base,
                            const std::string& axis,
                            const std::vector<double>& values) {
  std::vector<SweepRow> rows;
  for (double v : values) {
    ExperimentConfig cfg = base;
    if (axis == "T") {
      cfg.stream.T = static_cast<int>(v);
    } else if (axis == "n") {
      cfg.n = static_cast<int>(v);
      cfg.stream.n = static_cast<int>(v);
    } else if (axis == "sigma2") {
      cfg.sigma2 = v;
    } else {
      throw std::invalid_argument("sweep: axis must be T, n or sigma2");
    }
    const std::vector<RegretRecord> records = run(cfg);
    rows.push_back(SweepRow{v, records.back()});
  }
  return rows;
}

double loglog_slope(const std::vector<double>& xs,
                    const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("loglog_slope: need >= 2 matched points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] <= 0.0 || ys[i] <= 0.0)
      throw std::domain_error("loglog_slope: nonpositive point");
    const double lx = std::log(xs[i]);
    const double ly = std::log(ys[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void write_csv(const std::string& path,
               const std::vector<RegretRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  out << "t,cumulative_gain_mean,cumulative_gain_stderr,comparator,"
         "regret_mean,regret_stderr,wall_ms_per_trial\n";
  out << std::setprecision(15);
  for (const RegretRecord& r : records) {
    out << r.t << ',' << r.cumulative_gain_mean << ','
        << r.cumulative_gain_stderr << ',' << r.comparator << ','
        << r.regret_mean << ',' << r.regret_stderr << ','
        << r.wall_ms_per_trial << '\n';
  }
}

void write_manifest(const std::string& path, const ExperimentConfig& cfg,
                    const ResolvedParams& resolved) {
  std::ofstream out(path + ".manifest");
  if (!out) throw std::runtime_error("write_manifest: cannot open " + path);
  out << std::setprecision(17);
  out << "learner=" << cfg.learner_id << "\n";
  out << "stream=" << stream_kind_name(cfg.stream.kind) << "\n";
  if (cfg.stream.kind == StreamKind::FromFile)
    out << "stream_path=" << cfg.stream.path << "\n";
  out << "n=" << cfg.n << "\n";
  out << "k=" << cfg.k << "\n";
  out << "t_horizon=" << cfg.stream.T << "\n";
  out << "sigma2=" << resolved.sigma2 << "\n";
  out << "sigma2_flag=" << (cfg.sigma2 < 0 ? std::string("auto")
                                           : std::to_string(cfg.sigma2))
      << "\n";
  out << "noise_mode="
      << (cfg.noise_mode == NoiseMode::FixedScaled ? "fixed" : "incremental")
      << "\n";
  out << "eta=" << resolved.eta << "\n";
  out << "seeds=" << cfg.num_seeds << "\n";
  out << "seed_base=" << cfg.seed_base << "\n";
  out << "report_every=" << resolved.report_every << "\n";
  out << "eigen_max_iterations=" << cfg.eigen_cfg.max_iterations << "\n";
  out << "eigen_convergence_tol=" << cfg.eigen_cfg.convergence_tol << "\n";
  out << "stream_seed=" << cfg.stream.seed << "\n";
  out << "stream_spike=" << cfg.stream.spike << "\n";
  out << "version=" << kVersion << "\n";
#if defined(__linux__)
  out << "platform=linux\n";
#elif defined(__APPLE__)
  out << "platform=macos\n";
#else
  out << "platform=other\n";
#endif
}

}  // namespace opca
