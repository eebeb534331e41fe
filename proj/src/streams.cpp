#include "opca/streams.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace opca {

namespace {

Eigen::VectorXd gaussian_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = gauss(rng);
  return v;
}

Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  return qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
}

std::vector<Instance> generate_sparse_iid(const StreamSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  Eigen::VectorXd v = gaussian_vector(spec.n, rng).normalized();
  const double root_spike = std::sqrt(spec.spike);
  std::vector<Instance> out;
  out.reserve(spec.T);
  for (int t = 0; t < spec.T; ++t) {
    Eigen::VectorXd x = root_spike * v + gaussian_vector(spec.n, rng);
    out.push_back(Instance::sparse(x.normalized()));
  }
  return out;
}

std::vector<Instance> generate_dense_iid(const StreamSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd q = random_orthogonal(spec.n, rng);
  std::vector<Instance> out;
  out.reserve(spec.T);
  for (int t = 0; t < spec.T; ++t) {
    if (spec.rotate_per_trial && t > 0) q = random_orthogonal(spec.n, rng);
    Eigen::VectorXd lam(spec.n);
    for (int i = 0; i < spec.n; ++i) lam(i) = unif(rng);
    Eigen::MatrixXd x = q * lam.asDiagonal() * q.transpose();
    out.push_back(
        Instance::dense(SymmetricMatrix::from_dense(0.5 * (x + x.transpose()))));
  }
  return out;
}

// Emits standard-basis instances that keep the coordinate counts balanced:
// the minimal-count coordinate, with count ties resolved against the
// simulated noise-free leader carrying the published tie-break seed.
std::vector<Instance> generate_adversarial(const StreamSpec& spec) {
  if (spec.n < 2)
    throw std::invalid_argument("AdversarialAlternating: requires n >= 2");
  FtlLearner sim(spec.n, spec.tie_break_k, spec.tie_break_cfg,
                 spec.tie_break_seed);
  std::vector<long> counts(spec.n, 0);
  std::vector<Instance> out;
  out.reserve(spec.T);
  for (int t = 1; t <= spec.T; ++t) {
    // Keep the simulated learner's rng in lockstep with the real one: one
    // predict per trial, whether or not the tie-break is needed.
    const Prediction pred = sim.predict();
    int j = 0;
    if (t > 1) {
      const long mn = *std::min_element(counts.begin(), counts.end());
      j = -1;
      double best_gain = 0.0;
      for (int i = 0; i < spec.n; ++i) {
        if (counts[i] != mn) continue;
        const double g =
            pred.basis->columns().row(i).squaredNorm();  // gain on e_i
        if (j < 0 || g < best_gain) {
          j = i;
          best_gain = g;
        }
      }
    }
    Instance inst = Instance::sparse(Eigen::VectorXd::Unit(spec.n, j));
    sim.update(inst);
    ++counts[j];
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<Instance> generate_diagonal_expert(const StreamSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> weights(spec.n);
  for (double& w : weights) w = unif(rng);
  std::discrete_distribution<int> cat(weights.begin(), weights.end());
  std::vector<Instance> out;
  out.reserve(spec.T);
  for (int t = 0; t < spec.T; ++t)
    out.push_back(Instance::sparse(Eigen::VectorXd::Unit(spec.n, cat(rng))));
  return out;
}

struct FileHeader {
  int n = 0;
  bool sparse = true;
};

FileHeader parse_header(std::istream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ":1: empty instance file");
  std::istringstream hs(line);
  std::string n_tag, kind_tag, kind;
  FileHeader h;
  if (!(hs >> n_tag >> h.n >> kind_tag >> kind) || n_tag != "n" ||
      kind_tag != "kind" || (kind != "sparse" && kind != "dense") || h.n < 1)
    throw std::runtime_error(path +
                             ":1: expected header 'n <dim> kind <sparse|dense>'");
  h.sparse = (kind == "sparse");
  return h;
}

std::vector<Instance> generate_from_file(const StreamSpec& spec) {
  std::ifstream in(spec.path);
  if (!in) throw std::runtime_error("cannot open instance file: " + spec.path);
  const FileHeader h = parse_header(in, spec.path);
  std::vector<Instance> out;
  std::string line;
  int lineno = 1;
  if (h.sparse) {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream ls(line);
      Eigen::VectorXd x(h.n);
      for (int i = 0; i < h.n; ++i)
        if (!(ls >> x(i)))
          throw std::runtime_error(spec.path + ":" + std::to_string(lineno) +
                                   ": expected " + std::to_string(h.n) +
                                   " values");
      const double norm = x.norm();
      if (norm == 0.0)
        throw std::runtime_error(spec.path + ":" + std::to_string(lineno) +
                                 ": zero vector");
      if (std::abs(norm - 1.0) > 1e-6)
        std::cerr << spec.path << ":" << lineno
                  << ": warning: norm deviates from 1 by "
                  << std::abs(norm - 1.0) << ", normalizing\n";
      out.push_back(Instance::sparse(x / norm));
    }
  } else {
    // Each instance: n lines of the lower triangle; blank line separators.
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(h.n, h.n);
    int row = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      std::istringstream ls(line);
      for (int j = 0; j <= row; ++j) {
        if (!(ls >> m(row, j)))
          throw std::runtime_error(spec.path + ":" + std::to_string(lineno) +
                                   ": expected " + std::to_string(row + 1) +
                                   " values in triangle row");
        m(j, row) = m(row, j);
      }
      if (++row == h.n) {
        out.push_back(Instance::dense(SymmetricMatrix::from_dense(m)));
        m.setZero();
        row = 0;
      }
    }
    if (row != 0)
      throw std::runtime_error(spec.path + ":" + std::to_string(lineno) +
                               ": truncated dense instance");
  }
  return out;
}

}  // namespace

std::vector<Instance> generate(const StreamSpec& spec) {
  if (spec.kind != StreamKind::FromFile && (spec.n < 1 || spec.T < 0))
    throw std::invalid_argument("generate: invalid stream spec");
  switch (spec.kind) {
    case StreamKind::SparseIID:
      return generate_sparse_iid(spec);
    case StreamKind::DenseIID:
      return generate_dense_iid(spec);
    case StreamKind::AdversarialAlternating:
      return generate_adversarial(spec);
    case StreamKind::DiagonalExpert:
      return generate_diagonal_expert(spec);
    case StreamKind::FromFile:
      return generate_from_file(spec);
  }
  throw std::logic_error("generate: unreachable");
}

bool stream_is_sparse(const StreamSpec& spec) {
  switch (spec.kind) {
    case StreamKind::DenseIID:
      return false;
    case StreamKind::FromFile: {
      std::ifstream in(spec.path);
      if (!in)
        throw std::runtime_error("cannot open instance file: " + spec.path);
      return parse_header(in, spec.path).sparse;
    }
    default:
      return true;
  }
}

std::string stream_kind_name(StreamKind kind) {
  switch (kind) {
    case StreamKind::SparseIID: return "sparse-iid";
    case StreamKind::DenseIID: return "dense-iid";
    case StreamKind::AdversarialAlternating: return "adversarial";
    case StreamKind::DiagonalExpert: return "diagonal";
    case StreamKind::FromFile: return "file";
  }
  return "?";
}

StreamKind parse_stream_kind(const std::string& name) {
  if (name == "sparse-iid") return StreamKind::SparseIID;
  if (name == "dense-iid") return StreamKind::DenseIID;
  if (name == "adversarial") return StreamKind::AdversarialAlternating;
  if (name == "diagonal") return StreamKind::DiagonalExpert;
  if (name == "file") return StreamKind::FromFile;
  throw std::invalid_argument("unknown stream kind: " + name);
}

}  // namespace opca
