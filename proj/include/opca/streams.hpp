#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opca/learners.hpp"
#include "opca/matrix.hpp"

namespace opca {

enum class StreamKind {
  SparseIID,
  DenseIID,
  AdversarialAlternating,
  DiagonalExpert,
  FromFile
};

struct StreamSpec {
  StreamKind kind = StreamKind::SparseIID;
  int n = 0;
  int T = 0;
  std::uint64_t seed = 0;

  // SparseIID: x_t = normalize(sqrt(spike) * v + g_t) for a fixed seeded
  // unit vector v; spike = 0 gives isotropic directions.
  double spike = 0.0;

  // DenseIID: one seeded eigenbasis per stream unless rotate_per_trial.
  bool rotate_per_trial = false;

  // AdversarialAlternating: the learner's published tie-break seed and
  // solver config, used to simulate the noise-free leader at count ties.
  std::uint64_t tie_break_seed = 0;
  int tie_break_k = 1;
  EigenConfig tie_break_cfg;

  // FromFile
  std::string path;
};

std::vector<Instance> generate(const StreamSpec& spec);

/// True when every instance of the stream is sparse (drives the default
/// sigma2 regime). FromFile streams read their header.
bool stream_is_sparse(const StreamSpec& spec);

std::string stream_kind_name(StreamKind kind);
StreamKind parse_stream_kind(const std::string& name);  // without file:PATH

}  // namespace opca
