// Copyright 2026 The factdag Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FACTDAG_SCORER_H_
#define FACTDAG_SCORER_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "factdag/dag_codec.h"
#include "factdag/edge_matrix.h"
#include "factdag/fact.h"

namespace factdag {

// Trainable arrays of the edge scorer. Token vectors come from an embedding
// table and a fixed-window linear mixer with tanh; pair scores are biaffine.
struct ScorerWeights {
  int dim = 0;     // d
  int window = 0;  // w, context radius of the mixer
  Eigen::MatrixXd embedding;            // |V| x d
  Eigen::MatrixXd mixer;                // d x d(2w+1)
  Eigen::VectorXd mixer_bias;           // d
  std::vector<Eigen::MatrixXd> bilinear;  // c matrices of d x d
  Eigen::MatrixXd linear;               // c x 2d
  Eigen::VectorXd bias;                 // c

  int channels() const { return static_cast<int>(bias.size()); }

  // Zero arrays with the same shapes.
  ScorerWeights ZerosLike() const;
  // Flat view over every coordinate, in declaration order.
  int64_t ParameterCount() const;
  double &Coordinate(int64_t index);
  // this += scale * other.
  void AddScaled(const ScorerWeights &other, double scale);
  double SquaredNorm() const;
};

inline constexpr const char *kUnknownToken = "<unk>";

struct ScorerParams {
  std::map<std::string, int> vocab;  // index 0 is kUnknownToken
  ScorerWeights weights;

  int TokenIndex(const std::string &token) const;
};

// Vocabulary from the corpus tokens, sorted, after the unknown token.
std::map<std::string, int> BuildVocab(const std::vector<AnnotatedSentence> &corpus);

// Small random weights from a seeded generator.
ScorerParams InitParams(std::map<std::string, int> vocab, int dim, int window,
                        int channels, uint64_t seed);

// n x d matrix whose row i is h_i.
Eigen::MatrixXd EncodeTokens(const ScorerParams &params, const Sentence &sentence);

// Values for 0 <= i <= j < n; cells below the diagonal stay 0.
class ScoreTensor {
 public:
  ScoreTensor() = default;
  ScoreTensor(int n, int channels)
      : n_(n), channels_(channels),
        values_(static_cast<size_t>(n) * n * channels, 0.0) {}

  int n() const { return n_; }
  int channels() const { return channels_; }
  double &at(int i, int j, int k) { return values_[(size_t(i) * n_ + j) * channels_ + k]; }
  double at(int i, int j, int k) const {
    return values_[(size_t(i) * n_ + j) * channels_ + k];
  }

 private:
  int n_ = 0;
  int channels_ = 0;
  std::vector<double> values_;
};

// s_ij = h_i^T U_k h_j + W_k [h_i; h_j] + b_k. Throws Error("shape-mismatch").
ScoreTensor BiaffineScores(const ScorerWeights &weights, const Eigen::MatrixXd &h);

ScoreTensor EdgeProbabilities(const ScoreTensor &scores);

inline constexpr double kProbabilityEpsilon = 1e-12;

// Summed binary cross-entropy over i <= j and all channels, probabilities
// clamped to [eps, 1 - eps]. Throws Error("shape-mismatch").
double BceLoss(const ScoreTensor &probabilities, const EdgeMatrix &gold);

struct LossAndGradient {
  double loss = 0;
  ScorerWeights gradient;
};

LossAndGradient Gradient(const ScorerParams &params, const Sentence &sentence,
                         const EdgeMatrix &gold);

struct TrainConfig {
  double learning_rate = 1e-2;
  double momentum = 0.9;
  // Rescales a step's gradient to this norm when it is larger; 0 disables.
  double clip_norm = 5.0;
  int epochs = 30;
  int max_sequence_length = 200;
  double delta = 0.3;
  uint64_t seed = 1;
  int batch_size = 1;
  int dim = 32;
  int window = 2;
  // Stop once the dev Gestalt F1 reaches this value; above 1 never stops.
  double stop_at_dev_f1 = 2.0;
};

struct EpochRecord {
  int epoch = 0;
  double loss = 0;
  double dev_f1 = 0;
};

struct TrainResult {
  ScorerParams params;  // epoch-best by dev Gestalt F1, ties to the later epoch
  std::vector<EpochRecord> history;
  int best_epoch = 0;
};

// Without a dev split the training split doubles as dev. Throws
// Error("empty-corpus"), Error("overlapping-splits") or
// Error("sequence-too-long").
TrainResult Train(const std::vector<AnnotatedSentence> &train,
                  const std::vector<AnnotatedSentence> &dev,
                  const EdgeTypeSpace &space, const TrainConfig &config);

// Entry (i,j,k) present iff its probability is at least delta. Channels that
// cannot sit on the diagonal are never predicted there.
EdgeMatrix Predict(const ScorerParams &params, const Sentence &sentence,
                   const EdgeTypeSpace &space, double delta);

std::vector<Fact> PredictFacts(const ScorerParams &params, const Sentence &sentence,
                               const EdgeTypeSpace &space, double delta);

// Corpus Gestalt F1 of decoded predictions.
double GestaltF1(const ScorerParams &params,
                 const std::vector<AnnotatedSentence> &corpus,
                 const EdgeTypeSpace &space, double delta);

inline const std::vector<double> kDefaultThresholdGrid = {0.20, 0.25, 0.30, 0.35,
                                                          0.40};

// Grid point with the best dev Gestalt F1; ties go to the larger delta.
double TuneThreshold(const ScorerParams &params,
                     const std::vector<AnnotatedSentence> &dev,
                     const EdgeTypeSpace &space,
                     const std::vector<double> &grid = kDefaultThresholdGrid);

// Text checkpoint with hexadecimal floats. Load throws Error("shape-mismatch")
// when the channel count differs from `space`, Error("parse-error") on a
// malformed file.
void SaveParams(std::ostream &out, const ScorerParams &params);
ScorerParams LoadParams(std::istream &in, const EdgeTypeSpace &space);

void WriteHistoryCsv(std::ostream &out, const std::vector<EpochRecord> &history);

}  // namespace factdag

#endif  // FACTDAG_SCORER_H_
