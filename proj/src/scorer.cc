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

#include "factdag/scorer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "factdag/error.h"
#include "factdag/metrics.h"
#include "json.hpp"

namespace factdag {
namespace {

// Visits every array of the weights in declaration order.
template <typename Weights, typename Fn>
void ForEachArray(Weights &weights, Fn fn) {
  fn(weights.embedding.data(), weights.embedding.size());
  fn(weights.mixer.data(), weights.mixer.size());
  fn(weights.mixer_bias.data(), weights.mixer_bias.size());
  for (auto &matrix : weights.bilinear) fn(matrix.data(), matrix.size());
  fn(weights.linear.data(), weights.linear.size());
  fn(weights.bias.data(), weights.bias.size());
}

// Row i holds the embeddings of tokens i-w..i+w, zero outside the sentence.
Eigen::MatrixXd WindowInputs(const ScorerParams &params, const Sentence &sentence) {
  const ScorerWeights &w = params.weights;
  const int n = sentence.size();
  const int d = w.dim;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, d * (2 * w.window + 1));
  for (int i = 0; i < n; ++i) {
    for (int o = -w.window; o <= w.window; ++o) {
      int t = i + o;
      if (t < 0 || t >= n) continue;
      x.row(i).segment((o + w.window) * d, d) =
          w.embedding.row(params.TokenIndex(sentence.tokens[t]));
    }
  }
  return x;
}

double Sigmoid(double s) {
  if (s >= 0) return 1.0 / (1.0 + std::exp(-s));
  double e = std::exp(s);
  return e / (1.0 + e);
}

std::vector<char> DenseLabels(const EdgeMatrix &gold) {
  const size_t n = gold.size(), c = gold.channels();
  std::vector<char> labels(n * n * c, 0);
  for (const Edge &edge : gold.Edges()) {
    labels[(size_t(edge.i) * n + edge.j) * c + edge.channel] = 1;
  }
  return labels;
}

void CheckShapes(int n, int channels, const EdgeMatrix &gold) {
  if (gold.size() != n || gold.channels() != channels) {
    throw Error("shape-mismatch",
                "gold matrix is " + std::to_string(gold.size()) + "x" +
                    std::to_string(gold.channels()) + ", scores are " +
                    std::to_string(n) + "x" + std::to_string(channels));
  }
}

void WriteArray(std::ostream &out, const char *name, const double *data,
                Eigen::Index rows, Eigen::Index cols) {
  out << name << ' ' << rows << ' ' << cols << '\n';
  char buffer[64];
  for (Eigen::Index k = 0; k < rows * cols; ++k) {
    std::snprintf(buffer, sizeof(buffer), "%a", data[k]);
    out << buffer << ((k + 1) % cols == 0 ? '\n' : ' ');
  }
}

class CheckpointReader {
 public:
  explicit CheckpointReader(std::istream &in) : in_(in) {}

  std::string Line() {
    std::string line;
    if (!std::getline(in_, line)) Fail("unexpected end of checkpoint");
    ++line_;
    return line;
  }

  void ReadArray(const char *name, double *data, Eigen::Index rows,
                 Eigen::Index cols) {
    std::istringstream header(Line());
    std::string found;
    Eigen::Index r = -1, c = -1;
    header >> found >> r >> c;
    if (found != name || r != rows || c != cols) {
      Fail(std::string("expected array '") + name + "' of " +
           std::to_string(rows) + "x" + std::to_string(cols));
    }
    for (Eigen::Index row = 0; row < rows; ++row) {
      std::istringstream values(Line());
      for (Eigen::Index col = 0; col < cols; ++col) {
        std::string text;
        values >> text;
        char *end = nullptr;
        double value = std::strtod(text.c_str(), &end);
        if (text.empty() || *end != '\0' || !std::isfinite(value)) {
          Fail("bad value '" + text + "'");
        }
        data[row * cols + col] = value;
      }
    }
  }

  [[noreturn]] void Fail(const std::string &message) const {
    throw Error("parse-error",
                "checkpoint line " + std::to_string(line_) + ": " + message);
  }

 private:
  std::istream &in_;
  int line_ = 0;
};

}  // namespace

ScorerWeights ScorerWeights::ZerosLike() const {
  ScorerWeights zeros = *this;
  ForEachArray(zeros, [](double *data, Eigen::Index size) {
    std::fill(data, data + size, 0.0);
  });
  return zeros;
}

int64_t ScorerWeights::ParameterCount() const {
  int64_t count = 0;
  ForEachArray(*this, [&](const double *, Eigen::Index size) { count += size; });
  return count;
}

double &ScorerWeights::Coordinate(int64_t index) {
  double *found = nullptr;
  ForEachArray(*this, [&](double *data, Eigen::Index size) {
    if (found == nullptr && index < size) found = data + index;
    if (found == nullptr) index -= size;
  });
  if (found == nullptr) throw Error("out-of-range", "parameter index too large");
  return *found;
}

void ScorerWeights::AddScaled(const ScorerWeights &other, double scale) {
  embedding += scale * other.embedding;
  mixer += scale * other.mixer;
  mixer_bias += scale * other.mixer_bias;
  for (size_t k = 0; k < bilinear.size(); ++k) {
    bilinear[k] += scale * other.bilinear[k];
  }
  linear += scale * other.linear;
  bias += scale * other.bias;
}

double ScorerWeights::SquaredNorm() const {
  double total = 0;
  ForEachArray(*this, [&](const double *data, Eigen::Index size) {
    for (Eigen::Index k = 0; k < size; ++k) total += data[k] * data[k];
  });
  return total;
}

int ScorerParams::TokenIndex(const std::string &token) const {
  auto it = vocab.find(token);
  return it == vocab.end() ? 0 : it->second;
}

std::map<std::string, int> BuildVocab(const std::vector<AnnotatedSentence> &corpus) {
  std::set<std::string> tokens;
  for (const AnnotatedSentence &annotated : corpus) {
    tokens.insert(annotated.sentence.tokens.begin(), annotated.sentence.tokens.end());
  }
  tokens.erase(kUnknownToken);
  std::map<std::string, int> vocab{{kUnknownToken, 0}};
  for (const std::string &token : tokens) {
    vocab.emplace(token, static_cast<int>(vocab.size()));
  }
  return vocab;
}

namespace {

constexpr double kInitialBias = -4.0;

}  // namespace

ScorerParams InitParams(std::map<std::string, int> vocab, int dim, int window,
                        int channels, uint64_t seed) {
  if (dim < 1 || window < 0 || channels < 1) {
    throw Error("shape-mismatch", "scorer dimensions must be positive");
  }
  ScorerParams params;
  params.vocab = std::move(vocab);
  ScorerWeights &w = params.weights;
  w.dim = dim;
  w.window = window;
  const int input = dim * (2 * window + 1);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto fill = [&](Eigen::MatrixXd &m, int rows, int cols, double scale) {
    m.resize(rows, cols);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = scale * normal(rng);
  };
  fill(w.embedding, static_cast<int>(params.vocab.size()), dim, 1.0);
  fill(w.mixer, dim, input, 1.0 / std::sqrt(double(input)));
  w.mixer_bias = Eigen::VectorXd::Zero(dim);
  w.bilinear.resize(channels);
  for (auto &matrix : w.bilinear) fill(matrix, dim, dim, 1.0 / dim);
  fill(w.linear, channels, 2 * dim, 1.0 / std::sqrt(2.0 * dim));
  // Gold edges fill a few percent of the cells. Starting every channel near
  // that rate keeps untrained predictions sparse enough to decode.
  w.bias = Eigen::VectorXd::Constant(channels, kInitialBias);
  return params;
}

Eigen::MatrixXd EncodeTokens(const ScorerParams &params, const Sentence &sentence) {
  const ScorerWeights &w = params.weights;
  Eigen::MatrixXd z = WindowInputs(params, sentence) * w.mixer.transpose();
  z.rowwise() += w.mixer_bias.transpose();
  return z.array().tanh().matrix();
}

ScoreTensor BiaffineScores(const ScorerWeights &weights, const Eigen::MatrixXd &h) {
  const int d = weights.dim;
  const int c = weights.channels();
  if (h.cols() != d || static_cast<int>(weights.bilinear.size()) != c ||
      weights.linear.rows() != c || weights.linear.cols() != 2 * d) {
    throw Error("shape-mismatch", "token vectors or scorer arrays disagree on d/c");
  }
  for (const auto &matrix : weights.bilinear) {
    if (matrix.rows() != d || matrix.cols() != d) {
      throw Error("shape-mismatch", "bilinear tensor must be d x d per channel");
    }
  }
  const int n = static_cast<int>(h.rows());
  ScoreTensor scores(n, c);
  for (int k = 0; k < c; ++k) {
    Eigen::MatrixXd pair = h * weights.bilinear[k] * h.transpose();
    Eigen::VectorXd left = h * weights.linear.row(k).head(d).transpose();
    Eigen::VectorXd right = h * weights.linear.row(k).tail(d).transpose();
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        scores.at(i, j, k) = pair(i, j) + left(i) + right(j) + weights.bias(k);
      }
    }
  }
  return scores;
}

ScoreTensor EdgeProbabilities(const ScoreTensor &scores) {
  ScoreTensor p(scores.n(), scores.channels());
  for (int i = 0; i < scores.n(); ++i) {
    for (int j = i; j < scores.n(); ++j) {
      for (int k = 0; k < scores.channels(); ++k) {
        p.at(i, j, k) = Sigmoid(scores.at(i, j, k));
      }
    }
  }
  return p;
}

double BceLoss(const ScoreTensor &probabilities, const EdgeMatrix &gold) {
  CheckShapes(probabilities.n(), probabilities.channels(), gold);
  const std::vector<char> labels = DenseLabels(gold);
  const int n = probabilities.n(), c = probabilities.channels();
  double loss = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      for (int k = 0; k < c; ++k) {
        double p = std::clamp(probabilities.at(i, j, k), kProbabilityEpsilon,
                              1.0 - kProbabilityEpsilon);
        loss -= labels[(size_t(i) * n + j) * c + k] ? std::log(p)
                                                    : std::log(1.0 - p);
      }
    }
  }
  return loss;
}

LossAndGradient Gradient(const ScorerParams &params, const Sentence &sentence,
                         const EdgeMatrix &gold) {
  const ScorerWeights &w = params.weights;
  const int n = sentence.size();
  const int d = w.dim;
  const int c = w.channels();
  CheckShapes(n, c, gold);
  const std::vector<char> labels = DenseLabels(gold);

  Eigen::MatrixXd x = WindowInputs(params, sentence);
  Eigen::MatrixXd z = x * w.mixer.transpose();
  z.rowwise() += w.mixer_bias.transpose();
  Eigen::MatrixXd h = z.array().tanh().matrix();
  ScoreTensor scores = BiaffineScores(w, h);

  LossAndGradient out;
  out.gradient = w.ZerosLike();
  ScorerWeights &g = out.gradient;
  Eigen::MatrixXd dh = Eigen::MatrixXd::Zero(n, d);
  Eigen::MatrixXd ds(n, n);
  for (int k = 0; k < c; ++k) {
    ds.setZero();
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const double p = Sigmoid(scores.at(i, j, k));
        const bool positive = labels[(size_t(i) * n + j) * c + k] != 0;
        // The clamp has zero slope outside [eps, 1 - eps].
        const bool clamped = p < kProbabilityEpsilon || p > 1.0 - kProbabilityEpsilon;
        if (positive) {
          out.loss -= std::log(std::clamp(p, kProbabilityEpsilon,
                                          1.0 - kProbabilityEpsilon));
          ds(i, j) = clamped ? 0.0 : p - 1.0;
        } else {
          out.loss -= std::log(1.0 - std::clamp(p, kProbabilityEpsilon,
                                                1.0 - kProbabilityEpsilon));
          ds(i, j) = clamped ? 0.0 : p;
        }
      }
    }
    const Eigen::MatrixXd &u = w.bilinear[k];
    Eigen::VectorXd row_sums = ds.rowwise().sum();
    Eigen::VectorXd col_sums = ds.colwise().sum().transpose();
    g.bilinear[k] = h.transpose() * ds * h;
    g.linear.row(k).head(d) = (h.transpose() * row_sums).transpose();
    g.linear.row(k).tail(d) = (h.transpose() * col_sums).transpose();
    g.bias(k) = ds.sum();
    dh += ds * h * u.transpose() + ds.transpose() * h * u +
          row_sums * w.linear.row(k).head(d) + col_sums * w.linear.row(k).tail(d);
  }
  Eigen::MatrixXd dz = (dh.array() * (1.0 - h.array().square())).matrix();
  g.mixer = dz.transpose() * x;
  g.mixer_bias = dz.colwise().sum().transpose();
  Eigen::MatrixXd dx = dz * w.mixer;
  for (int i = 0; i < n; ++i) {
    for (int o = -w.window; o <= w.window; ++o) {
      int t = i + o;
      if (t < 0 || t >= n) continue;
      g.embedding.row(params.TokenIndex(sentence.tokens[t])) +=
          dx.row(i).segment((o + w.window) * d, d);
    }
  }
  return out;
}

EdgeMatrix Predict(const ScorerParams &params, const Sentence &sentence,
                   const EdgeTypeSpace &space, double delta) {
  if (params.weights.channels() != space.size()) {
    throw Error("shape-mismatch", "scorer has " +
                                      std::to_string(params.weights.channels()) +
                                      " channels, edge-type space has " +
                                      std::to_string(space.size()));
  }
  ScoreTensor p =
      EdgeProbabilities(BiaffineScores(params.weights, EncodeTokens(params, sentence)));
  EdgeMatrix matrix(sentence.size(), space.size());
  matrix.set_has_probabilities(true);
  for (int i = 0; i < p.n(); ++i) {
    for (int j = i; j < p.n(); ++j) {
      for (int k = 0; k < p.channels(); ++k) {
        if (i == j && !space.AllowsDiagonal(k)) continue;
        if (p.at(i, j, k) >= delta) matrix.Add(i, j, k, p.at(i, j, k));
      }
    }
  }
  return matrix;
}

std::vector<Fact> PredictFacts(const ScorerParams &params, const Sentence &sentence,
                               const EdgeTypeSpace &space, double delta) {
  return Decode(Predict(params, sentence, space, delta), sentence, space);
}

double GestaltF1(const ScorerParams &params,
                 const std::vector<AnnotatedSentence> &corpus,
                 const EdgeTypeSpace &space, double delta) {
  MatchCounts total;
  for (const AnnotatedSentence &annotated : corpus) {
    total += GestaltMatch(annotated.facts,
                          PredictFacts(params, annotated.sentence, space, delta),
                          annotated.sentence, space.schema());
  }
  return total.ToPrf().f1;
}

TrainResult Train(const std::vector<AnnotatedSentence> &train,
                  const std::vector<AnnotatedSentence> &dev,
                  const EdgeTypeSpace &space, const TrainConfig &config) {
  if (train.empty()) throw Error("empty-corpus", "training corpus is empty");
  if (config.epochs < 1 || config.batch_size < 1) {
    throw Error("invalid-config", "epochs and batch size must be positive");
  }
  std::set<std::string> train_ids;
  for (const AnnotatedSentence &annotated : train) {
    if (annotated.sentence.size() > config.max_sequence_length) {
      throw Error("sequence-too-long",
                  "sentence '" + annotated.sentence.id + "' exceeds " +
                      std::to_string(config.max_sequence_length) + " tokens");
    }
    train_ids.insert(annotated.sentence.id);
  }
  for (const AnnotatedSentence &annotated : dev) {
    if (train_ids.count(annotated.sentence.id)) {
      throw Error("overlapping-splits",
                  "sentence '" + annotated.sentence.id + "' is in train and dev");
    }
  }
  const std::vector<AnnotatedSentence> &selection = dev.empty() ? train : dev;

  std::vector<EdgeMatrix> gold;
  gold.reserve(train.size());
  for (const AnnotatedSentence &annotated : train) {
    gold.push_back(Encode(annotated, space).matrix);
  }

  TrainResult result;
  ScorerParams params = InitParams(BuildVocab(train), config.dim, config.window,
                                   space.size(), config.seed);
  ScorerWeights velocity = params.weights.ZerosLike();
  std::mt19937_64 rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  double best_f1 = -1;

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      size_t stop = std::min(order.size(), start + config.batch_size);
      ScorerWeights step = params.weights.ZerosLike();
      for (size_t b = start; b < stop; ++b) {
        const size_t s = order[b];
        LossAndGradient lg = Gradient(params, train[s].sentence, gold[s]);
        epoch_loss += lg.loss;
        step.AddScaled(lg.gradient, 1.0 / double(stop - start));
      }
      if (config.clip_norm > 0) {
        double norm = std::sqrt(step.SquaredNorm());
        if (norm > config.clip_norm) {
          step.AddScaled(step, config.clip_norm / norm - 1.0);
        }
      }
      velocity.AddScaled(velocity, config.momentum - 1.0);
      velocity.AddScaled(step, 1.0);
      params.weights.AddScaled(velocity, -config.learning_rate);
    }
    double dev_f1 = GestaltF1(params, selection, space, config.delta);
    result.history.push_back({epoch, epoch_loss, dev_f1});
    // Ties go to the later, further trained epoch.
    if (dev_f1 >= best_f1) {
      best_f1 = dev_f1;
      result.best_epoch = epoch;
      result.params = params;
    }
    if (dev_f1 >= config.stop_at_dev_f1) break;
  }
  return result;
}

double TuneThreshold(const ScorerParams &params,
                     const std::vector<AnnotatedSentence> &dev,
                     const EdgeTypeSpace &space, const std::vector<double> &grid) {
  if (grid.empty()) throw Error("invalid-config", "empty threshold grid");
  double best_delta = grid.front();
  double best_f1 = -1;
  for (double delta : grid) {
    if (!(delta > 0 && delta < 1)) {
      throw Error("invalid-config", "threshold grid values must lie in (0,1)");
    }
    double f1 = GestaltF1(params, dev, space, delta);
    if (f1 > best_f1 || (f1 == best_f1 && delta > best_delta)) {
      best_f1 = f1;
      best_delta = delta;
    }
  }
  return best_delta;
}

void SaveParams(std::ostream &out, const ScorerParams &params) {
  const ScorerWeights &w = params.weights;
  out << "factdag-scorer 1\n";
  out << "dims " << w.dim << ' ' << w.window << ' ' << w.channels() << ' '
      << params.vocab.size() << '\n';
  std::vector<const std::string *> by_index(params.vocab.size());
  for (const auto &[token, index] : params.vocab) by_index[index] = &token;
  for (const std::string *token : by_index) {
    out << nlohmann::json(*token).dump() << '\n';
  }
  WriteArray(out, "embedding", w.embedding.data(), w.embedding.rows(),
             w.embedding.cols());
  WriteArray(out, "mixer", w.mixer.data(), w.mixer.rows(), w.mixer.cols());
  WriteArray(out, "mixer_bias", w.mixer_bias.data(), 1, w.mixer_bias.size());
  for (const auto &matrix : w.bilinear) {
    WriteArray(out, "bilinear", matrix.data(), matrix.rows(), matrix.cols());
  }
  WriteArray(out, "linear", w.linear.data(), w.linear.rows(), w.linear.cols());
  WriteArray(out, "bias", w.bias.data(), 1, w.bias.size());
}

ScorerParams LoadParams(std::istream &in, const EdgeTypeSpace &space) {
  CheckpointReader reader(in);
  if (reader.Line() != "factdag-scorer 1") reader.Fail("not a scorer checkpoint");
  std::istringstream dims(reader.Line());
  std::string tag;
  int d = 0, window = -1, channels = 0;
  size_t vocab_size = 0;
  dims >> tag >> d >> window >> channels >> vocab_size;
  if (tag != "dims" || d < 1 || window < 0 || channels < 1 || vocab_size < 1) {
    reader.Fail("bad dimension line");
  }
  if (channels != space.size()) {
    throw Error("shape-mismatch", "checkpoint has " + std::to_string(channels) +
                                      " channels, edge-type space has " +
                                      std::to_string(space.size()));
  }
  ScorerParams params;
  for (size_t index = 0; index < vocab_size; ++index) {
    std::string line = reader.Line();
    auto token = nlohmann::json::parse(line, nullptr, false);
    if (!token.is_string()) reader.Fail("bad vocabulary entry");
    params.vocab.emplace(token.get<std::string>(), static_cast<int>(index));
  }
  if (params.vocab.size() != vocab_size) reader.Fail("duplicate vocabulary entry");
  ScorerWeights &w = params.weights;
  w.dim = d;
  w.window = window;
  const int input = d * (2 * window + 1);
  w.embedding.resize(vocab_size, d);
  w.mixer.resize(d, input);
  w.mixer_bias.resize(d);
  w.bilinear.assign(channels, Eigen::MatrixXd(d, d));
  w.linear.resize(channels, 2 * d);
  w.bias.resize(channels);
  // Eigen is column-major; WriteArray emitted the raw storage order.
  reader.ReadArray("embedding", w.embedding.data(), vocab_size, d);
  reader.ReadArray("mixer", w.mixer.data(), d, input);
  reader.ReadArray("mixer_bias", w.mixer_bias.data(), 1, d);
  for (auto &matrix : w.bilinear) reader.ReadArray("bilinear", matrix.data(), d, d);
  reader.ReadArray("linear", w.linear.data(), channels, 2 * d);
  reader.ReadArray("bias", w.bias.data(), 1, channels);
  return params;
}

void WriteHistoryCsv(std::ostream &out, const std::vector<EpochRecord> &history) {
  auto flags = out.flags();
  out << std::fixed << std::setprecision(4);
  out << "epoch,loss,dev_f1\n";
  for (const EpochRecord &record : history) {
    out << record.epoch << ',' << record.loss << ',' << record.dev_f1 << '\n';
  }
  out.flags(flags);
}

}  // namespace factdag
