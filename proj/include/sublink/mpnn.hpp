// Copyright 2026 The sublink Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sublink/dataset.hpp"
#include "sublink/fakeedge.hpp"
#include "sublink/graph.hpp"
#include "sublink/labeling.hpp"
#include "sublink/nn.hpp"
#include "sublink/tensor.hpp"

namespace sublink {

/// GCN: h' = ReLU(Norm(A + I) h W + b).
/// GIN: h' = ReLU(MLP(h + sum of neighbor h)), epsilon fixed at 0; node
/// embeddings concatenate the outputs of all layers.
enum class LayerType { Gcn, Gin };

enum class Pooling { CenterHadamard, CenterMlp, Mean };

std::string_view to_string(LayerType t);
std::string_view to_string(Pooling p);
LayerType parse_layer_type(std::string_view name);
/// Accepts center-hadamard|center-mlp|mean.
Pooling parse_pooling(std::string_view name);

struct ModelSpec {
  LayerType layer = LayerType::Gcn;
  Pooling pooling = Pooling::CenterHadamard;
  Strategy strategy = Strategy::Plus;
  std::size_t input_dim = kDefaultMaxLabel + 1;
  std::size_t hidden = 32;
  std::size_t layers = 2;
  std::size_t classifier_hidden = 32;

  /// Width of a row of the node embedding matrix Z.
  std::size_t node_dim() const;
  /// Width of the pooled vector of one branch.
  std::size_t embedding_dim() const;
  /// Width of the fused vector fed to the classifier.
  std::size_t classifier_input_dim() const;

  bool operator==(const ModelSpec&) const = default;
};

/// Weights of one message-passing layer. GCN layers use `first` only; GIN
/// layers run first -> ReLU -> second.
struct MessageLayer {
  nn::Dense first;
  nn::Dense second;
  bool operator==(const MessageLayer&) const = default;
};

/// Every learnable tensor of encoder, pooling head, fusion head and
/// classifier. Gradients use the same type.
struct ModelParams {
  ModelSpec spec;
  std::vector<MessageLayer> layers;
  nn::Dense pool;       // center-mlp pooling only
  FusionParams fusion;  // att strategy only
  nn::Mlp2 classifier;

  /// Seeded Glorot-uniform weights, zero biases.
  static ModelParams init(const ModelSpec& spec, std::uint64_t seed);
  ModelParams zeros_like() const;

  std::vector<Matrix*> tensors();
  std::vector<const Matrix*> tensors() const;
  std::vector<std::string> tensor_names() const;
  std::size_t parameter_count() const;
  std::vector<double> flatten() const;
  void assign(std::span<const double> flat);
  bool all_finite() const;

  bool operator==(const ModelParams&) const = default;
};

/// Compressed adjacency of one (possibly augmented) subgraph with the
/// symmetric GCN normalization of A + I precomputed.
struct MessageGraph {
  std::size_t num_nodes = 0;
  std::vector<std::size_t> offsets;
  std::vector<NodeId> neighbors;
  std::vector<double> self_weight;  // 1 / (deg + 1)
  std::vector<double> edge_weight;  // 1 / sqrt((deg_u + 1)(deg_v + 1)) per entry

  static MessageGraph from(const EnclosingSubgraph& s);
  std::span<const NodeId> neighbors_of(std::size_t v) const {
    return {neighbors.data() + offsets[v], neighbors.data() + offsets[v + 1]};
  }
};

/// A sample with labeling done and the strategy's augmented graphs built.
struct EncodedSample {
  Matrix features;
  /// One graph for original/plus/minus; {plus, minus} for mean/att/concat.
  std::vector<MessageGraph> branches;
  int label = 0;
};

/// DRNL one-hot features (plus parent attributes when present) and the
/// augmented message graphs the strategy calls for.
EncodedSample encode_sample(const EnclosingSubgraph& s, int label, Strategy strategy, const Matrix& attrs,
                            int max_label);
std::vector<EncodedSample> encode_samples(std::span<const SubgraphSample> samples, Strategy strategy,
                                          const Graph& parent, int max_label, std::size_t threads = 1);

/// Node embedding matrix Z for every node of the subgraph.
Matrix forward(const ModelParams& params, const Matrix& features, const EnclosingSubgraph& s);
Matrix forward(const ModelParams& params, const Matrix& features, const MessageGraph& g);

/// z_a o z_b.
Embedding pool_center(const Matrix& z, std::size_t a, std::size_t b);
/// ReLU((z_a o z_b) W + c) with the pooling head of `params`.
Embedding pool_center_mlp(const Matrix& z, std::size_t a, std::size_t b, const nn::Dense& head);
/// Column mean of Z.
Embedding pool_mean(const Matrix& z);

/// Classifier probability in (0, 1).
double classify(std::span<const double> h, const ModelParams& params);

struct Prediction {
  double probability = 0.5;
  /// Fused subgraph representation fed to the classifier.
  Embedding embedding;
};

/// Encoder -> pooling -> fusion -> classifier on a prepared sample.
Prediction predict(const ModelParams& params, const EncodedSample& sample);
/// Full pipeline: labeling -> augmentation -> encoder -> pooling -> fusion ->
/// classifier. `parent` supplies node attributes.
Prediction predict(const ModelParams& params, const SubgraphSample& sample, const Graph& parent,
                   int max_label = kDefaultMaxLabel);

/// Encoder for check_edge_invariance: the fused embedding with the
/// probability appended. Uses label-only features.
SubgraphEncoder prediction_encoder(const ModelParams& params, int max_label = kDefaultMaxLabel);

struct LossAndGrad {
  double loss = 0.0;
  ModelParams grad;
};

/// Mean binary cross-entropy over the batch and its exact gradient. Samples
/// are reduced in fixed-size chunks in index order, so the result does not
/// depend on the thread count.
LossAndGrad loss_and_grad(const ModelParams& params, std::span<const EncodedSample> batch,
                          std::size_t threads = 1);
double loss_only(const ModelParams& params, std::span<const EncodedSample> batch);

struct TrainConfig {
  std::size_t epochs = 100;
  /// 0 means one full-batch step per epoch.
  std::size_t batch_size = 0;
  nn::Adam::Options adam;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct EpochMetrics {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_auc = 0.0;
};

struct TrainResult {
  ModelParams params;  // snapshot at the best validation AUC
  std::vector<EpochMetrics> history;
  std::size_t best_epoch = 0;
  double best_val_auc = 0.0;
};

class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

/// Adam training from seeded initial weights; keeps the parameters of the
/// epoch with the highest validation AUC (earliest on ties). With zero epochs
/// the initial parameters are returned.
TrainResult train(const ModelSpec& spec, const TrainConfig& config, std::span<const EncodedSample> train_set,
                  std::span<const EncodedSample> val_set);

/// Classifier logits, one per sample. Ranking metrics use logits because the
/// clamped probability saturates.
std::vector<double> score_samples(const ModelParams& params, std::span<const EncodedSample> samples,
                                  std::size_t threads = 1);

struct TensorCheck {
  std::string name;
  std::size_t coordinates = 0;
  /// Coordinates whose +-step stencil flipped a ReLU and were redrawn.
  std::size_t skipped_kinks = 0;
  double max_rel_error = 0.0;
};

struct GradCheckReport {
  std::vector<TensorCheck> tensors;
  double max_rel_error = 0.0;
};

/// Compares loss_and_grad against central differences on up to
/// `coords_per_tensor` random coordinates of every tensor. A coordinate whose
/// perturbation changes the sign pattern of any ReLU input is replaced by
/// another one, since the loss is not differentiable across it. Relative error is
/// |analytic - numeric| / max(|analytic|, |numeric|, 1e-5). The floor sits
/// above the roundoff of a central difference at the default step.
GradCheckReport gradient_check(const ModelParams& params, std::span<const EncodedSample> batch,
                               std::size_t coords_per_tensor, std::uint64_t seed, double step = 1e-5);

/// Copy of params with every bias shifted by U(-scale, scale). Zero biases put
/// ReLU units exactly on their kink, where finite differences are meaningless.
ModelParams jitter_biases(const ModelParams& params, std::uint64_t seed, double scale = 0.1);

/// Versioned text checkpoint; values use shortest round-trip formatting.
void save_checkpoint(const ModelParams& params, std::ostream& out);
ModelParams load_checkpoint(std::istream& in);

}  // namespace sublink
