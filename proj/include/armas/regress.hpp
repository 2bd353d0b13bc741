#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "armas/audio_io.hpp"
#include "armas/baselines.hpp"
#include "armas/features.hpp"
#include "armas/gap.hpp"
#include "armas/stego.hpp"

namespace armas {

struct ForestConfig {
    int n_trees = 100;
    int min_leaf = 5;
    int mtry = 0;      // 0 = ceil(d/3)
    int max_depth = 0; // 0 = unlimited
    double bootstrap_fraction = 1.0;
    uint64_t seed = 0;
    size_t max_train_rows = 200000;

    int effective_mtry(size_t feature_dim) const;
};

// Binary regression tree in flat form. Leaves store the mean of their
// training targets.
struct TreeNode {
    int32_t feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int32_t left = -1;
    int32_t right = -1;
    double value = 0.0; // leaf mean
};

struct ForestModel {
    std::vector<std::vector<TreeNode>> trees;
    ForestConfig config;
    size_t feature_dim = 0;
};

struct TrainTestSplit {
    std::vector<size_t> train_indices; // rows outside all gaps (possibly subsampled)
    std::vector<double> train_y;       // signal values at those rows
    std::vector<size_t> test_indices;  // rows inside gaps, ascending
};

enum class ReconstructMethod { rf, janssen, linear, zero };

ReconstructMethod method_from_string(const std::string& name);
std::string method_to_string(ReconstructMethod m);

struct ReconstructConfig {
    ForestConfig forest;
    JanssenConfig janssen;
    ScalogramConfig scalogram;
    std::string dump_features_path; // empty = no dump
};

// Index i goes to test iff i lies in a gap, otherwise to train with target
// signal[i]. Oversized train sets are subsampled uniformly with the forest
// seed. Errors: LengthMismatch, GapOutOfRange, OverlappingGaps, EmptyTrainSet.
TrainTestSplit split_train_test(size_t n_rows, const std::vector<double>& signal,
                                const std::vector<GapSpec>& gaps,
                                size_t max_train_rows, uint64_t seed);

// Deterministic random forest: tree t is built on a bootstrap sample drawn
// with seed SplitMix64::nth(config.seed, t); splits greedily minimize the
// weighted variance of the children over mtry candidate features; ties break
// toward the lowest feature index, then the lowest threshold.
// Errors: EmptyTrainSet, DimensionMismatch.
ForestModel rf_train(const FeatureTable& x, const std::vector<size_t>& rows,
                     const std::vector<double>& y, const ForestConfig& config);

// Mean over per-tree leaf values. Errors: DimensionMismatch.
std::vector<double> rf_predict(const ForestModel& model, const FeatureTable& x,
                               const std::vector<size_t>& rows);

// Splices the chosen method's gap estimate into the corrupted clip. Samples
// outside the declared gaps are returned bit-exactly; predictions are clamped
// to the PCM16 range. Errors: NoGaps, EmptyTrainSet.
AudioClip reconstruct_gap(const AudioClip& corrupted, const Manifest& manifest,
                          ReconstructMethod method, const ReconstructConfig& config);

} // namespace armas
