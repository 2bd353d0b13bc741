#include "armas/regress.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "armas/error.hpp"
#include "armas/parallel.hpp"
#include "armas/rng.hpp"

namespace armas {

int ForestConfig::effective_mtry(size_t feature_dim) const {
    if (mtry > 0) return int(std::min<size_t>(size_t(mtry), feature_dim));
    return int((feature_dim + 2) / 3); // ceil(d/3)
}

ReconstructMethod method_from_string(const std::string& name) {
    if (name == "rf") return ReconstructMethod::rf;
    if (name == "janssen") return ReconstructMethod::janssen;
    if (name == "linear") return ReconstructMethod::linear;
    if (name == "zero") return ReconstructMethod::zero;
    fail("UnknownMethod", "unknown reconstruction method: " + name);
}

std::string method_to_string(ReconstructMethod m) {
    switch (m) {
        case ReconstructMethod::rf: return "rf";
        case ReconstructMethod::janssen: return "janssen";
        case ReconstructMethod::linear: return "linear";
        case ReconstructMethod::zero: return "zero";
    }
    return "?";
}

TrainTestSplit split_train_test(size_t n_rows, const std::vector<double>& signal,
                                const std::vector<GapSpec>& gaps,
                                size_t max_train_rows, uint64_t seed) {
    if (signal.size() != n_rows) fail("LengthMismatch", "features and signal differ in length");
    validate_gaps(gaps, n_rows);
    std::vector<char> mask = gap_mask(gaps, n_rows);

    TrainTestSplit split;
    for (size_t i = 0; i < n_rows; ++i)
        (mask[i] ? split.test_indices : split.train_indices).push_back(i);
    if (split.train_indices.empty()) fail("EmptyTrainSet", "gaps cover the whole signal");

    if (split.train_indices.size() > max_train_rows && max_train_rows > 0) {
        // partial Fisher-Yates: pick max_train_rows distinct indices, keep time order
        SplitMix64 rng(seed);
        std::vector<size_t>& tr = split.train_indices;
        for (size_t i = 0; i < max_train_rows; ++i) {
            size_t j = i + size_t(rng.next_below(uint64_t(tr.size() - i)));
            std::swap(tr[i], tr[j]);
        }
        tr.resize(max_train_rows);
        std::sort(tr.begin(), tr.end());
    }
    split.train_y.reserve(split.train_indices.size());
    for (size_t idx : split.train_indices) split.train_y.push_back(signal[idx]);
    return split;
}

namespace {

// Workspace for growing one tree over a bootstrap sample. Every feature keeps
// its own copy of the sample ordered by that feature's values; node ranges
// [lo, hi) stay aligned across features as splits partition them in place.
struct TreeBuilder {
    size_t n_features;
    size_t n_samples; // bootstrap size
    const std::vector<std::vector<double>>& cols;
    const std::vector<double>& y;
    std::vector<std::vector<uint32_t>> order; // per feature, sorted bootstrap rows
    std::vector<uint32_t> scratch;
    std::vector<uint32_t> feat_pick;
    SplitMix64 rng;
    int min_leaf;
    int max_depth;
    int mtry;
    std::vector<TreeNode> nodes;

    TreeBuilder(const std::vector<std::vector<double>>& cols_, const std::vector<double>& y_,
                uint64_t seed, int min_leaf_, int max_depth_, int mtry_)
        : n_features(cols_.size()), n_samples(0), cols(cols_), y(y_), rng(seed),
          min_leaf(min_leaf_), max_depth(max_depth_), mtry(mtry_) {}

    void grow(const std::vector<std::vector<uint32_t>>& global_order, double bootstrap_fraction) {
        size_t n = y.size();
        size_t draws = std::max<size_t>(1, size_t(std::llround(bootstrap_fraction * double(n))));
        std::vector<uint32_t> counts(n, 0);
        for (size_t k = 0; k < draws; ++k) counts[size_t(rng.next_below(uint64_t(n)))]++;

        n_samples = draws;
        order.assign(n_features, {});
        for (size_t f = 0; f < n_features; ++f) {
            auto& dst = order[f];
            dst.reserve(draws);
            for (uint32_t row : global_order[f])
                for (uint32_t c = 0; c < counts[row]; ++c) dst.push_back(row);
        }
        scratch.resize(draws);
        feat_pick.resize(n_features);
        nodes.clear();
        build_node(0, n_samples, 0);
    }

    // Builds the subtree over [lo, hi); returns its root index.
    int32_t build_node(size_t lo, size_t hi, int depth) {
        size_t n = hi - lo;
        double sum = 0.0, sum2 = 0.0;
        const auto& any = order[0];
        for (size_t i = lo; i < hi; ++i) {
            double v = y[any[i]];
            sum += v;
            sum2 += v * v;
        }
        double mean = sum / double(n);
        double sse = sum2 - sum * mean;

        int32_t id = int32_t(nodes.size());
        nodes.push_back({});
        nodes[size_t(id)].value = mean;

        bool can_split = n >= 2 * size_t(min_leaf) && sse > 0.0 &&
                         (max_depth == 0 || depth < max_depth);
        if (!can_split) return id;

        int32_t best_f = -1;
        double best_thr = 0.0;
        double best_score = sum * mean; // score of the unsplit node: sum^2/n
        size_t best_nl = 0;

        size_t n_try = size_t(mtry);
        if (n_try >= n_features) {
            for (size_t f = 0; f < n_features; ++f) feat_pick[f] = uint32_t(f);
        } else {
            // partial Fisher-Yates over feature indices, then ascending order
            for (size_t f = 0; f < n_features; ++f) feat_pick[f] = uint32_t(f);
            for (size_t i = 0; i < n_try; ++i) {
                size_t j = i + size_t(rng.next_below(uint64_t(n_features - i)));
                std::swap(feat_pick[i], feat_pick[j]);
            }
            std::sort(feat_pick.begin(), feat_pick.begin() + std::ptrdiff_t(n_try));
        }

        for (size_t fi = 0; fi < std::min(n_try, n_features); ++fi) {
            uint32_t f = feat_pick[fi];
            const auto& ord = order[f];
            const auto& col = cols[f];
            double left_sum = 0.0;
            size_t nl = 0;
            for (size_t i = lo; i + 1 < hi; ++i) {
                uint32_t row = ord[i];
                left_sum += y[row];
                ++nl;
                double v = col[row];
                double v_next = col[ord[i + 1]];
                if (v == v_next) continue;
                if (nl < size_t(min_leaf) || n - nl < size_t(min_leaf)) continue;
                double right_sum = sum - left_sum;
                double score = left_sum * left_sum / double(nl) +
                               right_sum * right_sum / double(n - nl);
                if (score > best_score) {
                    best_score = score;
                    best_f = int32_t(f);
                    best_thr = v + (v_next - v) / 2.0;
                    best_nl = nl;
                }
            }
        }
        if (best_f < 0) return id;

        // stable partition of every feature order by the chosen split
        const auto& split_col = cols[size_t(best_f)];
        for (size_t f = 0; f < n_features; ++f) {
            auto& ord = order[f];
            size_t l = lo, r = 0;
            for (size_t i = lo; i < hi; ++i) {
                uint32_t row = ord[i];
                if (split_col[row] <= best_thr)
                    ord[l++] = row;
                else
                    scratch[r++] = row;
            }
            std::copy(scratch.begin(), scratch.begin() + std::ptrdiff_t(r),
                      ord.begin() + std::ptrdiff_t(l));
        }

        size_t mid = lo + best_nl;
        nodes[size_t(id)].feature = best_f;
        nodes[size_t(id)].threshold = best_thr;
        int32_t left = build_node(lo, mid, depth + 1);
        nodes[size_t(id)].left = left;
        int32_t right = build_node(mid, hi, depth + 1);
        nodes[size_t(id)].right = right;
        return id;
    }
};

double tree_predict(const std::vector<TreeNode>& nodes, const double* row) {
    int32_t cur = 0;
    while (nodes[size_t(cur)].feature >= 0) {
        const TreeNode& nd = nodes[size_t(cur)];
        cur = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[size_t(cur)].value;
}

} // namespace

ForestModel rf_train(const FeatureTable& x, const std::vector<size_t>& rows,
                     const std::vector<double>& y, const ForestConfig& config) {
    size_t n = rows.size();
    size_t d = x.dim;
    if (n == 0) fail("EmptyTrainSet", "no training rows");
    if (n != y.size()) fail("DimensionMismatch", "rows and targets differ in length");
    if (d == 0) fail("DimensionMismatch", "feature dimension is zero");
    if (n < 2 * size_t(config.min_leaf))
        fail("EmptyTrainSet", "need at least 2*min_leaf training rows");

    // column-major gather of the training rows
    std::vector<std::vector<double>> cols(d, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i) {
        const double* row = x.row(rows[i]);
        for (size_t f = 0; f < d; ++f) cols[f][i] = row[f];
    }

    // one presort per feature, shared read-only by all trees
    std::vector<std::vector<uint32_t>> global_order(d, std::vector<uint32_t>(n));
    for (size_t f = 0; f < d; ++f) {
        auto& ord = global_order[f];
        std::iota(ord.begin(), ord.end(), 0u);
        const auto& col = cols[f];
        std::sort(ord.begin(), ord.end(), [&](uint32_t a, uint32_t b) {
            if (col[a] != col[b]) return col[a] < col[b];
            return a < b;
        });
    }

    ForestModel model;
    model.config = config;
    model.feature_dim = d;
    model.trees.resize(size_t(config.n_trees));
    int mtry = config.effective_mtry(d);

    parallel_for(size_t(config.n_trees), [&](size_t t) {
        TreeBuilder builder(cols, y, SplitMix64::nth(config.seed, t), config.min_leaf,
                            config.max_depth, mtry);
        builder.grow(global_order, config.bootstrap_fraction);
        model.trees[t] = std::move(builder.nodes);
    });
    return model;
}

std::vector<double> rf_predict(const ForestModel& model, const FeatureTable& x,
                               const std::vector<size_t>& rows) {
    if (x.dim != model.feature_dim)
        fail("DimensionMismatch", "feature dimension differs from training");
    std::vector<double> out(rows.size(), 0.0);
    for (size_t i = 0; i < rows.size(); ++i) {
        const double* row = x.row(rows[i]);
        double acc = 0.0;
        for (const auto& tree : model.trees) acc += tree_predict(tree, row);
        out[i] = acc / double(model.trees.size());
    }
    return out;
}

namespace {

int16_t to_pcm(double v) {
    double r = std::round(v);
    if (r < -32768.0) return -32768;
    if (r > 32767.0) return 32767;
    return int16_t(r);
}

} // namespace

AudioClip reconstruct_gap(const AudioClip& corrupted, const Manifest& manifest,
                          ReconstructMethod method, const ReconstructConfig& config) {
    if (manifest.gaps.empty()) fail("NoGaps", "manifest declares no gaps");
    validate_gaps(manifest.gaps, corrupted.samples.size());

    AudioClip out = corrupted;
    std::vector<double> signal = to_doubles(corrupted);

    switch (method) {
        case ReconstructMethod::zero: {
            for (const auto& g : manifest.gaps)
                for (uint64_t i = g.start; i < g.start + g.len; ++i) out.samples[i] = 0;
            return out;
        }
        case ReconstructMethod::linear: {
            for (const auto& g : manifest.gaps) {
                std::vector<double> filled = fill_linear(signal, g);
                for (uint64_t i = g.start; i < g.start + g.len; ++i)
                    out.samples[i] = to_pcm(filled[i]);
            }
            return out;
        }
        case ReconstructMethod::janssen: {
            for (const auto& g : manifest.gaps) {
                std::vector<double> filled = janssen_inpaint(signal, g, config.janssen);
                for (uint64_t i = g.start; i < g.start + g.len; ++i)
                    out.samples[i] = to_pcm(filled[i]);
            }
            return out;
        }
        case ReconstructMethod::rf: break;
    }

    // rf path: features come only from the extracted side information
    std::vector<double> side = extract_side_info(corrupted, manifest);
    ScalogramConfig scfg = config.scalogram;
    Scalogram scal = cwt_scalogram(side, manifest.sample_rate, scfg);
    FeatureTable features = assemble_features(scal, side);
    if (!config.dump_features_path.empty())
        dump_features_csv(features, config.dump_features_path);

    TrainTestSplit split = split_train_test(features.n_rows, signal, manifest.gaps,
                                            config.forest.max_train_rows, config.forest.seed);
    ForestModel model = rf_train(features, split.train_indices, split.train_y, config.forest);
    std::vector<double> preds = rf_predict(model, features, split.test_indices);
    for (size_t k = 0; k < split.test_indices.size(); ++k)
        out.samples[split.test_indices[k]] = to_pcm(preds[k]);
    return out;
}

} // namespace armas
