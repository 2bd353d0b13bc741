#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "armas/audio_io.hpp"
#include "armas/error.hpp"
#include "armas/eval.hpp"
#include "armas/hcr.hpp"
#include "armas/regress.hpp"
#include "armas/stego.hpp"

namespace {

using namespace armas;

int exit_code_for(const std::string& code) {
    if (code == "NotWav" || code == "UnsupportedEncoding" || code == "MultichannelWithoutFlag" ||
        code == "TruncatedFile" || code == "EmptyInput" || code == "TooShort" ||
        code == "OutOfRange" || code == "ManifestMismatch" || code == "BadPlan")
        return 2;
    if (code == "IoError") return 3;
    if (code == "DoesNotFit" || code == "GapOutOfRange" || code == "GapTouchesEdge" ||
        code == "OverlappingGaps" || code == "InsufficientContext")
        return 4;
    if (code == "NoGaps") return 5;
    if (code == "LengthMismatch") return 6;
    return 1;
}

int cmd_embed(const std::string& in, const std::string& out, const std::string& manifest_path,
              uint64_t seed, bool has_seed, int channel) {
    AudioClip clip = read_wav(in, channel);
    SelfEmbedResult result = self_embed(clip, seed, has_seed);
    write_wav(result.stego, out);
    save_manifest(result.manifest, manifest_path);
    return 0;
}

int cmd_corrupt(const std::string& in, const std::string& out, const std::string& manifest_path,
                double gap_start_ms, double gap_len_ms, int random_count, uint64_t seed,
                bool has_seed) {
    AudioClip clip = read_wav(in);
    Manifest manifest = load_manifest(manifest_path);
    if (clip.samples.size() != manifest.orig_len)
        fail("ManifestMismatch", "clip length does not match manifest");

    std::vector<GapSpec> gaps;
    if (random_count > 0) {
        uint64_t s = has_seed ? seed : manifest.seed.seed;
        gaps = simulate_gaps(manifest.orig_len, clip.sample_rate,
                             {int(gap_len_ms)}, random_count, s);
    } else {
        uint64_t start = uint64_t(gap_start_ms * clip.sample_rate / 1000.0);
        uint64_t len = uint64_t(gap_len_ms * clip.sample_rate / 1000.0);
        if (len == 0 || start + len > clip.samples.size())
            fail("DoesNotFit", "gap lies outside the clip");
        gaps.push_back({start, len});
    }

    for (const auto& g : gaps)
        for (uint64_t i = g.start; i < g.start + g.len; ++i) clip.samples[i] = 0;
    manifest.gaps = gaps;
    validate_gaps(manifest.gaps, manifest.orig_len);
    write_wav(clip, out);
    save_manifest(manifest, manifest_path);
    return 0;
}

int cmd_reconstruct(const std::string& in, const std::string& manifest_path,
                    const std::string& method_name, const std::string& out,
                    const ReconstructConfig& cfg) {
    AudioClip clip = read_wav(in);
    Manifest manifest = load_manifest(manifest_path);
    AudioClip restored = reconstruct_gap(clip, manifest, method_from_string(method_name), cfg);
    write_wav(restored, out);
    return 0;
}

int cmd_evaluate(const std::string& ref_path, const std::string& test_path,
                 const std::string& manifest_path, const std::string& out_json) {
    AudioClip ref = read_wav(ref_path);
    AudioClip test = read_wav(test_path);
    std::vector<GapSpec> gaps;
    if (!manifest_path.empty()) gaps = load_manifest(manifest_path).gaps;
    MetricsReport rep = evaluate(ref, test, gaps);
    std::ofstream f(out_json, std::ios::trunc);
    if (!f) fail("IoError", "cannot write " + out_json);
    f << metrics_to_json(rep) << "\n";
    return 0;
}

int cmd_bench(const std::string& plan_path, const std::string& out_dir) {
    std::ifstream f(plan_path);
    if (!f) fail("IoError", "cannot open " + plan_path);
    std::stringstream ss;
    ss << f.rdbuf();
    BenchmarkPlan plan = plan_from_json(ss.str());
    BenchmarkResult result = run_benchmark(plan, out_dir);
    std::cout << "tests: " << result.tests << ", failures: " << result.failures << "\n"
              << "csv: " << result.csv_path << "\n"
              << "summary: " << result.summary_path << "\n";
    return 0;
}

// Emits the halftone pipeline stages as images plus the correlation report.
int cmd_hcr_demo(const std::string& in, const std::string& out_dir, double sigma) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    AudioClip clip = read_wav(in);
    ByteSignal bytes = scale_to_bytes(to_doubles(clip));
    SignalMatrix mat = reshape_to_matrix(bytes.values);
    BitPlane plane = dither(mat);
    SignalMatrix rec = inverse_halftone(plane, {sigma});

    write_pgm_p5(mat, 0.0, 255.0, (fs::path(out_dir) / "original.pgm").string());
    write_pgm_p4(plane, (fs::path(out_dir) / "halftone.pbm").string());
    write_pgm_p5(rec, 0.0, 1.0, (fs::path(out_dir) / "reconstructed.pgm").string());

    CorrelationReport rep = hcr_roundtrip_stats(bytes, flatten_matrix(rec));
    nlohmann::ordered_json j;
    j["pearson_r"] = rep.pearson_r;
    j["slope"] = rep.slope;
    j["intercept"] = rep.intercept;
    j["rmse"] = rep.rmse;
    j["r_squared"] = rep.r_squared;
    std::ofstream f((fs::path(out_dir) / "correlation.json").string(), std::ios::trunc);
    f << j.dump(2) << "\n";
    std::cout << j.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"armas: self-embedding audio gap reconstruction"};
    app.require_subcommand(1);

    std::string in, out, manifest_path, method = "rf", plan_path, out_dir, ref_path, test_path,
                out_json, dump_features;
    uint64_t seed = 0;
    int channel = -1;
    double gap_start_ms = -1.0, gap_len_ms = 0.0;
    int random_count = 0;
    ReconstructConfig rcfg;

    auto* embed = app.add_subcommand("embed", "self-embed a dithered copy into a clip's LSBs");
    embed->add_option("-i,--input", in)->required();
    embed->add_option("-o,--output", out)->required();
    embed->add_option("-m,--manifest", manifest_path)->required();
    auto* embed_seed = embed->add_option("--seed", seed, "permutation key (default: clip length)");
    embed->add_option("--channel", channel, "channel to take from multichannel input");

    auto* corrupt = app.add_subcommand("corrupt", "zero out gaps and record them in the manifest");
    corrupt->add_option("-i,--input", in)->required();
    corrupt->add_option("-o,--output", out)->required();
    corrupt->add_option("-m,--manifest", manifest_path)->required();
    corrupt->add_option("--gap-start-ms", gap_start_ms);
    corrupt->add_option("--gap-len-ms", gap_len_ms);
    corrupt->add_option("--random", random_count, "place N random gaps instead");
    auto* corrupt_seed = corrupt->add_option("--seed", seed);

    auto* reconstruct = app.add_subcommand("reconstruct", "fill the manifest gaps");
    reconstruct->add_option("-i,--input", in)->required();
    reconstruct->add_option("-m,--manifest", manifest_path)->required();
    reconstruct->add_option("-o,--output", out)->required();
    reconstruct->add_option("--method", method, "rf | janssen | linear | zero");
    reconstruct->add_option("--trees", rcfg.forest.n_trees);
    auto* rec_seed = reconstruct->add_option("--seed", seed, "forest seed");
    reconstruct->add_option("--max-train-rows", rcfg.forest.max_train_rows);
    reconstruct->add_option("--ar-order", rcfg.janssen.ar_order);
    reconstruct->add_option("--iterations", rcfg.janssen.iterations);
    reconstruct->add_option("--context", rcfg.janssen.context_len);
    reconstruct->add_option("--dump-features", dump_features);

    auto* evaluate_cmd = app.add_subcommand("evaluate", "score a reconstruction against a reference");
    evaluate_cmd->add_option("--reference", ref_path)->required();
    evaluate_cmd->add_option("--test", test_path)->required();
    evaluate_cmd->add_option("-m,--manifest", manifest_path);
    evaluate_cmd->add_option("-o,--output", out_json)->required();

    auto* bench = app.add_subcommand("bench", "run a benchmark plan");
    bench->add_option("--plan", plan_path)->required();
    bench->add_option("--out-dir", out_dir)->required();

    auto* demo = app.add_subcommand("hcr-demo", "dither/restore a clip and report correlation");
    demo->add_option("-i,--input", in)->required();
    demo->add_option("--out-dir", out_dir)->required();
    double sigma = 1.5;
    demo->add_option("--sigma", sigma);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(embed))
            return cmd_embed(in, out, manifest_path, seed, embed_seed->count() > 0, channel);
        if (app.got_subcommand(corrupt))
            return cmd_corrupt(in, out, manifest_path, gap_start_ms, gap_len_ms, random_count,
                               seed, corrupt_seed->count() > 0);
        if (app.got_subcommand(reconstruct)) {
            if (rec_seed->count() > 0) rcfg.forest.seed = seed;
            rcfg.dump_features_path = dump_features;
            return cmd_reconstruct(in, manifest_path, method, out, rcfg);
        }
        if (app.got_subcommand(evaluate_cmd))
            return cmd_evaluate(ref_path, test_path, manifest_path, out_json);
        if (app.got_subcommand(bench)) return cmd_bench(plan_path, out_dir);
        if (app.got_subcommand(demo)) return cmd_hcr_demo(in, out_dir, sigma);
    } catch (const Error& e) {
        nlohmann::ordered_json j;
        j["error"] = e.code();
        j["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        nlohmann::ordered_json j;
        j["error"] = "Internal";
        j["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return 1;
    }
    return 1;
}
