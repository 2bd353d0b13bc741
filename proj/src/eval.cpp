#include "armas/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <fftw3.h>
#include <json.hpp>

#include "armas/error.hpp"
#include "armas/rng.hpp"

namespace armas {

namespace {

constexpr double kPi = 3.14159265358979323846;

double pearson_or_zero(const std::vector<double>& a, const std::vector<double>& b) {
    size_t n = a.size();
    if (n < 2) return 0.0;
    double ma = 0, mb = 0;
    for (size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= double(n);
    mb /= double(n);
    double saa = 0, sbb = 0, sab = 0;
    for (size_t i = 0; i < n; ++i) {
        double da = a[i] - ma, db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace

std::vector<GapSpec> simulate_gaps(uint64_t length, uint32_t sample_rate,
                                   const std::vector<int>& gap_ms, int count,
                                   uint64_t seed) {
    uint64_t margin = sample_rate / 2; // half a second from each edge
    std::vector<uint64_t> lens;
    for (int ms : gap_ms)
        for (int c = 0; c < count; ++c)
            lens.push_back(uint64_t(ms) * sample_rate / 1000);

    uint64_t total = 0;
    for (uint64_t l : lens) total += l;
    if (2 * margin + total >= length) fail("DoesNotFit", "gaps plus margins exceed clip length");

    SplitMix64 rng(seed);
    std::vector<GapSpec> gaps;
    for (uint64_t len : lens) {
        uint64_t hi = length - margin - len; // start may be in [margin, hi]
        if (hi < margin) fail("DoesNotFit", "gap does not fit inside margins");
        bool placed = false;
        for (int attempt = 0; attempt < 10000 && !placed; ++attempt) {
            uint64_t start = margin + rng.next_below(hi - margin + 1);
            bool clash = false;
            for (const auto& g : gaps)
                if (start < g.start + g.len && g.start < start + len) clash = true;
            if (!clash) {
                gaps.push_back({start, len});
                placed = true;
            }
        }
        if (!placed) fail("DoesNotFit", "could not place non-overlapping gaps");
    }
    std::sort(gaps.begin(), gaps.end(),
              [](const GapSpec& a, const GapSpec& b) { return a.start < b.start; });
    return gaps;
}

double snr(const std::vector<double>& reference, const std::vector<double>& test) {
    if (reference.size() != test.size()) fail("LengthMismatch", "signals differ in length");
    double sig = 0.0, err = 0.0;
    for (size_t i = 0; i < reference.size(); ++i) {
        sig += reference[i] * reference[i];
        double e = reference[i] - test[i];
        err += e * e;
    }
    if (sig == 0.0) fail("ZeroReference", "reference signal is all zero");
    if (err == 0.0) return kSnrCapDb;
    return 10.0 * std::log10(sig / err);
}

double snr_gap(const std::vector<double>& reference, const std::vector<double>& test,
               const std::vector<GapSpec>& gaps) {
    if (reference.size() != test.size()) fail("LengthMismatch", "signals differ in length");
    validate_gaps(gaps, reference.size());
    std::vector<double> r, t;
    for (const auto& g : gaps) {
        for (uint64_t i = g.start; i < g.start + g.len; ++i) {
            r.push_back(reference[i]);
            t.push_back(test[i]);
        }
    }
    return snr(r, t);
}

double log_spectral_distance(const std::vector<double>& reference,
                             const std::vector<double>& test,
                             size_t frame, size_t hop) {
    if (reference.size() != test.size()) fail("LengthMismatch", "signals differ in length");
    if (reference.size() < frame) fail("TooShort", "signal shorter than one frame");

    size_t bins = frame / 2 + 1;
    std::vector<double> window(frame);
    for (size_t i = 0; i < frame; ++i)
        window[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * double(i) / double(frame)));

    double* in = fftw_alloc_real(frame);
    fftw_complex* out = reinterpret_cast<fftw_complex*>(fftw_alloc_complex(bins));
    fftw_plan plan = fftw_plan_dft_r2c_1d(int(frame), in, out, FFTW_ESTIMATE);

    auto spectrum_db = [&](const std::vector<double>& x, size_t off, std::vector<double>& db) {
        for (size_t i = 0; i < frame; ++i) in[i] = x[off + i] * window[i];
        fftw_execute(plan);
        for (size_t b = 0; b < bins; ++b) {
            double p = out[b][0] * out[b][0] + out[b][1] * out[b][1];
            double v = p > 0.0 ? 10.0 * std::log10(p) : -100.0;
            db[b] = std::max(v, -100.0);
        }
    };

    std::vector<double> dref(bins), dtest(bins);
    double total = 0.0;
    size_t frames = 0;
    for (size_t off = 0; off + frame <= reference.size(); off += hop) {
        spectrum_db(reference, off, dref);
        spectrum_db(test, off, dtest);
        double acc = 0.0;
        for (size_t b = 0; b < bins; ++b) {
            double d = dref[b] - dtest[b];
            acc += d * d;
        }
        total += std::sqrt(acc / double(bins));
        ++frames;
    }
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
    return total / double(frames);
}

MetricsReport evaluate(const AudioClip& reference, const AudioClip& test,
                       const std::vector<GapSpec>& gaps) {
    if (reference.samples.size() != test.samples.size())
        fail("LengthMismatch", "clips differ in length");
    std::vector<double> ref = to_doubles(reference);
    std::vector<double> tst = to_doubles(test);

    MetricsReport rep;
    rep.snr_full_db = snr(ref, tst);
    rep.lsd_db = log_spectral_distance(ref, tst);
    if (gaps.empty()) {
        rep.snr_gap_db = rep.snr_full_db;
        rep.pearson_r = pearson_or_zero(ref, tst);
        return rep;
    }
    rep.snr_gap_db = snr_gap(ref, tst, gaps);
    std::vector<double> rg, tg;
    for (const auto& g : gaps) {
        std::vector<double> r1(ref.begin() + std::ptrdiff_t(g.start),
                               ref.begin() + std::ptrdiff_t(g.start + g.len));
        std::vector<double> t1(tst.begin() + std::ptrdiff_t(g.start),
                               tst.begin() + std::ptrdiff_t(g.start + g.len));
        rep.per_gap_snr_db.push_back(snr(r1, t1));
        rg.insert(rg.end(), r1.begin(), r1.end());
        tg.insert(tg.end(), t1.begin(), t1.end());
    }
    rep.pearson_r = pearson_or_zero(rg, tg);
    return rep;
}

std::string metrics_to_json(const MetricsReport& report) {
    nlohmann::ordered_json j;
    j["snr_full"] = report.snr_full_db;
    j["snr_gap"] = report.snr_gap_db;
    j["lsd"] = report.lsd_db;
    j["pearson_r"] = report.pearson_r;
    j["per_gap_snr"] = report.per_gap_snr_db;
    j["lsd_note"] = "lsd is a log-spectral-distance proxy, not a perceptual model (no PEAQ/ODG)";
    return j.dump();
}

BenchmarkPlan plan_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail("BadPlan", std::string("plan is not valid JSON: ") + e.what());
    }
    BenchmarkPlan plan;
    try {
        plan.clips = j.at("clips").get<std::vector<std::string>>();
        if (j.contains("methods")) plan.methods = j["methods"].get<std::vector<std::string>>();
        if (j.contains("gap_lengths_ms"))
            plan.gap_lengths_ms = j["gap_lengths_ms"].get<std::vector<int>>();
        if (j.contains("gaps_per_clip")) plan.gaps_per_clip = j["gaps_per_clip"].get<int>();
        if (j.contains("seed")) plan.seed = j["seed"].get<uint64_t>();
        if (j.contains("record_timing")) plan.record_timing = j["record_timing"].get<bool>();
        if (j.contains("trees")) plan.reconstruct.forest.n_trees = j["trees"].get<int>();
        if (j.contains("max_train_rows"))
            plan.reconstruct.forest.max_train_rows = j["max_train_rows"].get<size_t>();
        if (j.contains("janssen_ar_order"))
            plan.reconstruct.janssen.ar_order = j["janssen_ar_order"].get<int>();
        if (j.contains("janssen_iterations"))
            plan.reconstruct.janssen.iterations = j["janssen_iterations"].get<int>();
    } catch (const nlohmann::json::exception& e) {
        fail("BadPlan", std::string("plan field error: ") + e.what());
    }
    if (plan.clips.empty()) fail("BadPlan", "plan lists no clips");
    return plan;
}

BenchmarkResult run_benchmark(const BenchmarkPlan& plan, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    std::ostringstream csv;
    csv << "clip,method,gap_ms,snr_full,snr_gap,lsd,wall_ms,error\n";

    // win counts per metric; higher-is-better for snr, lower for lsd
    std::map<std::string, std::map<std::string, int>> wins;
    int n_tests = 0, n_failures = 0;

    for (size_t ci = 0; ci < plan.clips.size(); ++ci) {
        const std::string& path = plan.clips[ci];
        std::string stem = fs::path(path).stem().string();
        AudioClip original = read_wav(path);
        SelfEmbedResult embedded = self_embed(original);

        for (int gap_ms : plan.gap_lengths_ms) {
            uint64_t gap_seed = SplitMix64::nth(SplitMix64::nth(plan.seed, ci), uint64_t(gap_ms));
            std::vector<GapSpec> gaps =
                simulate_gaps(embedded.manifest.orig_len, original.sample_rate, {gap_ms},
                              plan.gaps_per_clip, gap_seed);

            AudioClip corrupted = embedded.stego;
            for (const auto& g : gaps)
                for (uint64_t i = g.start; i < g.start + g.len; ++i) corrupted.samples[i] = 0;
            Manifest manifest = embedded.manifest;
            manifest.gaps = gaps;

            ++n_tests;
            struct Score {
                double snr_gap, snr_full, lsd;
            };
            std::map<std::string, Score> scores;

            for (const std::string& method_name : plan.methods) {
                ReconstructConfig cfg = plan.reconstruct;
                cfg.forest.seed = SplitMix64::nth(gap_seed, 17);
                double wall_ms = 0.0;
                try {
                    ReconstructMethod method = method_from_string(method_name);
                    auto t0 = std::chrono::steady_clock::now();
                    AudioClip restored = reconstruct_gap(corrupted, manifest, method, cfg);
                    auto t1 = std::chrono::steady_clock::now();
                    if (plan.record_timing)
                        wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
                    MetricsReport rep = evaluate(original, restored, gaps);
                    write_wav(restored, (fs::path(out_dir) /
                                         (stem + "_" + std::to_string(gap_ms) + "ms_" +
                                          method_name + ".wav"))
                                            .string());
                    scores[method_name] = {rep.snr_gap_db, rep.snr_full_db, rep.lsd_db};
                    csv << stem << "," << method_name << "," << gap_ms << ","
                        << format_double(rep.snr_full_db) << "," << format_double(rep.snr_gap_db)
                        << "," << format_double(rep.lsd_db) << ","
                        << format_double(wall_ms) << ",\n";
                } catch (const Error& e) {
                    ++n_failures;
                    csv << stem << "," << method_name << "," << gap_ms << ",,,,"
                        << format_double(wall_ms) << "," << e.code() << "\n";
                }
            }

            if (!scores.empty()) {
                auto pick_winner = [&](auto better) {
                    auto it = scores.begin();
                    auto best = it++;
                    for (; it != scores.end(); ++it)
                        if (better(it->second, best->second)) best = it;
                    return best->first;
                };
                wins["snr_gap"][pick_winner([](const Score& a, const Score& b) {
                    return a.snr_gap > b.snr_gap;
                })]++;
                wins["snr_full"][pick_winner([](const Score& a, const Score& b) {
                    return a.snr_full > b.snr_full;
                })]++;
                wins["lsd"][pick_winner(
                    [](const Score& a, const Score& b) { return a.lsd < b.lsd; })]++;
            }
        }
    }

    BenchmarkResult result;
    result.tests = n_tests;
    result.failures = n_failures;
    result.csv_path = (fs::path(out_dir) / "results.csv").string();
    result.summary_path = (fs::path(out_dir) / "summary.json").string();

    {
        std::ofstream f(result.csv_path, std::ios::trunc);
        if (!f) fail("IoError", "cannot write " + result.csv_path);
        f << csv.str();
    }
    {
        nlohmann::ordered_json j;
        j["tests"] = n_tests;
        nlohmann::ordered_json w;
        for (const auto& [metric, per_method] : wins) {
            nlohmann::ordered_json m;
            for (const auto& [name, count] : per_method) m[name] = count;
            w[metric] = m;
        }
        j["wins"] = w;
        j["notes"] = "lsd is a log-spectral-distance proxy, not a perceptual model (no PEAQ/ODG)";
        std::ofstream f(result.summary_path, std::ios::trunc);
        if (!f) fail("IoError", "cannot write " + result.summary_path);
        f << j.dump(2) << "\n";
    }
    return result;
}

} // namespace armas
