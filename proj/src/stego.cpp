#include "armas/stego.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "armas/error.hpp"
#include "armas/rng.hpp"

namespace armas {

Permutation make_permutation(uint64_t length, StegoKey key) {
    if (length == 0) fail("ZeroLength", "permutation length must be positive");
    Permutation p;
    p.mapping.resize(length);
    for (uint64_t i = 0; i < length; ++i) p.mapping[i] = i;
    SplitMix64 rng(key.seed);
    for (uint64_t i = length - 1; i >= 1; --i) {
        uint64_t j = rng.next_below(i + 1);
        std::swap(p.mapping[i], p.mapping[j]);
    }
    return p;
}

Permutation invert_permutation(const Permutation& p) {
    uint64_t n = p.mapping.size();
    Permutation q;
    q.mapping.assign(n, n); // sentinel to detect non-bijections
    for (uint64_t i = 0; i < n; ++i) {
        uint64_t v = p.mapping[i];
        if (v >= n || q.mapping[v] != n) fail("NotABijection", "mapping is not a permutation");
        q.mapping[v] = i;
    }
    return q;
}

std::vector<int16_t> embed_lsb(const std::vector<int16_t>& samples,
                               const std::vector<uint8_t>& bits) {
    if (samples.size() != bits.size())
        fail("LengthMismatch", "bit stream length must equal sample count");
    std::vector<int16_t> out(samples.size());
    for (size_t i = 0; i < samples.size(); ++i)
        out[i] = int16_t((uint16_t(samples[i]) & 0xfffe) | (bits[i] & 1));
    return out;
}

std::vector<uint8_t> extract_lsb(const std::vector<int16_t>& samples) {
    std::vector<uint8_t> out(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) out[i] = uint8_t(uint16_t(samples[i]) & 1);
    return out;
}

SelfEmbedResult self_embed(const AudioClip& clip, uint64_t seed_override,
                           bool has_seed_override, double sigma) {
    size_t len = clip.samples.size();
    if (len < 4) fail("TooShort", "clip must have at least 4 samples");

    ByteSignal bytes = scale_to_bytes(to_doubles(clip));
    SignalMatrix mat = reshape_to_matrix(bytes.values);
    BitPlane plane = dither(mat);

    std::vector<uint8_t> bitstream(plane.bits.begin(),
                                   plane.bits.begin() + std::ptrdiff_t(len));

    // The paper keys the permutation by the segment length itself.
    uint64_t seed = has_seed_override ? seed_override : uint64_t(len);
    Permutation perm = make_permutation(len, {seed});
    std::vector<uint8_t> scattered = apply_permutation(perm, bitstream);

    SelfEmbedResult result;
    result.stego.sample_rate = clip.sample_rate;
    result.stego.samples = embed_lsb(clip.samples, scattered);
    result.manifest.version = 1;
    result.manifest.seed = {seed};
    result.manifest.orig_len = len;
    result.manifest.matrix_rows = uint32_t(mat.rows);
    result.manifest.matrix_cols = uint32_t(mat.cols);
    result.manifest.scale = bytes.scale;
    result.manifest.sample_rate = clip.sample_rate;
    result.manifest.sigma = sigma;
    return result;
}

std::vector<double> extract_side_info(const AudioClip& stego, const Manifest& manifest) {
    size_t len = stego.samples.size();
    if (len != manifest.orig_len)
        fail("ManifestMismatch", "manifest orig_len does not match clip length");
    if (uint64_t(manifest.matrix_rows) * manifest.matrix_cols < manifest.orig_len)
        fail("ManifestMismatch", "manifest matrix too small for orig_len");

    std::vector<uint8_t> raw = extract_lsb(stego.samples);
    Permutation perm = make_permutation(len, manifest.seed);
    Permutation inv = invert_permutation(perm);
    std::vector<uint8_t> bitstream = apply_permutation(inv, raw);

    // Rebuild the plane; the padding tail was never embedded and reads as 0.
    BitPlane plane;
    plane.rows = manifest.matrix_rows;
    plane.cols = manifest.matrix_cols;
    plane.orig_len = len;
    plane.bits.assign(size_t(plane.rows) * plane.cols, 0);
    std::copy(bitstream.begin(), bitstream.end(), plane.bits.begin());

    SignalMatrix smoothed = inverse_halftone(plane, {manifest.sigma});
    return flatten_matrix(smoothed);
}

std::string manifest_to_json(const Manifest& m) {
    nlohmann::ordered_json j;
    j["version"] = m.version;
    j["seed"] = m.seed.seed;
    j["orig_len"] = m.orig_len;
    j["matrix_rows"] = m.matrix_rows;
    j["matrix_cols"] = m.matrix_cols;
    j["scale_min"] = m.scale.min_val;
    j["scale_max"] = m.scale.max_val;
    j["degenerate"] = m.scale.degenerate;
    j["sample_rate"] = m.sample_rate;
    j["sigma"] = m.sigma;
    j["gaps"] = nlohmann::ordered_json::array();
    for (const auto& g : m.gaps) j["gaps"].push_back({{"start", g.start}, {"len", g.len}});
    return j.dump();
}

Manifest manifest_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail("ManifestMismatch", std::string("manifest is not valid JSON: ") + e.what());
    }
    Manifest m;
    try {
        m.version = j.at("version").get<int>();
        m.seed.seed = j.at("seed").get<uint64_t>();
        m.orig_len = j.at("orig_len").get<uint64_t>();
        m.matrix_rows = j.at("matrix_rows").get<uint32_t>();
        m.matrix_cols = j.at("matrix_cols").get<uint32_t>();
        m.scale.min_val = j.at("scale_min").get<double>();
        m.scale.max_val = j.at("scale_max").get<double>();
        m.scale.degenerate = j.at("degenerate").get<bool>();
        m.sample_rate = j.at("sample_rate").get<uint32_t>();
        m.sigma = j.at("sigma").get<double>();
        for (const auto& g : j.at("gaps"))
            m.gaps.push_back({g.at("start").get<uint64_t>(), g.at("len").get<uint64_t>()});
    } catch (const nlohmann::json::exception& e) {
        fail("ManifestMismatch", std::string("manifest missing field: ") + e.what());
    }
    validate_gaps(m.gaps, m.orig_len);
    return m;
}

void save_manifest(const Manifest& m, const std::string& path) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) fail("IoError", "cannot open " + path + " for writing");
    f << manifest_to_json(m) << "\n";
}

Manifest load_manifest(const std::string& path) {
    std::ifstream f(path);
    if (!f) fail("IoError", "cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return manifest_from_json(ss.str());
}

} // namespace armas
