#include "armas/audio_io.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include "armas/error.hpp"

namespace armas {

namespace {

uint32_t read_u32le(const uint8_t* p) {
    return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
}

uint16_t read_u16le(const uint8_t* p) { return uint16_t(p[0]) | uint16_t(p[1]) << 8; }

void put_u32le(std::vector<uint8_t>& out, uint32_t v) {
    out.push_back(uint8_t(v & 0xff));
    out.push_back(uint8_t((v >> 8) & 0xff));
    out.push_back(uint8_t((v >> 16) & 0xff));
    out.push_back(uint8_t((v >> 24) & 0xff));
}

void put_u16le(std::vector<uint8_t>& out, uint16_t v) {
    out.push_back(uint8_t(v & 0xff));
    out.push_back(uint8_t((v >> 8) & 0xff));
}

} // namespace

AudioClip read_wav(const std::string& path, int channel) {
    std::ifstream f(path, std::ios::binary);
    if (!f) fail("IoError", "cannot open " + path);
    std::vector<uint8_t> raw((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    if (raw.size() < 12 || std::memcmp(raw.data(), "RIFF", 4) != 0 ||
        std::memcmp(raw.data() + 8, "WAVE", 4) != 0)
        fail("NotWav", path + " is not a RIFF/WAVE file");

    bool have_fmt = false;
    uint16_t format = 0, channels = 0, bits = 0;
    uint32_t rate = 0;
    const uint8_t* data = nullptr;
    uint32_t data_len = 0;

    size_t pos = 12;
    while (pos + 8 <= raw.size()) {
        const uint8_t* hdr = raw.data() + pos;
        uint32_t chunk_len = read_u32le(hdr + 4);
        size_t body = pos + 8;
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (chunk_len < 16 || body + 16 > raw.size())
                fail("TruncatedFile", "fmt chunk truncated");
            format = read_u16le(raw.data() + body);
            channels = read_u16le(raw.data() + body + 2);
            rate = read_u32le(raw.data() + body + 4);
            bits = read_u16le(raw.data() + body + 14);
            have_fmt = true;
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            if (body + chunk_len > raw.size())
                fail("TruncatedFile", "data chunk shorter than header claims");
            data = raw.data() + body;
            data_len = chunk_len;
        }
        pos = body + chunk_len + (chunk_len & 1); // chunks are word-aligned
    }

    if (!have_fmt || !data) fail("NotWav", "missing fmt or data chunk");
    if (format != 1 || bits != 16)
        fail("UnsupportedEncoding", "only PCM16 is supported");
    if (channels == 0 || rate == 0) fail("UnsupportedEncoding", "bad fmt fields");
    if (channels > 1 && channel < 0)
        fail("MultichannelWithoutFlag",
             "file has " + std::to_string(channels) + " channels; pass --channel");
    if (channel >= int(channels) && channels > 1)
        fail("MultichannelWithoutFlag", "channel index out of range");

    size_t pick = channels > 1 ? size_t(channel) : 0;
    size_t frame_bytes = size_t(channels) * 2;
    size_t n_frames = data_len / frame_bytes;

    AudioClip clip;
    clip.sample_rate = rate;
    clip.samples.resize(n_frames);
    for (size_t i = 0; i < n_frames; ++i) {
        const uint8_t* s = data + i * frame_bytes + pick * 2;
        clip.samples[i] = int16_t(uint16_t(s[0]) | uint16_t(s[1]) << 8);
    }
    return clip;
}

void write_wav(const AudioClip& clip, const std::string& path) {
    uint32_t data_len = uint32_t(clip.samples.size() * 2);
    std::vector<uint8_t> out;
    out.reserve(44 + data_len);

    out.insert(out.end(), {'R', 'I', 'F', 'F'});
    put_u32le(out, 36 + data_len);
    out.insert(out.end(), {'W', 'A', 'V', 'E'});
    out.insert(out.end(), {'f', 'm', 't', ' '});
    put_u32le(out, 16);
    put_u16le(out, 1); // PCM
    put_u16le(out, 1); // mono
    put_u32le(out, clip.sample_rate);
    put_u32le(out, clip.sample_rate * 2);
    put_u16le(out, 2);
    put_u16le(out, 16);
    out.insert(out.end(), {'d', 'a', 't', 'a'});
    put_u32le(out, data_len);
    for (int16_t s : clip.samples) {
        out.push_back(uint8_t(uint16_t(s) & 0xff));
        out.push_back(uint8_t(uint16_t(s) >> 8));
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) fail("IoError", "cannot open " + path + " for writing");
    f.write(reinterpret_cast<const char*>(out.data()), std::streamsize(out.size()));
    if (!f) fail("IoError", "short write to " + path);
}

ByteSignal scale_to_bytes(const std::vector<double>& samples) {
    if (samples.empty()) fail("EmptyInput", "cannot scale an empty sequence");
    auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    double lo = *lo_it, hi = *hi_it;

    ByteSignal out;
    out.scale = {lo, hi, lo == hi};
    out.values.resize(samples.size());
    if (out.scale.degenerate) {
        std::fill(out.values.begin(), out.values.end(), 0.0);
        return out;
    }
    double k = 255.0 / (hi - lo);
    for (size_t i = 0; i < samples.size(); ++i) out.values[i] = (samples[i] - lo) * k;
    return out;
}

std::vector<double> unscale_from_bytes(const ByteSignal& byte_signal) {
    std::vector<double> out(byte_signal.values.size());
    const auto& sc = byte_signal.scale;
    if (sc.degenerate) {
        std::fill(out.begin(), out.end(), sc.min_val);
        return out;
    }
    double k = (sc.max_val - sc.min_val) / 255.0;
    for (size_t i = 0; i < out.size(); ++i) out[i] = byte_signal.values[i] * k + sc.min_val;
    return out;
}

} // namespace armas
