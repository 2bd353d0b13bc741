#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace armas {

// Mono PCM16 audio.
struct AudioClip {
    std::vector<int16_t> samples;
    uint32_t sample_rate = 0;

    size_t length() const { return samples.size(); }
};

struct ScaleParams {
    double min_val = 0.0;
    double max_val = 0.0;
    bool degenerate = false; // all input values equal
};

// Signal mapped affinely onto [0, 255]. Values stay real; quantization to
// {0,1} happens only inside dithering.
struct ByteSignal {
    std::vector<double> values;
    ScaleParams scale;
};

// Reads a RIFF/WAVE file. PCM format 1, 16 bits/sample. Multichannel files
// are rejected unless `channel` selects one (0-based).
// Errors: NotWav, UnsupportedEncoding, MultichannelWithoutFlag, TruncatedFile, IoError.
AudioClip read_wav(const std::string& path, int channel = -1);

// Canonical 44-byte header, little-endian payload. Errors: IoError.
void write_wav(const AudioClip& clip, const std::string& path);

// Min-max map onto [0, 255]; constant input maps to all zeros with the
// degenerate flag set. Errors: EmptyInput.
ByteSignal scale_to_bytes(const std::vector<double>& samples);

// Inverse of scale_to_bytes; degenerate signals return all min_val.
std::vector<double> unscale_from_bytes(const ByteSignal& byte_signal);

inline std::vector<double> to_doubles(const AudioClip& clip) {
    return std::vector<double>(clip.samples.begin(), clip.samples.end());
}

} // namespace armas
