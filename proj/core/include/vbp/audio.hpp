#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vbp {

struct BpLabel {
    double systolic_mmhg = 0.0;
    double diastolic_mmhg = 0.0;
};

// A label is usable only when systolic > diastolic > 0.
bool is_valid_label(const BpLabel& label);

struct AudioClip {
    std::vector<double> samples;  // amplitudes in [-1, 1]
    int sample_rate_hz = 16000;   // >= 8000
    std::string id;
    std::optional<BpLabel> label;
};

struct FrameSequence {
    std::vector<std::vector<double>> frames;
    std::size_t frame_len = 0;
    std::size_t hop = 0;
    int sample_rate_hz = 0;
};

struct PreprocessConfig {
    int filter_order = 32;             // adaptive line enhancer taps
    double step_size = 0.1;            // normalized LMS step
    double reference_delay_ms = 25.0;  // self-reference delay (one analysis frame)
};

// Reads a RIFF/WAVE file: PCM 16-bit only, mono or stereo (stereo is
// averaged down), integer samples scaled to [-1, 1].
AudioClip load_wav(const std::filesystem::path& path);

// Writes mono PCM 16-bit; samples are clamped to [-1, 1] before quantizing.
void write_wav(const std::filesystem::path& path, const AudioClip& clip);

// DC removal, adaptive line enhancement against a delayed copy of the input
// (train over the clip, then refilter with the converged taps), DC removal
// again, and peak normalization. Silent input passes through as silence.
AudioClip preprocess(const AudioClip& clip, const PreprocessConfig& cfg = {});

// Fixed-size analysis windows; a trailing partial window is dropped.
FrameSequence frame(const AudioClip& clip, std::size_t frame_len, std::size_t hop);

} // namespace vbp
