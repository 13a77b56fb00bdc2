#pragma once

#include "vbp/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace vbp {

// Voice character of one pressure class: base pitch plus the first two
// vocal-tract resonances the clips are shaped with.
struct ClassVoiceParams {
    double pitch_hz = 0.0;
    double formant1_hz = 0.0;
    double formant2_hz = 0.0;
    double bandwidth1_hz = 90.0;
    double bandwidth2_hz = 110.0;
};

struct SyntheticSpec {
    int clips_per_class = 10;
    double duration_s = 1.0;
    int sample_rate_hz = 16000;
    double noise_level = 0.05;  // broadband noise relative to the voiced part's RMS
    std::uint64_t seed = 1;
    ClassVoiceParams low{115.0, 600.0, 1050.0};
    ClassVoiceParams normal{150.0, 730.0, 1250.0};
    ClassVoiceParams high{195.0, 880.0, 1500.0};

    static SyntheticSpec from_json(const std::string& text);
    std::string to_json() const;
};

// Writes clips_per_class WAVs per class under out_dir/clips plus a
// manifest.csv beside them, and returns the loaded manifest. Bytes are a
// pure function of the spec (including its seed).
DatasetManifest generate_synthetic(const SyntheticSpec& spec,
                                   const std::filesystem::path& out_dir);

} // namespace vbp
