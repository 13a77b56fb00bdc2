#include "vbp/synthesis.hpp"

#include "vbp/clustering.hpp"
#include "vbp/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

namespace vbp {

namespace {

struct LabelBand {
    double sys_lo, sys_hi, dia_lo, dia_hi;
};

// Pressure ranges per class, kept well inside the class boundaries so the
// drawn labels always classify as intended.
constexpr LabelBand kBands[kBpClassCount] = {
    {80.0, 88.0, 52.0, 58.0},     // low
    {100.0, 135.0, 65.0, 85.0},   // normal
    {142.0, 175.0, 92.0, 105.0},  // high
};

void check_spec(const SyntheticSpec& spec) {
    if (spec.clips_per_class < 1) throw InvalidConfig("clips_per_class must be >= 1");
    if (spec.duration_s <= 0.0) throw InvalidConfig("duration_s must be positive");
    if (spec.sample_rate_hz < 8000) throw InvalidConfig("sample_rate_hz must be >= 8000");
    if (spec.noise_level < 0.0) throw InvalidConfig("noise_level must be >= 0");
    for (const auto* params : {&spec.low, &spec.normal, &spec.high}) {
        if (params->pitch_hz <= 0.0 || params->formant1_hz <= 0.0 ||
            params->formant2_hz <= params->formant1_hz) {
            throw InvalidConfig("class voice needs pitch > 0 and formant2 > formant1 > 0");
        }
        if (params->bandwidth1_hz <= 0.0 || params->bandwidth2_hz <= 0.0) {
            throw InvalidConfig("formant bandwidths must be positive");
        }
    }
}

// Two-pole resonator; gain is incidental since clips are normalized at the end.
struct Resonator {
    double b1, b2, g;

    Resonator(double freq_hz, double bandwidth_hz, double fs) {
        const double r = std::exp(-std::numbers::pi * bandwidth_hz / fs);
        const double theta = 2.0 * std::numbers::pi * freq_hz / fs;
        b1 = 2.0 * r * std::cos(theta);
        b2 = -r * r;
        g = 1.0 - r;
    }

    void apply(std::vector<double>& x) const {
        double y1 = 0.0;
        double y2 = 0.0;
        for (double& v : x) {
            const double y = g * v + b1 * y1 + b2 * y2;
            y2 = y1;
            y1 = y;
            v = y;
        }
    }
};

std::vector<double> synthesize_clip(const ClassVoiceParams& params, const SyntheticSpec& spec,
                                    Rng& rng) {
    const double fs = spec.sample_rate_hz;
    const auto n = static_cast<std::size_t>(std::lround(spec.duration_s * fs));

    const double pitch = params.pitch_hz * (1.0 + 0.04 * (2.0 * rng.uniform01() - 1.0));
    const double f1 = params.formant1_hz * (1.0 + 0.03 * (2.0 * rng.uniform01() - 1.0));
    const double f2 = params.formant2_hz * (1.0 + 0.03 * (2.0 * rng.uniform01() - 1.0));
    const double vibrato_hz = rng.uniform(3.0, 5.0);
    constexpr double kVibratoDepth = 0.01;

    // Glottal impulse train with mild vibrato.
    std::vector<double> x(n, 0.0);
    double phase = 1.0;  // fire on the first sample
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        const double f0 =
            pitch * (1.0 + kVibratoDepth * std::sin(2.0 * std::numbers::pi * vibrato_hz * t));
        phase += f0 / fs;
        if (phase >= 1.0) {
            phase -= 1.0;
            x[i] = 1.0;
        }
    }

    Resonator(f1, params.bandwidth1_hz, fs).apply(x);
    Resonator(f2, params.bandwidth2_hz, fs).apply(x);

    double rms = 0.0;
    for (double v : x) rms += v * v;
    rms = std::sqrt(rms / static_cast<double>(n));
    if (spec.noise_level > 0.0) {
        const double amp = spec.noise_level * rms;
        for (double& v : x) v += amp * rng.normal();
    }

    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
        for (double& v : x) v *= 0.9 / peak;
    }
    return x;
}

ClassVoiceParams voice_from_json(const nlohmann::json& j, const ClassVoiceParams& defaults) {
    ClassVoiceParams params = defaults;
    params.pitch_hz = j.value("pitch_hz", params.pitch_hz);
    params.formant1_hz = j.value("formant1_hz", params.formant1_hz);
    params.formant2_hz = j.value("formant2_hz", params.formant2_hz);
    params.bandwidth1_hz = j.value("bandwidth1_hz", params.bandwidth1_hz);
    params.bandwidth2_hz = j.value("bandwidth2_hz", params.bandwidth2_hz);
    return params;
}

nlohmann::json voice_to_json(const ClassVoiceParams& params) {
    return {
        {"pitch_hz", params.pitch_hz},
        {"formant1_hz", params.formant1_hz},
        {"formant2_hz", params.formant2_hz},
        {"bandwidth1_hz", params.bandwidth1_hz},
        {"bandwidth2_hz", params.bandwidth2_hz},
    };
}

} // namespace

SyntheticSpec SyntheticSpec::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("synthetic spec JSON: ") + e.what());
    }
    SyntheticSpec spec;
    try {
        spec.clips_per_class = j.value("clips_per_class", spec.clips_per_class);
        spec.duration_s = j.value("duration_s", spec.duration_s);
        spec.sample_rate_hz = j.value("sample_rate_hz", spec.sample_rate_hz);
        spec.noise_level = j.value("noise_level", spec.noise_level);
        spec.seed = j.value("seed", spec.seed);
        if (j.contains("low")) spec.low = voice_from_json(j.at("low"), spec.low);
        if (j.contains("normal")) spec.normal = voice_from_json(j.at("normal"), spec.normal);
        if (j.contains("high")) spec.high = voice_from_json(j.at("high"), spec.high);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptFile(std::string("synthetic spec JSON: ") + e.what());
    }
    check_spec(spec);
    return spec;
}

std::string SyntheticSpec::to_json() const {
    nlohmann::json j;
    j["clips_per_class"] = clips_per_class;
    j["duration_s"] = duration_s;
    j["sample_rate_hz"] = sample_rate_hz;
    j["noise_level"] = noise_level;
    j["seed"] = seed;
    j["low"] = voice_to_json(low);
    j["normal"] = voice_to_json(normal);
    j["high"] = voice_to_json(high);
    return j.dump(2);
}

DatasetManifest generate_synthetic(const SyntheticSpec& spec,
                                   const std::filesystem::path& out_dir) {
    check_spec(spec);

    std::error_code ec;
    std::filesystem::create_directories(out_dir / "clips", ec);
    if (ec) throw IoFailure("cannot create " + (out_dir / "clips").string());

    const ClassVoiceParams* voices[kBpClassCount] = {&spec.low, &spec.normal, &spec.high};

    std::vector<ManifestRow> rows;
    rows.reserve(static_cast<std::size_t>(spec.clips_per_class) * kBpClassCount);
    for (std::size_t class_idx = 0; class_idx < kBpClassCount; ++class_idx) {
        for (int i = 0; i < spec.clips_per_class; ++i) {
            const auto ordinal =
                class_idx * static_cast<std::size_t>(spec.clips_per_class) +
                static_cast<std::size_t>(i);
            // One child stream per clip, so clip bytes depend only on the
            // spec seed and the clip's position in the corpus.
            Rng rng(Rng::derive(spec.seed, ordinal));

            AudioClip clip;
            clip.sample_rate_hz = spec.sample_rate_hz;
            clip.samples = synthesize_clip(*voices[class_idx], spec, rng);

            char name[64];
            std::snprintf(name, sizeof name, "%s_%03d.wav",
                          to_string(static_cast<BpClass>(class_idx)), i);
            clip.id = name;
            write_wav(out_dir / "clips" / name, clip);

            const LabelBand& band = kBands[class_idx];
            ManifestRow row;
            row.clip_path = std::string("clips/") + name;
            row.systolic = rng.uniform(band.sys_lo, band.sys_hi);
            row.diastolic = rng.uniform(band.dia_lo, band.dia_hi);
            row.age = 20 + static_cast<int>(rng.index(46));
            row.sex = rng.index(2) == 0 ? 'M' : 'F';
            rows.push_back(std::move(row));
        }
    }

    const std::filesystem::path manifest_path = out_dir / "manifest.csv";
    write_manifest(manifest_path, rows);
    return load_manifest(manifest_path);
}

} // namespace vbp
