#include "vbp/audio.hpp"

#include "vbp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>

namespace vbp {

bool is_valid_label(const BpLabel& label) {
    return label.diastolic_mmhg > 0.0 && label.systolic_mmhg > label.diastolic_mmhg;
}

namespace {

constexpr double kInt16Scale = 32768.0;

std::uint32_t read_u32(const std::vector<unsigned char>& b, std::size_t at) {
    return static_cast<std::uint32_t>(b[at]) |
           static_cast<std::uint32_t>(b[at + 1]) << 8 |
           static_cast<std::uint32_t>(b[at + 2]) << 16 |
           static_cast<std::uint32_t>(b[at + 3]) << 24;
}

std::uint16_t read_u16(const std::vector<unsigned char>& b, std::size_t at) {
    return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

bool chunk_id_is(const std::vector<unsigned char>& b, std::size_t at, const char* id) {
    return b[at] == static_cast<unsigned char>(id[0]) &&
           b[at + 1] == static_cast<unsigned char>(id[1]) &&
           b[at + 2] == static_cast<unsigned char>(id[2]) &&
           b[at + 3] == static_cast<unsigned char>(id[3]);
}

void validate_clip(const AudioClip& clip, const char* who) {
    if (clip.samples.empty()) {
        throw InvalidConfig(std::string(who) + ": clip has no samples");
    }
    if (clip.sample_rate_hz < 8000) {
        throw InvalidConfig(std::string(who) + ": sample rate below 8000 Hz");
    }
}

void remove_mean(std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    for (double& v : x) v -= mean;
}

double peak_of(const std::vector<double>& x) {
    double peak = 0.0;
    for (double v : x) peak = std::max(peak, std::abs(v));
    return peak;
}

// Adaptive line enhancer: adapt an NLMS predictor of x[t] from the delayed
// window x[t-delay-k] over the whole clip, then refilter with the converged
// taps. The periodic (voiced) part is predictable across the delay, broadband
// noise is not. Samples without a full reference window pass through.
std::vector<double> line_enhance(const std::vector<double>& x, int order, double mu,
                                 std::size_t delay) {
    const std::size_t n = x.size();
    const std::size_t warmup = delay + static_cast<std::size_t>(order);
    if (n <= warmup) return x;

    std::vector<double> w(static_cast<std::size_t>(order), 0.0);
    constexpr double kEnergyFloor = 1e-8;
    for (std::size_t t = warmup; t < n; ++t) {
        double predicted = 0.0;
        double energy = kEnergyFloor;
        for (int k = 0; k < order; ++k) {
            const double ref = x[t - delay - static_cast<std::size_t>(k)];
            predicted += w[static_cast<std::size_t>(k)] * ref;
            energy += ref * ref;
        }
        const double gain = mu * (x[t] - predicted) / energy;
        for (int k = 0; k < order; ++k) {
            w[static_cast<std::size_t>(k)] += gain * x[t - delay - static_cast<std::size_t>(k)];
        }
    }

    std::vector<double> out(x);
    for (std::size_t t = warmup; t < n; ++t) {
        double predicted = 0.0;
        for (int k = 0; k < order; ++k) {
            predicted += w[static_cast<std::size_t>(k)] * x[t - delay - static_cast<std::size_t>(k)];
        }
        out[t] = predicted;
    }
    return out;
}

} // namespace

AudioClip load_wav(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    if (in.bad()) throw IoFailure("read failed for " + path.string());

    if (bytes.size() < 12) throw CorruptFile(path.string() + ": shorter than a RIFF header");
    if (!chunk_id_is(bytes, 0, "RIFF") || !chunk_id_is(bytes, 8, "WAVE")) {
        throw UnsupportedFormat(path.string() + ": not a RIFF/WAVE file");
    }

    bool have_fmt = false;
    std::uint16_t channels = 0;
    std::uint32_t sample_rate = 0;
    std::uint16_t bits = 0;
    std::size_t data_at = 0;
    std::size_t data_len = 0;
    bool have_data = false;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint32_t chunk_len = read_u32(bytes, pos + 4);
        const std::size_t body = pos + 8;
        if (body + chunk_len > bytes.size()) {
            throw CorruptFile(path.string() + ": truncated chunk");
        }
        if (chunk_id_is(bytes, pos, "fmt ")) {
            if (chunk_len < 16) throw CorruptFile(path.string() + ": fmt chunk too short");
            const std::uint16_t format = read_u16(bytes, body);
            channels = read_u16(bytes, body + 2);
            sample_rate = read_u32(bytes, body + 4);
            bits = read_u16(bytes, body + 14);
            if (format != 1) {
                throw UnsupportedFormat(path.string() + ": only PCM encoding is supported");
            }
            if (bits != 16) {
                throw UnsupportedFormat(path.string() + ": only 16-bit samples are supported");
            }
            if (channels != 1 && channels != 2) {
                throw UnsupportedFormat(path.string() + ": only mono or stereo is supported");
            }
            if (sample_rate < 8000) {
                throw UnsupportedFormat(path.string() + ": sample rate below 8000 Hz");
            }
            have_fmt = true;
        } else if (chunk_id_is(bytes, pos, "data")) {
            data_at = body;
            data_len = chunk_len;
            have_data = true;
        }
        pos = body + chunk_len + (chunk_len & 1);  // chunks are word-aligned
    }
    if (!have_fmt) throw CorruptFile(path.string() + ": missing fmt chunk");
    if (!have_data) throw CorruptFile(path.string() + ": missing data chunk");

    const std::size_t bytes_per_frame = 2u * channels;
    if (data_len == 0) throw CorruptFile(path.string() + ": empty data chunk");
    if (data_len % bytes_per_frame != 0) {
        throw CorruptFile(path.string() + ": data chunk is not a whole number of frames");
    }

    const std::size_t n_frames = data_len / bytes_per_frame;
    AudioClip clip;
    clip.sample_rate_hz = static_cast<int>(sample_rate);
    clip.id = path.stem().string();
    clip.samples.resize(n_frames);
    for (std::size_t i = 0; i < n_frames; ++i) {
        double acc = 0.0;
        for (std::uint16_t c = 0; c < channels; ++c) {
            const std::size_t at = data_at + i * bytes_per_frame + 2u * c;
            const auto raw = static_cast<std::int16_t>(read_u16(bytes, at));
            acc += static_cast<double>(raw);
        }
        clip.samples[i] = acc / channels / kInt16Scale;
    }
    return clip;
}

void write_wav(const std::filesystem::path& path, const AudioClip& clip) {
    validate_clip(clip, "write_wav");

    const std::uint32_t n = static_cast<std::uint32_t>(clip.samples.size());
    const std::uint32_t data_len = n * 2;
    const std::uint32_t rate = static_cast<std::uint32_t>(clip.sample_rate_hz);

    std::vector<unsigned char> out;
    out.reserve(44 + data_len);
    auto put_u32 = [&out](std::uint32_t v) {
        out.push_back(static_cast<unsigned char>(v & 0xff));
        out.push_back(static_cast<unsigned char>(v >> 8 & 0xff));
        out.push_back(static_cast<unsigned char>(v >> 16 & 0xff));
        out.push_back(static_cast<unsigned char>(v >> 24 & 0xff));
    };
    auto put_u16 = [&out](std::uint16_t v) {
        out.push_back(static_cast<unsigned char>(v & 0xff));
        out.push_back(static_cast<unsigned char>(v >> 8 & 0xff));
    };
    auto put_tag = [&out](const char* tag) {
        for (int i = 0; i < 4; ++i) out.push_back(static_cast<unsigned char>(tag[i]));
    };

    put_tag("RIFF");
    put_u32(36 + data_len);
    put_tag("WAVE");
    put_tag("fmt ");
    put_u32(16);
    put_u16(1);  // PCM
    put_u16(1);  // mono
    put_u32(rate);
    put_u32(rate * 2);  // byte rate
    put_u16(2);         // block align
    put_u16(16);        // bits
    put_tag("data");
    put_u32(data_len);
    for (double v : clip.samples) {
        const double clamped = std::clamp(v, -1.0, 1.0);
        const auto q = static_cast<std::int16_t>(std::lround(clamped * 32767.0));
        put_u16(static_cast<std::uint16_t>(q));
    }

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoFailure("cannot open " + path.string() + " for writing");
    file.write(reinterpret_cast<const char*>(out.data()),
               static_cast<std::streamsize>(out.size()));
    if (!file) throw IoFailure("write failed for " + path.string());
}

AudioClip preprocess(const AudioClip& clip, const PreprocessConfig& cfg) {
    validate_clip(clip, "preprocess");
    if (cfg.filter_order < 1 || cfg.step_size <= 0.0 || cfg.step_size >= 2.0 ||
        cfg.reference_delay_ms <= 0.0) {
        throw InvalidConfig("preprocess: filter_order >= 1, 0 < step_size < 2, delay > 0");
    }

    AudioClip out = clip;
    remove_mean(out.samples);

    constexpr double kSilence = 1e-12;
    if (peak_of(out.samples) <= kSilence) {
        // Nothing to enhance or scale; zero-mean silence is returned as-is.
        std::fill(out.samples.begin(), out.samples.end(), 0.0);
        return out;
    }

    const auto delay = static_cast<std::size_t>(std::max<long>(
        1, std::lround(cfg.reference_delay_ms * clip.sample_rate_hz / 1000.0)));
    out.samples = line_enhance(out.samples, cfg.filter_order, cfg.step_size, delay);

    remove_mean(out.samples);
    const double peak = peak_of(out.samples);
    if (peak > kSilence) {
        for (double& v : out.samples) v /= peak;
    } else {
        std::fill(out.samples.begin(), out.samples.end(), 0.0);
    }
    return out;
}

FrameSequence frame(const AudioClip& clip, std::size_t frame_len, std::size_t hop) {
    validate_clip(clip, "frame");
    if (frame_len == 0 || hop == 0) {
        throw InvalidWindow("frame: frame_len and hop must be >= 1");
    }
    if (frame_len > clip.samples.size()) {
        throw InvalidWindow("frame: frame_len exceeds clip length");
    }

    FrameSequence seq;
    seq.frame_len = frame_len;
    seq.hop = hop;
    seq.sample_rate_hz = clip.sample_rate_hz;
    const std::size_t count = (clip.samples.size() - frame_len) / hop + 1;
    seq.frames.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto begin = clip.samples.begin() + static_cast<std::ptrdiff_t>(i * hop);
        seq.frames.emplace_back(begin, begin + static_cast<std::ptrdiff_t>(frame_len));
    }
    return seq;
}

} // namespace vbp
