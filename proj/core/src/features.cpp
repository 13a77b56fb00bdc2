#include "vbp/features.hpp"

#include "vbp/dsp.hpp"
#include "vbp/errors.hpp"
#include "text_format.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

namespace vbp {

namespace {

constexpr double kLogEnergyFloor = 1e-10;
constexpr double kSilencePower = 1e-300;

void check_clip(const AudioClip& clip) {
    if (clip.samples.empty()) throw InvalidConfig("clip has no samples");
    if (clip.sample_rate_hz < 8000) throw InvalidConfig("sample rate below 8000 Hz");
}

std::vector<double> windowed_power(std::span<const double> frame) {
    const auto window = dsp::hann_window(frame.size());
    std::vector<double> shaped(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) shaped[i] = frame[i] * window[i];
    return dsp::power_spectrum(shaped, dsp::next_pow2(frame.size()));
}

struct PitchScan {
    bool voiced = false;
    double strength = 0.0;  // best normalized autocorrelation in the lag range
    double lag = 0.0;       // refined lag, in samples
};

// Shared by pitch() and harmonic_ratio(). The normalization is the unbiased
// one, (r[tau] / (N - tau)) / (r[0] / N), so a periodic signal scores ~1
// even when the lag eats a large share of the frame.
PitchScan scan_pitch(std::span<const double> frame, int sample_rate_hz,
                     const FeatureConfig& cfg) {
    if (sample_rate_hz < 8000) throw InvalidConfig("sample rate below 8000 Hz");
    if (cfg.pitch_min_hz <= 0.0 || cfg.pitch_max_hz <= cfg.pitch_min_hz) {
        throw InvalidConfig("pitch range must satisfy 0 < min < max");
    }

    PitchScan scan;
    const std::size_t n = frame.size();
    if (n < 4) return scan;

    const double fs = sample_rate_hz;
    const auto lag_min = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::floor(fs / cfg.pitch_max_hz)));
    const auto lag_max = std::min<std::size_t>(
        n / 2, static_cast<std::size_t>(std::ceil(fs / cfg.pitch_min_hz)));
    if (lag_max <= lag_min) return scan;

    const std::vector<double> r = dsp::autocorrelation(frame, lag_max);
    if (r[0] <= 0.0) return scan;

    const auto normalized = [&](std::size_t tau) {
        return r[tau] / static_cast<double>(n - tau) / (r[0] / static_cast<double>(n));
    };

    std::size_t best_tau = lag_min;
    double best = normalized(lag_min);
    for (std::size_t tau = lag_min + 1; tau <= lag_max; ++tau) {
        const double value = normalized(tau);
        if (value > best) {
            best = value;
            best_tau = tau;
        }
    }

    scan.strength = std::clamp(best, 0.0, 1.0);
    scan.voiced = best >= cfg.voicing_threshold;

    // A periodic signal peaks equally at every multiple of its period, and
    // the global maximum can land on a multiple (half frequency). Prefer the
    // smallest local maximum that comes close to the global one; the gate is
    // high enough that genuine sub-period peaks don't qualify.
    constexpr double kOctaveGate = 0.9;
    std::size_t chosen_tau = best_tau;
    for (std::size_t tau = lag_min; tau < best_tau; ++tau) {
        const double value = normalized(tau);
        if (value < kOctaveGate * best) continue;
        const bool rises_from_left = tau == lag_min || value >= normalized(tau - 1);
        const bool falls_to_right = tau == lag_max || value >= normalized(tau + 1);
        if (rises_from_left && falls_to_right) {
            chosen_tau = tau;
            break;
        }
    }

    double lag = static_cast<double>(chosen_tau);
    if (chosen_tau > lag_min && chosen_tau < lag_max) {
        const double y1 = normalized(chosen_tau - 1);
        const double y2 = normalized(chosen_tau);
        const double y3 = normalized(chosen_tau + 1);
        const double denom = y1 - 2.0 * y2 + y3;
        if (std::abs(denom) > 1e-12) {
            lag += std::clamp(0.5 * (y1 - y3) / denom, -0.5, 0.5);
        }
    }
    scan.lag = lag;
    return scan;
}

} // namespace

std::array<double, kFeatureCount> FeatureVector::values() const {
    std::array<double, kFeatureCount> out{};
    std::size_t at = 0;
    out[at++] = zcr;
    out[at++] = delta_zcr;
    out[at++] = haar_energy_approx;
    out[at++] = haar_energy_detail;
    out[at++] = pitch_hz;
    out[at++] = loudness_rms;
    out[at++] = spectral_entropy;
    for (double c : mel_lpc) out[at++] = c;
    out[at++] = variance;
    out[at++] = mean;
    out[at++] = harmonic_ratio;
    out[at++] = spectral_centroid_hz;
    out[at++] = energy;
    out[at++] = formant1_hz;
    out[at++] = formant2_hz;
    out[at++] = formant1_amp;
    out[at++] = formant2_amp;
    out[at++] = formant1_bw;
    out[at++] = formant2_bw;
    return out;
}

FeatureVector FeatureVector::from_values(std::span<const double> values) {
    if (values.size() != kFeatureCount) {
        throw LengthMismatch("feature vector needs exactly " +
                             std::to_string(kFeatureCount) + " values");
    }
    FeatureVector fv;
    std::size_t at = 0;
    fv.zcr = values[at++];
    fv.delta_zcr = values[at++];
    fv.haar_energy_approx = values[at++];
    fv.haar_energy_detail = values[at++];
    fv.pitch_hz = values[at++];
    fv.loudness_rms = values[at++];
    fv.spectral_entropy = values[at++];
    for (double& c : fv.mel_lpc) c = values[at++];
    fv.variance = values[at++];
    fv.mean = values[at++];
    fv.harmonic_ratio = values[at++];
    fv.spectral_centroid_hz = values[at++];
    fv.energy = values[at++];
    fv.formant1_hz = values[at++];
    fv.formant2_hz = values[at++];
    fv.formant1_amp = values[at++];
    fv.formant2_amp = values[at++];
    fv.formant1_bw = values[at++];
    fv.formant2_bw = values[at++];
    return fv;
}

const std::array<std::string, kFeatureCount>& FeatureVector::names() {
    static const std::array<std::string, kFeatureCount> kNames = {
        "zcr",
        "delta_zcr",
        "haar_energy_approx",
        "haar_energy_detail",
        "pitch_hz",
        "loudness_rms",
        "spectral_entropy",
        "mel_lpc1",
        "mel_lpc2",
        "mel_lpc3",
        "mel_lpc4",
        "mel_lpc5",
        "mel_lpc6",
        "mel_lpc7",
        "mel_lpc8",
        "mel_lpc9",
        "mel_lpc10",
        "mel_lpc11",
        "mel_lpc12",
        "mel_lpc13",
        "variance",
        "mean",
        "harmonic_ratio",
        "spectral_centroid_hz",
        "energy",
        "formant1_hz",
        "formant2_hz",
        "formant1_amp",
        "formant2_amp",
        "formant1_bw",
        "formant2_bw",
    };
    return kNames;
}

double zero_crossing_rate(std::span<const double> frame) {
    if (frame.empty()) throw InvalidWindow("zero_crossing_rate: empty frame");
    if (frame.size() < 2) return 0.0;
    std::size_t crossings = 0;
    for (std::size_t i = 0; i + 1 < frame.size(); ++i) {
        if (frame[i] * frame[i + 1] < 0.0) ++crossings;
    }
    return static_cast<double>(crossings) / static_cast<double>(frame.size() - 1);
}

std::vector<double> delta_zero_crossing(const FrameSequence& frames) {
    if (frames.frames.size() < 2) {
        throw TooFewFrames("delta_zero_crossing needs at least 2 frames");
    }
    std::vector<double> rates;
    rates.reserve(frames.frames.size());
    for (const auto& fr : frames.frames) rates.push_back(zero_crossing_rate(fr));
    std::vector<double> deltas(rates.size() - 1);
    for (std::size_t i = 0; i + 1 < rates.size(); ++i) deltas[i] = rates[i + 1] - rates[i];
    return deltas;
}

HaarEnergies haar_features(std::span<const double> frame) {
    if (frame.empty()) throw InvalidWindow("haar_features: empty frame");
    const std::size_t pairs = (frame.size() + 1) / 2;
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    double approx = 0.0;
    double detail = 0.0;
    for (std::size_t i = 0; i < pairs; ++i) {
        const double a = frame[2 * i];
        const double b = 2 * i + 1 < frame.size() ? frame[2 * i + 1] : 0.0;
        const double lo = (a + b) * inv_sqrt2;
        const double hi = (a - b) * inv_sqrt2;
        approx += lo * lo;
        detail += hi * hi;
    }
    return {approx / static_cast<double>(pairs), detail / static_cast<double>(pairs)};
}

std::optional<double> pitch(std::span<const double> frame, int sample_rate_hz,
                            const FeatureConfig& cfg) {
    if (frame.empty()) throw InvalidWindow("pitch: empty frame");
    const PitchScan scan = scan_pitch(frame, sample_rate_hz, cfg);
    if (!scan.voiced || scan.lag <= 0.0) return std::nullopt;
    return static_cast<double>(sample_rate_hz) / scan.lag;
}

double loudness(std::span<const double> frame) {
    if (frame.empty()) throw InvalidWindow("loudness: empty frame");
    double acc = 0.0;
    for (double v : frame) acc += v * v;
    return std::sqrt(acc / static_cast<double>(frame.size()));
}

double spectral_entropy(std::span<const double> frame) {
    if (frame.empty()) throw InvalidWindow("spectral_entropy: empty frame");
    if (frame.size() < 2) return 0.0;
    const std::vector<double> power = windowed_power(frame);
    double total = 0.0;
    for (double p : power) total += p;
    if (total <= kSilencePower) return 0.0;
    double entropy = 0.0;
    for (double p : power) {
        if (p <= 0.0) continue;
        const double q = p / total;
        entropy -= q * std::log(q);
    }
    return entropy / std::log(static_cast<double>(power.size()));
}

std::vector<double> mel_lpc(std::span<const double> frame, int sample_rate_hz,
                            int coeffs, int filters) {
    if (frame.size() < 64) throw InvalidWindow("mel_lpc needs at least 64 samples");
    if (sample_rate_hz < 8000) throw InvalidConfig("sample rate below 8000 Hz");
    if (coeffs < 1 || filters < coeffs) {
        throw InvalidConfig("mel_lpc needs 1 <= coeffs <= filters");
    }

    const std::vector<double> power = windowed_power(frame);
    const std::size_t fft_size = 2 * (power.size() - 1);
    const double bin_hz = static_cast<double>(sample_rate_hz) / static_cast<double>(fft_size);

    const auto to_mel = [](double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); };
    const auto to_hz = [](double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); };

    const double mel_top = to_mel(sample_rate_hz / 2.0);
    const auto m = static_cast<std::size_t>(filters);
    std::vector<double> edges(m + 2);
    for (std::size_t i = 0; i < edges.size(); ++i) {
        edges[i] = to_hz(mel_top * static_cast<double>(i) / static_cast<double>(m + 1));
    }

    std::vector<double> log_energy(m);
    for (std::size_t f = 0; f < m; ++f) {
        const double left = edges[f];
        const double center = edges[f + 1];
        const double right = edges[f + 2];
        double acc = 0.0;
        for (std::size_t k = 0; k < power.size(); ++k) {
            const double hz = bin_hz * static_cast<double>(k);
            double weight = 0.0;
            if (hz >= left && hz <= center && center > left) {
                weight = (hz - left) / (center - left);
            } else if (hz > center && hz <= right && right > center) {
                weight = (right - hz) / (right - center);
            }
            acc += weight * power[k];
        }
        log_energy[f] = std::log(std::max(acc, kLogEnergyFloor));
    }

    // Orthonormal DCT-II of the log energies.
    std::vector<double> cepstrum(static_cast<std::size_t>(coeffs));
    const double mf = static_cast<double>(m);
    for (std::size_t k = 0; k < cepstrum.size(); ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            acc += log_energy[i] *
                   std::cos(std::numbers::pi * static_cast<double>(k) *
                            (static_cast<double>(i) + 0.5) / mf);
        }
        cepstrum[k] = acc * std::sqrt((k == 0 ? 1.0 : 2.0) / mf);
    }
    return cepstrum;
}

double spectral_centroid(std::span<const double> frame, int sample_rate_hz) {
    if (frame.empty()) throw InvalidWindow("spectral_centroid: empty frame");
    if (sample_rate_hz < 8000) throw InvalidConfig("sample rate below 8000 Hz");
    if (frame.size() < 2) return 0.0;
    const std::vector<double> power = windowed_power(frame);
    const std::size_t fft_size = 2 * (power.size() - 1);
    const double bin_hz = static_cast<double>(sample_rate_hz) / static_cast<double>(fft_size);
    double total = 0.0;
    double weighted = 0.0;
    for (std::size_t k = 0; k < power.size(); ++k) {
        total += power[k];
        weighted += power[k] * bin_hz * static_cast<double>(k);
    }
    if (total <= kSilencePower) return 0.0;
    return weighted / total;
}

double harmonic_ratio(std::span<const double> frame, int sample_rate_hz,
                      const FeatureConfig& cfg) {
    if (frame.empty()) throw InvalidWindow("harmonic_ratio: empty frame");
    return scan_pitch(frame, sample_rate_hz, cfg).strength;
}

std::optional<FormantSet> formants(std::span<const double> frame, int sample_rate_hz,
                                   const FeatureConfig& cfg) {
    if (sample_rate_hz < 8000) throw InvalidConfig("sample rate below 8000 Hz");
    const auto order = static_cast<std::size_t>(2 + sample_rate_hz / 1000);
    if (frame.size() <= 2 * order) {
        throw InvalidWindow("formants: frame shorter than twice the model order");
    }

    // Pre-emphasis flattens the spectral tilt so the high resonances are not
    // drowned by the glottal rolloff.
    std::vector<double> shaped(frame.size());
    shaped[0] = frame[0];
    for (std::size_t i = 1; i < frame.size(); ++i) {
        shaped[i] = frame[i] - cfg.preemphasis * frame[i - 1];
    }
    const auto window = dsp::hamming_window(shaped.size());
    for (std::size_t i = 0; i < shaped.size(); ++i) shaped[i] *= window[i];

    const dsp::LpcModel model = dsp::lpc(shaped, order);
    if (model.gain <= 0.0) return std::nullopt;  // silence or a perfectly predictable frame

    const double fs = sample_rate_hz;
    const auto roots = dsp::polynomial_roots(model.coeffs);

    std::vector<Formant> found;
    for (const auto& z : roots) {
        if (z.imag() <= 0.0) continue;  // keep one of each conjugate pair
        const double magnitude = std::abs(z);
        if (magnitude >= 1.0 || magnitude <= 0.0) continue;
        const double freq = std::atan2(z.imag(), z.real()) * fs / (2.0 * std::numbers::pi);
        const double bandwidth = -fs / std::numbers::pi * std::log(magnitude);
        if (bandwidth >= cfg.formant_max_bandwidth_hz) continue;
        if (freq < 50.0 || freq > fs / 2.0 - 50.0) continue;

        const double omega = 2.0 * std::numbers::pi * freq / fs;
        std::complex<double> denom(0.0, 0.0);
        for (std::size_t k = 0; k < model.coeffs.size(); ++k) {
            denom += model.coeffs[k] *
                     std::exp(std::complex<double>(0.0, -omega * static_cast<double>(k)));
        }
        const double response = std::abs(denom);
        const double amplitude = response > 0.0 ? model.gain / response : 0.0;
        found.push_back({freq, amplitude, bandwidth});
    }

    if (found.size() < 2) return std::nullopt;
    std::sort(found.begin(), found.end(),
              [](const Formant& a, const Formant& b) { return a.frequency_hz < b.frequency_hz; });
    return FormantSet{std::move(found)};
}

FeatureVector extract_feature_vector(const AudioClip& clip, const FeatureConfig& cfg) {
    check_clip(clip);
    if (cfg.frame_ms <= 0.0 || cfg.hop_ms <= 0.0) {
        throw InvalidConfig("frame_ms and hop_ms must be positive");
    }
    const double fs = clip.sample_rate_hz;
    const auto frame_len =
        static_cast<std::size_t>(std::max<long>(1, std::lround(cfg.frame_ms * fs / 1000.0)));
    const auto hop =
        static_cast<std::size_t>(std::max<long>(1, std::lround(cfg.hop_ms * fs / 1000.0)));
    if (frame_len > clip.samples.size()) {
        throw NoVoicedFrames(clip.id + ": clip shorter than one analysis frame");
    }

    const FrameSequence frames = frame(clip, frame_len, hop);

    FeatureVector fv;
    std::vector<double> voiced_zcr;
    std::size_t voiced = 0;
    std::size_t with_formants = 0;
    double formant_acc[6] = {0, 0, 0, 0, 0, 0};

    for (const auto& fr : frames.frames) {
        const auto f0 = pitch(fr, clip.sample_rate_hz, cfg);
        if (!f0) continue;
        ++voiced;

        const double rate = zero_crossing_rate(fr);
        voiced_zcr.push_back(rate);
        fv.zcr += rate;

        const HaarEnergies haar = haar_features(fr);
        fv.haar_energy_approx += haar.approx;
        fv.haar_energy_detail += haar.detail;
        fv.pitch_hz += *f0;
        fv.loudness_rms += loudness(fr);
        fv.spectral_entropy += spectral_entropy(fr);

        const std::vector<double> cepstrum =
            mel_lpc(fr, clip.sample_rate_hz, cfg.mfcc_coeffs, cfg.mel_filters);
        const std::size_t take = std::min(cepstrum.size(), fv.mel_lpc.size());
        for (std::size_t i = 0; i < take; ++i) fv.mel_lpc[i] += cepstrum[i];

        fv.harmonic_ratio += harmonic_ratio(fr, clip.sample_rate_hz, cfg);
        fv.spectral_centroid_hz += spectral_centroid(fr, clip.sample_rate_hz);

        double sq = 0.0;
        for (double v : fr) sq += v * v;
        fv.energy += sq / static_cast<double>(fr.size());

        if (const auto fset = formants(fr, clip.sample_rate_hz, cfg)) {
            ++with_formants;
            formant_acc[0] += fset->f1().frequency_hz;
            formant_acc[1] += fset->f2().frequency_hz;
            formant_acc[2] += fset->f1().amplitude;
            formant_acc[3] += fset->f2().amplitude;
            formant_acc[4] += fset->f1().bandwidth_hz;
            formant_acc[5] += fset->f2().bandwidth_hz;
        }
    }

    if (voiced == 0) throw NoVoicedFrames(clip.id + ": no voiced frames");

    const double inv = 1.0 / static_cast<double>(voiced);
    fv.zcr *= inv;
    fv.haar_energy_approx *= inv;
    fv.haar_energy_detail *= inv;
    fv.pitch_hz *= inv;
    fv.loudness_rms *= inv;
    fv.spectral_entropy *= inv;
    for (double& c : fv.mel_lpc) c *= inv;
    fv.harmonic_ratio *= inv;
    fv.spectral_centroid_hz *= inv;
    fv.energy *= inv;

    if (voiced_zcr.size() >= 2) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < voiced_zcr.size(); ++i) {
            acc += voiced_zcr[i + 1] - voiced_zcr[i];
        }
        fv.delta_zcr = acc / static_cast<double>(voiced_zcr.size() - 1);
    }

    double mean_amp = 0.0;
    double mean_val = 0.0;
    for (double v : clip.samples) {
        mean_amp += std::abs(v);
        mean_val += v;
    }
    const double n = static_cast<double>(clip.samples.size());
    mean_amp /= n;
    mean_val /= n;
    double var = 0.0;
    for (double v : clip.samples) var += (v - mean_val) * (v - mean_val);
    fv.variance = var / n;
    fv.mean = mean_amp;

    if (with_formants > 0) {
        const double finv = 1.0 / static_cast<double>(with_formants);
        fv.formant1_hz = formant_acc[0] * finv;
        fv.formant2_hz = formant_acc[1] * finv;
        fv.formant1_amp = formant_acc[2] * finv;
        fv.formant2_amp = formant_acc[3] * finv;
        fv.formant1_bw = formant_acc[4] * finv;
        fv.formant2_bw = formant_acc[5] * finv;
    } else {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        fv.formant1_hz = fv.formant2_hz = nan;
        fv.formant1_amp = fv.formant2_amp = nan;
        fv.formant1_bw = fv.formant2_bw = nan;
    }
    return fv;
}

namespace {

constexpr std::array<double FeatureVector::*, 6> kFormantFields = {
    &FeatureVector::formant1_hz, &FeatureVector::formant2_hz,
    &FeatureVector::formant1_amp, &FeatureVector::formant2_amp,
    &FeatureVector::formant1_bw, &FeatureVector::formant2_bw,
};

} // namespace

void impute_missing_formants(std::vector<FeatureVector>& rows,
                             std::span<const std::size_t> reference_rows) {
    for (std::size_t idx : reference_rows) {
        if (idx >= rows.size()) throw InvalidConfig("imputation index out of range");
    }
    for (const auto field : kFormantFields) {
        double acc = 0.0;
        std::size_t present = 0;
        for (std::size_t idx : reference_rows) {
            const double v = rows[idx].*field;
            if (std::isfinite(v)) {
                acc += v;
                ++present;
            }
        }
        const double fill = present > 0 ? acc / static_cast<double>(present) : 0.0;
        for (auto& row : rows) {
            if (!std::isfinite(row.*field)) row.*field = fill;
        }
    }
}

Standardizer Standardizer::fit(std::span<const FeatureVector> rows,
                               std::span<const std::size_t> indices) {
    if (indices.empty()) throw InsufficientData("standardizer needs at least one row");
    for (std::size_t idx : indices) {
        if (idx >= rows.size()) throw InvalidConfig("standardizer index out of range");
    }

    Standardizer s;
    const double n = static_cast<double>(indices.size());
    for (std::size_t idx : indices) {
        const auto vals = rows[idx].values();
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            if (!std::isfinite(vals[f])) {
                throw InvalidConfig("standardizer saw a non-finite value in column " +
                                    FeatureVector::names()[f]);
            }
            s.means_[f] += vals[f];
        }
    }
    for (double& m : s.means_) m /= n;
    for (std::size_t idx : indices) {
        const auto vals = rows[idx].values();
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            const double d = vals[f] - s.means_[f];
            s.scales_[f] += d * d;
        }
    }
    for (double& sc : s.scales_) {
        sc = std::sqrt(sc / n);
        if (sc < 1e-12) sc = 1.0;  // constant columns pass through
    }
    return s;
}

FeatureVector Standardizer::transform(const FeatureVector& row) const {
    auto vals = row.values();
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        vals[f] = (vals[f] - means_[f]) / scales_[f];
    }
    return FeatureVector::from_values(vals);
}

std::string feature_csv_header() {
    std::string out = "id";
    for (const auto& name : FeatureVector::names()) {
        out += ',';
        out += name;
    }
    return out;
}

std::string feature_csv_row(const std::string& id, const FeatureVector& row) {
    std::string out = id;
    for (double v : row.values()) {
        out += ',';
        out += detail::format_g17(v);
    }
    return out;
}

} // namespace vbp
