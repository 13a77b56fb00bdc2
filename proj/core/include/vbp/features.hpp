#pragma once

#include "vbp/audio.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vbp {

struct Formant {
    double frequency_hz = 0.0;
    double amplitude = 0.0;
    double bandwidth_hz = 0.0;
};

// Qualifying vocal-tract resonances in ascending frequency. Extraction either
// yields at least the first two or reports failure; never a partial set.
struct FormantSet {
    std::vector<Formant> formants;

    const Formant& f1() const { return formants[0]; }
    const Formant& f2() const { return formants[1]; }
};

struct FeatureConfig {
    double frame_ms = 25.0;
    double hop_ms = 10.0;
    double pitch_min_hz = 50.0;
    double pitch_max_hz = 500.0;
    double voicing_threshold = 0.3;  // normalized-autocorrelation gate
    double preemphasis = 0.97;
    double formant_max_bandwidth_hz = 400.0;
    int mel_filters = 26;
    int mfcc_coeffs = 13;
};

inline constexpr std::size_t kMelLpcCoeffs = 13;
inline constexpr std::size_t kFeatureCount = 18 + kMelLpcCoeffs;

// Per-clip descriptor. values()/from_values() use the fixed field order
// below, which is also the CSV column order.
struct FeatureVector {
    double zcr = 0.0;
    double delta_zcr = 0.0;
    double haar_energy_approx = 0.0;
    double haar_energy_detail = 0.0;
    double pitch_hz = 0.0;
    double loudness_rms = 0.0;
    double spectral_entropy = 0.0;
    std::array<double, kMelLpcCoeffs> mel_lpc{};
    double variance = 0.0;
    double mean = 0.0;
    double harmonic_ratio = 0.0;
    double spectral_centroid_hz = 0.0;
    double energy = 0.0;
    double formant1_hz = 0.0;
    double formant2_hz = 0.0;
    double formant1_amp = 0.0;
    double formant2_amp = 0.0;
    double formant1_bw = 0.0;
    double formant2_bw = 0.0;

    double mfcc1() const { return mel_lpc[0]; }
    double mfcc2() const { return mel_lpc[1]; }
    double mfcc3() const { return mel_lpc[2]; }

    std::array<double, kFeatureCount> values() const;
    static FeatureVector from_values(std::span<const double> values);
    static const std::array<std::string, kFeatureCount>& names();
};

// Strict sign changes divided by (len - 1); one-sample frames score 0.
double zero_crossing_rate(std::span<const double> frame);

// Consecutive differences of the per-frame rate; needs >= 2 frames.
std::vector<double> delta_zero_crossing(const FrameSequence& frames);

struct HaarEnergies {
    double approx = 0.0;
    double detail = 0.0;
};

// Mean squared energy of the single-level Haar approximation and detail
// bands. Odd-length frames are padded with one trailing zero.
HaarEnergies haar_features(std::span<const double> frame);

// Autocorrelation pitch with parabolic peak refinement. Returns nothing for
// unvoiced frames (no normalized peak above the voicing threshold).
std::optional<double> pitch(std::span<const double> frame, int sample_rate_hz,
                            const FeatureConfig& cfg = {});

// Root mean square amplitude.
double loudness(std::span<const double> frame);

// Shannon entropy of the normalized power spectrum, scaled to [0, 1] by the
// maximum achievable for the bin count. Silent frames score 0.
double spectral_entropy(std::span<const double> frame);

// Mel-filterbank cepstral coefficients (log filter energies followed by an
// orthonormal DCT-II). Frame must hold at least 64 samples.
std::vector<double> mel_lpc(std::span<const double> frame, int sample_rate_hz,
                            int coeffs = 13, int filters = 26);

// Power-weighted mean frequency; silent frames score 0.
double spectral_centroid(std::span<const double> frame, int sample_rate_hz);

// Maximum normalized autocorrelation over the pitch lag range, in [0, 1].
double harmonic_ratio(std::span<const double> frame, int sample_rate_hz,
                      const FeatureConfig& cfg = {});

// Linear-prediction resonances: pre-emphasis, Hamming window, LPC of order
// 2 + fs/1000, polynomial roots, then a bandwidth gate. Returns nothing when
// fewer than two resonances qualify.
std::optional<FormantSet> formants(std::span<const double> frame, int sample_rate_hz,
                                   const FeatureConfig& cfg = {});

// Frames the clip, keeps voiced frames, and aggregates every per-frame
// descriptor by its mean. Clip-level stats (variance, mean absolute value)
// come from the raw samples. Formant fields are NaN when no frame produced a
// qualifying set; impute_missing_formants fills them in later.
FeatureVector extract_feature_vector(const AudioClip& clip, const FeatureConfig& cfg = {});

// Replaces NaN formant fields with the per-field mean over the reference
// rows (typically the training split). Falls back to 0 when no reference row
// has a finite value.
void impute_missing_formants(std::vector<FeatureVector>& rows,
                             std::span<const std::size_t> reference_rows);

// Per-field zero-mean unit-variance scaling; constant fields pass through.
class Standardizer {
public:
    static Standardizer fit(std::span<const FeatureVector> rows,
                            std::span<const std::size_t> indices);

    FeatureVector transform(const FeatureVector& row) const;

    std::span<const double> means() const { return means_; }
    std::span<const double> scales() const { return scales_; }

private:
    std::array<double, kFeatureCount> means_{};
    std::array<double, kFeatureCount> scales_{};
};

std::string feature_csv_header();
std::string feature_csv_row(const std::string& id, const FeatureVector& row);

} // namespace vbp
