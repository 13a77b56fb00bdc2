#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace vbp {

// Base class for every error raised by the library. kind() is a stable,
// machine-readable tag; the CLI maps it into its error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define VBP_DEFINE_ERROR(Name)                      \
    class Name : public Error {                     \
    public:                                         \
        explicit Name(const std::string& message)   \
            : Error(#Name, message) {}              \
    }

VBP_DEFINE_ERROR(UnsupportedFormat);   // WAV encoding we do not read
VBP_DEFINE_ERROR(CorruptFile);         // truncated/malformed file contents
VBP_DEFINE_ERROR(IoFailure);           // filesystem-level read/write failure
VBP_DEFINE_ERROR(InvalidWindow);       // bad framing or analysis-window request
VBP_DEFINE_ERROR(TooFewFrames);        // sequence shorter than the op requires
VBP_DEFINE_ERROR(NoVoicedFrames);      // clip yielded nothing to aggregate
VBP_DEFINE_ERROR(InvalidConfig);       // configuration violates its invariants
VBP_DEFINE_ERROR(ObjectiveNotFinite);  // objective returned NaN or infinity
VBP_DEFINE_ERROR(LengthMismatch);      // paired sequences of different length
VBP_DEFINE_ERROR(ShapeMismatch);       // matrices with incompatible dimensions
VBP_DEFINE_ERROR(InsufficientData);    // fewer samples than the op needs
VBP_DEFINE_ERROR(DegenerateClusters);  // clustering structure the metric cannot score
VBP_DEFINE_ERROR(ZeroDiameter);        // all intra-cluster diameters are zero
VBP_DEFINE_ERROR(SingularDesign);      // normal equations could not be solved

#undef VBP_DEFINE_ERROR

} // namespace vbp
