#pragma once

#include <stdexcept>

namespace evlink {

// Error taxonomy shared by all modules. Each maps to one failure mode of
// the pipeline; callers catch the base type when they only care that a
// stage failed.

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Signal contains non-finite samples, or a log has to be taken of a
// non-positive intensity.
struct InvalidSignalError : Error {
    using Error::Error;
};

// Region of interest falls outside the sensor geometry.
struct InvalidRoiError : Error {
    using Error::Error;
};

// An operation that needs at least one event saw none.
struct NoSignalError : Error {
    using Error::Error;
};

// Packet shape violates the scheme (e.g. odd bit count for 4-level codes).
struct InvalidPacketError : Error {
    using Error::Error;
};

// Event list handed to a demodulator is not time-sorted.
struct InvalidStreamError : Error {
    using Error::Error;
};

// Pearson correlation of a zero-variance sequence.
struct UndefinedCorrelationError : Error {
    using Error::Error;
};

// ID detection produced no decodable frame and no defined correlation.
struct NoDetectionError : Error {
    using Error::Error;
};

// Malformed configuration file or inconsistent scheme parameters.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace evlink
