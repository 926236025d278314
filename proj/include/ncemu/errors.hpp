#ifndef NCEMU_ERRORS_HPP
#define NCEMU_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ncemu {

struct EmuError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DelayOutOfRange : EmuError {
    using EmuError::EmuError;
};

struct AxonOutOfRange : EmuError {
    using EmuError::EmuError;
};

struct StaleInjection : EmuError {
    using EmuError::EmuError;
};

struct PotentialOverflow : EmuError {
    using EmuError::EmuError;
};

struct ValueOutOfRange : EmuError {
    using EmuError::EmuError;
};

struct DimensionMismatch : EmuError {
    using EmuError::EmuError;
};

struct DoesNotFitCore : EmuError {
    using EmuError::EmuError;
};

struct DecodeError : EmuError {
    using EmuError::EmuError;
};

struct ParseError : EmuError {
    using EmuError::EmuError;
};

} // namespace ncemu

#endif
