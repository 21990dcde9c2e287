#pragma once

#include <stdexcept>
#include <string>

namespace nhm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failures (exit code 3 in the CLI).
class NumericalError : public Error {
public:
    using Error::Error;
};

class DegenerateSpectrum : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NonFinite : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The two states of a two-state vector are (numerically) orthogonal, so the
/// weak value is ill defined.
class OrthogonalStates : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class AllWeightsZero : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class SectorMismatch : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Contract violations by the caller.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class IndexOutOfRange : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class InvalidSpin : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class NonHermitianObservable : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class GridTooLarge : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

}  // namespace nhm
