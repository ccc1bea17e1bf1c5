#pragma once

#include <stdexcept>
#include <string>

namespace spectopo {

/// Base class for all domain-level failures. The CLI maps these to exit code 1.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Elements or sets from different rings were mixed in one operation.
struct RingMismatchError : Error {
    using Error::Error;
};

/// The zero element was passed where a factorization is required.
struct ZeroElementError : Error {
    using Error::Error;
};

/// A set's infinitude is needed but was neither declared nor enumerable.
struct UnknownInfinitudeError : Error {
    using Error::Error;
};

/// An ultrafilter descriptor is malformed for its carrier
/// (e.g. nonprincipal over a finite carrier).
struct InvalidDescriptorError : Error {
    using Error::Error;
};

/// witness_ultrafilter was asked for a witness on an already-closed set.
struct NoWitnessError : Error {
    using Error::Error;
};

/// A stated operation precondition does not hold.
struct PreconditionError : Error {
    using Error::Error;
};

/// Input exceeds a configured bound.
struct BoundError : Error {
    using Error::Error;
};

} // namespace spectopo
