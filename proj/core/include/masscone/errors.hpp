#pragma once

#include <stdexcept>
#include <string>

namespace masscone {

/// Base class for all masscone error conditions.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An operation that needs positive mass received the zero measure.
class ZeroMassError : public Error {
public:
    using Error::Error;
};

/// Two measures that must carry equal mass do not, beyond tolerance.
class MassMismatchError : public Error {
public:
    using Error::Error;
};

/// The supplied affine map is not an isometry (Q^T Q deviates from I).
class NotAnIsometryError : public Error {
public:
    using Error::Error;
};

/// The brute-force oracle only handles uniform equal-size supports, k <= 8.
class UnsupportedInstanceError : public Error {
public:
    using Error::Error;
};

/// A support point lies outside the declared bounded domain.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The scaling function fails the Lipschitz / monotone / limit-at-zero check.
class InadmissibleScalingError : public Error {
public:
    using Error::Error;
};

/// A fiber probe pair is too close to resolve a scaling ratio.
class DegenerateProbeError : public Error {
public:
    using Error::Error;
};

/// The candidate metric failed the fiber probe, so an obstruction search
/// against its scaling function would be meaningless.
class FiberViolationError : public Error {
public:
    using Error::Error;
};

/// The infimum-over-Diracs warping is only evaluated for p in {1, 2}.
class UnsupportedExponentError : public Error {
public:
    using Error::Error;
};

/// The Dirac-cone grid has fewer than 3 nodes on some axis.
class GridTooCoarseError : public Error {
public:
    using Error::Error;
};

/// The measure generator configuration is degenerate.
class SamplerError : public Error {
public:
    using Error::Error;
};

/// A configuration or data file failed to parse or references missing data.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace masscone
