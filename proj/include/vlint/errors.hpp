#pragma once

#include <stdexcept>
#include <string>

namespace vlint {

/// Base class of every error raised by the library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// LU elimination met a pivot below the relative threshold.
class singular_matrix : public error {
public:
    using error::error;
};

/// M(q) = Dα(q)ᵀ − Dα(q) is numerically singular at the evaluation point.
class singular_mass_matrix : public error {
public:
    using error::error;
};

/// A model was evaluated outside its domain (log of a non-positive number,
/// coincident point vortices, the Kepler singularity at the origin).
class domain_error : public error {
public:
    using error::error;
};

class unsupported_stage_count : public error {
public:
    using error::error;
};

/// The conjugate tableau is undefined when some weight b_i vanishes.
class zero_weight : public error {
public:
    using error::error;
};

class unknown_identifier : public error {
public:
    using error::error;
};

/// The operation requires a system with constant linear_alpha.
class unsupported_system : public error {
public:
    using error::error;
};

class fewer_than_two_points : public error {
public:
    using error::error;
};

class invalid_argument : public error {
public:
    using error::error;
};

} // namespace vlint
