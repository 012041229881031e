#pragma once

#include <stdexcept>
#include <string>

namespace amh {

// Base of every library error. `numerical()` separates bad input (the caller's
// fault) from solver or discretization trouble.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    [[nodiscard]] virtual bool numerical() const noexcept { return false; }
};

class invalid_input : public error {
public:
    using error::error;
};

class dimension_mismatch : public error {
public:
    using error::error;
};

class format_error : public error {
public:
    using error::error;
};

class incompatible_parameters : public error {
public:
    using error::error;
};

class numerical_error : public error {
public:
    using error::error;
    [[nodiscard]] bool numerical() const noexcept override { return true; }
};

class degenerate_domain : public numerical_error {
public:
    using numerical_error::numerical_error;
};

class insufficient_nodes : public numerical_error {
public:
    using numerical_error::numerical_error;
};

class conditioning_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

class convergence_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

class degenerate_input : public numerical_error {
public:
    using numerical_error::numerical_error;
};

class sampling_error : public numerical_error {
public:
    using numerical_error::numerical_error;
};

} // namespace amh
