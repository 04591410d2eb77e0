#pragma once

#include <stdexcept>
#include <string>

namespace lifmap {

/// Parameter or input outside the operation's validity domain.
/// The CLI maps this family to exit code 3.
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Tensor, layer or grid dimensions that do not compose.
class shape_error : public domain_error {
public:
    using domain_error::domain_error;
};

/// Correlation requested on a zero-variance series.
class undefined_correlation : public domain_error {
public:
    using domain_error::domain_error;
};

/// File system or stream failure. The CLI maps this family to exit code 4.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent weight manifest, including missing tensors.
class manifest_error : public io_error {
public:
    using io_error::io_error;
};

/// Blob bytes do not match the checksum declared in the manifest.
class checksum_error : public io_error {
public:
    using io_error::io_error;
};

}  // namespace lifmap
