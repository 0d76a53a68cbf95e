#pragma once

#include <stdexcept>
#include <string>

namespace schaake {

/// Malformed or inconsistent input data (files, panels, shapes).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An estimator or decomposition failed to produce a usable result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace schaake
