#ifndef BATHYSLAM_CORE_ERRORS_HPP
#define BATHYSLAM_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bathyslam {

// Error categories map onto the CLI exit codes:
//   ConfigError -> 1, DataError -> 2, NumericalError -> 3.

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct OrderingError : DataError {
    explicit OrderingError(const std::string& msg) : DataError(msg) {}
};

struct EmptyDatasetError : DataError {
    explicit EmptyDatasetError(const std::string& msg) : DataError(msg) {}
};

struct OutOfRangeError : DataError {
    explicit OutOfRangeError(const std::string& msg) : DataError(msg) {}
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bathyslam

#endif
