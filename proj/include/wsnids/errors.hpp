#pragma once

#include <stdexcept>

namespace wsnids {

// Problems with user-supplied data: unreadable files, malformed CSV cells,
// mismatched shapes between input files.
class DataError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration: impossible hyperparameters, out-of-range requests.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace wsnids
