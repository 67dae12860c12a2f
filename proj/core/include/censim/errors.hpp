#ifndef CENSIM_ERRORS_HPP
#define CENSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace censim {

// Bad configuration (scenario schema, invalid parameters, unknown ids).
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A feature asked for a measurement the flow does not carry
// (e.g. a probe response missing for a probe feature).
class MeasurementUnavailable : public std::runtime_error {
public:
    explicit MeasurementUnavailable(const std::string& msg) : std::runtime_error(msg) {}
};

// Training preconditions violated (e.g. single-class training set).
class TrainingError : public std::runtime_error {
public:
    explicit TrainingError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace censim

#endif
