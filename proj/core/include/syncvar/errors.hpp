#pragma once

#include <stdexcept>
#include <string>

namespace syncvar {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid input data: malformed rationals, maps that fail validation
// (not Markov, not expanding, not transitive), caps exceeded, orbits
// that never become periodic within the cap.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Violated internal assumption: a certified bound that cannot hold, a
// degree assertion failure, division by zero inside the engine.  These
// indicate a bug or an input outside the theory and map to exit code 3
// in the command line tool.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& msg) : Error(msg) {}
};

} // namespace syncvar
