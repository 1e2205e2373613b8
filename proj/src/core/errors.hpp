#pragma once

#include <stdexcept>
#include <string>

namespace toesplit {

struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

struct SymmetryError : std::runtime_error {
    explicit SymmetryError(const std::string& what) : std::runtime_error(what) {}
};

struct CapExceededError : std::runtime_error {
    explicit CapExceededError(const std::string& what) : std::runtime_error(what) {}
};

struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct KernelIntegrityError : std::runtime_error {
    explicit KernelIntegrityError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace toesplit
