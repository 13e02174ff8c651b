#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gsparc {

inline constexpr const char* kVersion = "0.1.0";

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Index = Eigen::Index;

enum class Field { Real, Complex };

std::string to_string(Field f);
Field field_from_string(const std::string& s);

/// Invalid configuration or malformed input; the CLI maps this to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gsparc
