#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace isac {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
/// Bussgang constant sqrt(2/pi) of the one-bit quantizer.
inline const double kBussgang = std::sqrt(2.0 / kPi);
/// Variance of the quantization noise left after the Bussgang gain, 1 - 2/pi.
inline constexpr double kQuantNoise = 1.0 - 2.0 / kPi;

/// Transmit/receive array sizes and block length.
struct ArrayDims {
    int n_t = 1;
    int n_r = 1;
    int l = 1;

    int tx_len() const { return n_t * l; }   // length of x = vec(X)
    int rx_len() const { return n_r * l; }   // length of r = vec(R)
    int resp_len() const { return n_r * n_t; }  // length of vec(A)

    void validate() const {
        if (n_t < 1 || n_r < 1 || l < 1)
            throw std::invalid_argument("array dimensions must be >= 1");
    }
};

/// Raised when a matrix that must be Hermitian PSD is not (beyond tolerance).
class NotPsdError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond)
        throw std::invalid_argument(what);
}

}  // namespace isac
