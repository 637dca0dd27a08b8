#pragma once
//
// frametensor: shared scalar types, inner-product conventions and errors.
//

#include <complex>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace frametensor {

inline constexpr double pi = std::numbers::pi;

using cplx       = std::complex<double>;
using Matrix     = Eigen::MatrixXcd;
using Vector     = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// <x, y> = sum_t x_t * conj(y_t), linear in the first argument.
inline cplx inner(const Vector& x, const Vector& y) { return y.dot(x); }

// Hilbert-Schmidt scalar product <O, O'> = tr(O'^H O).
inline cplx hs_inner(const Matrix& o, const Matrix& o_prime)
{
    return (o_prime.adjoint() * o).trace();
}

// Thrown when a requested construction exceeds the configured size cap.
class capacity_error : public std::length_error {
public:
    using std::length_error::length_error;
};

// Thrown by tensor inversion when the flattened matrix is numerically
// singular; carries the condition estimate.
class singular_error : public std::runtime_error {
public:
    singular_error(const std::string& what, double condition)
        : std::runtime_error(what), condition_(condition)
    {
    }
    double condition() const noexcept { return condition_; }

private:
    double condition_;
};

// Thrown when an operation requires a numerical frame (lower bound > 0).
class not_a_frame_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// FRAMETENSOR_MAX_SIZE overrides both size caps when set to a positive integer.
inline std::size_t env_size_cap(std::size_t fallback)
{
    if (const char* v = std::getenv("FRAMETENSOR_MAX_SIZE")) {
        char*              end    = nullptr;
        unsigned long long parsed = std::strtoull(v, &end, 10);
        if (end != v && *end == '\0' && parsed > 0)
            return static_cast<std::size_t>(parsed);
    }
    return fallback;
}

// Cap on the point count of a single index set.
inline std::size_t max_index_points() { return env_size_cap(4096); }

// Cap on |I1|*|I2| for rank-four tensors (storage is quartic in it).
inline std::size_t max_flat_size() { return env_size_cap(512); }

}  // namespace frametensor
