#ifndef TRICAV_TYPES_HPP
#define TRICAV_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace tricav {

template <typename Scalar>
using Complex = std::complex<Scalar>;

/// Amplitudes over the three-excitation basis, indexed by basis ordinal.
template <typename Scalar>
using StateVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

/// dA/dt = M A. Row-major so that M * A walks contiguous rows.
template <typename Scalar>
using SparseGenerator = Eigen::SparseMatrix<Complex<Scalar>, Eigen::RowMajor>;

/// Reduced state of the three qubits, ordered
/// ggg, gge, geg, egg, gee, ege, eeg, eee.
template <typename Scalar>
using QubitMatrix = Eigen::Matrix<Complex<Scalar>, 8, 8>;

template <typename Scalar>
using QubitSpectrum = Eigen::Matrix<Scalar, 8, 1>;

/// A state or index outside the active excitation sector.
class SectorError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// NaN/Inf during integration, or an eigen-solver that failed to converge.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace tricav

#endif  // TRICAV_TYPES_HPP
