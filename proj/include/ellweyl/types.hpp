#ifndef ELLWEYL_TYPES_HPP
#define ELLWEYL_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace ellweyl
{

// Scalar layer. Everything numeric is written against these aliases so a
// higher precision build only has to change them.
using Real = double;
using Complex = std::complex<Real>;
using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

inline constexpr Real pi = 3.141592653589793238462643383279502884;
inline constexpr Complex I{0.0, 1.0};

// Thrown when (n, m) signatures of two objects disagree.
class SignatureMismatch : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// Thrown when a configuration leaves the generic locus (vanishing minor,
// zero entry at a Cremona inversion, coincident torus points, ...).
class DegenerateInput : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// Thrown when correspondences handed to the PGL solver do not agree with a
// single projective map.
class InconsistentCorrespondence : public std::domain_error
{
public:
    InconsistentCorrespondence(const std::string &what, Real residual)
        : std::domain_error(what), m_residual(residual)
    {
    }
    Real residual() const
    {
        return m_residual;
    }

private:
    Real m_residual;
};

} // namespace ellweyl

#endif
