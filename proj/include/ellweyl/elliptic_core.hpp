#ifndef ELLWEYL_ELLIPTIC_CORE_HPP
#define ELLWEYL_ELLIPTIC_CORE_HPP

// Numerics on the torus T = C / (Z + Z tau): the odd theta function [z],
// Weierstrass P and its derivatives, and the two families of degree n+1
// embeddings T -> P^n used throughout (Weierstrass and KMNOY theta ratios).

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ellweyl/types.hpp"

namespace ellweyl
{

// Default tolerances for the torus layer.
inline constexpr Real default_tol_torus = 1e-8;
inline constexpr Real default_tol_pole = 1e-12;

class TorusModulus
{
public:
    // Throws std::domain_error unless Im tau > 0.
    explicit TorusModulus(Complex tau);

    Complex tau() const
    {
        return m_tau;
    }
    // q = exp(i pi tau).
    Complex nome() const
    {
        return m_q;
    }

    // Real coordinates (a, b) with z = a + b tau.
    std::pair<Real, Real> coordinates(Complex z) const;
    Complex from_coordinates(Real a, Real b) const
    {
        return a + b * m_tau;
    }
    // Representative with coordinates in [0,1) x [0,1).
    Complex reduce(Complex z) const;
    // Representative with coordinates in [-1/2,1/2) x [-1/2,1/2).
    Complex reduce_centered(Complex z) const;
    // Euclidean distance from z to the nearest lattice point.
    Real lattice_distance(Complex z) const;

    // Weierstrass invariants of the lattice Z + Z tau.
    Complex g2() const
    {
        return m_g2;
    }
    Complex g3() const
    {
        return m_g3;
    }
    // c(tau) with P(u) = -(log [u])'' + c(tau).
    Complex wp_constant() const
    {
        return m_wp_const;
    }

    friend bool operator==(const TorusModulus &a, const TorusModulus &b)
    {
        return a.m_tau == b.m_tau;
    }

private:
    Complex m_tau;
    Complex m_q;
    Complex m_g2;
    Complex m_g3;
    Complex m_wp_const;
};

// A point of T. The stored value is the representative in the fundamental
// cell [0,1) + [0,1) tau.
class TorusPoint
{
public:
    TorusPoint(Complex u, const TorusModulus &mod) : m_mod(mod), m_u(mod.reduce(u)) {}

    Complex value() const
    {
        return m_u;
    }
    const TorusModulus &modulus() const
    {
        return m_mod;
    }

private:
    TorusModulus m_mod;
    Complex m_u;
};

// True iff p - q is within `tol` of a lattice point. Throws SignatureMismatch
// for different moduli.
bool torus_eq(const TorusPoint &p, const TorusPoint &q, Real tol = default_tol_torus);

// ------------------------------------------------------------------ theta

// Jacobi theta_1 in the normalisation
//   [z] = 2 sum_{k>=0} (-1)^k q^{(k+1/2)^2} sin((2k+1) pi z),
// simple zeros on Z + Z tau, [z+1] = -[z], [z+tau] = -q^{-1} e^{-2 pi i z} [z].
// Throws std::domain_error for non-finite input.
Complex theta(Complex z, const TorusModulus &mod);

// Value and derivatives of [z] at a point, written as exp(log_scale) times the
// listed numbers. log_scale carries the quasi-periodicity factor so that far
// away arguments neither overflow nor underflow.
struct ThetaJet {
    Complex log_scale;
    Complex value;
    Complex d1;
    Complex d2;
    Complex d3;
};
ThetaJet theta_jet(Complex z, const TorusModulus &mod);

// [z]'/[z].
Complex theta_log_derivative(Complex z, const TorusModulus &mod);

// P^{(order)}(u) for order 0..5. Throws DegenerateInput if u is within
// tol_pole of a lattice point and std::out_of_range for other orders.
Complex wp(Complex u, int order, const TorusModulus &mod, Real tol_pole = default_tol_pole);

// -------------------------------------------------------------- embeddings

enum class EmbeddingKind { weierstrass, kmnoy };

// Holomorphic lift of an embedding and its derivative at one point, both
// multiplied by the same nonzero number.
struct Section {
    CVector value;
    CVector derivative;
};

class EllipticEmbedding
{
public:
    // u -> (1 : P(u) : P'(u) : ... : P^{(n-1)}(u)), n <= 6.
    static EllipticEmbedding weierstrass(int n, const TorusModulus &mod);
    // u -> ([u-u_1-eps]/[u-u_1] : ... : [u-u_{n+1}-eps]/[u-u_{n+1}]) with
    // base = (u_1, ..., u_{n+1}) taken as complex representatives.
    static EllipticEmbedding kmnoy(std::vector<Complex> base, Complex eps, const TorusModulus &mod);

    // H o iota for a nonsingular (n+1)x(n+1) matrix H.
    EllipticEmbedding transformed(const CMatrix &h) const;

    EmbeddingKind kind() const
    {
        return m_kind;
    }
    int n() const
    {
        return m_n;
    }
    const TorusModulus &modulus() const
    {
        return m_mod;
    }
    const std::vector<Complex> &base() const
    {
        return m_base;
    }
    Complex eps() const
    {
        return m_eps;
    }
    bool has_transform() const
    {
        return m_transform.has_value();
    }

    // Homogeneous coordinates normalised so the largest modulus entry is 1.
    // Base points of a KMNOY embedding (and lattice points of a Weierstrass
    // one) evaluate to the coordinate vertex given by the cleared denominator.
    CVector operator()(Complex u) const;

    // Holomorphic lift (theta function form) and its derivative.
    Section section(Complex u) const;

    // Representative of v with (n+1)[v] = pull back of a hyperplane: 0 for
    // Weierstrass, (eps + u_1 + ... + u_{n+1})/(n+1) for KMNOY.
    Complex base_point_v() const;

    // Zeros of the first homogeneous coordinate (with multiplicity), when
    // known in closed form; nothing for transformed embeddings.
    std::optional<std::vector<Complex>> first_coordinate_zeros() const;

private:
    EllipticEmbedding(EmbeddingKind kind, int n, const TorusModulus &mod) : m_kind(kind), m_n(n), m_mod(mod) {}

    EmbeddingKind m_kind;
    int m_n;
    TorusModulus m_mod;
    std::vector<Complex> m_base;
    Complex m_eps{0.0, 0.0};
    std::optional<CMatrix> m_transform;
};

CVector embed(const EllipticEmbedding &emb, const TorusPoint &u);
TorusPoint base_point_v(const EllipticEmbedding &emb);

// a = (sum dst - sum src) / (n+1). The difference of the sums is first
// reduced to the centred cell, then divided, then reduced again.
TorusPoint translation_between(std::span<const TorusPoint> zeros_src, std::span<const TorusPoint> zeros_dst);

// Zeros of u -> <hyperplane, section(u)> inside one period parallelogram,
// located by the argument principle.
struct SectionZeros {
    Real count = 0;                // (1/2 pi i) closed integral of h'/h
    Complex sum{0.0, 0.0};         // (1/2 pi i) closed integral of u h'/h
    std::vector<Complex> zeros;    // roots recovered from the power sums
    Complex origin{0.0, 0.0};      // lower left corner of the contour
};
SectionZeros hyperplane_zeros(const EllipticEmbedding &emb, const CVector &hyperplane);

} // namespace ellweyl

#endif
