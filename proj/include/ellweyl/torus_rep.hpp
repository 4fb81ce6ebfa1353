#ifndef ELLWEYL_TORUS_REP_HPP
#define ELLWEYL_TORUS_REP_HPP

// Torus side of the Weyl group action: how a word moves the parameters
// u_1, ..., u_m, v (and eps for the KMNOY embedding) of a configuration of
// points on an elliptic curve, and the translation s normalising the result.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "ellweyl/elliptic_core.hpp"
#include "ellweyl/picard_lattice.hpp"

namespace ellweyl
{

// Parameters of the configuration P_i = iota(u_i). The u_i, v and eps are kept
// as complex representatives rather than reduced classes: the KMNOY embedding
// depends on the chosen lifts through a diagonal rescaling, and the eps update
// is affine in them.
struct TorusParams {
    LatticeSignature sig;
    TorusModulus modulus{Complex(0.0, 1.0)};
    std::vector<Complex> u;      // u_1, ..., u_m
    Complex v{0.0, 0.0};         // (n+1) v = hyperplane class
    std::optional<Complex> eps;  // present iff the embedding is KMNOY

    // v = 0.
    static TorusParams weierstrass(const LatticeSignature &sig, const TorusModulus &mod, std::vector<Complex> u);
    // v = (eps + u_1 + ... + u_{n+1}) / (n+1).
    static TorusParams kmnoy(const LatticeSignature &sig, const TorusModulus &mod, std::vector<Complex> u, Complex eps);

    EmbeddingKind kind() const
    {
        return eps ? EmbeddingKind::kmnoy : EmbeddingKind::weierstrass;
    }
    int n() const
    {
        return sig.n;
    }
    int m() const
    {
        return sig.m;
    }
    std::vector<TorusPoint> points() const;

    // Throws std::invalid_argument on size mismatch and DegenerateInput if two
    // u_i agree modulo the lattice within tol.
    void validate(Real tol = default_tol_torus) const;
};

// The embedding whose images of u_1, ..., u_m form the configuration.
EllipticEmbedding embedding_for(const TorusParams &params);
// Columns iota(u_1), ..., iota(u_m).
CMatrix configuration_matrix(const TorusParams &params);

// Lattice prediction for w^* given by its pull-back matrix b (column r holds
// b_r^0, ..., b_r^m):
//   u_i' = (n+1) b_i^0 v + sum_j b_i^j u_j,
//   (n+1) v' = (n+1) b_0^0 v + sum_j b_0^j u_j  (left undivided).
struct PointPrediction {
    std::vector<Complex> u;
    Complex v_times;
};
PointPrediction predict_points(const ActionMatrix &pullback, const TorusParams &params);

// (n+1) s = (n+1) v' - (n+1) v, left undivided.
Complex shift_s(const ActionMatrix &pullback, const TorusParams &params);

// Generator updates for the KMNOY parameters. Letter 0 adds eps to u_1..u_{n+1}
// and negates eps; letter k swaps u_k, u_{k+1}, and for k = n+1 also replaces
// eps by eps + u_{n+1} - u_{n+2}. The normalising shift is 0 throughout.
TorusParams kmnoy_step(int letter, const TorusParams &state);
TorusParams kmnoy_word(const WeylWord &w, const TorusParams &state);

// Generator update for the Weierstrass embedding. u' comes from the lattice
// prediction, s is -(n-1)/(n+1) (u_1 + ... + u_{n+1}) for letter 0 and 0 for
// swaps, and the returned parameters are u_i' - s (so v stays 0).
struct WeierstrassStep {
    TorusParams params;
    Complex s;
};
WeierstrassStep weierstrass_step(int letter, const TorusParams &params);

// Either step with its shift (always 0 for KMNOY).
struct TorusStep {
    TorusParams params;
    Complex s;
};
TorusStep torus_step(int letter, const TorusParams &params);

// Generator steps composed along a word; shifts lists the per-letter s and
// total is their sum (the shift seen by a point off the marked set).
struct TorusTrajectory {
    TorusParams params;
    std::vector<Complex> shifts;
    Complex total{0.0, 0.0};
};
TorusTrajectory torus_word(const WeylWord &w, const TorusParams &params);

// Two parameter sets agree iff all u_i (and eps, v) agree modulo the lattice.
Real params_distance(const TorusParams &a, const TorusParams &b);

// Deterministic source of uniform doubles independent of the standard
// library's distribution implementations.
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : m_engine(seed) {}
    // Uniform in [0, 1).
    Real uniform()
    {
        return static_cast<Real>(m_engine() >> 11) * 0x1.0p-53;
    }
    Real uniform(Real lo, Real hi)
    {
        return lo + (hi - lo) * uniform();
    }
    std::uint64_t next()
    {
        return m_engine();
    }

private:
    std::mt19937_64 m_engine;
};

// Seed of trial `index` in a batch started from `seed` (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Uniform point of the fundamental cell.
Complex random_torus_point(Rng &rng, const TorusModulus &mod);

// Random parameters whose u_i (and for KMNOY u_1 + eps) are pairwise at least
// `separation` apart modulo the lattice and whose configuration passes the
// balanced genericity check with scaled minors above `min_minor`.
TorusParams random_params(EmbeddingKind kind, const LatticeSignature &sig, const TorusModulus &mod, Rng &rng,
                          Real separation = 0.05, Real min_minor = 1e-4);

} // namespace ellweyl

#endif
