#ifndef ELLWEYL_VERIFY_HARNESS_HPP
#define ELLWEYL_VERIFY_HARNESS_HPP

// Numerical comparison of the two sides of the action: Cremona maps and swaps
// on the embedded configuration against the torus prediction, up to a
// projective map G solved from the marked points.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ellweyl/cremona_config.hpp"
#include "ellweyl/torus_rep.hpp"

namespace ellweyl
{

struct VerifyOptions {
    int probes = 10;
    Real tol_verify = 1e-6;
    ConfigTolerances tol;
};

struct VerificationReport {
    WeylWord word;
    LatticeSignature sig;
    EmbeddingKind kind = EmbeddingKind::kmnoy;
    Complex tau{0.0, 1.0};
    std::vector<Complex> shifts;   // per generator
    Complex s_total{0.0, 0.0};
    CMatrix g;                     // geometric -> predicted, max-modulus entry 1
    Real min_minor = 0;            // genericity of the starting configuration
    Real column_residual = 0;      // marked points beyond the frame
    Real probe_residual = 0;       // fiber points, never used in the fit
    Real max_residual = 0;
    bool pass = false;
    std::string error;             // set when the run aborted
    std::optional<double> seconds;
};

// Probes t_r: fiber points x_r = iota(t_r) carried through the geometric side,
// compared with iota'(t_r - s_total) on the torus side.
VerificationReport verify_word(const WeylWord &w, const TorusParams &params, const std::vector<Complex> &probes,
                               const VerifyOptions &opt = {});
// Same with opt.probes probe points drawn from rng.
VerificationReport verify_word(const WeylWord &w, const TorusParams &params, Rng &rng, const VerifyOptions &opt = {});

// Independent trials, possibly on several threads; results in input order.
struct VerifyTask {
    WeylWord word;
    TorusParams params;
    std::vector<Complex> probes;
};
std::vector<VerificationReport> verify_batch(const std::vector<VerifyTask> &tasks, const VerifyOptions &opt = {},
                                             unsigned threads = 0);

// max |a - c b| / max |a| for the best complex scalar c.
Real scalar_mismatch(const CMatrix &a, const CMatrix &b);

enum class GCase { weierstrass_cremona, kmnoy_r_n1_n2 };

struct GDecompositionReport {
    GCase which = GCase::weierstrass_cremona;
    CMatrix g1;
    CMatrix g2;
    CMatrix solved;   // from the point correspondences
    Real fit_residual = 0;
    Real mismatch = 0;   // scalar_mismatch(solved, g2 g1)
    bool pass = false;
};
// Closed forms of G_1, G_2 for letter 0 on a Weierstrass configuration or
// letter n+1 on a KMNOY configuration, compared with the solved map.
GDecompositionReport verify_g_decomposition(GCase which, const TorusParams &params, Real tol = 1e-7);

struct Prop32Report {
    Complex a{0.0, 0.0};
    CMatrix g;
    Real residual = 0;   // on the held-out samples
    bool pass = false;
};
// Translation a from the zeros of the first coordinates, then G from n+2
// samples u -> (emb_a(u), emb_b(u + a)) and the check on `held_out` more.
Prop32Report verify_prop32(const EllipticEmbedding &emb_a, const EllipticEmbedding &emb_b, Rng &rng,
                           int held_out = 20, Real tol = 1e-7);

// Translation s for one generator on a Weierstrass configuration, measured
// from the geometric side alone: grid search, simplex and Gauss-Newton over s for the
// best PGL fit of iota(u_i' - s), iota(t_r - s) to the transformed points.
// Translations by (n+1)-torsion are induced by PGL, so the measurement is a
// class modulo (1/(n+1)) (Z + Z tau).
struct ShiftMeasurement {
    Complex measured{0.0, 0.0};
    Complex formula{0.0, 0.0};
    Real residual_measured = 0;   // fit residual at the measured s
    Real residual_formula = 0;    // fit residual at the closed form s
    Real torsion_defect = 0;      // distance of measured - formula to (1/(n+1)) lattice
};
ShiftMeasurement measure_weierstrass_shift(int letter, const TorusParams &params, const std::vector<Complex> &probes);

} // namespace ellweyl

#endif
