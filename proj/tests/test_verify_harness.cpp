#include <doctest.h>

#include "ellweyl/verify_harness.hpp"
#include "oracles.hpp"

using namespace ellweyl;

namespace
{

const TorusModulus square(Complex(0.0, 1.0));
const TorusModulus skew(Complex(0.31, 1.17));

std::vector<Complex> random_probes(Rng &rng, const TorusModulus &mod, int count = 10)
{
    std::vector<Complex> t;
    for (int k = 0; k < count; ++k) {
        t.push_back(random_torus_point(rng, mod));
    }
    return t;
}

CMatrix permutation(int dim, int a, int b)
{
    CMatrix p = CMatrix::Identity(dim, dim);
    p.row(a).swap(p.row(b));
    return p;
}

bool same_report(const VerificationReport &a, const VerificationReport &b)
{
    return a.word == b.word && a.shifts == b.shifts && a.s_total == b.s_total && a.g == b.g &&
           a.min_minor == b.min_minor && a.column_residual == b.column_residual &&
           a.probe_residual == b.probe_residual && a.pass == b.pass && a.error == b.error;
}

} // namespace

TEST_CASE("scalar_mismatch")
{
    Rng rng(1);
    const CMatrix a = oracle::random_matrix(rng, 4, 4);
    CHECK(scalar_mismatch(a, a * Complex(0.3, -1.7)) < 1e-15);
    CHECK(scalar_mismatch(a, a) < 1e-15);
    CMatrix b = a;
    b(1, 2) += 0.5;
    CHECK(scalar_mismatch(a, b) > 0.05);
}

TEST_CASE("empty word: G is the identity")
{
    Rng rng(2);
    for (EmbeddingKind kind : {EmbeddingKind::weierstrass, EmbeddingKind::kmnoy}) {
        const TorusParams p = random_params(kind, LatticeSignature(2, 5), skew, rng);
        const VerificationReport r = verify_word(WeylWord{}, p, random_probes(rng, skew));
        CHECK(r.error.empty());
        CHECK(r.pass);
        CHECK(r.max_residual < 1e-12);
        CHECK(scalar_mismatch(r.g, CMatrix::Identity(3, 3)) < 1e-12);
        CHECK(r.s_total == Complex(0.0, 0.0));
    }
}

TEST_CASE("every generator passes on both embeddings")
{
    Rng rng(3);
    for (auto [n, m] : {std::pair{2, 5}, std::pair{3, 6}, std::pair{2, 9}}) {
        const LatticeSignature sig(n, m);
        for (const TorusModulus &mod : {square, skew}) {
            for (EmbeddingKind kind : {EmbeddingKind::weierstrass, EmbeddingKind::kmnoy}) {
                const TorusParams p = random_params(kind, sig, mod, rng);
                const std::vector<Complex> probes = random_probes(rng, mod);
                for (int g = 0; g < m; ++g) {
                    const VerificationReport r = verify_word(WeylWord{g}, p, probes);
                    CHECK_MESSAGE(r.pass, "n=" << n << " m=" << m << " letter " << g << " residual " << r.max_residual
                                                << " " << r.error);
                    CHECK(r.max_residual < 1e-8);
                    CHECK(r.shifts.size() == 1);
                }
            }
        }
    }
}

TEST_CASE("random words pass")
{
    Rng rng(4);
    for (auto [n, m] : {std::pair{2, 5}, std::pair{3, 6}, std::pair{2, 9}}) {
        const LatticeSignature sig(n, m);
        for (int t = 0; t < 10; ++t) {
            const EmbeddingKind kind = t % 2 ? EmbeddingKind::kmnoy : EmbeddingKind::weierstrass;
            const TorusParams p = random_params(kind, sig, t % 3 ? skew : square, rng);
            const WeylWord w(oracle::random_word(rng, m, 6, 1));
            const VerificationReport r = verify_word(w, p, rng);
            CHECK_MESSAGE(r.pass, w.str() << " residual " << r.max_residual << " " << r.error);
        }
    }
}

TEST_CASE("probes detect the wrong sign of the translation")
{
    // Carrying the points to u' + s instead of u' - s must not fit.
    Rng rng(5);
    const LatticeSignature sig(2, 5);
    const TorusParams p = random_params(EmbeddingKind::weierstrass, sig, skew, rng);
    const WeylWord w{0};
    const PointConfig geo = apply_word(w, PointConfig(sig, configuration_matrix(p)));
    const TorusTrajectory tr = torus_word(w, p);
    TorusParams flipped = tr.params;
    for (Complex &x : flipped.u) {
        x += 2.0 * tr.total;
    }
    CHECK(fit_pgl(geo.points(), configuration_matrix(tr.params)).residual < 1e-10);
    CHECK(fit_pgl(geo.points(), configuration_matrix(flipped)).residual > 1e-4);
}

TEST_CASE("KMNOY: G for the Cremona letter and the swaps")
{
    Rng rng(6);
    for (auto [n, m] : {std::pair{2, 5}, std::pair{3, 7}}) {
        const LatticeSignature sig(n, m);
        const TorusParams p = random_params(EmbeddingKind::kmnoy, sig, skew, rng);
        const std::vector<Complex> probes = random_probes(rng, skew);

        const VerificationReport r0 = verify_word(WeylWord{0}, p, probes);
        REQUIRE(r0.pass);
        CHECK(scalar_mismatch(r0.g, CMatrix::Identity(n + 1, n + 1)) < 1e-8);
        CHECK(std::abs(*kmnoy_step(0, p).eps + *p.eps) < 1e-15);

        for (int k = 1; k <= n; ++k) {
            const VerificationReport r = verify_word(WeylWord{k}, p, probes);
            REQUIRE(r.pass);
            CHECK(scalar_mismatch(r.g, permutation(n + 1, k - 1, k)) < 1e-8);
        }
        for (int k = n + 2; k < m; ++k) {
            const VerificationReport r = verify_word(WeylWord{k}, p, probes);
            REQUIRE(r.pass);
            CHECK(scalar_mismatch(r.g, CMatrix::Identity(n + 1, n + 1)) < 1e-8);
        }
    }
}

TEST_CASE("Weierstrass: swaps have s = 0 and G = identity")
{
    Rng rng(7);
    const LatticeSignature sig(3, 6);
    const TorusParams p = random_params(EmbeddingKind::weierstrass, sig, skew, rng);
    const std::vector<Complex> probes = random_probes(rng, skew);
    for (int k = 1; k < sig.m; ++k) {
        const VerificationReport r = verify_word(WeylWord{k}, p, probes);
        REQUIRE(r.pass);
        CHECK(r.s_total == Complex(0.0, 0.0));
        CHECK(scalar_mismatch(r.g, CMatrix::Identity(4, 4)) < 1e-8);
    }
}

TEST_CASE("measured Weierstrass shift")
{
    Rng rng(8);
    for (auto [n, m] : {std::pair{2, 5}, std::pair{3, 6}}) {
        const LatticeSignature sig(n, m);
        for (const TorusModulus &mod : {square, skew}) {
            const TorusParams p = random_params(EmbeddingKind::weierstrass, sig, mod, rng);
            const std::vector<Complex> probes = random_probes(rng, mod);
            Complex sum = 0;
            for (int j = 0; j <= n; ++j) {
                sum += p.u[static_cast<std::size_t>(j)];
            }
            const ShiftMeasurement s0 = measure_weierstrass_shift(0, p, probes);
            CHECK(std::abs(s0.formula + Real(n - 1) / Real(n + 1) * sum) < 1e-14);
            CHECK(s0.residual_formula < 1e-8);
            CHECK(s0.residual_measured < 1e-8);
            CHECK(s0.torsion_defect < 1e-8);
            const ShiftMeasurement s1 = measure_weierstrass_shift(1, p, probes);
            CHECK(s1.formula == Complex(0.0, 0.0));
            CHECK(s1.torsion_defect < 1e-8);
        }
    }
}

TEST_CASE("closed-form decomposition G = G2 G1")
{
    Rng rng(9);
    for (auto [n, m] : {std::pair{2, 5}, std::pair{3, 6}, std::pair{2, 9}}) {
        const LatticeSignature sig(n, m);
        for (const TorusModulus &mod : {square, skew}) {
            const TorusParams pw = random_params(EmbeddingKind::weierstrass, sig, mod, rng);
            const GDecompositionReport w = verify_g_decomposition(GCase::weierstrass_cremona, pw);
            CHECK(w.pass);
            CHECK(w.mismatch < 1e-7);
            CHECK(w.fit_residual < 1e-8);
            // G_1 is diagonal.
            CHECK((w.g1 - CMatrix(w.g1.diagonal().asDiagonal())).norm() < 1e-14 * w.g1.norm());

            const TorusParams pk = random_params(EmbeddingKind::kmnoy, sig, mod, rng);
            const GDecompositionReport k = verify_g_decomposition(GCase::kmnoy_r_n1_n2, pk);
            CHECK(k.pass);
            CHECK(k.mismatch < 1e-7);
            CHECK((k.g2 - CMatrix(k.g2.diagonal().asDiagonal())).norm() == 0.0);
            CHECK(k.g2.diagonal().cwiseAbs().minCoeff() > 0.0);
        }
    }
    Rng r2(10);
    const TorusParams pk = random_params(EmbeddingKind::kmnoy, LatticeSignature(2, 5), skew, r2);
    CHECK_THROWS_AS(verify_g_decomposition(GCase::weierstrass_cremona, pk), std::invalid_argument);
}

TEST_CASE("translation between embeddings of the same degree")
{
    Rng rng(11);
    const LatticeSignature sig(2, 5);
    const TorusParams p = random_params(EmbeddingKind::kmnoy, sig, skew, rng);
    const EllipticEmbedding a = embedding_for(p);

    const Prop32Report same = verify_prop32(a, a, rng);
    CHECK(same.pass);
    CHECK(skew.lattice_distance(same.a) < 1e-8);
    CHECK(scalar_mismatch(same.g, CMatrix::Identity(3, 3)) < 1e-8);

    const CMatrix h = oracle::random_matrix(rng, 3, 3);
    const Prop32Report moved = verify_prop32(a, a.transformed(h), rng);
    CHECK(moved.pass);
    CHECK(skew.lattice_distance(moved.a) < 1e-6);
    CHECK(scalar_mismatch(moved.g, h) < 1e-6);

    // Shifting every base point by c shifts the embedding by c.
    const Complex c(0.07, 0.05);
    std::vector<Complex> base(p.u.begin(), p.u.begin() + 3);
    for (Complex &b : base) {
        b += c;
    }
    const Prop32Report shifted = verify_prop32(a, EllipticEmbedding::kmnoy(base, *p.eps, skew), rng);
    CHECK(shifted.pass);
    CHECK(skew.lattice_distance(shifted.a - c) < 1e-8);

    for (int t = 0; t < 5; ++t) {
        const TorusParams q = random_params(EmbeddingKind::kmnoy, sig, skew, rng);
        const Prop32Report r = verify_prop32(a, embedding_for(q), rng);
        CHECK_MESSAGE(r.pass, "residual " << r.residual);
        CHECK(r.residual < 1e-7);
    }
    const Prop32Report mixed = verify_prop32(EllipticEmbedding::weierstrass(2, skew), a, rng);
    CHECK(mixed.pass);
}

TEST_CASE("failures are reported, not thrown")
{
    Rng rng(12);
    const LatticeSignature sig(2, 5);
    TorusParams p = random_params(EmbeddingKind::weierstrass, sig, skew, rng);
    p.u[3] = p.u[1];
    const VerificationReport r = verify_word(WeylWord{0}, p, random_probes(rng, skew));
    CHECK_FALSE(r.pass);
    CHECK_FALSE(r.error.empty());

    const TorusParams q = random_params(EmbeddingKind::kmnoy, sig, skew, rng);
    const VerificationReport bad = verify_word(WeylWord{7}, q, random_probes(rng, skew));
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(bad.error.empty());
    const VerificationReport none = verify_word(WeylWord{0}, q, std::vector<Complex>{});
    CHECK_FALSE(none.pass);
}

TEST_CASE("determinism and batches")
{
    const LatticeSignature sig(3, 6);
    std::vector<VerifyTask> tasks;
    std::vector<VerificationReport> sequential;
    for (std::uint64_t i = 0; i < 8; ++i) {
        Rng a(derive_seed(99, i)), b(derive_seed(99, i));
        const EmbeddingKind kind = i % 2 ? EmbeddingKind::kmnoy : EmbeddingKind::weierstrass;
        const TorusParams pa = random_params(kind, sig, skew, a);
        const TorusParams pb = random_params(kind, sig, skew, b);
        const WeylWord w(oracle::random_word(a, sig.m, 6, 1));
        const WeylWord wb(oracle::random_word(b, sig.m, 6, 1));
        const std::vector<Complex> probes = random_probes(a, skew);
        const VerificationReport ra = verify_word(w, pa, probes);
        const VerificationReport rb = verify_word(wb, pb, random_probes(b, skew));
        CHECK(same_report(ra, rb));
        tasks.push_back({w, pa, probes});
        sequential.push_back(ra);
    }
    for (unsigned threads : {1u, 3u}) {
        const std::vector<VerificationReport> batch = verify_batch(tasks, {}, threads);
        REQUIRE(batch.size() == sequential.size());
        for (std::size_t i = 0; i < batch.size(); ++i) {
            CHECK(same_report(batch[i], sequential[i]));
        }
    }
}
