#include <doctest.h>

#include <set>

#include "ellweyl/cremona_config.hpp"
#include "ellweyl/torus_rep.hpp"
#include "oracles.hpp"

using namespace ellweyl;

namespace
{

const TorusModulus square(Complex(0.0, 1.0));
const TorusModulus skew(Complex(0.31, 1.17));

std::vector<Complex> line_points(int m, Real step = 0.1)
{
    std::vector<Complex> u;
    for (int i = 1; i <= m; ++i) {
        u.emplace_back(step * i, 0.0);
    }
    return u;
}

// Pull-back coefficient b_r^j from the 64-bit oracle.
oracle::Vec pullback_column(const WeylWord &w, int r, int n, int m)
{
    oracle::Vec e(static_cast<std::size_t>(m) + 1, 0);
    e[static_cast<std::size_t>(r)] = 1;
    return oracle::apply_word(w.reversed().letters(), e, n, m);
}

std::vector<Complex> predicted_u(const WeylWord &w, const TorusParams &p)
{
    std::vector<Complex> out;
    for (int i = 1; i <= p.m(); ++i) {
        const oracle::Vec b = pullback_column(w, i, p.n(), p.m());
        Complex acc = Real(p.n() + 1) * Real(b[0]) * p.v;
        for (int j = 1; j <= p.m(); ++j) {
            acc += Real(b[static_cast<std::size_t>(j)]) * p.u[static_cast<std::size_t>(j) - 1];
        }
        out.push_back(acc);
    }
    return out;
}

Real torus_gap(Complex a, Complex b, const TorusModulus &mod)
{
    return mod.lattice_distance(a - b);
}

int coxeter_order(int g, int h, const LatticeSignature &sig)
{
    if (g == h) {
        return 1;
    }
    return dynkin_adjacency(sig)[static_cast<std::size_t>(g)][static_cast<std::size_t>(h)] ? 3 : 2;
}

} // namespace

TEST_CASE("parameter construction and validation")
{
    const LatticeSignature sig(2, 5);
    const TorusParams w = TorusParams::weierstrass(sig, square, line_points(5));
    CHECK(w.kind() == EmbeddingKind::weierstrass);
    CHECK(w.v == Complex(0.0, 0.0));
    const TorusParams k = TorusParams::kmnoy(sig, square, line_points(5), 0.3);
    CHECK(k.kind() == EmbeddingKind::kmnoy);
    CHECK(std::abs(k.v - (0.3 + 0.1 + 0.2 + 0.3) / 3.0) < 1e-15);
    CHECK_NOTHROW(k.validate());
    CHECK(k.points().size() == 5);

    CHECK_THROWS_AS(TorusParams::weierstrass(sig, square, line_points(4)).validate(), std::invalid_argument);
    std::vector<Complex> dup = line_points(5);
    dup[3] = dup[1] + 1.0 + square.tau();
    CHECK_THROWS_AS(TorusParams::weierstrass(sig, square, dup).validate(), DegenerateInput);
}

TEST_CASE("configuration matrix is the embedding of the points")
{
    const LatticeSignature sig(3, 6);
    Rng rng(1);
    for (EmbeddingKind kind : {EmbeddingKind::weierstrass, EmbeddingKind::kmnoy}) {
        const TorusParams p = random_params(kind, sig, skew, rng);
        const CMatrix cfg = configuration_matrix(p);
        REQUIRE(cfg.rows() == 4);
        REQUIRE(cfg.cols() == 6);
        const EllipticEmbedding emb = embedding_for(p);
        for (int i = 0; i < 6; ++i) {
            CHECK(oracle::proj_gap(cfg.col(i), emb(p.u[static_cast<std::size_t>(i)])) < 1e-14);
        }
        if (kind == EmbeddingKind::kmnoy) {
            // The first n+1 points form the coordinate frame.
            CHECK((cfg.leftCols(4) - CMatrix::Identity(4, 4)).norm() < 1e-14);
        }
        CHECK(genericity_check(PointConfig(sig, cfg)).pass);
    }
}

TEST_CASE("predict_points against the oracle pull-back")
{
    Rng rng(2);
    for (auto [n, m] : {std::pair{2, 5}, std::pair{3, 7}, std::pair{2, 9}}) {
        const LatticeSignature sig(n, m);
        for (int t = 0; t < 20; ++t) {
            const TorusParams p = random_params(t % 2 ? EmbeddingKind::kmnoy : EmbeddingKind::weierstrass, sig, square, rng);
            const WeylWord w(oracle::random_word(rng, m, 8));
            const PointPrediction pred = predict_points(word_pullback(w, sig), p);
            const std::vector<Complex> ref = predicted_u(w, p);
            for (int i = 0; i < m; ++i) {
                CHECK(std::abs(pred.u[static_cast<std::size_t>(i)] - ref[static_cast<std::size_t>(i)]) < 1e-12);
            }
            const oracle::Vec b0 = pullback_column(w, 0, n, m);
            Complex vt = Real(n + 1) * Real(b0[0]) * p.v;
            for (int j = 1; j <= m; ++j) {
                vt += Real(b0[static_cast<std::size_t>(j)]) * p.u[static_cast<std::size_t>(j) - 1];
            }
            CHECK(std::abs(pred.v_times - vt) < 1e-12);
            CHECK(std::abs(shift_s(word_pullback(w, sig), p) - (vt - Real(n + 1) * p.v)) < 1e-12);
        }
    }
    const LatticeSignature sig(2, 5);
    const TorusParams p = TorusParams::weierstrass(sig, square, line_points(5));
    const PointPrediction id = predict_points(ActionMatrix::identity(sig), p);
    for (int i = 0; i < 5; ++i) {
        CHECK(id.u[static_cast<std::size_t>(i)] == p.u[static_cast<std::size_t>(i)]);
    }
    CHECK_THROWS_AS(predict_points(ActionMatrix::identity(LatticeSignature(2, 6)), p), SignatureMismatch);
}

TEST_CASE("Weierstrass step: worked example")
{
    // n = 2, u = 0.1, 0.2, 0.3, ...: letter 0 has s = -(1/3)(0.6) = -0.2.
    const LatticeSignature sig(2, 5);
    const TorusParams p = TorusParams::weierstrass(sig, square, line_points(5));
    const WeierstrassStep st = weierstrass_step(0, p);
    CHECK(std::abs(st.s - Complex(-0.2, 0.0)) < 1e-15);
    // Pull-back of E_1 is E - E_2 - E_3, so u_1' = -0.5 and u_1' - s = -0.3.
    CHECK(std::abs(st.params.u[0] - Complex(-0.3, 0.0)) < 1e-15);
    CHECK(std::abs(st.params.u[1] - Complex(-0.2, 0.0)) < 1e-15);
    CHECK(std::abs(st.params.u[2] - Complex(-0.1, 0.0)) < 1e-15);
    CHECK(std::abs(st.params.u[3] - Complex(0.6, 0.0)) < 1e-15);
    CHECK(std::abs(st.params.u[4] - Complex(0.7, 0.0)) < 1e-15);
    CHECK(st.params.v == Complex(0.0, 0.0));

    const WeierstrassStep sw = weierstrass_step(3, p);
    CHECK(sw.s == Complex(0.0, 0.0));
    CHECK(sw.params.u[2] == p.u[3]);
    CHECK(sw.params.u[3] == p.u[2]);
    CHECK_THROWS_AS(weierstrass_step(5, p), std::out_of_range);
    CHECK_THROWS_AS(weierstrass_step(0, TorusParams::kmnoy(sig, square, line_points(5), 0.2)), std::invalid_argument);
}

TEST_CASE("Weierstrass shift agrees with shift_s for every signature")
{
    Rng rng(3);
    for (auto [n, m] : {std::pair{2, 5}, std::pair{3, 6}, std::pair{4, 8}, std::pair{5, 9}}) {
        const LatticeSignature sig(n, m);
        const TorusParams p = random_params(EmbeddingKind::weierstrass, sig, skew, rng);
        Complex sum = 0;
        for (int j = 0; j <= n; ++j) {
            sum += p.u[static_cast<std::size_t>(j)];
        }
        const WeierstrassStep st = weierstrass_step(0, p);
        CHECK(std::abs(st.s + Real(n - 1) / Real(n + 1) * sum) < 1e-14);
        CHECK(std::abs(Real(n + 1) * st.s - shift_s(word_pullback({0}, sig), p)) < 1e-13);
        // The normalised parameters keep v = 0: the new hyperplane class is 0.
        const PointPrediction again = predict_points(ActionMatrix::identity(sig), st.params);
        CHECK(std::abs(again.v_times) < 1e-15);
    }
}

TEST_CASE("KMNOY generator updates")
{
    const LatticeSignature sig(2, 6);
    const Complex eps(0.13, 0.07);
    const TorusParams p = TorusParams::kmnoy(sig, square, line_points(6), eps);

    const TorusParams r0 = kmnoy_step(0, p);
    for (int i = 0; i < 3; ++i) {
        CHECK(r0.u[static_cast<std::size_t>(i)] == p.u[static_cast<std::size_t>(i)] + eps);
    }
    for (int i = 3; i < 6; ++i) {
        CHECK(r0.u[static_cast<std::size_t>(i)] == p.u[static_cast<std::size_t>(i)]);
    }
    CHECK(*r0.eps == -eps);

    const TorusParams r1 = kmnoy_step(1, p);
    CHECK(r1.u[0] == p.u[1]);
    CHECK(r1.u[1] == p.u[0]);
    CHECK(*r1.eps == eps);

    // r_{n+1, n+2}: eps picks up u_{n+1} - u_{n+2}.
    const TorusParams r3 = kmnoy_step(3, p);
    CHECK(r3.u[2] == p.u[3]);
    CHECK(r3.u[3] == p.u[2]);
    CHECK(std::abs(*r3.eps - (eps + p.u[2] - p.u[3])) < 1e-16);

    const TorusParams r4 = kmnoy_step(4, p);
    CHECK(r4.u[3] == p.u[4]);
    CHECK(*r4.eps == eps);

    for (const TorusParams &q : {r0, r1, r3, r4}) {
        Complex s = *q.eps;
        for (int i = 0; i < 3; ++i) {
            s += q.u[static_cast<std::size_t>(i)];
        }
        CHECK(std::abs(3.0 * q.v - s) < 1e-15);
        CHECK(torus_step(0, q).s == Complex(0.0, 0.0));
    }
    CHECK_THROWS_AS(kmnoy_step(0, TorusParams::weierstrass(sig, square, line_points(6))), std::invalid_argument);
    CHECK_THROWS_AS(kmnoy_step(-1, p), std::out_of_range);
}

TEST_CASE("KMNOY updates match the lattice prediction")
{
    Rng rng(4);
    for (auto [n, m] : {std::pair{2, 5}, std::pair{3, 7}}) {
        const LatticeSignature sig(n, m);
        for (int t = 0; t < 20; ++t) {
            const TorusParams p = random_params(EmbeddingKind::kmnoy, sig, skew, rng);
            const WeylWord w(oracle::random_word(rng, m, 6, 1));
            const TorusParams q = kmnoy_word(w, p);
            const PointPrediction pred = predict_points(word_pullback(w, sig), p);
            for (int i = 0; i < m; ++i) {
                CHECK(torus_gap(q.u[static_cast<std::size_t>(i)], pred.u[static_cast<std::size_t>(i)], skew) < 1e-12);
            }
            CHECK(torus_gap(Real(n + 1) * q.v, pred.v_times, skew) < 1e-12);
        }
    }
}

TEST_CASE("generators act as involutions")
{
    Rng rng(5);
    const LatticeSignature sig(3, 7);
    for (EmbeddingKind kind : {EmbeddingKind::weierstrass, EmbeddingKind::kmnoy}) {
        const TorusParams p = random_params(kind, sig, skew, rng);
        for (int g = 0; g < sig.m; ++g) {
            const TorusTrajectory tr = torus_word(WeylWord{g, g}, p);
            CHECK(params_distance(tr.params, p) < 1e-13);
            CHECK(skew.lattice_distance(tr.total) < 1e-13);
        }
    }
}

TEST_CASE("Coxeter relations on random states")
{
    Rng rng(6);
    const LatticeSignature sig(2, 5);
    for (int t = 0; t < 100; ++t) {
        const EmbeddingKind kind = t % 2 ? EmbeddingKind::kmnoy : EmbeddingKind::weierstrass;
        const TorusParams p = random_params(kind, sig, t % 3 ? skew : square, rng);
        const int g = static_cast<int>(rng.uniform() * sig.m);
        const int h = static_cast<int>(rng.uniform() * sig.m);
        std::vector<int> letters;
        for (int k = 0; k < coxeter_order(g, h, sig); ++k) {
            letters.push_back(g);
            letters.push_back(h);
        }
        const TorusTrajectory tr = torus_word(WeylWord(letters), p);
        CHECK(params_distance(tr.params, p) < 1e-12);
        CHECK(p.modulus.lattice_distance(tr.total) < 1e-12);
        CHECK(tr.shifts.size() == letters.size());
    }
}

TEST_CASE("trajectory bookkeeping")
{
    Rng rng(7);
    const LatticeSignature sig(2, 6);
    const TorusParams p = random_params(EmbeddingKind::weierstrass, sig, skew, rng);
    const WeylWord w{0, 1, 2, 0, 3, 0};
    const TorusTrajectory tr = torus_word(w, p);
    Complex sum = 0;
    TorusParams state = p;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const TorusStep st = torus_step(w[k], state);
        CHECK(std::abs(st.s - tr.shifts[k]) < 1e-15);
        sum += st.s;
        state = st.params;
    }
    CHECK(std::abs(sum - tr.total) < 1e-14);
    CHECK(params_distance(state, tr.params) < 1e-15);

    const TorusTrajectory empty = torus_word(WeylWord{}, p);
    CHECK(empty.shifts.empty());
    CHECK(empty.total == Complex(0.0, 0.0));
    CHECK(params_distance(empty.params, p) == 0.0);
    CHECK_THROWS_AS(torus_word(WeylWord{0, 6}, p), std::out_of_range);
}

TEST_CASE("params_distance")
{
    const LatticeSignature sig(2, 5);
    const TorusParams p = TorusParams::kmnoy(sig, skew, line_points(5), 0.2);
    TorusParams q = p;
    q.u[2] += 2.0 - skew.tau();
    *q.eps += skew.tau();
    q.v += 1.0;
    CHECK(params_distance(p, q) < 1e-14);
    q.u[4] += 0.01;
    CHECK(params_distance(p, q) == doctest::Approx(0.01));
    CHECK_THROWS_AS(params_distance(p, TorusParams::weierstrass(sig, skew, line_points(5))), std::invalid_argument);
}

TEST_CASE("deterministic randomness")
{
    Rng a(42), b(42), c(43);
    for (int k = 0; k < 100; ++k) {
        const Real x = a.uniform();
        CHECK(x == b.uniform());
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
    CHECK(a.next() != c.next());
    // First output of mt19937_64 with the default seed is fixed by the standard.
    Rng d(5489);
    CHECK(d.next() == 14514284786278117030ull);

    std::set<std::uint64_t> seeds;
    for (std::uint64_t i = 0; i < 1000; ++i) {
        seeds.insert(derive_seed(7, i));
    }
    CHECK(seeds.size() == 1000);
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
    CHECK(derive_seed(7, 3) != derive_seed(8, 3));

    const LatticeSignature sig(3, 7);
    Rng r1(9), r2(9);
    const TorusParams p1 = random_params(EmbeddingKind::kmnoy, sig, skew, r1);
    const TorusParams p2 = random_params(EmbeddingKind::kmnoy, sig, skew, r2);
    CHECK(params_distance(p1, p2) == 0.0);
}

TEST_CASE("random parameters respect separation and genericity")
{
    Rng rng(10);
    for (auto [n, m] : {std::pair{2, 5}, std::pair{4, 8}}) {
        const LatticeSignature sig(n, m);
        for (EmbeddingKind kind : {EmbeddingKind::weierstrass, EmbeddingKind::kmnoy}) {
            for (int t = 0; t < 5; ++t) {
                const TorusParams p = random_params(kind, sig, skew, rng);
                CHECK_NOTHROW(p.validate());
                for (int i = 0; i < m; ++i) {
                    for (int j = i + 1; j < m; ++j) {
                        CHECK(torus_gap(p.u[static_cast<std::size_t>(i)], p.u[static_cast<std::size_t>(j)], skew) >= 0.05);
                    }
                }
                const GenericityReport g = balanced_genericity_check(PointConfig(sig, configuration_matrix(p)));
                CHECK(g.pass);
                CHECK(g.min_scaled_minor >= 1e-4);
                const Complex z = random_torus_point(rng, skew);
                auto [a, b] = skew.coordinates(z);
                CHECK(a >= 0);
                CHECK(a < 1);
                CHECK(b >= 0);
                CHECK(b < 1);
            }
        }
    }
}
