#ifndef ELLWEYL_CREMONA_CONFIG_HPP
#define ELLWEYL_CREMONA_CONFIG_HPP

// Action of the generators (point swaps and the standard Cremona
// transformation) on configurations of m marked points of P^n together with
// fiber points, plus PGL(n+1) utilities: frame normalisation, map recovery
// from point correspondences and genericity checks.

#include <utility>
#include <vector>

#include "ellweyl/picard_lattice.hpp"
#include "ellweyl/types.hpp"

namespace ellweyl
{

struct ConfigTolerances {
    Real det = 1e-10;         // scaled minor below which points count as dependent
    Real projective = 1e-8;   // sin of the Fubini-Study angle for projective equality
};

// Columns 1..m are homogeneous coordinates of the marked points P_i; fiber
// columns are extra points of P^n carried along by every generator.
class PointConfig
{
public:
    PointConfig(const LatticeSignature &sig, CMatrix points, CMatrix fibers = CMatrix());

    const LatticeSignature &signature() const
    {
        return m_sig;
    }
    int n() const
    {
        return m_sig.n;
    }
    int m() const
    {
        return m_sig.m;
    }
    const CMatrix &points() const
    {
        return m_points;
    }
    const CMatrix &fibers() const
    {
        return m_fibers;
    }
    CMatrix &points()
    {
        return m_points;
    }
    CMatrix &fibers()
    {
        return m_fibers;
    }
    Eigen::Index fiber_count() const
    {
        return m_fibers.cols();
    }
    // 1-based column access matching P_1, ..., P_m.
    CVector point(int i) const
    {
        return m_points.col(i - 1);
    }

private:
    LatticeSignature m_sig;
    CMatrix m_points;
    CMatrix m_fibers;
};

// Element of PGL(n+1), stored as a representative matrix.
class ProjectiveMap
{
public:
    explicit ProjectiveMap(CMatrix matrix);
    static ProjectiveMap identity(int n);

    const CMatrix &matrix() const
    {
        return m_matrix;
    }
    int n() const
    {
        return static_cast<int>(m_matrix.rows()) - 1;
    }
    CVector operator()(const CVector &x) const
    {
        return m_matrix * x;
    }
    ProjectiveMap inverse() const;
    // Representative scaled so the largest modulus entry equals 1.
    CMatrix normalized() const;

    friend ProjectiveMap operator*(const ProjectiveMap &a, const ProjectiveMap &b)
    {
        return ProjectiveMap(a.m_matrix * b.m_matrix);
    }

private:
    CMatrix m_matrix;
};

// sin of the Fubini-Study angle between two homogeneous vectors.
Real projective_distance(const CVector &a, const CVector &b);

// Divides a vector by its largest modulus entry (first one on ties).
CVector normalize_max(const CVector &v);
// Same for every column.
CMatrix normalize_columns(const CMatrix &m);

// Exchanges P_i and P_j (1 <= i < j <= m); fibers are untouched.
PointConfig swap(int i, int j, const PointConfig &cfg);

// Standard Cremona transformation with respect to P_{i_0}, ..., P_{i_n}
// (strictly increasing, 1-based). For {1, ..., n+1}: multiply by the inverse
// of the frame block, then invert every entry outside the identity block.
// Other index sets conjugate by the column permutation moving them to the
// front. Columns are renormalised to max-modulus 1.
PointConfig cremona(const std::vector<int> &indices, const PointConfig &cfg);

// One generator: letter 0 is r_{1..n+1}, letter i is r_{i,i+1}.
PointConfig apply_generator(int letter, const PointConfig &cfg);

// Thrown by apply_word with the prefix of the word that was applied
// successfully before the failing letter.
class DegenerateWord : public DegenerateInput
{
public:
    DegenerateWord(const std::string &what, WeylWord prefix, int letter)
        : DegenerateInput(what), m_prefix(std::move(prefix)), m_letter(letter)
    {
    }
    const WeylWord &prefix() const
    {
        return m_prefix;
    }
    int letter() const
    {
        return m_letter;
    }

private:
    WeylWord m_prefix;
    int m_letter;
};

PointConfig apply_word(const WeylWord &w, const PointConfig &cfg);

struct PglFit {
    ProjectiveMap map;
    Real residual;   // max projective distance over all correspondences
};

// G with G(src_k) ~ dst_k. The first n+2 columns fix G (frame scaling), the
// remaining ones only enter the residual. Throws DegenerateInput if the first
// n+2 source or target points are not in general position.
PglFit fit_pgl(const CMatrix &src, const CMatrix &dst, Real tol_det = ConfigTolerances{}.det);
// As fit_pgl, but throws InconsistentCorrespondence if the residual exceeds
// tol.projective.
ProjectiveMap solve_pgl(const CMatrix &src, const CMatrix &dst, const ConfigTolerances &tol = {});

// Representative with P_1..P_{n+1} = standard basis and P_{n+2} = (1,...,1);
// further columns and fibers are scaled to first coordinate 1 where it is
// nonzero, else to max-modulus 1. Returns the map H used (new = H old).
std::pair<PointConfig, ProjectiveMap> normalize_frame(const PointConfig &cfg, Real tol_det = ConfigTolerances{}.det);

struct GenericityReport {
    Real min_scaled_minor = 0;   // min |det| / prod of column norms over all (n+1)-subsets
    std::vector<int> worst;      // 1-based indices attaining the minimum
    bool pass = false;
};
GenericityReport genericity_check(const PointConfig &cfg, Real tol_det = ConfigTolerances{}.det);
// Same report after scaling each row of the points to max-modulus 1. The
// diagonal rescaling is a projective change, so this measures the position of
// the points rather than the size of their coordinates.
GenericityReport balanced_genericity_check(const PointConfig &cfg, Real tol_det = ConfigTolerances{}.det);

} // namespace ellweyl

#endif
