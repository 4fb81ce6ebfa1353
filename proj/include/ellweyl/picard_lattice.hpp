#ifndef ELLWEYL_PICARD_LATTICE_HPP
#define ELLWEYL_PICARD_LATTICE_HPP

// Integer model of the Picard lattice Z E + Z E_1 + ... + Z E_m of the blow-up
// of P^n at m points, its homology dual Z e + Z e_1 + ... + Z e_m, the root
// system of type T_{2,n+1,m-n-1} and the Weyl group acting by reflections.
//
// Coefficients are arbitrary precision: along words of an indefinite Weyl
// group they grow exponentially.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ellweyl
{

using Integer = boost::multiprecision::cpp_int;

// Dimension n of the ambient P^n and number m of blown-up points, m >= n+2.
struct LatticeSignature {
    int n = 2;
    int m = 4;

    LatticeSignature() = default;
    LatticeSignature(int n_, int m_);

    // Rank of H^2 (and of H_2): m + 1.
    std::size_t rank() const
    {
        return static_cast<std::size_t>(m) + 1;
    }
    // Number of simple reflections: m.
    int generators() const
    {
        return m;
    }

    friend bool operator==(const LatticeSignature &, const LatticeSignature &) = default;
};

void require_same_signature(const LatticeSignature &a, const LatticeSignature &b);

// A word in the generators. Letter 0 is the Cremona transformation
// r_{1,...,n+1}, letter i >= 1 is the transposition r_{i,i+1}. Words act left
// to right: the first letter is applied first.
class WeylWord
{
public:
    WeylWord() = default;
    explicit WeylWord(std::vector<int> letters) : m_letters(std::move(letters)) {}
    WeylWord(std::initializer_list<int> letters) : m_letters(letters) {}

    // Comma separated generator indices, "" is the identity.
    static WeylWord parse(std::string_view text);
    std::string str() const;

    const std::vector<int> &letters() const
    {
        return m_letters;
    }
    std::size_t size() const
    {
        return m_letters.size();
    }
    bool empty() const
    {
        return m_letters.empty();
    }
    int operator[](std::size_t k) const
    {
        return m_letters[k];
    }

    WeylWord reversed() const;
    WeylWord prefix(std::size_t length) const;
    WeylWord operator+(const WeylWord &other) const;

    // Throws std::out_of_range if a letter is not a generator of `sig`.
    void validate(const LatticeSignature &sig) const;

    friend bool operator==(const WeylWord &, const WeylWord &) = default;

private:
    std::vector<int> m_letters;
};

namespace detail
{
struct DivisorTag {
};
struct CurveTag {
};
} // namespace detail

// Integer vector over the basis (E, E_1, ..., E_m) or (e, e_1, ..., e_m).
template <typename Tag>
class LatticeVector
{
public:
    explicit LatticeVector(const LatticeSignature &sig) : m_sig(sig), m_coeffs(sig.rank(), Integer(0)) {}
    LatticeVector(const LatticeSignature &sig, std::vector<Integer> coeffs);
    LatticeVector(const LatticeSignature &sig, std::initializer_list<long long> coeffs);

    // Basis vector k (0 is E resp. e, k >= 1 is E_k resp. e_k).
    static LatticeVector basis(const LatticeSignature &sig, std::size_t k)
    {
        LatticeVector v(sig);
        v.m_coeffs.at(k) = 1;
        return v;
    }

    const LatticeSignature &signature() const
    {
        return m_sig;
    }
    const std::vector<Integer> &coeffs() const
    {
        return m_coeffs;
    }
    const Integer &operator[](std::size_t k) const
    {
        return m_coeffs[k];
    }
    Integer &operator[](std::size_t k)
    {
        return m_coeffs[k];
    }
    std::size_t size() const
    {
        return m_coeffs.size();
    }

    LatticeVector &operator+=(const LatticeVector &o)
    {
        require_same_signature(m_sig, o.m_sig);
        for (std::size_t k = 0; k < m_coeffs.size(); ++k) {
            m_coeffs[k] += o.m_coeffs[k];
        }
        return *this;
    }
    LatticeVector &operator-=(const LatticeVector &o)
    {
        require_same_signature(m_sig, o.m_sig);
        for (std::size_t k = 0; k < m_coeffs.size(); ++k) {
            m_coeffs[k] -= o.m_coeffs[k];
        }
        return *this;
    }
    friend LatticeVector operator+(LatticeVector a, const LatticeVector &b)
    {
        return a += b;
    }
    friend LatticeVector operator-(LatticeVector a, const LatticeVector &b)
    {
        return a -= b;
    }
    friend LatticeVector operator*(const Integer &c, LatticeVector a)
    {
        for (auto &x : a.m_coeffs) {
            x *= c;
        }
        return a;
    }
    friend bool operator==(const LatticeVector &a, const LatticeVector &b)
    {
        return a.m_sig == b.m_sig && a.m_coeffs == b.m_coeffs;
    }

    // Symbolic form, e.g. "2E - E_1 - E_2 - E_3" (or with e, e_i for curves).
    std::string str() const;

private:
    LatticeSignature m_sig;
    std::vector<Integer> m_coeffs;
};

using DivisorClass = LatticeVector<detail::DivisorTag>;
using CurveClass = LatticeVector<detail::CurveTag>;

extern template class LatticeVector<detail::DivisorTag>;
extern template class LatticeVector<detail::CurveTag>;

// Parses a symbolic sum such as "E-E_1-E_2", "2E - E1 - E_3" or "3e-e_1".
// The symbol set follows the tag. Throws std::invalid_argument.
DivisorClass parse_divisor(std::string_view text, const LatticeSignature &sig);
CurveClass parse_curve(std::string_view text, const LatticeSignature &sig);

// Square integer matrix acting on coefficient column vectors of H^2.
class ActionMatrix
{
public:
    explicit ActionMatrix(const LatticeSignature &sig);
    static ActionMatrix identity(const LatticeSignature &sig);

    const LatticeSignature &signature() const
    {
        return m_sig;
    }
    std::size_t dim() const
    {
        return m_sig.rank();
    }
    const Integer &operator()(std::size_t r, std::size_t c) const
    {
        return m_entries[r * dim() + c];
    }
    Integer &operator()(std::size_t r, std::size_t c)
    {
        return m_entries[r * dim() + c];
    }

    friend ActionMatrix operator*(const ActionMatrix &a, const ActionMatrix &b);
    friend bool operator==(const ActionMatrix &a, const ActionMatrix &b)
    {
        return a.m_sig == b.m_sig && a.m_entries == b.m_entries;
    }

    DivisorClass apply(const DivisorClass &d) const;
    // Image of a curve class under the map induced on H_2: the adjoint with
    // respect to the intersection pairing, J (M^{-1})^T J with J = diag(1,-1,...,-1).
    CurveClass apply_curve(const CurveClass &d) const;
    ActionMatrix curve_matrix() const;

    ActionMatrix transpose() const;
    // Exact determinant (fraction free elimination).
    Integer determinant() const;
    // Exact inverse. Throws std::domain_error unless the matrix is unimodular.
    ActionMatrix inverse() const;

    std::vector<Integer> row(std::size_t r) const;
    // Column k is the image of basis vector k. Column r of the pull-back
    // matrix of a word holds the coefficients b_r^0, b_r^1, ..., b_r^m.
    std::vector<Integer> column(std::size_t c) const;

private:
    LatticeSignature m_sig;
    std::vector<Integer> m_entries;
};

// <D, d> = D_0 d_0 - sum_{i>=1} D_i d_i.
Integer pairing(const DivisorClass &D, const CurveClass &d);

// alpha_0 = E - E_1 - ... - E_{n+1}, alpha_i = E_i - E_{i+1}.
DivisorClass root(int i, const LatticeSignature &sig);
// alpha_0^v = (n-1) e - e_1 - ... - e_{n+1}, alpha_i^v = e_i - e_{i+1}.
CurveClass coroot(int i, const LatticeSignature &sig);
// Class of the lifted elliptic curve, (n+1) e - e_1 - ... - e_m.
CurveClass anticanonical_curve(const LatticeSignature &sig);

DivisorClass reflect_divisor(int i, const DivisorClass &D);
CurveClass reflect_curve(int i, const CurveClass &d);

ActionMatrix reflection_matrix(int i, const LatticeSignature &sig);
// D -> D + <D, alpha^v> alpha for an arbitrary (root, coroot) pair.
ActionMatrix root_reflection_matrix(const DivisorClass &alpha, const CurveClass &alpha_vee);

// w_* for the word applied left to right: R_{last} ... R_{first}.
ActionMatrix word_pushforward(const WeylWord &w, const LatticeSignature &sig);
// w^* = (w_*)^{-1}, obtained as the push-forward of the reversed word.
ActionMatrix word_pullback(const WeylWord &w, const LatticeSignature &sig);

// Symmetric 0/1 matrix over 0..m-1 with entry 1 iff <alpha_i, alpha_j^v> = 1.
std::vector<std::vector<int>> dynkin_adjacency(const LatticeSignature &sig);

// Breadth first search through the W-orbit of alpha_0 up to words of length
// `depth`. Returns a word w with w_*(alpha_0) = D, or nothing. The orbit is
// infinite in general, so a negative answer only covers the searched depth.
std::optional<WeylWord> find_root_word(const DivisorClass &D, int depth);
bool is_real_root_orbit_member(const DivisorClass &D, int depth);
// Every class reached from alpha_0 by words of length <= depth, in BFS order.
std::vector<DivisorClass> root_orbit(const LatticeSignature &sig, int depth);

// r_{i,j} (1 <= i < j <= m) as a word in the simple transpositions.
WeylWord transposition_word(int i, int j, const LatticeSignature &sig);
// r_{i_0,...,i_n} (strictly increasing, 1-based) as a conjugate of letter 0
// by the permutation moving the chosen points to the front.
WeylWord cremona_word(const std::vector<int> &indices, const LatticeSignature &sig);

} // namespace ellweyl

#endif
