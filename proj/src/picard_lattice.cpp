#include "ellweyl/picard_lattice.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

#include "ellweyl/types.hpp"

namespace ellweyl
{

using Rational = boost::multiprecision::cpp_rational;

LatticeSignature::LatticeSignature(int n_, int m_) : n(n_), m(m_)
{
    if (n < 1) {
        throw std::invalid_argument("lattice signature: n must be >= 1");
    }
    if (m < n + 2) {
        throw std::invalid_argument("lattice signature: m must be >= n + 2");
    }
}

void require_same_signature(const LatticeSignature &a, const LatticeSignature &b)
{
    if (!(a == b)) {
        std::ostringstream os;
        os << "signature mismatch: (" << a.n << "," << a.m << ") vs (" << b.n << "," << b.m << ")";
        throw SignatureMismatch(os.str());
    }
}

// ---------------------------------------------------------------- WeylWord

WeylWord WeylWord::parse(std::string_view text)
{
    std::vector<int> letters;
    std::string token;
    auto flush = [&](bool allow_empty) {
        auto first = token.find_first_not_of(" \t");
        if (first == std::string::npos) {
            if (!allow_empty) {
                throw std::invalid_argument("word: empty letter");
            }
            token.clear();
            return;
        }
        auto last = token.find_last_not_of(" \t");
        std::string t = token.substr(first, last - first + 1);
        if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char c) { return std::isdigit(c); })) {
            throw std::invalid_argument("word: letter '" + t + "' is not a non-negative integer");
        }
        if (t.size() > 6) {
            throw std::invalid_argument("word: letter '" + t + "' too large");
        }
        letters.push_back(std::stoi(t));
        token.clear();
    };
    bool any = false;
    for (char c : text) {
        if (c == ',') {
            flush(false);
            any = true;
        } else {
            token.push_back(c);
        }
    }
    // A trailing empty token is only allowed for the empty word.
    flush(!any);
    return WeylWord(std::move(letters));
}

std::string WeylWord::str() const
{
    std::string out;
    for (std::size_t k = 0; k < m_letters.size(); ++k) {
        if (k) {
            out += ',';
        }
        out += std::to_string(m_letters[k]);
    }
    return out;
}

WeylWord WeylWord::reversed() const
{
    return WeylWord(std::vector<int>(m_letters.rbegin(), m_letters.rend()));
}

WeylWord WeylWord::prefix(std::size_t length) const
{
    length = std::min(length, m_letters.size());
    return WeylWord(std::vector<int>(m_letters.begin(), m_letters.begin() + static_cast<std::ptrdiff_t>(length)));
}

WeylWord WeylWord::operator+(const WeylWord &other) const
{
    std::vector<int> out = m_letters;
    out.insert(out.end(), other.m_letters.begin(), other.m_letters.end());
    return WeylWord(std::move(out));
}

void WeylWord::validate(const LatticeSignature &sig) const
{
    for (int g : m_letters) {
        if (g < 0 || g >= sig.generators()) {
            throw std::out_of_range("word letter " + std::to_string(g) + " outside 0.."
                                    + std::to_string(sig.generators() - 1));
        }
    }
}

// ----------------------------------------------------------- LatticeVector

template <typename Tag>
LatticeVector<Tag>::LatticeVector(const LatticeSignature &sig, std::vector<Integer> coeffs)
    : m_sig(sig), m_coeffs(std::move(coeffs))
{
    if (m_coeffs.size() != sig.rank()) {
        throw std::invalid_argument("lattice vector: expected " + std::to_string(sig.rank()) + " coefficients");
    }
}

template <typename Tag>
LatticeVector<Tag>::LatticeVector(const LatticeSignature &sig, std::initializer_list<long long> coeffs)
    : m_sig(sig)
{
    if (coeffs.size() > sig.rank()) {
        throw std::invalid_argument("lattice vector: too many coefficients");
    }
    for (long long c : coeffs) {
        m_coeffs.emplace_back(c);
    }
    m_coeffs.resize(sig.rank(), Integer(0));
}

template <typename Tag>
std::string LatticeVector<Tag>::str() const
{
    const char *sym = std::is_same_v<Tag, detail::DivisorTag> ? "E" : "e";
    std::ostringstream os;
    bool first = true;
    for (std::size_t k = 0; k < m_coeffs.size(); ++k) {
        const Integer &c = m_coeffs[k];
        if (c == 0) {
            continue;
        }
        Integer a = abs(c);
        if (first) {
            if (c < 0) {
                os << "-";
            }
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (a != 1) {
            os << a;
        }
        os << sym;
        if (k > 0) {
            os << "_" << k;
        }
        first = false;
    }
    if (first) {
        os << "0";
    }
    return os.str();
}

template class LatticeVector<detail::DivisorTag>;
template class LatticeVector<detail::CurveTag>;

namespace
{

std::vector<Integer> parse_symbolic(std::string_view text, const LatticeSignature &sig, char sym)
{
    std::vector<Integer> coeffs(sig.rank(), Integer(0));
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            s.push_back(c);
        }
    }
    if (s.empty()) {
        throw std::invalid_argument("class: empty expression");
    }
    if (s == "0") {
        return coeffs;
    }
    std::size_t pos = 0;
    while (pos < s.size()) {
        int sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (pos != 0) {
            throw std::invalid_argument("class: expected '+' or '-' at position " + std::to_string(pos));
        }
        std::string digits;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            digits.push_back(s[pos++]);
        }
        if (pos < s.size() && s[pos] == '*') {
            ++pos;
        }
        if (pos >= s.size() || s[pos] != sym) {
            throw std::invalid_argument(std::string("class: expected symbol '") + sym + "' in '" + s + "'");
        }
        ++pos;
        std::size_t index = 0;
        if (pos < s.size() && s[pos] == '_') {
            ++pos;
        }
        std::string idx;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            idx.push_back(s[pos++]);
        }
        if (!idx.empty()) {
            if (idx.size() > 6) {
                throw std::invalid_argument("class: index too large");
            }
            index = static_cast<std::size_t>(std::stoul(idx));
            if (index < 1 || index > static_cast<std::size_t>(sig.m)) {
                throw std::invalid_argument("class: index " + idx + " outside 1.." + std::to_string(sig.m));
            }
        }
        Integer c = digits.empty() ? Integer(1) : Integer(digits);
        coeffs[index] += sign * c;
    }
    return coeffs;
}

} // namespace

DivisorClass parse_divisor(std::string_view text, const LatticeSignature &sig)
{
    return DivisorClass(sig, parse_symbolic(text, sig, 'E'));
}

CurveClass parse_curve(std::string_view text, const LatticeSignature &sig)
{
    return CurveClass(sig, parse_symbolic(text, sig, 'e'));
}

// ------------------------------------------------------------ ActionMatrix

ActionMatrix::ActionMatrix(const LatticeSignature &sig) : m_sig(sig), m_entries(sig.rank() * sig.rank(), Integer(0)) {}

ActionMatrix ActionMatrix::identity(const LatticeSignature &sig)
{
    ActionMatrix a(sig);
    for (std::size_t k = 0; k < a.dim(); ++k) {
        a(k, k) = 1;
    }
    return a;
}

ActionMatrix operator*(const ActionMatrix &a, const ActionMatrix &b)
{
    require_same_signature(a.m_sig, b.m_sig);
    const std::size_t d = a.dim();
    ActionMatrix out(a.m_sig);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t k = 0; k < d; ++k) {
            const Integer &ark = a(r, k);
            if (ark == 0) {
                continue;
            }
            for (std::size_t c = 0; c < d; ++c) {
                out(r, c) += ark * b(k, c);
            }
        }
    }
    return out;
}

DivisorClass ActionMatrix::apply(const DivisorClass &D) const
{
    require_same_signature(m_sig, D.signature());
    DivisorClass out(m_sig);
    for (std::size_t r = 0; r < dim(); ++r) {
        for (std::size_t c = 0; c < dim(); ++c) {
            out[r] += (*this)(r, c) * D[c];
        }
    }
    return out;
}

ActionMatrix ActionMatrix::curve_matrix() const
{
    // N = J (M^{-1})^T J keeps <M D, N d> = <D, d>.
    ActionMatrix inv_t = inverse().transpose();
    for (std::size_t r = 0; r < dim(); ++r) {
        for (std::size_t c = 0; c < dim(); ++c) {
            if ((r == 0) != (c == 0)) {
                inv_t(r, c) = -inv_t(r, c);
            }
        }
    }
    return inv_t;
}

CurveClass ActionMatrix::apply_curve(const CurveClass &d) const
{
    require_same_signature(m_sig, d.signature());
    const ActionMatrix n = curve_matrix();
    CurveClass out(m_sig);
    for (std::size_t r = 0; r < dim(); ++r) {
        for (std::size_t c = 0; c < dim(); ++c) {
            out[r] += n(r, c) * d[c];
        }
    }
    return out;
}

ActionMatrix ActionMatrix::transpose() const
{
    ActionMatrix t(m_sig);
    for (std::size_t r = 0; r < dim(); ++r) {
        for (std::size_t c = 0; c < dim(); ++c) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

Integer ActionMatrix::determinant() const
{
    // Bareiss elimination: every intermediate division is exact.
    const std::size_t d = dim();
    std::vector<Integer> a = m_entries;
    auto at = [&](std::size_t r, std::size_t c) -> Integer & { return a[r * d + c]; };
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < d; ++k) {
        if (at(k, k) == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < d && at(swap_row, k) == 0) {
                ++swap_row;
            }
            if (swap_row == d) {
                return 0;
            }
            for (std::size_t c = 0; c < d; ++c) {
                std::swap(at(k, c), at(swap_row, c));
            }
            sign = -sign;
        }
        for (std::size_t r = k + 1; r < d; ++r) {
            for (std::size_t c = k + 1; c < d; ++c) {
                at(r, c) = (at(r, c) * at(k, k) - at(r, k) * at(k, c)) / prev;
            }
        }
        prev = at(k, k);
    }
    return sign * at(d - 1, d - 1);
}

ActionMatrix ActionMatrix::inverse() const
{
    const std::size_t d = dim();
    std::vector<Rational> a(d * 2 * d);
    auto at = [&](std::size_t r, std::size_t c) -> Rational & { return a[r * 2 * d + c]; };
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            at(r, c) = Rational((*this)(r, c));
        }
        at(r, d + r) = 1;
    }
    for (std::size_t k = 0; k < d; ++k) {
        std::size_t piv = k;
        while (piv < d && at(piv, k) == 0) {
            ++piv;
        }
        if (piv == d) {
            throw std::domain_error("action matrix is singular");
        }
        if (piv != k) {
            for (std::size_t c = 0; c < 2 * d; ++c) {
                std::swap(at(k, c), at(piv, c));
            }
        }
        Rational p = at(k, k);
        for (std::size_t c = 0; c < 2 * d; ++c) {
            at(k, c) /= p;
        }
        for (std::size_t r = 0; r < d; ++r) {
            if (r == k || at(r, k) == 0) {
                continue;
            }
            Rational f = at(r, k);
            for (std::size_t c = 0; c < 2 * d; ++c) {
                at(r, c) -= f * at(k, c);
            }
        }
    }
    ActionMatrix out(m_sig);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const Rational &x = at(r, d + c);
            if (denominator(x) != 1) {
                throw std::domain_error("action matrix is not unimodular");
            }
            out(r, c) = numerator(x);
        }
    }
    return out;
}

std::vector<Integer> ActionMatrix::row(std::size_t r) const
{
    return std::vector<Integer>(m_entries.begin() + static_cast<std::ptrdiff_t>(r * dim()),
                                m_entries.begin() + static_cast<std::ptrdiff_t>((r + 1) * dim()));
}

std::vector<Integer> ActionMatrix::column(std::size_t c) const
{
    std::vector<Integer> out;
    out.reserve(dim());
    for (std::size_t r = 0; r < dim(); ++r) {
        out.push_back((*this)(r, c));
    }
    return out;
}

// ------------------------------------------------------------- operations

Integer pairing(const DivisorClass &D, const CurveClass &d)
{
    require_same_signature(D.signature(), d.signature());
    Integer out = D[0] * d[0];
    for (std::size_t k = 1; k < D.size(); ++k) {
        out -= D[k] * d[k];
    }
    return out;
}

namespace
{
void check_index(int i, const LatticeSignature &sig)
{
    if (i < 0 || i >= sig.generators()) {
        throw std::out_of_range("root index " + std::to_string(i) + " outside 0.." + std::to_string(sig.generators() - 1));
    }
}
} // namespace

DivisorClass root(int i, const LatticeSignature &sig)
{
    check_index(i, sig);
    DivisorClass a(sig);
    if (i == 0) {
        a[0] = 1;
        for (int k = 1; k <= sig.n + 1; ++k) {
            a[k] = -1;
        }
    } else {
        a[i] = 1;
        a[i + 1] = -1;
    }
    return a;
}

CurveClass coroot(int i, const LatticeSignature &sig)
{
    check_index(i, sig);
    CurveClass a(sig);
    if (i == 0) {
        a[0] = sig.n - 1;
        for (int k = 1; k <= sig.n + 1; ++k) {
            a[k] = -1;
        }
    } else {
        a[i] = 1;
        a[i + 1] = -1;
    }
    return a;
}

CurveClass anticanonical_curve(const LatticeSignature &sig)
{
    CurveClass d(sig);
    d[0] = sig.n + 1;
    for (int k = 1; k <= sig.m; ++k) {
        d[k] = -1;
    }
    return d;
}

DivisorClass reflect_divisor(int i, const DivisorClass &D)
{
    const auto &sig = D.signature();
    return D + pairing(D, coroot(i, sig)) * root(i, sig);
}

CurveClass reflect_curve(int i, const CurveClass &d)
{
    const auto &sig = d.signature();
    return d + pairing(root(i, sig), d) * coroot(i, sig);
}

ActionMatrix root_reflection_matrix(const DivisorClass &alpha, const CurveClass &alpha_vee)
{
    const auto &sig = alpha.signature();
    require_same_signature(sig, alpha_vee.signature());
    ActionMatrix out(sig);
    for (std::size_t c = 0; c < sig.rank(); ++c) {
        DivisorClass image = DivisorClass::basis(sig, c);
        image += pairing(image, alpha_vee) * alpha;
        for (std::size_t r = 0; r < sig.rank(); ++r) {
            out(r, c) = image[r];
        }
    }
    return out;
}

ActionMatrix reflection_matrix(int i, const LatticeSignature &sig)
{
    return root_reflection_matrix(root(i, sig), coroot(i, sig));
}

ActionMatrix word_pushforward(const WeylWord &w, const LatticeSignature &sig)
{
    w.validate(sig);
    std::vector<ActionMatrix> gens;
    gens.reserve(static_cast<std::size_t>(sig.generators()));
    for (int g = 0; g < sig.generators(); ++g) {
        gens.push_back(reflection_matrix(g, sig));
    }
    ActionMatrix out = ActionMatrix::identity(sig);
    for (int g : w.letters()) {
        out = gens[static_cast<std::size_t>(g)] * out;
    }
    return out;
}

ActionMatrix word_pullback(const WeylWord &w, const LatticeSignature &sig)
{
    return word_pushforward(w.reversed(), sig);
}

std::vector<std::vector<int>> dynkin_adjacency(const LatticeSignature &sig)
{
    const int m = sig.generators();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m), 0));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i != j && pairing(root(i, sig), coroot(j, sig)) == 1) {
                adj[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = 1;
            }
        }
    }
    return adj;
}

namespace
{

struct OrbitSearch {
    std::vector<DivisorClass> classes;
    std::vector<WeylWord> words;
};

// BFS from alpha_0; stops early once `target` is reached.
OrbitSearch bfs_orbit(const LatticeSignature &sig, int depth, const DivisorClass *target)
{
    if (depth < 0) {
        throw std::invalid_argument("orbit search: depth must be >= 0");
    }
    OrbitSearch out;
    std::map<std::vector<Integer>, std::size_t> visited;
    DivisorClass start = root(0, sig);
    out.classes.push_back(start);
    out.words.emplace_back();
    visited.emplace(start.coeffs(), 0);
    if (target && *target == start) {
        return out;
    }
    std::size_t level_begin = 0;
    for (int level = 0; level < depth; ++level) {
        const std::size_t level_end = out.classes.size();
        for (std::size_t k = level_begin; k < level_end; ++k) {
            for (int g = 0; g < sig.generators(); ++g) {
                DivisorClass next = reflect_divisor(g, out.classes[k]);
                if (visited.count(next.coeffs())) {
                    continue;
                }
                visited.emplace(next.coeffs(), out.classes.size());
                out.words.push_back(out.words[k] + WeylWord{g});
                out.classes.push_back(std::move(next));
                if (target && *target == out.classes.back()) {
                    return out;
                }
            }
        }
        level_begin = level_end;
        if (level_begin == out.classes.size()) {
            break;
        }
    }
    return out;
}

} // namespace

std::optional<WeylWord> find_root_word(const DivisorClass &D, int depth)
{
    OrbitSearch s = bfs_orbit(D.signature(), depth, &D);
    if (s.classes.back() == D) {
        return s.words.back();
    }
    return std::nullopt;
}

bool is_real_root_orbit_member(const DivisorClass &D, int depth)
{
    return find_root_word(D, depth).has_value();
}

std::vector<DivisorClass> root_orbit(const LatticeSignature &sig, int depth)
{
    return bfs_orbit(sig, depth, nullptr).classes;
}

WeylWord transposition_word(int i, int j, const LatticeSignature &sig)
{
    if (i < 1 || j > sig.m || i >= j) {
        throw std::out_of_range("transposition: need 1 <= i < j <= m");
    }
    // (i j) = s_{j-1} ... s_{i+1} s_i s_{i+1} ... s_{j-1}
    std::vector<int> letters;
    for (int k = j - 1; k > i; --k) {
        letters.push_back(k);
    }
    letters.push_back(i);
    for (int k = i + 1; k < j; ++k) {
        letters.push_back(k);
    }
    return WeylWord(std::move(letters));
}

WeylWord cremona_word(const std::vector<int> &indices, const LatticeSignature &sig)
{
    if (static_cast<int>(indices.size()) != sig.n + 1) {
        throw std::invalid_argument("cremona: need exactly n+1 indices");
    }
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] < 1 || indices[k] > sig.m || (k > 0 && indices[k] <= indices[k - 1])) {
            throw std::out_of_range("cremona: indices must be strictly increasing within 1..m");
        }
    }
    // Bubble each chosen slot leftwards to position k+1; the earlier chosen
    // slots already sit in front so the later ones keep their index.
    std::vector<int> to_front;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        for (int pos = indices[k]; pos > static_cast<int>(k) + 1; --pos) {
            to_front.push_back(pos - 1);
        }
    }
    WeylWord p(to_front);
    return p + WeylWord{0} + p.reversed();
}

} // namespace ellweyl
