#include "qfactor/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "qfactor/errors.hpp"

namespace qfactor {

namespace {

// n = 3, as printed.
const std::vector<MinorCondition> kPaperThree = {
    {1, 4, 2, 3}, {1, 6, 2, 5}, {1, 8, 2, 7}, {3, 6, 4, 5},
    {3, 8, 4, 7}, {5, 8, 6, 7}, {1, 7, 3, 5}, {2, 8, 4, 6},
};

// n = 4, printed row by row, four per row.
const std::vector<MinorCondition> kPaperFour = {
    {1, 4, 2, 3},    {4, 13, 7, 10},  {1, 6, 2, 5},    {4, 14, 6, 12},
    {1, 8, 3, 6},    {4, 15, 3, 16},  {1, 10, 2, 9},   {4, 16, 8, 12},
    {1, 11, 3, 9},   {5, 8, 6, 7},    {1, 12, 2, 11},  {5, 14, 6, 13},
    {1, 14, 9, 6},   {5, 15, 7, 13},  {1, 15, 5, 11},  {5, 16, 7, 14},
    {2, 8, 4, 6},    {6, 11, 5, 12},  {2, 12, 4, 10},  {6, 15, 8, 13},  // printed: C6C15 - C16C8
    {2, 13, 5, 10},  {6, 16, 8, 14},  {2, 14, 6, 10},  {7, 16, 8, 15},
    {2, 16, 10, 8},  {7, 12, 8, 11},  {3, 8, 4, 7},    {9, 12, 10, 11},
    {3, 15, 7, 11},  {9, 14, 10, 13},  // printed: C9C14 - C10C11
    {3, 13, 11, 5},  {9, 15, 11, 13},
    {10, 16, 12, 14}, {11, 16, 12, 15}, {10, 15, 11, 14}, {13, 16, 14, 15},
};

void check_indices(const MinorCondition& c, std::size_t dim) {
    for (int idx : {c.i, c.j, c.k, c.l})
        if (idx < 1 || static_cast<std::size_t>(idx) > dim)
            throw std::out_of_range("condition index " + std::to_string(idx) + " out of range");
}

}  // namespace

MinorCondition canonical(MinorCondition c) {
    if (c.i > c.j) std::swap(c.i, c.j);
    if (c.k > c.l) std::swap(c.k, c.l);
    if (c.k < c.i) {
        std::swap(c.i, c.k);
        std::swap(c.j, c.l);
    }
    return c;
}

bool is_valid_condition(const MinorCondition& c, int n_qubits) {
    const std::size_t dim = dimension(n_qubits);
    for (int idx : {c.i, c.j, c.k, c.l})
        if (idx < 1 || static_cast<std::size_t>(idx) > dim) return false;
    const auto ui = static_cast<std::size_t>(c.i);
    const auto uj = static_cast<std::size_t>(c.j);
    const auto uk = static_cast<std::size_t>(c.k);
    const auto ul = static_cast<std::size_t>(c.l);
    // Both sides identical would make the condition trivially zero.
    if (std::minmax(ui, uj) == std::minmax(uk, ul)) return false;
    for (int b = 1; b <= n_qubits; ++b) {
        // Multisets of two bits agree iff their sums agree.
        if (bit_of(ui, b) + bit_of(uj, b) != bit_of(uk, b) + bit_of(ul, b)) return false;
    }
    return true;
}

std::string_view to_string(Provenance p) { return p == Provenance::PaperList ? "paper" : "generated"; }

Provenance provenance_from_string(std::string_view s) {
    if (s == "paper") return Provenance::PaperList;
    if (s == "generated") return Provenance::Generated;
    throw std::invalid_argument("unknown condition set '" + std::string(s) + "'");
}

ConditionSet::ConditionSet(int n_qubits, std::vector<MinorCondition> conditions, Provenance provenance)
    : n_(n_qubits), provenance_(provenance) {
    check_arity(n_qubits);
    std::set<MinorCondition> seen;
    conditions_.reserve(conditions.size());
    for (const auto& raw : conditions) {
        const auto c = canonical(raw);
        if (!is_valid_condition(c, n_qubits))
            throw std::invalid_argument("condition (" + std::to_string(c.i) + "," + std::to_string(c.j) + "," +
                                        std::to_string(c.k) + "," + std::to_string(c.l) +
                                        ") does not vanish on product states");
        if (!seen.insert(c).second) throw std::invalid_argument("duplicate condition");
        conditions_.push_back(c);
    }
}

bool ConditionSet::contains(const MinorCondition& c) const {
    const auto key = canonical(c);
    return std::find(conditions_.begin(), conditions_.end(), key) != conditions_.end();
}

ConditionSet paper_conditions(int n_qubits) {
    switch (n_qubits) {
        case 2:
            return ConditionSet(2, {{1, 4, 2, 3}}, Provenance::PaperList);
        case 3:
            return ConditionSet(3, kPaperThree, Provenance::PaperList);
        case 4:
            return ConditionSet(4, kPaperFour, Provenance::PaperList);
        default:
            throw UnsupportedArity("no curated condition list for n=" + std::to_string(n_qubits));
    }
}

ConditionSet generate_minor_conditions(int n_qubits) {
    const std::size_t dim = dimension(n_qubits);
    std::vector<MinorCondition> out;
    std::set<MinorCondition> seen;
    for (int b = 1; b <= n_qubits; ++b) {
        const std::size_t mask = std::size_t{1} << (b - 1);
        // Columns of the reshaping: the remaining bits, ascending.
        std::vector<std::size_t> columns;
        columns.reserve(dim / 2);
        for (std::size_t v = 0; v < dim; ++v)
            if ((v & mask) == 0) columns.push_back(v);
        for (std::size_t p = 0; p < columns.size(); ++p)
            for (std::size_t q = p + 1; q < columns.size(); ++q) {
                const std::size_t x = columns[p];
                const std::size_t y = columns[q];
                // det [[C(x), C(y)], [C(x|b), C(y|b)]]
                const auto c = canonical({static_cast<int>(x + 1), static_cast<int>((y | mask) + 1),
                                          static_cast<int>(y + 1), static_cast<int>((x | mask) + 1)});
                if (seen.insert(c).second) out.push_back(c);
            }
    }
    return ConditionSet(n_qubits, std::move(out), Provenance::Generated);
}

ConditionSet condition_set(int n_qubits, Provenance provenance) {
    return provenance == Provenance::PaperList ? paper_conditions(n_qubits) : generate_minor_conditions(n_qubits);
}

double residual(const MinorCondition& c, std::span<const Complex> coeffs) {
    check_indices(c, coeffs.size());
    const auto at = [&](int idx) { return coeffs[static_cast<std::size_t>(idx - 1)]; };
    return 2.0 * std::abs(at(c.i) * at(c.j) - at(c.k) * at(c.l));
}

double residual(const MinorCondition& c, const PureState& state) { return residual(c, state.coeffs()); }

double c_measure_coeffs(const PureState& state, const ConditionSet& set) {
    if (set.n_qubits() != state.n_qubits())
        throw ArityMismatch("condition set is for n=" + std::to_string(set.n_qubits()) + ", state has n=" +
                            std::to_string(state.n_qubits()));
    double total = 0.0;
    for (const auto& c : set.conditions()) total += residual(c, state);
    return total;
}

DensityTerm density_form(const MinorCondition& c) {
    return DensityTerm{c.i, c.j, c.k, c.l, {c.i, c.k}, {c.j, c.l}};
}

double DensityTerm::radicand(const DensityMatrix& rho) const {
    const auto el = [&](int r, int s) { return rho.at(static_cast<std::size_t>(r), static_cast<std::size_t>(s)); };
    return (el(ii, ii) * el(jj, jj)).real() + (el(kk, kk) * el(ll, ll)).real() -
           2.0 * (el(ik.first, ik.second) * el(jl.first, jl.second)).real();
}

double c_measure_density(const DensityMatrix& rho, const ConditionSet& set) {
    if (set.n_qubits() != rho.n_qubits())
        throw ArityMismatch("condition set is for n=" + std::to_string(set.n_qubits()) + ", density has n=" +
                            std::to_string(rho.n_qubits()));
    double total = 0.0;
    for (const auto& c : set.conditions()) {
        const double r = density_form(c).radicand(rho);
        if (r < -kRadicandTolerance)
            throw PositivityViolation("negative radicand " + std::to_string(r) + " for condition (" +
                                      std::to_string(c.i) + "," + std::to_string(c.j) + "," + std::to_string(c.k) +
                                      "," + std::to_string(c.l) + ")");
        total += 2.0 * std::sqrt(std::max(0.0, r));
    }
    return total;
}

bool is_factorizable(const PureState& state, double tol) {
    const auto set = generate_minor_conditions(state.n_qubits());
    return std::all_of(set.conditions().begin(), set.conditions().end(),
                       [&](const MinorCondition& c) { return residual(c, state) <= tol; });
}

namespace {

// 2 x 2^(n-1) array for qubit b: row = xi_b, columns = other bits ascending.
Eigen::MatrixXcd reshape_on_qubit(const PureState& state, int b) {
    const std::size_t dim = state.dim();
    const std::size_t mask = std::size_t{1} << (b - 1);
    Eigen::MatrixXcd m(2, static_cast<Eigen::Index>(dim / 2));
    Eigen::Index col = 0;
    const auto c = state.coeffs();
    for (std::size_t v = 0; v < dim; ++v) {
        if (v & mask) continue;
        m(0, col) = c[v];
        m(1, col) = c[v | mask];
        ++col;
    }
    return m;
}

}  // namespace

bool reshaping_rank_one(const PureState& state, double tol) {
    for (int b = 1; b <= state.n_qubits(); ++b) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(reshape_on_qubit(state, b));
        const auto& sv = svd.singularValues();
        if (sv.size() > 1 && sv(1) > tol * sv(0)) return false;
    }
    return true;
}

std::vector<QubitFactor> extract_factors(const PureState& state, double tol) {
    if (!is_factorizable(state, tol)) throw NotFactorizable("state has a nonvanishing minor");
    const int n = state.n_qubits();
    std::vector<QubitFactor> factors;
    factors.reserve(static_cast<std::size_t>(n));
    for (int b = 1; b <= n; ++b) {
        const auto m = reshape_on_qubit(state, b);
        // For a rank-one array every nonzero column is parallel to (a_b, b_b);
        // the largest one is the best conditioned.
        Eigen::Index best = 0;
        m.colwise().norm().maxCoeff(&best);
        const double norm = m.col(best).norm();
        factors.push_back(QubitFactor{m(0, best) / norm, m(1, best) / norm});
    }

    const auto rebuilt = tensor_product(factors);
    const auto target = state.coeffs();
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < target.size(); ++i)
        if (std::abs(target[i]) > std::abs(target[pivot])) pivot = i;
    const Complex ratio = target[pivot] / rebuilt.coeffs()[pivot];
    const Complex phase = ratio / std::abs(ratio);
    factors.back().a *= phase;
    factors.back().b *= phase;
    return factors;
}

}  // namespace qfactor
