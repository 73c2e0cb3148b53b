#pragma once

// Minor conditions C_i C_j - C_k C_l = 0 that hold on every fully factorized
// state, the characterization function C^(n) built from them, and the
// factorizability decision.

#include <array>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qfactor/statevec.hpp"

namespace qfactor {

// Encodes C_i C_j - C_k C_l with 1-based indices.
struct MinorCondition {
    int i = 0;
    int j = 0;
    int k = 0;
    int l = 0;

    friend bool operator==(const MinorCondition&, const MinorCondition&) = default;
    friend auto operator<=>(const MinorCondition&, const MinorCondition&) = default;
};

// i < j, k < l and i is the smallest of the four. Uses commutativity inside
// each product and the overall sign flip.
MinorCondition canonical(MinorCondition c);

// True iff for every qubit position the bit values of {i-1, j-1} and
// {k-1, l-1} agree as multisets; exactly the conditions that vanish on every
// product state.
bool is_valid_condition(const MinorCondition& c, int n_qubits);

enum class Provenance { PaperList, Generated };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

class ConditionSet {
public:
    // Canonicalizes every condition. Throws std::invalid_argument on an
    // invalid or duplicate condition.
    ConditionSet(int n_qubits, std::vector<MinorCondition> conditions, Provenance provenance);

    int n_qubits() const { return n_; }
    Provenance provenance() const { return provenance_; }
    std::span<const MinorCondition> conditions() const { return conditions_; }
    std::size_t size() const { return conditions_.size(); }

    bool contains(const MinorCondition& c) const;

private:
    int n_;
    std::vector<MinorCondition> conditions_;
    Provenance provenance_;
};

// Curated lists for n = 2, 3, 4, in printed order. The n = 4 list carries two
// corrections of printed misprints, both of which fail is_valid_condition:
//   C9 C14 - C10 C11  ->  C9 C14 - C10 C13
//   C6 C15 - C16 C8   ->  C6 C15 - C8 C13
// Throws UnsupportedArity for other n.
ConditionSet paper_conditions(int n_qubits);

// Every 2x2 minor of every single-qubit reshaping (2 x 2^(n-1) arrays), bit 1
// first, deduplicated. Its zero set is the set of product states.
ConditionSet generate_minor_conditions(int n_qubits);

// Selects paper_conditions or generate_minor_conditions.
ConditionSet condition_set(int n_qubits, Provenance provenance);

// 2 |C_i C_j - C_k C_l|, evaluated on raw (possibly unnormalized) coefficients.
double residual(const MinorCondition& c, std::span<const Complex> coeffs);
double residual(const MinorCondition& c, const PureState& state);

double c_measure_coeffs(const PureState& state, const ConditionSet& set);

// Index tuple of 2 sqrt(rho_ii rho_jj + rho_kk rho_ll - 2 Re(rho_ik rho_jl)).
struct DensityTerm {
    int ii = 0;
    int jj = 0;
    int kk = 0;
    int ll = 0;
    std::pair<int, int> ik;
    std::pair<int, int> jl;

    // Radicand without clamping.
    double radicand(const DensityMatrix& rho) const;
};

DensityTerm density_form(const MinorCondition& c);

inline constexpr double kRadicandTolerance = 1e-9;

// Sum of density terms. Radicands in [-1e-9, 0) are clamped to zero; lower
// values throw PositivityViolation.
double c_measure_density(const DensityMatrix& rho, const ConditionSet& set);

inline constexpr double kFactorizableTolerance = 1e-9;

bool is_factorizable(const PureState& state, double tol = kFactorizableTolerance);

// Independent route: every single-qubit reshaping has numerical rank one,
// judged by sigma_2 <= tol * sigma_1 from an SVD.
bool reshaping_rank_one(const PureState& state, double tol = kFactorizableTolerance);

// Recovers factors[k-1] = qubit k. The global phase is folded into the
// leftmost factor so tensor_product(result) reproduces the coefficients.
// Throws NotFactorizable.
std::vector<QubitFactor> extract_factors(const PureState& state, double tol = kFactorizableTolerance);

}  // namespace qfactor
