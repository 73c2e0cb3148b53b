#pragma once

// State representations for few-qubit registers.
//
// Basis convention: a register of n qubits is written |xi_n ... xi_1>, with
// xi_n the leftmost (most significant) slot. Coefficient C_i, i = 1..2^n,
// belongs to the ket whose bit string has integer value i - 1. For n = 3
// this puts |001> at C_2 and |100> at C_5.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qfactor {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 8;
inline constexpr double kNormTolerance = 1e-12;

// a|0> + b|1>
struct QubitFactor {
    Complex a{1.0, 0.0};
    Complex b{0.0, 0.0};

    double norm_squared() const { return std::norm(a) + std::norm(b); }
    bool is_normalized(double tol = kNormTolerance) const;
};

// Throws NormalizationError unless |a|^2 + |b|^2 = 1.
QubitFactor make_qubit(Complex a, Complex b);

class PureState {
public:
    // Takes ownership of the coefficients. Throws UnsupportedArity for a bad
    // qubit count, std::invalid_argument for a size mismatch, and
    // NormalizationError unless the vector is normalized.
    PureState(int n_qubits, std::vector<Complex> coeffs);

    int n_qubits() const { return n_; }
    std::size_t dim() const { return coeffs_.size(); }

    // 1-based, as in C_1 ... C_{2^n}.
    const Complex& coeff(std::size_t index) const;

    std::span<const Complex> coeffs() const { return coeffs_; }

    double norm_squared() const;

private:
    int n_;
    std::vector<Complex> coeffs_;
};

// Dense 2^n x 2^n matrix, row-major. Not validated on construction; call
// validate_density() where a physical state is required.
class DensityMatrix {
public:
    explicit DensityMatrix(int n_qubits);
    DensityMatrix(int n_qubits, std::vector<Complex> row_major);

    int n_qubits() const { return n_; }
    std::size_t dim() const { return dim_; }

    // 0-based.
    Complex& operator()(std::size_t row, std::size_t col) { return elems_[row * dim_ + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const { return elems_[row * dim_ + col]; }

    // 1-based, rho_{nm} = <n|rho|m>.
    const Complex& at(std::size_t n, std::size_t m) const;
    Complex& at(std::size_t n, std::size_t m);

    std::span<const Complex> data() const { return elems_; }
    std::span<Complex> data() { return elems_; }

    Complex trace() const;

    DensityMatrix& operator+=(const DensityMatrix& other);
    DensityMatrix& operator*=(double s);

private:
    int n_;
    std::size_t dim_;
    std::vector<Complex> elems_;
};

DensityMatrix operator+(DensityMatrix lhs, const DensityMatrix& rhs);
DensityMatrix operator*(double s, DensityMatrix m);

std::size_t dimension(int n_qubits);
void check_arity(int n_qubits);

// Ket strings such as "001" <-> 1-based coefficient index.
std::size_t ket_to_index(std::string_view ket);
std::string index_to_ket(std::size_t index, int n_qubits);

// Value (0/1) of xi_k in the ket that carries coefficient `index` (both 1-based).
inline int bit_of(std::size_t index, int k) { return static_cast<int>(((index - 1) >> (k - 1)) & 1U); }

// Returns coeffs / ||coeffs||. Throws NormalizationError on a zero vector.
PureState normalize(int n_qubits, std::span<const Complex> coeffs);

// factors[k-1] is qubit k, so factors.back() fills the leftmost ket slot.
PureState tensor_product(std::span<const QubitFactor> factors);

PureState w_state(Complex c2, Complex c3, Complex c5);
PureState ghz_state(Complex c1, Complex c8);
// (|000> + |111> + |001> + |110>) / 2
PureState psi1_state();
PureState basis_state(int n_qubits, std::size_t index);

// Independent standard complex Gaussians, then normalized.
PureState random_pure_state(int n_qubits, std::uint64_t seed);

struct ProductSample {
    PureState state;
    std::vector<QubitFactor> factors;
};

ProductSample random_product_state(int n_qubits, std::uint64_t seed);

DensityMatrix density_from_pure(const PureState& state);

// trace(rho^2)
double purity(const DensityMatrix& rho);

struct DensityCheck {
    double hermiticity_error = 0.0;  // max |rho_nm - conj(rho_mn)|
    double trace_error = 0.0;        // |trace - 1|
    double min_eigenvalue = 0.0;
};

DensityCheck inspect_density(const DensityMatrix& rho);

// Throws std::invalid_argument if rho is not Hermitian (1e-12 by default),
// unit-trace (1e-9) and PSD (min eigenvalue >= -1e-9).
void validate_density(const DensityMatrix& rho, double herm_tol = 1e-12, double trace_tol = 1e-9,
                      double eig_tol = 1e-9);

double min_eigenvalue(const DensityMatrix& rho);

// Equality up to a global phase, aligned on the largest-magnitude coefficient
// of `a`.
bool equal_up_to_phase(const PureState& a, const PureState& b, double tol);
double max_phase_aligned_error(std::span<const Complex> a, std::span<const Complex> b);

}  // namespace qfactor
