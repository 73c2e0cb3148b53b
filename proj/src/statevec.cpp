#include "qfactor/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

#include "qfactor/errors.hpp"

namespace qfactor {

namespace {

double sum_norm(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto& c : v) s += std::norm(c);
    return s;
}

Complex standard_complex_gaussian(std::mt19937_64& rng) {
    // Real and imaginary parts each N(0, 1/2), so E|z|^2 = 1.
    std::normal_distribution<double> dist(0.0, std::sqrt(0.5));
    const double re = dist(rng);
    const double im = dist(rng);
    return {re, im};
}

}  // namespace

bool QubitFactor::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) <= tol; }

QubitFactor make_qubit(Complex a, Complex b) {
    QubitFactor q{a, b};
    if (!q.is_normalized()) throw NormalizationError("qubit factor is not normalized");
    return q;
}

std::size_t dimension(int n_qubits) {
    check_arity(n_qubits);
    return std::size_t{1} << n_qubits;
}

void check_arity(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
        throw UnsupportedArity("qubit count " + std::to_string(n_qubits) + " outside [1, 8]");
}

PureState::PureState(int n_qubits, std::vector<Complex> coeffs) : n_(n_qubits), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != dimension(n_))
        throw std::invalid_argument("expected " + std::to_string(dimension(n_)) + " coefficients, got " +
                                    std::to_string(coeffs_.size()));
    for (const auto& c : coeffs_)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            throw std::invalid_argument("non-finite coefficient");
    if (std::abs(norm_squared() - 1.0) > kNormTolerance)
        throw NormalizationError("coefficients are not normalized (sum |C_i|^2 = " +
                                 std::to_string(norm_squared()) + ")");
}

const Complex& PureState::coeff(std::size_t index) const {
    if (index < 1 || index > coeffs_.size()) throw std::out_of_range("coefficient index out of range");
    return coeffs_[index - 1];
}

double PureState::norm_squared() const { return sum_norm(coeffs_); }

DensityMatrix::DensityMatrix(int n_qubits)
    : n_(n_qubits), dim_(dimension(n_qubits)), elems_(dim_ * dim_, Complex{}) {}

DensityMatrix::DensityMatrix(int n_qubits, std::vector<Complex> row_major)
    : n_(n_qubits), dim_(dimension(n_qubits)), elems_(std::move(row_major)) {
    if (elems_.size() != dim_ * dim_) throw std::invalid_argument("density matrix has wrong element count");
}

const Complex& DensityMatrix::at(std::size_t n, std::size_t m) const {
    if (n < 1 || m < 1 || n > dim_ || m > dim_) throw std::out_of_range("density index out of range");
    return (*this)(n - 1, m - 1);
}

Complex& DensityMatrix::at(std::size_t n, std::size_t m) {
    if (n < 1 || m < 1 || n > dim_ || m > dim_) throw std::out_of_range("density index out of range");
    return (*this)(n - 1, m - 1);
}

Complex DensityMatrix::trace() const {
    Complex t{};
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

DensityMatrix& DensityMatrix::operator+=(const DensityMatrix& other) {
    if (other.dim_ != dim_) throw ArityMismatch("density dimensions differ");
    for (std::size_t i = 0; i < elems_.size(); ++i) elems_[i] += other.elems_[i];
    return *this;
}

DensityMatrix& DensityMatrix::operator*=(double s) {
    for (auto& e : elems_) e *= s;
    return *this;
}

DensityMatrix operator+(DensityMatrix lhs, const DensityMatrix& rhs) { return lhs += rhs; }
DensityMatrix operator*(double s, DensityMatrix m) { return m *= s; }

std::size_t ket_to_index(std::string_view ket) {
    if (ket.empty() || ket.size() > static_cast<std::size_t>(kMaxQubits))
        throw std::invalid_argument("ket length must be in [1, 8]");
    std::size_t value = 0;
    for (char ch : ket) {
        if (ch != '0' && ch != '1') throw std::invalid_argument("ket must be a bit string");
        value = (value << 1) | static_cast<std::size_t>(ch - '0');
    }
    return value + 1;
}

std::string index_to_ket(std::size_t index, int n_qubits) {
    const std::size_t dim = dimension(n_qubits);
    if (index < 1 || index > dim) throw std::out_of_range("index out of range for ket");
    std::string ket(static_cast<std::size_t>(n_qubits), '0');
    for (int k = 1; k <= n_qubits; ++k)
        if (bit_of(index, k)) ket[static_cast<std::size_t>(n_qubits - k)] = '1';
    return ket;
}

PureState normalize(int n_qubits, std::span<const Complex> coeffs) {
    const double norm = std::sqrt(sum_norm(coeffs));
    if (!(norm > 0.0) || !std::isfinite(norm)) throw NormalizationError("cannot normalize a zero-norm vector");
    std::vector<Complex> out(coeffs.begin(), coeffs.end());
    for (auto& c : out) c /= norm;
    return PureState(n_qubits, std::move(out));
}

PureState tensor_product(std::span<const QubitFactor> factors) {
    const int n = static_cast<int>(factors.size());
    const std::size_t dim = dimension(n);
    for (const auto& f : factors)
        if (!f.is_normalized()) throw NormalizationError("tensor_product: factor is not normalized");

    std::vector<Complex> coeffs(dim);
    for (std::size_t i = 1; i <= dim; ++i) {
        Complex c{1.0, 0.0};
        for (int k = 1; k <= n; ++k) {
            const auto& f = factors[static_cast<std::size_t>(k - 1)];
            c *= bit_of(i, k) ? f.b : f.a;
        }
        coeffs[i - 1] = c;
    }
    // A product of normalized factors is normalized up to rounding; renormalize
    // so the result meets the 1e-12 invariant for n = 8 too.
    return normalize(n, coeffs);
}

PureState w_state(Complex c2, Complex c3, Complex c5) {
    std::vector<Complex> c(8);
    c[1] = c2;
    c[2] = c3;
    c[4] = c5;
    return PureState(3, std::move(c));
}

PureState ghz_state(Complex c1, Complex c8) {
    std::vector<Complex> c(8);
    c[0] = c1;
    c[7] = c8;
    return PureState(3, std::move(c));
}

PureState psi1_state() {
    std::vector<Complex> c(8);
    c[ket_to_index("000") - 1] = 0.5;
    c[ket_to_index("111") - 1] = 0.5;
    c[ket_to_index("001") - 1] = 0.5;
    c[ket_to_index("110") - 1] = 0.5;
    return PureState(3, std::move(c));
}

PureState basis_state(int n_qubits, std::size_t index) {
    std::vector<Complex> c(dimension(n_qubits));
    if (index < 1 || index > c.size()) throw std::out_of_range("basis index out of range");
    c[index - 1] = 1.0;
    return PureState(n_qubits, std::move(c));
}

PureState random_pure_state(int n_qubits, std::uint64_t seed) {
    const std::size_t dim = dimension(n_qubits);
    std::mt19937_64 rng(seed);
    std::vector<Complex> c(dim);
    for (auto& z : c) z = standard_complex_gaussian(rng);
    return normalize(n_qubits, c);
}

ProductSample random_product_state(int n_qubits, std::uint64_t seed) {
    check_arity(n_qubits);
    std::mt19937_64 rng(seed);
    std::vector<QubitFactor> factors;
    factors.reserve(static_cast<std::size_t>(n_qubits));
    for (int k = 0; k < n_qubits; ++k) {
        const Complex a = standard_complex_gaussian(rng);
        const Complex b = standard_complex_gaussian(rng);
        const double norm = std::sqrt(std::norm(a) + std::norm(b));
        factors.push_back(QubitFactor{a / norm, b / norm});
    }
    auto state = tensor_product(factors);
    return ProductSample{std::move(state), std::move(factors)};
}

DensityMatrix density_from_pure(const PureState& state) {
    DensityMatrix rho(state.n_qubits());
    const auto c = state.coeffs();
    for (std::size_t r = 0; r < c.size(); ++r)
        for (std::size_t s = 0; s < c.size(); ++s) rho(r, s) = c[r] * std::conj(c[s]);
    return rho;
}

double purity(const DensityMatrix& rho) {
    // trace(rho^2) = sum_{nm} rho_nm rho_mn
    Complex t{};
    const std::size_t d = rho.dim();
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t s = 0; s < d; ++s) t += rho(r, s) * rho(s, r);
    return t.real();
}

double min_eigenvalue(const DensityMatrix& rho) {
    const auto d = static_cast<Eigen::Index>(rho.dim());
    Eigen::MatrixXcd m(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index s = 0; s < d; ++s) {
            // Hermitian part; the solver reads only the lower triangle anyway.
            const auto ur = static_cast<std::size_t>(r);
            const auto us = static_cast<std::size_t>(s);
            m(r, s) = 0.5 * (rho(ur, us) + std::conj(rho(us, ur)));
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

DensityCheck inspect_density(const DensityMatrix& rho) {
    DensityCheck check;
    const std::size_t d = rho.dim();
    for (std::size_t r = 0; r < d; ++r)
        for (std::size_t s = r; s < d; ++s)
            check.hermiticity_error = std::max(check.hermiticity_error, std::abs(rho(r, s) - std::conj(rho(s, r))));
    check.trace_error = std::abs(rho.trace() - 1.0);
    check.min_eigenvalue = min_eigenvalue(rho);
    return check;
}

void validate_density(const DensityMatrix& rho, double herm_tol, double trace_tol, double eig_tol) {
    const auto check = inspect_density(rho);
    if (check.hermiticity_error > herm_tol) throw std::invalid_argument("density matrix is not Hermitian");
    if (check.trace_error > trace_tol) throw std::invalid_argument("density matrix trace is not 1");
    if (check.min_eigenvalue < -eig_tol) throw std::invalid_argument("density matrix is not positive semidefinite");
}

double max_phase_aligned_error(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) throw ArityMismatch("vectors differ in length");
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < a.size(); ++i)
        if (std::abs(a[i]) > std::abs(a[pivot])) pivot = i;
    Complex phase{1.0, 0.0};
    if (std::abs(b[pivot]) > 0.0) {
        const Complex ratio = a[pivot] / b[pivot];
        phase = ratio / std::abs(ratio);
    }
    double err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - phase * b[i]));
    return err;
}

bool equal_up_to_phase(const PureState& a, const PureState& b, double tol) {
    if (a.n_qubits() != b.n_qubits()) return false;
    return max_phase_aligned_error(a.coeffs(), b.coeffs()) <= tol;
}

}  // namespace qfactor
