#pragma once

// Ising spin chain with local zero-temperature amplitude damping, evolved in
// the interaction picture. All energies are divided by hbar (angular
// frequency units); time is dimensionless in the same units.
//
// Labelling: omega_k and the Ising couplings act on ket slot xi_k (xi_1 is
// the rightmost). Dissipation rates follow the closed-form solution table,
// where gamma_1 damps the leftmost slot: gamma_m acts on xi_{N+1-m}.

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qfactor/factorization.hpp"
#include "qfactor/statevec.hpp"

namespace qfactor::dynamics {

struct ChainParams {
    std::vector<double> omega;  // omega_1 .. omega_N
    double j_coupling = 0.0;    // J, first neighbours
    double j2_coupling = 0.0;   // J', second neighbours
    std::vector<double> gamma;  // gamma_1 .. gamma_N

    int n_spins() const { return static_cast<int>(omega.size()); }

    // Throws DomainError unless sizes match, omega_k > 0 and gamma_k >= 0.
    void validate() const;

    // omega = (400, 200, 100), J = 10, J' = 0.4, gamma = 0.05 each.
    static ChainParams paper_defaults();
};

// Rate of the jump operator acting on xi_k.
double damping_rate(const ChainParams& p, int k);

struct SpinConfig {
    int n_spins = 0;
    std::uint32_t bits = 0;  // bit k-1 holds xi_k

    int xi(int k) const { return static_cast<int>((bits >> (k - 1)) & 1U); }
    // (-1)^xi_k
    int sign(int k) const { return xi(k) ? -1 : 1; }

    std::size_t index() const { return static_cast<std::size_t>(bits) + 1; }
    static SpinConfig from_index(std::size_t index, int n_spins);
};

// E_xi / hbar.
double hamiltonian_eigenvalue(const SpinConfig& config, const ChainParams& p);

// Eigenvalue of Omega_k = omega_k + (J/hbar)(S_{k+1}^z + S_{k-1}^z)
//                                  + (J'/hbar)(S_{k+2}^z + S_{k-2}^z),
// neighbours outside the chain omitted.
double omega_k_eigenvalue(int k, const SpinConfig& config, const ChainParams& p);

struct PhiAngles {
    double phi14 = 0.0;
    double phi16 = 0.0;
    double phi17 = 0.0;
    double phi23 = 0.0;
    double phi35 = 0.0;
};

// arctan((J+J')/gamma_1), arctan(2J/gamma_2), arctan((J+J')/gamma_3),
// arctan((J-J')/gamma_1), arctan((J-J')/gamma_3). A zero rate gives +-pi/2.
PhiAngles phi_angles(const ChainParams& p);

// d rho~/dt = sum_k gamma_k (S~_k rho~ S~_k^+ - 1/2 {S_k^+ S_k, rho~}) where
// S_k = |0><1| on the damped slot and S~_k = S_k exp(i Omega_k t).
DensityMatrix lindblad_rhs(double t, const DensityMatrix& rho, const ChainParams& p);

inline constexpr double kDefaultStep = 0.005;
inline constexpr double kMaxStep = 0.01;

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityMatrix> rhos;
    std::vector<double> min_eigenvalues;
    double max_trace_drift = 0.0;
};

// Classic RK4 with fixed step, re-symmetrized every step. Snapshots at t = 0,
// every `sample_every` steps and at t_end. The step is shrunk slightly when
// t_end is not a multiple of dt. Throws DomainError on bad options and
// IntegrationDiverged on trace drift > 1e-6 or min eigenvalue < -1e-5.
Trajectory integrate(const DensityMatrix& rho0, const ChainParams& p, double t_end, double dt = kDefaultStep,
                     int sample_every = 1);

// Upper-triangle (i, j) pairs with a closed form, 27 in total.
const std::vector<std::pair<int, int>>& listed_elements();

bool is_listed(int i, int j);

// Closed form of rho~_ij(t) for 3 spins, or nullopt for elements without
// one. Lower-triangle elements are conjugates of listed ones.
std::optional<Complex> analytic_element(int i, int j, double t, const DensityMatrix& rho0, const ChainParams& p);

struct AnalyticRho {
    DensityMatrix rho;
    std::vector<bool> from_table;  // row-major; false = filled numerically (or zero)
};

// Listed elements only; the rest are zero and flagged as not from the table.
AnalyticRho analytic_table(double t, const DensityMatrix& rho0, const ChainParams& p);

// Listed elements from the closed form, the others from integrate(). Returns
// rho0 unchanged at t = 0.
AnalyticRho analytic_rho(double t, const DensityMatrix& rho0, const ChainParams& p, double dt = kDefaultStep);

struct ObservableSeries {
    std::vector<double> times;
    std::vector<double> c3_rho;
    std::vector<double> purity;
    std::vector<std::vector<double>> populations;  // per time, rho_ii for i = 1..dim
};

ObservableSeries observables(const Trajectory& traj, const ConditionSet& set);

}  // namespace qfactor::dynamics
