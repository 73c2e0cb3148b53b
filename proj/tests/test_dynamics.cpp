#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qfactor/dynamics.hpp"
#include "qfactor/errors.hpp"

using namespace qfactor;
using namespace qfactor::dynamics;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

DensityMatrix ghz_rho() { return density_from_pure(ghz_state(kInvSqrt2, kInvSqrt2)); }
DensityMatrix w_rho() { return density_from_pure(w_state(kInvSqrt3, kInvSqrt3, kInvSqrt3)); }
DensityMatrix psi1_rho() { return density_from_pure(psi1_state()); }

// Random mixed state: normalized mixture of a few random pure states.
DensityMatrix random_mixed(std::uint64_t seed) {
    DensityMatrix rho(3);
    const double weights[] = {0.5, 0.3, 0.2};
    for (int m = 0; m < 3; ++m) rho += weights[m] * density_from_pure(random_pure_state(3, seed * 7 + m));
    return rho;
}

ChainParams unequal_params() { return ChainParams{{400.0, 200.0, 100.0}, 10.0, 0.4, {0.03, 0.05, 0.08}}; }

}  // namespace

TEST_CASE("Hamiltonian eigenvalues") {
    const auto p = ChainParams::paper_defaults();
    CHECK(hamiltonian_eigenvalue(SpinConfig::from_index(1, 3), p) == doctest::Approx(-360.2).epsilon(1e-14));
    CHECK(hamiltonian_eigenvalue(SpinConfig::from_index(8, 3), p) == doctest::Approx(339.8).epsilon(1e-14));

    double sum = 0.0;
    for (std::size_t i = 1; i <= 8; ++i) sum += hamiltonian_eigenvalue(SpinConfig::from_index(i, 3), p);
    CHECK(std::abs(sum) <= 1e-12);

    // Against the diagonal of the dense operator, including longer chains.
    for (int n = 1; n <= 5; ++n) {
        ChainParams q{std::vector<double>(static_cast<std::size_t>(n)), 3.0, 0.7,
                      std::vector<double>(static_cast<std::size_t>(n), 0.1)};
        for (int k = 0; k < n; ++k) q.omega[static_cast<std::size_t>(k)] = 50.0 * (k + 1);
        const auto h = oracle::hamiltonian(q);
        for (std::size_t i = 1; i <= dimension(n); ++i) {
            const auto d = static_cast<Eigen::Index>(i - 1);
            CHECK(std::abs(hamiltonian_eigenvalue(SpinConfig::from_index(i, n), q) - h(d, d).real()) <= 1e-12);
        }
    }
}

TEST_CASE("Omega_k eigenvalues") {
    const auto p = ChainParams::paper_defaults();
    // xi_3 xi_2 xi_1 = 000: both neighbours of spin 2 up.
    CHECK(omega_k_eigenvalue(2, SpinConfig::from_index(ket_to_index("000"), 3), p) == doctest::Approx(210.0));
    // xi_2 = 1, xi_3 = 0 as seen from spin 1.
    CHECK(omega_k_eigenvalue(1, SpinConfig::from_index(ket_to_index("010"), 3), p) == doctest::Approx(395.2));

    const ChainParams free{{400.0, 200.0, 100.0}, 0.0, 0.0, {0.05, 0.05, 0.05}};
    for (std::size_t i = 1; i <= 8; ++i)
        for (int k = 1; k <= 3; ++k)
            CHECK(omega_k_eigenvalue(k, SpinConfig::from_index(i, 3), free) == free.omega[static_cast<std::size_t>(k - 1)]);

    for (int k = 1; k <= 3; ++k) {
        const auto w = oracle::omega_operator(k, p);
        for (std::size_t i = 1; i <= 8; ++i) {
            const auto d = static_cast<Eigen::Index>(i - 1);
            CHECK(std::abs(omega_k_eigenvalue(k, SpinConfig::from_index(i, 3), p) - w(d, d).real()) <= 1e-12);
        }
    }
}

TEST_CASE("phi angles") {
    const auto phi = phi_angles(ChainParams::paper_defaults());
    CHECK(std::abs(phi.phi14 - 1.5659886715282056) <= 1e-12);
    CHECK(std::abs(phi.phi23 - 1.5655880405558247) <= 1e-12);
    CHECK(std::abs(phi.phi16 - 1.5682963320032104) <= 1e-12);
    CHECK(phi.phi17 == phi.phi14);
    CHECK(phi.phi35 == phi.phi23);

    const auto zero = phi_angles(ChainParams{{400.0, 200.0, 100.0}, 0.0, 0.0, {0.05, 0.05, 0.05}});
    CHECK(zero.phi14 == 0.0);
    CHECK(zero.phi16 == 0.0);
    CHECK(zero.phi23 == 0.0);

    const auto undamped = phi_angles(ChainParams{{400.0, 200.0, 100.0}, 10.0, 0.4, {0.0, 0.0, 0.0}});
    CHECK(undamped.phi14 == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("lindblad_rhs") {
    SUBCASE("decay of |111>") {
        const auto p = unequal_params();
        DensityMatrix rho(3);
        rho.at(8, 8) = 1.0;
        const auto d = lindblad_rhs(3.7, rho, p);
        CHECK(std::abs(d.at(8, 8) - Complex(-(0.03 + 0.05 + 0.08))) <= 1e-15);
        // gamma_1 flips the leftmost slot: |111> -> |011> = rho44.
        CHECK(std::abs(d.at(4, 4) - Complex(0.03)) <= 1e-15);
        CHECK(std::abs(d.at(6, 6) - Complex(0.05)) <= 1e-15);
        CHECK(std::abs(d.at(7, 7) - Complex(0.08)) <= 1e-15);
        for (std::size_t i = 1; i <= 8; ++i)
            for (std::size_t j = 1; j <= 8; ++j) {
                const bool expected_nonzero = (i == j) && (i == 4 || i == 6 || i == 7 || i == 8);
                if (!expected_nonzero) CHECK(d.at(i, j) == Complex{});
            }
    }
    SUBCASE("traceless and Hermiticity preserving") {
        const auto p = ChainParams::paper_defaults();
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto rho = random_mixed(seed);
            const auto d = lindblad_rhs(0.1 * static_cast<double>(seed), rho, p);
            CHECK(std::abs(d.trace()) <= 1e-12);
            for (std::size_t r = 0; r < 8; ++r)
                for (std::size_t c = 0; c < 8; ++c) CHECK(std::abs(d(r, c) - std::conj(d(c, r))) <= 1e-14);
        }
    }
    SUBCASE("no damping, no motion") {
        const ChainParams p{{400.0, 200.0, 100.0}, 10.0, 0.4, {0.0, 0.0, 0.0}};
        const auto d = lindblad_rhs(1.0, random_mixed(3), p);
        for (const auto& e : d.data()) CHECK(e == Complex{});
    }
    SUBCASE("matches the dense-operator form") {
        for (const auto& p : {ChainParams::paper_defaults(), unequal_params()})
            for (std::uint64_t seed = 0; seed < 40; ++seed) {
                const double t = 0.37 * static_cast<double>(seed);
                const auto rho = random_mixed(seed);
                const auto fast = lindblad_rhs(t, rho, p);
                const auto dense = oracle::lindblad_rhs(t, oracle::to_eigen(rho), p);
                for (std::size_t r = 0; r < 8; ++r)
                    for (std::size_t c = 0; c < 8; ++c)
                        REQUIRE(std::abs(fast(r, c) - dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))) <=
                                1e-13);
            }
    }
}

TEST_CASE("integrate") {
    const auto p = ChainParams::paper_defaults();

    SUBCASE("ground state is stationary") {
        const auto ground = density_from_pure(basis_state(3, 1));
        const auto traj = integrate(ground, p, 5.0, 0.005, 100);
        for (const auto& rho : traj.rhos)
            for (std::size_t e = 0; e < 64; ++e) CHECK(rho.data()[e] == ground.data()[e]);
    }
    SUBCASE("sampling grid") {
        const auto traj = integrate(ghz_rho(), p, 1.0, 0.005, 40);
        REQUIRE(traj.times.size() == 6);
        CHECK(traj.times.front() == 0.0);
        CHECK(traj.times.back() == doctest::Approx(1.0).epsilon(1e-14));
        for (std::size_t s = 1; s < traj.times.size(); ++s) CHECK(traj.times[s] > traj.times[s - 1]);

        // t_end off the step grid: the final sample still lands on t_end.
        const auto odd = integrate(ghz_rho(), p, 0.0123, 0.005, 1);
        CHECK(odd.times.back() == doctest::Approx(0.0123).epsilon(1e-14));
        CHECK(integrate(ghz_rho(), p, 0.0, 0.005, 1).times.size() == 1);
    }
    SUBCASE("bad options") {
        CHECK_THROWS_AS(integrate(ghz_rho(), p, 1.0, 0.02, 1), DomainError);
        CHECK_THROWS_AS(integrate(ghz_rho(), p, 1.0, 0.0, 1), DomainError);
        CHECK_THROWS_AS(integrate(ghz_rho(), p, -1.0, 0.005, 1), DomainError);
        CHECK_THROWS_AS(integrate(ghz_rho(), p, 1.0, 0.005, 0), DomainError);
        CHECK_THROWS_AS(integrate(density_from_pure(random_pure_state(2, 1)), p, 1.0, 0.005, 1), ArityMismatch);
    }
    SUBCASE("divergence is reported with its time") {
        DensityMatrix not_psd(3);
        not_psd.at(1, 1) = 1.1;
        not_psd.at(8, 8) = -0.1;
        CHECK_THROWS_AS(integrate(not_psd, p, 1.0, 0.005, 1), IntegrationDiverged);
        try {
            integrate(not_psd, p, 1.0, 0.005, 1);
        } catch (const IntegrationDiverged& e) {
            CHECK(e.time() == 0.0);
        }
    }
}

TEST_CASE("analytic table at named points") {
    const auto p = ChainParams::paper_defaults();
    DensityMatrix rho0(3);
    rho0.at(1, 1) = 0.5;
    rho0.at(8, 8) = 0.5;
    rho0.at(1, 8) = 0.5;
    rho0.at(8, 1) = 0.5;

    CHECK(std::abs(analytic_element(8, 8, 10.0, rho0, p)->real() - 0.11156508007421491) <= 1e-15);
    CHECK(std::abs(analytic_element(1, 8, 20.0, rho0, p)->real() - 0.11156508007421491) <= 1e-15);
    CHECK(std::abs(*analytic_element(1, 1, 1e6, rho0, p) - 1.0) <= 1e-15);
    CHECK_FALSE(analytic_element(1, 2, 1.0, rho0, p).has_value());
    CHECK(listed_elements().size() == 27);

    const auto at_zero = analytic_rho(0.0, psi1_rho(), p);
    for (std::size_t e = 0; e < 64; ++e) CHECK(at_zero.rho.data()[e] == psi1_rho().data()[e]);
    for (const auto& [i, j] : listed_elements())
        CHECK(std::abs(*analytic_element(i, j, 0.0, psi1_rho(), p) - psi1_rho().at(i, j)) <= 1e-15);

    // Populations use only populations.
    auto stripped = psi1_rho();
    for (std::size_t r = 1; r <= 8; ++r)
        for (std::size_t c = 1; c <= 8; ++c)
            if (r != c) stripped.at(r, c) = 0.0;
    for (int i = 1; i <= 8; ++i)
        CHECK(*analytic_element(i, i, 7.5, stripped, p) == *analytic_element(i, i, 7.5, psi1_rho(), p));
}

TEST_CASE("analytic_rho fills unlisted elements numerically") {
    const auto p = ChainParams::paper_defaults();
    const auto out = analytic_rho(2.0, psi1_rho(), p);
    CHECK(out.from_table[0 * 8 + 0]);
    CHECK_FALSE(out.from_table[0 * 8 + 1]);  // rho12
    CHECK_FALSE(out.from_table[1 * 8 + 0]);
    CHECK(out.from_table[0 * 8 + 6]);  // rho17
    const auto numeric = integrate(psi1_rho(), p, 2.0, kDefaultStep, 1 << 30).rhos.back();
    CHECK(out.rho.at(1, 2) == numeric.at(1, 2));
    CHECK(std::abs(out.rho.at(1, 2)) > 1e-3);
    const auto check = inspect_density(out.rho);
    CHECK(check.trace_error <= 1e-9);
    CHECK(check.hermiticity_error <= 1e-9);
}

TEST_CASE("analytic table agrees with RK4 under unequal rates") {
    // Unequal gammas pin down which slot each rate damps.
    const auto p = unequal_params();
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        const auto rho0 = random_mixed(seed);
        const auto traj = integrate(rho0, p, 20.0, 0.005, 100);
        for (std::size_t s = 0; s < traj.times.size(); ++s)
            for (const auto& [i, j] : listed_elements()) {
                const auto exact = *analytic_element(i, j, traj.times[s], rho0, p);
                REQUIRE(std::abs(exact - traj.rhos[s].at(i, j)) <= 1e-8);
            }
    }
}

TEST_CASE("populations evolve autonomously") {
    const auto p = ChainParams::paper_defaults();
    const auto rho0 = psi1_rho();
    auto diag_only = rho0;
    for (std::size_t r = 0; r < 8; ++r)
        for (std::size_t c = 0; c < 8; ++c)
            if (r != c) diag_only(r, c) = 0.0;
    const auto a = integrate(rho0, p, 50.0, 0.005, 500);
    const auto b = integrate(diag_only, p, 50.0, 0.005, 500);
    for (std::size_t s = 0; s < a.times.size(); ++s)
        for (std::size_t d = 0; d < 8; ++d) CHECK(std::abs(a.rhos[s](d, d) - b.rhos[s](d, d)) <= 1e-9);
}

TEST_CASE("observables") {
    const auto p = ChainParams::paper_defaults();
    const auto set = paper_conditions(3);
    const auto traj = integrate(w_rho(), p, 40.0, 0.005, 200);
    const auto obs = observables(traj, set);
    REQUIRE(obs.times.size() == traj.times.size());
    CHECK(std::abs(obs.purity.front() - 1.0) <= 1e-14);
    CHECK(std::abs(obs.c3_rho.front() - 2.0) <= 1e-12);
    for (std::size_t s = 1; s < obs.c3_rho.size(); ++s) CHECK(obs.c3_rho[s] <= obs.c3_rho[s - 1]);
    double pop_sum = 0.0;
    for (double x : obs.populations.back()) pop_sum += x;
    CHECK(std::abs(pop_sum - 1.0) <= 1e-9);
}
