#include "qfactor/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qfactor/errors.hpp"

namespace qfactor::dynamics {

namespace {

constexpr double kTraceDriftLimit = 1e-6;
constexpr double kEigenvalueLimit = -1e-5;

// gamma e^{i phi} / sqrt(gamma^2 + nu^2) * (1 - e^{(i nu - gamma) t}), phi = atan2(nu, gamma).
// This is gamma (1 - e^{(i nu - gamma) t}) / (gamma - i nu), the integral of an inflow
// gamma e^{(i nu - gamma) s} over [0, t].
Complex inflow(double gamma, double nu, double phi, double t) {
    if (gamma == 0.0) return {};
    const Complex growth = std::exp(Complex(-gamma * t, nu * t));
    return gamma * std::polar(1.0, phi) / std::hypot(gamma, nu) * (1.0 - growth);
}

void check_three_spins(const ChainParams& p, const DensityMatrix& rho) {
    if (p.n_spins() != 3 || rho.n_qubits() != 3)
        throw ArityMismatch("closed-form solution is for three spins");
}

}  // namespace

void ChainParams::validate() const {
    if (omega.empty() || omega.size() > static_cast<std::size_t>(kMaxQubits))
        throw DomainError("chain needs between 1 and 8 spins");
    if (gamma.size() != omega.size()) throw DomainError("omega and gamma must have the same length");
    for (double w : omega)
        if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("Larmor frequencies must be positive");
    for (double g : gamma)
        if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("dissipation rates must be non-negative");
    if (!std::isfinite(j_coupling) || !std::isfinite(j2_coupling)) throw DomainError("couplings must be finite");
}

ChainParams ChainParams::paper_defaults() { return ChainParams{{400.0, 200.0, 100.0}, 10.0, 0.4, {0.05, 0.05, 0.05}}; }

double damping_rate(const ChainParams& p, int k) {
    const int n = p.n_spins();
    return p.gamma[static_cast<std::size_t>(n - k)];
}

SpinConfig SpinConfig::from_index(std::size_t index, int n_spins) {
    if (index < 1 || index > dimension(n_spins)) throw std::out_of_range("configuration index out of range");
    return SpinConfig{n_spins, static_cast<std::uint32_t>(index - 1)};
}

double hamiltonian_eigenvalue(const SpinConfig& config, const ChainParams& p) {
    const int n = p.n_spins();
    double e = 0.0;
    for (int k = 1; k <= n; ++k) e -= 0.5 * config.sign(k) * p.omega[static_cast<std::size_t>(k - 1)];
    for (int k = 1; k + 1 <= n; ++k) e -= 0.5 * p.j_coupling * config.sign(k) * config.sign(k + 1);
    for (int k = 1; k + 2 <= n; ++k) e -= 0.5 * p.j2_coupling * config.sign(k) * config.sign(k + 2);
    return e;
}

double omega_k_eigenvalue(int k, const SpinConfig& config, const ChainParams& p) {
    const int n = p.n_spins();
    if (k < 1 || k > n) throw std::out_of_range("spin index out of range");
    const auto in_chain = [n](int m) { return m >= 1 && m <= n; };
    double w = p.omega[static_cast<std::size_t>(k - 1)];
    for (int m : {k - 1, k + 1})
        if (in_chain(m)) w += 0.5 * p.j_coupling * config.sign(m);
    for (int m : {k - 2, k + 2})
        if (in_chain(m)) w += 0.5 * p.j2_coupling * config.sign(m);
    return w;
}

PhiAngles phi_angles(const ChainParams& p) {
    if (p.n_spins() != 3) throw ArityMismatch("phase angles are defined for three spins");
    const double j = p.j_coupling;
    const double jp = p.j2_coupling;
    const double g1 = p.gamma[0];
    const double g2 = p.gamma[1];
    const double g3 = p.gamma[2];
    return PhiAngles{std::atan2(j + jp, g1), std::atan2(2.0 * j, g2), std::atan2(j + jp, g3),
                     std::atan2(j - jp, g1), std::atan2(j - jp, g3)};
}

DensityMatrix lindblad_rhs(double t, const DensityMatrix& rho, const ChainParams& p) {
    const int n = p.n_spins();
    if (rho.n_qubits() != n) throw ArityMismatch("density matrix and chain differ in size");
    const std::size_t dim = rho.dim();

    // Total decay rate of each basis state, and Omega_k per (k, state).
    std::vector<double> decay(dim, 0.0);
    std::vector<double> omega_table(static_cast<std::size_t>(n) * dim);
    for (std::size_t v = 0; v < dim; ++v) {
        const SpinConfig config{n, static_cast<std::uint32_t>(v)};
        for (int k = 1; k <= n; ++k) {
            if (config.xi(k)) decay[v] += damping_rate(p, k);
            omega_table[static_cast<std::size_t>(k - 1) * dim + v] = omega_k_eigenvalue(k, config, p);
        }
    }

    DensityMatrix out(n);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) {
            Complex d = -0.5 * (decay[a] + decay[b]) * rho(a, b);
            for (int k = 1; k <= n; ++k) {
                const std::size_t mask = std::size_t{1} << (k - 1);
                if ((a & mask) || (b & mask)) continue;
                const double g = damping_rate(p, k);
                if (g == 0.0) continue;
                const double* om = &omega_table[static_cast<std::size_t>(k - 1) * dim];
                // omega_k cancels; only the neighbour terms survive.
                d += g * std::polar(1.0, (om[a] - om[b]) * t) * rho(a | mask, b | mask);
            }
            out(a, b) = d;
        }
    return out;
}

Trajectory integrate(const DensityMatrix& rho0, const ChainParams& p, double t_end, double dt, int sample_every) {
    p.validate();
    if (rho0.n_qubits() != p.n_spins()) throw ArityMismatch("density matrix and chain differ in size");
    if (!(dt > 0.0) || dt > kMaxStep) throw DomainError("step must be in (0, 0.01]");
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be non-negative");
    if (sample_every < 1) throw DomainError("sample_every must be >= 1");

    const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
    const double h = steps > 0 ? t_end / static_cast<double>(steps) : 0.0;

    Trajectory traj;
    auto record = [&](double t, const DensityMatrix& rho) {
        const double lam = min_eigenvalue(rho);
        if (lam < kEigenvalueLimit) throw IntegrationDiverged(t, "negative eigenvalue " + std::to_string(lam));
        traj.times.push_back(t);
        traj.rhos.push_back(rho);
        traj.min_eigenvalues.push_back(lam);
    };

    DensityMatrix rho = rho0;
    record(0.0, rho);
    const std::size_t dim = rho.dim();
    for (long long s = 0; s < steps; ++s) {
        const double t = static_cast<double>(s) * h;
        const auto k1 = lindblad_rhs(t, rho, p);
        const auto k2 = lindblad_rhs(t + 0.5 * h, rho + (0.5 * h) * k1, p);
        const auto k3 = lindblad_rhs(t + 0.5 * h, rho + (0.5 * h) * k2, p);
        const auto k4 = lindblad_rhs(t + h, rho + h * k3, p);
        for (std::size_t e = 0; e < dim * dim; ++e)
            rho.data()[e] += (h / 6.0) * (k1.data()[e] + 2.0 * k2.data()[e] + 2.0 * k3.data()[e] + k4.data()[e]);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = r; c < dim; ++c) {
                const Complex avg = 0.5 * (rho(r, c) + std::conj(rho(c, r)));
                rho(r, c) = avg;
                rho(c, r) = std::conj(avg);
            }

        const double t_next = static_cast<double>(s + 1) * h;
        const double drift = std::abs(rho.trace() - rho0.trace());
        traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
        if (drift > kTraceDriftLimit) throw IntegrationDiverged(t_next, "trace drift " + std::to_string(drift));
        if ((s + 1) % sample_every == 0 || s + 1 == steps) record(t_next, rho);
    }
    return traj;
}

const std::vector<std::pair<int, int>>& listed_elements() {
    static const std::vector<std::pair<int, int>> kListed = {
        {1, 1}, {1, 4}, {1, 6}, {1, 7}, {1, 8}, {2, 2}, {2, 3}, {2, 5}, {2, 7}, {2, 8}, {3, 3}, {3, 5}, {3, 6}, {3, 8},
        {4, 4}, {4, 5}, {4, 6}, {4, 7}, {4, 8}, {5, 5}, {5, 8}, {6, 6}, {6, 7}, {6, 8}, {7, 7}, {7, 8}, {8, 8},
    };
    return kListed;
}

bool is_listed(int i, int j) {
    if (i > j) std::swap(i, j);
    const auto& l = listed_elements();
    return std::find(l.begin(), l.end(), std::pair{i, j}) != l.end();
}

std::optional<Complex> analytic_element(int i, int j, double t, const DensityMatrix& rho0, const ChainParams& p) {
    check_three_spins(p, rho0);
    if (!is_listed(i, j)) return std::nullopt;
    if (i > j) {
        const auto upper = analytic_element(j, i, t, rho0, p);
        return std::conj(*upper);
    }

    const auto r = [&](int a, int b) { return rho0.at(static_cast<std::size_t>(a), static_cast<std::size_t>(b)); };
    const auto pop = [&](int a) { return r(a, a).real(); };
    const double g1 = p.gamma[0];
    const double g2 = p.gamma[1];
    const double g3 = p.gamma[2];
    const double j1 = p.j_coupling;
    const double j2 = p.j2_coupling;
    const auto decay = [t](double rate) { return std::exp(-rate * t); };
    const double all = g1 + g2 + g3;
    const auto phi = phi_angles(p);

    // Populations: inclusion-exclusion over which excited qubits have decayed.
    switch (i * 10 + j) {
        case 11: {
            double sum = 0.0;
            for (int a = 1; a <= 8; ++a) sum += pop(a);
            return sum - (pop(5) + pop(6) + pop(7) + pop(8)) * decay(g1) - (pop(3) + pop(4) + pop(7) + pop(8)) * decay(g2) -
                   (pop(2) + pop(4) + pop(6) + pop(8)) * decay(g3) + (pop(7) + pop(8)) * decay(g1 + g2) +
                   (pop(6) + pop(8)) * decay(g1 + g3) + (pop(4) + pop(8)) * decay(g2 + g3) - pop(8) * decay(all);
        }
        case 22:
            return (pop(2) + pop(4) + pop(6) + pop(8)) * decay(g3) - (pop(6) + pop(8)) * decay(g1 + g3) -
                   (pop(4) + pop(8)) * decay(g2 + g3) + pop(8) * decay(all);
        case 33:
            return (pop(3) + pop(4) + pop(7) + pop(8)) * decay(g2) - (pop(7) + pop(8)) * decay(g1 + g2) -
                   (pop(4) + pop(8)) * decay(g2 + g3) + pop(8) * decay(all);
        case 44:
            return (pop(4) + pop(8)) * decay(g2 + g3) - pop(8) * decay(all);
        case 55:
            return (pop(5) + pop(6) + pop(7) + pop(8)) * decay(g1) - (pop(7) + pop(8)) * decay(g1 + g2) -
                   (pop(6) + pop(8)) * decay(g1 + g3) + pop(8) * decay(all);
        case 66:
            return (pop(6) + pop(8)) * decay(g1 + g3) - pop(8) * decay(all);
        case 77:
            return (pop(7) + pop(8)) * decay(g1 + g2) - pop(8) * decay(all);
        case 88:
            return pop(8) * decay(all);

        // Coherences fed by a jump from a doubly excited pair. The prefactor
        // phase is e^{+i phi} (see inflow()); only rho35 has the opposite
        // rotation sense.
        case 14:
            return (r(1, 4) + inflow(g1, j1 + j2, phi.phi14, t) * r(5, 8)) * decay(0.5 * (g2 + g3));
        case 16:
            return (r(1, 6) + inflow(g2, 2.0 * j1, phi.phi16, t) * r(3, 8)) * decay(0.5 * (g1 + g3));
        case 17:
            return (r(1, 7) + inflow(g3, j1 + j2, phi.phi17, t) * r(2, 8)) * decay(0.5 * (g1 + g2));
        case 23:
            return (r(2, 3) + inflow(g1, j1 - j2, phi.phi23, t) * r(6, 7)) * decay(0.5 * (g2 + g3));
        case 35:
            return (r(3, 5) + inflow(g3, -(j1 - j2), -phi.phi35, t) * r(4, 6)) * decay(0.5 * (g1 + g2));
        case 25:
            return (r(2, 5) + r(4, 7) * (1.0 - decay(g2))) * decay(0.5 * (g1 + g3));

        // Pure decay at half the summed rates of both kets.
        case 18:
        case 27:
        case 36:
        case 45:
            return r(i, j) * decay(0.5 * all);
        case 28:
        case 46:
            return r(i, j) * decay(0.5 * (g1 + g2 + 2.0 * g3));
        case 38:
        case 47:
            return r(i, j) * decay(0.5 * (g1 + 2.0 * g2 + g3));
        case 48:
            return r(i, j) * decay(0.5 * (g1 + 2.0 * g2 + 2.0 * g3));
        case 58:
        case 67:
            return r(i, j) * decay(0.5 * (2.0 * g1 + g2 + g3));
        case 68:
            return r(i, j) * decay(0.5 * (2.0 * g1 + g2 + 2.0 * g3));
        case 78:
            return r(i, j) * decay(0.5 * (2.0 * g1 + 2.0 * g2 + g3));
        default:
            return std::nullopt;
    }
}

AnalyticRho analytic_table(double t, const DensityMatrix& rho0, const ChainParams& p) {
    check_three_spins(p, rho0);
    AnalyticRho out{DensityMatrix(3), std::vector<bool>(64, false)};
    for (const auto& [i, j] : listed_elements()) {
        const Complex v = *analytic_element(i, j, t, rho0, p);
        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        out.rho.at(ui, uj) = v;
        out.rho.at(uj, ui) = std::conj(v);
        out.from_table[(ui - 1) * 8 + (uj - 1)] = true;
        out.from_table[(uj - 1) * 8 + (ui - 1)] = true;
    }
    return out;
}

AnalyticRho analytic_rho(double t, const DensityMatrix& rho0, const ChainParams& p, double dt) {
    if (!(t >= 0.0)) throw DomainError("t must be non-negative");
    if (t == 0.0) return AnalyticRho{rho0, std::vector<bool>(rho0.dim() * rho0.dim(), true)};
    auto out = analytic_table(t, rho0, p);
    const auto traj = integrate(rho0, p, t, std::min(dt, kMaxStep), 1 << 30);
    const auto& numeric = traj.rhos.back();
    for (std::size_t e = 0; e < 64; ++e)
        if (!out.from_table[e]) out.rho.data()[e] = numeric.data()[e];
    return out;
}

ObservableSeries observables(const Trajectory& traj, const ConditionSet& set) {
    ObservableSeries s;
    s.times = traj.times;
    s.c3_rho.reserve(traj.rhos.size());
    s.purity.reserve(traj.rhos.size());
    s.populations.reserve(traj.rhos.size());
    for (const auto& rho : traj.rhos) {
        s.c3_rho.push_back(c_measure_density(rho, set));
        s.purity.push_back(purity(rho));
        std::vector<double> pops(rho.dim());
        for (std::size_t a = 0; a < rho.dim(); ++a) pops[a] = rho(a, a).real();
        s.populations.push_back(std::move(pops));
    }
    return s;
}

}  // namespace qfactor::dynamics
