#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qfactor/dynamics.hpp"
#include "qfactor/errors.hpp"
#include "qfactor/factorization.hpp"
#include "qfactor/io.hpp"
#include "qfactor/statevec.hpp"

namespace qfactor::cli {

namespace {

using io::format_real;

struct Options {
    int n = 3;
    bool n_given = false;
    std::string set = "paper";
    std::string in_path;
    std::string out_path;
    int grid = 101;
    int count = 50;
    std::uint64_t seed = 1;
    std::string initial = "ghz";
    std::string params_path;
    double t_end = 200.0;
    double dt = dynamics::kDefaultStep;
    int sample_every = 20;
    double tol = kFactorizableTolerance;
};

std::string stem_of(const std::string& path) {
    const auto slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const auto dot = name.find_last_of('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

void write_comparison_header(std::ostream& out) { out << "state_id,n,set_provenance,c_coeffs,c_density,abs_diff\n"; }

int cmd_measure(const Options& o, std::ostream& out) {
    if (o.in_path.empty()) throw io::ParseError("measure needs --in FILE");
    const auto doc = io::parse_state_or_density(io::read_file(o.in_path));
    const auto provenance = provenance_from_string(o.set);
    const std::string id = stem_of(o.in_path);

    write_comparison_header(out);
    if (const auto* state = std::get_if<PureState>(&doc)) {
        if (o.n_given && o.n != state->n_qubits()) throw ArityMismatch("--n does not match the state file");
        const auto set = condition_set(state->n_qubits(), provenance);
        const double c_coeffs = c_measure_coeffs(*state, set);
        const double c_density = c_measure_density(density_from_pure(*state), set);
        out << id << ',' << state->n_qubits() << ',' << to_string(provenance) << ',' << format_real(c_coeffs) << ','
            << format_real(c_density) << ',' << format_real(std::abs(c_coeffs - c_density)) << '\n';
    } else {
        const auto& rho = std::get<DensityMatrix>(doc);
        if (o.n_given && o.n != rho.n_qubits()) throw ArityMismatch("--n does not match the density file");
        try {
            validate_density(rho);
        } catch (const std::invalid_argument& e) {
            throw io::ParseError(e.what());
        }
        const auto set = condition_set(rho.n_qubits(), provenance);
        out << id << ',' << rho.n_qubits() << ',' << to_string(provenance) << ",," << format_real(c_measure_density(rho, set))
            << ",\n";
    }
    return kOk;
}

int cmd_conditions(const Options& o, std::ostream& out) {
    const auto set = condition_set(o.n, provenance_from_string(o.set));
    io::write_conditions_csv(out, set);
    out << "# count=" << set.size() << '\n';
    return kOk;
}

int cmd_factorize(const Options& o, std::ostream& out) {
    if (o.in_path.empty()) throw io::ParseError("factorize needs --in FILE");
    const auto state = io::parse_state(io::read_file(o.in_path));
    out << "qubit,a_re,a_im,b_re,b_im\n";
    if (!is_factorizable(state, o.tol)) {
        out << "# factorizable=false\n";
        return kOk;
    }
    const auto factors = extract_factors(state, o.tol);
    for (std::size_t k = 0; k < factors.size(); ++k) {
        const auto& f = factors[k];
        out << k + 1 << ',' << format_real(f.a.real()) << ',' << format_real(f.a.imag()) << ','
            << format_real(f.b.real()) << ',' << format_real(f.b.imag()) << '\n';
    }
    out << "# factorizable=true\n";
    return kOk;
}

// sheet = +1 / -1 for the two C5 = +-sqrt(1 - C2^2 - C3^2) lattice sheets,
// 0 for the ring of points on the C5 = 0 circle.
int cmd_sweep_w(const Options& o, std::ostream& out) {
    if (o.grid < 3) throw DomainError("--grid must be >= 3");
    const auto set = condition_set(3, provenance_from_string(o.set));
    out << "c2,c3,c5,sheet,c3_measure\n";
    const auto emit = [&](double c2, double c3, double c5, int sheet) {
        const double value = c_measure_coeffs(w_state(c2, c3, c5), set);
        out << format_real(c2) << ',' << format_real(c3) << ',' << format_real(c5) << ',' << sheet << ','
            << format_real(value) << '\n';
    };
    const double step = 2.0 / (o.grid - 1);
    for (int p = 0; p < o.grid; ++p)
        for (int q = 0; q < o.grid; ++q) {
            const double c2 = -1.0 + step * p;
            const double c3 = -1.0 + step * q;
            const double rest = 1.0 - c2 * c2 - c3 * c3;
            if (rest < -1e-12) continue;
            const double c5 = std::sqrt(std::max(0.0, rest));
            emit(c2, c3, c5, +1);
            if (c5 > 0.0) emit(c2, c3, -c5, -1);
        }
    const int ring = 4 * o.grid;
    for (int r = 0; r < ring; ++r) {
        const double theta = 2.0 * std::numbers::pi * r / ring;
        emit(std::cos(theta), std::sin(theta), 0.0, 0);
    }
    return kOk;
}

int cmd_sweep_ghz(const Options& o, std::ostream& out) {
    if (o.grid < 3) throw DomainError("--grid must be >= 3");
    const auto set = condition_set(3, provenance_from_string(o.set));
    out << "t,c1,c8,c3_measure\n";
    for (int s = 0; s < o.grid; ++s) {
        const double t = 2.0 * std::numbers::pi * s / (o.grid - 1);
        const double c1 = std::cos(t);
        const double c8 = std::sin(t);
        out << format_real(t) << ',' << format_real(c1) << ',' << format_real(c8) << ','
            << format_real(c_measure_coeffs(ghz_state(c1, c8), set)) << '\n';
    }
    return kOk;
}

int cmd_random_audit(const Options& o, std::ostream& out) {
    if (o.count < 1) throw DomainError("--count must be >= 1");
    const auto provenance = provenance_from_string(o.set);
    const auto set = condition_set(o.n, provenance);
    write_comparison_header(out);
    double max_diff = 0.0;
    for (int s = 0; s < o.count; ++s) {
        const auto state = random_pure_state(o.n, o.seed + static_cast<std::uint64_t>(s));
        const double c_coeffs = c_measure_coeffs(state, set);
        const double c_density = c_measure_density(density_from_pure(state), set);
        const double diff = std::abs(c_coeffs - c_density);
        max_diff = std::max(max_diff, diff);
        out << s << ',' << o.n << ',' << to_string(provenance) << ',' << format_real(c_coeffs) << ','
            << format_real(c_density) << ',' << format_real(diff) << '\n';
    }
    out << "# max_diff=" << format_real(max_diff) << '\n';
    return kOk;
}

dynamics::ChainParams load_params(const Options& o) {
    std::string path = o.params_path;
    if (path.empty()) {
        if (const char* env = std::getenv("QFACTOR_DEFAULT_PARAMS"); env && *env) path = env;
    }
    if (path.empty()) return dynamics::ChainParams::paper_defaults();
    return io::parse_params(io::read_file(path));
}

DensityMatrix initial_density(const Options& o) {
    const double third = 1.0 / std::sqrt(3.0);
    const double half = 1.0 / std::sqrt(2.0);
    if (o.initial == "w") return density_from_pure(w_state(third, third, third));
    if (o.initial == "ghz") return density_from_pure(ghz_state(half, half));
    if (o.initial == "psi1") return density_from_pure(psi1_state());
    if (o.initial == "file") {
        if (o.in_path.empty()) throw io::ParseError("--initial file needs --in FILE");
        const auto doc = io::parse_state_or_density(io::read_file(o.in_path));
        if (const auto* state = std::get_if<PureState>(&doc)) return density_from_pure(*state);
        auto rho = std::get<DensityMatrix>(doc);
        try {
            validate_density(rho);
        } catch (const std::invalid_argument& e) {
            throw io::ParseError(e.what());
        }
        return rho;
    }
    throw DomainError("unknown initial state '" + o.initial + "'");
}

int cmd_evolve(const Options& o, std::ostream& out) {
    const auto params = load_params(o);
    const auto rho0 = initial_density(o);
    if (rho0.n_qubits() != 3 || params.n_spins() != 3) throw ArityMismatch("evolve runs the three-spin chain");
    const auto traj = dynamics::integrate(rho0, params, o.t_end, o.dt, o.sample_every);
    io::write_trajectory_csv(out, dynamics::observables(traj, condition_set(3, provenance_from_string(o.set))));
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Factorization conditions, entanglement characterization and Ising-chain decay of few-qubit states",
                 "qfactor"};
    app.require_subcommand(1);
    Options o;

    const auto add_set = [&](CLI::App* sub) {
        sub->add_option("--set", o.set, "condition list: paper or generated")
            ->check(CLI::IsMember({"paper", "generated"}));
    };
    const auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out_path, "write CSV here instead of stdout"); };
    const auto add_n = [&](CLI::App* sub) {
        sub->add_option_function<int>(
            "--n", [&](const int& n) { o.n = n; o.n_given = true; }, "number of qubits");
    };

    auto* measure = app.add_subcommand("measure", "C^(n) of a state or density file, both ways");
    measure->add_option("--in", o.in_path, "state or density JSON")->required();
    add_n(measure);
    add_set(measure);
    add_out(measure);

    auto* conditions = app.add_subcommand("conditions", "list the minor conditions");
    add_n(conditions);
    add_set(conditions);
    add_out(conditions);

    auto* factorize = app.add_subcommand("factorize", "decide factorizability and extract qubit factors");
    factorize->add_option("--in", o.in_path, "state JSON")->required();
    factorize->add_option("--tol", o.tol, "residual tolerance");
    add_out(factorize);

    auto* sweep_w = app.add_subcommand("sweep-w", "C^(3) over real W-state coefficients");
    sweep_w->add_option("--grid", o.grid, "lattice points per axis");
    add_set(sweep_w);
    add_out(sweep_w);

    auto* sweep_ghz = app.add_subcommand("sweep-ghz", "C^(3) along cos t |000> + sin t |111>");
    sweep_ghz->add_option("--grid", o.grid, "samples over [0, 2 pi]");
    add_set(sweep_ghz);
    add_out(sweep_ghz);

    auto* audit = app.add_subcommand("random-audit", "coefficient vs density form on random states");
    add_n(audit);
    audit->add_option("--count", o.count, "number of states");
    audit->add_option("--seed", o.seed, "first seed; state s uses seed + s");
    add_set(audit);
    add_out(audit);

    auto* evolve = app.add_subcommand("evolve", "open-system decay of a three-qubit state");
    evolve->add_option("--initial", o.initial, "w, ghz, psi1 or file")
        ->check(CLI::IsMember({"w", "ghz", "psi1", "file"}));
    evolve->add_option("--in", o.in_path, "state or density JSON for --initial file");
    evolve->add_option("--params", o.params_path, "chain parameter JSON");
    evolve->add_option("--t-end", o.t_end, "final time");
    evolve->add_option("--dt", o.dt, "RK4 step");
    evolve->add_option("--sample-every", o.sample_every, "steps between rows");
    evolve->add_option("--set", o.set, "condition list")->check(CLI::IsMember({"paper", "generated"}));
    add_out(evolve);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "qfactor: " << e.what() << '\n';
        return kParseError;
    }

    try {
        std::ofstream file;
        std::ostringstream buffer;
        std::ostream& sink = o.out_path.empty() ? out : static_cast<std::ostream&>(buffer);

        int code = kOk;
        if (measure->parsed()) code = cmd_measure(o, sink);
        else if (conditions->parsed()) code = cmd_conditions(o, sink);
        else if (factorize->parsed()) code = cmd_factorize(o, sink);
        else if (sweep_w->parsed()) code = cmd_sweep_w(o, sink);
        else if (sweep_ghz->parsed()) code = cmd_sweep_ghz(o, sink);
        else if (audit->parsed()) code = cmd_random_audit(o, sink);
        else if (evolve->parsed()) code = cmd_evolve(o, sink);

        if (!o.out_path.empty()) {
            file.open(o.out_path, std::ios::binary);
            if (!file) throw io::ParseError("cannot write '" + o.out_path + "'");
            file << buffer.str();
        }
        return code;
    } catch (const io::ParseError& e) {
        err << "qfactor: " << e.what() << '\n';
        return kParseError;
    } catch (const IntegrationDiverged& e) {
        err << "qfactor: integration diverged at t=" << format_real(e.time()) << ": " << e.what() << '\n';
        return kDiverged;
    } catch (const std::exception& e) {
        // Arity mismatches, unsupported n and bad numeric options.
        err << "qfactor: " << e.what() << '\n';
        return kDomainError;
    }
}

}  // namespace qfactor::cli
