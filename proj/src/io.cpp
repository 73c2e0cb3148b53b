#include "qfactor/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace qfactor::io {

using nlohmann::json;

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

Complex parse_complex(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ParseError("complex numbers must be [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

json complex_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

int parse_n(const json& doc) {
    if (!doc.contains("n") || !doc["n"].is_number_integer()) throw ParseError("missing integer field 'n'");
    const int n = doc["n"].get<int>();
    if (n < 1 || n > kMaxQubits) throw ParseError("'n' must be in [1, 8]");
    return n;
}

PureState state_from(const json& doc) {
    const int n = parse_n(doc);
    const auto& arr = doc["coeffs"];
    if (!arr.is_array()) throw ParseError("'coeffs' must be an array");
    if (arr.size() != dimension(n)) throw ParseError("'coeffs' must hold 2^n entries");
    std::vector<Complex> c;
    c.reserve(arr.size());
    for (const auto& e : arr) c.push_back(parse_complex(e));
    try {
        return PureState(n, std::move(c));
    } catch (const NormalizationError& e) {
        throw ParseError(e.what());
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

DensityMatrix density_from(const json& doc) {
    const int n = parse_n(doc);
    const auto& rows = doc["rho"];
    const std::size_t dim = dimension(n);
    if (!rows.is_array() || rows.size() != dim) throw ParseError("'rho' must hold 2^n rows");
    DensityMatrix rho(n);
    for (std::size_t r = 0; r < dim; ++r) {
        if (!rows[r].is_array() || rows[r].size() != dim) throw ParseError("'rho' rows must hold 2^n entries");
        for (std::size_t s = 0; s < dim; ++s) rho(r, s) = parse_complex(rows[r][s]);
    }
    return rho;
}

std::vector<double> real_array(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_array()) throw ParseError(std::string("missing array '") + key + "'");
    std::vector<double> out;
    for (const auto& e : doc[key]) {
        if (!e.is_number()) throw ParseError(std::string("'") + key + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

double real_field(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number()) throw ParseError(std::string("missing number '") + key + "'");
    return doc[key].get<double>();
}

}  // namespace

PureState parse_state(const std::string& json_text) {
    const auto doc = parse_json(json_text);
    if (!doc.is_object() || !doc.contains("coeffs")) throw ParseError("state file needs 'n' and 'coeffs'");
    return state_from(doc);
}

DensityMatrix parse_density(const std::string& json_text) {
    const auto doc = parse_json(json_text);
    if (!doc.is_object() || !doc.contains("rho")) throw ParseError("density file needs 'n' and 'rho'");
    return density_from(doc);
}

StateOrDensity parse_state_or_density(const std::string& json_text) {
    const auto doc = parse_json(json_text);
    if (!doc.is_object()) throw ParseError("expected a JSON object");
    if (doc.contains("coeffs")) return state_from(doc);
    if (doc.contains("rho")) return density_from(doc);
    throw ParseError("file holds neither 'coeffs' nor 'rho'");
}

dynamics::ChainParams parse_params(const std::string& json_text) {
    const auto doc = parse_json(json_text);
    if (!doc.is_object()) throw ParseError("expected a JSON object");
    dynamics::ChainParams p{real_array(doc, "omega"), real_field(doc, "J"), real_field(doc, "Jp"),
                            real_array(doc, "gamma")};
    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return p;
}

std::string state_to_json(const PureState& state) {
    json doc;
    doc["n"] = state.n_qubits();
    doc["coeffs"] = json::array();
    for (const auto& c : state.coeffs()) doc["coeffs"].push_back(complex_json(c));
    return doc.dump();
}

std::string density_to_json(const DensityMatrix& rho) {
    json doc;
    doc["n"] = rho.n_qubits();
    doc["rho"] = json::array();
    for (std::size_t r = 0; r < rho.dim(); ++r) {
        json row = json::array();
        for (std::size_t s = 0; s < rho.dim(); ++s) row.push_back(complex_json(rho(r, s)));
        doc["rho"].push_back(std::move(row));
    }
    return doc.dump();
}

std::string params_to_json(const dynamics::ChainParams& p) {
    json doc;
    doc["omega"] = p.omega;
    doc["J"] = p.j_coupling;
    doc["Jp"] = p.j2_coupling;
    doc["gamma"] = p.gamma;
    return doc.dump(2);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_real(double x) {
    std::ostringstream ss;
    ss << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
    return ss.str();
}

void write_conditions_csv(std::ostream& out, const ConditionSet& set) {
    out << "n,i,j,k,l,provenance\n";
    for (const auto& c : set.conditions())
        out << set.n_qubits() << ',' << c.i << ',' << c.j << ',' << c.k << ',' << c.l << ','
            << to_string(set.provenance()) << '\n';
}

void write_measure_header(std::ostream& out) { out << "state_id,n,set_provenance,c_value\n"; }

void write_measure_row(std::ostream& out, const MeasureRow& row) {
    out << row.state_id << ',' << row.n << ',' << to_string(row.provenance) << ',' << format_real(row.c_value)
        << '\n';
}

void write_trajectory_csv(std::ostream& out, const dynamics::ObservableSeries& series) {
    const std::size_t dim = series.populations.empty() ? 8 : series.populations.front().size();
    out << "t,c3_rho,purity";
    for (std::size_t a = 1; a <= dim; ++a) out << ",rho" << a << a;
    out << '\n';
    for (std::size_t s = 0; s < series.times.size(); ++s) {
        out << format_real(series.times[s]) << ',' << format_real(series.c3_rho[s]) << ','
            << format_real(series.purity[s]);
        for (double pop : series.populations[s]) out << ',' << format_real(pop);
        out << '\n';
    }
}

}  // namespace qfactor::io
