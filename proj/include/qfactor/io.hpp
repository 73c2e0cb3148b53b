#pragma once

// File formats.
//
//   state    {"n": 3, "coeffs": [[re, im], ...]}            index order 1..2^n
//   density  {"n": 3, "rho": [[[re, im], ...], ...]}         row-major
//   params   {"omega": [..], "J": .., "Jp": .., "gamma": [..]}
//
// CSV output always carries a header row; numbers are written with 17
// significant digits so they read back bit-exact.

#include <iosfwd>
#include <string>
#include <variant>

#include "qfactor/dynamics.hpp"
#include "qfactor/errors.hpp"
#include "qfactor/factorization.hpp"
#include "qfactor/statevec.hpp"

namespace qfactor::io {

// Malformed or unreadable input.
class ParseError : public Error {
public:
    using Error::Error;
};

PureState parse_state(const std::string& json_text);
DensityMatrix parse_density(const std::string& json_text);
dynamics::ChainParams parse_params(const std::string& json_text);

// A state or a density, whichever the document holds.
using StateOrDensity = std::variant<PureState, DensityMatrix>;
StateOrDensity parse_state_or_density(const std::string& json_text);

std::string state_to_json(const PureState& state);
std::string density_to_json(const DensityMatrix& rho);
std::string params_to_json(const dynamics::ChainParams& p);

std::string read_file(const std::string& path);

std::string format_real(double x);

// n,i,j,k,l,provenance
void write_conditions_csv(std::ostream& out, const ConditionSet& set);

struct MeasureRow {
    std::string state_id;
    int n = 0;
    Provenance provenance = Provenance::PaperList;
    double c_value = 0.0;
};

// state_id,n,set_provenance,c_value
void write_measure_header(std::ostream& out);
void write_measure_row(std::ostream& out, const MeasureRow& row);

// t,c3_rho,purity,rho11,...,rhoNN
void write_trajectory_csv(std::ostream& out, const dynamics::ObservableSeries& series);

}  // namespace qfactor::io
