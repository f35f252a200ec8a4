// Plain-text interchange formats: matrices ("dim d" header, then d rows
// of "a+bi" entries), Hamiltonian specs, and structured objective states.
#pragma once

#include <iosfwd>
#include <string>

#include "thermobj/gibbs.hpp"
#include "thermobj/operators.hpp"

namespace thermobj {

struct SBSState;  // sbs.hpp

std::string format_complex(Complex z);
Complex parse_complex(const std::string& token);

void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);

void write_density(const std::string& path, const DensityOperator& rho);
DensityOperator read_density(const std::string& path);

void write_hamiltonian(const std::string& path, const HamiltonianSpec& h);
HamiltonianSpec read_hamiltonian(const std::string& path);

void write_sbs(const std::string& path, const SBSState& s);
SBSState read_sbs(const std::string& path);

}  // namespace thermobj
