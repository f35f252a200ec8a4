#include "thermobj/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "thermobj/sbs.hpp"

namespace thermobj {

std::string format_complex(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.17g%+.17gi", z.real(), z.imag());
  return buf;
}

Complex parse_complex(const std::string& token) {
  if (token.empty() || token.back() != 'i')
    throw std::invalid_argument("parse_complex: expected trailing 'i' in '" + token + "'");
  std::string body = token.substr(0, token.size() - 1);
  // Rightmost sign that is not an exponent sign splits real from imaginary.
  size_t split = std::string::npos;
  for (size_t k = body.size(); k-- > 1;) {
    char c = body[k];
    if ((c == '+' || c == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos)
    throw std::invalid_argument("parse_complex: malformed entry '" + token + "'");
  size_t used = 0;
  double re = std::stod(body.substr(0, split), &used);
  if (used != split) throw std::invalid_argument("parse_complex: malformed real part in '" + token + "'");
  double im = std::stod(body.substr(split), &used);
  if (used != body.size() - split)
    throw std::invalid_argument("parse_complex: malformed imaginary part in '" + token + "'");
  return {re, im};
}

void write_matrix(std::ostream& os, const Matrix& m) {
  if (m.rows() == m.cols()) {
    os << "dim " << m.rows() << "\n";
  } else {
    os << "dims " << m.rows() << " " << m.cols() << "\n";
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << format_complex(m(i, j));
    os << "\n";
  }
}

Matrix read_matrix(std::istream& is) {
  std::string tag;
  if (!(is >> tag)) throw std::runtime_error("read_matrix: missing header");
  Eigen::Index rows = 0, cols = 0;
  if (tag == "dim") {
    if (!(is >> rows)) throw std::runtime_error("read_matrix: missing dimension");
    cols = rows;
  } else if (tag == "dims") {
    if (!(is >> rows >> cols)) throw std::runtime_error("read_matrix: missing dimensions");
  } else {
    throw std::runtime_error("read_matrix: expected 'dim', got '" + tag + "'");
  }
  if (rows < 1 || cols < 1) throw std::runtime_error("read_matrix: bad dimension");
  Matrix m(rows, cols);
  std::string token;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(is >> token)) throw std::runtime_error("read_matrix: truncated matrix body");
      m(i, j) = parse_complex(token);
    }
  return m;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  return is;
}

}  // namespace

void write_density(const std::string& path, const DensityOperator& rho) {
  auto os = open_out(path);
  write_matrix(os, rho.matrix());
}

DensityOperator read_density(const std::string& path) {
  auto is = open_in(path);
  return DensityOperator(HermitianOperator(read_matrix(is)));
}

void write_hamiltonian(const std::string& path, const HamiltonianSpec& h) {
  auto os = open_out(path);
  os << "dim " << h.dim() << "\n";
  for (int i = 0; i < h.dim(); ++i) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", h.energies()[i]);
    os << (i ? " " : "") << buf;
  }
  os << "\n";
  write_matrix(os, h.basis());
}

HamiltonianSpec read_hamiltonian(const std::string& path) {
  auto is = open_in(path);
  std::string tag;
  Eigen::Index d = 0;
  if (!(is >> tag >> d) || tag != "dim") throw std::runtime_error("read_hamiltonian: bad header");
  Eigen::VectorXd energies(d);
  for (Eigen::Index i = 0; i < d; ++i)
    if (!(is >> energies[i])) throw std::runtime_error("read_hamiltonian: truncated energies");
  return HamiltonianSpec(energies, read_matrix(is));
}

void write_sbs(const std::string& path, const SBSState& s) {
  auto os = open_out(path);
  os << "sbs\n";
  os << "indices " << s.index_count() << "\n";
  os << "subenvs " << s.subenv_count() << "\n";
  os << "sys_dim " << s.sys_dim() << "\n";
  os << "env_dims";
  for (int e : s.env_dims()) os << " " << e;
  os << "\n";
  os << "probs";
  for (double p : s.probs) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", p);
    os << " " << buf;
  }
  os << "\n";
  write_matrix(os, s.sys_basis);
  for (const auto& per_env : s.cond_states)
    for (const auto& st : per_env) write_matrix(os, st.matrix());
}

SBSState read_sbs(const std::string& path) {
  auto is = open_in(path);
  std::string tag;
  if (!(is >> tag) || tag != "sbs") throw std::runtime_error("read_sbs: bad header");
  int n = 0, n_env = 0, d_s = 0;
  auto expect = [&](const char* key) {
    if (!(is >> tag) || tag != key)
      throw std::runtime_error(std::string("read_sbs: expected '") + key + "'");
  };
  expect("indices");
  is >> n;
  expect("subenvs");
  is >> n_env;
  expect("sys_dim");
  is >> d_s;
  expect("env_dims");
  std::vector<int> env_dims(n_env);
  for (auto& e : env_dims) is >> e;
  expect("probs");
  std::vector<double> probs(n);
  for (auto& p : probs)
    if (!(is >> p)) throw std::runtime_error("read_sbs: truncated probs");
  Matrix basis = read_matrix(is);
  if (basis.rows() != d_s || basis.cols() != n)
    throw std::runtime_error("read_sbs: basis shape mismatch");
  std::vector<std::vector<DensityOperator>> cond(n_env);
  for (int k = 0; k < n_env; ++k)
    for (int i = 0; i < n; ++i) {
      Matrix m = read_matrix(is);
      if (m.rows() != env_dims[k]) throw std::runtime_error("read_sbs: conditional dim mismatch");
      cond[k].emplace_back(HermitianOperator(m));
    }
  return SBSState(std::move(probs), std::move(basis), std::move(cond));
}

}  // namespace thermobj
