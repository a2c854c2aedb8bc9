#include "sqv/theory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace sqv {

VertexKernel VertexKernel::local(int arity, double g) {
  if (arity < 2) fail(ErrorCode::ArityMismatch, "kernel arity must be at least 2");
  VertexKernel k;
  k.arity = arity;
  k.kind = Kind::Local;
  k.coupling = g;
  return k;
}

namespace {

std::size_t tensor_index(const std::vector<int>& sites, int n) {
  std::size_t idx = 0;
  for (int s : sites) idx = idx * n + static_cast<std::size_t>(s);
  return idx;
}

}  // namespace

VertexKernel VertexKernel::dense(int arity, int n_sites, std::vector<double> tensor) {
  if (arity < 2) fail(ErrorCode::ArityMismatch, "kernel arity must be at least 2");
  std::size_t expected = 1;
  for (int i = 0; i < arity; ++i) expected *= static_cast<std::size_t>(n_sites);
  if (tensor.size() != expected)
    fail(ErrorCode::ConfigParse, "dense kernel tensor has wrong size");

  // cyclic symmetry is assumed of the input; check it, then store the full
  // symmetrization so contraction code never cares about argument order
  std::vector<int> idx(arity, 0);
  double scale = 0.0;
  for (double v : tensor) scale = std::max(scale, std::abs(v));
  auto advance = [&]() {
    for (int d = arity - 1; d >= 0; --d) {
      if (++idx[d] < n_sites) return true;
      idx[d] = 0;
    }
    return false;
  };
  do {
    std::vector<int> rot(idx.begin() + 1, idx.end());
    rot.push_back(idx[0]);
    double a = tensor[tensor_index(idx, n_sites)];
    double b = tensor[tensor_index(rot, n_sites)];
    if (std::abs(a - b) > 1e-12 * std::max(scale, 1.0))
      fail(ErrorCode::ConfigParse, "dense kernel is not cyclically symmetric");
  } while (advance());

  std::vector<double> sym(tensor.size(), 0.0);
  std::vector<int> perm(arity);
  std::iota(perm.begin(), perm.end(), 0);
  int n_perm = 0;
  do {
    ++n_perm;
    std::fill(idx.begin(), idx.end(), 0);
    do {
      std::vector<int> permuted(arity);
      for (int d = 0; d < arity; ++d) permuted[d] = idx[perm[d]];
      sym[tensor_index(idx, n_sites)] += tensor[tensor_index(permuted, n_sites)];
    } while (advance());
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (double& v : sym) v /= n_perm;

  VertexKernel k;
  k.arity = arity;
  k.kind = Kind::Dense;
  k.tensor = std::move(sym);
  return k;
}

double VertexKernel::value(const std::vector<int>& sites, int n_sites) const {
  if (kind == Kind::Local) {
    for (std::size_t i = 1; i < sites.size(); ++i)
      if (sites[i] != sites[0]) return 0.0;
    return coupling;
  }
  return tensor[tensor_index(sites, n_sites)];
}

const VertexKernel* Theory::kernel_for_arity(int arity) const {
  for (const auto& k : kernels)
    if (k.arity == arity) return &k;
  return nullptr;
}

std::vector<int> Theory::kernel_arities() const {
  std::vector<int> out;
  for (const auto& k : kernels) out.push_back(k.arity);
  std::sort(out.begin(), out.end());
  return out;
}

Theory Theory::with_unit_couplings() const {
  Theory t = *this;
  for (auto& k : t.kernels)
    if (k.kind == VertexKernel::Kind::Local) k.coupling = 1.0;
  return t;
}

void Theory::check() const {
  std::vector<int> arities = kernel_arities();
  if (std::adjacent_find(arities.begin(), arities.end()) != arities.end())
    fail(ErrorCode::ArityMismatch, "duplicate kernel arity");
  for (int s : external_sites)
    if (s < 0 || s >= n_sites())
      fail(ErrorCode::ConfigParse, "external site out of range");
}

namespace {

std::vector<std::string> tokenize_line(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream is(line.substr(0, line.find('#')));
  std::string tok;
  while (is >> tok) tokens.push_back(tok);
  return tokens;
}

double parse_real(const std::string& tok, int line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::ConfigParse,
         "line " + std::to_string(line_no) + ": expected a real number, got '" + tok + "'");
  }
}

int parse_int(const std::string& tok, int line_no) {
  try {
    std::size_t used = 0;
    int v = std::stoi(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::ConfigParse,
         "line " + std::to_string(line_no) + ": expected an integer, got '" + tok + "'");
  }
}

}  // namespace

Theory parse_theory(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int line_no = 0;

  int n = -1;
  std::vector<double> a_entries;
  struct PendingKernel {
    bool dense;
    int arity;
    double g;
    std::vector<double> tensor;
    int line_no;
  };
  std::vector<PendingKernel> pending;
  std::vector<int> externals;
  bool have_externals = false;

  while (std::getline(is, line)) {
    ++line_no;
    auto tokens = tokenize_line(line);
    if (tokens.empty()) continue;
    const std::string& head = tokens[0];
    if (head == "N") {
      if (tokens.size() != 2) fail(ErrorCode::ConfigParse, "line " + std::to_string(line_no) + ": N takes one value");
      n = parse_int(tokens[1], line_no);
      if (n < 1) fail(ErrorCode::ConfigParse, "line " + std::to_string(line_no) + ": N must be positive");
    } else if (head == "A") {
      for (std::size_t i = 1; i < tokens.size(); ++i) a_entries.push_back(parse_real(tokens[i], line_no));
    } else if (head == "kernel") {
      if (tokens.size() < 4)
        fail(ErrorCode::ConfigParse, "line " + std::to_string(line_no) + ": kernel needs kind, arity and values");
      PendingKernel pk;
      pk.line_no = line_no;
      pk.arity = parse_int(tokens[2], line_no);
      if (tokens[1] == "local") {
        if (tokens.size() != 4)
          fail(ErrorCode::ConfigParse, "line " + std::to_string(line_no) + ": local kernel takes one coupling");
        pk.dense = false;
        pk.g = parse_real(tokens[3], line_no);
      } else if (tokens[1] == "dense") {
        pk.dense = true;
        pk.g = 0.0;
        for (std::size_t i = 3; i < tokens.size(); ++i) pk.tensor.push_back(parse_real(tokens[i], line_no));
      } else {
        fail(ErrorCode::ConfigParse,
             "line " + std::to_string(line_no) + ": kernel kind must be 'local' or 'dense'");
      }
      pending.push_back(std::move(pk));
    } else if (head == "externals") {
      have_externals = true;
      for (std::size_t i = 1; i < tokens.size(); ++i) externals.push_back(parse_int(tokens[i], line_no));
    } else {
      fail(ErrorCode::ConfigParse, "line " + std::to_string(line_no) + ": unknown field '" + head + "'");
    }
  }

  if (n < 1) fail(ErrorCode::ConfigParse, "missing field N");
  if (static_cast<int>(a_entries.size()) != n * n)
    fail(ErrorCode::ConfigParse, "field A needs exactly N*N entries, got " + std::to_string(a_entries.size()));
  if (!have_externals) fail(ErrorCode::ConfigParse, "missing field externals");

  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = a_entries[static_cast<std::size_t>(i) * n + j];

  Theory theory{Operator::build(a), {}, externals};
  for (auto& pk : pending) {
    if (pk.dense)
      theory.kernels.push_back(VertexKernel::dense(pk.arity, n, std::move(pk.tensor)));
    else
      theory.kernels.push_back(VertexKernel::local(pk.arity, pk.g));
  }
  theory.check();
  return theory;
}

Theory load_theory_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigParse, "cannot open theory file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_theory(buf.str());
}

std::string theory_to_text(const Theory& theory) {
  std::ostringstream os;
  os.precision(17);
  const int n = theory.n_sites();
  os << "N " << n << "\nA";
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) os << " " << theory.op.matrix()(i, j);
  os << "\n";
  for (const auto& k : theory.kernels) {
    if (k.kind == VertexKernel::Kind::Local) {
      os << "kernel local " << k.arity << " " << k.coupling << "\n";
    } else {
      os << "kernel dense " << k.arity;
      for (double v : k.tensor) os << " " << v;
      os << "\n";
    }
  }
  os << "externals";
  for (int s : theory.external_sites) os << " " << s;
  os << "\n";
  return os.str();
}

}  // namespace sqv
