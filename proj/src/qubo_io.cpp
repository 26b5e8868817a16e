#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "mcnf/encode.hpp"

namespace mcnf {

namespace {

std::string format_coefficient(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_qubo(std::ostream& os, const Qubo<double>& q) {
  std::ostringstream diag, couplers;
  std::size_t n_diag = 0, n_elem = 0;
  for (Eigen::Index p = 0; p < q.terms.outerSize(); ++p) {
    for (SparseUpper<double>::InnerIterator it(q.terms, p); it; ++it) {
      auto& dst = it.col() == p ? diag : couplers;
      dst << p << ' ' << it.col() << ' ' << format_coefficient(it.value()) << '\n';
      (it.col() == p ? n_diag : n_elem) += 1;
    }
  }
  os << "c mcnf qubo\n";
  os << "p qubo 0 " << q.size() << ' ' << n_diag << ' ' << n_elem << '\n';
  os << diag.str() << couplers.str();
  os << "c offset " << format_coefficient(q.offset) << '\n';
}

Qubo<double> read_qubo(std::istream& is) {
  std::string line;
  bool have_header = false;
  long long size = 0, n_diag = 0, n_elem = 0, seen_diag = 0, seen_elem = 0;
  double offset = 0.0;
  std::vector<Eigen::Triplet<double>> triplets;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) {
    throw ParseError("qubo line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream in(line);
    if (line[0] == 'c') {
      std::string tag, key;
      in >> tag >> key;
      if (key == "offset" && !(in >> offset)) fail("bad offset");
      continue;
    }
    if (line[0] == 'p') {
      std::string p, kind;
      long long topology = -1;
      if (have_header) fail("duplicate header");
      if (!(in >> p >> kind >> topology >> size >> n_diag >> n_elem) || kind != "qubo" || size < 0)
        fail("bad header");
      have_header = true;
      continue;
    }
    if (!have_header) fail("term before header");
    long long a = 0, b = 0;
    double c = 0.0;
    if (!(in >> a >> b >> c)) fail("bad term");
    if (a < 0 || b < a || b >= size) fail("term index out of range or p > q");
    (a == b ? seen_diag : seen_elem) += 1;
    triplets.emplace_back(a, b, c);
  }
  if (!have_header) throw ParseError("qubo: missing header");
  if (seen_diag != n_diag || seen_elem != n_elem) throw ParseError("qubo: term counts do not match header");
  Qubo<double> q;
  q.terms.resize(size, size);
  q.terms.setFromTriplets(triplets.begin(), triplets.end());
  q.terms.makeCompressed();
  q.offset = offset;
  return q;
}

}  // namespace mcnf
