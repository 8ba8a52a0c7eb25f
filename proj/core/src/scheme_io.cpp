#include "cxsplit/scheme_io.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "cxsplit/errors.hpp"

namespace cxsplit {

namespace {

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

double parse_real(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a real number, got '" + tok + "'", line);
  }
}

std::vector<cplx> collect(const std::map<int, cplx>& m, char kind, int line) {
  std::vector<cplx> out;
  out.reserve(m.size());
  int expect = 1;
  for (const auto& [j, z] : m) {
    if (j != expect) {
      throw ParseError(std::string("missing coefficient ") + kind + " " + std::to_string(expect), line);
    }
    out.push_back(z);
    ++expect;
  }
  return out;
}

}  // namespace

SplittingScheme parse_scheme(std::istream& in, double consistency_tol) {
  std::string raw;
  int line = 0;
  bool have_header = false;
  std::string name;
  int order = 0;
  Structure structure = Structure::none;
  std::map<int, cplx> a;
  std::map<int, cplx> b;

  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(strip_comment(raw));
    std::string head;
    if (!(ls >> head)) continue;

    if (head == "scheme") {
      if (have_header) throw ParseError("duplicate scheme header", line);
      std::string kw_order, kw_structure, st;
      if (!(ls >> name >> kw_order >> order >> kw_structure >> st) || kw_order != "order" ||
          kw_structure != "structure") {
        throw ParseError("header must read 'scheme <name> order <r> structure <tag>'", line);
      }
      try {
        structure = structure_from_string(st);
      } catch (const LookupError& e) {
        throw ParseError(e.what(), line);
      }
      if (order < 1) throw ParseError("order must be >= 1", line);
      have_header = true;
    } else if (head == "a" || head == "b") {
      if (!have_header) throw ParseError("coefficient before scheme header", line);
      int j = 0;
      std::string re, im;
      if (!(ls >> j >> re >> im)) throw ParseError("expected '" + head + " <j> <re> <im>'", line);
      std::string extra;
      if (ls >> extra) throw ParseError("trailing token '" + extra + "'", line);
      if (j < 1) throw ParseError("coefficient index must be >= 1", line);
      auto& target = head == "a" ? a : b;
      if (!target.emplace(j, cplx{parse_real(re, line), parse_real(im, line)}).second) {
        throw ParseError("duplicate coefficient " + head + " " + std::to_string(j), line);
      }
    } else {
      throw ParseError("unknown record '" + head + "'", line);
    }
  }

  if (!have_header) throw ParseError("missing scheme header", line);
  auto av = collect(a, 'a', line);
  auto bv = collect(b, 'b', line);
  if (av.empty() || bv.size() != av.size() + 1) {
    throw ParseError("need |b| = |a| + 1 with |a| >= 1, got |a| = " + std::to_string(av.size()) +
                         ", |b| = " + std::to_string(bv.size()),
                     line);
  }
  SplittingScheme s(name, std::move(av), std::move(bv), order, structure);
  s.validate_consistency(consistency_tol);
  return s;
}

SplittingScheme load_scheme_file(const std::filesystem::path& path, double consistency_tol) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open scheme file '" + path.string() + "'");
  return parse_scheme(in, consistency_tol);
}

void write_scheme(std::ostream& out, const SplittingScheme& s) {
  char buf[128];
  out << "scheme " << s.name() << " order " << s.declared_order() << " structure "
      << to_string(s.structure()) << '\n';
  for (std::size_t j = 0; j < s.b().size(); ++j) {
    std::snprintf(buf, sizeof buf, "b %zu %.16e %.16e\n", j + 1, s.b()[j].real(), s.b()[j].imag());
    out << buf;
    if (j < s.a().size()) {
      std::snprintf(buf, sizeof buf, "a %zu %.16e %.16e\n", j + 1, s.a()[j].real(), s.a()[j].imag());
      out << buf;
    }
  }
}

SplittingScheme resolve_scheme(const std::string& name_or_path) {
  for (auto n : registry_names()) {
    if (n == name_or_path) return registry_get(n);
  }
  if (std::filesystem::exists(name_or_path)) return load_scheme_file(name_or_path);
  return registry_get(name_or_path);  // throws LookupError with the valid list
}

}  // namespace cxsplit
