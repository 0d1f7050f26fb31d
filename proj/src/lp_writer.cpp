#include "batchcg/lp_writer.hpp"

#include <charconv>
#include <cmath>

namespace batchcg {

std::string LpWriter::format_number(double value) {
  if (value == static_cast<long long>(value) && std::abs(value) < 1e15)
    return std::to_string(static_cast<long long>(value));
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

void LpWriter::add_constraint(std::string name, Terms terms, char sense, double rhs) {
  constraints_.push_back(Constraint{std::move(name), std::move(terms), sense, rhs});
}

namespace {

void write_terms(std::ostream& out, const LpWriter::Terms& terms) {
  int line_len = 0;
  bool first = true;
  for (const auto& [coef, var] : terms) {
    if (coef == 0.0) continue;
    std::string piece;
    if (first) {
      if (coef < 0) piece += "- ";
    } else {
      piece += coef < 0 ? " - " : " + ";
    }
    double mag = std::abs(coef);
    if (mag != 1.0) piece += LpWriter::format_number(mag) + " ";
    piece += var;
    if (line_len + static_cast<int>(piece.size()) > 220) {
      out << "\n  ";
      line_len = 2;
    }
    out << piece;
    line_len += static_cast<int>(piece.size());
    first = false;
  }
  if (first) out << "0";
}

}  // namespace

void LpWriter::write(std::ostream& out) const {
  out << "Minimize\n obj: ";
  write_terms(out, objective_);
  out << "\nSubject To\n";
  for (const auto& c : constraints_) {
    out << " " << c.name << ": ";
    write_terms(out, c.terms);
    switch (c.sense) {
      case '<': out << " <= "; break;
      case '>': out << " >= "; break;
      default: out << " = "; break;
    }
    out << format_number(c.rhs) << "\n";
  }
  if (!bounds_.empty()) {
    out << "Bounds\n";
    for (const auto& line : bounds_) out << " " << line << "\n";
  }
  if (!binaries_.empty()) {
    out << "Binaries\n";
    int line_len = 0;
    for (const auto& var : binaries_) {
      if (line_len == 0) {
        out << " ";
        line_len = 1;
      } else if (line_len + static_cast<int>(var.size()) + 1 > 220) {
        out << "\n ";
        line_len = 1;
      } else {
        out << " ";
        ++line_len;
      }
      out << var;
      line_len += static_cast<int>(var.size());
    }
    out << "\n";
  }
  out << "End\n";
}

}  // namespace batchcg
