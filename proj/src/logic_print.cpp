#include <sstream>

#include "densevec/logic.hpp"

namespace densevec {

namespace {

void print_term_into(const LinearTerm& t, std::ostream& os) {
  std::vector<std::string> summands;
  for (const auto& [name, q] : t.coeffs) {  // map order = lexicographic
    if (q.is_one())
      summands.push_back(name);
    else
      summands.push_back("(lam " + q.to_string() + " " + name + ")");
  }
  if (!t.constant.is_zero()) summands.push_back("(const " + t.constant.to_string() + ")");
  if (summands.empty()) {
    os << "0";
  } else if (summands.size() == 1) {
    os << summands[0];
  } else {
    os << "(+";
    for (const auto& s : summands) os << " " << s;
    os << ")";
  }
}

void print_into(const FormulaPtr& f, std::ostream& os) {
  switch (f->kind) {
    case Formula::Kind::Atom: {
      const char* rel = f->atom.rel == Rel::Eq ? "=" : f->atom.rel == Rel::Lt ? "<" : "!=";
      os << "(" << rel << " ";
      print_term_into(f->atom.lhs, os);
      os << " 0)";
      return;
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      os << (f->kind == Formula::Kind::And ? "(and" : "(or");
      for (const auto& k : f->kids) {
        os << " ";
        print_into(k, os);
      }
      os << ")";
      return;
    }
    case Formula::Kind::Not:
      os << "(not ";
      print_into(f->kids[0], os);
      os << ")";
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
    case Formula::Kind::ExistsInf: {
      const char* head = f->kind == Formula::Kind::Exists   ? "exists"
                         : f->kind == Formula::Kind::Forall ? "forall"
                                                            : "exists-inf";
      os << "(" << head << " (";
      for (std::size_t i = 0; i < f->binders.size(); ++i)
        os << (i ? " " : "") << f->binders[i];
      os << ") ";
      print_into(f->kids[0], os);
      os << ")";
      return;
    }
  }
}

}  // namespace

std::string print_linear_term(const LinearTerm& t) {
  std::ostringstream os;
  print_term_into(t, os);
  return os.str();
}

std::string print_canonical(const FormulaPtr& f) {
  std::ostringstream os;
  print_into(f, os);
  return os.str();
}

}  // namespace densevec
