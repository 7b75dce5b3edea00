#include "sgplan/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace sgplan {

namespace ltl {

namespace {
LtlPtr leaf(LtlKind k) { return std::make_shared<LtlNode>(LtlNode{k, "", nullptr, nullptr}); }
}  // namespace

LtlPtr make_true() {
  static const LtlPtr t = leaf(LtlKind::True);
  return t;
}
LtlPtr make_false() {
  static const LtlPtr f = leaf(LtlKind::False);
  return f;
}
LtlPtr atom(std::string id) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Atom, std::move(id), nullptr, nullptr});
}
LtlPtr f_not(LtlPtr a) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Not, "", std::move(a), nullptr});
}
LtlPtr f_and(LtlPtr a, LtlPtr b) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::And, "", std::move(a), std::move(b)});
}
LtlPtr f_or(LtlPtr a, LtlPtr b) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Or, "", std::move(a), std::move(b)});
}
LtlPtr imply(LtlPtr a, LtlPtr b) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Imply, "", std::move(a), std::move(b)});
}
LtlPtr next(LtlPtr a) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Next, "", std::move(a), nullptr});
}
LtlPtr until(LtlPtr a, LtlPtr b) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Until, "", std::move(a), std::move(b)});
}
LtlPtr release(LtlPtr a, LtlPtr b) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Release, "", std::move(a), std::move(b)});
}
LtlPtr eventually(LtlPtr a) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Eventually, "", std::move(a), nullptr});
}
LtlPtr always(LtlPtr a) {
  return std::make_shared<LtlNode>(LtlNode{LtlKind::Always, "", std::move(a), nullptr});
}

}  // namespace ltl

int compare(const LtlPtr& a, const LtlPtr& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
  if (a->kind == LtlKind::Atom) return a->atom.compare(b->atom);
  if (a->lhs || b->lhs) {
    if (!a->lhs) return -1;
    if (!b->lhs) return 1;
    if (int c = compare(a->lhs, b->lhs)) return c;
  }
  if (a->rhs || b->rhs) {
    if (!a->rhs) return -1;
    if (!b->rhs) return 1;
    if (int c = compare(a->rhs, b->rhs)) return c;
  }
  return 0;
}

bool equal(const LtlPtr& a, const LtlPtr& b) { return compare(a, b) == 0; }

bool prop_less(const std::string& a, const std::string& b) {
  auto numeric_suffix = [](const std::string& s) -> long long {
    size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    if (i == s.size()) return -1;
    return std::stoll(s.substr(i));
  };
  auto stem = [](const std::string& s) {
    size_t i = s.size();
    while (i > 0 && std::isdigit(static_cast<unsigned char>(s[i - 1]))) --i;
    return s.substr(0, i);
  };
  const std::string sa = stem(a), sb = stem(b);
  if (sa != sb) return sa < sb;
  return numeric_suffix(a) < numeric_suffix(b);
}

std::vector<std::string> props(const LtlPtr& f) {
  std::set<std::string> out;
  std::vector<const LtlNode*> stack{f.get()};
  while (!stack.empty()) {
    const LtlNode* n = stack.back();
    stack.pop_back();
    if (n->kind == LtlKind::Atom) out.insert(n->atom);
    if (n->lhs) stack.push_back(n->lhs.get());
    if (n->rhs) stack.push_back(n->rhs.get());
  }
  std::vector<std::string> v(out.begin(), out.end());
  std::sort(v.begin(), v.end(), prop_less);
  return v;
}

Alphabet::Alphabet(const std::vector<Proposition>& propositions) {
  for (const auto& p : propositions) add(p);
}

void Alphabet::add(const Proposition& p) {
  if (p.attribute_id.empty()) throw std::invalid_argument("empty proposition id");
  props_.push_back(p);
  token_to_id_[p.attribute_id] = p.attribute_id;
}

void Alphabet::add_alias(const std::string& token, const std::string& canonical_id) {
  token_to_id_[token] = canonical_id;
}

bool Alphabet::contains(const std::string& token) const {
  return token_to_id_.count(token) != 0;
}

std::optional<std::string> Alphabet::resolve(const std::string& token) const {
  auto it = token_to_id_.find(token);
  if (it == token_to_id_.end()) return std::nullopt;
  return it->second;
}

namespace {

LtlPtr parse_one(const std::vector<std::string>& toks, size_t& i, const Alphabet& alphabet) {
  if (i >= toks.size())
    throw LtlParseError(ParseErrorKind::ArityError, "formula ends before operand");
  const std::string& t = toks[i++];
  auto unary = [&](LtlPtr (*make)(LtlPtr)) { return make(parse_one(toks, i, alphabet)); };
  auto binary = [&](LtlPtr (*make)(LtlPtr, LtlPtr)) {
    LtlPtr a = parse_one(toks, i, alphabet);
    LtlPtr b = parse_one(toks, i, alphabet);
    return make(std::move(a), std::move(b));
  };
  if (t == "!") return unary(ltl::f_not);
  if (t == "X") return unary(ltl::next);
  if (t == "F") return unary(ltl::eventually);
  if (t == "G") return unary(ltl::always);
  if (t == "&") return binary(ltl::f_and);
  if (t == "|") return binary(ltl::f_or);
  if (t == "=>") return binary(ltl::imply);
  if (t == "U") return binary(ltl::until);
  if (t == "true") return ltl::make_true();
  if (t == "false") return ltl::make_false();
  auto id = alphabet.resolve(t);
  if (!id) throw LtlParseError(ParseErrorKind::UnknownToken, "unknown atom '" + t + "'");
  return ltl::atom(*id);
}

}  // namespace

LtlPtr parse_prefix(const std::string& text, const Alphabet& alphabet) {
  std::vector<std::string> toks;
  std::istringstream in(text);
  std::string t;
  while (in >> t) toks.push_back(t);
  size_t i = 0;
  LtlPtr f = parse_one(toks, i, alphabet);
  if (i != toks.size())
    throw LtlParseError(ParseErrorKind::TrailingTokens,
                        "trailing tokens after a complete formula");
  return f;
}

std::string print_prefix(const LtlPtr& f) {
  switch (f->kind) {
    case LtlKind::True: return "true";
    case LtlKind::False: return "false";
    case LtlKind::Atom: return f->atom;
    case LtlKind::Not: return "! " + print_prefix(f->lhs);
    case LtlKind::Next: return "X " + print_prefix(f->lhs);
    case LtlKind::Eventually: return "F " + print_prefix(f->lhs);
    case LtlKind::Always: return "G " + print_prefix(f->lhs);
    case LtlKind::And: return "& " + print_prefix(f->lhs) + " " + print_prefix(f->rhs);
    case LtlKind::Or: return "| " + print_prefix(f->lhs) + " " + print_prefix(f->rhs);
    case LtlKind::Imply: return "=> " + print_prefix(f->lhs) + " " + print_prefix(f->rhs);
    case LtlKind::Until: return "U " + print_prefix(f->lhs) + " " + print_prefix(f->rhs);
    case LtlKind::Release: return "R " + print_prefix(f->lhs) + " " + print_prefix(f->rhs);
  }
  return "?";
}

std::string print_infix(const LtlPtr& f) {
  switch (f->kind) {
    case LtlKind::True: return "true";
    case LtlKind::False: return "false";
    case LtlKind::Atom: return f->atom;
    case LtlKind::Not: return "!" + print_infix(f->lhs);
    case LtlKind::Next: return "X " + print_infix(f->lhs);
    case LtlKind::Eventually: return "F " + print_infix(f->lhs);
    case LtlKind::Always: return "G " + print_infix(f->lhs);
    case LtlKind::And: return "(" + print_infix(f->lhs) + " & " + print_infix(f->rhs) + ")";
    case LtlKind::Or: return "(" + print_infix(f->lhs) + " | " + print_infix(f->rhs) + ")";
    case LtlKind::Imply: return "(" + print_infix(f->lhs) + " => " + print_infix(f->rhs) + ")";
    case LtlKind::Until: return "(" + print_infix(f->lhs) + " U " + print_infix(f->rhs) + ")";
    case LtlKind::Release: return "(" + print_infix(f->lhs) + " R " + print_infix(f->rhs) + ")";
  }
  return "?";
}

namespace {

LtlPtr nnf(const LtlPtr& f, bool negated) {
  using namespace ltl;
  switch (f->kind) {
    case LtlKind::True: return negated ? make_false() : make_true();
    case LtlKind::False: return negated ? make_true() : make_false();
    case LtlKind::Atom: return negated ? f_not(f) : f;
    case LtlKind::Not:
      if (!negated && f->lhs->kind == LtlKind::Atom) return f;  // already a literal
      return nnf(f->lhs, !negated);
    case LtlKind::And:
      return negated ? f_or(nnf(f->lhs, true), nnf(f->rhs, true))
                     : f_and(nnf(f->lhs, false), nnf(f->rhs, false));
    case LtlKind::Or:
      return negated ? f_and(nnf(f->lhs, true), nnf(f->rhs, true))
                     : f_or(nnf(f->lhs, false), nnf(f->rhs, false));
    case LtlKind::Imply:  // a => b  ==  !a | b
      return negated ? f_and(nnf(f->lhs, false), nnf(f->rhs, true))
                     : f_or(nnf(f->lhs, true), nnf(f->rhs, false));
    case LtlKind::Next: return next(nnf(f->lhs, negated));
    case LtlKind::Until:
      return negated ? release(nnf(f->lhs, true), nnf(f->rhs, true))
                     : until(nnf(f->lhs, false), nnf(f->rhs, false));
    case LtlKind::Release:
      return negated ? until(nnf(f->lhs, true), nnf(f->rhs, true))
                     : release(nnf(f->lhs, false), nnf(f->rhs, false));
    case LtlKind::Eventually:
      return negated ? always(nnf(f->lhs, true)) : eventually(nnf(f->lhs, false));
    case LtlKind::Always:
      return negated ? eventually(nnf(f->lhs, true)) : always(nnf(f->lhs, false));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

LtlPtr to_nnf(const LtlPtr& f) { return nnf(f, false); }

CosafetyVerdict check_cosafe(const LtlPtr& f) {
  const LtlPtr n = to_nnf(f);
  CosafetyVerdict verdict;
  std::vector<LtlPtr> work{n};
  while (!work.empty()) {
    LtlPtr cur = work.back();
    work.pop_back();
    if (cur->kind == LtlKind::Always || cur->kind == LtlKind::Release) {
      verdict.is_cosafe = false;
      verdict.offending_subformula = print_prefix(cur);
      verdict.reason = cur->kind == LtlKind::Always ? CosafetyReason::AlwaysOperator
                                                    : CosafetyReason::NegationOnCompound;
      return verdict;
    }
    if (cur->kind == LtlKind::Not && cur->lhs->kind != LtlKind::Atom) {
      verdict.is_cosafe = false;
      verdict.offending_subformula = print_prefix(cur);
      verdict.reason = CosafetyReason::NegationOnCompound;
      return verdict;
    }
    if (cur->lhs) work.push_back(cur->lhs);
    if (cur->rhs) work.push_back(cur->rhs);
  }
  return verdict;
}

namespace {

// Good-prefix satisfaction on the prefix word[0:limit]: position i == limit
// means "past the known prefix", where nothing can be asserted about atoms.
// Fixpoint operators collapse there: U and F to their right/only argument
// (a finite word has nothing left to witness).
bool sat(const LtlPtr& f, const Word& w, size_t i, size_t limit) {
  const bool end = i == limit;
  switch (f->kind) {
    case LtlKind::True: return true;
    case LtlKind::False: return false;
    case LtlKind::Atom: return !end && w[i].count(f->atom) != 0;
    case LtlKind::Not:
      if (f->lhs->kind != LtlKind::Atom)
        throw std::logic_error("eval_trace expects NNF input");
      return !end && w[i].count(f->lhs->atom) == 0;
    case LtlKind::And: return sat(f->lhs, w, i, limit) && sat(f->rhs, w, i, limit);
    case LtlKind::Or: return sat(f->lhs, w, i, limit) || sat(f->rhs, w, i, limit);
    case LtlKind::Imply: throw std::logic_error("eval_trace expects NNF input");
    case LtlKind::Next: return end ? sat(f->lhs, w, i, limit) : sat(f->lhs, w, i + 1, limit);
    case LtlKind::Until:
      if (end) return sat(f->rhs, w, i, limit);
      return sat(f->rhs, w, i, limit) || (sat(f->lhs, w, i, limit) && sat(f, w, i + 1, limit));
    case LtlKind::Eventually:
      if (end) return sat(f->lhs, w, i, limit);
      return sat(f->lhs, w, i, limit) || sat(f, w, i + 1, limit);
    case LtlKind::Release:
    case LtlKind::Always: throw std::logic_error("eval_trace requires a co-safe formula");
  }
  return false;
}

}  // namespace

TraceOracle::TraceOracle(const LtlPtr& f) {
  CosafetyVerdict v = check_cosafe(f);
  if (!v.is_cosafe)
    throw NotCosafeError("eval_trace: formula is not co-safe: " +
                         v.offending_subformula.value_or(""));
  nnf_ = to_nnf(f);
}

bool TraceOracle::operator()(const Word& word) const {
  // Disjunction over prefixes: good-prefix satisfaction is monotone in the
  // prefix, so scan from the longest one down and return on the first hit.
  for (size_t t = word.size() + 1; t-- > 0;) {
    if (sat(nnf_, word, 0, t)) return true;
  }
  return false;
}

bool eval_trace(const LtlPtr& f, const Word& word) { return TraceOracle(f)(word); }

std::vector<LtlPtr> parse_formula_file(const std::string& path, const Alphabet& alphabet) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open formula file: " + path);
  std::vector<LtlPtr> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) continue;
    out.push_back(parse_prefix(line, alphabet));
  }
  return out;
}

}  // namespace sgplan
