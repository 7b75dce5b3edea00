#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgplan {

/// An atomic proposition grounded in a scene attribute. The attribute_id is
/// the token used in formula text (canonically "p<ID>"); display_name carries
/// the human-readable label ("bedroom 2").
struct Proposition {
  std::string attribute_id;
  std::string display_name;
};

enum class LtlKind {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Imply,
  Next,
  Until,
  Release,  // never parsed; produced by NNF of a negated Until
  Eventually,
  Always,
};

struct LtlNode;
using LtlPtr = std::shared_ptr<const LtlNode>;

struct LtlNode {
  LtlKind kind;
  std::string atom;  // set for Atom only
  LtlPtr lhs;        // first child (unary operators use lhs)
  LtlPtr rhs;        // second child (binary operators only)
};

namespace ltl {
LtlPtr make_true();
LtlPtr make_false();
LtlPtr atom(std::string id);
LtlPtr f_not(LtlPtr a);
LtlPtr f_and(LtlPtr a, LtlPtr b);
LtlPtr f_or(LtlPtr a, LtlPtr b);
LtlPtr imply(LtlPtr a, LtlPtr b);
LtlPtr next(LtlPtr a);
LtlPtr until(LtlPtr a, LtlPtr b);
LtlPtr release(LtlPtr a, LtlPtr b);
LtlPtr eventually(LtlPtr a);
LtlPtr always(LtlPtr a);
}  // namespace ltl

bool equal(const LtlPtr& a, const LtlPtr& b);
int compare(const LtlPtr& a, const LtlPtr& b);  // total order for canonical sorting

/// Propositions appearing in the formula, sorted canonically.
std::vector<std::string> props(const LtlPtr& f);

/// Alphabet for parsing: maps accepted token spellings to the canonical
/// proposition. A proposition may have alias tokens (e.g. "oven_11" for "p11").
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(const std::vector<Proposition>& propositions);

  void add(const Proposition& p);
  void add_alias(const std::string& token, const std::string& canonical_id);
  bool contains(const std::string& token) const;
  /// Canonical id for a token; empty optional when unknown.
  std::optional<std::string> resolve(const std::string& token) const;
  const std::vector<Proposition>& propositions() const { return props_; }

 private:
  std::vector<Proposition> props_;
  std::map<std::string, std::string> token_to_id_;
};

enum class ParseErrorKind { UnknownToken, ArityError, TrailingTokens };

class LtlParseError : public std::runtime_error {
 public:
  LtlParseError(ParseErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind(kind) {}
  ParseErrorKind kind;
};

/// Parses whitespace-separated prefix notation. Operator tokens:
///   ! & | => X U F G  plus literals "true"/"false".
LtlPtr parse_prefix(const std::string& text, const Alphabet& alphabet);

std::string print_prefix(const LtlPtr& f);
/// Parenthesized infix form, for logs only.
std::string print_infix(const LtlPtr& f);

/// Negated normal form: Imply eliminated, Not pushed onto atoms. A negated
/// Until introduces Release, which check_cosafe rejects.
LtlPtr to_nnf(const LtlPtr& f);

enum class CosafetyReason { AlwaysOperator, NegationOnCompound };

struct CosafetyVerdict {
  bool is_cosafe = true;
  /// Printed prefix form of the first offending NNF subformula.
  std::optional<std::string> offending_subformula;
  std::optional<CosafetyReason> reason;
};

CosafetyVerdict check_cosafe(const LtlPtr& f);

class NotCosafeError : public std::runtime_error {
 public:
  explicit NotCosafeError(const std::string& what) : std::runtime_error(what) {}
};

/// A label: set of proposition ids true at one position of a word.
using LabelSet = std::set<std::string>;
using Word = std::vector<LabelSet>;

/// Finite-trace oracle for co-safe satisfaction: a word satisfies the formula
/// iff some prefix does so under any continuation (good-prefix semantics).
/// Test oracle only; the automaton module is the production path.
bool eval_trace(const LtlPtr& f, const Word& word);

/// Same oracle with the co-safety check and NNF conversion done once, for
/// batch use against millions of words.
class TraceOracle {
 public:
  explicit TraceOracle(const LtlPtr& f);  // throws NotCosafeError
  bool operator()(const Word& word) const;

 private:
  LtlPtr nnf_;
};

/// Reads one prefix-notation formula per line; '#' starts a comment.
std::vector<LtlPtr> parse_formula_file(const std::string& path, const Alphabet& alphabet);

/// Numeric-aware ordering of proposition tokens: "p3" sorts before "p11".
bool prop_less(const std::string& a, const std::string& b);

}  // namespace sgplan
