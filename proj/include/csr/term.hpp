#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace csr {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class TermError : public Error {
public:
    explicit TermError(const std::string& what) : Error(what) {}
};

// ==== sorts and signatures ====

enum class SortKind { Data, Codata };

struct Sort {
    std::string name;
    SortKind kind = SortKind::Data;
};

enum class SymbolKind { Constructor, Defined };

struct Symbol {
    std::string name;
    std::vector<std::string> arg_sorts;
    std::string result_sort;
    // Constructor until a rule set marks the symbol as a rule root.
    SymbolKind kind = SymbolKind::Constructor;

    [[nodiscard]] int arity() const { return static_cast<int>(arg_sorts.size()); }
};

/**
 * @brief Sorted signature: sorts partitioned into data/codata plus ranked symbols.
 *
 * Unsorted inputs are elaborated over the single data sort "U"; sorts_declared()
 * reports whether the original input carried sort information.
 */
class Signature {
public:
    static constexpr const char* kUnsortedSort = "U";

    Signature() = default;

    /// Builds the one-sort signature used for unsorted input.
    static Signature unsorted();

    void add_sort(Sort s);
    void add_symbol(Symbol s);

    [[nodiscard]] bool sorts_declared() const { return sorts_declared_; }
    void set_sorts_declared(bool v) { sorts_declared_ = v; }

    [[nodiscard]] const std::vector<Sort>& sorts() const { return sorts_; }
    [[nodiscard]] const std::vector<Symbol>& symbols() const { return symbols_; }

    [[nodiscard]] const Sort* find_sort(const std::string& name) const;
    [[nodiscard]] const Symbol* find_symbol(const std::string& name) const;
    [[nodiscard]] const Symbol& symbol_or_throw(const std::string& name) const;
    [[nodiscard]] bool has_symbol(const std::string& name) const { return find_symbol(name) != nullptr; }

    /// Constructors whose result sort is `sort`, in declaration order.
    [[nodiscard]] std::vector<const Symbol*> constructors_of(const std::string& sort) const;

    /// Marks every symbol in `defined` as Defined, the rest as Constructor.
    void classify(const std::set<std::string>& defined);

    [[nodiscard]] bool operator==(const Signature& other) const;

private:
    std::vector<Sort> sorts_;
    std::vector<Symbol> symbols_;
    std::map<std::string, int> sort_index_;
    std::map<std::string, int> symbol_index_;
    bool sorts_declared_ = false;
};

// ==== terms ====

class Term;
using TermPtr = std::shared_ptr<const Term>;

/**
 * @brief Immutable first-order term: a sorted variable or a symbol application.
 *
 * Application nodes cache the result sort and node count. Structural equality;
 * sharing is safe because nodes are never mutated after construction.
 */
class Term {
public:
    static TermPtr var(std::string name, std::string sort);

    /// Checked construction: validates arity and argument sorts against `sig`.
    static TermPtr app(const Signature& sig, const std::string& symbol, std::vector<TermPtr> args);

    /// Unchecked construction for callers that maintain well-sortedness themselves.
    static TermPtr app_raw(std::string symbol, std::string sort, std::vector<TermPtr> args);

    [[nodiscard]] bool is_var() const { return is_var_; }
    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] const std::string& sort() const { return sort_; }
    [[nodiscard]] const std::vector<TermPtr>& args() const { return args_; }
    [[nodiscard]] int size() const { return size_; }
    [[nodiscard]] int depth() const { return depth_; }

    [[nodiscard]] std::string to_string() const;

private:
    Term() = default;

    bool is_var_ = false;
    std::string name_;
    std::string sort_;
    std::vector<TermPtr> args_;
    int size_ = 1;
    int depth_ = 1;
};

[[nodiscard]] bool equal(const TermPtr& a, const TermPtr& b);

/// Variable names of t mapped to their sorts.
[[nodiscard]] std::map<std::string, std::string> variables_of(const TermPtr& t);

/// True when no variable occurs twice in t.
[[nodiscard]] bool is_linear(const TermPtr& t);

[[nodiscard]] bool is_ground(const TermPtr& t);

/// Appends `suffix` to every variable name.
[[nodiscard]] TermPtr rename_vars(const TermPtr& t, const std::string& suffix);

// ==== positions ====

/**
 * @brief Path from the root of a term: a sequence of 1-based argument indices.
 *
 * The root position renders as "e", all others dot-separated ("1.2").
 */
class Position {
public:
    Position() = default;
    explicit Position(std::vector<int> path) : path_(std::move(path)) {}

    static Position root() { return Position{}; }

    [[nodiscard]] const std::vector<int>& path() const { return path_; }
    [[nodiscard]] bool is_root() const { return path_.empty(); }
    [[nodiscard]] size_t length() const { return path_.size(); }

    [[nodiscard]] Position child(int i) const;
    [[nodiscard]] Position concat(const Position& q) const;
    [[nodiscard]] bool is_prefix_of(const Position& q) const;

    [[nodiscard]] std::string to_string() const;
    [[nodiscard]] static std::optional<Position> parse(const std::string& text);

    [[nodiscard]] bool operator==(const Position& other) const { return path_ == other.path_; }
    [[nodiscard]] auto operator<=>(const Position& other) const { return path_ <=> other.path_; }

private:
    std::vector<int> path_;
};

/// Outermost-leftmost order: a prefix precedes its extensions.
[[nodiscard]] bool preorder_less(const Position& a, const Position& b);

/// Innermost-leftmost order: extensions precede their prefix.
[[nodiscard]] bool postorder_less(const Position& a, const Position& b);

/// All positions of t in preorder.
[[nodiscard]] std::vector<Position> positions(const TermPtr& t);

/// Positions of non-variable subterms (preorder).
[[nodiscard]] std::vector<Position> positions_nonvar(const TermPtr& t);

/// Positions of variable occurrences (preorder).
[[nodiscard]] std::vector<Position> positions_var(const TermPtr& t);

[[nodiscard]] bool valid_position(const TermPtr& t, const Position& p);

/// Subterm of t at p; throws TermError for invalid positions.
[[nodiscard]] TermPtr subterm_at(const TermPtr& t, const Position& p);

/// t with the subterm at p replaced by s; sorts must agree.
[[nodiscard]] TermPtr replace_at(const TermPtr& t, const Position& p, const TermPtr& s);

// ==== substitutions ====

/**
 * @brief Finite map from variable names to terms; sort-preserving by construction.
 */
class Substitution {
public:
    /// Adds a binding. Returns false on a conflicting existing binding.
    /// Throws TermError if the value's sort differs from `var_sort`.
    bool bind(const std::string& var, const std::string& var_sort, const TermPtr& value);

    [[nodiscard]] const TermPtr* lookup(const std::string& var) const;
    [[nodiscard]] TermPtr apply(const TermPtr& t) const;

    [[nodiscard]] bool empty() const { return map_.empty(); }
    [[nodiscard]] size_t size() const { return map_.size(); }
    [[nodiscard]] const std::map<std::string, TermPtr>& entries() const { return map_; }

private:
    std::map<std::string, TermPtr> map_;
};

/// Matches `pattern` against `subject` (non-linear patterns supported).
[[nodiscard]] std::optional<Substitution> match(const TermPtr& pattern, const TermPtr& subject);

/// Most general unifier with occurs check; nullopt when none exists.
[[nodiscard]] std::optional<Substitution> unify(const TermPtr& a, const TermPtr& b);

// ==== rules and rewrite systems ====

struct Rule {
    std::string label;
    TermPtr lhs;
    TermPtr rhs;
};

/**
 * @brief A sorted term rewriting system over a fixed signature.
 *
 * Construction validates the rule invariants (left-hand sides are non-variable,
 * right-hand variables occur on the left, both sides share a sort) and classifies
 * symbols: defined symbols are exactly the rule roots. Immutable after make().
 */
class Trs {
public:
    static Trs make(Signature sig, std::vector<Rule> rules);

    [[nodiscard]] const Signature& signature() const { return sig_; }
    [[nodiscard]] const std::vector<Rule>& rules() const { return rules_; }

    [[nodiscard]] bool is_defined(const std::string& symbol) const;
    [[nodiscard]] bool is_constructor(const std::string& symbol) const;
    [[nodiscard]] const Rule* rule_by_label(const std::string& label) const;

    /// Rules whose left-hand side is rooted by `symbol`, in rule order.
    [[nodiscard]] std::vector<const Rule*> rules_of(const std::string& symbol) const;

private:
    Signature sig_;
    std::vector<Rule> rules_;
};

[[nodiscard]] bool trs_equal(const Trs& a, const Trs& b);

/// Rule equality up to a bijective renaming of variables.
[[nodiscard]] bool alpha_equal_rule(const Rule& a, const Rule& b);

struct CriticalPair {
    TermPtr left;
    TermPtr right;
    std::string outer_rule;  // rule whose lhs was overlapped
    std::string inner_rule;  // rule unified into it
    Position at;
};

/**
 * @brief All critical pairs of R, from unifying each rule's lhs into every
 * non-variable position of every rule's lhs (rules renamed apart; the trivial
 * root overlap of a rule with itself is skipped).
 */
[[nodiscard]] std::vector<CriticalPair> critical_pairs(const Trs& R);

}  // namespace csr
