#pragma once

#include <optional>
#include <string>

#include "csr/repmap.hpp"
#include "csr/term.hpp"

namespace csr {

/// Syntax or elaboration error with a source location (1-based line and column).
class ParseError : public Error {
public:
    ParseError(int line, int col, const std::string& message)
        : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + message),
          line_(line),
          col_(col) {}

    [[nodiscard]] int line() const { return line_; }
    [[nodiscard]] int col() const { return col_; }

private:
    int line_;
    int col_;
};

struct ParsedFile {
    Trs trs;
    /// Map from the STRATEGY CONTEXTSENSITIVE block, if present.
    std::optional<ReplacementMap> strategy;
    /// Declared variables (name to sort), for parsing further terms.
    std::map<std::string, std::string> vars;
};

/**
 * @brief Parses the parenthesized rule-file format.
 *
 * Sorted mode (SORTS and SIG blocks present) checks every term against the
 * declared signature. Without them the file is classic style: variables come
 * from the VAR block, all other symbols are inferred from use over the single
 * data sort "U", with consistent arities required.
 */
[[nodiscard]] ParsedFile parse_file(const std::string& text);

/// Parses one term in the file's term syntax against an elaborated signature.
[[nodiscard]] TermPtr parse_term(const std::string& text, const Signature& sig,
                                 const std::map<std::string, std::string>& vars);

/// Serializes to the normalized file form; parse_file inverts it.
[[nodiscard]] std::string print_file(const Trs& R, const ReplacementMap* strategy = nullptr);

}  // namespace csr
