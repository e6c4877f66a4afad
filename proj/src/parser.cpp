#include "csr/parser.hpp"

#include <cctype>

namespace csr {

namespace {

struct Token {
    enum Kind { LParen, RParen, Comma, Atom, End };
    Kind kind = End;
    std::string text;
    int line = 0;
    int col = 0;
    bool adjacent = false;  // no whitespace between this token and the previous one
};

bool atom_char(char c) {
    return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != ',' &&
           c != ';';
}

std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    size_t i = 0;
    bool gap = true;
    auto advance = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    };
    while (i < text.size()) {
        const char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            gap = true;
            advance(c);
            continue;
        }
        if (c == ';') {  // line comment
            while (i < text.size() && text[i] != '\n') advance(text[i]);
            gap = true;
            continue;
        }
        Token tok;
        tok.line = line;
        tok.col = col;
        tok.adjacent = !gap;
        if (c == '(' || c == ')' || c == ',') {
            tok.kind = c == '(' ? Token::LParen : c == ')' ? Token::RParen : Token::Comma;
            tok.text = c;
            advance(c);
        } else {
            tok.kind = Token::Atom;
            while (i < text.size() && atom_char(text[i])) {
                tok.text += text[i];
                advance(text[i]);
            }
        }
        gap = false;
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = Token::End;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

[[noreturn]] void fail(const Token& at, const std::string& message) {
    throw ParseError(at.line, at.col, message);
}

struct SyntaxTerm {
    std::string name;
    bool applied = false;  // written with parentheses, even if empty
    std::vector<SyntaxTerm> args;
    int line = 0;
    int col = 0;
};

class TokenStream {
public:
    explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

    [[nodiscard]] const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

    const Token& expect(Token::Kind kind, const std::string& what) {
        if (peek().kind != kind) fail(peek(), "expected " + what);
        return next();
    }

    [[nodiscard]] bool at_end() const { return peek().kind == Token::End; }

private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
};

// term := atom | atom '(' [term (',' term)*] ')', parentheses attached only
// when adjacent so rule sequences stay unambiguous.
SyntaxTerm parse_syntax_term(TokenStream& ts) {
    const Token& head = ts.expect(Token::Atom, "a term");
    SyntaxTerm t;
    t.name = head.text;
    t.line = head.line;
    t.col = head.col;
    if (ts.peek().kind == Token::LParen && ts.peek().adjacent) {
        ts.next();
        t.applied = true;
        if (ts.peek().kind != Token::RParen) {
            t.args.push_back(parse_syntax_term(ts));
            while (ts.peek().kind == Token::Comma) {
                ts.next();
                t.args.push_back(parse_syntax_term(ts));
            }
        }
        ts.expect(Token::RParen, "')'");
    }
    return t;
}

struct SyntaxRule {
    SyntaxTerm lhs;
    SyntaxTerm rhs;
};

struct RawFile {
    std::vector<std::pair<std::string, SortKind>> sorts;
    std::vector<std::pair<Symbol, Token>> sig_symbols;
    bool has_sorts = false;
    bool has_sig = false;
    std::vector<std::pair<std::string, std::string>> vars;  // name, sort ("" when unsorted)
    bool has_var = false;
    bool sorted_vars = false;
    std::vector<SyntaxRule> rules;
    bool has_rules = false;
    std::vector<std::pair<SyntaxTerm, Token>> strategy;  // entry with its opening token
    bool has_strategy = false;
};

void parse_sorts_block(TokenStream& ts, RawFile& raw) {
    while (ts.peek().kind == Token::LParen) {
        ts.next();
        const Token& name = ts.expect(Token::Atom, "a sort name");
        const Token& kind = ts.expect(Token::Atom, "'data' or 'codata'");
        if (kind.text != "data" && kind.text != "codata") {
            fail(kind, "expected 'data' or 'codata', got '" + kind.text + "'");
        }
        ts.expect(Token::RParen, "')'");
        raw.sorts.emplace_back(name.text, kind.text == "data" ? SortKind::Data : SortKind::Codata);
    }
}

void parse_sig_block(TokenStream& ts, RawFile& raw) {
    while (ts.peek().kind == Token::LParen) {
        ts.next();
        const Token& name = ts.expect(Token::Atom, "a symbol name");
        std::vector<std::string> parts;
        while (ts.peek().kind == Token::Atom) parts.push_back(ts.next().text);
        ts.expect(Token::RParen, "')'");
        if (parts.size() < 2 || parts[parts.size() - 2] != "->") {
            fail(name, "signature entry for '" + name.text + "' needs '<arg sorts> -> <result sort>'");
        }
        Symbol sym;
        sym.name = name.text;
        sym.arg_sorts.assign(parts.begin(), parts.end() - 2);
        for (const auto& a : sym.arg_sorts) {
            if (a == "->") fail(name, "stray '->' in signature entry for '" + name.text + "'");
        }
        sym.result_sort = parts.back();
        raw.sig_symbols.emplace_back(std::move(sym), name);
    }
}

void parse_var_block(TokenStream& ts, RawFile& raw) {
    if (ts.peek().kind == Token::LParen) {
        raw.sorted_vars = true;
        while (ts.peek().kind == Token::LParen) {
            ts.next();
            const Token& name = ts.expect(Token::Atom, "a variable name");
            const Token& sort = ts.expect(Token::Atom, "a sort name");
            ts.expect(Token::RParen, "')'");
            raw.vars.emplace_back(name.text, sort.text);
        }
    } else {
        while (ts.peek().kind == Token::Atom) {
            raw.vars.emplace_back(ts.next().text, "");
        }
    }
}

void parse_rules_block(TokenStream& ts, RawFile& raw) {
    while (ts.peek().kind == Token::Atom) {
        SyntaxRule rule;
        rule.lhs = parse_syntax_term(ts);
        const Token& arrow = ts.peek();
        if (arrow.kind != Token::Atom || arrow.text != "->") {
            fail(arrow, "expected '->' after a left-hand side");
        }
        ts.next();
        rule.rhs = parse_syntax_term(ts);
        raw.rules.push_back(std::move(rule));
    }
}

void parse_strategy_block(TokenStream& ts, RawFile& raw) {
    const Token& kw = ts.expect(Token::Atom, "a strategy name");
    if (kw.text != "CONTEXTSENSITIVE") {
        fail(kw, "unsupported strategy '" + kw.text + "'");
    }
    while (ts.peek().kind == Token::LParen) {
        const Token open = ts.peek();
        ts.next();
        SyntaxTerm entry;
        const Token& name = ts.expect(Token::Atom, "a symbol name");
        entry.name = name.text;
        entry.line = name.line;
        entry.col = name.col;
        while (ts.peek().kind == Token::Atom) {
            SyntaxTerm idx;
            const Token& t = ts.next();
            idx.name = t.text;
            idx.line = t.line;
            idx.col = t.col;
            entry.args.push_back(std::move(idx));
        }
        ts.expect(Token::RParen, "')'");
        raw.strategy.emplace_back(std::move(entry), open);
    }
}

// ==== elaboration ====

class Elaborator {
public:
    Elaborator(const Signature& sig, const std::map<std::string, std::string>& vars)
        : sig_(sig), vars_(vars) {}

    TermPtr term(const SyntaxTerm& st) const {
        auto v = vars_.find(st.name);
        if (v != vars_.end()) {
            if (st.applied) {
                throw ParseError(st.line, st.col, "variable '" + st.name + "' used with arguments");
            }
            return Term::var(st.name, v->second);
        }
        const Symbol* sym = sig_.find_symbol(st.name);
        if (!sym) throw ParseError(st.line, st.col, "unknown symbol '" + st.name + "'");
        if (static_cast<int>(st.args.size()) != sym->arity()) {
            throw ParseError(st.line, st.col,
                             "symbol '" + st.name + "' expects " + std::to_string(sym->arity()) +
                                 " arguments, got " + std::to_string(st.args.size()));
        }
        std::vector<TermPtr> args;
        args.reserve(st.args.size());
        for (size_t i = 0; i < st.args.size(); ++i) {
            TermPtr a = term(st.args[i]);
            if (a->sort() != sym->arg_sorts[i]) {
                throw ParseError(st.args[i].line, st.args[i].col,
                                 "argument " + std::to_string(i + 1) + " of '" + st.name +
                                     "' has sort " + a->sort() + ", expected " +
                                     sym->arg_sorts[i]);
            }
            args.push_back(std::move(a));
        }
        return Term::app_raw(st.name, sym->result_sort, std::move(args));
    }

private:
    const Signature& sig_;
    const std::map<std::string, std::string>& vars_;
};

// Collects symbol arities from use, in first-use order.
void infer_symbols(const SyntaxTerm& st, const std::map<std::string, std::string>& vars,
                   std::vector<Symbol>& out, std::map<std::string, int>& arity) {
    if (vars.count(st.name)) {
        if (st.applied) {
            throw ParseError(st.line, st.col, "variable '" + st.name + "' used with arguments");
        }
        return;
    }
    const int n = static_cast<int>(st.args.size());
    auto it = arity.find(st.name);
    if (it == arity.end()) {
        arity[st.name] = n;
        Symbol sym;
        sym.name = st.name;
        sym.arg_sorts.assign(static_cast<size_t>(n), Signature::kUnsortedSort);
        sym.result_sort = Signature::kUnsortedSort;
        out.push_back(std::move(sym));
    } else if (it->second != n) {
        throw ParseError(st.line, st.col, "symbol '" + st.name + "' used with " + std::to_string(n) +
                                              " arguments, previously " + std::to_string(it->second));
    }
    for (const auto& a : st.args) infer_symbols(a, vars, out, arity);
}

RawFile parse_blocks(TokenStream& ts) {
    RawFile raw;
    while (!ts.at_end()) {
        ts.expect(Token::LParen, "'(' opening a block");
        const Token& name = ts.expect(Token::Atom, "a block name");
        bool* flag = nullptr;
        if (name.text == "SORTS") {
            flag = &raw.has_sorts;
            parse_sorts_block(ts, raw);
        } else if (name.text == "SIG") {
            flag = &raw.has_sig;
            parse_sig_block(ts, raw);
        } else if (name.text == "VAR") {
            flag = &raw.has_var;
            parse_var_block(ts, raw);
        } else if (name.text == "RULES") {
            flag = &raw.has_rules;
            parse_rules_block(ts, raw);
        } else if (name.text == "STRATEGY") {
            flag = &raw.has_strategy;
            parse_strategy_block(ts, raw);
        } else if (name.text == "COMMENT") {
            int depth = 1;
            while (depth > 0) {
                const Token& t = ts.next();
                if (t.kind == Token::End) fail(t, "unterminated COMMENT block");
                if (t.kind == Token::LParen) ++depth;
                if (t.kind == Token::RParen) --depth;
            }
            continue;  // closing paren consumed above
        } else {
            fail(name, "unknown block '" + name.text + "'");
        }
        if (flag) {
            if (*flag) fail(name, "duplicate " + name.text + " block");
            *flag = true;
        }
        ts.expect(Token::RParen, "')' closing the " + name.text + " block");
    }
    return raw;
}

}  // namespace

ParsedFile parse_file(const std::string& text) {
    TokenStream ts(tokenize(text));
    RawFile raw = parse_blocks(ts);

    if (raw.has_sorts != raw.has_sig) {
        throw ParseError(1, 1, raw.has_sorts ? "SORTS block without SIG block"
                                             : "SIG block without SORTS block");
    }
    if (!raw.has_rules) throw ParseError(1, 1, "missing RULES block");
    const bool sorted = raw.has_sorts;
    if (!sorted && raw.sorted_vars) {
        throw ParseError(1, 1, "sorted VAR block requires SORTS and SIG blocks");
    }

    Signature sig;
    std::map<std::string, std::string> vars;
    if (sorted) {
        for (const auto& [n, k] : raw.sorts) sig.add_sort(Sort{n, k});
        sig.set_sorts_declared(true);
        for (auto& [sym, tok] : raw.sig_symbols) {
            try {
                sig.add_symbol(sym);
            } catch (const TermError& e) {
                fail(tok, e.what());
            }
        }
        for (const auto& [n, s] : raw.vars) {
            if (s.empty()) throw ParseError(1, 1, "variable '" + n + "' needs a sort");
            if (!sig.find_sort(s)) throw ParseError(1, 1, "variable '" + n + "' has unknown sort " + s);
            if (sig.has_symbol(n)) throw ParseError(1, 1, "'" + n + "' is both a symbol and a variable");
            if (!vars.emplace(n, s).second) throw ParseError(1, 1, "duplicate variable '" + n + "'");
        }
    } else {
        sig = Signature::unsorted();
        for (const auto& [n, s] : raw.vars) {
            (void)s;
            if (!vars.emplace(n, std::string(Signature::kUnsortedSort)).second) {
                throw ParseError(1, 1, "duplicate variable '" + n + "'");
            }
        }
        std::vector<Symbol> inferred;
        std::map<std::string, int> arity;
        for (const auto& r : raw.rules) {
            infer_symbols(r.lhs, vars, inferred, arity);
            infer_symbols(r.rhs, vars, inferred, arity);
        }
        for (auto& sym : inferred) sig.add_symbol(sym);
    }

    Elaborator elab(sig, vars);
    std::vector<Rule> rules;
    for (const auto& r : raw.rules) {
        Rule rule;
        rule.lhs = elab.term(r.lhs);
        rule.rhs = elab.term(r.rhs);
        rules.push_back(std::move(rule));
    }

    ParsedFile out;
    try {
        out.trs = Trs::make(std::move(sig), std::move(rules));
    } catch (const TermError& e) {
        throw ParseError(1, 1, e.what());
    }
    out.vars = std::move(vars);

    if (raw.has_strategy) {
        ReplacementMap mu = ReplacementMap::bottom(out.trs.signature());
        for (const auto& [entry, open] : raw.strategy) {
            std::set<int> ps;
            for (const auto& idx : entry.args) {
                for (char c : idx.name) {
                    if (!std::isdigit(static_cast<unsigned char>(c))) {
                        throw ParseError(idx.line, idx.col,
                                         "expected an argument index, got '" + idx.name + "'");
                    }
                }
                ps.insert(std::stoi(idx.name));
            }
            try {
                mu.set(out.trs.signature(), entry.name, std::move(ps));
            } catch (const Error& e) {
                throw ParseError(open.line, open.col, e.what());
            }
        }
        out.strategy = std::move(mu);
    }
    return out;
}

TermPtr parse_term(const std::string& text, const Signature& sig,
                   const std::map<std::string, std::string>& vars) {
    TokenStream ts(tokenize(text));
    SyntaxTerm st = parse_syntax_term(ts);
    if (!ts.at_end()) fail(ts.peek(), "trailing input after term");
    return Elaborator(sig, vars).term(st);
}

namespace {

std::string term_text(const TermPtr& t) { return t->to_string(); }

}  // namespace

std::string print_file(const Trs& R, const ReplacementMap* strategy) {
    const Signature& sig = R.signature();
    std::string out;
    if (sig.sorts_declared()) {
        out += "(SORTS";
        for (const auto& s : sig.sorts()) {
            out += "\n  (" + s.name + (s.kind == SortKind::Data ? " data)" : " codata)");
        }
        out += ")\n(SIG";
        for (const auto& sym : sig.symbols()) {
            out += "\n  (" + sym.name;
            for (const auto& a : sym.arg_sorts) out += " " + a;
            out += " -> " + sym.result_sort + ")";
        }
        out += ")\n";
    }
    std::map<std::string, std::string> vars;
    for (const auto& r : R.rules()) {
        auto lv = variables_of(r.lhs);
        vars.insert(lv.begin(), lv.end());
    }
    if (!vars.empty()) {
        out += "(VAR";
        if (sig.sorts_declared()) {
            for (const auto& [n, s] : vars) out += "\n  (" + n + " " + s + ")";
        } else {
            for (const auto& [n, s] : vars) {
                (void)s;
                out += " " + n;
            }
        }
        out += ")\n";
    }
    out += "(RULES";
    for (const auto& r : R.rules()) {
        out += "\n  " + term_text(r.lhs) + " -> " + term_text(r.rhs);
    }
    out += ")\n";
    if (strategy) {
        out += "(STRATEGY CONTEXTSENSITIVE";
        for (const auto& sym : sig.symbols()) {
            const auto& ps = strategy->at(sym.name);
            if (ps.empty()) continue;
            out += "\n  (" + sym.name;
            for (int i : ps) out += " " + std::to_string(i);
            out += ")";
        }
        out += ")\n";
    }
    return out;
}

}  // namespace csr
