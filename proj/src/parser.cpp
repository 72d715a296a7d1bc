#include <charconv>
#include <fstream>
#include <sstream>

#include "endspace/source.hpp"
#include "source_detail.hpp"

namespace endspace {
namespace {

struct Token {
    std::string text;
    std::size_t col; // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' &&
               line[i] != '\r' && line[i] != '#')
            ++i;
        out.push_back(Token{line.substr(start, i - start), start + 1});
    }
    return out;
}

long long parse_int(const Token& t, std::size_t line) {
    const char* first = t.text.data();
    const char* last = t.text.data() + t.text.size();
    if (first != last && *first == '+') ++first;
    long long v = 0;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last || first == last)
        throw SyntaxError(line, t.col, "expected an integer, got \"" + t.text + "\"");
    return v;
}

void expect_arity(const std::vector<Token>& toks, std::size_t n,
                  std::size_t line, const std::string& what,
                  std::size_t line_len) {
    if (toks.size() < n)
        throw SyntaxError(line, line_len + 1, what + " needs " +
                                                  std::to_string(n - 1) +
                                                  " arguments");
    if (toks.size() > n)
        throw SyntaxError(line, toks[n].col, "unexpected token \"" +
                                                 toks[n].text + "\"");
}

std::map<std::string, std::string> parse_params(
    const std::vector<Token>& toks, std::size_t first, std::size_t line) {
    std::map<std::string, std::string> params;
    for (std::size_t i = first; i < toks.size(); ++i) {
        const std::string& t = toks[i].text;
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == t.size())
            throw SyntaxError(line, toks[i].col,
                              "expected key=value, got \"" + t + "\"");
        const std::string key = t.substr(0, eq);
        if (params.count(key))
            throw SyntaxError(line, toks[i].col, "duplicate parameter " + key);
        params[key] = t.substr(eq + 1);
    }
    return params;
}

} // namespace

SourcePtr parse_source_text(const std::string& text) {
    std::vector<std::string> lines;
    {
        std::string cur;
        std::istringstream in(text);
        while (std::getline(in, cur)) lines.push_back(cur);
    }

    enum class Mode { None, Finite, Stencil, Builtin };
    Mode mode = Mode::None;
    std::vector<std::pair<std::string, std::string>> finite_edges;
    std::optional<std::size_t> width;
    std::vector<detail::StencilRule> rules;
    SourcePtr builtin;
    std::size_t last_line = 0;

    for (std::size_t li = 0; li < lines.size(); ++li) {
        const std::size_t line = li + 1;
        last_line = line;
        const std::vector<Token> toks = tokenize(lines[li]);
        if (toks.empty()) continue;

        if (mode == Mode::None) {
            if (toks[0].text != "source")
                throw SyntaxError(line, toks[0].col,
                                  "expected a source directive");
            if (toks.size() < 2)
                throw SyntaxError(line, lines[li].size() + 1,
                                  "missing source type");
            const std::string& type = toks[1].text;
            if (type == "finite") {
                expect_arity(toks, 2, line, "source finite", lines[li].size());
                mode = Mode::Finite;
            } else if (type == "stencil") {
                expect_arity(toks, 2, line, "source stencil", lines[li].size());
                mode = Mode::Stencil;
            } else if (type == "builtin") {
                if (toks.size() < 3)
                    throw SyntaxError(line, lines[li].size() + 1,
                                      "missing builtin name");
                builtin = make_builtin(toks[2].text,
                                       parse_params(toks, 3, line));
                mode = Mode::Builtin;
            } else {
                throw SyntaxError(line, toks[1].col,
                                  "unknown source type \"" + type + "\"");
            }
            continue;
        }

        if (mode == Mode::Builtin)
            throw SyntaxError(line, toks[0].col,
                              "unexpected line after builtin directive");

        if (mode == Mode::Finite) {
            if (toks[0].text != "edge")
                throw SyntaxError(line, toks[0].col,
                                  "expected an edge line");
            expect_arity(toks, 3, line, "edge", lines[li].size());
            finite_edges.emplace_back(toks[1].text, toks[2].text);
            continue;
        }

        // Stencil body.
        if (toks[0].text == "width") {
            expect_arity(toks, 2, line, "width", lines[li].size());
            if (width)
                throw SyntaxError(line, toks[0].col, "duplicate width");
            const long long w = parse_int(toks[1], line);
            if (w < 1 || w > 4096)
                throw Error(Err::SemanticError,
                            "stencil width must be in [1,4096]");
            width = static_cast<std::size_t>(w);
        } else if (toks[0].text == "edge") {
            expect_arity(toks, 4, line, "edge", lines[li].size());
            const long long i = parse_int(toks[1], line);
            const long long j = parse_int(toks[2], line);
            const long long d = parse_int(toks[3], line);
            if (i < 0 || j < 0)
                throw Error(Err::SemanticError, "stencil slots must be >= 0");
            if (d < -1 || d > 1)
                throw Error(Err::SemanticError,
                            "stencil offset outside {-1,0,+1}");
            rules.push_back(detail::StencilRule{static_cast<std::size_t>(i),
                                                static_cast<std::size_t>(j),
                                                static_cast<int>(d)});
        } else {
            throw SyntaxError(line, toks[0].col,
                              "expected a width or edge line");
        }
    }

    switch (mode) {
    case Mode::None:
        throw SyntaxError(last_line + 1, 1, "empty source description");
    case Mode::Finite:
        return detail::make_finite_source(finite_edges);
    case Mode::Stencil:
        if (!width)
            throw SyntaxError(last_line + 1, 1, "stencil source needs a width");
        return detail::make_stencil_source(*width, rules);
    case Mode::Builtin:
        return builtin;
    }
    throw InternalError("unreachable source mode");
}

SourcePtr parse_source_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Err::BadParams, "cannot open source file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_source_text(buf.str());
}

SourcePtr resolve_source_spec(const std::string& spec) {
    const std::string prefix = "builtin:";
    if (spec.rfind(prefix, 0) != 0) return parse_source_file(spec);
    std::string rest = spec.substr(prefix.size());
    std::map<std::string, std::string> params;
    const std::size_t paren = rest.find('(');
    if (paren != std::string::npos) {
        if (rest.back() != ')')
            throw Error(Err::BadParams, "malformed builtin spec: " + spec);
        const std::string inner = rest.substr(paren + 1,
                                              rest.size() - paren - 2);
        rest = rest.substr(0, paren);
        std::size_t pos = 0;
        while (pos < inner.size()) {
            std::size_t comma = inner.find(',', pos);
            if (comma == std::string::npos) comma = inner.size();
            const std::string item = inner.substr(pos, comma - pos);
            const std::size_t eq = item.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
                throw Error(Err::BadParams,
                            "malformed builtin parameter: " + item);
            params[item.substr(0, eq)] = item.substr(eq + 1);
            pos = comma + 1;
        }
    }
    if (rest.empty())
        throw Error(Err::BadParams, "missing builtin name in spec: " + spec);
    return make_builtin(rest, params);
}

} // namespace endspace
