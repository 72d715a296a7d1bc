#ifndef ENDSPACE_BASE_HPP
#define ENDSPACE_BASE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace endspace {

// Answers about infinite structures are either final or window-limited.
// Provisional never silently upgrades: any value derived from a Provisional
// answer is itself Provisional.
enum class Certainty { Exact, Provisional };

inline Certainty weakest(Certainty a, Certainty b) {
    return (a == Certainty::Provisional || b == Certainty::Provisional)
               ? Certainty::Provisional
               : Certainty::Exact;
}

inline const char* to_string(Certainty c) {
    return c == Certainty::Exact ? "exact" : "provisional";
}

// A count that may be infinite.  value is meaningful only when finite.
struct Card {
    bool infinite = false;
    std::uint64_t value = 0;

    static Card fin(std::uint64_t v) { return Card{false, v}; }
    static Card inf() { return Card{true, 0}; }

    bool operator==(const Card& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
};

inline std::string to_string(const Card& c) {
    return c.infinite ? std::string("inf") : std::to_string(c.value);
}

enum class Err {
    UnknownVertex,
    UnknownEdge,
    UnknownComponent,
    UnknownBuiltin,
    DuplicateId,
    LoopForbidden,
    DuplicateQuotientEdge,
    EmptySide,
    SideNotClassAligned,
    NotStronglyConnected,
    BadParams,
    SyntaxError,
    SemanticError,
    NonSolidAtLevel,
    DepthExceeded,
    LevelMismatch,
    EulerConditionFailed,
    BoundExceeded,
    Internal,
};

inline const char* to_string(Err e) {
    switch (e) {
    case Err::UnknownVertex: return "unknown_vertex";
    case Err::UnknownEdge: return "unknown_edge";
    case Err::UnknownComponent: return "unknown_component";
    case Err::UnknownBuiltin: return "unknown_builtin";
    case Err::DuplicateId: return "duplicate_id";
    case Err::LoopForbidden: return "loop_forbidden";
    case Err::DuplicateQuotientEdge: return "duplicate_quotient_edge";
    case Err::EmptySide: return "empty_side";
    case Err::SideNotClassAligned: return "side_not_class_aligned";
    case Err::NotStronglyConnected: return "not_strongly_connected";
    case Err::BadParams: return "bad_params";
    case Err::SyntaxError: return "syntax_error";
    case Err::SemanticError: return "semantic_error";
    case Err::NonSolidAtLevel: return "non_solid_at_level";
    case Err::DepthExceeded: return "depth_exceeded";
    case Err::LevelMismatch: return "level_mismatch";
    case Err::EulerConditionFailed: return "euler_condition_failed";
    case Err::BoundExceeded: return "bound_exceeded";
    case Err::Internal: return "internal";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    Err code() const { return code_; }

    // CLI exit code contract: 2 invalid input, 3 bound/solidity, 4 internal.
    int exit_code() const {
        switch (code_) {
        case Err::NonSolidAtLevel:
        case Err::BoundExceeded:
        case Err::DepthExceeded:
            return 3;
        case Err::Internal:
            return 4;
        default:
            return 2;
        }
    }

private:
    Err code_;
};

// Thrown when a structural invariant that the implementation itself
// guarantees is observed broken.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& msg) : Error(Err::Internal, msg) {}
};

class NotStronglyConnectedError : public Error {
public:
    NotStronglyConnectedError(std::string from, std::string to, std::size_t level)
        : Error(Err::NotStronglyConnected,
                "not strongly connected: no path from " + from + " to " + to),
          from_(std::move(from)), to_(std::move(to)), level_(level) {}
    const std::string& from() const { return from_; }
    const std::string& to() const { return to_; }
    std::size_t level() const { return level_; }

private:
    std::string from_, to_;
    std::size_t level_;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, std::size_t col, const std::string& what)
        : Error(Err::SyntaxError,
                "syntax error at line " + std::to_string(line) + ", column " +
                    std::to_string(col) + ": " + what),
          line_(line), col_(col) {}
    std::size_t line() const { return line_; }
    std::size_t col() const { return col_; }

private:
    std::size_t line_, col_;
};

} // namespace endspace

#endif
