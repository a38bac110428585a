#include "groupexpr.hpp"

#include <cctype>

namespace nilmult {

namespace {

struct Cursor {
    std::string_view text;
    std::size_t pos = 0;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void skip_ws() {
        while (!done() && (peek() == ' ' || peek() == '\t')) ++pos;
    }

    bool consume(char c) {
        if (done() || peek() != c) return false;
        ++pos;
        return true;
    }

    // digit+, returned as decimal text
    std::string_view digits() {
        std::size_t start = pos;
        while (!done() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos;
        if (pos == start) throw ParseError(start, "expected a number");
        return text.substr(start, pos - start);
    }
};

}  // namespace

GroupSpec parse_group_expr(std::string_view text) {
    Cursor cur{text};
    GroupSpec spec;

    auto factor = [&] {
        cur.skip_ws();
        std::size_t start = cur.pos;
        if (!cur.consume('Z')) throw ParseError(start, "expected 'Z' or 'Z/<order>'");
        if (cur.consume('/')) {
            std::size_t num_at = cur.pos;
            Int order(std::string(cur.digits()));
            if (order < 2) throw ParseError(num_at, "finite order must be at least 2");
            spec.orders.push_back(order);
        } else {
            spec.orders.push_back(0);
        }
    };

    factor();
    while (true) {
        cur.skip_ws();
        if (cur.done()) break;
        std::size_t op_at = cur.pos;
        if (!cur.consume('*')) throw ParseError(op_at, "expected '*[<class>]' between factors");
        if (!cur.consume('[')) throw ParseError(cur.pos, "expected '[' after '*'");
        std::size_t num_at = cur.pos;
        std::string_view num = cur.digits();
        if (num.size() > 9) throw ParseError(num_at, "class out of range");
        unsigned long cls = std::stoul(std::string(num));
        if (cls == 0) throw ParseError(num_at, "class must be positive");
        if (!cur.consume(']')) throw ParseError(cur.pos, "expected ']' after class");
        spec.classes.push_back(static_cast<unsigned>(cls));
        factor();
    }
    return spec;
}

}  // namespace nilmult
