#include "justsolve/pgsolver_io.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace pg {

ParseError::ParseError(int line_, int column_, const std::string& what)
    : std::runtime_error("line " + std::to_string(line_) + ":" + std::to_string(column_) + ": " +
                         what),
      line(line_),
      column(column_) {}

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    void skip_space() {
        while (pos_ < text_.size() && is_space(text_[pos_])) advance();
    }

    bool done() {
        skip_space();
        return pos_ >= text_.size();
    }

    bool eat(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            advance();
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!eat(c)) fail(std::string("expected '") + c + "' " + what);
    }

    bool peek_digit() {
        skip_space();
        return pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9';
    }

    long long number(const char* what) {
        skip_space();
        if (!peek_digit()) fail(std::string("expected ") + what);
        long long value = 0;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
            value = value * 10 + (text_[pos_] - '0');
            if (value > 1000000000000LL) fail(std::string(what) + " is out of range");
            advance();
        }
        return value;
    }

    std::string quoted() {
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\n') fail("unterminated name");
            out += text_[pos_];
            advance();
        }
        if (pos_ >= text_.size()) fail("unterminated name");
        advance();  // closing quote
        return out;
    }

    bool eat_word(std::string_view word) {
        skip_space();
        if (text_.substr(pos_).starts_with(word)) {
            for (std::size_t i = 0; i < word.size(); ++i) advance();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, col_, what); }

private:
    static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct RawNode {
    long long id;
    int priority;
    Player owner;
    std::vector<long long> successors;
    std::string name;
    int line, column;
};

}  // namespace

ParityGame parse_game(std::string_view text) {
    Cursor cur(text);
    if (cur.eat_word("parity")) {
        cur.number("max node id");
        cur.expect(';', "after the header");
    }

    std::vector<RawNode> raw;
    std::map<long long, NodeId> index;
    while (!cur.done()) {
        RawNode node{};
        node.id = cur.number("node id");
        long long priority = cur.number("priority");
        long long owner = cur.number("owner");
        if (owner > 1) cur.fail("owner must be 0 or 1");
        node.priority = static_cast<int>(priority);
        node.owner = static_cast<Player>(owner);
        do {
            node.successors.push_back(cur.number("successor id"));
        } while (cur.eat(','));
        if (cur.eat('"')) node.name = cur.quoted();
        cur.expect(';', "after the node record");
        if (!index.emplace(node.id, static_cast<NodeId>(raw.size())).second)
            cur.fail("node " + std::to_string(node.id) + " defined twice");
        raw.push_back(std::move(node));
    }

    std::vector<NodeSpec> specs;
    specs.reserve(raw.size());
    for (const RawNode& node : raw) {
        NodeSpec spec;
        spec.priority = node.priority;
        spec.owner = node.owner;
        spec.name = node.name;
        spec.original_id = node.id;
        for (long long s : node.successors) {
            auto it = index.find(s);
            if (it == index.end())
                throw ParseError(1, 1, "node " + std::to_string(node.id) +
                                           " has an edge to undefined node " + std::to_string(s));
            spec.successors.push_back(it->second);
        }
        specs.push_back(std::move(spec));
    }

    ParityGame game(std::move(specs));
    std::vector<GameViolation> violations = validate_game(game);
    if (!violations.empty()) throw ParseError(1, 1, violations.front().describe(game));
    return game;
}

std::string emit_game(const ParityGame& g) {
    long long max_id = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) max_id = std::max(max_id, g.original_id(v));
    std::string out = "parity " + std::to_string(max_id) + ";\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        out += std::to_string(g.original_id(v)) + " " + std::to_string(g.priority(v)) + " " +
               player_char(g.owner(v));
        bool first = true;
        for (NodeId w : g.successors(v)) {
            out += first ? " " : ",";
            out += std::to_string(g.original_id(w));
            first = false;
        }
        if (!g.name(v).empty()) out += " \"" + g.name(v) + "\"";
        out += ";\n";
    }
    return out;
}

std::string emit_solution(const ParityGame& g, const ParameterMap& p, const Solution& s) {
    std::string out = "paritysol " + std::to_string(g.node_count()) + ";\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        Player w = s.winner[v];
        out += std::to_string(g.original_id(v));
        out += ' ';
        out += player_char(w);
        NodeId move = s.strategy[index_of(w)][v];
        if (g.owner(v) == w && !p.contains(v) && move != kNoNode)
            out += " " + std::to_string(g.original_id(move));
        out += ";\n";
    }
    return out;
}

Solution parse_solution(std::string_view text, const ParityGame& g) {
    std::map<long long, NodeId> index;
    for (NodeId v = 0; v < g.node_count(); ++v) index[g.original_id(v)] = v;

    Cursor cur(text);
    if (cur.eat_word("paritysol")) {
        cur.number("record count");
        cur.expect(';', "after the header");
    }

    Solution s;
    s.winner.assign(g.node_count(), Player::even);
    s.strategy[0].assign(g.node_count(), kNoNode);
    s.strategy[1].assign(g.node_count(), kNoNode);
    std::vector<char> seen(g.node_count(), 0);

    while (!cur.done()) {
        long long id = cur.number("node id");
        auto it = index.find(id);
        if (it == index.end()) cur.fail("unknown node " + std::to_string(id));
        NodeId v = it->second;
        if (seen[v]) cur.fail("node " + std::to_string(id) + " solved twice");
        seen[v] = 1;
        long long winner = cur.number("winner");
        if (winner > 1) cur.fail("winner must be 0 or 1");
        s.winner[v] = static_cast<Player>(winner);
        if (cur.peek_digit()) {
            long long target = cur.number("strategy successor");
            auto ti = index.find(target);
            if (ti == index.end()) cur.fail("unknown strategy target " + std::to_string(target));
            s.strategy[winner][v] = ti->second;
        }
        cur.expect(';', "after the solution record");
    }

    for (NodeId v = 0; v < g.node_count(); ++v)
        if (!seen[v])
            throw ParseError(1, 1,
                             "no record for node " + std::to_string(g.original_id(v)));
    return s;
}

}  // namespace pg
