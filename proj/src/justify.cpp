#include "justsolve/justify.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace pg {

std::strong_ordering lex_compare(const SizeTuple& a, const SizeTuple& b) {
    if (auto c = a.at_infinity <=> b.at_infinity; c != 0) return c;
    std::size_t levels = std::max(a.at_priority.size(), b.at_priority.size());
    for (std::size_t i = levels; i-- > 0;) {
        std::uint32_t ca = i < a.at_priority.size() ? a.at_priority[i] : 0;
        std::uint32_t cb = i < b.at_priority.size() ? b.at_priority[i] : 0;
        if (auto c = ca <=> cb; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

SizeTuple size_of(const Justification& j) {
    const ParityGame& g = j.game();
    SizeTuple s;
    s.at_priority.assign(static_cast<std::size_t>(std::max(g.max_priority(), 0)) + 1, 0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!j.justified(v)) continue;
        Level lvl = j.level(v);
        if (lvl.is_infinity())
            ++s.at_infinity;
        else
            ++s.at_priority[static_cast<std::size_t>(lvl.priority())];
    }
    return s;
}

std::optional<Player> executable(const Justification& j, NodeId v, DirectJustification dj) {
    std::optional<Player> winner = wins_for(j, v, dj);
    if (!winner) return std::nullopt;
    Level dj_level = j.level_of(v, dj);
    Level v_level = j.level(v);
    if (j.justified(v) ? dj_level > v_level : dj_level >= v_level) return winner;
    return std::nullopt;
}

JustifyEffect justify(Justification& j, NodeId v, DirectJustification dj, ResetPolicy policy) {
    std::optional<Player> winner = executable(j, v, dj);
    if (!winner)
        throw std::logic_error("justify: step is not executable at node " +
                               j.game().display_name(v));

    JustifyEffect effect;
    effect.winner = *winner;
    effect.hypothesis_flipped = j.hypothesis(v) != *winner;

    std::vector<Justification::Update> batch;
    if (!effect.hypothesis_flipped) {
        effect.touched = j.reach_down(v);
        batch.push_back({v, dj, *winner});
    } else {
        // A justified node cannot have winning justifications for both
        // players, so a flip only happens on a parameter.
        if (j.justified(v))
            throw std::logic_error("justify: hypothesis flip on a justified node");

        const ParityGame& g = j.game();
        const Hypothesis defaults = default_hypothesis(g);
        std::vector<NodeId> resets;
        if (policy == ResetPolicy::minimal) {
            resets = j.reach_down(v);
        } else {
            Level bound = j.level_of(v, dj);
            for (NodeId w = 0; w < g.node_count(); ++w)
                if (j.level(w) < bound) resets.push_back(w);
        }
        effect.touched = resets;
        for (NodeId w : resets) {
            if (w == v) continue;
            if (j.justified(w)) effect.reset.push_back(w);
            batch.push_back({w, std::nullopt, defaults[w]});
        }
        batch.push_back({v, dj, *winner});
    }
    j.apply(batch);
    return effect;
}

std::pair<NodeId, DirectJustification> find_justifiable(const Justification& j) {
    const ParityGame& g = j.game();
    NodeId pick = kNoNode;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (j.justified(v)) continue;
        if (pick == kNoNode || g.priority(v) < g.priority(pick)) pick = v;
    }
    if (pick == kNoNode)
        throw std::logic_error("find_justifiable: every node is justified");

    Player alpha = g.owner(pick);
    for (NodeId w : g.successors(pick))
        if (j.hypothesis(w) == alpha) return {pick, DirectJustification::single(w)};
    return {pick, DirectJustification::all_successors()};
}

void write_trace(std::ostream& os, const ParityGame& g, std::span<const JustifyStep> steps) {
    os << "# justify trace\n";
    os << "# nodes=" << g.node_count() << "\n";
    os << "# columns: step\tnode\tdj_targets\twinner\treset_count\tsize\n";
    for (const JustifyStep& s : steps) {
        os << s.index << '\t' << s.node << '\t' << s.dj.str(g, s.node) << '\t'
           << player_char(s.winner) << '\t' << s.reset.size() << '\t';
        os << "inf=" << s.size_after.at_infinity;
        for (std::size_t i = s.size_after.at_priority.size(); i-- > 0;)
            os << ';' << i << '=' << s.size_after.at_priority[i];
        os << '\n';
    }
}

}  // namespace pg
