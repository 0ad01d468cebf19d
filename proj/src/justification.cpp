#include "justsolve/justification.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace pg {

bool DirectJustification::covers(const ParityGame& g, NodeId v, NodeId w) const {
    if (!is_all()) return target_ == w;
    auto succ = g.successors(v);
    return std::find(succ.begin(), succ.end(), w) != succ.end();
}

std::string DirectJustification::str(const ParityGame& g, NodeId v) const {
    std::string out;
    for_each_target(g, v, *this, [&](NodeId w) {
        if (!out.empty()) out += ',';
        out += std::to_string(w);
    });
    return out;
}

Justification::Justification(const ParityGame& g, Hypothesis hypothesis, DependencyIndex index)
    : game_(&g), index_(index), hyp_(std::move(hypothesis)) {
    const std::size_t n = g.node_count();
    if (hyp_.size() != n) throw std::invalid_argument("hypothesis does not cover the game");
    direct_.resize(n);
    if (index_ == DependencyIndex::dependent_sets) dependents_.resize(n);
    level_cache_.resize(n);
    level_valid_.assign(n, 1);
    for (NodeId v = 0; v < n; ++v) level_cache_[v] = Level::of(g.priority(v));
}

Justification Justification::initial(const ParityGame& g, DependencyIndex index) {
    return Justification(g, default_hypothesis(g), index);
}

void Justification::apply(std::span<const Update> updates) {
    const std::size_t n = game_->node_count();

    std::vector<char> updated(n, 0);
    for (const Update& u : updates) {
        if (u.node >= n) throw std::invalid_argument("update on unknown node");
        if (updated[u.node]) throw std::invalid_argument("duplicate node in update batch");
        updated[u.node] = 1;
        if (u.dj) {
            auto succ = game_->successors(u.node);
            if (u.dj->is_all()) {
                if (succ.empty())
                    throw std::invalid_argument("all-successors justification on a leaf");
            } else if (std::find(succ.begin(), succ.end(), u.dj->target()) == succ.end()) {
                throw std::invalid_argument("direct justification is not an edge");
            }
        }
    }

    // Levels can change exactly for nodes reaching an updated node, through
    // old or new edges alike; the old reach set of the batch covers both.
    {
        std::vector<NodeId> roots;
        roots.reserve(updates.size());
        for (const Update& u : updates) roots.push_back(u.node);
        invalidate_levels_reaching(roots);
    }

    for (const Update& u : updates) {
        std::optional<DirectJustification>& slot = direct_[u.node];
        if (index_ == DependencyIndex::dependent_sets && slot) {
            for_each_target(*game_, u.node, *slot, [&](NodeId w) {
                auto& dep = dependents_[w];
                dep.erase(std::find(dep.begin(), dep.end(), u.node));
            });
        }
        if (slot) --justified_count_;
        slot = u.dj;
        if (slot) {
            ++justified_count_;
            if (index_ == DependencyIndex::dependent_sets)
                for_each_target(*game_, u.node, *slot,
                                [&](NodeId w) { dependents_[w].push_back(u.node); });
        }
        hyp_[u.node] = u.hypothesis;
    }
}

void Justification::invalidate_levels_reaching(std::span<const NodeId> roots) {
    std::vector<NodeId> queue;
    for (NodeId r : roots) {
        if (!level_valid_[r]) continue;
        level_valid_[r] = 0;
        ++stale_levels_;
        queue.push_back(r);
    }
    while (!queue.empty()) {
        NodeId v = queue.back();
        queue.pop_back();
        for_each_direct_predecessor(v, [&](NodeId u) {
            if (!level_valid_[u]) return;
            level_valid_[u] = 0;
            ++stale_levels_;
            queue.push_back(u);
        });
    }
}

void Justification::refresh_levels() const {
    if (stale_levels_ == 0) return;
    const std::size_t n = game_->node_count();

    auto target_count = [this](NodeId v) -> std::size_t {
        if (!direct_[v]) return 0;
        return direct_[v]->is_all() ? game_->successors(v).size() : 1;
    };
    auto target_at = [this](NodeId v, std::size_t i) -> NodeId {
        return direct_[v]->is_all() ? game_->successors(v)[i] : direct_[v]->target();
    };

    // Tarjan over the stale part of D; fresh successors feed their cached
    // level in as constants, finished components are valid when popped, so a
    // component's level is min over priorities of unjustified members and
    // levels of targets outside it.
    std::vector<int> idx(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0), in_comp(n, 0);
    std::vector<NodeId> scc_stack, comp;
    struct Frame {
        NodeId v;
        std::size_t next;
    };
    std::vector<Frame> call;
    int counter = 0;

    for (NodeId root = 0; root < n; ++root) {
        if (level_valid_[root] || idx[root] != -1) continue;
        idx[root] = low[root] = counter++;
        on_stack[root] = 1;
        scc_stack.push_back(root);
        call.push_back({root, 0});
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next < target_count(f.v)) {
                NodeId w = target_at(f.v, f.next++);
                if (level_valid_[w]) continue;
                if (idx[w] == -1) {
                    idx[w] = low[w] = counter++;
                    on_stack[w] = 1;
                    scc_stack.push_back(w);
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], idx[w]);
                }
            } else {
                NodeId v = f.v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
                if (low[v] != idx[v]) continue;
                comp.clear();
                for (;;) {
                    NodeId w = scc_stack.back();
                    scc_stack.pop_back();
                    on_stack[w] = 0;
                    in_comp[w] = 1;
                    comp.push_back(w);
                    if (w == v) break;
                }
                Level lvl = Level::infinity();
                for (NodeId m : comp) {
                    if (!direct_[m]) {
                        lvl = std::min(lvl, Level::of(game_->priority(m)));
                        continue;
                    }
                    for (std::size_t i = 0; i < target_count(m); ++i) {
                        NodeId t = target_at(m, i);
                        if (!in_comp[t]) lvl = std::min(lvl, level_cache_[t]);
                    }
                }
                for (NodeId m : comp) {
                    level_cache_[m] = lvl;
                    level_valid_[m] = 1;
                    in_comp[m] = 0;
                }
            }
        }
    }
    stale_levels_ = 0;
}

Level Justification::level(NodeId v) const {
    if (!level_valid_[v]) refresh_levels();
    return level_cache_[v];
}

Level Justification::level_of(NodeId v, DirectJustification dj) const {
    Level lvl = Level::infinity();
    for_each_target(*game_, v, dj, [&](NodeId w) { lvl = std::min(lvl, level(w)); });
    return lvl;
}

Level Justification::level_from_scratch(NodeId v) const {
    Level lvl = Level::infinity();
    for (NodeId w : reach_up(v))
        if (!justified(w)) lvl = std::min(lvl, Level::of(game_->priority(w)));
    return lvl;
}

std::vector<NodeId> Justification::direct_predecessors(NodeId v) const {
    std::vector<NodeId> out;
    for_each_direct_predecessor(v, [&](NodeId u) { out.push_back(u); });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<NodeId> Justification::reach_down(NodeId v) const {
    std::vector<char> seen(game_->node_count(), 0);
    std::vector<NodeId> queue{v}, out;
    seen[v] = 1;
    while (!queue.empty()) {
        NodeId u = queue.back();
        queue.pop_back();
        out.push_back(u);
        for_each_direct_predecessor(u, [&](NodeId w) {
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        });
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<NodeId> Justification::reach_up(NodeId v) const {
    std::vector<char> seen(game_->node_count(), 0);
    std::vector<NodeId> queue{v}, out;
    seen[v] = 1;
    while (!queue.empty()) {
        NodeId u = queue.back();
        queue.pop_back();
        out.push_back(u);
        if (!direct_[u]) continue;
        for_each_target(*game_, u, *direct_[u], [&](NodeId w) {
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
        });
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<Player> wins_for(const Justification& j, NodeId v, DirectJustification dj) {
    const ParityGame& g = j.game();
    auto succ = g.successors(v);
    if (dj.is_all()) {
        if (succ.empty()) throw std::invalid_argument("direct justification of a leaf");
    } else if (std::find(succ.begin(), succ.end(), dj.target()) == succ.end()) {
        throw std::invalid_argument("direct justification is not an edge");
    }
    // One chosen edge is a move of the owner; the full edge set plays against it.
    Player candidate = dj.is_all() ? opponent(g.owner(v)) : g.owner(v);
    bool wins = true;
    for_each_target(g, v, dj, [&](NodeId w) { wins = wins && j.hypothesis(w) == candidate; });
    if (!wins) return std::nullopt;
    return candidate;
}

ParameterMap parameters_of(const Justification& j) {
    ParameterMap p(j.game().node_count());
    for (NodeId v = 0; v < j.game().node_count(); ++v)
        if (!j.justified(v)) p.assign(v, j.hypothesis(v));
    return p;
}

bool SafetyViolation::mentions(NodeId v) const {
    return std::find(nodes.begin(), nodes.end(), v) != nodes.end();
}

bool SafetyReport::mentions(NodeId v) const {
    for (const SafetyViolation& w : witnesses)
        if (w.mentions(v)) return true;
    return false;
}

SafetyReport check_weakly_winning(const Justification& j) {
    SafetyReport report;
    for (NodeId v = 0; v < j.game().node_count(); ++v) {
        if (!j.justified(v)) continue;
        if (wins_for(j, v, *j.direct(v)) != j.hypothesis(v))
            report.witnesses.push_back(
                {SafetyViolation::Kind::unwinning_direct_justification, {v}});
    }
    report.weakly_winning = report.witnesses.empty();
    return report;
}

namespace {

// Strongly connected components of D, in Tarjan pop order.
std::vector<std::vector<NodeId>> d_components(const Justification& j) {
    const ParityGame& g = j.game();
    const std::size_t n = g.node_count();
    std::vector<int> idx(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<NodeId> scc_stack;
    std::vector<std::vector<NodeId>> comps;
    struct Frame {
        NodeId v;
        std::size_t next;
    };
    std::vector<Frame> call;
    int counter = 0;

    auto deg = [&](NodeId v) -> std::size_t {
        if (!j.justified(v)) return 0;
        return j.direct(v)->is_all() ? g.successors(v).size() : 1;
    };
    auto at = [&](NodeId v, std::size_t i) -> NodeId {
        return j.direct(v)->is_all() ? g.successors(v)[i] : j.direct(v)->target();
    };

    for (NodeId root = 0; root < n; ++root) {
        if (idx[root] != -1) continue;
        idx[root] = low[root] = counter++;
        on_stack[root] = 1;
        scc_stack.push_back(root);
        call.push_back({root, 0});
        while (!call.empty()) {
            Frame& f = call.back();
            if (f.next < deg(f.v)) {
                NodeId w = at(f.v, f.next++);
                if (idx[w] == -1) {
                    idx[w] = low[w] = counter++;
                    on_stack[w] = 1;
                    scc_stack.push_back(w);
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], idx[w]);
                }
            } else {
                NodeId v = f.v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
                if (low[v] != idx[v]) continue;
                std::vector<NodeId> comp;
                for (;;) {
                    NodeId w = scc_stack.back();
                    scc_stack.pop_back();
                    on_stack[w] = 0;
                    comp.push_back(w);
                    if (w == v) break;
                }
                std::sort(comp.begin(), comp.end());
                comps.push_back(std::move(comp));
            }
        }
    }
    return comps;
}

// A cycle through top inside the component, restricted to priorities <= Pr(top);
// empty when none exists. The result lists the cycle nodes starting at top.
std::vector<NodeId> cycle_through(const Justification& j, const std::vector<NodeId>& comp,
                                  NodeId top) {
    const ParityGame& g = j.game();
    const std::size_t n = g.node_count();
    std::vector<char> member(n, 0);
    for (NodeId v : comp) member[v] = 1;
    const int cap = g.priority(top);

    std::vector<NodeId> parent(n, kNoNode);
    std::vector<char> visited(n, 0);
    std::vector<NodeId> stack{top};
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        if (!j.justified(u)) continue;
        NodeId found_from = kNoNode;
        for_each_target(g, u, *j.direct(u), [&](NodeId w) {
            if (found_from != kNoNode) return;
            if (!member[w] || g.priority(w) > cap) return;
            if (w == top) {
                found_from = u;
                return;
            }
            if (!visited[w]) {
                visited[w] = 1;
                parent[w] = u;
                stack.push_back(w);
            }
        });
        if (found_from != kNoNode) {
            std::vector<NodeId> cycle;
            for (NodeId x = found_from; x != kNoNode && x != top; x = parent[x])
                cycle.push_back(x);
            cycle.push_back(top);
            std::reverse(cycle.begin(), cycle.end());
            return cycle;
        }
    }
    return {};
}

void check_cycles(const Justification& j, SafetyReport& report) {
    const ParityGame& g = j.game();
    for (const std::vector<NodeId>& comp : d_components(j)) {
        bool cyclic = comp.size() > 1 ||
                      (j.justified(comp[0]) && j.direct(comp[0])->covers(g, comp[0], comp[0]));
        if (!cyclic) continue;
        // Weak winning makes the hypothesis uniform on a component.
        Player h = j.hypothesis(comp[0]);
        for (NodeId top : comp) {
            if (winner_of_priority(g.priority(top)) != opponent(h)) continue;
            std::vector<NodeId> cycle = cycle_through(j, comp, top);
            if (!cycle.empty())
                report.witnesses.push_back(
                    {SafetyViolation::Kind::losing_cycle, std::move(cycle)});
        }
    }
}

}  // namespace

SafetyReport check_winning(const Justification& j) {
    SafetyReport report = check_weakly_winning(j);
    if (!report.weakly_winning) return report;
    check_cycles(j, report);
    report.winning = report.witnesses.empty();
    return report;
}

SafetyReport check_safe(const Justification& j) {
    SafetyReport report = check_winning(j);
    const ParityGame& g = j.game();
    const Hypothesis defaults = default_hypothesis(g);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!j.justified(v) && j.hypothesis(v) != defaults[v])
            report.witnesses.push_back({SafetyViolation::Kind::nondefault_parameter, {v}});
        if (j.level(v) < Level::of(g.priority(v)))
            report.witnesses.push_back({SafetyViolation::Kind::level_below_priority, {v}});
    }
    report.safe = report.winning && report.witnesses.empty();
    return report;
}

std::vector<NodeId> extract_strategy(const Justification& j, Player alpha) {
    const ParityGame& g = j.game();
    std::vector<NodeId> sigma(g.node_count(), kNoNode);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (!j.justified(v) || g.owner(v) != alpha || j.hypothesis(v) != alpha) continue;
        DirectJustification dj = *j.direct(v);
        assert(!dj.is_all() && "owner strategies are single moves under weak winning");
        if (!dj.is_all()) sigma[v] = dj.target();
    }
    return sigma;
}

std::string to_dot(const Justification& j) {
    const ParityGame& g = j.game();
    std::string out = "digraph justification {\n  rankdir=LR;\n  node [style=filled];\n";
    for (NodeId v = 0; v < g.node_count(); ++v) {
        out += "  n" + std::to_string(v) + " [label=\"" + g.display_name(v) + ":" +
               std::to_string(g.priority(v)) + "\"";
        out += g.owner(v) == Player::even ? ", shape=box" : ", shape=diamond";
        out += j.hypothesis(v) == Player::even ? ", fillcolor=lightskyblue"
                                               : ", fillcolor=lightsalmon";
        if (!j.justified(v)) out += ", penwidth=3";  // parameters in bold
        out += "];\n";
    }
    for (NodeId v = 0; v < g.node_count(); ++v) {
        for (NodeId w : g.successors(v)) {
            if (w >= g.node_count()) continue;
            bool in_d = j.justified(v) && j.direct(v)->covers(g, v, w);
            out += "  n" + std::to_string(v) + " -> n" + std::to_string(w) +
                   (in_d ? " [style=bold];\n" : " [style=dotted];\n");
        }
    }
    out += "}\n";
    return out;
}

}  // namespace pg
