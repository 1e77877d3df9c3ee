#include "engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace fsteiner::detail {

Instance make_instance(const TerminalSpec& spec) {
    spec.validate();
    Instance inst;
    inst.terminals = spec.points;
    inst.line = spec.line;
    std::vector<Point> cloud = spec.points;
    if (spec.line) {
        std::size_t nearest = 0;
        for (std::size_t i = 0; i < spec.points.size(); ++i) {
            cloud.push_back(perpendicular_foot(spec.points[i], *spec.line));
            if (std::abs(signed_distance(spec.points[i], *spec.line)) <
                std::abs(signed_distance(spec.points[nearest], *spec.line))) {
                nearest = i;
            }
        }
        inst.terminals.push_back(perpendicular_foot(spec.points[nearest], *spec.line));
        inst.foot = inst.m() - 1;
    }
    inst.hull = convex_hull(cloud);
    double diameter = 0.0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        for (std::size_t j = i + 1; j < cloud.size(); ++j) {
            diameter = std::max(diameter, distance(cloud[i], cloud[j]));
        }
    }
    inst.scale = diameter > 0.0 ? diameter : 1.0;
    return inst;
}

double network_length(const Network& net) {
    double sum = 0.0;
    for (const auto& [a, b] : net.edges) {
        sum += distance(net.pos[a], net.pos[b]);
    }
    return sum;
}

namespace {

using Adjacency = std::vector<std::vector<int>>;

Adjacency build_adjacency(const Network& net) {
    Adjacency adj(net.pos.size());
    for (const auto& [a, b] : net.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    return adj;
}

double farthest_hull_distance(const Instance& inst, Point q) {
    double r = 0.0;
    for (const Point& v : inst.hull) {
        r = std::max(r, distance(q, v));
    }
    return r;
}

Point clip_unit(Point v) {
    const double len = norm(v);
    return len > 1.0 ? v / len : v;
}

struct Bound {
    double length = 0.0;
    double lower = 0.0;
};

/// Certified lower bound on the optimum from a subgradient at `pos`.
///
/// By convexity, opt >= f(x) - Σ |g_u| |x*_u - x_u|, and some optimum lies in
/// the hull, so |x*_u - x_u| <= farthest hull vertex from x_u. Zero-length
/// edges admit any subgradient of norm <= 1; flows on them are routed towards
/// the anchor of their cluster (a terminal or the foot), which is exact on trees.
Bound certify(const Instance& inst, const Adjacency& adj, const Network& net, const std::vector<Point>& pos) {
    const int m = inst.m();
    const int nn = static_cast<int>(pos.size());
    Bound out;
    for (const auto& [a, b] : net.edges) {
        out.length += distance(pos[a], pos[b]);
    }

    std::vector<Point> acc(nn);
    for (int u = 0; u < nn; ++u) {
        for (int v : adj[u]) {
            const Point d = pos[u] - pos[v];
            const double len = norm(d);
            if (len > 0.0) {
                acc[u] += d / len;
            }
        }
    }

    std::vector<char> seen(nn, 0);
    std::vector<int> order;
    std::vector<int> parent(nn, -1);
    double slack = 0.0;
    auto residual_norm = [&](int u, Point g) {
        if (u == inst.foot) {
            return std::abs(dot(g, inst.line->direction()));
        }
        return u < m ? 0.0 : norm(g);
    };

    // roots: anchors first so each zero-length cluster is rooted at its anchor
    std::vector<int> roots;
    for (int u = 0; u < m; ++u) roots.push_back(u);
    for (int u = m; u < nn; ++u) roots.push_back(u);
    for (int root : roots) {
        if (seen[root] || adj[root].empty()) {
            continue;
        }
        order.clear();
        seen[root] = 1;
        order.push_back(root);
        for (std::size_t i = 0; i < order.size(); ++i) {
            const int u = order[i];
            for (int v : adj[u]) {
                if (!seen[v] && pos[u] == pos[v]) {
                    seen[v] = 1;
                    parent[v] = u;
                    order.push_back(v);
                }
            }
        }
        for (std::size_t i = order.size(); i-- > 1;) {
            const int u = order[i];
            const Point pushed = clip_unit(acc[u]);
            slack += residual_norm(u, acc[u] - pushed) * farthest_hull_distance(inst, pos[u]);
            acc[parent[u]] += pushed;
        }
        slack += residual_norm(root, acc[root]) * farthest_hull_distance(inst, pos[root]);
    }
    out.lower = out.length - slack;
    return out;
}

/// Symmetric 2x2 matrix.
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    Sym2& operator+=(const Sym2& o) {
        xx += o.xx;
        xy += o.xy;
        yy += o.yy;
        return *this;
    }
    Sym2& operator-=(const Sym2& o) {
        xx -= o.xx;
        xy -= o.xy;
        yy -= o.yy;
        return *this;
    }
    Sym2 operator*(double s) const { return {xx * s, xy * s, yy * s}; }
    Point operator*(Point v) const { return {xx * v.x + xy * v.y, xy * v.x + yy * v.y}; }
    double det() const { return xx * yy - xy * xy; }
    Sym2 inverse() const {
        const double d = det();
        return {yy / d, -xy / d, xx / d};
    }
    /// A * this * A for symmetric A.
    Sym2 sandwich(const Sym2& a) const {
        const double p = a.xx * xx + a.xy * xy, q = a.xx * xy + a.xy * yy;
        const double r = a.xy * xx + a.yy * xy, t = a.xy * xy + a.yy * yy;
        return {p * a.xx + q * a.xy, 0.5 * (p * a.xy + q * a.yy + r * a.xx + t * a.xy), r * a.xy + t * a.yy};
    }
};

Sym2 outer(Point u) { return {u.x * u.x, u.x * u.y, u.y * u.y}; }

/// Nodes joined by contracted edges move as one component.
struct Components {
    std::vector<int> of;  // node -> component
    std::vector<std::vector<int>> members;
    std::vector<int> anchor;  // terminal or foot in the component, else -1
};

Components components(const Instance& inst, const Network& net, const Adjacency& adj,
                      const std::vector<char>& contracted, const std::vector<std::vector<int>>& edge_ids) {
    const int nn = static_cast<int>(net.pos.size());
    Components c;
    c.of.assign(nn, -1);
    for (int start = 0; start < nn; ++start) {
        if (c.of[start] >= 0 || adj[start].empty()) continue;
        const int id = static_cast<int>(c.members.size());
        c.members.push_back({start});
        c.anchor.push_back(start < inst.m() ? start : -1);
        c.of[start] = id;
        for (std::size_t i = 0; i < c.members[id].size(); ++i) {
            const int u = c.members[id][i];
            for (std::size_t k = 0; k < adj[u].size(); ++k) {
                const int v = adj[u][k];
                if (contracted[edge_ids[u][k]] && c.of[v] < 0) {
                    c.of[v] = id;
                    c.members[id].push_back(v);
                    if (v < inst.m()) c.anchor[id] = v;
                }
            }
        }
    }
    return c;
}

}  // namespace

OptimizeResult optimize(const Instance& inst, Network& net, double tol, double prune_above, int max_iterations) {
    const Adjacency adj = build_adjacency(net);
    const int nn = static_cast<int>(net.pos.size());
    const int ne = static_cast<int>(net.edges.size());
    const double scale = inst.scale;
    const double floor_len = 1e-20 * scale;
    const double snap_len = 1e-8 * scale;
    const double gap_tol = tol * scale;
    OptimizeResult res;

    std::vector<std::vector<int>> edge_ids(nn);
    for (int e = 0; e < ne; ++e) {
        edge_ids[net.edges[e].first].push_back(e);
        edge_ids[net.edges[e].second].push_back(e);
    }
    std::vector<char> contracted(ne, 0);
    std::vector<int> cooldown(ne, 0);

    if (inst.foot >= 0 && !adj[inst.foot].empty()) {
        net.pos[inst.foot] = perpendicular_foot(net.pos[adj[inst.foot][0]], *inst.line);
    }
    double length = network_length(net);
    double magnitude = 0.0;  // coordinate size; distances round relative to it
    for (const Point& p : net.pos) magnitude = std::max({magnitude, std::abs(p.x), std::abs(p.y)});
    double best_lower = -INFINITY;
    int stalled = 0;

    for (int it = 1; it <= max_iterations; ++it) {
        res.iterations = it;
        const Components comp = components(inst, net, adj, contracted, edge_ids);
        const int nc = static_cast<int>(comp.members.size());
        auto is_free = [&](int c) { return comp.anchor[c] < 0 || comp.anchor[c] == inst.foot; };
        auto on_line = [&](int c) { return comp.anchor[c] >= 0 && comp.anchor[c] == inst.foot; };
        auto cpos = [&](int c) { return net.pos[comp.members[c][0]]; };

        // gradient and forest structure over the free components
        std::vector<Point> grad(nc);
        std::vector<std::vector<std::pair<int, int>>> cadj(nc);  // (other component, edge)
        for (int e = 0; e < ne; ++e) {
            if (contracted[e]) continue;
            const int ca = comp.of[net.edges[e].first];
            const int cb = comp.of[net.edges[e].second];
            const Point d = cpos(ca) - cpos(cb);
            const double len = norm(d);
            if (len > 0.0) {
                grad[ca] += d / len;
                grad[cb] -= d / len;
            }
            cadj[ca].emplace_back(cb, e);
            cadj[cb].emplace_back(ca, e);
        }
        std::vector<int> order;
        std::vector<int> parent(nc, -1);
        std::vector<int> parent_edge(nc, -1);
        std::vector<char> seen(nc, 0);
        for (int c = 0; c < nc; ++c) {
            if (!is_free(c)) continue;
            if (on_line(c)) grad[c] = dot(grad[c], inst.line->direction()) * inst.line->direction();
            if (seen[c]) continue;
            seen[c] = 1;
            order.push_back(c);
            for (std::size_t i = order.size() - 1; i < order.size(); ++i) {
                for (const auto& [o, e] : cadj[order[i]]) {
                    if (!seen[o] && is_free(o)) {
                        seen[o] = 1;
                        parent[o] = order[i];
                        parent_edge[o] = e;
                        order.push_back(o);
                    }
                }
            }
        }

        // Solves the tree-structured system H d = -grad by elimination; the
        // edge matrices are the Hessian (newton) or the Smith majorizer.
        auto solve_step = [&](bool newton) {
            std::vector<Sym2> block(nc);
            std::vector<Point> rhs(nc);
            std::vector<Sym2> edge_m(ne);
            for (int e = 0; e < ne; ++e) {
                if (contracted[e]) continue;
                const Point d = cpos(comp.of[net.edges[e].first]) - cpos(comp.of[net.edges[e].second]);
                const double len = std::max(norm(d), floor_len);
                if (newton) {
                    const Point u = d / len;
                    edge_m[e] = {(1.0 - u.x * u.x) / len, -u.x * u.y / len, (1.0 - u.y * u.y) / len};
                } else {
                    edge_m[e] = {1.0 / len, 0.0, 1.0 / len};
                }
            }
            for (int c : order) {
                rhs[c] = -grad[c];
                for (const auto& [o, e] : cadj[c]) block[c] += edge_m[e];
                // tiny damping keeps straight-through junctions invertible
                block[c] += Sym2{1e-12 / scale, 0.0, 1e-12 / scale};
                // stiff but well-conditioned pin to the line; place() projects exactly
                if (on_line(c)) block[c] += outer(inst.line->normal()) * (1e6 * (block[c].xx + block[c].yy));
            }
            std::vector<Sym2> inv(nc);
            for (std::size_t i = order.size(); i-- > 0;) {
                const int c = order[i];
                inv[c] = block[c].inverse();
                if (parent[c] >= 0) {
                    const Sym2& a = edge_m[parent_edge[c]];
                    block[parent[c]] -= inv[c].sandwich(a);
                    rhs[parent[c]] += a * (inv[c] * rhs[c]);
                }
            }
            std::vector<Point> step(nc);
            for (int c : order) {
                Point r = rhs[c];
                if (parent[c] >= 0) r += edge_m[parent_edge[c]] * step[parent[c]];
                step[c] = inv[c] * r;
            }
            return step;
        };

        std::vector<Point> trial = net.pos;
        auto place = [&](const std::vector<Point>& step, double t) {
            for (int c : order) {
                Point p = cpos(c) + t * step[c];
                if (on_line(c)) p = perpendicular_foot(p, *inst.line);
                for (int u : comp.members[c]) trial[u] = p;
            }
            double sum = 0.0;
            for (const auto& [a, b] : net.edges) sum += distance(trial[a], trial[b]);
            return sum;
        };

        // Net force on the free components; length alone cannot resolve
        // positions below sqrt(eps) since it is flat at the optimum.
        auto residual = [&](const std::vector<Point>& pos) {
            std::vector<Point> force(nc);
            for (int e = 0; e < ne; ++e) {
                if (contracted[e]) continue;
                const int ca = comp.of[net.edges[e].first];
                const int cb = comp.of[net.edges[e].second];
                const Point d = pos[comp.members[ca][0]] - pos[comp.members[cb][0]];
                const double len = norm(d);
                if (len > 0.0) {
                    force[ca] += d / len;
                    force[cb] -= d / len;
                }
            }
            double total = 0.0;
            for (int c : order) {
                total += on_line(c) ? std::abs(dot(force[c], inst.line->direction())) : norm(force[c]);
            }
            return total;
        };
        const double rounding = 16.0 * std::numeric_limits<double>::epsilon() * (length + ne * magnitude);

        double next_length = length;
        bool moved = false;
        bool settled = false;
        if (!order.empty()) {
            // Near-singular eliminations can overflow; such steps are discarded.
            auto finite = [&](const std::vector<Point>& step) {
                return std::all_of(order.begin(), order.end(), [&](int c) { return is_finite(step[c]); });
            };
            const std::vector<Point> newton = solve_step(true);
            double slope = 0.0;
            for (int c : order) slope += dot(grad[c], newton[c]);
            if (finite(newton) && slope < 0.0) {
                if (-slope <= 1e3 * rounding) {
                    // predicted decrease is within rounding; judge by the force
                    const double r0 = residual(net.pos);
                    const double trial_length = place(newton, 1.0);
                    if (trial_length <= length + rounding && residual(trial) < 0.5 * r0) {
                        next_length = trial_length;
                        moved = true;
                        settled = true;
                    }
                }
                for (double t = 1.0; !moved && t > 1e-9; t *= 0.5) {
                    const double trial_length = place(newton, t);
                    if (trial_length <= length + 1e-4 * t * slope) {
                        next_length = trial_length;
                        moved = true;
                    }
                }
            }
            if (!moved) {
                const std::vector<Point> smith = solve_step(false);
                const double trial_length = finite(smith) ? place(smith, 1.0) : INFINITY;
                if (trial_length < length) {
                    next_length = trial_length;
                    moved = true;
                }
            }
        }
        const double decrease = length - next_length;
        if (moved) {
            net.pos = trial;
            length = next_length;
        }

        // contract edges that have shrunk to nothing
        bool changed = false;
        for (int e = 0; e < ne; ++e) {
            if (cooldown[e] > 0) --cooldown[e];
            if (contracted[e] || cooldown[e] > 0) continue;
            const auto [a, b] = net.edges[e];
            if (distance(net.pos[a], net.pos[b]) >= snap_len) continue;
            const int ca = comp.of[a];
            const int cb = comp.of[b];
            if (ca == cb) continue;
            if (comp.anchor[ca] >= 0 && comp.anchor[cb] >= 0) continue;
            const bool keep_a = comp.anchor[ca] >= 0;
            const Point target = keep_a ? cpos(ca) : comp.anchor[cb] >= 0 ? cpos(cb) : 0.5 * (cpos(ca) + cpos(cb));
            for (int c : {ca, cb}) {
                for (int u : comp.members[c]) net.pos[u] = target;
            }
            contracted[e] = 1;
            changed = true;
            break;  // components are stale after one merge
        }

        // reopen contracted edges whose flow would exceed one unit
        if (!changed) {
            const Components now = components(inst, net, adj, contracted, edge_ids);
            for (std::size_t c = 0; c < now.members.size() && !changed; ++c) {
                if (now.members[c].size() < 2) continue;
                const int root = now.anchor[c] >= 0 ? now.anchor[c] : now.members[c][0];
                std::vector<int> local{root};
                std::vector<int> up(nn, -1);
                std::vector<int> up_edge(nn, -1);
                std::vector<char> in(nn, 0);
                in[root] = 1;
                for (std::size_t i = 0; i < local.size(); ++i) {
                    const int u = local[i];
                    for (std::size_t k = 0; k < adj[u].size(); ++k) {
                        const int v = adj[u][k];
                        if (contracted[edge_ids[u][k]] && !in[v]) {
                            in[v] = 1;
                            up[v] = u;
                            up_edge[v] = edge_ids[u][k];
                            local.push_back(v);
                        }
                    }
                }
                std::vector<Point> acc(nn);
                for (int u : local) {
                    for (std::size_t k = 0; k < adj[u].size(); ++k) {
                        if (contracted[edge_ids[u][k]]) continue;
                        const Point d = net.pos[u] - net.pos[adj[u][k]];
                        const double len = norm(d);
                        if (len > 0.0) acc[u] += d / len;
                    }
                }
                for (std::size_t i = local.size(); i-- > 1;) {
                    const int u = local[i];
                    const double pull = norm(acc[u]);
                    if (pull > 1.0 + 1e-9) {
                        // move the subtree hanging below u against its gradient
                        std::vector<int> sub{u};
                        for (std::size_t j = 0; j < sub.size(); ++j) {
                            for (int v : local) {
                                if (up[v] == sub[j]) sub.push_back(v);
                            }
                        }
                        const Point shift = -(10.0 * snap_len / pull) * acc[u];
                        for (int v : sub) net.pos[v] += shift;
                        contracted[up_edge[u]] = 0;
                        cooldown[up_edge[u]] = 10;
                        changed = true;
                        break;
                    }
                    acc[up[u]] += acc[u];
                }
            }
        }
        if (changed) {
            if (inst.foot >= 0) {
                // keep the foot component on the line
                const Components now = components(inst, net, adj, contracted, edge_ids);
                const int fc = now.of[inst.foot];
                if (fc >= 0) {
                    const Point p = perpendicular_foot(net.pos[inst.foot], *inst.line);
                    for (int u : now.members[fc]) net.pos[u] = p;
                }
            }
            length = network_length(net);
        }

        const Bound bound = certify(inst, adj, net, net.pos);
        res.length = bound.length;
        best_lower = std::max(best_lower, bound.lower);
        res.lower_bound = best_lower;
        if (res.lower_bound > prune_above) {
            res.pruned = true;
            return res;
        }
        if (res.length - res.lower_bound <= gap_tol) {
            res.converged = true;
            return res;
        }
        stalled = (!changed && !settled && decrease <= 1e-15 * scale) ? stalled + 1 : 0;
        if (stalled >= 3) {
            res.converged = true;
            return res;
        }
    }
    return res;
}

bool exact_construction(const Instance& inst, Network& net) {
    const int m = inst.m();
    if (net.steiner == 0) {
        return false;
    }
    const Adjacency adj = build_adjacency(net);
    const int root = inst.foot >= 0 ? inst.foot : 0;
    if (adj[root].size() != 1 || adj[root][0] < m) {
        return false;
    }
    const int top = adj[root][0];
    const double scale = inst.scale;

    // rooted pre-order with two children per Steiner point
    std::vector<int> order{top};
    std::vector<int> parent(net.pos.size(), -1);
    std::vector<std::array<int, 2>> kids(net.pos.size(), {-1, -1});
    parent[top] = root;
    for (std::size_t i = 0; i < order.size(); ++i) {
        const int s = order[i];
        if (adj[s].size() != 3) {
            return false;
        }
        int k = 0;
        for (int v : adj[s]) {
            if (v == parent[s]) continue;
            if (k == 2) return false;
            kids[s][k++] = v;
            parent[v] = s;
            if (v >= m) order.push_back(v);
        }
        if (k != 2) return false;
    }

    // bottom-up: replace each pair of subtrees by their equilateral point,
    // on the far side from the Steiner point joining them
    std::vector<Point> equi(net.pos.size());
    for (int u = 0; u < m; ++u) equi[u] = net.pos[u];
    for (std::size_t i = order.size(); i-- > 0;) {
        const int s = order[i];
        const Point e1 = equi[kids[s][0]];
        const Point e2 = equi[kids[s][1]];
        const double side = cross(e2 - e1, net.pos[s] - e1);
        if (distance(e1, e2) <= 1e-12 * scale || std::abs(side) <= 1e-14 * scale * scale) {
            return false;
        }
        equi[s] = equilateral_third(e1, e2, side > 0.0 ? Side::right : Side::left);
    }

    std::vector<Point> pos = net.pos;
    if (inst.foot >= 0) {
        pos[root] = perpendicular_foot(equi[top], *inst.line);
    }
    const double construction_length = distance(equi[top], pos[root]);

    // top-down: each Steiner point is the second intersection of the segment
    // (equilateral point, parent) with the circle through its triangle
    for (int s : order) {
        const Point es = equi[s];
        const Point p = pos[parent[s]];
        const double reach = distance(p, es);
        if (reach <= 1e-12 * scale) return false;
        const Point d = (p - es) / reach;
        const Point center = (equi[kids[s][0]] + equi[kids[s][1]] + es) / 3.0;
        const double t = -2.0 * dot(es - center, d);
        if (!(t > 1e-12 * scale) || !(t < reach - 1e-12 * scale)) return false;
        pos[s] = es + t * d;
    }

    for (int s : order) {
        const Point arms[3] = {pos[parent[s]], pos[kids[s][0]], pos[kids[s][1]]};
        for (int i = 0; i < 3; ++i) {
            if (distance(arms[i], pos[s]) <= 1e-12 * scale) return false;
        }
        for (int i = 0; i < 3; ++i) {
            if (std::abs(angle_between(pos[s], arms[i], arms[(i + 1) % 3]) - kTwoThirdsPi) > kEpsGeom) return false;
        }
    }
    Network candidate{pos, net.edges, net.steiner};
    const double length = network_length(candidate);
    if (std::abs(length - construction_length) > 1e-10 * scale || length > network_length(net) + 1e-9 * scale) {
        return false;
    }
    net.pos = std::move(pos);
    return true;
}

void initial_positions(const Instance& inst, Network& net) {
    const int m = inst.m();
    const Adjacency adj = build_adjacency(net);
    const int nn = m + net.steiner;
    std::vector<Point> sum(nn);
    std::vector<double> weight(nn, 0.0);
    std::vector<int> hops(nn);
    for (int t = 0; t < m; ++t) {
        if (adj[t].empty()) continue;
        std::fill(hops.begin(), hops.end(), -1);
        hops[t] = 0;
        std::queue<int> q;
        q.push(t);
        while (!q.empty()) {
            const int u = q.front();
            q.pop();
            for (int v : adj[u]) {
                if (hops[v] < 0) {
                    hops[v] = hops[u] + 1;
                    if (v >= m) q.push(v);
                }
            }
        }
        for (int s = m; s < nn; ++s) {
            if (hops[s] > 0) {
                const double w = std::ldexp(1.0, -hops[s]);
                sum[s] += w * net.pos[t];
                weight[s] += w;
            }
        }
    }
    for (int s = m; s < nn; ++s) {
        net.pos[s] = sum[s] / weight[s];
    }
}

SteinerTree to_tree(const Instance& inst, const Network& net) {
    const int m = inst.m();
    SteinerTree tree;
    tree.topology.terminals = m;
    tree.topology.steiner = net.steiner;
    tree.topology.edges = net.edges;
    tree.terminals.assign(net.pos.begin(), net.pos.begin() + m);
    tree.steiner_coords.assign(net.pos.begin() + m, net.pos.begin() + m + net.steiner);
    tree.length = network_length(net);
    if (inst.foot >= 0) {
        tree.foot = net.pos[inst.foot];
    }
    for (std::size_t i = 0; i < net.edges.size(); ++i) {
        if (distance(net.pos[net.edges[i].first], net.pos[net.edges[i].second]) <= 1e-10 * inst.scale) {
            tree.collapsed_edges.push_back(static_cast<int>(i));
        }
    }
    return tree;
}

}  // namespace fsteiner::detail
