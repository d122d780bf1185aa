#include "edcssm/wind_erosion.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>

namespace edcssm {

namespace {

constexpr std::array<std::array<int, 2>, 8> kNeighbors{{{-1, -1},
                                                        {-1, 0},
                                                        {-1, 1},
                                                        {0, -1},
                                                        {0, 1},
                                                        {1, -1},
                                                        {1, 0},
                                                        {1, 1}}};

// Opposite-pair probe directions across a junction pixel, in fixed order.
constexpr std::array<std::array<int, 2>, 4> kOppositeProbes{{{-1, -1},
                                                             {-1, 0},
                                                             {-1, 1},
                                                             {0, -1}}};

long long pixel_key(int r, int c, int cols) {
    return static_cast<long long>(r) * cols + c;
}

void validate_params(const ErosionParams& p) {
    if (!(p.p_mean > 0.0))
        throw std::invalid_argument("ErosionParams: p_mean must be positive");
    if (p.length_threshold < 0)
        throw std::invalid_argument("ErosionParams: length_threshold must be non-negative");
    if (p.cut_threshold < 0)
        throw std::invalid_argument("ErosionParams: cut_threshold must be non-negative");
    if (!(p.cut_fraction >= 0.0 && p.cut_fraction <= 1.0))
        throw std::invalid_argument("ErosionParams: cut_fraction must lie in [0, 1]");
    if (p.boundary_band < 0)
        throw std::invalid_argument("ErosionParams: boundary_band must be non-negative");
}

// Splits a segment at its bridges. Returns an empty vector when the segment
// has no bridges (nothing to split). Children inherit CE/PT flags; ids are
// allocated from the graph counter.
std::vector<EdgeSegment> make_children(EdgeGraph& graph, const EdgeSegment& s) {
    if (s.bridges.empty())
        return {};
    const int n = s.length();
    std::vector<std::pair<int, int>> runs; // [begin, end) into s.pixels, end may wrap
    if (!s.is_cycle) {
        int begin = 0;
        for (const SegmentBridge& b : s.bridges) {
            runs.emplace_back(begin, b.position);
            begin = b.position;
        }
        runs.emplace_back(begin, n);
    } else {
        // Ring runs between consecutive bridges; the run after the last bridge
        // wraps through the end of the pixel list back to the first bridge.
        for (std::size_t i = 0; i + 1 < s.bridges.size(); ++i)
            runs.emplace_back(s.bridges[i].position, s.bridges[i + 1].position);
        runs.emplace_back(s.bridges.back().position, s.bridges.front().position + n);
    }

    std::vector<EdgeSegment> children;
    for (const auto& [begin, end] : runs) {
        if (begin == end)
            continue; // degenerate run (e.g. closing bridge at the wrap point)
        EdgeSegment child;
        child.id = graph.next_id++;
        child.ce = s.ce;
        child.pt = s.pt;
        child.pixels.reserve(static_cast<std::size_t>(end - begin));
        for (int i = begin; i < end; ++i)
            child.pixels.push_back(s.pixels[static_cast<std::size_t>(i % n)]);
        children.push_back(std::move(child));
    }
    return children;
}

std::size_t segment_pixel_total(const EdgeGraph& graph, const std::set<int>& ids) {
    std::size_t total = 0;
    for (const EdgeSegment& s : graph.segments)
        if (ids.count(s.id))
            total += s.pixels.size();
    return total;
}

} // namespace

const EdgeSegment* EdgeGraph::find_segment(int id) const {
    for (const EdgeSegment& s : segments)
        if (s.id == id)
            return &s;
    return nullptr;
}

EdgeGraph build_edge_graph(const BinaryMap& map) {
    EdgeGraph graph;
    graph.rows = map.rows();
    graph.cols = map.cols();
    if (map.empty())
        return graph;

    enum : std::uint8_t { kNone = 0, kChain = 1, kJunction = 2 };
    std::vector<std::uint8_t> kind(static_cast<std::size_t>(map.rows()) * map.cols(), kNone);
    const auto kind_at = [&](int r, int c) -> std::uint8_t& {
        return kind[static_cast<std::size_t>(r) * map.cols() + c];
    };

    for (int r = 0; r < map.rows(); ++r) {
        for (int c = 0; c < map.cols(); ++c) {
            if (!map.is_edge(r, c))
                continue;
            int neighbors = 0;
            for (const auto& d : kNeighbors) {
                const int rr = r + d[0];
                const int cc = c + d[1];
                if (map.in_bounds(rr, cc) && map.is_edge(rr, cc))
                    ++neighbors;
            }
            kind_at(r, c) = neighbors >= 3 ? kJunction : kChain;
            if (neighbors >= 3)
                graph.junctions.push_back({r, c});
        }
    }

    // Trace chains among non-junction edge pixels. Each such pixel has at most
    // two edge neighbors in total, so the subgraph is a union of paths and
    // cycles.
    std::vector<std::uint8_t> visited(kind.size(), 0);
    const auto visited_at = [&](int r, int c) -> std::uint8_t& {
        return visited[static_cast<std::size_t>(r) * map.cols() + c];
    };
    const auto chain_neighbors = [&](int r, int c) {
        std::vector<PixelCoord> out;
        for (const auto& d : kNeighbors) {
            const int rr = r + d[0];
            const int cc = c + d[1];
            if (map.in_bounds(rr, cc) && kind_at(rr, cc) == kChain)
                out.push_back({rr, cc});
        }
        return out;
    };

    struct Chain {
        std::vector<PixelCoord> pixels;
        bool is_cycle = false;
    };
    std::vector<Chain> chains;

    const auto walk_from = [&](PixelCoord start) {
        Chain chain;
        chain.pixels.push_back(start);
        visited_at(start.row, start.col) = 1;
        PixelCoord cur = start;
        for (;;) {
            std::optional<PixelCoord> next;
            for (const PixelCoord& nb : chain_neighbors(cur.row, cur.col)) {
                if (!visited_at(nb.row, nb.col)) {
                    next = nb;
                    break; // neighbors enumerate in fixed raster order
                }
            }
            if (!next)
                break;
            chain.pixels.push_back(*next);
            visited_at(next->row, next->col) = 1;
            cur = *next;
        }
        return chain;
    };

    // Paths first (start at pixels with chain-degree <= 1), then cycles.
    for (int pass = 0; pass < 2; ++pass) {
        for (int r = 0; r < map.rows(); ++r) {
            for (int c = 0; c < map.cols(); ++c) {
                if (kind_at(r, c) != kChain || visited_at(r, c))
                    continue;
                const bool is_path_end = chain_neighbors(r, c).size() <= 1;
                if (pass == 0 && !is_path_end)
                    continue;
                Chain chain = walk_from({r, c});
                chain.is_cycle = pass == 1;
                chains.push_back(std::move(chain));
            }
        }
    }

    // Bridge chain ends straight through junction pixels: two ends attaching
    // at exactly opposite pixels across a junction continue one another.
    struct Link {
        int chain = -1;
        int slot = -1; // slot on the other chain (0 = front, 1 = back)
        PixelCoord junction;
    };
    std::vector<std::array<std::optional<Link>, 2>> links(chains.size());
    std::vector<std::array<bool, 2>> slot_used(chains.size(), {false, false});

    std::unordered_map<long long, std::vector<std::pair<int, int>>> end_slots;
    for (int i = 0; i < static_cast<int>(chains.size()); ++i) {
        if (chains[i].is_cycle)
            continue;
        const PixelCoord front = chains[i].pixels.front();
        const PixelCoord back = chains[i].pixels.back();
        end_slots[pixel_key(front.row, front.col, map.cols())].emplace_back(i, 0);
        end_slots[pixel_key(back.row, back.col, map.cols())].emplace_back(i, 1);
    }
    const auto free_slot_at = [&](PixelCoord p) -> std::optional<std::pair<int, int>> {
        const auto it = end_slots.find(pixel_key(p.row, p.col, map.cols()));
        if (it == end_slots.end())
            return std::nullopt;
        for (const auto& [chain, slot] : it->second)
            if (!slot_used[static_cast<std::size_t>(chain)][static_cast<std::size_t>(slot)])
                return std::make_pair(chain, slot);
        return std::nullopt;
    };

    for (const PixelCoord& j : graph.junctions) {
        for (const auto& d : kOppositeProbes) {
            const PixelCoord p1{j.row + d[0], j.col + d[1]};
            const PixelCoord p2{j.row - d[0], j.col - d[1]};
            if (!map.in_bounds(p1.row, p1.col) || !map.in_bounds(p2.row, p2.col))
                continue;
            if (kind_at(p1.row, p1.col) != kChain || kind_at(p2.row, p2.col) != kChain)
                continue;
            const auto a = free_slot_at(p1);
            if (!a)
                continue;
            // Temporarily consume a's slot so a chain with both ends on the
            // same pixel cannot pair with itself through the same slot.
            slot_used[static_cast<std::size_t>(a->first)][static_cast<std::size_t>(a->second)] = true;
            const auto b = free_slot_at(p2);
            if (!b) {
                slot_used[static_cast<std::size_t>(a->first)][static_cast<std::size_t>(a->second)] = false;
                continue;
            }
            slot_used[static_cast<std::size_t>(b->first)][static_cast<std::size_t>(b->second)] = true;
            links[static_cast<std::size_t>(a->first)][static_cast<std::size_t>(a->second)] =
                Link{b->first, b->second, j};
            links[static_cast<std::size_t>(b->first)][static_cast<std::size_t>(b->second)] =
                Link{a->first, a->second, j};
        }
    }

    // Assemble strands: follow links chain to chain. Path strands start at a
    // free slot; remaining linked chains form cycle strands.
    std::vector<std::uint8_t> assigned(chains.size(), 0);
    const auto append_chain = [&](EdgeSegment& seg, int idx, bool entry_at_front) {
        const auto& px = chains[static_cast<std::size_t>(idx)].pixels;
        if (entry_at_front)
            seg.pixels.insert(seg.pixels.end(), px.begin(), px.end());
        else
            seg.pixels.insert(seg.pixels.end(), px.rbegin(), px.rend());
    };

    for (int start = 0; start < static_cast<int>(chains.size()); ++start) {
        if (assigned[static_cast<std::size_t>(start)])
            continue;
        if (chains[static_cast<std::size_t>(start)].is_cycle) {
            assigned[static_cast<std::size_t>(start)] = 1;
            EdgeSegment seg;
            seg.id = graph.next_id++;
            seg.pixels = chains[static_cast<std::size_t>(start)].pixels;
            seg.is_cycle = true;
            graph.segments.push_back(std::move(seg));
            continue;
        }
        const bool front_free = !links[static_cast<std::size_t>(start)][0].has_value();
        const bool back_free = !links[static_cast<std::size_t>(start)][1].has_value();
        if (!front_free && !back_free)
            continue; // belongs to a cycle strand, handled below

        EdgeSegment seg;
        seg.id = graph.next_id++;
        int cur = start;
        // Start at the free end so the walk exits through the linked one.
        int exit_slot = front_free ? 1 : 0;
        append_chain(seg, cur, front_free);
        assigned[static_cast<std::size_t>(cur)] = 1;
        while (links[static_cast<std::size_t>(cur)][static_cast<std::size_t>(exit_slot)]) {
            const Link link = *links[static_cast<std::size_t>(cur)][static_cast<std::size_t>(exit_slot)];
            seg.bridges.push_back({static_cast<int>(seg.pixels.size()), link.junction});
            cur = link.chain;
            const bool entry_at_front = link.slot == 0;
            append_chain(seg, cur, entry_at_front);
            assigned[static_cast<std::size_t>(cur)] = 1;
            exit_slot = entry_at_front ? 1 : 0;
        }
        graph.segments.push_back(std::move(seg));
    }

    // Cycle strands: every chain left has both slots linked.
    for (int start = 0; start < static_cast<int>(chains.size()); ++start) {
        if (assigned[static_cast<std::size_t>(start)])
            continue;
        EdgeSegment seg;
        seg.id = graph.next_id++;
        seg.is_cycle = true;
        int cur = start;
        int exit_slot = 1; // enter conceptually at the front, exit at the back
        append_chain(seg, cur, true);
        assigned[static_cast<std::size_t>(cur)] = 1;
        for (;;) {
            const Link link = *links[static_cast<std::size_t>(cur)][static_cast<std::size_t>(exit_slot)];
            if (link.chain == start) {
                // Closing bridge between the last pixel and the first.
                seg.bridges.push_back({static_cast<int>(seg.pixels.size()), link.junction});
                break;
            }
            seg.bridges.push_back({static_cast<int>(seg.pixels.size()), link.junction});
            cur = link.chain;
            const bool entry_at_front = link.slot == 0;
            append_chain(seg, cur, entry_at_front);
            assigned[static_cast<std::size_t>(cur)] = 1;
            exit_slot = entry_at_front ? 1 : 0;
        }
        graph.segments.push_back(std::move(seg));
    }

    return graph;
}

void find_boundaries(EdgeGraph& graph, int boundary_band) {
    if (boundary_band < 0)
        throw std::invalid_argument("find_boundaries: boundary_band must be non-negative");
    for (EdgeSegment& s : graph.segments) {
        for (const PixelCoord& p : s.pixels) {
            if (p.row < boundary_band || p.row >= graph.rows - boundary_band ||
                p.col < boundary_band || p.col >= graph.cols - boundary_band) {
                s.ce = true;
                break;
            }
        }
    }
}

void process_long_edges(EdgeGraph& graph, double p_mean) {
    if (!(p_mean > 0.0))
        throw std::invalid_argument("process_long_edges: p_mean must be positive");

    const auto mean_non_ce = [&]() -> std::optional<double> {
        double total = 0.0;
        int count = 0;
        for (const EdgeSegment& s : graph.segments) {
            if (!s.ce) {
                total += s.length();
                ++count;
            }
        }
        if (count == 0)
            return std::nullopt;
        return total / count;
    };

    const auto first_mean = mean_non_ce();
    if (!first_mean)
        return;

    std::vector<EdgeSegment> next;
    next.reserve(graph.segments.size());
    for (EdgeSegment& s : graph.segments) {
        if (!s.ce && s.length() > 2.0 * *first_mean) {
            std::vector<EdgeSegment> children = make_children(graph, s);
            if (!children.empty()) {
                for (EdgeSegment& child : children)
                    next.push_back(std::move(child));
                continue;
            }
        }
        next.push_back(std::move(s));
    }
    graph.segments = std::move(next);

    const auto second_mean = mean_non_ce();
    if (!second_mean)
        return;
    for (EdgeSegment& s : graph.segments)
        if (!s.ce && s.length() > p_mean * *second_mean)
            s.pt = true;
}

void split_edges(EdgeGraph& graph) {
    std::vector<EdgeSegment> next;
    next.reserve(graph.segments.size());
    for (EdgeSegment& s : graph.segments) {
        std::vector<EdgeSegment> children = make_children(graph, s);
        if (children.empty()) {
            graph.parent_children[s.id] = {s.id};
            next.push_back(std::move(s));
            continue;
        }
        std::vector<int>& ids = graph.parent_children[s.id];
        for (EdgeSegment& child : children) {
            ids.push_back(child.id);
            next.push_back(std::move(child));
        }
    }
    graph.segments = std::move(next);
}

void clear_edges(EdgeGraph& graph, int length_threshold) {
    if (length_threshold < 0)
        throw std::invalid_argument("clear_edges: length_threshold must be non-negative");
    for (const EdgeSegment& s : graph.segments)
        if (!s.ce && !s.pt && s.length() < length_threshold)
            graph.deleted.insert(s.id);
}

void restore_junctions(EdgeGraph& graph, int cut_threshold, double cut_fraction) {
    if (cut_threshold < 0)
        throw std::invalid_argument("restore_junctions: cut_threshold must be non-negative");
    if (!(cut_fraction >= 0.0 && cut_fraction <= 1.0))
        throw std::invalid_argument("restore_junctions: cut_fraction must lie in [0, 1]");

    for (const auto& [parent, children] : graph.parent_children) {
        const int total = static_cast<int>(children.size());
        int cut = 0;
        for (int id : children)
            cut += graph.deleted.count(id) ? 1 : 0;
        if (cut == 0)
            continue;
        if (cut < cut_threshold && cut < cut_fraction * total) {
            for (int id : children)
                graph.deleted.erase(id);
        } else {
            for (int id : children)
                graph.deleted.insert(id);
        }
    }
}

void restore_protected(EdgeGraph& graph, int length_threshold) {
    for (const EdgeSegment& s : graph.segments)
        if (s.pt)
            graph.deleted.erase(s.id);
    // Final short-edge sweep: segments still deleted and shorter than the
    // threshold simply remain deleted; nothing else is resurrected here.
    (void)length_threshold;
}

void restore_boundaries(EdgeGraph& graph) {
    for (const EdgeSegment& s : graph.segments)
        if (s.ce)
            graph.deleted.erase(s.id);
}

BinaryMap rasterize(const EdgeGraph& graph) {
    BinaryMap out(graph.rows, graph.cols);

    // Junction pixels form 8-connected clusters (a side branch on a line
    // turns three or four pixels into junctions at once). Work per cluster.
    std::unordered_set<long long> junction_set;
    for (const PixelCoord& j : graph.junctions)
        junction_set.insert(pixel_key(j.row, j.col, graph.cols));
    std::unordered_map<long long, int> cluster_of;
    std::vector<std::vector<PixelCoord>> clusters;
    for (const PixelCoord& j : graph.junctions) {
        if (cluster_of.count(pixel_key(j.row, j.col, graph.cols)))
            continue;
        const int id = static_cast<int>(clusters.size());
        clusters.emplace_back();
        std::vector<PixelCoord> stack{j};
        cluster_of[pixel_key(j.row, j.col, graph.cols)] = id;
        while (!stack.empty()) {
            const PixelCoord p = stack.back();
            stack.pop_back();
            clusters[static_cast<std::size_t>(id)].push_back(p);
            for (const auto& d : kNeighbors) {
                const PixelCoord q{p.row + d[0], p.col + d[1]};
                if (q.row < 0 || q.row >= graph.rows || q.col < 0 ||
                    q.col >= graph.cols)
                    continue;
                const long long key = pixel_key(q.row, q.col, graph.cols);
                if (junction_set.count(key) && !cluster_of.count(key)) {
                    cluster_of[key] = id;
                    stack.push_back(q);
                }
            }
        }
    }

    // Surviving pixels, and per cluster: which distinct strand ends (or
    // pass-through bridge flanks) touch it, via which cluster pixels. One
    // end touching several pixels of the same cluster is still one anchor.
    std::vector<std::set<std::pair<int, int>>> cluster_tokens(clusters.size());
    std::vector<std::set<std::pair<int, int>>> cluster_contacts(clusters.size());
    const auto attach = [&](const PixelCoord& p, int segment_id, int slot) {
        for (const auto& d : kNeighbors) {
            const PixelCoord q{p.row + d[0], p.col + d[1]};
            if (q.row < 0 || q.row >= graph.rows || q.col < 0 || q.col >= graph.cols)
                continue;
            const auto it = cluster_of.find(pixel_key(q.row, q.col, graph.cols));
            if (it != cluster_of.end()) {
                cluster_tokens[static_cast<std::size_t>(it->second)].insert(
                    {segment_id, slot});
                cluster_contacts[static_cast<std::size_t>(it->second)].insert(
                    {q.row, q.col});
            }
        }
    };
    for (const EdgeSegment& s : graph.segments) {
        if (graph.deleted.count(s.id))
            continue;
        for (const PixelCoord& p : s.pixels)
            out.set(p.row, p.col, 255);
        int slot = 0;
        for (const PixelCoord& e : s.endpoints())
            attach(e, s.id, slot++);
        const int n = s.length();
        for (const SegmentBridge& b : s.bridges) {
            // A surviving unsplit strand passes straight through: both flank
            // pixels anchor the junction.
            attach(s.pixels[static_cast<std::size_t>((b.position - 1 + n) % n)], s.id,
                   slot++);
            attach(s.pixels[static_cast<std::size_t>(b.position % n)], s.id, slot++);
        }
    }

    // A cluster survives when at least two strand ends still anchor it; it
    // is redrawn as the pixels connecting its contact points (one shortest
    // path within the cluster per contact pair), so dead-branch stubs around
    // the cluster disappear.
    for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
        if (cluster_tokens[ci].size() < 2)
            continue;
        const std::vector<PixelCoord>& pixels = clusters[ci];
        const std::set<std::pair<int, int>>& contacts = cluster_contacts[ci];
        const auto index_of = [&](const PixelCoord& p) {
            for (std::size_t i = 0; i < pixels.size(); ++i)
                if (pixels[i] == p)
                    return static_cast<int>(i);
            return -1;
        };
        // BFS over the cluster from one contact, with a fixed neighbor
        // order, gives a deterministic shortest path to another contact.
        const auto shortest_path = [&](const PixelCoord& from, const PixelCoord& to) {
            std::vector<int> parent(pixels.size(), -2);
            std::queue<int> frontier;
            const int start = index_of(from);
            parent[static_cast<std::size_t>(start)] = -1;
            frontier.push(start);
            while (!frontier.empty()) {
                const int cur = frontier.front();
                frontier.pop();
                for (const auto& d : kNeighbors) {
                    const PixelCoord q{pixels[static_cast<std::size_t>(cur)].row + d[0],
                                       pixels[static_cast<std::size_t>(cur)].col + d[1]};
                    const int qi = index_of(q);
                    if (qi >= 0 && parent[static_cast<std::size_t>(qi)] == -2) {
                        parent[static_cast<std::size_t>(qi)] = cur;
                        frontier.push(qi);
                    }
                }
            }
            std::vector<PixelCoord> path;
            int cur = index_of(to);
            while (cur >= 0 && parent[static_cast<std::size_t>(cur)] != -2) {
                path.push_back(pixels[static_cast<std::size_t>(cur)]);
                cur = parent[static_cast<std::size_t>(cur)];
            }
            return path;
        };

        std::vector<PixelCoord> contact_list;
        for (const auto& [r, c] : contacts)
            contact_list.push_back({r, c});
        for (const PixelCoord& p : contact_list)
            out.set(p.row, p.col, 255);
        for (std::size_t i = 0; i < contact_list.size(); ++i)
            for (std::size_t k = i + 1; k < contact_list.size(); ++k)
                for (const PixelCoord& p : shortest_path(contact_list[i], contact_list[k]))
                    out.set(p.row, p.col, 255);
    }
    return out;
}

WindErosionResult wind_erosion(const BinaryMap& map, const ErosionParams& params) {
    validate_params(params);

    WindErosionResult result{BinaryMap(map.rows(), map.cols()), {}, build_edge_graph(map)};
    EdgeGraph& graph = result.graph;
    ErosionTrace& trace = result.trace;
    trace.input_edge_pixels = map.edge_count();

    const auto record = [&](const std::string& name, const std::set<int>& before) {
        ErosionStepRecord rec;
        rec.name = name;
        rec.segments = static_cast<int>(graph.segments.size());
        rec.deleted = static_cast<int>(graph.deleted.size());
        for (int id : graph.deleted)
            rec.deleted_this_step += before.count(id) ? 0 : 1;
        for (int id : before)
            rec.restored_this_step += graph.deleted.count(id) ? 0 : 1;
        for (const EdgeSegment& s : graph.segments) {
            rec.ce_segments += s.ce ? 1 : 0;
            rec.pt_segments += s.pt ? 1 : 0;
        }
        trace.steps.push_back(std::move(rec));
    };

    std::set<int> before = graph.deleted;
    find_boundaries(graph, params.boundary_band);
    record("find_boundaries", before);

    before = graph.deleted;
    process_long_edges(graph, params.p_mean);
    record("process_long_edges", before);

    before = graph.deleted;
    split_edges(graph);
    record("split_edges", before);

    before = graph.deleted;
    clear_edges(graph, params.length_threshold);
    record("clear_edges", before);

    before = graph.deleted;
    restore_junctions(graph, params.cut_threshold, params.cut_fraction);
    record("restore_junctions", before);

    before = graph.deleted;
    restore_protected(graph, params.length_threshold);
    record("restore_protected", before);

    before = graph.deleted;
    restore_boundaries(graph);
    record("restore_boundaries", before);

    result.output = rasterize(graph);
    trace.output_edge_pixels = result.output.edge_count();
    trace.deleted_segment_pixels = segment_pixel_total(graph, graph.deleted);
    std::size_t kept_junctions = 0;
    for (const PixelCoord& j : graph.junctions)
        kept_junctions += result.output.is_edge(j.row, j.col) ? 1 : 0;
    trace.dropped_junction_pixels = graph.junctions.size() - kept_junctions;
    return result;
}

} // namespace edcssm
