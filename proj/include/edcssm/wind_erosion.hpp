#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "edcssm/grid.hpp"

namespace edcssm {

// Tuning parameters of the edge-graph filter.
struct ErosionParams {
    double p_mean = 3.0;   // protected-length multiplier (PT if length > p_mean * mean)
    int length_threshold = 10; // L_t: minimum child length that survives step 4
    int cut_threshold = 3;     // C_t: restore a parent only when fewer children were cut
    double cut_fraction = 0.5; // p_t: ... and when cut children < p_t * total children
    int boundary_band = 2;     // pixels within this distance of the border mark CE

    friend bool operator==(const ErosionParams&, const ErosionParams&) = default;
};

// A junction the chain passes straight through: the bridge sits between
// pixels[position - 1] and pixels[position]. For cycles a closing bridge may
// carry position == pixels.size() (between the last pixel and the first).
struct SegmentBridge {
    int position = 0;
    PixelCoord junction;

    friend bool operator==(const SegmentBridge&, const SegmentBridge&) = default;
};

// A traced edge segment. Pixels are an ordered chain excluding junction
// pixels; consecutive pixels are 8-adjacent except across recorded bridges.
struct EdgeSegment {
    int id = -1;
    std::vector<PixelCoord> pixels;
    std::vector<SegmentBridge> bridges; // ascending by position
    bool is_cycle = false;
    bool ce = false; // boundary-exempt (step 1)
    bool pt = false; // length-protected (step 2)

    int length() const { return static_cast<int>(pixels.size()); }

    // 0 endpoints for cycles, 1 for single-pixel chains, else 2.
    std::vector<PixelCoord> endpoints() const {
        if (is_cycle || pixels.empty()) return {};
        if (pixels.size() == 1) return {pixels.front()};
        return {pixels.front(), pixels.back()};
    }
};

struct EdgeGraph {
    int rows = 0;
    int cols = 0;
    std::vector<EdgeSegment> segments;
    std::vector<PixelCoord> junctions;
    // parent segment id -> child segment ids (filled by split_edges;
    // childless segments map to themselves).
    std::map<int, std::vector<int>> parent_children;
    std::set<int> deleted;
    int next_id = 0;

    const EdgeSegment* find_segment(int id) const;
};

struct ErosionStepRecord {
    std::string name;
    int segments = 0;        // segments alive in the graph after the step
    int deleted = 0;         // ids in the deleted set after the step
    int deleted_this_step = 0;
    int restored_this_step = 0;
    int ce_segments = 0;
    int pt_segments = 0;
};

struct ErosionTrace {
    std::vector<ErosionStepRecord> steps; // exactly 7 after a full run
    std::size_t input_edge_pixels = 0;
    std::size_t output_edge_pixels = 0;
    std::size_t deleted_segment_pixels = 0;
    std::size_t dropped_junction_pixels = 0;
};

struct WindErosionResult {
    BinaryMap output;
    ErosionTrace trace;
    EdgeGraph graph; // final state, after all 7 steps
};

// Decomposes an edge map into junction pixels (edge pixels with >= 3 edge
// neighbors) and traced chains. Chains continue straight through a junction
// when two chain ends attach at exactly opposite pixels across it.
EdgeGraph build_edge_graph(const BinaryMap& map);

// Step 1: segments touching the border band become CE; CE membership does not
// propagate through junctions (inward branches stay ordinary segments).
void find_boundaries(EdgeGraph& graph, int boundary_band);

// Step 2: splits non-CE segments longer than twice the non-CE mean length at
// their junctions, then marks non-CE segments longer than p_mean times the
// recomputed mean as PT.
void process_long_edges(EdgeGraph& graph, double p_mean);

// Step 3: splits every segment at its junctions and records parent -> child
// ids; segments without junctions become their own parent.
void split_edges(EdgeGraph& graph);

// Step 4: deletes non-CE, non-PT children shorter than length_threshold
// (this covers spurs: short children hanging off a junction).
void clear_edges(EdgeGraph& graph, int length_threshold);

// Step 5: per parent, with C_a children of which C_cut were deleted: restores
// all children when C_cut < cut_threshold and C_cut < cut_fraction * C_a;
// otherwise deletes the parent with all its children.
void restore_junctions(EdgeGraph& graph, int cut_threshold, double cut_fraction);

// Step 6: restores every PT segment regardless of prior deletion; remaining
// deleted short segments stay deleted (final short-edge sweep).
void restore_protected(EdgeGraph& graph, int length_threshold);

// Step 7: restores every CE segment.
void restore_boundaries(EdgeGraph& graph);

// Renders surviving segments plus junction pixels that have at least two
// surviving attachments (chain ends of surviving segments 8-adjacent to the
// junction pixel).
BinaryMap rasterize(const EdgeGraph& graph);

// Runs the full 7-step filter and returns the output map with its trace.
WindErosionResult wind_erosion(const BinaryMap& map, const ErosionParams& params);

} // namespace edcssm
