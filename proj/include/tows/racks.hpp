#pragma once

#include <optional>
#include <set>
#include <string>

#include "tows/core.hpp"
#include "tows/graph.hpp"
#include "tows/twists.hpp"

namespace tows::racks {

// Layer 0 is part A, layer h+1 is part B, layers 1..h are subdivision vertices.
struct GroundingSpec {
    int h = 0;
    std::set<int> nr;  // layers E-adjacent to the root, within 0..h+1
};

struct RackSpec {
    int h = 0;
    std::set<int> nr;  // within 0..h+1
    std::set<int> ca;  // within 1..h+1, layers hung below max A
    std::set<int> cb;  // within 1..h, layers hung below max B; disjoint from ca

    bool operator==(const RackSpec&) const = default;
    std::string text() const;
};

// Both throw invalid_spec on range or disjointness violations and on empty parts.
// Subdivision vertices are named "a~b~k" with k the layer index.
Structure grounding(const OrderedBipartite& g, const GroundingSpec& spec);
Structure rack(const OrderedBipartite& g, const RackSpec& spec);

// Induced substructure of the twist of `core` carrying marks "V" and "D" for Shrink.
// Throws invalid_core for an invalid core and invalid_spec for empty parts.
Structure host(const twists::Core& core, const OrderedBipartite& g);

struct Predicates {
    std::set<int> small;    // at most two children
    std::set<int> big;      // complement of small
    std::set<int> m;        // children of the root
    std::set<int> regular;  // big parent, children plus non-root E-neighbours equal two
};

Predicates mark_predicates(const Structure& m);

struct Calibration {
    bool ok = false;
    bool is_rack = false;  // type-3 cores produce racks, the others groundings
    RackSpec spec;         // ca and cb empty for groundings
    std::string failure;
};

// Parameters read off the pipeline result on the single-edge input.
Calibration calibrate(const twists::Core& core);

struct PipelineReport {
    bool ok = false;
    Calibration calibration;
    std::string failure;
    std::string text() const;
};

// shrink(host) compared by isomorphism with the grounding or rack of g.
PipelineReport verify_pipeline(const twists::Core& core, const OrderedBipartite& g);
// Same, reusing a calibration and checking a caller-supplied marked host.
PipelineReport verify_host(const Calibration& cal, const OrderedBipartite& g, const Structure& marked_host);

}  // namespace tows::racks
