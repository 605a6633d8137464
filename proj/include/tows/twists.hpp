#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tows/core.hpp"

namespace tows::twists {

// Injective I x J -> elements, stored row-major; rows follow I, columns follow J.
struct Mesh {
    int rows = 0;
    int cols = 0;
    std::vector<int> cells;

    Mesh() = default;
    Mesh(int r, int c) : rows(r), cols(c), cells(static_cast<std::size_t>(r * c), -1) {}
    int at(int i, int j) const { return cells[static_cast<std::size_t>(i * cols + j)]; }
    int& at(int i, int j) { return cells[static_cast<std::size_t>(i * cols + j)]; }
    Mesh transpose() const;
    Mesh sub(const std::vector<int>& row_idx, const std::vector<int>& col_idx) const;
    bool operator==(const Mesh&) const = default;
};

// Throws index_mismatch when the mesh is not injective or leaves the universe.
void check_mesh(const Structure& m, const Mesh& mu);

// Guards are empty or indexed by I (guard_a) / J (guard_b); empty means the end mesh
// is expected to be inner-vertical / inner-horizontal.
struct GuardedSequence {
    std::vector<int> guard_a;
    std::vector<Mesh> meshes;
    std::vector<int> guard_b;

    int length() const { return static_cast<int>(meshes.size()); }
    int rows() const { return meshes.empty() ? 0 : meshes.front().rows; }
    int cols() const { return meshes.empty() ? 0 : meshes.front().cols; }
};

// Key (otp(i,i'), otp(j,j')) with values -1 (<), 0 (=), 1 (>).
using IndexKey = std::pair<int, int>;

struct PairClass {
    bool regular = false;
    bool homogeneous = false;
    bool quasi_homogeneous = false;
    bool matching = false;
    bool conducting = false;
    bool disjoint = false;
    std::map<IndexKey, AtomicType> table;  // filled only when regular
};

// Throws index_mismatch if the meshes do not share their index sets.
PairClass pair_class(const Structure& m, const Mesh& mu, const Mesh& nu);

enum class OrderPattern {
    antichain,
    lex_ij,        // <_{I,J}
    lex_rev_i_j,   // <_{~I,J}
    lex_i_rev_j,   // <_{I,~J}
    lex_rev_i_rev_j,
    lex_ji,        // <_{J,I}
    lex_rev_j_i,
    lex_j_rev_i,
    lex_rev_j_rev_i,
    rows_i,        // <_I : j = j' and i < i'
    rows_rev_i,
    cols_j,        // <_J : i = i' and j < j'
    cols_rev_j,
    other,
};

const char* pattern_name(OrderPattern p);
bool is_lexicographic(OrderPattern p);       // one of the four I-major chains
bool is_antilexicographic(OrderPattern p);   // one of the four J-major chains

struct MeshClass {
    OrderPattern pattern = OrderPattern::other;
    bool regular = false;
    bool vertical = false;
    bool horizontal = false;
    bool pseudo_vertical = false;
    bool pseudo_horizontal = false;
    bool inner_vertical = false;
    bool inner_horizontal = false;
    bool chain = false;
    bool independent = false;
};

MeshClass mesh_class(const Structure& m, const Mesh& mu);

// Vertical guard of mu, one element per row, or none.
std::optional<std::vector<int>> find_vertical_guard(const Structure& m, const Mesh& mu);
bool is_vertical_guard(const Structure& m, const Mesh& mu, const std::vector<int>& guard);
bool is_pseudo_vertical(const Structure& m, const Mesh& mu);
bool is_inner_vertical(const Structure& m, const Mesh& mu);

struct PropertyResult {
    std::string name;
    bool pass = true;
    std::string witness;  // first violation, empty on success
};

struct TwisterReport {
    std::vector<PropertyResult> properties;  // tw1..tw14 in order
    bool exception_used = false;             // tw4 accepted a conducting end pair
    bool pass() const;
    std::string text() const;
};

TwisterReport validate_twister(const Structure& m, const GuardedSequence& seq);

struct CleanReport {
    int preclean_type = 0;  // 0 when no pre-clean type applies
    bool clean = false;
    std::vector<std::string> failures;
    std::string text() const;
};

// Throws not_a_twister when validate_twister fails.
CleanReport validate_clean(const Structure& m, const GuardedSequence& seq);

enum class MatchType { forward, backward, forward_edge, backward_edge, edge, edge_low, edge_chain, edge_high };
enum class StarType { v_cover, v_cover_edge, v_edge, h_cover, h_cover_edge, h_edge };
const char* match_name(MatchType t);
const char* star_name(StarType t);

// Pattern on equal-index cells of consecutive meshes; throws pattern_not_matched.
MatchType matching_type(const Structure& m, const Mesh& first, const Mesh& second);
// `guard` is indexed by I when vertical, by J otherwise.
StarType star_type(const Structure& m, const std::vector<int>& guard, const Mesh& mu, bool vertical);

// Structure together with its distinguished guarded sequence.
struct LabelledTwist {
    Structure structure;
    GuardedSequence seq;
};

struct Core {
    LabelledTwist twist;
    int type = 0;
    // Source lines of the label declarations, for diagnostics (0 when unknown).
    int line_guard_a = 0;
    int line_guard_b = 0;
    std::vector<int> line_mesh;

    int length() const { return twist.seq.length(); }
};

// `twist 1` files: label lines followed by an embedded `tows 1` block.
LabelledTwist parse_twist(const std::string& text);
std::string write_twist(const LabelledTwist& t);
// `core 1` files: `type T`, label lines, then the embedded `tows 1` block.
Core parse_core(const std::string& text);
std::string write_core(const Core& c);
// Labels alone (`labels 1`), resolved against a separate structure.
GuardedSequence parse_labels(const std::string& text, const Structure& m);
std::string write_labels(const Structure& m, const GuardedSequence& seq);

struct CoreReport {
    std::vector<std::string> violations;
    bool valid() const { return violations.empty(); }
    std::string text() const;
};

CoreReport validate_core(const Core& c);

// Order-n extrapolation: every pairwise atomic type is copied from the core pair with
// the same index comparison signature.
LabelledTwist build_twist(const Core& c, int n);

// Order-2 subtwist on the first two indices of each side, plus the root.
Core core_of(const LabelledTwist& t);

// Searches a clean twister of order `order` and length at most max_len (longest first).
// For order 2 acceptance goes through validate_core, since inner guards need |J| >= 3.
std::optional<GuardedSequence> find_twist(const Structure& m, int max_len, int order = 2, int max_size = -1);

// Pre-clean type of an order >= 3 sequence, 0 when none.
int preclean_type(const Structure& m, const GuardedSequence& seq);

}  // namespace tows::twists
