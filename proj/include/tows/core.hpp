#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace tows {

enum class ErrorKind {
    element_not_found,
    signature_mismatch,
    invalid_structure,
    parse,
    not_a_cover,
    forbidden,
    not_found,
    invalid_marking,
    decode_failure,
    size_bound_exceeded,
    invalid_basis_change,
    part_mismatch,
    invalid_core,
    index_mismatch,
    pattern_not_matched,
    invalid_spec,
    invalid_sequence,
    not_a_twister,
    unlabeled_input,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& detail);
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Enumeration bound shared by every desk-scale search; TOWS_SIZE_LIMIT overrides.
int size_limit(int fallback = 10);

struct Symbol {
    std::string name;
    int arity = 2;
    bool symmetric = false;
    bool operator==(const Symbol&) const = default;
};

struct Signature {
    std::vector<Symbol> symbols;

    int find(std::string_view name) const;  // -1 when absent
    int add(const std::string& name, int arity, bool symmetric);
    int max_arity() const;
    bool operator==(const Signature&) const = default;

    static Signature graph();  // single symmetric E/2
};

using Tuple = std::vector<int>;

// Finite structure with a tree-order given by parent pointers.
// Elements are indices 0..size()-1; the index order is the global element order.
struct Structure {
    Signature sig;
    std::vector<std::string> names;
    std::vector<int> parent;             // -1 exactly at the root
    int root = -1;
    std::vector<std::set<Tuple>> rels;   // one set per signature symbol
    std::map<std::string, std::set<int>> marks;

    int size() const { return static_cast<int>(names.size()); }
    int add_element(const std::string& name);  // parent unset (-1)
    int id(std::string_view name) const;       // throws element_not_found
    std::optional<int> find(std::string_view name) const;
    void set_signature(Signature s);
    // Symmetric tuples are sorted; loops on symmetric symbols are rejected.
    void add_tuple(int sym, Tuple t);
    bool has_tuple(int sym, const Tuple& t) const;
    int symbol(std::string_view name) const;   // throws signature_mismatch
    // Checks the parent map is a single tree rooted at root.
    void validate() const;
    void rebuild_index();

    bool strictly_below(int x, int y) const;    // x is a proper ancestor of y
    bool below_or_equal(int x, int y) const { return x == y || strictly_below(x, y); }
    int depth(int x) const;
    std::vector<std::vector<int>> children() const;
    std::vector<int> ancestors(int x) const;   // x, parent(x), ..., root
    const std::set<int>& mark(const std::string& name) const;  // empty set if missing
    bool is_graph() const;  // signature is exactly one symmetric binary symbol

    std::unordered_map<std::string, int> index;
};

enum class OrderRel { below, above, equal, incomparable, cover_below, cover_above };
const char* order_rel_name(OrderRel r);

OrderRel order_rel(const Structure& m, int x, int y);
OrderRel order_rel(const Structure& m, std::string_view x, std::string_view y);
int lca(const Structure& m, int x, int y);

// Literal table of a tuple: equalities, strict order facts, relation facts over
// every index combination, in a fixed enumeration.
struct AtomicType {
    int length = 0;
    std::vector<bool> literals;
    bool operator==(const AtomicType&) const = default;
    bool operator<(const AtomicType& o) const { return std::tie(length, literals) < std::tie(o.length, o.literals); }
};

AtomicType atp(const Structure& m, const std::vector<int>& tuple);

// Pairwise comparisons over positions (0,1),(0,2),...,(k-2,k-1); values -1,0,1.
using OrderType = std::vector<int>;
OrderType otp(const std::vector<int>& values);

Structure induced(const Structure& m, const std::vector<int>& keep);
Structure induced(const Structure& m, const std::set<int>& keep);

// Elements of `keep` survive (root always); parents become nearest surviving ancestors.
// Tuples and marks are restricted to survivors.
Structure restrict_to(const Structure& m, const std::vector<bool>& keep);

struct IsoOptions {
    bool respect_marks = false;
};

// Bijection m -> n preserving root, parent and every relation.
std::optional<std::vector<int>> iso(const Structure& m, const Structure& n, IsoOptions opt = {});
bool isomorphic(const Structure& m, const Structure& n, IsoOptions opt = {});

// Iso-invariant hash (stable colour-refinement histogram).
std::uint64_t invariant_hash(const Structure& m, IsoOptions opt = {});

// Structures kept up to isomorphism, insertion ordered.
class IsoClassSet {
public:
    explicit IsoClassSet(IsoOptions opt = {}) : opt_(opt) {}
    // Returns the class index and whether it was new.
    std::pair<int, bool> insert(const Structure& s);
    std::optional<int> find(const Structure& s) const;
    const std::vector<Structure>& items() const { return items_; }
    int size() const { return static_cast<int>(items_.size()); }

private:
    IsoOptions opt_;
    std::vector<Structure> items_;
    std::vector<std::vector<std::uint64_t>> colors_;
    std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
};

}  // namespace tows
