#ifndef CCCLOSE_DESCENT_HPP
#define CCCLOSE_DESCENT_HPP

#include "ccclose/linalg.hpp"
#include "ccclose/newton.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ccclose {

class DescentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Union of X-orbit closures, each given by the coordinates vanishing on it.
/// {all false} is X itself; an empty list is the empty set.
struct ClosedSubset {
    std::vector<ZeroSet> orbits;

    static ClosedSubset whole(std::size_t n) { return {{ZeroSet(n, false)}}; }
    static ClosedSubset orbit_closure(const ZeroSet& zero) { return {{zero}}; }
    /// Zero locus of monomial equations such as "x*y, z"; anything that is not
    /// a monomial cuts out a set that is not orbit-closed and is rejected.
    static ClosedSubset parse(std::string_view equations, const VarList& vars);

    /// Whether a point with this zero pattern lies in the subset.
    bool contains(const ZeroSet& point_zero) const;
    ClosedSubset intersect(const ClosedSubset& other) const;
    /// Keeps only maximal orbit closures, sorted.
    ClosedSubset normalized() const;
    std::string str(const VarList& vars) const;

    friend bool operator==(const ClosedSubset&, const ClosedSubset&) = default;
};

/// Images of the target patch coordinates as polynomials in the source patch.
struct PatchMap {
    std::size_t target = 0;
    std::vector<LaurentPoly> images;
};

/// One affine piece of a chart-model Y: a closed subscheme of affine space
/// cut out by `relations`, with its map to X and the matrix of f.
struct Patch {
    std::string label;
    VarList coords;
    std::vector<LaurentPoly> relations;
    std::vector<LaurentPoly> map_to_x;
    /// r x rank(F); row i is the image of the i-th basis vector of E.
    PolyMatrix f;
    /// x-exponent of the generator trivializing each F summand, when monomial.
    std::vector<Exponent> frames;
    /// Structure map to the parent problem and composite map to the root.
    PatchMap to_parent;
    PatchMap to_root;
    /// Patch before any restriction and the coordinates restrictions dropped.
    std::size_t lineage = 0;
    ZeroSet dropped;

    std::size_t rank_f() const { return f.empty() ? 0 : f.front().size(); }
};

struct FinitePoint {
    std::string label;
    std::size_t base = 0;
    /// r x dim F_y.
    ScalarMatrix f;
    std::size_t parent = 0;
    std::size_t root = 0;
};

/// A finite Y over finitely many points of X.
struct FiniteModel {
    std::vector<std::vector<Scalar>> base_points;
    std::vector<FinitePoint> points;

    std::vector<std::size_t> fiber(std::size_t base) const;
};

/// A map of finite models: target point index for every source point.
using FiniteMap = std::vector<std::size_t>;

/// Chart-level map: one PatchMap per new patch; the new patches carry their
/// own coordinates and relations.
struct ChartMap {
    std::vector<std::string> labels;
    std::vector<VarList> coords;
    std::vector<std::vector<LaurentPoly>> relations;
    std::vector<PatchMap> maps;
};

/// Embedding j: F' -> F, given per patch (rank F' x rank F) or per point,
/// with a point where j has full rank.
struct FactorData {
    std::vector<PolyMatrix> patch_j;
    std::vector<ScalarMatrix> point_j;
    std::size_t witness_piece = 0;
    /// Coordinates of the witness point on its patch; unused for finite models.
    std::vector<Scalar> witness_point;
};

enum class ScionKind { Root, Pullback, Diagonal, Factor, Restrict };

const char* to_string(ScionKind kind);

struct RootIdealArgs {
    VarList vars;
    std::vector<Exponent> gens;
};
struct RootFiniteArgs {
    VarList vars;
    std::size_t rank_e = 0;
    FiniteModel model;
};
struct PullbackArgs {
    std::variant<ChartMap, FiniteMap> map;
};
struct DiagonalArgs {
    /// New pieces are shared by all maps: chart maps use the first entry's
    /// coordinates, finite maps must have equal length.
    std::vector<std::variant<ChartMap, FiniteMap>> maps;
};
struct FactorArgs {
    FactorData data;
};
struct RestrictArgs {
    ClosedSubset z;
};

using ScionArgs = std::variant<RootIdealArgs, RootFiniteArgs, PullbackArgs, DiagonalArgs, FactorArgs, RestrictArgs>;

/// Provenance node; the chain of parents records every operation applied
/// since the root.
struct ScionNode {
    ScionKind kind = ScionKind::Root;
    std::shared_ptr<const ScionNode> parent;
    ScionArgs args;
    bool structure_map_surjective = true;
    std::string justification;
    /// Factor nodes: description of the dense-open witness.
    std::string witness;

    std::size_t depth() const { return parent ? parent->depth() + 1 : 0; }
};

struct DescentProblem {
    VarList x_vars;
    std::size_t rank_e = 0;
    /// Closed subset of X the problem lives over.
    ClosedSubset z;
    bool finite = false;
    std::vector<Patch> patches;
    FiniteModel model;
    std::shared_ptr<const ScionNode> provenance;
    /// The blow-up atlas for problems derived from an ideal.
    std::shared_ptr<const ChartAtlas> atlas;

    std::size_t dim() const { return x_vars.size(); }
    std::size_t pieces() const { return finite ? model.points.size() : patches.size(); }
};

DescentProblem from_ideal(const MonomialIdeal& ideal);
DescentProblem from_ideal(const VarList& vars, const std::vector<Exponent>& gens);
DescentProblem from_finite_model(const VarList& vars, std::size_t rank_e, FiniteModel model);

DescentProblem scion_pullback(const DescentProblem& d, const std::variant<ChartMap, FiniteMap>& map);
DescentProblem scion_diagonal(const DescentProblem& d, const std::vector<std::variant<ChartMap, FiniteMap>>& maps);
DescentProblem scion_factor(const DescentProblem& d, const FactorData& data);
DescentProblem restrict_to(const DescentProblem& d, const ClosedSubset& z);

/// Identity map onto every patch or point.
std::variant<ChartMap, FiniteMap> identity_map(const DescentProblem& d);
/// The m projections of the m-fold fiber product over X. Chart models must
/// have constant maps to X on every patch (a point base); coordinates of the
/// a-th factor get the suffix "_a".
std::vector<std::variant<ChartMap, FiniteMap>> fiber_power_projections(const DescentProblem& d, std::size_t m);
/// scion_diagonal over fiber_power_projections.
DescentProblem fiber_power(const DescentProblem& d, std::size_t m);
/// Finite models: F' = the line through the rows of f at each point, found
/// by 2x2 minors. Throws when some point has rank above one.
FactorData rank_one_factorization(const DescentProblem& d);

/// Finite models: base change along a map of base point sets (new base b
/// maps to base_map[b]); the fibers are copied.
DescentProblem flat_pullback(const DescentProblem& d, const std::vector<std::size_t>& base_map);

/// Chart data or point data equality, ignoring provenance and structure maps.
bool same_data(const DescentProblem& a, const DescentProblem& b);
/// Re-executes the recorded operations from the root.
DescentProblem replay(const ScionNode& node);
/// One line per operation, root first.
std::string provenance_dump(const ScionNode& node);

/// Monomial ratio x^{frame_a - frame_b} relating the trivializations of F
/// summand k on two patches.
Exponent transition_exponent(const DescentProblem& d, std::size_t a, std::size_t b, std::size_t k);

/// Scions keyed by their provenance dump: two scions are shared only when
/// they were built by the identical operation sequence.
class ScionCache {
public:
    template <class Build>
    DescentProblem get_or_build(const std::string& key, Build&& build) {
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = entries_.find(key);
            if (it != entries_.end()) return it->second;
        }
        DescentProblem d = build();
        std::lock_guard<std::mutex> lock(mutex_);
        return entries_.emplace(key, std::move(d)).first->second;
    }
    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return entries_.size();
    }

private:
    mutable std::mutex mutex_;
    std::map<std::string, DescentProblem> entries_;
};

}  // namespace ccclose

#endif  // CCCLOSE_DESCENT_HPP
