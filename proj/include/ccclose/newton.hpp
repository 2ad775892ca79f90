#ifndef CCCLOSE_NEWTON_HPP
#define CCCLOSE_NEWTON_HPP

#include "ccclose/poly.hpp"

#include <string>
#include <vector>

namespace ccclose {

/// Largest ambient dimension the toric constructions support.
inline constexpr std::size_t kMaxDimension = 3;

/// Zero pattern of a coordinate orbit: zero[j] means coordinate j vanishes.
using ZeroSet = std::vector<bool>;

struct NewtonPolyhedron {
    std::size_t dim = 0;
    std::vector<Exponent> vertices;
    /// Position of each vertex in the generator list it was built from.
    std::vector<std::size_t> vertex_generators;
};

NewtonPolyhedron newton_polyhedron(const MonomialIdeal& ideal);
/// Generator list version; repeated or redundant generators are allowed.
NewtonPolyhedron newton_polyhedron(std::size_t dim, const std::vector<Exponent>& gens);

/// Unimodular fan refining the inner normal fan of a Newton polyhedron.
struct Fan {
    std::size_t dim = 0;
    std::vector<Exponent> rays;
    /// Ray indices per maximal cone, ascending.
    std::vector<std::vector<std::size_t>> max_cones;
    /// Index into NewtonPolyhedron::vertices of the vertex each cone selects.
    std::vector<std::size_t> cone_vertex;

    /// Whether w lies in the given maximal cone.
    bool cone_contains(std::size_t cone, const Exponent& w) const;
};

Fan normal_fan(const NewtonPolyhedron& polyhedron);

/// One affine toric chart of the blow-up.
struct Chart {
    std::size_t cone = 0;
    VarList coords;
    /// Ray vectors of the cone; chart coordinate k belongs to rays[k].
    std::vector<Exponent> rays;
    /// x_j as a monomial in the chart coordinates.
    std::vector<LaurentPoly> map_to_x;
    /// Generator exponent trivializing the pulled-back ideal on this chart.
    Exponent e_generator;
    std::size_t e_index = 0;
    /// Exponent of the chart monomial that x^{e_generator} pulls back to.
    Exponent e_pullback;
    /// f_i o map / u^{e_pullback}; always genuine monomials.
    std::vector<LaurentPoly> f_tilde;

    /// g o map / u^{e_pullback}, the chart expression of g as a section of O(-E).
    LaurentPoly pullback(const LaurentPoly& g) const;
    /// Coordinates of X that vanish on the image of the chart orbit `zero`.
    ZeroSet image_zero_set(const ZeroSet& zero) const;
};

struct ChartAtlas {
    VarList x_vars;
    std::vector<Exponent> gens;
    NewtonPolyhedron polyhedron;
    Fan fan;
    std::vector<Chart> charts;

    std::size_t dim() const { return x_vars.size(); }
    std::size_t rank() const { return gens.size(); }
};

ChartAtlas blowup_charts(const MonomialIdeal& ideal);
ChartAtlas blowup_charts(const VarList& vars, const std::vector<Exponent>& gens);

/// A torus orbit of one chart together with the X-orbit it dominates.
struct Stratum {
    std::size_t chart = 0;
    ZeroSet zero_set;
    std::vector<std::size_t> torus_coords;
    ZeroSet image_stratum;
    bool exceptional = false;
};

/// Every orbit of every chart, flagged when its image lies in V(I).
std::vector<Stratum> exceptional_strata(const ChartAtlas& atlas);

/// Whether the X-orbit with this zero pattern lies in V(I).
bool in_vanishing_locus(const std::vector<Exponent>& gens, const ZeroSet& zero);
/// X-orbits inside V(I), ordered by decreasing dimension, then lexicographically.
std::vector<ZeroSet> vanishing_orbits(const std::vector<Exponent>& gens, std::size_t dim);
/// Whether `inner` lies in the closure of the orbit `outer`.
bool orbit_in_closure(const ZeroSet& inner, const ZeroSet& outer);
std::size_t orbit_dimension(const ZeroSet& zero);
/// "x=y=0", or "torus" for the open orbit.
std::string orbit_label(const VarList& vars, const ZeroSet& zero);

}  // namespace ccclose

#endif  // CCCLOSE_NEWTON_HPP
