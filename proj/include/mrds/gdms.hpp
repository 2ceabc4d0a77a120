#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mrds/ratmap.hpp"
#include "mrds/rng.hpp"

namespace mrds {

enum class FamilyKind { Atoms, Disk };

/// Parametrization of a disk (or annulus) family.
///  - QuadraticC: z^2 + c, parameter c.
///  - CoefficientDisk: base map with numerator coefficient `coeff_index` set
///    to the parameter.
///  - ScaledNumerator: base numerator multiplied by the parameter.
enum class DiskTemplate { QuadraticC, CoefficientDisk, ScaledNumerator };

struct Atom {
    RationalMap map;
    double weight = 1.0;
};

struct DiskFamily {
    DiskTemplate tmpl = DiskTemplate::QuadraticC;
    RationalMap base;
    int coeff_index = 0;
    cplx center{0.0, 0.0};
    double radius = 0.0;
    double inner_radius = 0.0;  // > 0 gives an annulus
};

/// A map drawn from a family: an atom index, or a disk parameter.
struct MapChoice {
    int atom = -1;
    cplx param{0.0, 0.0};
};

/// The support of one edge measure: weighted atoms or a uniform disk family.
class MapFamily {
public:
    static MapFamily atoms(std::vector<Atom> atoms);
    static MapFamily dirac(RationalMap f) { return atoms({Atom{std::move(f), 1.0}}); }
    static MapFamily disk(DiskFamily d);
    static MapFamily quadratic(cplx center, double radius);

    FamilyKind kind() const { return kind_; }
    const std::vector<Atom>& atom_list() const { return atoms_; }
    const DiskFamily& disk_params() const { return disk_; }

    RationalMap map_at(cplx param) const;
    RationalMap map_for(const MapChoice& c) const;
    MapChoice sample(CounterRng& rng) const;

    /// Parameter points of the delta-net: hexagonal grid of pitch
    /// delta * radius plus boundary rings at pitch delta * radius / 4.
    std::vector<cplx> net_parameters(double delta) const;
    std::vector<RationalMap> support_net(double delta) const;
    /// Equal-weight quadrature for the uniform disk/annulus measure,
    /// or the atoms with their normalized weights.
    std::vector<std::pair<RationalMap, double>> quadrature(int size) const;

    bool is_polynomial() const;
    int max_degree() const;
    /// Copy with the disk radius (and inner radius) scaled to `s` of the
    /// original outer radius; radius 0 collapses to a Dirac atom.
    MapFamily with_radius(double s) const;

private:
    FamilyKind kind_ = FamilyKind::Atoms;
    std::vector<Atom> atoms_;
    double atom_total_ = 0.0;
    DiskFamily disk_;
};

struct Edge {
    int from = 0;
    int to = 0;
    double weight = 1.0;
    MapFamily family;
};

inline constexpr int kMaxVertices = 64;
inline constexpr double kNetDelta = 0.25;

/// Directed graph with per-edge map families, transition matrix P and
/// stationary vector p. Vertices are 0-based.
class Gdms {
public:
    static Gdms build(int vertices, std::vector<Edge> edges);

    int vertices() const { return m_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[std::size_t(e)]; }
    const std::vector<int>& out_edges(int v) const { return out_[std::size_t(v)]; }
    const std::vector<int>& in_edges(int v) const { return in_[std::size_t(v)]; }
    const std::vector<std::vector<double>>& transition() const { return P_; }
    const std::vector<double>& stationary() const { return p_; }
    double residual() const { return residual_; }
    /// Closed walk visiting every vertex (strong-connectivity certificate).
    const std::vector<int>& cycle_cover() const { return cycle_cover_; }

    /// Support nets per edge for the given relative delta.
    std::vector<std::vector<RationalMap>> nets(double delta = kNetDelta) const;

    struct Step {
        int edge;
        MapChoice choice;
    };
    Step sample_step(int vertex, CounterRng& rng) const;

    bool all_polynomial() const;
    int max_degree() const;
    /// Length of the shortest closed walk through `vertex`.
    int shortest_loop(int vertex) const;
    /// Every vertex has a single out-edge whose support is a single map.
    bool deterministic() const;

private:
    int m_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    std::vector<std::vector<double>> P_;
    std::vector<double> p_;
    double residual_ = 0.0;
    std::vector<int> cycle_cover_;
};

/// Stationary probability vector of an irreducible row-stochastic matrix.
std::vector<double> stationary_vector(const std::vector<std::vector<double>>& P, double* residual = nullptr);

/// Admissible edge words of length N from `from` (and ending at `to` when
/// given), in lexicographic order of edge indices.
void for_each_admissible_word(const Gdms& g, int length, int from, std::optional<int> to,
                              const std::function<void(const std::vector<int>&)>& visit);
std::vector<std::vector<int>> admissible_words(const Gdms& g, int length, int from,
                                               std::optional<int> to = std::nullopt);

}  // namespace mrds
