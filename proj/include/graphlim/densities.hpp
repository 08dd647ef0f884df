#pragma once

#include "graphlim/graphs.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace graphlim {

/// Upper bound on the number of elementary steps a counting call may take.
inline constexpr double default_count_budget = 1e8;

/// Pins some vertices of F to vertices of G (or to classes of a stepfunction).
class PartialMap
{
public:
    PartialMap() = default;
    explicit PartialMap(std::vector<std::pair<int, int>> pins) : pins_(std::move(pins)) {}

    const std::vector<std::pair<int, int>> & pins() const noexcept { return pins_; }
    bool empty() const noexcept { return pins_.empty(); }

    /// Dense form: image of each vertex of F, -1 where free. Throws
    /// PreconditionError on a vertex outside [0, f_order), an image outside
    /// [0, target_order) or a vertex pinned twice.
    std::vector<int> dense(int f_order, int target_order) const;

private:
    std::vector<std::pair<int, int>> pins_;
};

/// hom(F,G) = sum over all maps phi of alpha_phi * prod_{uv in E(F)} beta(phi u, phi v).
double hom(const SimpleGraph & f, const WeightedGraph & g, double budget = default_count_budget);

/// Sum over extensions psi of phi of (alpha_psi / alpha_phi) * hom_psi.
double hom_partial(const SimpleGraph & f, const WeightedGraph & g, const PartialMap & phi,
    double budget = default_count_budget);

/// hom(F,G) / alpha_G^{|V(F)|}.
double t(const SimpleGraph & f, const WeightedGraph & g, double budget = default_count_budget);

double inj(const SimpleGraph & f, const WeightedGraph & g, double budget = default_count_budget);
double ind(const SimpleGraph & f, const WeightedGraph & g, double budget = default_count_budget);

/// k! * e_k(alpha): the falling factorial (n)_k for unit node weights.
double injective_normalizer(int k, const WeightedGraph & g);

double t0(const SimpleGraph & f, const WeightedGraph & g, double budget = default_count_budget);
double t1(const SimpleGraph & f, const WeightedGraph & g, double budget = default_count_budget);

/// Isomorphism-invariant real function on graphs with a memo cache shared
/// by copies. The flags are declarations checked by callers that need
/// them, not assumptions the class relies on.
class GraphParameter
{
public:
    using Evaluator = std::function<double(const SimpleGraph &)>;

    struct Flags
    {
        bool normalized = false;
        bool multiplicative = false;
        /// When false the cache is keyed by the labeled edge set, which
        /// permits tabulated functions on labeled graphs.
        bool isomorphism_invariant = true;
    };

    GraphParameter(std::string name, Evaluator evaluator, Flags flags);

    double operator()(const SimpleGraph & f) const;

    const std::string & name() const noexcept { return name_; }
    const Flags & flags() const noexcept { return flags_; }
    std::size_t cache_size() const;

    static GraphParameter hom_density(WeightedGraph g);
    static GraphParameter injective_density(WeightedGraph g);
    static GraphParameter induced_density(WeightedGraph g);
    /// Number of matchings, counting the empty one.
    static GraphParameter matching_count();

private:
    struct Cache;

    std::string name_;
    Evaluator evaluator_;
    Flags flags_;
    std::shared_ptr<Cache> cache_;
};

/// f†(F) = sum over supergraphs F' of F on V(F) of (-1)^{|E(F') \ E(F)|} f(F').
double dagger(const GraphParameter & f, const SimpleGraph & F);

/// f† as a parameter in its own right.
GraphParameter dagger_parameter(const GraphParameter & f);

std::size_t matching_count(const SimpleGraph & f);

struct HomInjGap
{
    double gap;
    double bound;

    bool holds(double slack = 1e-12) const noexcept { return gap <= bound + slack; }
};

/// |t(F,G) - t0(F,G)| against C(|V(F)|, 2) / |V(G)|.
HomInjGap hom_inj_gap_check(const SimpleGraph & f, const WeightedGraph & g, double budget = default_count_budget);

namespace detail
{
    enum class MapKind
    {
        all,
        injective,
        induced,
    };

    /// Weighted sum over maps V(F) -> V(G) extending `pinned` (-1 = free),
    /// with node weights applied to free vertices only. For injective kinds
    /// colliding pins give 0.
    double count_maps(const SimpleGraph & f, const WeightedGraph & g, const std::vector<int> & pinned, MapKind kind,
        double budget);
}

} // namespace graphlim
