#include "graphlim/densities.hpp"

#include "graphlim/errors.hpp"
#include "graphlim/parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace graphlim {

namespace
{
    using detail::MapKind;

    std::string budget_message(double work, double budget)
    {
        return "counting needs about " + std::to_string(work) + " steps, budget is " + std::to_string(budget);
    }

    // Largest independent set among `candidates` in F (exact for up to 20
    // candidates, greedy beyond).
    std::vector<int> independent_leaves(const SimpleGraph & f, const std::vector<int> & candidates)
    {
        const int c = static_cast<int>(candidates.size());
        if (c <= 20) {
            std::uint32_t best = 0;
            int best_size = -1;
            for (std::uint32_t s = 0; s < (1u << c); ++s) {
                int size = std::popcount(s);
                if (size <= best_size)
                    continue;
                bool independent = true;
                for (int i = 0; i < c && independent; ++i)
                    if (s >> i & 1)
                        for (int j = i + 1; j < c; ++j)
                            if ((s >> j & 1) && f.adjacent(candidates[i], candidates[j])) {
                                independent = false;
                                break;
                            }
                if (independent) {
                    best = s;
                    best_size = size;
                }
            }
            std::vector<int> out;
            for (int i = 0; i < c; ++i)
                if (best >> i & 1)
                    out.push_back(candidates[i]);
            return out;
        }

        auto order = candidates;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return f.degree(a) < f.degree(b); });
        std::vector<int> out;
        for (int v : order)
            if (std::none_of(out.begin(), out.end(), [&](int u) { return f.adjacent(u, v); }))
                out.push_back(v);
        return out;
    }

    // Orders `vertices` so each one has as many earlier neighbours (or
    // pinned neighbours) as possible; zero edge weights then prune early.
    std::vector<int> connectivity_order(const SimpleGraph & f, std::vector<int> vertices, const std::vector<int> & pinned)
    {
        std::vector<char> placed(f.order(), 0);
        for (int v = 0; v < f.order(); ++v)
            if (pinned[v] >= 0)
                placed[v] = 1;
        std::vector<int> order;
        while (! vertices.empty()) {
            auto best = std::max_element(vertices.begin(), vertices.end(), [&](int a, int b) {
                auto score = [&](int v) {
                    int s = 0;
                    for (int w : f.neighbours(v))
                        s += placed[w];
                    return std::pair{s, f.degree(v)};
                };
                return score(a) < score(b);
            });
            order.push_back(*best);
            placed[*best] = 1;
            vertices.erase(best);
        }
        return order;
    }

    struct Target
    {
        int n;
        const double * alpha;
        const double * beta;

        double b(int x, int y) const noexcept { return beta[static_cast<std::size_t>(x) * n + y]; }
    };

    class HomCounter
    {
    public:
        HomCounter(const SimpleGraph & f, const WeightedGraph & g, const std::vector<int> & pinned, double budget) :
            f_(f),
            target_{g.order(), g.alphas().data(), g.betas().data()},
            image_(pinned)
        {
            std::vector<int> free;
            for (int v = 0; v < f.order(); ++v)
                if (pinned[v] < 0)
                    free.push_back(v);
            leaves_ = independent_leaves(f, free);
            std::vector<int> core;
            for (int v : free)
                if (std::find(leaves_.begin(), leaves_.end(), v) == leaves_.end())
                    core.push_back(v);
            core_ = connectivity_order(f, core, pinned);

            std::vector<char> before(f.order(), 0);
            for (int v = 0; v < f.order(); ++v)
                before[v] = pinned[v] >= 0;
            for (int v : core_) {
                std::vector<int> back;
                for (int w : f.neighbours(v))
                    if (before[w])
                        back.push_back(w);
                back_.push_back(std::move(back));
                before[v] = 1;
            }

            const double n = target_.n;
            double leaf_work = 1.0;
            for (int v : leaves_)
                leaf_work += n * std::max(1, f.degree(v));
            double work = std::pow(n, static_cast<double>(core_.size())) * leaf_work;
            if (work > budget)
                throw BudgetExceeded(budget_message(work, budget));
        }

        double run()
        {
            double fixed = 1.0;
            for (auto [u, v] : f_.edges())
                if (image_[u] >= 0 && image_[v] >= 0)
                    fixed *= target_.b(image_[u], image_[v]);
            if (fixed == 0.0)
                return 0.0;
            return fixed * descend(0);
        }

    private:
        double descend(std::size_t depth)
        {
            if (depth == core_.size())
                return leaf_product();
            const int v = core_[depth];
            const auto & back = back_[depth];
            double sum = 0.0;
            for (int x = 0; x < target_.n; ++x) {
                double w = target_.alpha[x];
                for (int u : back) {
                    w *= target_.b(image_[u], x);
                    if (w == 0.0)
                        break;
                }
                if (w == 0.0)
                    continue;
                image_[v] = x;
                sum += w * descend(depth + 1);
            }
            image_[v] = -1;
            return sum;
        }

        double leaf_product() const
        {
            double product = 1.0;
            for (int v : leaves_) {
                double s = 0.0;
                const auto & nb = f_.neighbours(v);
                for (int x = 0; x < target_.n; ++x) {
                    double w = target_.alpha[x];
                    for (int u : nb)
                        w *= target_.b(image_[u], x);
                    s += w;
                }
                product *= s;
                if (product == 0.0)
                    break;
            }
            return product;
        }

        const SimpleGraph & f_;
        Target target_;
        std::vector<int> image_;
        std::vector<int> leaves_;
        std::vector<int> core_;
        std::vector<std::vector<int>> back_;
    };

    class InjectiveCounter
    {
    public:
        InjectiveCounter(const SimpleGraph & f, const WeightedGraph & g, const std::vector<int> & pinned, MapKind kind,
            double budget) :
            f_(f),
            target_{g.order(), g.alphas().data(), g.betas().data()},
            image_(pinned),
            used_(g.order(), 0),
            induced_(kind == MapKind::induced)
        {
            std::vector<int> free;
            for (int v = 0; v < f.order(); ++v) {
                if (pinned[v] < 0)
                    free.push_back(v);
                else if (used_[pinned[v]]++)
                    collision_ = true;
            }
            order_ = connectivity_order(f, free, pinned);

            std::vector<int> earlier;
            for (int v = 0; v < f.order(); ++v)
                if (pinned[v] >= 0)
                    earlier.push_back(v);
            for (int v : order_) {
                std::vector<std::pair<int, bool>> back;
                for (int u : earlier)
                    if (induced_ || f.adjacent(u, v))
                        back.emplace_back(u, f.adjacent(u, v));
                back_.push_back(std::move(back));
                earlier.push_back(v);
            }

            double work = 1.0;
            int available = target_.n - (f.order() - static_cast<int>(free.size()));
            for (std::size_t i = 0; i < order_.size(); ++i)
                work *= std::max(1, available - static_cast<int>(i));
            work *= std::max(1, f.order());
            if (work > budget)
                throw BudgetExceeded(budget_message(work, budget));
        }

        double run()
        {
            if (collision_)
                return 0.0;
            double fixed = 1.0;
            for (int v = 0; v < f_.order(); ++v)
                for (int u = 0; u < v; ++u)
                    if (image_[u] >= 0 && image_[v] >= 0) {
                        double b = target_.b(image_[u], image_[v]);
                        if (f_.adjacent(u, v))
                            fixed *= b;
                        else if (induced_)
                            fixed *= 1.0 - b;
                    }
            if (fixed == 0.0)
                return 0.0;
            return fixed * descend(0);
        }

    private:
        double descend(std::size_t depth)
        {
            if (depth == order_.size())
                return 1.0;
            const int v = order_[depth];
            double sum = 0.0;
            for (int x = 0; x < target_.n; ++x) {
                if (used_[x])
                    continue;
                double w = target_.alpha[x];
                for (auto [u, edge] : back_[depth]) {
                    double b = target_.b(image_[u], x);
                    w *= edge ? b : 1.0 - b;
                    if (w == 0.0)
                        break;
                }
                if (w == 0.0)
                    continue;
                image_[v] = x;
                used_[x] = 1;
                sum += w * descend(depth + 1);
                used_[x] = 0;
            }
            image_[v] = -1;
            return sum;
        }

        const SimpleGraph & f_;
        Target target_;
        std::vector<int> image_;
        std::vector<char> used_;
        bool induced_;
        bool collision_ = false;
        std::vector<int> order_;
        std::vector<std::vector<std::pair<int, bool>>> back_;
    };

    void require_fits(const SimpleGraph & f, const WeightedGraph & g)
    {
        if (f.order() > g.order())
            throw PreconditionError("F has " + std::to_string(f.order()) + " nodes but G only " + std::to_string(g.order()));
    }
}

double detail::count_maps(const SimpleGraph & f, const WeightedGraph & g, const std::vector<int> & pinned, MapKind kind,
    double budget)
{
    if (kind == MapKind::all)
        return HomCounter(f, g, pinned, budget).run();
    return InjectiveCounter(f, g, pinned, kind, budget).run();
}

std::vector<int> PartialMap::dense(int f_order, int target_order) const
{
    std::vector<int> out(f_order, -1);
    for (auto [v, x] : pins_) {
        if (v < 0 || v >= f_order)
            throw PreconditionError("pinned vertex " + std::to_string(v + 1) + " not in F");
        if (x < 0 || x >= target_order)
            throw PreconditionError("pin image " + std::to_string(x + 1) + " out of range");
        if (out[v] >= 0)
            throw PreconditionError("vertex " + std::to_string(v + 1) + " pinned twice");
        out[v] = x;
    }
    return out;
}

double hom(const SimpleGraph & f, const WeightedGraph & g, double budget)
{
    return detail::count_maps(f, g, std::vector<int>(f.order(), -1), MapKind::all, budget);
}

double hom_partial(const SimpleGraph & f, const WeightedGraph & g, const PartialMap & phi, double budget)
{
    return detail::count_maps(f, g, phi.dense(f.order(), g.order()), MapKind::all, budget);
}

double t(const SimpleGraph & f, const WeightedGraph & g, double budget)
{
    return hom(f, g, budget) / std::pow(g.total_alpha(), f.order());
}

double inj(const SimpleGraph & f, const WeightedGraph & g, double budget)
{
    require_fits(f, g);
    return detail::count_maps(f, g, std::vector<int>(f.order(), -1), MapKind::injective, budget);
}

double ind(const SimpleGraph & f, const WeightedGraph & g, double budget)
{
    require_fits(f, g);
    return detail::count_maps(f, g, std::vector<int>(f.order(), -1), MapKind::induced, budget);
}

double injective_normalizer(int k, const WeightedGraph & g)
{
    // e[j] = j-th elementary symmetric polynomial of the node weights.
    std::vector<double> e(k + 1, 0.0);
    e[0] = 1.0;
    for (double a : g.alphas())
        for (int j = k; j >= 1; --j)
            e[j] += a * e[j - 1];
    double factorial = 1.0;
    for (int j = 2; j <= k; ++j)
        factorial *= j;
    return factorial * e[k];
}

double t0(const SimpleGraph & f, const WeightedGraph & g, double budget)
{
    return inj(f, g, budget) / injective_normalizer(f.order(), g);
}

double t1(const SimpleGraph & f, const WeightedGraph & g, double budget)
{
    return ind(f, g, budget) / injective_normalizer(f.order(), g);
}

struct GraphParameter::Cache
{
    mutable std::shared_mutex mutex;
    std::unordered_map<std::string, double> values;
};

GraphParameter::GraphParameter(std::string name, Evaluator evaluator, Flags flags) :
    name_(std::move(name)),
    evaluator_(std::move(evaluator)),
    flags_(flags),
    cache_(std::make_shared<Cache>())
{
}

double GraphParameter::operator()(const SimpleGraph & f) const
{
    constexpr int canonical_limit = 10;
    std::string key = flags_.isomorphism_invariant && f.order() <= canonical_limit ? edge_key(canonical_form(f))
                                                                                    : edge_key(f);
    {
        std::shared_lock lock(cache_->mutex);
        if (auto it = cache_->values.find(key); it != cache_->values.end())
            return it->second;
    }
    double value = evaluator_(f);
    std::unique_lock lock(cache_->mutex);
    cache_->values.insert_or_assign(std::move(key), value);
    return value;
}

std::size_t GraphParameter::cache_size() const
{
    std::shared_lock lock(cache_->mutex);
    return cache_->values.size();
}

GraphParameter GraphParameter::hom_density(WeightedGraph g)
{
    return GraphParameter("t", [g = std::move(g)](const SimpleGraph & f) { return t(f, g); }, {true, true, true});
}

GraphParameter GraphParameter::injective_density(WeightedGraph g)
{
    return GraphParameter("t0", [g = std::move(g)](const SimpleGraph & f) { return t0(f, g); }, {true, false, true});
}

GraphParameter GraphParameter::induced_density(WeightedGraph g)
{
    return GraphParameter("t1", [g = std::move(g)](const SimpleGraph & f) { return t1(f, g); }, {false, false, true});
}

GraphParameter GraphParameter::matching_count()
{
    return GraphParameter(
        "matchings", [](const SimpleGraph & f) { return static_cast<double>(graphlim::matching_count(f)); },
        {true, true, true});
}

std::size_t matching_count(const SimpleGraph & f)
{
    if (f.order() > 64)
        throw BudgetExceeded("matching_count limited to 64 nodes");
    std::unordered_map<std::uint64_t, std::size_t> memo;
    auto count = [&](auto && self, std::uint64_t available) -> std::size_t {
        if (available == 0)
            return 1;
        if (auto it = memo.find(available); it != memo.end())
            return it->second;
        int v = std::countr_zero(available);
        std::uint64_t rest = available & ~(std::uint64_t{1} << v);
        std::size_t total = self(self, rest);
        for (int w : f.neighbours(v))
            if (rest >> w & 1)
                total += self(self, rest & ~(std::uint64_t{1} << w));
        memo.emplace(available, total);
        return total;
    };
    std::uint64_t all = f.order() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << f.order()) - 1;
    return count(count, all);
}

double dagger(const GraphParameter & f, const SimpleGraph & F)
{
    const int n = F.order();
    std::vector<Edge> missing;
    for (int v = 1; v < n; ++v)
        for (int u = 0; u < v; ++u)
            if (! F.adjacent(u, v))
                missing.push_back({u, v});
    if (missing.size() > 20)
        throw BudgetExceeded("dagger over 2^" + std::to_string(missing.size()) + " supergraphs");

    std::vector<double> terms;
    terms.reserve(std::size_t{1} << missing.size());
    for (std::uint64_t added = 0; added < (std::uint64_t{1} << missing.size()); ++added) {
        std::vector<Edge> e = F.edges();
        for (std::size_t b = 0; b < missing.size(); ++b)
            if (added >> b & 1)
                e.push_back(missing[b]);
        double value = f(SimpleGraph(n, e));
        terms.push_back(std::popcount(added) % 2 ? -value : value);
    }
    return compensated_sum(terms);
}

GraphParameter dagger_parameter(const GraphParameter & f)
{
    GraphParameter::Flags flags;
    flags.isomorphism_invariant = f.flags().isomorphism_invariant;
    return GraphParameter(f.name() + "_dagger", [f](const SimpleGraph & F) { return dagger(f, F); }, flags);
}

HomInjGap hom_inj_gap_check(const SimpleGraph & f, const WeightedGraph & g, double budget)
{
    double gap = std::abs(t(f, g, budget) - t0(f, g, budget));
    double k = f.order();
    return {gap, k * (k - 1) / 2.0 / g.order()};
}

} // namespace graphlim
