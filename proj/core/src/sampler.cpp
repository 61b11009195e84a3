#include "dgff/sampler.hpp"

#include <cmath>
#include <numbers>

#include "dgff/error.hpp"

namespace dgff {

// ------------------------------------------------------------------ Field

Field::Field(LatticeDomain domain, Eigen::VectorXd values)
    : domain_(std::move(domain)), values_(std::move(values))
{
    require(values_.size() == static_cast<Eigen::Index>(domain_.size()), ErrorKind::InvalidArgument,
            "field length does not match domain size");
}

Field::Field(LatticeDomain domain)
    : domain_(std::move(domain)),
      values_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(domain_.size())))
{
}

double Field::at(const Vertex& v) const
{
    int i = domain_.index(v);
    return i < 0 ? 0.0 : values_[i];
}

Field& Field::operator+=(const Field& other)
{
    require(domain_ == other.domain_, ErrorKind::Domain, "fields live on different domains");
    values_ += other.values_;
    return *this;
}

Field sample_dense(const GreenOperator& g, Rng& rng)
{
    return Field(g.domain(), g.sqrt_factor().sample(rng));
}

// ----------------------------------------------------------- FieldSampler

FieldSampler::FieldSampler(const LatticeDomain& domain) : domain_(domain)
{
    if (domain.empty()) return;
    if (domain.is_rectangle()) {
        auto bb = domain.bounding_box();
        box_ = std::make_shared<BoxSpectral>(bb[2] - bb[0] + 1, bb[3] - bb[1] + 1);
    } else {
        sparse_ = std::make_shared<SparseSpdSolver>(dirichlet_operator(domain));
    }
}

Field FieldSampler::sample(Rng& rng) const
{
    if (domain_.empty()) return Field(domain_);
    if (box_) return Field(domain_, box_->sample(rng));
    // Precision M = 4(I - P), so G = 4 M^{-1}.
    return Field(domain_, 2.0 * sparse_->sample_inverse(rng));
}

Eigen::VectorXd FieldSampler::apply_green(const Eigen::VectorXd& f) const
{
    if (domain_.empty()) return {};
    if (box_) return box_->apply_green(f);
    return 4.0 * sparse_->solve(f);
}

// -------------------------------------------------------- Gibbs-Markov

namespace {

std::vector<Eigen::Index> embedding(const LatticeDomain& outer, const LatticeDomain& inner)
{
    std::vector<Eigen::Index> idx(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) {
        int j = outer.index(inner.vertex(i));
        require(j >= 0, ErrorKind::Containment, "inner domain is not contained in the outer one");
        idx[i] = j;
    }
    return idx;
}

} // namespace

Eigen::MatrixXd binding_covariance(const GreenOperator& gv, const LatticeDomain& inner)
{
    auto idx = embedding(gv.domain(), inner);
    Eigen::MatrixXd c = gv.matrix();
    if (!inner.empty()) {
        GreenOperator gu = green_matrix(inner);
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b)
                c(idx[a], idx[b]) -= gu(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
    return c;
}

Eigen::MatrixXd binding_covariance(const LatticeDomain& outer, const LatticeDomain& inner)
{
    return binding_covariance(green_matrix(outer), inner);
}

Eigen::VectorXd harmonic_extension(const LatticeDomain& outer, const LatticeDomain& inner,
                                   const Eigen::VectorXd& data)
{
    require(data.size() == static_cast<Eigen::Index>(outer.size()), ErrorKind::InvalidArgument,
            "boundary data must be given on the outer domain");
    auto idx = embedding(outer, inner);
    Eigen::VectorXd out = data;
    if (inner.empty()) return out;
    std::vector<char> in_u(outer.size(), 0);
    for (auto j : idx) in_u[static_cast<std::size_t>(j)] = 1;
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(inner.size()));
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (int nb : outer.neighbors(static_cast<std::size_t>(idx[a])))
            if (nb >= 0 && !in_u[static_cast<std::size_t>(nb)]) b[static_cast<Eigen::Index>(a)] += data[nb];
    // u = M_U^{-1} b = G^U b / 4.
    Eigen::VectorXd u = 0.25 * FieldSampler(inner).apply_green(b);
    for (std::size_t a = 0; a < idx.size(); ++a) out[idx[a]] = u[static_cast<Eigen::Index>(a)];
    return out;
}

double harmonicity_residual(const BindingField& binding)
{
    const auto& v = binding.outer;
    const auto& phi = binding.field.values();
    double worst = 0.0;
    for (const auto& x : binding.inner.vertices()) {
        int i = v.index(x);
        double lap = -4.0 * phi[i];
        for (int nb : v.neighbors(static_cast<std::size_t>(i)))
            if (nb >= 0) lap += phi[nb];
        worst = std::max(worst, std::abs(lap));
    }
    return worst;
}

Field GibbsMarkovSample::combined() const
{
    Field out = binding.field;
    const auto& v = binding.outer;
    for (std::size_t a = 0; a < inner.domain().size(); ++a)
        out[v.index(inner.domain().vertex(a))] += inner[static_cast<Eigen::Index>(a)];
    return out;
}

GibbsMarkovSplitter::GibbsMarkovSplitter(const LatticeDomain& outer, const LatticeDomain& inner,
                                         BindingMethod method)
    : outer_(outer), inner_(inner), method_(method), gv_(green_matrix(outer)),
      inner_sampler_(inner)
{
    require(inner.size() < outer.size(), ErrorKind::Containment, "inner domain must be a proper subset");
    cov_ = std::make_shared<const Eigen::MatrixXd>(dgff::binding_covariance(gv_, inner));
    if (method_ == BindingMethod::ExactCovariance) {
        binding_sqrt_ = SymmetricSqrt(*cov_);
        return;
    }
    for (std::size_t i = 0; i < outer.size(); ++i)
        if (!inner.contains(outer.vertex(i))) exterior_.push_back(static_cast<Eigen::Index>(i));
    const auto m = static_cast<Eigen::Index>(exterior_.size());
    Eigen::MatrixXd ge(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) ge(a, b) = gv_(exterior_[a], exterior_[b]);
    exterior_sqrt_ = SymmetricSqrt(ge);
}

GibbsMarkovSample GibbsMarkovSplitter::sample(Rng& rng) const
{
    GibbsMarkovSample s;
    s.inner = inner_sampler_.sample(rng);
    s.binding.outer = outer_;
    s.binding.inner = inner_;
    s.binding.covariance = cov_;
    if (method_ == BindingMethod::ExactCovariance) {
        s.binding.field = Field(outer_, binding_sqrt_.sample(rng));
    } else {
        Eigen::VectorXd ext = exterior_sqrt_.sample(rng);
        Eigen::VectorXd data = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outer_.size()));
        for (std::size_t a = 0; a < exterior_.size(); ++a) data[exterior_[a]] = ext[static_cast<Eigen::Index>(a)];
        s.binding.field = Field(outer_, harmonic_extension(outer_, inner_, data));
    }
    return s;
}

GibbsMarkovSample gibbs_markov_split(const LatticeDomain& outer, const LatticeDomain& inner,
                                     Rng& rng, BindingMethod method)
{
    return GibbsMarkovSplitter(outer, inner, method).sample(rng);
}

// ---------------------------------------------------- hierarchical sampler

namespace {

// Covariance of the box (0,s)² Green function on its middle cross, points in
// block-local row-major order. Built from sine sums in O(s³).
Eigen::MatrixXd cross_covariance(int s, const std::vector<Vertex>& pts)
{
    using std::numbers::pi;
    const int n = s - 1, m = s / 2;
    Eigen::MatrixXd S(n, n), W(n, n);
    for (int a = 1; a <= n; ++a)
        for (int j = 1; j <= n; ++j) S(a - 1, j - 1) = std::sin(pi * a * j / s);
    for (int j = 1; j <= n; ++j)
        for (int k = 1; k <= n; ++k) {
            double u = std::sin(0.5 * pi * j / s), v = std::sin(0.5 * pi * k / s);
            W(j - 1, k - 1) = 1.0 / (u * u + v * v);
        }
    Eigen::VectorXd sm = S.row(m - 1).transpose();
    Eigen::VectorXd w = W * sm.cwiseAbs2();   // Σ_k S(m,k)² W_jk
    const double scale = 4.0 / (static_cast<double>(s) * s);
    Eigen::MatrixXd line = scale * S * w.asDiagonal() * S.transpose();
    Eigen::MatrixXd mixed = scale * S * sm.asDiagonal() * W * sm.asDiagonal() * S.transpose();
    const auto p = static_cast<Eigen::Index>(pts.size());
    Eigen::MatrixXd c(p, p);
    // A cross point on the horizontal line is (a, m); on the vertical one (m, b).
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < p; ++j) {
            const Vertex& x = pts[static_cast<std::size_t>(i)];
            const Vertex& y = pts[static_cast<std::size_t>(j)];
            if (x.y == m && y.y == m) c(i, j) = line(x.x - 1, y.x - 1);
            else if (x.x == m && y.x == m) c(i, j) = line(x.y - 1, y.y - 1);
            else if (x.y == m) c(i, j) = mixed(x.x - 1, y.y - 1);
            else c(i, j) = mixed(y.x - 1, x.y - 1);
        }
    return 0.5 * (c + c.transpose());
}

} // namespace

HierarchicalSampler::HierarchicalSampler(int depth) : n_(depth)
{
    require(depth >= 1 && depth <= 9, ErrorKind::Overflow, "hierarchical depth must lie in 1..9");
    N_ = 1 << depth;
    domain_ = make_box(N_);
    for (int k = 0; k < n_; ++k) {
        Level lv;
        lv.side = N_ >> k;
        const int s = lv.side, m = s / 2;
        std::vector<Vertex> pts;
        for (int b = 1; b < s; ++b)
            for (int a = 1; a < s; ++a)
                if (a == m || b == m) {
                    pts.push_back({a, b});
                    lv.cross.push_back((b - 1) * (s - 1) + (a - 1));
                }
        lv.cross_sqrt = SymmetricSqrt(cross_covariance(s, pts));
        if (m >= 2) lv.quadrant = std::make_shared<BoxSpectral>(m - 1);
        levels_.push_back(std::move(lv));
    }
}

Eigen::VectorXd HierarchicalSampler::sample_level(int k, Rng& rng) const
{
    require(k >= 0 && k < n_, ErrorKind::InvalidArgument, "level out of range");
    const Level& lv = levels_[static_cast<std::size_t>(k)];
    const int s = lv.side, m = s / 2, nb = 1 << k, row = N_ - 1;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(row) * row);
    Eigen::VectorXd block(static_cast<Eigen::Index>(s - 1) * (s - 1));
    const int q = m - 1;
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(q) * q);
    auto local = [&](int a, int b) -> double {
        if (a <= 0 || b <= 0 || a >= s || b >= s) return 0.0;
        return block[static_cast<Eigen::Index>(b - 1) * (s - 1) + (a - 1)];
    };
    for (int by = 0; by < nb; ++by)
        for (int bx = 0; bx < nb; ++bx) {
            block.setZero();
            Eigen::VectorXd v = lv.cross_sqrt.sample(rng);
            for (std::size_t i = 0; i < lv.cross.size(); ++i) block[lv.cross[i]] = v[static_cast<Eigen::Index>(i)];
            if (lv.quadrant) {
                for (int qy = 0; qy < 2; ++qy)
                    for (int qx = 0; qx < 2; ++qx) {
                        const int ax = qx * m, ay = qy * m;
                        for (int j = 1; j <= q; ++j)
                            for (int i = 1; i <= q; ++i) {
                                int a = ax + i, b = ay + j;
                                double acc = 0.0;
                                // Only cross points carry data; the block edge is zero.
                                for (const auto& off : kNeighborOffsets) {
                                    int a2 = a + off.x, b2 = b + off.y;
                                    if (a2 == m || b2 == m) acc += local(a2, b2);
                                }
                                rhs[static_cast<Eigen::Index>(j - 1) * q + (i - 1)] = 0.25 * acc;
                            }
                        Eigen::VectorXd u = lv.quadrant->apply_green(rhs);
                        for (int j = 1; j <= q; ++j)
                            for (int i = 1; i <= q; ++i)
                                block[static_cast<Eigen::Index>(ay + j - 1) * (s - 1) + (ax + i - 1)] =
                                    u[static_cast<Eigen::Index>(j - 1) * q + (i - 1)];
                    }
            }
            for (int b = 1; b < s; ++b)
                for (int a = 1; a < s; ++a) {
                    int gx = bx * s + a, gy = by * s + b;
                    out[static_cast<Eigen::Index>(gy - 1) * row + (gx - 1)] = local(a, b);
                }
        }
    return out;
}

std::vector<Field> HierarchicalSampler::sample_levels(Rng& rng) const
{
    std::vector<Field> out;
    out.reserve(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k) out.emplace_back(domain_, sample_level(k, rng));
    return out;
}

Field HierarchicalSampler::sample(Rng& rng) const
{
    Field f(domain_);
    for (int k = 0; k < n_; ++k) f.values() += sample_level(k, rng);
    return f;
}

Eigen::VectorXd HierarchicalSampler::level_variance(int k) const
{
    require(k >= 0 && k < n_, ErrorKind::InvalidArgument, "level out of range");
    const int row = N_ - 1;
    // Tiled diagonal of G^{V^j}: blocks of side N/2^j separated by grid lines.
    auto tiled = [&](int side) {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(row) * row);
        if (side < 2) return d;
        Eigen::VectorXd bd = BoxSpectral(side - 1).diagonal();
        for (int y = 1; y < N_; ++y)
            for (int x = 1; x < N_; ++x) {
                int a = x % side, b = y % side;
                if (a == 0 || b == 0) continue;
                d[static_cast<Eigen::Index>(y - 1) * row + (x - 1)] =
                    bd[static_cast<Eigen::Index>(b - 1) * (side - 1) + (a - 1)];
            }
        return d;
    };
    const int s = levels_[static_cast<std::size_t>(k)].side;
    return tiled(s) - tiled(s / 2);
}

// --------------------------------------------------- concentric decomposition

ConcentricDecomposition::ConcentricDecomposition(const LatticeDomain& outer) : outer_(outer)
{
    require(outer.contains({0, 0}), ErrorKind::Geometry, "outer domain must contain the origin");
    auto fits = [&](int r) {
        for (int y = -r; y <= r; ++y)
            for (int x = -r; x <= r; ++x)
                if (!outer.contains({x, y})) return false;
        return true;
    };
    require(fits(2), ErrorKind::Geometry, "outer domain must contain {|x|∞ ≤ 2}");
    n_ = 0;
    while (n_ < 24 && fits(1 << (n_ + 2))) ++n_;
    for (int k = 0; k < n_; ++k) balls_.push_back(make_centered_box((1 << k) - 1));
    balls_.push_back(outer);
    annuli_.emplace_back();
    for (int k = 1; k <= n_; ++k) {
        const auto& prev = balls_[static_cast<std::size_t>(k - 1)];
        std::vector<Vertex> drop = prev.vertices();
        drop.insert(drop.end(), prev.boundary().begin(), prev.boundary().end());
        annuli_.push_back(balls_[static_cast<std::size_t>(k)].without(drop));
    }
    var0_.push_back(1.0);
    double prev = 1.0;
    for (int k = 1; k <= n_; ++k) {
        double cur = green_entry(balls_[static_cast<std::size_t>(k)], {0, 0}, {0, 0});
        var0_.push_back(cur - prev);
        prev = cur;
    }
}

const LatticeDomain& ConcentricDecomposition::ball(int k) const
{
    require(k >= 0 && k <= n_, ErrorKind::InvalidArgument, "layer index out of range");
    return balls_[static_cast<std::size_t>(k)];
}

const LatticeDomain& ConcentricDecomposition::annulus(int k) const
{
    require(k >= 0 && k <= n_, ErrorKind::InvalidArgument, "layer index out of range");
    return annuli_[static_cast<std::size_t>(k)];
}

double ConcentricDecomposition::phi0_variance(int k) const
{
    require(k >= 0 && k <= n_, ErrorKind::InvalidArgument, "layer index out of range");
    return var0_[static_cast<std::size_t>(k)];
}

Eigen::VectorXd ConcentricDecomposition::embed(const LatticeDomain& inner, const Eigen::VectorXd& v) const
{
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outer_.size()));
    for (std::size_t i = 0; i < inner.size(); ++i) out[outer_.index(inner.vertex(i))] = v[static_cast<Eigen::Index>(i)];
    return out;
}

const FieldSampler& ConcentricDecomposition::solver(int k, bool annulus) const
{
    std::lock_guard lock(*solver_mutex_);
    if (solvers_.empty()) solvers_.resize(2 * (static_cast<std::size_t>(n_) + 1));
    auto& slot = solvers_[2 * static_cast<std::size_t>(k) + (annulus ? 1 : 0)];
    if (!slot)
        slot = std::make_shared<const FieldSampler>(annulus ? annuli_[static_cast<std::size_t>(k)]
                                                            : balls_[static_cast<std::size_t>(k)]);
    return *slot;
}

Eigen::VectorXd ConcentricDecomposition::column_on(int k, bool annulus, const Vertex& y) const
{
    const auto& d = annulus ? annuli_[static_cast<std::size_t>(k)] : balls_[static_cast<std::size_t>(k)];
    int j = d.index(y);
    if (j < 0) return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outer_.size()));
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.size()));
    e[j] = 1.0;
    return embed(d, solver(k, annulus).apply_green(e));
}

Eigen::VectorXd ConcentricDecomposition::layer_column(int k, const Vertex& y) const
{
    require(k >= 0 && k <= n_, ErrorKind::InvalidArgument, "layer index out of range");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outer_.size()));
    if (k == 0) {
        if (y == Vertex{0, 0}) out[outer_.index(y)] = 1.0;
        return out;
    }
    const auto& big = balls_[static_cast<std::size_t>(k)];
    if (!big.contains(y)) return out;
    out = column_on(k, false, y);
    // G^{U_k} splits over the inner ball and the annulus.
    out -= column_on(k - 1, false, y);
    out -= column_on(k, true, y);
    return out;
}

Eigen::VectorXd ConcentricDecomposition::b(int k) const
{
    Eigen::VectorXd c0 = layer_column(k, {0, 0});
    double v = var0_[static_cast<std::size_t>(k)];
    Eigen::VectorXd out = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(outer_.size()), -1.0);
    const auto& big = balls_[static_cast<std::size_t>(k)];
    for (const auto& x : big.vertices()) {
        int i = outer_.index(x);
        out[i] = c0[i] / v - 1.0;
    }
    out[outer_.index({0, 0})] = 0.0;
    return out;
}

Eigen::VectorXd ConcentricDecomposition::covariance_column(const Vertex& y) const
{
    require(outer_.contains(y), ErrorKind::Domain, "vertex is not in the outer domain");
    const auto iy = outer_.index(y);
    Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outer_.size()));
    for (int k = 0; k <= n_; ++k) {
        double v = var0_[static_cast<std::size_t>(k)];
        Eigen::VectorXd bk = b(k);
        Eigen::VectorXd ck0 = layer_column(k, {0, 0});
        Eigen::VectorXd cky = layer_column(k, y);
        // Scalar part, then χ_k = φ_k - E[φ_k | φ_k(0)].
        total += v * (1.0 + bk[iy]) * (Eigen::VectorXd::Ones(bk.size()) + bk);
        total += cky - ck0 * (ck0[iy] / v);
        if (k >= 1) total += column_on(k, true, y);
    }
    return total;
}

void ConcentricDecomposition::prepare_sampling() const
{
    std::call_once(*once_, [this] {
        layers_.resize(static_cast<std::size_t>(n_) + 1);
        for (int k = 1; k <= n_; ++k) {
            auto& L = layers_[static_cast<std::size_t>(k)];
            const auto& big = balls_[static_cast<std::size_t>(k)];
            L.ring = balls_[static_cast<std::size_t>(k - 1)].boundary();
            const FieldSampler& gs = solver(k, false);
            const auto r = static_cast<Eigen::Index>(L.ring.size());
            Eigen::MatrixXd c(r, r);
            for (Eigen::Index a = 0; a < r; ++a) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(big.size()));
                e[big.index(L.ring[static_cast<std::size_t>(a)])] = 1.0;
                Eigen::VectorXd col = gs.apply_green(e);
                for (Eigen::Index b2 = 0; b2 < r; ++b2) c(b2, a) = col[big.index(L.ring[static_cast<std::size_t>(b2)])];
            }
            L.ring_sqrt = SymmetricSqrt(0.5 * (c + c.transpose()));
        }
        b_.assign(static_cast<std::size_t>(n_) + 1, Eigen::VectorXd());
        for (int k = 0; k <= n_; ++k) b_[static_cast<std::size_t>(k)] = b(k);
    });
}

ConcentricDecomposition::Sample ConcentricDecomposition::sample(Rng& rng) const
{
    prepare_sampling();
    const auto n = static_cast<Eigen::Index>(outer_.size());
    Sample s;
    s.field = Field(outer_);
    s.partial.push_back(0.0);
    for (int k = 0; k <= n_; ++k) {
        Eigen::VectorXd phi = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd local = Eigen::VectorXd::Zero(n);
        if (k == 0) {
            phi[outer_.index({0, 0})] = standard_normal(rng);
        } else {
            const auto& L = layers_[static_cast<std::size_t>(k)];
            Eigen::VectorXd ring = L.ring_sqrt.sample(rng);
            for (std::size_t a = 0; a < L.ring.size(); ++a) phi[outer_.index(L.ring[a])] = ring[static_cast<Eigen::Index>(a)];
            // Harmonic extension into the inner ball and the annulus.
            for (bool ann : {false, true}) {
                const int kk = ann ? k : k - 1;
                const LatticeDomain* comp = ann ? &annuli_[static_cast<std::size_t>(k)] : &balls_[static_cast<std::size_t>(k - 1)];
                if (comp->empty()) continue;
                Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(comp->size()));
                for (std::size_t i = 0; i < comp->size(); ++i)
                    for (const auto& off : kNeighborOffsets) {
                        Vertex w = comp->vertex(i) + off;
                        if (!comp->contains(w) && outer_.contains(w)) rhs[static_cast<Eigen::Index>(i)] += phi[outer_.index(w)];
                    }
                Eigen::VectorXd u = 0.25 * solver(kk, ann).apply_green(rhs);
                for (std::size_t i = 0; i < comp->size(); ++i) phi[outer_.index(comp->vertex(i))] = u[static_cast<Eigen::Index>(i)];
            }
            Field h = solver(k, true).sample(rng);
            local = embed(annuli_[static_cast<std::size_t>(k)], h.values());
        }
        const double p0 = phi[outer_.index({0, 0})];
        const auto& bk = b_[static_cast<std::size_t>(k)];
        Eigen::VectorXd chi = phi - p0 * (Eigen::VectorXd::Ones(n) + bk);
        s.phi0.push_back(p0);
        s.partial.push_back(s.partial.back() + p0);
        s.field.values() += p0 * (Eigen::VectorXd::Ones(n) + bk) + chi + local;
        s.chi.push_back(std::move(chi));
        s.local.push_back(std::move(local));
    }
    return s;
}

// ---------------------------------------------------------- pinned field

PinnedSampler::PinnedSampler(const LatticeDomain& domain, const Vertex& pin) : sampler_(domain)
{
    int p = domain.index(pin);
    require(p >= 0, ErrorKind::Domain, "pinned vertex is not in the domain");
    pin_ = p;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(domain.size()));
    e[pin_] = 1.0;
    g0_ = sampler_.apply_green(e);
}

Field PinnedSampler::sample(Rng& rng) const
{
    Field h = sampler_.sample(rng);
    h.values() -= g0_ * (h[pin_] / g0_[pin_]);
    h[pin_] = 0.0;
    return h;
}

Eigen::VectorXd PinnedSampler::covariance_column(const Vertex& y) const
{
    int j = domain().index(y);
    require(j >= 0, ErrorKind::Domain, "vertex is not in the domain");
    Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(domain().size()));
    e[j] = 1.0;
    Eigen::VectorXd col = sampler_.apply_green(e);
    col -= g0_ * (g0_[j] / g0_[pin_]);
    return col;
}

Field sample_pinned(const LatticeDomain& domain, Rng& rng)
{
    return PinnedSampler(domain).sample(rng);
}

} // namespace dgff
