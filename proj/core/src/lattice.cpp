#include "dgff/lattice.hpp"

#include <cmath>
#include <deque>
#include <fstream>
#include <limits>

#include "dgff/error.hpp"

namespace dgff {

const char* to_string(Shape shape) noexcept
{
    switch (shape) {
    case Shape::Box: return "box";
    case Shape::Disc: return "disc";
    case Shape::Annulus: return "annulus";
    case Shape::Square: return "square";
    case Shape::Mask: return "mask";
    case Shape::Custom: return "custom";
    }
    return "custom";
}

// ---------------------------------------------------------------- Region

Region Region::unit_square() { return square(0.0, 0.0, 1.0); }

Region Region::square(double x0, double y0, double side)
{
    require(side > 0, ErrorKind::InvalidArgument, "square side must be positive");
    Region r;
    r.shape_ = Shape::Square;
    r.p_ = {x0, y0, side, 0.0};
    return r;
}

Region Region::disc(double cx, double cy, double radius)
{
    require(radius > 0, ErrorKind::InvalidArgument, "disc radius must be positive");
    Region r;
    r.shape_ = Shape::Disc;
    r.p_ = {cx, cy, radius, 0.0};
    return r;
}

Region Region::annulus(double cx, double cy, double inner, double outer)
{
    require(inner >= 0 && outer > inner, ErrorKind::InvalidArgument,
            "annulus needs 0 <= inner < outer");
    Region r;
    r.shape_ = Shape::Annulus;
    r.p_ = {cx, cy, inner, outer};
    return r;
}

Region Region::mask(std::vector<std::string> rows, double x0, double y0, double w, double h)
{
    require(!rows.empty() && !rows.front().empty(), ErrorKind::InvalidArgument, "empty mask");
    for (const auto& row : rows)
        require(row.size() == rows.front().size(), ErrorKind::InvalidArgument,
                "mask rows must have equal length");
    Region r;
    r.shape_ = Shape::Mask;
    r.p_ = {x0, y0, w, h};
    r.rows_ = std::move(rows);
    return r;
}

namespace {

// Largest s with the square of half-side s around (a,b) inside the closed disc of radius R.
double disc_depth(double a, double b, double R)
{
    a = std::abs(a);
    b = std::abs(b);
    if (a * a + b * b >= R * R) return 0.0;
    double p = a + b;
    double disc = p * p - 2.0 * (a * a + b * b - R * R);
    return 0.5 * (-p + std::sqrt(disc));
}

// Euclidean distance from the origin to the square of half-side t around (a,b).
double origin_to_square(double a, double b, double t)
{
    double dx = std::max(0.0, std::abs(a) - t);
    double dy = std::max(0.0, std::abs(b) - t);
    return std::hypot(dx, dy);
}

} // namespace

bool Region::contains(double x, double y) const
{
    switch (shape_) {
    case Shape::Square:
        return x > p_[0] && x < p_[0] + p_[2] && y > p_[1] && y < p_[1] + p_[2];
    case Shape::Disc:
        return std::hypot(x - p_[0], y - p_[1]) < p_[2];
    case Shape::Annulus: {
        double r = std::hypot(x - p_[0], y - p_[1]);
        return r > p_[2] && r < p_[3];
    }
    case Shape::Mask: {
        double u = (x - p_[0]) / p_[2];
        double v = (y - p_[1]) / p_[3];
        if (u <= 0 || u >= 1 || v <= 0 || v >= 1) return false;
        auto nr = rows_.size(), nc = rows_.front().size();
        auto c = static_cast<std::size_t>(u * static_cast<double>(nc));
        auto r = nr - 1 - static_cast<std::size_t>(v * static_cast<double>(nr));
        return rows_[r][c] == '1';
    }
    default:
        return false;
    }
}

double Region::linf_depth(double x, double y) const
{
    switch (shape_) {
    case Shape::Square:
        if (!contains(x, y)) return 0.0;
        return std::min({x - p_[0], p_[0] + p_[2] - x, y - p_[1], p_[1] + p_[2] - y});
    case Shape::Disc:
        return disc_depth(x - p_[0], y - p_[1], p_[2]);
    case Shape::Annulus: {
        if (!contains(x, y)) return 0.0;
        double a = x - p_[0], b = y - p_[1];
        double outer = disc_depth(a, b, p_[3]);
        // Smallest t at which the square around (a,b) meets the closed inner disc.
        double lo = 0.0, hi = std::hypot(a, b);
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            if (origin_to_square(a, b, mid) > p_[2]) lo = mid; else hi = mid;
        }
        return std::min(outer, hi);
    }
    case Shape::Mask: {
        if (!contains(x, y)) return 0.0;
        // Brute force over mask cells outside the region, plus the frame.
        auto nr = rows_.size(), nc = rows_.front().size();
        double cw = p_[2] / static_cast<double>(nc), ch = p_[3] / static_cast<double>(nr);
        double best = std::min({x - p_[0], p_[0] + p_[2] - x, y - p_[1], p_[1] + p_[3] - y});
        for (std::size_t r = 0; r < nr; ++r)
            for (std::size_t c = 0; c < nc; ++c) {
                if (rows_[r][c] == '1') continue;
                double cx0 = p_[0] + static_cast<double>(c) * cw;
                double cy0 = p_[1] + static_cast<double>(nr - 1 - r) * ch;
                double dx = std::max({0.0, cx0 - x, x - (cx0 + cw)});
                double dy = std::max({0.0, cy0 - y, y - (cy0 + ch)});
                best = std::min(best, std::max(dx, dy));
            }
        return best;
    }
    default:
        return 0.0;
    }
}

std::array<double, 4> Region::bounds() const
{
    switch (shape_) {
    case Shape::Square: return {p_[0], p_[1], p_[0] + p_[2], p_[1] + p_[2]};
    case Shape::Disc: return {p_[0] - p_[2], p_[1] - p_[2], p_[0] + p_[2], p_[1] + p_[2]};
    case Shape::Annulus: return {p_[0] - p_[3], p_[1] - p_[3], p_[0] + p_[3], p_[1] + p_[3]};
    case Shape::Mask: return {p_[0], p_[1], p_[0] + p_[2], p_[1] + p_[3]};
    default: return {0, 0, 0, 0};
    }
}

// --------------------------------------------------------- LatticeDomain

struct LatticeDomain::Impl {
    std::vector<Vertex> vertices;
    std::vector<std::array<int, 4>> neighbors;
    std::vector<Vertex> boundary;
    std::vector<int> lookup;   // over the bounding box
    int xmin = 0, ymin = 0, width = 0, height = 0;
    int scale = 1;
    Shape shape = Shape::Custom;

    int find(const Vertex& v) const
    {
        int dx = v.x - xmin, dy = v.y - ymin;
        if (dx < 0 || dy < 0 || dx >= width || dy >= height) return -1;
        return lookup[static_cast<std::size_t>(dy) * width + dx];
    }
};

LatticeDomain::LatticeDomain() : impl_(std::make_shared<Impl>()) {}

LatticeDomain LatticeDomain::from_vertices(std::vector<Vertex> vs, int scale, Shape shape)
{
    require(scale >= 1, ErrorKind::InvalidSize, "domain scale must be positive");
    std::sort(vs.begin(), vs.end(), row_major_less);
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());

    auto impl = std::make_shared<Impl>();
    impl->scale = scale;
    impl->shape = shape;
    if (!vs.empty()) {
        int xmin = vs.front().x, xmax = xmin, ymin = vs.front().y, ymax = vs.back().y;
        for (const auto& v : vs) {
            xmin = std::min(xmin, v.x);
            xmax = std::max(xmax, v.x);
        }
        impl->xmin = xmin;
        impl->ymin = ymin;
        impl->width = xmax - xmin + 1;
        impl->height = ymax - ymin + 1;
        impl->lookup.assign(static_cast<std::size_t>(impl->width) * impl->height, -1);
        for (std::size_t i = 0; i < vs.size(); ++i)
            impl->lookup[static_cast<std::size_t>(vs[i].y - ymin) * impl->width + (vs[i].x - xmin)] =
                static_cast<int>(i);
    }
    impl->vertices = std::move(vs);

    impl->neighbors.resize(impl->vertices.size());
    std::vector<Vertex> boundary;
    for (std::size_t i = 0; i < impl->vertices.size(); ++i) {
        for (int d = 0; d < 4; ++d) {
            Vertex w = impl->vertices[i] + kNeighborOffsets[d];
            int j = impl->find(w);
            impl->neighbors[i][d] = j;
            if (j < 0) boundary.push_back(w);
        }
    }
    std::sort(boundary.begin(), boundary.end(), row_major_less);
    boundary.erase(std::unique(boundary.begin(), boundary.end()), boundary.end());
    impl->boundary = std::move(boundary);

    LatticeDomain d;
    d.impl_ = std::move(impl);
    return d;
}

std::size_t LatticeDomain::size() const { return impl_->vertices.size(); }
const std::vector<Vertex>& LatticeDomain::vertices() const { return impl_->vertices; }
int LatticeDomain::index(const Vertex& v) const { return impl_->find(v); }
const std::array<int, 4>& LatticeDomain::neighbors(std::size_t i) const
{
    return impl_->neighbors[i];
}
const std::vector<Vertex>& LatticeDomain::boundary() const { return impl_->boundary; }
int LatticeDomain::scale() const { return impl_->scale; }
Shape LatticeDomain::shape() const { return impl_->shape; }

std::array<int, 4> LatticeDomain::bounding_box() const
{
    return {impl_->xmin, impl_->ymin, impl_->xmin + impl_->width - 1,
            impl_->ymin + impl_->height - 1};
}

bool LatticeDomain::is_rectangle() const
{
    return !empty() && size() == static_cast<std::size_t>(impl_->width) * impl_->height;
}

LatticeDomain LatticeDomain::translated(const Vertex& shift) const
{
    std::vector<Vertex> vs;
    vs.reserve(size());
    for (const auto& v : vertices()) vs.push_back(v + shift);
    return from_vertices(std::move(vs), scale(), shape());
}

LatticeDomain LatticeDomain::restricted(const std::function<bool(const Vertex&)>& keep) const
{
    std::vector<Vertex> vs;
    for (const auto& v : vertices())
        if (keep(v)) vs.push_back(v);
    return from_vertices(std::move(vs), scale(), Shape::Custom);
}

LatticeDomain LatticeDomain::without(const std::vector<Vertex>& removed) const
{
    std::vector<char> drop(size(), 0);
    for (const auto& v : removed) {
        int i = index(v);
        if (i >= 0) drop[static_cast<std::size_t>(i)] = 1;
    }
    std::vector<Vertex> vs;
    for (std::size_t i = 0; i < size(); ++i)
        if (!drop[i]) vs.push_back(vertex(i));
    return from_vertices(std::move(vs), scale(), Shape::Custom);
}

bool LatticeDomain::is_subset_of(const LatticeDomain& other) const
{
    for (const auto& v : vertices())
        if (!other.contains(v)) return false;
    return true;
}

// ----------------------------------------------------------- constructors

LatticeDomain make_box(int N)
{
    require(N >= 2, ErrorKind::InvalidSize, "box size N must be at least 2");
    std::vector<Vertex> vs;
    vs.reserve(static_cast<std::size_t>(N - 1) * (N - 1));
    for (int y = 1; y < N; ++y)
        for (int x = 1; x < N; ++x) vs.push_back({x, y});
    return LatticeDomain::from_vertices(std::move(vs), N, Shape::Box);
}

LatticeDomain make_centered_box(int K)
{
    require(K >= 0, ErrorKind::InvalidSize, "centered box half-width must be nonnegative");
    std::vector<Vertex> vs;
    vs.reserve(static_cast<std::size_t>(2 * K + 1) * (2 * K + 1));
    for (int y = -K; y <= K; ++y)
        for (int x = -K; x <= K; ++x) vs.push_back({x, y});
    return LatticeDomain::from_vertices(std::move(vs), 2 * K + 2, Shape::Box);
}

LatticeDomain discretize(const Region& region, int N)
{
    require(N >= 1, ErrorKind::InvalidSize, "scale N must be positive");
    auto b = region.bounds();
    const double n = static_cast<double>(N);
    const double cut = 1.0 / n - 1e-12;
    int x0 = static_cast<int>(std::floor(b[0] * n)), x1 = static_cast<int>(std::ceil(b[2] * n));
    int y0 = static_cast<int>(std::floor(b[1] * n)), y1 = static_cast<int>(std::ceil(b[3] * n));
    std::vector<Vertex> vs;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            if (region.linf_depth(x / n, y / n) >= cut) vs.push_back({x, y});
    require(!vs.empty(), ErrorKind::EmptyDomain, "discretization produced an empty domain");
    Shape tag = region.shape() == Shape::Square ? Shape::Box : region.shape();
    return LatticeDomain::from_vertices(std::move(vs), N, tag);
}

std::vector<Vertex> interior_shrink(const LatticeDomain& domain, double delta)
{
    require(delta >= 0 && delta < 0.5, ErrorKind::InvalidArgument, "delta must lie in [0,1/2)");
    if (domain.empty()) return {};
    // Chebyshev distance to the complement = 8-connected BFS distance from it.
    auto bb = domain.bounding_box();
    int xmin = bb[0] - 1, ymin = bb[1] - 1;
    int w = bb[2] - bb[0] + 3, h = bb[3] - bb[1] + 3;
    std::vector<int> dist(static_cast<std::size_t>(w) * h, -1);
    std::deque<std::pair<int, int>> queue;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (!domain.contains({x + xmin, y + ymin})) {
                dist[static_cast<std::size_t>(y) * w + x] = 0;
                queue.emplace_back(x, y);
            }
    while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        int d = dist[static_cast<std::size_t>(y) * w + x];
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                int nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                auto& slot = dist[static_cast<std::size_t>(ny) * w + nx];
                if (slot < 0) {
                    slot = d + 1;
                    queue.emplace_back(nx, ny);
                }
            }
    }
    const double limit = delta * domain.scale();
    std::vector<Vertex> out;
    for (const auto& v : domain.vertices())
        if (dist[static_cast<std::size_t>(v.y - ymin) * w + (v.x - xmin)] > limit) out.push_back(v);
    return out;
}

LatticeDomain read_mask_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::Io, "cannot open mask file " + path.string());
    std::vector<std::string> rows;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        for (char c : line)
            require(c == '0' || c == '1', ErrorKind::Validation, "mask rows must contain only 0/1");
        rows.push_back(line);
    }
    require(!rows.empty(), ErrorKind::EmptyDomain, "mask file is empty");
    std::vector<Vertex> vs;
    int nrows = static_cast<int>(rows.size());
    std::size_t width = 0;
    for (int r = 0; r < nrows; ++r) {
        width = std::max(width, rows[static_cast<std::size_t>(r)].size());
        for (std::size_t c = 0; c < rows[static_cast<std::size_t>(r)].size(); ++c)
            if (rows[static_cast<std::size_t>(r)][c] == '1')
                vs.push_back({static_cast<int>(c) + 1, nrows - r});
    }
    require(!vs.empty(), ErrorKind::EmptyDomain, "mask selects no vertices");
    int scale = std::max(nrows, static_cast<int>(width)) + 1;
    return LatticeDomain::from_vertices(std::move(vs), scale, Shape::Mask);
}

LatticeDomain parse_domain_spec(const std::string& spec)
{
    auto colon = spec.find(':');
    require(colon != std::string::npos, ErrorKind::Validation,
            "domain spec must look like box:N, cbox:K, disc:N or mask:path");
    std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
    if (kind == "mask") return read_mask_file(arg);
    int value = 0;
    try {
        std::size_t used = 0;
        value = std::stoi(arg, &used);
        require(used == arg.size(), ErrorKind::Validation, "bad integer in domain spec: " + arg);
    } catch (const std::logic_error&) {
        fail(ErrorKind::Validation, "bad integer in domain spec: " + arg);
    }
    if (kind == "box") return make_box(value);
    if (kind == "cbox") return make_centered_box(value);
    if (kind == "disc") return discretize(Region::unit_disc(), value);
    fail(ErrorKind::Validation, "unknown domain kind: " + kind);
}

} // namespace dgff
