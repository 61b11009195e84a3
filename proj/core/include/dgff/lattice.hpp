#pragma once

#include <algorithm>
#include <array>
#include <cstdlib>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dgff {

struct Vertex {
    int x = 0;
    int y = 0;

    friend auto operator<=>(const Vertex&, const Vertex&) = default;
    Vertex operator+(const Vertex& o) const { return {x + o.x, y + o.y}; }
    Vertex operator-(const Vertex& o) const { return {x - o.x, y - o.y}; }
};

// Row-major order: by y, then by x.
inline bool row_major_less(const Vertex& a, const Vertex& b)
{
    return a.y != b.y ? a.y < b.y : a.x < b.x;
}

inline int linf_norm(const Vertex& v) { return std::max(std::abs(v.x), std::abs(v.y)); }

inline constexpr std::array<Vertex, 4> kNeighborOffsets{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

enum class Shape { Box, Disc, Annulus, Square, Mask, Custom };

const char* to_string(Shape shape) noexcept;

// Continuum region D ⊂ ℝ², queried through membership and ℓ∞-depth.
class Region {
public:
    static Region unit_square();
    static Region square(double x0, double y0, double side);
    static Region disc(double cx, double cy, double radius);
    static Region unit_disc() { return disc(0.0, 0.0, 1.0); }
    static Region annulus(double cx, double cy, double inner, double outer);
    // Boolean mask sampled on [x0,x0+w]×[y0,y0+h]; rows[0] is the top row.
    static Region mask(std::vector<std::string> rows, double x0, double y0, double w, double h);

    bool contains(double x, double y) const;
    // dist_∞((x,y), D^c); zero outside D.
    double linf_depth(double x, double y) const;
    // Axis-aligned bounding box {xmin, ymin, xmax, ymax}.
    std::array<double, 4> bounds() const;
    Shape shape() const { return shape_; }

private:
    Shape shape_ = Shape::Square;
    std::array<double, 4> p_{};
    std::vector<std::string> rows_;
};

class LatticeDomain {
public:
    LatticeDomain();
    // Vertices are sorted row-major and deduplicated.
    static LatticeDomain from_vertices(std::vector<Vertex> vertices, int scale,
                                       Shape shape = Shape::Custom);

    std::size_t size() const;
    bool empty() const { return size() == 0; }
    const std::vector<Vertex>& vertices() const;
    const Vertex& vertex(std::size_t i) const { return vertices()[i]; }
    // -1 when v is not a vertex of the domain.
    int index(const Vertex& v) const;
    bool contains(const Vertex& v) const { return index(v) >= 0; }
    // Domain indices of the four neighbours of vertex i (E, W, N, S); -1 outside.
    const std::array<int, 4>& neighbors(std::size_t i) const;
    // External vertex boundary, row-major.
    const std::vector<Vertex>& boundary() const;
    int scale() const;
    Shape shape() const;
    // {xmin, ymin, xmax, ymax} of the vertex set.
    std::array<int, 4> bounding_box() const;
    // True when the vertex set fills its bounding box.
    bool is_rectangle() const;

    LatticeDomain translated(const Vertex& shift) const;
    LatticeDomain restricted(const std::function<bool(const Vertex&)>& keep) const;
    LatticeDomain without(const std::vector<Vertex>& removed) const;
    bool is_subset_of(const LatticeDomain& other) const;

    friend bool operator==(const LatticeDomain& a, const LatticeDomain& b)
    {
        return a.vertices() == b.vertices();
    }

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

// (0,N)² ∩ ℤ².
LatticeDomain make_box(int N);
// [-K,K]² ∩ ℤ², scale 2K+2.
LatticeDomain make_centered_box(int K);
// {x : dist_∞(x/N, D^c) ≥ 1/N}.
LatticeDomain discretize(const Region& region, int N);
// Vertices at ℓ∞-distance > δN from the lattice complement.
std::vector<Vertex> interior_shrink(const LatticeDomain& domain, double delta);

// Parses box:N, cbox:K, disc:N or mask:path.
LatticeDomain parse_domain_spec(const std::string& spec);
// Rows of 0/1 characters; row r, column c becomes vertex (c+1, rows-r).
LatticeDomain read_mask_file(const std::filesystem::path& path);

} // namespace dgff
