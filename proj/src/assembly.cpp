#include "dwell/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "dwell/quadrature.hpp"

namespace dwell {

void write_coordinate(std::ostream& out, const SymmetricSparseMatrix& a)
{
    out.precision(17);
    out << a.rows() << ' ' << a.cols() << '\n';
    for (int k = 0; k < a.outerSize(); ++k) {
        for (SymmetricSparseMatrix::InnerIterator it(a, k); it; ++it) {
            if (it.row() <= it.col()) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
        }
    }
}

SymmetricSparseMatrix symmetrized(const SymmetricSparseMatrix& a)
{
    SymmetricSparseMatrix t = a.transpose();
    SymmetricSparseMatrix s = 0.5 * (a + t);
    s.prune(0.0);
    s.makeCompressed();
    return s;
}

// ---------------------------------------------------------------------------

OneBodyOperators assemble_1d(const Mesh1D& mesh, const PotentialSpec& spec)
{
    if (mesh.size() < 3) throw ResolutionError("1D mesh has no interior node");
    const std::size_t n = mesh.size() - 2;
    auto dof = [](std::size_t node) { return static_cast<long>(node) - 1; };

    std::vector<Eigen::Triplet<double>> h_entries;
    std::vector<Eigen::Triplet<double>> m_entries;
    for (std::size_t e = 0; e < mesh.element_count(); ++e) {
        const double len = mesh.element_size(e);
        const double v = potential_eval(0.5 * (mesh.nodes[e] + mesh.nodes[e + 1]), spec);
        const double k_loc[2][2] = {{1.0 / len, -1.0 / len}, {-1.0 / len, 1.0 / len}};
        const double m_loc[2][2] = {{len / 3.0, len / 6.0}, {len / 6.0, len / 3.0}};
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const std::size_t na = e + a;
                const std::size_t nb = e + b;
                if (mesh.is_boundary(na) || mesh.is_boundary(nb)) continue;
                h_entries.emplace_back(dof(na), dof(nb), k_loc[a][b] + v * m_loc[a][b]);
                m_entries.emplace_back(dof(na), dof(nb), m_loc[a][b]);
            }
        }
    }
    OneBodyOperators ops;
    ops.hamiltonian.resize(static_cast<long>(n), static_cast<long>(n));
    ops.mass.resize(static_cast<long>(n), static_cast<long>(n));
    ops.hamiltonian.setFromTriplets(h_entries.begin(), h_entries.end());
    ops.mass.setFromTriplets(m_entries.begin(), m_entries.end());
    for (std::size_t i = 1; i + 1 < mesh.size(); ++i) ops.dofs.push_back(i);
    return ops;
}

// ---------------------------------------------------------------------------

ElementFamily element_family_for(InteractionKind kind)
{
    return kind == InteractionKind::HardCoulomb ? ElementFamily::Linear : ElementFamily::Bilinear;
}

namespace {

// Cell corners: 0 = (i, j), 1 = (i+1, j), 2 = (i+1, j+1), 3 = (i, j+1).
struct Shape {
    std::array<double, 4> value{};
    std::array<std::array<double, 2>, 4> grad{};
};

Shape shape_at(ElementFamily family, bool upper, double xi, double eta, double hx, double hy)
{
    Shape s;
    if (family == ElementFamily::Bilinear) {
        s.value = {(1 - xi) * (1 - eta), xi * (1 - eta), xi * eta, (1 - xi) * eta};
        s.grad[0] = {-(1 - eta) / hx, -(1 - xi) / hy};
        s.grad[1] = {(1 - eta) / hx, -xi / hy};
        s.grad[2] = {eta / hx, xi / hy};
        s.grad[3] = {-eta / hx, (1 - xi) / hy};
    } else if (!upper) {
        s.value = {1 - xi, xi - eta, eta, 0.0};
        s.grad[0] = {-1 / hx, 0.0};
        s.grad[1] = {1 / hx, -1 / hy};
        s.grad[2] = {0.0, 1 / hy};
        s.grad[3] = {0.0, 0.0};
    } else {
        s.value = {1 - eta, 0.0, xi, eta - xi};
        s.grad[0] = {0.0, -1 / hy};
        s.grad[1] = {0.0, 0.0};
        s.grad[2] = {1 / hx, 0.0};
        s.grad[3] = {-1 / hx, 1 / hy};
    }
    return s;
}

struct CellGeometry {
    std::size_t i, j;
    double x0, y0, hx, hy;
    std::array<std::size_t, 4> corner;
};

CellGeometry cell_geometry(const Mesh2D& mesh, std::size_t t)
{
    const auto [i, j] = mesh.triangle_cell(t);
    const auto& x = mesh.axis().nodes;
    return {i,
            j,
            x[i],
            x[j],
            x[i + 1] - x[i],
            x[j + 1] - x[j],
            {mesh.node_index(i, j), mesh.node_index(i + 1, j), mesh.node_index(i + 1, j + 1),
             mesh.node_index(i, j + 1)}};
}

std::array<Point2, 3> triangle_points(const Mesh2D& mesh, std::size_t t)
{
    const auto& tri = mesh.triangles()[t];
    return {mesh.node_position(tri[0]), mesh.node_position(tri[1]), mesh.node_position(tri[2])};
}

class TripletSink {
public:
    explicit TripletSink(std::size_t reserve) { entries_.reserve(reserve); }
    void add(std::size_t a, std::size_t b, double v)
    {
        if (v != 0.0) entries_.emplace_back(static_cast<long>(a), static_cast<long>(b), v);
    }
    SymmetricSparseMatrix build(std::size_t n) const
    {
        SymmetricSparseMatrix m(static_cast<long>(n), static_cast<long>(n));
        m.setFromTriplets(entries_.begin(), entries_.end());
        return m;
    }

private:
    std::vector<Eigen::Triplet<double>> entries_;
};

// Scatters a 4x4 local matrix over the active corners.
void scatter(TripletSink& sink, const BosonicBasis& basis, const CellGeometry& g,
             const std::array<std::array<double, 4>, 4>& local)
{
    for (int a = 0; a < 4; ++a) {
        if (!basis.node_active(g.corner[a])) continue;
        for (int b = 0; b < 4; ++b) {
            if (!basis.node_active(g.corner[b])) continue;
            sink.add(g.corner[a], g.corner[b], local[a][b]);
        }
    }
}

SymmetricSparseMatrix reduce(const BosonicBasis& basis, const SymmetricSparseMatrix& full)
{
    const auto& p = basis.embedding();
    SymmetricSparseMatrix tmp = full * p;
    SymmetricSparseMatrix red = SymmetricSparseMatrix(p.transpose()) * tmp;
    return symmetrized(red);
}

}  // namespace

BosonicBasis::BosonicBasis(std::shared_ptr<const Mesh2D> mesh, ElementFamily family,
                           bool exclude_diagonal)
    : mesh_(std::move(mesh)), family_(family), exclude_diagonal_(exclude_diagonal)
{
    const std::size_t n = mesh_->axis_size();
    index_.assign(n * n, -1);
    for (std::size_t p = 1; p + 1 < n; ++p) {
        for (std::size_t q = p; q + 1 < n; ++q) {
            if (exclude_diagonal_ && p == q) continue;
            index_[p * n + q] = static_cast<long>(pairs_.size());
            pairs_.push_back({p, q});
        }
    }
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(2 * pairs_.size());
    const double s = 1.0 / std::sqrt(2.0);
    for (std::size_t r = 0; r < pairs_.size(); ++r) {
        const auto [p, q] = pairs_[r];
        const long col = static_cast<long>(r);
        if (p == q) {
            entries.emplace_back(static_cast<long>(mesh_->node_index(p, p)), col, 1.0);
        } else {
            entries.emplace_back(static_cast<long>(mesh_->node_index(p, q)), col, s);
            entries.emplace_back(static_cast<long>(mesh_->node_index(q, p)), col, s);
        }
    }
    embedding_.resize(static_cast<long>(mesh_->node_count()), static_cast<long>(pairs_.size()));
    embedding_.setFromTriplets(entries.begin(), entries.end());
}

long BosonicBasis::index_of(std::size_t p, std::size_t q) const
{
    if (p > q) std::swap(p, q);
    const std::size_t n = mesh_->axis_size();
    if (q >= n) return -1;
    return index_[p * n + q];
}

bool BosonicBasis::node_active(std::size_t a) const
{
    const auto [i, j] = mesh_->node_ij(a);
    return index_of(i, j) >= 0;
}

Vector BosonicBasis::nodal_values(const Vector& coefficients) const
{
    if (static_cast<std::size_t>(coefficients.size()) != size()) {
        throw std::invalid_argument("coefficient vector does not match the basis");
    }
    return embedding_ * coefficients;
}

double BosonicBasis::evaluate(const Vector& coefficients, double x1, double x2) const
{
    const auto& x = mesh_->axis().nodes;
    auto locate = [&](double v) {
        if (v < x.front() || v > x.back()) throw DomainError("evaluation point outside the mesh");
        auto it = std::upper_bound(x.begin(), x.end(), v);
        std::size_t k = static_cast<std::size_t>(std::distance(x.begin(), it));
        return std::min(k, x.size() - 1) - 1;
    };
    const std::size_t i = locate(x1);
    const std::size_t j = locate(x2);
    const double hx = x[i + 1] - x[i];
    const double hy = x[j + 1] - x[j];
    const double xi = (x1 - x[i]) / hx;
    const double eta = (x2 - x[j]) / hy;
    const Shape s = shape_at(family_, eta > xi, xi, eta, hx, hy);
    const std::array<std::size_t, 4> corners = {mesh_->node_index(i, j), mesh_->node_index(i + 1, j),
                                                mesh_->node_index(i + 1, j + 1),
                                                mesh_->node_index(i, j + 1)};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    double value = 0.0;
    for (int c = 0; c < 4; ++c) {
        const auto [p, q] = mesh_->node_ij(corners[c]);
        const long r = index_of(p, q);
        if (r < 0 || s.value[c] == 0.0) continue;
        value += s.value[c] * coefficients[r] * (p == q ? 1.0 : inv_sqrt2);
    }
    return value;
}

Vector BosonicBasis::mirror(const Vector& coefficients) const
{
    const std::size_t n = mesh_->axis_size();
    Vector out = Vector::Zero(coefficients.size());
    for (std::size_t r = 0; r < pairs_.size(); ++r) {
        const auto [p, q] = pairs_[r];
        const long m = index_of(n - 1 - p, n - 1 - q);
        if (m < 0) throw std::logic_error("basis is not mirror-symmetric");
        out[m] = coefficients[static_cast<long>(r)];
    }
    return out;
}

SymmetricSparseMatrix OperatorBundle::hamiltonian(double strength) const
{
    if (strength == 0.0) return h0;
    SymmetricSparseMatrix h = h0 + strength * interaction;
    h.makeCompressed();
    return h;
}

// ---------------------------------------------------------------------------

OperatorBundle assemble_2d(std::shared_ptr<const Mesh2D> mesh, const PotentialSpec& spec,
                           const InteractionSpec& interaction, const AssemblyOptions& options)
{
    spec.validate();
    interaction.validate();
    const auto family = element_family_for(interaction.kind);
    const bool hard = interaction.kind == InteractionKind::HardCoulomb;
    auto basis = std::make_shared<const BosonicBasis>(mesh, family, hard);

    const std::size_t nodes = mesh->node_count();
    const std::size_t reserve = mesh->triangles().size() * 16;
    TripletSink stiffness_mass_v(reserve);
    TripletSink mass(reserve);
    TripletSink vint(reserve);

    const auto smooth_rule = triangle_rule(options.smooth_order);
    const auto far_rule = triangle_rule(options.coulomb_far_order);
    const auto near_rule = triangle_rule(options.coulomb_near_order);

    for (std::size_t t = 0; t < mesh->triangles().size(); ++t) {
        const CellGeometry g = cell_geometry(*mesh, t);
        const bool upper = (t % 2) == 1;
        const auto pts = triangle_points(*mesh, t);
        const double v_cell = potential_eval(g.x0 + 0.5 * g.hx, spec) +
                              potential_eval(g.y0 + 0.5 * g.hy, spec);

        std::array<std::array<double, 4>, 4> h_loc{};
        std::array<std::array<double, 4>, 4> m_loc{};
        for (const auto& q : map_rule(smooth_rule, pts[0], pts[1], pts[2])) {
            const Shape s = shape_at(family, upper, (q.x[0] - g.x0) / g.hx, (q.x[1] - g.y0) / g.hy,
                                     g.hx, g.hy);
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) {
                    const double mm = q.w * s.value[a] * s.value[b];
                    const double kk =
                        q.w * (s.grad[a][0] * s.grad[b][0] + s.grad[a][1] * s.grad[b][1]);
                    m_loc[a][b] += mm;
                    h_loc[a][b] += kk + v_cell * mm;
                }
            }
        }
        scatter(stiffness_mass_v, *basis, g, h_loc);
        scatter(mass, *basis, g, m_loc);

        if (interaction.kind == InteractionKind::Contact) continue;

        const std::size_t offset = g.i > g.j ? g.i - g.j : g.j - g.i;
        const auto& rule = offset <= 2 ? near_rule : far_rule;
        std::array<std::array<double, 4>, 4> v_loc{};
        for (const auto& q : map_rule(rule, pts[0], pts[1], pts[2])) {
            const double r = q.x[0] - q.x[1];
            if (hard && r == 0.0) {
                throw std::logic_error("hard-core quadrature point on the diagonal");
            }
            const double w = q.w * interaction_eval(r, interaction);
            const Shape s = shape_at(family, upper, (q.x[0] - g.x0) / g.hx, (q.x[1] - g.y0) / g.hy,
                                     g.hx, g.hy);
            for (int a = 0; a < 4; ++a) {
                for (int b = 0; b < 4; ++b) v_loc[a][b] += w * s.value[a] * s.value[b];
            }
        }
        scatter(vint, *basis, g, v_loc);
    }

    if (interaction.kind == InteractionKind::Contact) {
        // Line measure: the integral of delta(x1 - x2) f picks up f(s, s) ds.
        const auto line = gauss_legendre(options.line_order);
        const auto& x = mesh->axis().nodes;
        for (std::size_t i = 0; i + 1 < x.size(); ++i) {
            const double h = x[i + 1] - x[i];
            const CellGeometry g = cell_geometry(*mesh, 2 * (i * (x.size() - 1) + i));
            std::array<std::array<double, 4>, 4> v_loc{};
            for (const auto& q : line) {
                const Shape s = shape_at(family, false, q.x, q.x, h, h);
                for (int a = 0; a < 4; ++a) {
                    for (int b = 0; b < 4; ++b) v_loc[a][b] += q.w * h * s.value[a] * s.value[b];
                }
            }
            scatter(vint, *basis, g, v_loc);
        }
    }

    OperatorBundle bundle;
    bundle.basis = basis;
    bundle.kind = interaction.kind;
    bundle.h0 = reduce(*basis, stiffness_mass_v.build(nodes));
    bundle.mass = reduce(*basis, mass.build(nodes));
    bundle.interaction = reduce(*basis, vint.build(nodes));
    bundle.regions = assemble_region_overlaps(*basis, spec, options);
    return bundle;
}

RegionOverlaps assemble_region_overlaps(const BosonicBasis& basis, const PotentialSpec& spec,
                                        const AssemblyOptions& options)
{
    const Mesh2D& mesh = basis.mesh();
    const double mid = spec.midpoint();
    if (!(mid > mesh.axis().nodes.front())) {
        throw DomainError("region split point lies outside the mesh");
    }
    const std::size_t nodes = mesh.node_count();
    const std::size_t reserve = mesh.triangles().size() * 16;
    TripletSink sink_I(reserve);
    TripletSink sink_II(reserve);
    TripletSink sink_III(reserve);
    const auto rule = triangle_rule(options.smooth_order);

    for (std::size_t t = 0; t < mesh.triangles().size(); ++t) {
        const CellGeometry g = cell_geometry(mesh, t);
        const bool upper = (t % 2) == 1;
        const auto pts = triangle_points(mesh, t);
        const std::vector<Point2> tri(pts.begin(), pts.end());

        // Quadrants: (left|right in x1) x (left|right in x2).
        for (int qx = 0; qx < 2; ++qx) {
            for (int qy = 0; qy < 2; ++qy) {
                auto poly = clip_half_plane(tri, 0, mid, qx == 0 ? 1.0 : -1.0);
                poly = clip_half_plane(poly, 1, mid, qy == 0 ? 1.0 : -1.0);
                if (poly.size() < 3) continue;
                std::array<std::array<double, 4>, 4> loc{};
                for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
                    for (const auto& q : map_rule(rule, poly[0], poly[k], poly[k + 1])) {
                        const Shape s = shape_at(basis.family(), upper, (q.x[0] - g.x0) / g.hx,
                                                 (q.x[1] - g.y0) / g.hy, g.hx, g.hy);
                        for (int a = 0; a < 4; ++a) {
                            for (int b = 0; b < 4; ++b) loc[a][b] += q.w * s.value[a] * s.value[b];
                        }
                    }
                }
                TripletSink& sink = (qx == 0 && qy == 0) ? sink_I
                                    : (qx == 1 && qy == 1) ? sink_III
                                                           : sink_II;
                scatter(sink, basis, g, loc);
            }
        }
    }
    return {reduce(basis, sink_I.build(nodes)), reduce(basis, sink_II.build(nodes)),
            reduce(basis, sink_III.build(nodes))};
}

Vector embed_coefficients(const BosonicBasis& source, const BosonicBasis& target,
                          const Vector& coefficients)
{
    const auto& xs = source.mesh().axis().nodes;
    const auto& xt = target.mesh().axis().nodes;
    if (xs.size() > xt.size() || !std::equal(xs.begin(), xs.end(), xt.begin())) {
        throw std::invalid_argument("source axis is not a prefix of the target axis");
    }
    if (static_cast<std::size_t>(coefficients.size()) != source.size()) {
        throw std::invalid_argument("coefficient vector does not match the source basis");
    }
    Vector out = Vector::Zero(static_cast<long>(target.size()));
    for (std::size_t r = 0; r < source.size(); ++r) {
        const auto [p, q] = source.pairs()[r];
        const long m = target.index_of(p, q);
        if (m < 0) {
            if (coefficients[static_cast<long>(r)] != 0.0) {
                throw std::invalid_argument("source pair missing from the target basis");
            }
            continue;
        }
        out[m] = coefficients[static_cast<long>(r)];
    }
    return out;
}

}  // namespace dwell
