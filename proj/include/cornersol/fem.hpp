#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "cornersol/errors.hpp"
#include "cornersol/geometry.hpp"
#include "cornersol/quadrature.hpp"

namespace cornersol {

/// Vertices of the L-shaped polygon (-1,1)^2 minus the closed quadrant
/// {x >= 0, y <= 0}, listed counterclockwise starting at the reentrant
/// corner; the corner edges run along theta=0 and theta=3*pi/2.
inline std::vector<Vec2> lshape_vertices() {
    return {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {-1.0, 1.0}, {-1.0, -1.0}, {0.0, -1.0}};
}

/// Structured criss-cross triangulation of the L-shape: every grid square of
/// side 1/n is split into four triangles by its center node. Node positions
/// are kept on the integer lattice with spacing 1/(2n) (grid nodes at
/// even-even, cell centers at odd-odd) so geometry predicates are exact.
struct TriMesh {
    int n = 0;      // divisions per unit length
    int level = 0;  // refinement generation
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 2>> lattice;  // integer coords, units of 1/(2n)
    std::vector<std::array<int, 3>> triangles;
    std::vector<int> boundary_nodes;  // ascending
    std::vector<char> is_boundary;
    int corner_node = -1;  // index of the node at the reentrant corner

    double h() const { return 1.0 / n; }
};

namespace fem_detail {

// strictly inside the removed quadrant x > 0, y < 0
inline bool removed(int I, int J) { return I > 0 && J < 0; }

inline bool on_boundary(int I, int J, int n) {
    const int m = 2 * n;
    if (I == m || I == -m || J == m || J == -m) return true;
    return (J == 0 && I >= 0) || (I == 0 && J <= 0);
}

}  // namespace fem_detail

inline TriMesh build_lshape_mesh(int n) {
    if (n < 2) throw ValidationError("mesh needs at least 2 divisions per unit length");
    TriMesh mesh;
    mesh.n = n;
    const int m = 2 * n;
    const int span = 2 * m + 1;
    std::vector<int> index(static_cast<std::size_t>(span) * span, -1);
    const auto key = [&](int I, int J) {
        return static_cast<std::size_t>(J + m) * span + static_cast<std::size_t>(I + m);
    };

    for (int J = -m; J <= m; ++J) {
        for (int I = -m; I <= m; ++I) {
            const bool even = (I % 2 == 0) && (J % 2 == 0);
            const bool odd = (I % 2 != 0) && (J % 2 != 0);
            if (!even && !odd) continue;
            if (fem_detail::removed(I, J)) continue;
            const int id = static_cast<int>(mesh.nodes.size());
            index[key(I, J)] = id;
            mesh.lattice.push_back({I, J});
            mesh.nodes.push_back({I / (2.0 * n), J / (2.0 * n)});
            const bool bdry = even && fem_detail::on_boundary(I, J, n);
            mesh.is_boundary.push_back(bdry ? 1 : 0);
            if (bdry) mesh.boundary_nodes.push_back(id);
            if (I == 0 && J == 0) mesh.corner_node = id;
        }
    }

    for (int CJ = -m + 1; CJ <= m - 1; CJ += 2) {
        for (int CI = -m + 1; CI <= m - 1; CI += 2) {
            if (fem_detail::removed(CI, CJ)) continue;
            const int c = index[key(CI, CJ)];
            const int g00 = index[key(CI - 1, CJ - 1)];
            const int g10 = index[key(CI + 1, CJ - 1)];
            const int g11 = index[key(CI + 1, CJ + 1)];
            const int g01 = index[key(CI - 1, CJ + 1)];
            mesh.triangles.push_back({g00, g10, c});
            mesh.triangles.push_back({g10, g11, c});
            mesh.triangles.push_back({g11, g01, c});
            mesh.triangles.push_back({g01, g00, c});
        }
    }
    return mesh;
}

/// Uniform refinement: halves h and quarters every triangle. On this
/// structured family that is exactly the criss-cross mesh at 2n, so the
/// refined mesh is rebuilt at the doubled resolution.
inline TriMesh refine_uniform(const TriMesh& mesh) {
    TriMesh fine = build_lshape_mesh(2 * mesh.n);
    fine.level = mesh.level + 1;
    return fine;
}

/// Compressed sparse rows, symmetric storage not exploited.
struct CsrMatrix {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    std::vector<double> val;

    void multiply(const std::vector<double>& x, std::vector<double>& y) const {
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * x[col[k]];
            y[i] = s;
        }
    }

    double entry(int i, int j) const {
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            if (col[k] == j) return val[k];
        return 0.0;
    }
};

namespace fem_detail {

struct ElementGeometry {
    double area;
    std::array<double, 3> bx, by;  // gradient components of the barycentric functions
};

inline ElementGeometry element_geometry(const TriMesh& mesh, const std::array<int, 3>& tri) {
    const Vec2 p0 = mesh.nodes[tri[0]], p1 = mesh.nodes[tri[1]], p2 = mesh.nodes[tri[2]];
    const double twoA = cross(p1 - p0, p2 - p0);
    ElementGeometry g;
    g.area = 0.5 * twoA;
    g.bx = {(p1.y - p2.y) / twoA, (p2.y - p0.y) / twoA, (p0.y - p1.y) / twoA};
    g.by = {(p2.x - p1.x) / twoA, (p0.x - p2.x) / twoA, (p1.x - p0.x) / twoA};
    return g;
}

}  // namespace fem_detail

/// Full P1 stiffness matrix (all nodes, no boundary elimination).
inline CsrMatrix assemble_stiffness(const TriMesh& mesh) {
    const int n = static_cast<int>(mesh.nodes.size());
    std::vector<std::vector<std::pair<int, double>>> rows(n);
    for (const auto& tri : mesh.triangles) {
        const auto g = fem_detail::element_geometry(mesh, tri);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                const double k = g.area * (g.bx[a] * g.bx[b] + g.by[a] * g.by[b]);
                auto& row = rows[tri[a]];
                bool found = false;
                for (auto& e : row)
                    if (e.first == tri[b]) {
                        e.second += k;
                        found = true;
                        break;
                    }
                if (!found) row.push_back({tri[b], k});
            }
        }
    }
    CsrMatrix K;
    K.n = n;
    K.row_ptr.resize(n + 1, 0);
    for (int i = 0; i < n; ++i) {
        std::sort(rows[i].begin(), rows[i].end());
        K.row_ptr[i + 1] = K.row_ptr[i] + static_cast<int>(rows[i].size());
    }
    K.col.reserve(K.row_ptr[n]);
    K.val.reserve(K.row_ptr[n]);
    for (int i = 0; i < n; ++i)
        for (const auto& e : rows[i]) {
            K.col.push_back(e.first);
            K.val.push_back(e.second);
        }
    return K;
}

/// Load vector for a source term, element-wise Gauss quadrature; elements
/// touching the reentrant corner get a higher-degree rule so mildly singular
/// sources are still integrated accurately.
inline std::vector<double> assemble_load(const TriMesh& mesh,
                                         const std::function<double(Vec2)>& f, int degree = 5,
                                         int corner_degree = 8) {
    std::vector<double> load(mesh.nodes.size(), 0.0);
    for (const auto& tri : mesh.triangles) {
        const bool at_corner = tri[0] == mesh.corner_node || tri[1] == mesh.corner_node ||
                               tri[2] == mesh.corner_node;
        const quad::TriangleRule& rule =
            quad::triangle_rule(at_corner ? std::max(degree, corner_degree) : degree);
        const Vec2 p0 = mesh.nodes[tri[0]], p1 = mesh.nodes[tri[1]], p2 = mesh.nodes[tri[2]];
        const double twoA = cross(p1 - p0, p2 - p0);
        for (const auto& q : rule.points) {
            const Vec2 x = p0 + q.x * (p1 - p0) + q.y * (p2 - p0);
            const double fv = f(x) * q.w * twoA;
            load[tri[0]] += fv * (1.0 - q.x - q.y);
            load[tri[1]] += fv * q.x;
            load[tri[2]] += fv * q.y;
        }
    }
    return load;
}

/// Mesh plus nodal coefficient vector of a P1 function.
struct DiscreteField {
    TriMesh mesh;
    std::vector<double> values;
};

struct SolveReport {
    int iterations = 0;
    double rel_residual = 0.0;
};

/// P1 Galerkin solve of -Laplacian(u) = f with u = g on the boundary
/// (nodal interpolation), by Jacobi-preconditioned conjugate gradients to
/// relative residual 1e-10. Deterministic: fixed assembly and summation
/// order, no parallel reduction.
inline DiscreteField solve_dirichlet(const TriMesh& mesh, const std::function<double(Vec2)>& f,
                                     const std::function<double(Vec2)>& g,
                                     SolveReport* report = nullptr) {
    const int n = static_cast<int>(mesh.nodes.size());
    const CsrMatrix K = assemble_stiffness(mesh);
    const std::vector<double> load = assemble_load(mesh, f);

    std::vector<double> values(n, 0.0);
    for (int b : mesh.boundary_nodes) values[b] = g(mesh.nodes[b]);

    // reduce to interior unknowns
    std::vector<int> interior;
    interior.reserve(n);
    std::vector<int> global_to_interior(n, -1);
    for (int i = 0; i < n; ++i)
        if (!mesh.is_boundary[i]) {
            global_to_interior[i] = static_cast<int>(interior.size());
            interior.push_back(i);
        }
    const int ni = static_cast<int>(interior.size());

    CsrMatrix A;
    A.n = ni;
    A.row_ptr.resize(ni + 1, 0);
    std::vector<double> rhs(ni);
    for (int ii = 0; ii < ni; ++ii) {
        const int i = interior[ii];
        double b = load[i];
        int count = 0;
        for (int k = K.row_ptr[i]; k < K.row_ptr[i + 1]; ++k) {
            const int j = K.col[k];
            if (mesh.is_boundary[j])
                b -= K.val[k] * values[j];
            else
                ++count;
        }
        rhs[ii] = b;
        A.row_ptr[ii + 1] = A.row_ptr[ii] + count;
    }
    A.col.resize(A.row_ptr[ni]);
    A.val.resize(A.row_ptr[ni]);
    for (int ii = 0; ii < ni; ++ii) {
        const int i = interior[ii];
        int pos = A.row_ptr[ii];
        for (int k = K.row_ptr[i]; k < K.row_ptr[i + 1]; ++k) {
            const int j = K.col[k];
            if (!mesh.is_boundary[j]) {
                A.col[pos] = global_to_interior[j];
                A.val[pos] = K.val[k];
                ++pos;
            }
        }
    }

    std::vector<double> diag(ni, 1.0);
    for (int ii = 0; ii < ni; ++ii)
        for (int k = A.row_ptr[ii]; k < A.row_ptr[ii + 1]; ++k)
            if (A.col[k] == ii) diag[ii] = A.val[k];

    const auto dot_v = [](const std::vector<double>& a, const std::vector<double>& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };

    std::vector<double> x(ni, 0.0), r = rhs, z(ni), p(ni), q(ni);
    const double bnorm = std::sqrt(dot_v(rhs, rhs));
    SolveReport rep;
    if (bnorm > 0.0) {
        for (int i = 0; i < ni; ++i) z[i] = r[i] / diag[i];
        p = z;
        double rz = dot_v(r, z);
        const int max_iter = 20 * n;
        const double tol = 1e-10 * bnorm;
        int it = 0;
        double rnorm = std::sqrt(dot_v(r, r));
        while (rnorm > tol) {
            if (it >= max_iter) throw SolverStall("conjugate gradients missed the tolerance");
            A.multiply(p, q);
            const double alpha = rz / dot_v(p, q);
            for (int i = 0; i < ni; ++i) x[i] += alpha * p[i];
            for (int i = 0; i < ni; ++i) r[i] -= alpha * q[i];
            rnorm = std::sqrt(dot_v(r, r));
            for (int i = 0; i < ni; ++i) z[i] = r[i] / diag[i];
            const double rz_new = dot_v(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (int i = 0; i < ni; ++i) p[i] = z[i] + beta * p[i];
            ++it;
        }
        rep.iterations = it;
        rep.rel_residual = rnorm / bnorm;
    }
    if (report) *report = rep;

    for (int ii = 0; ii < ni; ++ii) values[interior[ii]] = x[ii];
    return {mesh, std::move(values)};
}

struct ErrorNorms {
    double l2 = 0.0;
    double h1_semi = 0.0;
};

/// Element-wise quadrature of |u - u_h|^2 and |grad u - grad u_h|^2 against
/// a given exact solution; corner-touching elements again use the
/// higher-degree rule, and no quadrature point sits on the vertex.
inline ErrorNorms h1_error(const DiscreteField& field,
                           const std::function<double(Vec2)>& exact_value,
                           const std::function<Vec2(Vec2)>& exact_gradient, int degree = 5,
                           int corner_degree = 8) {
    if (degree < 4) throw ValidationError("error quadrature degree must be at least 4");
    const TriMesh& mesh = field.mesh;
    double l2 = 0.0, h1 = 0.0;
    for (const auto& tri : mesh.triangles) {
        const bool at_corner = tri[0] == mesh.corner_node || tri[1] == mesh.corner_node ||
                               tri[2] == mesh.corner_node;
        const quad::TriangleRule& rule =
            quad::triangle_rule(at_corner ? std::max(degree, corner_degree) : degree);
        const auto g = fem_detail::element_geometry(mesh, tri);
        const Vec2 p0 = mesh.nodes[tri[0]], p1 = mesh.nodes[tri[1]], p2 = mesh.nodes[tri[2]];
        const double v0 = field.values[tri[0]], v1 = field.values[tri[1]],
                     v2 = field.values[tri[2]];
        const Vec2 grad_h{v0 * g.bx[0] + v1 * g.bx[1] + v2 * g.bx[2],
                          v0 * g.by[0] + v1 * g.by[1] + v2 * g.by[2]};
        for (const auto& q : rule.points) {
            const Vec2 x = p0 + q.x * (p1 - p0) + q.y * (p2 - p0);
            const double uh = v0 * (1.0 - q.x - q.y) + v1 * q.x + v2 * q.y;
            const double dv = exact_value(x) - uh;
            const Vec2 dg = exact_gradient(x) - grad_h;
            const double w = q.w * 2.0 * g.area;
            l2 += w * dv * dv;
            h1 += w * dot(dg, dg);
        }
    }
    return {std::sqrt(l2), std::sqrt(h1)};
}

/// max |nodal value| over nodes strictly inside the ball of the given radius
/// around the reentrant corner. The nearest non-corner nodes are the cell
/// centers at distance h/sqrt(2), so the radius must reach past them.
inline double corner_pole_indicator(const DiscreteField& field, double radius) {
    if (!(radius > field.mesh.h() / std::sqrt(2.0)))
        throw ValidationError("indicator radius must exceed h/sqrt(2)");
    double best = -1.0;
    bool any = false;
    for (std::size_t i = 0; i < field.mesh.nodes.size(); ++i) {
        if (norm(field.mesh.nodes[i]) < radius) {
            any = true;
            best = std::max(best, std::abs(field.values[i]));
        }
    }
    if (!any) throw EmptyBall("no mesh nodes inside the corner ball");
    return best;
}

struct StudyRow {
    int level;
    double h;
    double l2;
    double h1_semi;
    double rate_l2;  // NaN on the coarsest level
    double rate_h1;
};

/// Solve/measure across uniformly refined meshes; observed rates are
/// log2 of consecutive error ratios.
inline std::vector<StudyRow> convergence_study(const std::function<double(Vec2)>& f,
                                               const std::function<double(Vec2)>& g,
                                               const std::function<double(Vec2)>& exact_value,
                                               const std::function<Vec2(Vec2)>& exact_gradient,
                                               int n0, int levels) {
    if (levels < 3) throw ValidationError("a convergence study needs at least 3 levels");
    std::vector<StudyRow> rows;
    TriMesh mesh = build_lshape_mesh(n0);
    for (int l = 0; l < levels; ++l) {
        const DiscreteField uh = solve_dirichlet(mesh, f, g);
        const ErrorNorms e = h1_error(uh, exact_value, exact_gradient);
        StudyRow row{l, mesh.h(), e.l2, e.h1_semi, std::nan(""), std::nan("")};
        if (!rows.empty()) {
            row.rate_l2 = std::log2(rows.back().l2 / e.l2);
            row.rate_h1 = std::log2(rows.back().h1_semi / e.h1_semi);
        }
        rows.push_back(row);
        if (l + 1 < levels) mesh = refine_uniform(mesh);
    }
    return rows;
}

}  // namespace cornersol
