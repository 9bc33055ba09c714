#include "cutfsi/assembly.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace cutfsi {

namespace {

using Mat12 = Eigen::Matrix<double, 12, 12>;
using Mat12x3 = Eigen::Matrix<double, 12, 3>;

SparseMatrix from_triplets(int rows, int cols, const std::vector<Triplet>& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

// Active velocity slots of an element's 12 local velocity functions
// (local index 2k+comp); -1 never occurs for non-solid elements.
std::array<int, 12> velocity_slots(const Discretization& d, int t) {
  std::array<int, 12> s{};
  for (int k = 0; k < 6; ++k) {
    const int n = d.layout.element_nodes[t][k];
    s[2 * k] = d.dofs.u_dof(n, 0);
    s[2 * k + 1] = d.dofs.u_dof(n, 1);
  }
  return s;
}

std::array<int, 3> pressure_slots(const Discretization& d, int t) {
  const auto& tri = d.mesh.triangles[t];
  return {d.dofs.p_dof(tri[0]), d.dofs.p_dof(tri[1]), d.dofs.p_dof(tri[2])};
}

ElementCache::Entry volume_element(const Discretization& d, const FluidParams& params, const AssemblyOptions& opts,
                                   int t) {
  const TriangleMap map(d.mesh.triangle_vertices(t));
  const QuadratureRule q = fluid_quadrature(d.mesh, d.cls, t, opts.volume_order);
  ElementCache::Entry e;
  e.mass.setZero();
  e.viscous.setZero();
  e.divergence.setZero();
  for (std::size_t iq = 0; iq < q.size(); ++iq) {
    const double w = q.weights[iq];
    const P2Basis b = p2_basis(map, q.points[iq]);
    const P1Basis pb = p1_basis(map, q.points[iq]);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        const double m = w * params.rho_f * b.value[i] * b.value[j];
        const double gg = b.grad[i].dot(b.grad[j]);
        for (int a = 0; a < 2; ++a) {
          e.mass(2 * i + a, 2 * j + a) += m;
          for (int c = 0; c < 2; ++c) {
            const double v = params.nu * ((a == c ? gg : 0.0) + b.grad[i][c] * b.grad[j][a]);
            e.viscous(2 * i + a, 2 * j + c) += w * v;
          }
        }
      }
      for (int k = 0; k < 3; ++k) {
        for (int a = 0; a < 2; ++a) e.divergence(2 * i + a, k) -= w * pb.value[k] * b.grad[i][a];
      }
    }
  }
  return e;
}

}  // namespace

const ElementCache::Entry* ElementCache::find(int t) const {
  auto it = entries_.find(t);
  return it == entries_.end() ? nullptr : &it->second;
}

void ElementCache::store(int t, Entry e) { entries_.insert_or_assign(t, std::move(e)); }

SaddleSystem SaddleSystem::zeros(const DofMap& dofs) {
  const int nu = dofs.velocity_size(), np = dofs.num_pressure(), nl = dofs.multiplier_size();
  SaddleSystem s;
  s.M_uu.resize(nu, nu);
  s.A_uu.resize(nu, nu);
  s.A_up.resize(nu, np);
  s.A_ul.resize(nu, nl);
  s.A_pp.resize(np, np);
  s.A_pl.resize(np, nl);
  s.A_ll.resize(nl, nl);
  s.c_p = Vector::Zero(np);
  s.F = Vector::Zero(nu);
  s.G = Vector::Zero(nl);
  return s;
}

void assemble_volume(const Discretization& d, const FluidParams& params, const AssemblyOptions& opts,
                     SaddleSystem& sys, ElementCache* cache) {
  const int nu = d.dofs.velocity_size(), np = d.dofs.num_pressure();
  std::vector<Triplet> tm, ta, tp;
  tm.reserve(static_cast<std::size_t>(d.mesh.num_triangles()) * 72);
  ta.reserve(static_cast<std::size_t>(d.mesh.num_triangles()) * 144);
  tp.reserve(static_cast<std::size_t>(d.mesh.num_triangles()) * 36);
  const bool use_cache = opts.local_reassembly && cache != nullptr;
  for (int t = 0; t < d.mesh.num_triangles(); ++t) {
    const ElementTag tag = d.cls.tags[t];
    if (tag == ElementTag::solid) continue;
    ElementCache::Entry local;
    const ElementCache::Entry* e = nullptr;
    if (use_cache && tag == ElementTag::fluid) {
      e = cache->find(t);
      if (!e) {
        cache->store(t, volume_element(d, params, opts, t));
        e = cache->find(t);
      }
    } else {
      local = volume_element(d, params, opts, t);
      e = &local;
    }
    const auto us = velocity_slots(d, t);
    const auto ps = pressure_slots(d, t);
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 12; ++j) {
        if (e->mass(i, j) != 0.0) tm.emplace_back(us[i], us[j], e->mass(i, j));
        ta.emplace_back(us[i], us[j], e->viscous(i, j));
      }
      for (int k = 0; k < 3; ++k) tp.emplace_back(us[i], ps[k], e->divergence(i, k));
    }
  }
  sys.M_uu = from_triplets(nu, nu, tm);
  sys.A_uu = from_triplets(nu, nu, ta);
  sys.A_up = from_triplets(nu, np, tp);
}

double local_gamma(double gamma, const CutCell& cell, double nu, const AssemblyOptions& opts) {
  if (!opts.gamma_cap) return gamma;
  return std::min(gamma, cell.fluid_area / (24.0 * nu * cell.segment_length));
}

void assemble_interface_stab(const Discretization& d, const FluidParams& params, double gamma,
                             const AssemblyOptions& opts, SaddleSystem& sys) {
  if (gamma < 0.0) throw std::invalid_argument("assemble_interface_stab: gamma must be >= 0");
  const int nu = d.dofs.velocity_size(), np = d.dofs.num_pressure(), nl = d.dofs.multiplier_size();
  std::vector<Triplet> tuu, tup, tul, tpp, tpl, tll;
  const double nu2 = 2.0 * params.nu;
  // Local function order: 12 velocity, 3 pressure, 2 multiplier.
  constexpr int nloc = 17;
  for (int ic = 0; ic < d.cls.num_cut(); ++ic) {
    const CutCell& cell = d.cls.cells[ic];
    const int t = cell.triangle;
    const TriangleMap map(d.mesh.triangle_vertices(t));
    const QuadratureRule q = segment_quadrature(cell.segment[0], cell.segment[1], opts.segment_points);
    const Vec2& n = cell.normal;
    const double gamma_t = local_gamma(gamma, cell, params.nu, opts);
    Eigen::Matrix<double, nloc, nloc> L = Eigen::Matrix<double, nloc, nloc>::Zero();
    for (std::size_t iq = 0; iq < q.size(); ++iq) {
      const double w = q.weights[iq];
      const P2Basis b = p2_basis(map, q.points[iq]);
      const P1Basis pb = p1_basis(map, q.points[iq]);
      // W holds (mu - sigma(v,q)n) for every local function; the stabilized
      // form is -gamma int W_trial . W_test.
      Eigen::Matrix<double, 2, nloc> W;
      for (int i = 0; i < 6; ++i) {
        const double dn = b.grad[i].dot(n);
        for (int a = 0; a < 2; ++a) {
          // D(N_i e_a) n = 0.5 (dN_i/dn e_a + n_a grad N_i)
          Vec2 Dn = 0.5 * n[a] * b.grad[i];
          Dn[a] += 0.5 * dn;
          W.col(2 * i + a) = -nu2 * Dn;
        }
      }
      for (int k = 0; k < 3; ++k) W.col(12 + k) = pb.value[k] * n;
      W.col(15) = Vec2(1.0, 0.0);
      W.col(16) = Vec2(0.0, 1.0);
      if (gamma_t > 0.0) L.noalias() -= (gamma_t * w) * (W.transpose() * W);
      // -int lambda . v
      for (int i = 0; i < 6; ++i) {
        for (int a = 0; a < 2; ++a) {
          L(2 * i + a, 15 + a) -= w * b.value[i];
          L(15 + a, 2 * i + a) -= w * b.value[i];
        }
      }
    }
    const auto us = velocity_slots(d, t);
    const auto ps = pressure_slots(d, t);
    const std::array<int, 2> ls{2 * ic, 2 * ic + 1};
    for (int i = 0; i < 12; ++i) {
      for (int j = 0; j < 12; ++j) tuu.emplace_back(us[i], us[j], L(i, j));
      for (int k = 0; k < 3; ++k) tup.emplace_back(us[i], ps[k], L(i, 12 + k));
      for (int a = 0; a < 2; ++a) tul.emplace_back(us[i], ls[a], L(i, 15 + a));
    }
    for (int k = 0; k < 3; ++k) {
      for (int m = 0; m < 3; ++m) tpp.emplace_back(ps[k], ps[m], L(12 + k, 12 + m));
      for (int a = 0; a < 2; ++a) tpl.emplace_back(ps[k], ls[a], L(12 + k, 15 + a));
    }
    for (int a = 0; a < 2; ++a) {
      for (int c = 0; c < 2; ++c) tll.emplace_back(ls[a], ls[c], L(15 + a, 15 + c));
    }
  }
  sys.gamma = gamma;
  sys.A_uu += from_triplets(nu, nu, tuu);
  sys.A_up += from_triplets(nu, np, tup);
  sys.A_ul += from_triplets(nu, nl, tul);
  sys.A_pp += from_triplets(np, np, tpp);
  sys.A_pl += from_triplets(np, nl, tpl);
  sys.A_ll += from_triplets(nl, nl, tll);
}

ConvectionTerms assemble_convection(const Discretization& d, const FluidParams& params, const Vector& U,
                                    const AssemblyOptions& opts, bool with_jacobian) {
  const int nu = d.dofs.velocity_size();
  if (U.size() != nu) throw std::invalid_argument("assemble_convection: velocity vector has the wrong size");
  ConvectionTerms out;
  out.residual = Vector::Zero(nu);
  std::vector<Triplet> tj;
  if (with_jacobian) tj.reserve(static_cast<std::size_t>(d.mesh.num_triangles()) * 144);
  for (int t = 0; t < d.mesh.num_triangles(); ++t) {
    if (d.cls.tags[t] == ElementTag::solid) continue;
    const auto us = velocity_slots(d, t);
    Eigen::Matrix<double, 12, 1> ue;
    for (int i = 0; i < 12; ++i) ue[i] = U[us[i]];
    const TriangleMap map(d.mesh.triangle_vertices(t));
    const QuadratureRule q = fluid_quadrature(d.mesh, d.cls, t, opts.convection_order);
    Eigen::Matrix<double, 12, 1> re = Eigen::Matrix<double, 12, 1>::Zero();
    Mat12 je = Mat12::Zero();
    for (std::size_t iq = 0; iq < q.size(); ++iq) {
      const double w = q.weights[iq] * params.rho_f;
      const P2Basis b = p2_basis(map, q.points[iq]);
      Vec2 u = Vec2::Zero();
      Mat2 gu = Mat2::Zero();  // gu(a,b) = d u_a / d x_b
      for (int k = 0; k < 6; ++k) {
        const Vec2 uk(ue[2 * k], ue[2 * k + 1]);
        u += b.value[k] * uk;
        gu += uk * b.grad[k].transpose();
      }
      const Vec2 conv = gu * u;
      for (int i = 0; i < 6; ++i) {
        re[2 * i] += w * conv[0] * b.value[i];
        re[2 * i + 1] += w * conv[1] * b.value[i];
      }
      if (!with_jacobian) continue;
      for (int j = 0; j < 6; ++j) {
        const double adv = u.dot(b.grad[j]);
        for (int i = 0; i < 6; ++i) {
          const double wn = w * b.value[i];
          for (int a = 0; a < 2; ++a) {
            for (int c = 0; c < 2; ++c) {
              double v = b.value[j] * gu(a, c);
              if (a == c) v += adv;
              je(2 * i + a, 2 * j + c) += wn * v;
            }
          }
        }
      }
    }
    for (int i = 0; i < 12; ++i) {
      out.residual[us[i]] += re[i];
      if (with_jacobian) {
        for (int j = 0; j < 12; ++j) tj.emplace_back(us[i], us[j], je(i, j));
      }
    }
  }
  out.jacobian = from_triplets(nu, nu, tj);
  return out;
}

void assemble_loads(const Discretization& d, const VectorField& body_force, const VectorField& u_gamma,
                    const AssemblyOptions& opts, SaddleSystem& sys) {
  sys.F = Vector::Zero(d.dofs.velocity_size());
  sys.G = Vector::Zero(d.dofs.multiplier_size());
  if (body_force) {
    for (int t = 0; t < d.mesh.num_triangles(); ++t) {
      if (d.cls.tags[t] == ElementTag::solid) continue;
      const TriangleMap map(d.mesh.triangle_vertices(t));
      const QuadratureRule q = fluid_quadrature(d.mesh, d.cls, t, opts.load_order);
      const auto us = velocity_slots(d, t);
      for (std::size_t iq = 0; iq < q.size(); ++iq) {
        const Vec2 f = body_force(q.points[iq]);
        const P2Basis b = p2_basis(map, q.points[iq]);
        for (int i = 0; i < 6; ++i) {
          sys.F[us[2 * i]] += q.weights[iq] * f[0] * b.value[i];
          sys.F[us[2 * i + 1]] += q.weights[iq] * f[1] * b.value[i];
        }
      }
    }
  }
  if (u_gamma) {
    for (int ic = 0; ic < d.cls.num_cut(); ++ic) {
      const CutCell& cell = d.cls.cells[ic];
      const QuadratureRule q = segment_quadrature(cell.segment[0], cell.segment[1], opts.segment_points);
      for (std::size_t iq = 0; iq < q.size(); ++iq) {
        const Vec2 ug = u_gamma(q.points[iq]);
        sys.G[2 * ic] -= q.weights[iq] * ug[0];
        sys.G[2 * ic + 1] -= q.weights[iq] * ug[1];
      }
    }
  }
}

Vector assemble_pressure_mean_constraint(const Discretization& d, const AssemblyOptions& opts) {
  Vector c = Vector::Zero(d.dofs.num_pressure());
  for (int t = 0; t < d.mesh.num_triangles(); ++t) {
    if (d.cls.tags[t] == ElementTag::solid) continue;
    const TriangleMap map(d.mesh.triangle_vertices(t));
    const QuadratureRule q = fluid_quadrature(d.mesh, d.cls, t, std::min(opts.volume_order, 2));
    const auto ps = pressure_slots(d, t);
    for (std::size_t iq = 0; iq < q.size(); ++iq) {
      const P1Basis pb = p1_basis(map, q.points[iq]);
      for (int k = 0; k < 3; ++k) c[ps[k]] += q.weights[iq] * pb.value[k];
    }
  }
  return c;
}

ForceFunctionals assemble_force_functionals(const CutClassification& cls, const Vec2& center) {
  const int nl = 2 * cls.num_cut();
  ForceFunctionals f;
  f.force = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, nl);
  f.torque = Eigen::RowVectorXd::Zero(nl);
  for (int ic = 0; ic < cls.num_cut(); ++ic) {
    const CutCell& c = cls.cells[ic];
    // lambda is constant per segment, so the midpoint gives the exact moment.
    const Vec2 arm = perp(c.segment_midpoint() - center);
    for (int a = 0; a < 2; ++a) {
      f.force(a, 2 * ic + a) = -c.segment_length;
      f.torque[2 * ic + a] = -c.segment_length * arm[a];
    }
  }
  return f;
}

SaddleSystem assemble_saddle_system(const Discretization& d, const FluidParams& params, double gamma,
                                    const VectorField& body_force, const VectorField& u_gamma,
                                    const AssemblyOptions& opts, ElementCache* cache) {
  SaddleSystem sys = SaddleSystem::zeros(d.dofs);
  assemble_volume(d, params, opts, sys, cache);
  assemble_interface_stab(d, params, gamma, opts, sys);
  assemble_loads(d, body_force, u_gamma, opts, sys);
  sys.c_p = assemble_pressure_mean_constraint(d, opts);
  return sys;
}

SparseMatrix global_operator(const SaddleSystem& s, double mass_scale) {
  const int nu = static_cast<int>(s.A_uu.rows());
  const int np = static_cast<int>(s.A_pp.rows());
  const int nl = static_cast<int>(s.A_ll.rows());
  const int po = nu, lo = nu + np, ao = nu + np + nl;
  const int n = ao + 1;
  std::vector<Triplet> t;
  t.reserve(s.M_uu.nonZeros() + s.A_uu.nonZeros() + 2 * (s.A_up.nonZeros() + s.A_ul.nonZeros() + s.A_pl.nonZeros()) +
            s.A_pp.nonZeros() + s.A_ll.nonZeros() + 2 * np);
  auto add = [&t](const SparseMatrix& m, int ro, int co, double scale, bool transpose) {
    for (int k = 0; k < m.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
        const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
        if (transpose) {
          t.emplace_back(ro + c, co + r, scale * it.value());
        } else {
          t.emplace_back(ro + r, co + c, scale * it.value());
        }
      }
    }
  };
  if (mass_scale != 0.0) add(s.M_uu, 0, 0, mass_scale, false);
  add(s.A_uu, 0, 0, 1.0, false);
  add(s.A_up, 0, po, 1.0, false);
  add(s.A_up, po, 0, 1.0, true);
  add(s.A_ul, 0, lo, 1.0, false);
  add(s.A_ul, lo, 0, 1.0, true);
  add(s.A_pp, po, po, 1.0, false);
  add(s.A_pl, po, lo, 1.0, false);
  add(s.A_pl, lo, po, 1.0, true);
  add(s.A_ll, lo, lo, 1.0, false);
  for (int k = 0; k < np; ++k) {
    if (s.c_p[k] == 0.0) continue;
    t.emplace_back(po + k, ao, s.c_p[k]);
    t.emplace_back(ao, po + k, s.c_p[k]);
  }
  SparseMatrix K(n, n);
  K.setFromTriplets(t.begin(), t.end());
  return K;
}

Vec2 multiplier_value(const Vector& lambda_block, int cut_index) {
  return {lambda_block[2 * cut_index], lambda_block[2 * cut_index + 1]};
}

}  // namespace cutfsi
