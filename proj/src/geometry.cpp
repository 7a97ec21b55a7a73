// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include "rydarray/geometry.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace rydarray
{

namespace polarization
{

CVec3 circular()
{
  return CVec3(Complex(1.0, 0.0), Complex(0.0, 1.0), Complex(0.0, 0.0)) / std::sqrt(2.0);
}

CVec3 linear_x()
{
  return CVec3(1.0, 0.0, 0.0);
}

CVec3 linear_y()
{
  return CVec3(0.0, 1.0, 0.0);
}

CVec3 from_name(std::string_view name)
{
  if (name == "circular")
  {
    return circular();
  }
  if (name == "x")
  {
    return linear_x();
  }
  if (name == "y")
  {
    return linear_y();
  }
  throw DomainError("unknown polarization '" + std::string(name) + "'");
}

std::string_view name_of(const CVec3 &p)
{
  if ((p - circular()).norm() < 1e-12)
  {
    return "circular";
  }
  if ((p - linear_x()).norm() < 1e-12)
  {
    return "x";
  }
  if ((p - linear_y()).norm() < 1e-12)
  {
    return "y";
  }
  return "custom";
}

}  // namespace polarization

Lattice build_disc_lattice(int diameter_sites, Real a, const CVec3 &polarization)
{
  if (diameter_sites < 1)
  {
    throw DomainError("disc diameter must be at least one site");
  }
  if (!(a > 0.0))
  {
    throw DomainError("lattice constant must be positive");
  }
  const Real offset = (diameter_sites % 2 == 1) ? 0.0 : 0.5;
  const Real radius = 0.5 * diameter_sites * a;
  const Real r2max = radius * radius * (1.0 + 1e-12);

  std::vector<Vec3> sites;
  const int n = diameter_sites;
  for (int iy = -n; iy <= n; ++iy)
  {
    for (int ix = -n; ix <= n; ++ix)
    {
      const Real x = (ix + offset) * a;
      const Real y = (iy + offset) * a;
      if (x * x + y * y <= r2max)
      {
        sites.emplace_back(x, y, 0.0);
      }
    }
  }

  Lattice lattice;
  lattice.positions.resize(3, static_cast<Eigen::Index>(sites.size()));
  for (std::size_t j = 0; j < sites.size(); ++j)
  {
    lattice.positions.col(static_cast<Eigen::Index>(j)) = sites[j];
  }
  lattice.a = a;
  lattice.diameter_sites = diameter_sites;
  lattice.polarization = polarization.normalized();
  return lattice;
}

Lattice remove_site(const Lattice &lattice, Eigen::Index j)
{
  const Eigen::Index n = lattice.size();
  if (j < 0 || j >= n)
  {
    throw DomainError("site index out of range");
  }
  Lattice out = lattice;
  out.positions.resize(3, n - 1);
  out.positions.leftCols(j) = lattice.positions.leftCols(j);
  out.positions.rightCols(n - 1 - j) = lattice.positions.rightCols(n - 1 - j);
  return out;
}

Lattice custom_lattice(const Eigen::Matrix3Xd &positions, const CVec3 &polarization)
{
  Lattice lattice;
  lattice.positions = positions;
  lattice.polarization = polarization.normalized();
  Real amin = 0.0;
  for (Eigen::Index i = 0; i < positions.cols(); ++i)
  {
    for (Eigen::Index j = i + 1; j < positions.cols(); ++j)
    {
      const Real d = (positions.col(i) - positions.col(j)).norm();
      amin = (amin == 0.0) ? d : std::min(amin, d);
    }
  }
  lattice.a = amin;
  return lattice;
}

Real ProbeMode::width(Real z) const
{
  const Real dz = z - focus_z;
  return std::sqrt(waist * waist + dz * dz / (pi * pi * waist * waist));
}

Complex probe_amplitude(const ProbeMode &mode, const Vec3 &r)
{
  // Gaussian solution of 4πi ∂z E + ∇⊥² E = 0 (λ = 1) with waist at focus_z:
  // E = E0 (−i zR)/q · exp(iπ r⊥²/q), q = z − z_f − i zR.
  const Real zr = mode.rayleigh_range();
  const Complex q(r.z() - mode.focus_z, -zr);
  const Real peak = std::sqrt(2.0 * mode.power / (pi * mode.waist * mode.waist));
  const Real rho2 = r.x() * r.x() + r.y() * r.y();
  return peak * Complex(0.0, -zr) / q * std::exp(I * pi * rho2 / q);
}

VectorXc field_at_sites(const Lattice &lattice, const ProbeMode &mode)
{
  VectorXc field(lattice.size());
  for (Eigen::Index j = 0; j < lattice.size(); ++j)
  {
    field(j) = probe_amplitude(mode, lattice.site(j));
  }
  return field;
}

VectorXd defect_weights(const Lattice &lattice, const ProbeMode &mode)
{
  if (lattice.size() == 0)
  {
    throw DomainError("defect weights need a nonempty lattice");
  }
  const VectorXd intensity = field_at_sites(lattice, mode).cwiseAbs2();
  const Real total = intensity.sum();
  if (!(total > 0.0))
  {
    throw DomainError("probe field vanishes on every lattice site");
  }
  return intensity / total;
}

}  // namespace rydarray
