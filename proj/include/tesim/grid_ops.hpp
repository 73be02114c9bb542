#pragma once

#include "tesim/grid.hpp"

namespace tesim {

// Finite-difference stencils on the uniform tensor grid.  First derivatives
// use the summation-by-parts pair (second-order central interior, matched
// one-sided closure at the boundary) so that with the trapezoid quadrature
//
//     integrate(f * divergence(g)) == -integrate(gradient(f) . g)
//
// holds to round-off whenever g vanishes on the boundary.  Laplacians are the
// compact second-order stencils; the Neumann variants impose zero flux with
// mirror ghost nodes.

/// Gradient of a scalar field; result has `dim` components.
Field gradient(const Field& f);

/// Divergence of a vector field (adjoint-matched to `gradient`).
Field divergence(const Field& g);

/// Componentwise Laplacian for homogeneous-Dirichlet fields.  Output rows on
/// the boundary are zero (boundary values are data, not unknowns).
Field laplacian_dirichlet(const Field& f);

/// Laplacian of a scalar field with zero Neumann flux (mirror ghosts).
Field laplacian_neumann(const Field& f);

/// div(kappa * grad theta) in conservative flux form with arithmetic-mean
/// face conductivities and mirror-ghost Neumann boundaries.  With kappa == 1
/// this reproduces laplacian_neumann.
Field variable_coefficient_diffusion(const Field& kappa, const Field& theta);

/// Trapezoid quadrature of a scalar field.
double integrate(const Field& f);

/// Quadrature-weighted inner product, summed over components.
double inner(const Field& a, const Field& b);

/// Gradient energy 0.5*int |grad u|^2 in the face-difference form that is
/// exactly compatible with laplacian_dirichlet: for any u vanishing on the
/// boundary, elastic_energy(u) == -0.5 * inner(u, laplacian_dirichlet(u)).
double elastic_energy(const Field& u);

/// Pointwise extrema and norms.
double field_min(const Field& f);
double field_max(const Field& f);
double max_abs(const Field& f);

/// Quadrature-weighted L1 norm (used to measure stencil convergence).
double weighted_l1(const Field& f);

}  // namespace tesim
