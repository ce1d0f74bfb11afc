"""Discrete (counting) and quadrature (sphere) induced actions.

Counting sections live on finite supports with exact-key merging: support
points are hashed on a 1e-9 grid so translated deltas coincide exactly.

The four one-parameter families of actions on the (a, b, c) group:

  row a   (g phi)(p) = e^{-ia} e^{ipc} phi(p - b)
  row b   (g psi)(q) = e^{-ia} e^{-ib(q-c)} psi(q - c)
  row c   (g psi)(r) = e^{-ia} e^{-ib(r-c)} e^{ib^2 t/2} psi(r - c - bt)
  row d   (g phi)(p, q) = e^{-ia} e^{-ib(q-c)} phi(p - b, q - c)

and the sphere action (helicity 0)

  (g f)(v) = e^{i<v, kc>} f(A^{-1} v).

Quadrature sections keep a fixed Gauss-Legendre x uniform grid and compose
evaluators, so rotations never touch the nodes or weights; values are
materialized on the grid for inner products.

The two-sided character-matching condition (equality of chi on H and the
conjugated eta on g K g^{-1} over probe generators) is the only executable
part of the irreducibility/disjointness criterion here; the companion
finiteness condition on double cosets is analytic per family and is not
decided numerically.
"""

import numpy as np

from . import groups, states
from .tolerances import DEFAULT


class SectionVector:
    """Finitely supported (counting) or grid-sampled (quadrature) section."""

    __slots__ = ("support", "values", "mode", "weights", "evaluator")

    def __init__(self, support, values, mode="counting", weights=None,
                 evaluator=None):
        self.support = np.asarray(support, dtype=float)
        self.values = np.asarray(values, dtype=complex)
        self.mode = mode
        self.weights = None if weights is None else np.asarray(weights, dtype=float)
        self.evaluator = evaluator
        if mode == "counting" and len(self.values) != len(self.support):
            raise ValueError("support/values length mismatch")

    def norm(self):
        if self.mode == "counting":
            return float(np.sqrt(np.sum(np.abs(self.values) ** 2)))
        return float(np.sqrt(np.sum(self.weights * np.abs(self.values) ** 2)))


def delta_section(points, values=None):
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    if values is None:
        values = np.ones(pts.shape[0] if pts.ndim else 1)
    return SectionVector(pts, values, mode="counting")


def _merge_counting(support, values):
    """Sum values on coincident support points (1e-9 rounding grid)."""
    grid = DEFAULT.support_grid
    pts = np.atleast_2d(support.T).T if support.ndim == 1 else support
    keys = np.rint(np.atleast_2d(pts.reshape(len(values), -1)) / grid).astype(np.int64)
    uniq, inv = np.unique(keys, axis=0, return_inverse=True)
    out = np.zeros(len(uniq), dtype=complex)
    np.add.at(out, inv, values)
    rep = np.zeros((len(uniq),) + support.shape[1:] if support.ndim > 1
                   else (len(uniq),))
    first = {}
    for i, j in enumerate(inv):
        if j not in first:
            first[j] = i
    for j, i in first.items():
        rep[j] = support[i]
    return rep, out


def inner(f, g):
    """(f, g) in the common mode; counting sum or normalized quadrature."""
    if f.mode != g.mode:
        raise ValueError("mode mismatch")
    if f.mode == "counting":
        grid = DEFAULT.support_grid
        fk = np.rint(f.support.reshape(len(f.values), -1) / grid).astype(np.int64)
        gk = np.rint(g.support.reshape(len(g.values), -1) / grid).astype(np.int64)
        index = {tuple(k): i for i, k in enumerate(fk)}
        total = 0.0 + 0.0j
        for i, k in enumerate(gk):
            j = index.get(tuple(k))
            if j is not None:
                total += np.conj(f.values[j]) * g.values[i]
        return complex(total)
    return complex(np.sum(f.weights * np.conj(f.values) * g.values))


class HeisenbergRow:
    """One of the four actions above; rows a, b, d need no parameter."""

    def __init__(self, row, t=0.0):
        if row not in "abcd":
            raise ValueError("unknown row %r" % (row,))
        self.row = row
        self.t = float(t)

    def apply(self, g, f):
        if f.mode != "counting":
            raise ValueError("counting mode required")
        a, b, c = g.data
        s = f.support
        if self.row == "a":
            new = s + b
            vals = np.exp(1j * (-a + new * c)) * f.values
        elif self.row == "b":
            new = s + c
            vals = np.exp(-1j * (a + b * (new - c))) * f.values
        elif self.row == "c":
            new = s + c + b * self.t
            vals = np.exp(1j * (-a - b * (new - c) + 0.5 * b * b * self.t)) \
                * f.values
        else:
            if s.ndim != 2 or s.shape[1] != 2:
                raise ValueError("row d needs planar support")
            new = s + np.array([b, c])
            vals = np.exp(-1j * (a + b * (new[:, 1] - c))) * f.values
        sup, vv = _merge_counting(new, vals)
        return SectionVector(sup, vv, mode="counting")


class EuclidAction:
    """Helicity-zero sphere action for wavenumber k.

    Counting mode rotates the support points; quadrature mode composes the
    evaluator and re-materializes values on the fixed grid.
    """

    def __init__(self, k, s=0):
        if s != 0:
            raise NotImplementedError(
                "only helicity 0 is realized on scalar sections")
        self.k = float(k)

    def apply(self, g, f):
        A, c = g.data
        kc = self.k * c
        if f.mode == "counting":
            unit = np.abs(np.linalg.norm(f.support, axis=-1) - 1.0)
            if np.max(unit) > 1e-9:
                raise ValueError("support points must be unit vectors")
            new = f.support @ A.T
            vals = np.exp(1j * (new @ kc)) * f.values
            sup, vv = _merge_counting(new, vals)
            return SectionVector(sup, vv, mode="counting")
        base = f.evaluator
        def evaluator(v, base=base, A=A, kc=kc):
            return np.exp(1j * (v @ kc)) * base(v @ A)   # v @ A = A^T v rows
        vals = evaluator(f.support)
        return SectionVector(f.support, vals, mode="quadrature",
                             weights=f.weights, evaluator=evaluator)


def sphere_grid(n_theta=64, n_phi=128):
    """Gauss-Legendre in cos(theta) x uniform phi; weights sum to 1."""
    x, w = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    z = np.repeat(x, n_phi)
    rho = np.sqrt(1.0 - z * z)
    pts = np.column_stack([rho * np.cos(np.tile(phi, n_theta)),
                           rho * np.sin(np.tile(phi, n_theta)), z])
    weights = np.repeat(w, n_phi) / (2.0 * n_phi)
    return pts, weights


def constant_section(n_theta=64, n_phi=128):
    pts, w = sphere_grid(n_theta, n_phi)
    def evaluator(v):
        return np.ones(v.shape[:-1], dtype=complex)
    return SectionVector(pts, np.ones(len(pts), dtype=complex),
                         mode="quadrature", weights=w, evaluator=evaluator)


def heisenberg_action(row, g, f, t=0.0):
    return HeisenbergRow(row, t=t).apply(g, f)


def euclid_action(k, g, f, s=0):
    return EuclidAction(k, s=s).apply(g, f)


def matrix_coefficient(action, f, g):
    """(f, g . f) in f's mode; f must be normalized."""
    if abs(f.norm() - 1.0) > 1e-9:
        raise ValueError("section must be normalized (|f| = %.6g)" % f.norm())
    return inner(f, action.apply(g, f))


def mackey_shoda_a(chi, eta, g, probes, in_h, in_k, tol=None):
    """Character-matching test: chi(h) = eta(g^{-1} h g) over probe elements.

    chi, eta: callables on group elements; in_h, in_k: membership predicates
    for the two subgroups.  Probes must lie in H intersect g K g^{-1}.
    """
    tol = DEFAULT.delta if tol is None else tol
    gi = groups.inverse(g)
    for h in probes:
        conj = groups.compose(groups.compose(gi, h), g)
        if not in_h(h) or not in_k(conj):
            raise ValueError("probe not in the subgroup intersection")
        if abs(chi(h) - eta(conj)) >= tol:
            return False
    return True


def coefficient_table(action, f, gs, closed_form=None):
    """Rows (g coords..., Re m, Im m, |error|) for CSV emission."""
    rows = []
    for g in gs:
        val = matrix_coefficient(action, f, g)
        err = abs(val - closed_form(g)) if closed_form is not None else 0.0
        if g.family == "euclid":
            coords = list(np.asarray(g.data[0]).ravel()) + list(g.data[1])
        else:
            coords = list(np.asarray(g.data).ravel())
        rows.append(coords + [val.real, val.imag, err])
    return rows
