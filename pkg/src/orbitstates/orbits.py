"""Moment maps, orbit sampling, dual-pairing projections, and the
sup-inequality check run as a numerical optimization.

The check asks, for commuting tuples (Z_1..Z_n) and coefficients c_j,
whether |sum_j c_j m(exp Z_j)| stays below sup over orbit points x of
|sum_j c_j e^{i<x, Z_j>}|.  The sampled sup UNDERestimates the true sup, so
the test is conservative: a reported failure is a genuine refutation up to
the margin slack, never the other way round.

Commuting tuples are drawn from documented per-family whitelists rather
than searched for generically:

  heisenberg  span{center, cos(theta) beta-gen + sin(theta) gamma-gen}
  bargmann    the abelian ideal (alpha, gamma, eps) and boost lines
              span{center, (1, ghat, ehat)-direction}
  euclid      pure translations; rotation + translation along a common axis
  su2         lines R*v
  torus       everything commutes

These whitelists are a choice of this implementation; the inequality itself
quantifies over all commuting tuples.

Every family reduces the orbit sup to a 1-D or 2-D search:

  heisenberg  tau = p sin(theta) - q cos(theta) in R
  bargmann    p in R (ideal tuples) or u = p*ghat - q - p^2 ehat/2 in R
  euclid      unit sphere (translations) or the strip R x [-k, k]
  su2         axis heights h in [-lambda, lambda]
  torus       a single point

Budget counts seeded sample draws; re-running with a larger budget extends
the same stream, so estimates are monotone in the budget by construction.
An optional target short-circuits the search once the certified lower bound
reaches it: anchors, analytic means, and the fixed grids are evaluated
first, and the budgeted random draws plus ascent only run when those fall
short.  Since every candidate is a true lower bound, stopping early can
only weaken the estimate, never inflate it.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import groups, states
from .tolerances import DEFAULT

GRID_1D = 4096
GRID_2D = 96
ASCENT_STEPS = 50
ASCENT_RESTARTS = 8


@dataclass
class SupEstimate:
    value: float
    samples: int
    ascent_steps: int

    def __float__(self):
        return float(self.value)


class OrbitSpec:
    __slots__ = ("family", "params")

    def __init__(self, family, params):
        self.family = family
        self.params = dict(params)

    def sample(self, rng, count, box=None):
        """Seeded dual points on the orbit (rows of coordinate vectors)."""
        box = DEFAULT.box_radius if box is None else box
        f = self.family
        if f == "heisenberg":
            pq = rng.uniform(-box, box, size=(count, 2))
            return np.column_stack([np.ones(count), pq])
        if f == "bargmann":
            pq = rng.uniform(-box, box, size=(count, 2))
            return np.column_stack([np.ones(count), pq,
                                    0.5 * pq[:, 0] ** 2])
        if f == "euclid":
            k, s = self.params["k"], self.params["s"]
            u = rng.standard_normal((count, 3))
            u /= np.linalg.norm(u, axis=1, keepdims=True)
            r = rng.uniform(-box, box, size=(count, 3))
            r -= np.sum(r * u, axis=1, keepdims=True) * u
            L = k * np.cross(r, u) + s * u
            return np.hstack([L, k * u])
        if f == "su2":
            lam = self.params["lam"]
            x = rng.standard_normal((count, 3))
            x /= np.linalg.norm(x, axis=1, keepdims=True)
            return lam * x
        if f == "torus":
            y = np.asarray(self.params["y"], dtype=float)
            return np.tile(y, (count, 1))
        raise groups.FamilyError(f)


def heisenberg_orbit(k=1.0, l=0.0):
    return OrbitSpec("heisenberg", {"k": k, "l": l})


def bargmann_orbit():
    return OrbitSpec("bargmann", {})


def euclid_orbit(k, s=0.0):
    return OrbitSpec("euclid", {"k": float(k), "s": float(s)})


def su2_orbit(lam):
    return OrbitSpec("su2", {"lam": float(lam)})


def torus_orbit(y):
    return OrbitSpec("torus", {"y": list(np.atleast_1d(y))})


def moment(family, point, params=None):
    """Dual vector of a phase-space point."""
    params = params or {}
    if family == "heisenberg":
        p, q = point
        return groups.covector(family, [1.0, p, q])
    if family == "bargmann":
        p, q = point
        return groups.covector(family, [1.0, p, q, 0.5 * p * p])
    if family == "euclid":
        r, u = np.asarray(point[0], float), np.asarray(point[1], float)
        nu = np.linalg.norm(u)
        if abs(nu - 1.0) > 1e-9:
            raise ValueError("direction must be a unit vector")
        r = r - (r @ u) * u
        k, s = params.get("k", 1.0), params.get("s", 0.0)
        return groups.covector(family, np.concatenate(
            [k * np.cross(r, u) + s * u, k * u]))
    if family == "su2":
        x = np.asarray(point, dtype=float)
        lam = params.get("lam", np.linalg.norm(x))
        n = np.linalg.norm(x)
        if n == 0:
            raise ValueError("zero point has no direction")
        return groups.covector(family, lam * x / n)
    raise groups.FamilyError(family)


def project(w, Zs):
    """Pairing values (<w, Z_1>, ...); the tuple must commute."""
    if not groups.commuting(Zs):
        raise ValueError("tuple does not commute")
    return tuple(groups.pairing(w, Z) for Z in Zs)


# ---------------------------------------------------------------------------
# sup search

def _trig_value(taus, freqs, cs, offs):
    ph = np.multiply.outer(taus, freqs) + offs
    return np.abs(np.exp(1j * ph) @ cs)


def _ascend_1d(x0, freqs, cs, offs, lo=None, hi=None):
    """Gradient ascent on |sum c_j e^{i(freq_j x + off_j)}|^2."""
    x, steps = float(x0), 0
    def val(t):
        return float(np.abs(np.exp(1j * (freqs * t + offs)) @ cs))
    fx = val(x)
    eta = 0.5 / max(1.0, np.max(np.abs(freqs)) ** 2)
    for _ in range(ASCENT_STEPS):
        ph = np.exp(1j * (freqs * x + offs))
        S = ph @ cs
        grad = 2.0 * np.real(np.conj(S) * ((1j * freqs * cs) @ ph))
        x_new = x + eta * grad
        if lo is not None:
            x_new = min(max(x_new, lo), hi)
        f_new = val(x_new)
        steps += 1
        if f_new >= fx:
            x, fx = x_new, f_new
        else:
            eta *= 0.5
            if eta < 1e-18:
                break
    return fx, steps


def _freq_class_bound(freqs, cs, offs):
    """max over exact-frequency classes of |sum_class c e^{i off}|.

    Each class sum is a long-run mean of the signal against e^{i f tau}, so
    it lower-bounds the sup over tau in R.  Classes use exact float
    equality: deliberately drawn repeats (shared frequency 0, say) group
    together, while continuously drawn frequencies stay singletons.
    """
    best = 0.0
    for f in np.unique(freqs):
        sel = freqs == f
        best = max(best, float(abs(np.sum(cs[sel] * np.exp(1j * offs[sel])))))
    return best


def _sup_1d(freqs, cs, offs, budget, seed, lo, hi, clamp, anchors=(),
            target=None):
    freqs = np.asarray(freqs, float)
    offs = np.asarray(offs, float)
    cs = np.asarray(cs, complex)
    pts = [np.linspace(lo, hi, GRID_1D), np.asarray(anchors, float)]
    taus = np.concatenate([p for p in pts if p.size])
    vals = _trig_value(taus, freqs, cs, offs)
    best = float(np.max(vals))
    if not clamp:
        best = max(best, _freq_class_bound(freqs, cs, offs))
    if target is not None and best >= target:
        return best, len(taus), 0
    rng = np.random.default_rng(seed)
    if budget > 0:
        draws = rng.uniform(lo, hi, size=budget)
        taus = np.concatenate([taus, draws])
        vals = np.concatenate([vals, _trig_value(draws, freqs, cs, offs)])
    order = np.argsort(vals)[::-1][:ASCENT_RESTARTS]
    best = max(best, float(vals[order[0]]))
    steps = 0
    for idx in order:
        f, st = _ascend_1d(taus[idx], freqs, cs, offs,
                           lo if clamp else None, hi if clamp else None)
        steps += st
        best = max(best, f)
    return best, len(taus), steps


def _fibonacci_sphere(n):
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    phi = np.pi * (1.0 + math.sqrt(5.0)) * i
    rho = np.sqrt(1.0 - z * z)
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def _sup_sphere(ws, cs, budget, seed, anchors=(), target=None):
    """sup over the unit sphere of |sum c_j e^{i u.w_j}|."""
    from .states import sinc

    ws = np.asarray(ws, float)
    cs = np.asarray(cs, complex)
    pts = [_fibonacci_sphere(GRID_1D)]
    for w in ws:
        nw = np.linalg.norm(w)
        if nw > 1e-12:
            pts.append(np.array([w / nw, -w / nw]))
    if len(anchors):
        pts.append(np.asarray(anchors, float))
    # circles about the coordinate axes: their points are candidates and so
    # are their means (a circle mean lower-bounds the sup over the circle)
    phi = 2.0 * np.pi * np.arange(512) / 512.0
    circ = {0: np.column_stack([np.zeros(512), np.cos(phi), np.sin(phi)]),
            1: np.column_stack([np.cos(phi), np.zeros(512), np.sin(phi)]),
            2: np.column_stack([np.cos(phi), np.sin(phi), np.zeros(512)])}
    pts.extend(circ.values())
    U = np.vstack(pts)
    vals = np.abs(np.exp(1j * (U @ ws.T)) @ cs)
    best = float(np.max(vals))
    # sphere-uniform mean of the signal = sum c_j sinc(|w_j|)
    best = max(best, float(abs(np.sum(cs * sinc(np.linalg.norm(ws, axis=1))))))
    for C in circ.values():
        best = max(best, float(abs(np.mean(np.exp(1j * (C @ ws.T)) @ cs))))
    if target is not None and best >= target:
        return best, len(U), 0
    rng = np.random.default_rng(seed)
    if budget > 0:
        u = rng.standard_normal((budget, 3))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        U = np.vstack([U, u])
        vals = np.concatenate([vals, np.abs(np.exp(1j * (u @ ws.T)) @ cs)])
    order = np.argsort(vals)[::-1][:ASCENT_RESTARTS]
    best = max(best, float(vals[order[0]]))
    steps = 0

    def value(u):
        return float(np.abs(np.exp(1j * (u @ ws.T)) @ cs))

    for idx in order:
        u = U[idx].copy()
        fu = value(u)
        eta = 0.5 / max(1.0, np.max(np.sum(ws * ws, axis=1)))
        for _ in range(ASCENT_STEPS):
            ph = np.exp(1j * (u @ ws.T))
            S = ph @ cs
            grad = 2.0 * np.real(np.conj(S) * ((1j * cs * ph) @ ws))
            grad -= (grad @ u) * u
            un = u + eta * grad
            un /= np.linalg.norm(un)
            fn = value(un)
            steps += 1
            if fn >= fu:
                u, fu = un, fn
            else:
                eta *= 0.5
                if eta < 1e-18:
                    break
        best = max(best, fu)
    return best, len(U), steps


def _sup_strip(sfreq, pfreq, cs, k, budget, seed, box, anchors=(),
               target=None):
    """sup over (l, p) in R x [-k, k] of |sum c_j e^{i(s_j l + t_j p)}|."""
    sfreq = np.asarray(sfreq, float)
    pfreq = np.asarray(pfreq, float)
    cs = np.asarray(cs, complex)
    ls = np.linspace(-box, box, GRID_2D)
    ps = np.linspace(-k, k, GRID_2D)
    L, P = np.meshgrid(ls, ps, indexing="ij")
    pts = [np.column_stack([L.ravel(), P.ravel()])]
    p_fine = np.linspace(-k, k, GRID_1D)
    # the l = 0 slice carries every measure with vanishing angular momentum
    # (spherical and cylindrical means land there), so sample it densely
    pts.append(np.column_stack([np.zeros(GRID_1D), p_fine]))
    if len(anchors):
        pts.append(np.asarray(anchors, float))
    X = np.vstack(pts)
    ph = np.outer(X[:, 0], sfreq) + np.outer(X[:, 1], pfreq)
    vals = np.abs(np.exp(1j * ph) @ cs)
    best = float(np.max(vals))
    # per-s-frequency class bound: sup_{l,p} >= sup_p |mean_l of class|
    for s in np.unique(sfreq):
        sel = sfreq == s
        cls = np.abs(np.exp(1j * np.outer(p_fine, pfreq[sel])) @ cs[sel])
        best = max(best, float(np.max(cls)))
    if target is not None and best >= target:
        return best, len(X), 0
    rng = np.random.default_rng(seed)
    if budget > 0:
        draw = np.column_stack([rng.uniform(-box, box, budget),
                                rng.uniform(-k, k, budget)])
        X = np.vstack([X, draw])
        phd = np.outer(draw[:, 0], sfreq) + np.outer(draw[:, 1], pfreq)
        vals = np.concatenate([vals, np.abs(np.exp(1j * phd) @ cs)])
    order = np.argsort(vals)[::-1][:ASCENT_RESTARTS]
    best = max(best, float(vals[order[0]]))
    steps = 0

    def value(x):
        return float(np.abs(np.exp(1j * (sfreq * x[0] + pfreq * x[1])) @ cs))

    scale = max(1.0, np.max(sfreq ** 2 + pfreq ** 2))
    for idx in order:
        x = X[idx].copy()
        fx = value(x)
        eta = 0.5 / scale
        for _ in range(ASCENT_STEPS):
            e = np.exp(1j * (sfreq * x[0] + pfreq * x[1]))
            S = e @ cs
            g = np.array([2.0 * np.real(np.conj(S) * ((1j * sfreq * cs) @ e)),
                          2.0 * np.real(np.conj(S) * ((1j * pfreq * cs) @ e))])
            xn = x + eta * g
            xn[1] = min(max(xn[1], -k), k)
            fn = value(xn)
            steps += 1
            if fn >= fx:
                x, fx = xn, fn
            else:
                eta *= 0.5
                if eta < 1e-18:
                    break
        best = max(best, fx)
    return best, len(X), steps


def _anchor_values(anchors, Zs, cs):
    if not anchors:
        return 0.0
    best = 0.0
    for w in anchors:
        tot = sum(c * np.exp(1j * groups.pairing(w, Z))
                  for c, Z in zip(cs, Zs))
        best = max(best, abs(tot))
    return best


def orbit_sup(spec, Zs, cs, budget=10000, seed=0, box=None, anchors=None,
              target=None):
    """Lower estimate of sup over the orbit of |sum_j c_j e^{i<x, Z_j>}|.

    anchors: optional dual points always evaluated (localization points of
    a state under test); they keep the estimate sharp where the attaining
    point is known a priori.

    target: optional early-exit threshold.  Once the running lower bound
    reaches it the remaining search (budgeted draws, ascent) is skipped;
    estimates stay valid lower bounds either way.
    """
    if not groups.commuting(Zs):
        raise ValueError("tuple does not commute")
    box = DEFAULT.box_radius if box is None else box
    cs = np.asarray(cs, dtype=complex)
    anchors = anchors or []
    anchor_best = _anchor_values(anchors, Zs, cs)
    if target is not None and anchor_best >= target:
        return SupEstimate(anchor_best, len(anchors), 0)

    if len(Zs) == 1:
        return SupEstimate(max(float(abs(cs[0])), anchor_best), 0, 0)

    fam = spec.family
    C = np.stack([Z.coords for Z in Zs])

    if fam == "heisenberg":
        al, be, ga = C[:, 0], C[:, 1], C[:, 2]
        # commuting <=> the (beta, gamma) rows are parallel
        lead = np.argmax(be ** 2 + ga ** 2)
        nrm = math.hypot(be[lead], ga[lead])
        if nrm < 1e-14:
            # pure center: <x, Z_j> = -alpha_j everywhere
            v = abs(np.exp(-1j * al) @ cs)
            return SupEstimate(max(float(v), anchor_best), 1, 0)
        d = np.array([be[lead], ga[lead]]) / nrm
        mu = be * d[0] + ga * d[1]
        # tau = p d[1] - q d[0]; over the (p, q) box it reaches
        # +- box (|d0| + |d1|)
        r = box * (abs(d[0]) + abs(d[1]))
        best, ns, st = _sup_1d(mu, cs, -al, budget, seed, -r, r, False,
                               target=target)
        return SupEstimate(max(best, anchor_best), ns, st)

    if fam == "bargmann":
        al, be, ga, ep = C[:, 0], C[:, 1], C[:, 2], C[:, 3]
        if np.max(np.abs(be)) < 1e-14:
            # ideal tuple: phases p ga_j - p^2 ep_j / 2 - al_j, 1-D in p
            taus_f = lambda p: np.outer(p, ga) - 0.5 * np.outer(p ** 2, ep) - al
            p_all = np.linspace(-box, box, GRID_1D)
            vals = np.abs(np.exp(1j * taus_f(p_all)) @ cs)
            best = float(np.max(vals))
            # stationary-phase mean: terms sharing (gamma, eps) exactly
            # survive the long-run p-average, the rest decay
            for row in np.unique(np.column_stack([ga, ep]), axis=0):
                sel = (ga == row[0]) & (ep == row[1])
                best = max(best, float(abs(np.exp(-1j * al[sel]) @ cs[sel])))
            if target is not None and max(best, anchor_best) >= target:
                return SupEstimate(max(best, anchor_best), len(p_all), 0)
            rng = np.random.default_rng(seed)
            if budget > 0:
                draws = rng.uniform(-box, box, budget)
                p_all = np.concatenate([p_all, draws])
                vals = np.concatenate(
                    [vals, np.abs(np.exp(1j * taus_f(draws)) @ cs)])
            order = np.argsort(vals)[::-1][:ASCENT_RESTARTS]
            best = max(best, float(vals[order[0]]))
            steps = 0
            for idx in order:
                p = float(p_all[idx])
                fp = float(vals[idx])
                eta = 0.5
                for _ in range(ASCENT_STEPS):
                    e = np.exp(1j * (p * ga - 0.5 * p * p * ep - al))
                    S = e @ cs
                    g = 2.0 * np.real(np.conj(S) * ((1j * (ga - p * ep) * cs) @ e))
                    pn = p + eta * g
                    fn = float(np.abs(np.exp(1j * (pn * ga - 0.5 * pn * pn * ep - al)) @ cs))
                    steps += 1
                    if fn >= fp:
                        p, fp = pn, fn
                    else:
                        eta *= 0.5
                        if eta < 1e-18:
                            break
                best = max(best, fp)
            return SupEstimate(max(best, anchor_best), len(p_all), steps)
        # boost line: directions (beta_j, gamma_j, eps_j) = mu_j (1, gh, eh)
        lead = np.argmax(np.abs(be))
        gh, eh = ga[lead] / be[lead], ep[lead] / be[lead]
        mu = be
        # u = p gh - q - p^2 eh / 2 sweeps R; phases mu_j u - alpha_j
        best, ns, st = _sup_1d(mu, cs, -al, budget, seed, -box, box, False,
                               target=target)
        return SupEstimate(max(best, anchor_best), ns, st)

    if fam == "euclid":
        k = spec.params["k"]
        ax, rate = C[:, :3], C[:, 3:]
        if np.max(np.linalg.norm(ax, axis=1)) < 1e-14:
            anchor_pts = [w.coords[3:] / k for w in anchors] if anchors else ()
            best, ns, st = _sup_sphere(k * rate, cs, budget, seed,
                                       anchors=anchor_pts, target=target)
            return SupEstimate(max(best, anchor_best), ns, st)
        lead = np.argmax(np.linalg.norm(ax, axis=1))
        n = ax[lead] / np.linalg.norm(ax[lead])
        sfreq = ax @ n
        pfreq = rate @ n
        strip_anchor = [(groups.pairing(w, groups.algebra("euclid", np.concatenate([n, np.zeros(3)]))),
                         groups.pairing(w, groups.algebra("euclid", np.concatenate([np.zeros(3), n]))))
                        for w in anchors]
        best, ns, st = _sup_strip(sfreq, pfreq, cs, k, budget, seed, box,
                                  anchors=strip_anchor, target=target)
        return SupEstimate(max(best, anchor_best), ns, st)

    if fam == "su2":
        lam = spec.params["lam"]
        lead = np.argmax(np.linalg.norm(C, axis=1))
        nl = np.linalg.norm(C[lead])
        if nl < 1e-14:
            return SupEstimate(max(float(abs(np.sum(cs))), anchor_best), 1, 0)
        v = C[lead] / nl
        om = C @ v
        extra = np.arange(-math.floor(2 * lam), math.floor(2 * lam) + 1) * 0.5
        extra = extra[np.abs(extra) <= lam + 1e-12]
        best, ns, st = _sup_1d(om, cs, np.zeros(len(om)), budget, seed,
                               -lam, lam, True, anchors=extra, target=target)
        return SupEstimate(max(best, anchor_best), ns, st)

    if fam == "torus":
        y = np.asarray(spec.params["y"], float)
        tot = sum(c * np.exp(1j * float(y @ Z.coords)) for c, Z in zip(cs, Zs))
        return SupEstimate(max(abs(tot), anchor_best), 1, 0)

    raise groups.FamilyError(fam)

# ---------------------------------------------------------------------------
# the sup-inequality check

def _zero_alg(family):
    dims = {"heisenberg": 3, "bargmann": 4, "euclid": 6, "su2": 3}
    if family == "torus":
        return groups.algebra("torus", [0.0])
    return groups.algebra(family, np.zeros(dims[family]))


def _canonical_probes(family):
    """Deterministic first trials.  The zero/half-turn-center pair refutes
    the constant state on any family whose orbit sits off the origin."""
    probes = []
    if family in ("heisenberg", "bargmann"):
        Z2 = _zero_alg(family).coords.copy()
        Z2[0] = np.pi
        probes.append(([_zero_alg(family),
                        groups.algebra(family, Z2)],
                       np.array([1.0, 1.0], dtype=complex)))
    if family == "heisenberg":
        probes.append(([groups.algebra(family, [0.0, 0.0, 1.0]),
                        groups.algebra(family, [0.0, 0.0, -1.0])],
                       np.array([1.0, 1.0], dtype=complex)))
    if family == "euclid":
        probes.append(([groups.algebra(family, [0, 0, 0, 0, 0, 1.0]),
                        groups.algebra(family, [0, 0, 0, 0, 0, -1.0])],
                       np.array([1.0, -1.0], dtype=complex)))
    if family == "su2":
        probes.append(([groups.algebra(family, [0.0, 0.0, np.pi]),
                        groups.algebra(family, [0.0, 0.0, -np.pi])],
                       np.array([1.0, 1.0], dtype=complex)))
    if family == "torus":
        probes.append(([groups.algebra(family, [np.pi]),
                        groups.algebra(family, [-np.pi])],
                       np.array([1.0, 1.0], dtype=complex)))
    return probes


def _draw_tuple(family, rng, n_max):
    """One commuting tuple from the family whitelist."""
    n = int(rng.integers(1, n_max + 1))
    if family == "torus":
        return [groups.algebra(family, rng.uniform(-3, 3, 1)) for _ in range(n)]
    if family == "su2":
        v = rng.standard_normal(3)
        v /= np.linalg.norm(v)
        ts = rng.uniform(-4, 4, n)
        return [groups.algebra(family, t * v) for t in ts]
    if family == "heisenberg":
        theta = [0.0, np.pi / 2, rng.uniform(0, np.pi)][int(rng.integers(0, 3))]
        d = np.array([np.cos(theta), np.sin(theta)])
        out = []
        for _ in range(n):
            al = rng.uniform(-np.pi, np.pi)
            mu = 0.0 if rng.uniform() < 0.3 else rng.uniform(-3, 3)
            out.append(groups.algebra(family, [al, mu * d[0], mu * d[1]]))
        return out
    if family == "bargmann":
        if rng.uniform() < 0.5:
            # abelian-ideal tuple (no beta component)
            out = []
            for _ in range(n):
                al = rng.uniform(-np.pi, np.pi)
                ga = 0.0 if rng.uniform() < 0.3 else rng.uniform(-3, 3)
                ep = 0.0 if rng.uniform() < 0.5 else rng.uniform(-2, 2)
                out.append(groups.algebra(family, [al, 0.0, ga, ep]))
            return out
        gh, eh = rng.uniform(-2, 2), rng.uniform(-2, 2)
        out = []
        for _ in range(n):
            al = rng.uniform(-np.pi, np.pi)
            mu = 0.0 if rng.uniform() < 0.3 else rng.uniform(-3, 3)
            out.append(groups.algebra(family, [al, mu, mu * gh, mu * eh]))
        return out
    if family == "euclid":
        if rng.uniform() < 0.5:
            return [groups.algebra(
                family, np.concatenate([np.zeros(3), rng.uniform(-2, 2, 3)]))
                for _ in range(n)]
        axis = rng.standard_normal(3)
        axis /= np.linalg.norm(axis)
        out = []
        for _ in range(n):
            s = 0.0 if rng.uniform() < 0.4 else rng.uniform(-np.pi, np.pi)
            t = rng.uniform(-3, 3)
            out.append(groups.algebra(
                family, np.concatenate([s * axis, t * axis])))
        return out
    raise groups.FamilyError(family)


def _state_anchors(state):
    loc = state.localization or {}
    if "x" in loc:
        return [groups.covector(state.family, loc["x"])]
    if "w" in loc:
        return [groups.covector(state.family, loc["w"])]
    return []


def _quantum_trial(state, spec, t, seed, n_max, budget, probes, anchors):
    if t < len(probes):
        Zs, cs = probes[t]
    else:
        rng = np.random.default_rng(seed ^ t)
        Zs = _draw_tuple(spec.family, rng, n_max)
        r = rng.uniform(0, 1, len(Zs))
        ph = rng.uniform(0, 2 * np.pi, len(Zs))
        cs = r * np.exp(1j * ph)
    lhs = abs(sum(c * states.evaluate(state, groups.exp(Z))
                  for c, Z in zip(cs, Zs)))
    # the sup only needs to certify lhs <= rhs: stop searching at lhs
    est = orbit_sup(spec, Zs, cs, budget=budget, seed=seed ^ t,
                    anchors=anchors, target=lhs)
    return Zs, cs, lhs, est.value


def quantum_check(state, spec, trials=1000, n_max=3, budget=10000, seed=0,
                  eps=None, threads=1):
    """Test |sum c_j m(exp Z_j)| <= sup over the orbit, over random
    whitelisted commuting tuples.  Reports the worst margin (sup estimate
    minus left side) and concrete witnesses for any failures.  Trials are
    independent (per-trial seed = seed XOR trial index), so the report is
    identical for any thread count."""
    eps = DEFAULT.margin if eps is None else eps
    probes = _canonical_probes(spec.family)
    anchors = _state_anchors(state)
    margins = []
    failures = []

    def run(t):
        return _quantum_trial(state, spec, t, seed, n_max, budget, probes,
                              anchors)

    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run, range(trials)))
    else:
        outcomes = [run(t) for t in range(trials)]

    for t, (Zs, cs, lhs, rhs) in enumerate(outcomes):
        margin = rhs - lhs
        margins.append(margin)
        if margin < -eps:
            failures.append({
                "trial": t,
                "Zs": [list(map(float, Z.coords)) for Z in Zs],
                "cs": [[float(c.real), float(c.imag)] for c in cs],
                "lhs": float(lhs),
                "rhs": float(rhs),
                "margin": float(margin),
            })
    return {
        "state": state.kind,
        "family": spec.family,
        "trials": trials,
        "budget": budget,
        "seed": seed,
        "worst_margin": float(min(margins)) if margins else 0.0,
        "margins": [float(m) for m in margins],
        "failures": failures,
        "pass": not failures,
    }


def kostant_projection_check(lam, n_samples=100000, seed=0, axis=None):
    """Hausdorff distance between axis-projected sphere samples and the
    interval [-lam, lam]."""
    rng = np.random.default_rng(seed)
    axis = np.array([0.0, 0.0, 1.0]) if axis is None else \
        np.asarray(axis, float) / np.linalg.norm(axis)
    x = rng.standard_normal((n_samples, 3))
    x /= np.linalg.norm(x, axis=1, keepdims=True)
    h = np.sort(lam * (x @ axis))
    gaps = np.diff(h, prepend=-lam, append=lam)
    return float(max(np.max(gaps) / 2.0, h[0] + lam, lam - h[-1], 0.0))
