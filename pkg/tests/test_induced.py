import numpy as np
import pytest

from orbitstates import groups, induced, states


def _sorted_pairs(f):
    sup = np.atleast_2d(f.support.reshape(len(f.values), -1))
    order = np.lexsort(sup.T[::-1])
    return sup[order], f.values[order]


def _sections_equal(f, g, tol=1e-12):
    sf, vf = _sorted_pairs(f)
    sg, vg = _sorted_pairs(g)
    return sf.shape == sg.shape and np.max(np.abs(sf - sg)) < 1e-9 \
        and np.max(np.abs(vf - vg)) < tol


def _rand_heis(rng, n=1):
    return [groups.heisenberg(*u) for u in rng.uniform(-2, 2, (n, 3))]


# ---------------------------------------------------------------------------
# counting actions on the line and plane

@pytest.mark.parametrize("row,t", [("a", 0.0), ("b", 0.0), ("c", 0.7),
                                   ("d", 0.0)])
def test_action_preserves_norm(row, t):
    rng = np.random.default_rng(1)
    if row == "d":
        support = rng.uniform(-2, 2, (5, 2))
    else:
        support = rng.uniform(-2, 2, 5)
    vals = rng.standard_normal(5) + 1j * rng.standard_normal(5)
    f = induced.SectionVector(support, vals)
    act = induced.HeisenbergRow(row, t=t)
    for g in _rand_heis(rng, 10):
        assert abs(act.apply(g, f).norm() - f.norm()) < 1e-12


@pytest.mark.parametrize("row,t", [("a", 0.0), ("b", 0.0), ("c", 0.7),
                                   ("d", 0.0)])
def test_action_is_a_homomorphism(row, t):
    rng = np.random.default_rng(2)
    if row == "d":
        support = rng.uniform(-2, 2, (4, 2))
    else:
        support = rng.uniform(-2, 2, 4)
    vals = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    f = induced.SectionVector(support, vals)
    act = induced.HeisenbergRow(row, t=t)
    for _ in range(10):
        g, h = _rand_heis(rng, 2)
        two_step = act.apply(g, act.apply(h, f))
        one_step = act.apply(groups.compose(g, h), f)
        assert _sections_equal(two_step, one_step, tol=1e-10)


def test_delta_cyclic_vectors_reproduce_the_localized_states():
    rng = np.random.default_rng(3)
    gs = _rand_heis(rng, 60) + [groups.heisenberg(0.3, 0.0, -1.2),
                                groups.heisenberg(0.3, 1.1, 0.0)]
    cases = [
        ("a", 0.0, induced.delta_section([1.3]),
         states.make_state("heisenberg_loc_p", k=1.3)),
        ("b", 0.0, induced.delta_section([0.8]),
         states.make_state("heisenberg_loc_q", l=0.8)),
        ("c", 0.4, induced.delta_section([0.9]),
         states.make_state("heisenberg_loc_t", k=0.0, l=0.9, t=0.4)),
        # the time-t row only sees k*t + l, so a sharp-momentum labelling
        # of the same delta must give identical coefficients
        ("c", 0.4, induced.delta_section([0.9]),
         states.make_state("heisenberg_loc_t", k=0.5, l=0.9 - 0.5 * 0.4,
                           t=0.4)),
        ("d", 0.0, induced.delta_section([[0.0, 0.0]]),
         states.make_state("heisenberg_center")),
    ]
    for row, t, f, st in cases:
        act = induced.HeisenbergRow(row, t=t)
        for g in gs:
            got = induced.matrix_coefficient(act, f, g)
            assert abs(got - states.evaluate(st, g)) < 1e-12, (row, g.data)


def test_plane_delta_away_from_origin_still_gives_center():
    act = induced.HeisenbergRow("d")
    f = induced.delta_section([[1.7, -2.4]])
    st = states.make_state("heisenberg_center")
    rng = np.random.default_rng(4)
    for g in _rand_heis(rng, 30) + [groups.heisenberg(0.5, 0, 0)]:
        assert abs(induced.matrix_coefficient(act, f, g)
                   - states.evaluate(st, g)) < 1e-12


def test_merge_collapses_coincident_points():
    f = induced.SectionVector([0.0, 1.0], [1.0, 1.0])
    act = induced.HeisenbergRow("a")
    g = groups.heisenberg(0.0, 1.0, 0.0)     # shift 0 -> 1: overlap at 1
    out = act.apply(g, f)
    k = np.argmin(np.abs(np.atleast_1d(out.support) - 1.0))
    assert abs(np.atleast_1d(out.support)[k] - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# sphere action

def test_sphere_grid_weights_and_exactness():
    pts, w = induced.sphere_grid(64, 128)
    assert abs(np.sum(w) - 1.0) < 1e-14
    z = pts[:, 2]
    assert abs(np.sum(w * z)) < 1e-14
    assert abs(np.sum(w * z ** 2) - 1.0 / 3.0) < 1e-13
    assert abs(np.sum(w * z ** 4) - 1.0 / 5.0) < 1e-13
    assert abs(np.sum(w * pts[:, 0] ** 2) - 1.0 / 3.0) < 1e-13
    assert abs(np.sum(w * pts[:, 0] * pts[:, 1])) < 1e-13


def test_quadrature_coefficient_matches_spherical_state():
    k = 2.0
    act = induced.EuclidAction(k)
    f = induced.constant_section()
    st = states.make_state("euclid_spherical", k=k)
    rng = np.random.default_rng(5)
    for g in groups.random_elements("euclid", rng, 25):
        got = induced.matrix_coefficient(act, f, g)
        assert abs(got - states.evaluate(st, g)) < 1e-8


def test_counting_delta_on_pole_gives_plane_wave_state():
    k = 2.0
    act = induced.EuclidAction(k)
    f = induced.delta_section(np.array([[0.0, 0.0, 1.0]]))
    st = states.make_state("euclid_plane", k=k, s=0)
    rng = np.random.default_rng(6)
    gs = list(groups.random_elements("euclid", rng, 25))
    th = 0.77
    Rz = np.array([[np.cos(th), -np.sin(th), 0], [np.sin(th), np.cos(th), 0],
                   [0, 0, 1.0]])
    gs.append(groups.euclid(Rz, np.array([0.4, -0.2, 1.5])))
    for g in gs:
        got = induced.matrix_coefficient(act, f, g)
        assert abs(got - states.evaluate(st, g)) < 1e-12


def test_counting_mode_requires_unit_support():
    act = induced.EuclidAction(1.0)
    f = induced.delta_section(np.array([[0.0, 0.0, 2.0]]))
    with pytest.raises(ValueError):
        act.apply(groups.identity("euclid"), f)


def test_nonzero_helicity_not_realized():
    with pytest.raises(NotImplementedError):
        induced.EuclidAction(1.0, s=1)


def test_matrix_coefficient_requires_unit_norm():
    act = induced.HeisenbergRow("a")
    f = induced.SectionVector([0.0], [2.0])
    with pytest.raises(ValueError):
        induced.matrix_coefficient(act, f, groups.heisenberg(0, 0, 0))


def test_inner_mode_mismatch():
    f = induced.delta_section([0.0])
    g = induced.constant_section(8, 16)
    with pytest.raises(ValueError):
        induced.inner(f, g)


# ---------------------------------------------------------------------------
# character matching

def test_character_matching_shifts_wavenumber():
    # conjugating the b = 0 subgroup by (0, b, 0) sends (a, 0, c) to
    # (a - b c, 0, c), so chi_k matches eta exactly when eta = chi_{k-b}
    b = 0.7
    g = groups.heisenberg(0.0, b, 0.0)
    probes = [groups.heisenberg(a, 0.0, c)
              for a, c in np.random.default_rng(7).uniform(-2, 2, (12, 2))]
    in_h = lambda h: abs(h.data[1]) < 1e-9
    chi = lambda h: np.exp(1j * (1.3 * h.data[2] - h.data[0]))
    eta_good = lambda h: np.exp(1j * ((1.3 - b) * h.data[2] - h.data[0]))
    assert induced.mackey_shoda_a(chi, eta_good, g, probes, in_h, in_h)
    assert not induced.mackey_shoda_a(chi, chi, g, probes, in_h, in_h)


def test_character_matching_rejects_outside_probes():
    g = groups.heisenberg(0.0, 0.0, 0.0)
    probe = [groups.heisenberg(0.0, 1.0, 0.0)]       # b != 0: outside H
    in_h = lambda h: abs(h.data[1]) < 1e-9
    chi = lambda h: 1.0
    with pytest.raises(ValueError):
        induced.mackey_shoda_a(chi, chi, g, probe, in_h, in_h)


def test_coefficient_table_shapes_and_errors():
    act = induced.HeisenbergRow("a")
    f = induced.delta_section([1.3])
    st = states.make_state("heisenberg_loc_p", k=1.3)
    gs = _rand_heis(np.random.default_rng(8), 12)
    rows = induced.coefficient_table(
        act, f, gs, closed_form=lambda g: states.evaluate(st, g))
    assert len(rows) == 12
    for row in rows:
        assert len(row) == 6                         # a, b, c, Re, Im, err
        assert row[-1] < 1e-12
