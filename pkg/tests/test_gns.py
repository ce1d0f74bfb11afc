import numpy as np
import pytest

from orbitstates import gns, groups, states

CLOSED = [
    ("heisenberg_loc_p", dict(k=1.3)),
    ("heisenberg_loc_q", dict(l=0.8)),
    ("euclid_plane", dict(k=2.0, s=1)),
    ("su2_highest_weight", dict(j=1.5)),
]


def _space(kind, params, n=16, seed=0):
    st = states.make_state(kind, **params)
    samples, probes = gns.closed_sample_set(st, n=n, seed=seed)
    return st, gns.build(st, samples), probes


# ---------------------------------------------------------------------------
# construction on closed sample sets

@pytest.mark.parametrize("kind,params", CLOSED)
def test_closed_sets_have_identity_first_and_full_rank(kind, params):
    st, space, probes = _space(kind, params)
    assert space.rank >= 2
    # delta-type closed sets diagonalize exactly (Gram = I);
    # the quaternion set for the spin state quotients to the 2j+1 <= irrep
    if kind != "su2_highest_weight":
        assert np.max(np.abs(space.gram.entries - np.eye(space.gram.n))) \
            < 1e-12
        assert space.rank == space.gram.n


def test_su2_half_spin_closed_set_carries_the_two_dim_irrep():
    st, space, probes = _space("su2_highest_weight", dict(j=0.5))
    assert space.gram.n == 8
    assert space.rank == 2


@pytest.mark.parametrize("kind,params", CLOSED)
def test_probe_actions_are_isometric(kind, params):
    st, space, probes = _space(kind, params)
    for g in probes:
        R, residual = gns.rep_matrix(space, g)
        assert residual < 1e-12, kind
        assert np.max(np.abs(R.conj().T @ R - np.eye(space.rank))) < 1e-9


@pytest.mark.parametrize("kind,params", CLOSED)
def test_probe_homomorphism(kind, params):
    st, space, probes = _space(kind, params)
    rng = np.random.default_rng(2)
    idx = rng.integers(0, len(probes), size=(10, 2))
    for i, jj in idx:
        g, h = probes[i], probes[jj]
        Rg, _ = gns.rep_matrix(space, g)
        Rh, _ = gns.rep_matrix(space, h)
        Rgh, res = gns.rep_matrix(space, groups.compose(g, h))
        assert res < 1e-12
        assert np.max(np.abs(Rgh - Rg @ Rh)) < 1e-9, kind


@pytest.mark.parametrize("kind,params", CLOSED)
def test_coefficient_recovery(kind, params):
    """<m_e, pi(g) m_e> equals the state value, on probes and at random g."""
    st, space, probes = _space(kind, params)
    rng = np.random.default_rng(3)
    gs = list(probes) + list(groups.random_elements(st.family, rng, 20))
    for g in gs:
        got = gns.coefficient(space, g)
        assert abs(got - states.evaluate(st, g)) < 1e-9, kind


@pytest.mark.parametrize("kind,params", CLOSED)
def test_reproducing_identity(kind, params):
    st, space, probes = _space(kind, params)
    rng = np.random.default_rng(4)
    cs = [rng.standard_normal(space.gram.n)
          + 1j * rng.standard_normal(space.gram.n) for _ in range(6)]
    assert gns.reproducing_check(space, cs) < 1e-10


# ---------------------------------------------------------------------------
# spectral structure of the finite representations

def test_loc_p_translations_act_as_characters_on_cyclic_vector():
    st, space, probes = _space("heisenberg_loc_p", dict(k=1.3))
    hs = [groups.heisenberg(a, 0.0, c)
          for a, c in np.random.default_rng(5).uniform(-3, 3, (10, 2))]
    chi = [np.exp(1j * (1.3 * h.data[2] - h.data[0])) for h in hs]
    assert gns.eigenvector_check(space, hs, chi) < 1e-9


def test_loc_p_probe_commutant_is_diagonal_algebra():
    # probes act diagonally on the b-indexed basis, so their commutant is
    # everything diagonal: dimension n
    st, space, probes = _space("heisenberg_loc_p", dict(k=1.3), n=8)
    assert gns.commutant_dim(space, probes) == 8


def test_su2_half_spin_commutant_is_scalars():
    st, space, probes = _space("su2_highest_weight", dict(j=0.5))
    assert gns.commutant_dim(space, probes) == 1


def test_commutant_rejects_lossy_generators():
    st, space, probes = _space("heisenberg_loc_p", dict(k=1.3))
    # a b-translation off the sampled lattice escapes the span entirely
    bad = groups.heisenberg(0.0, 10.5, 0.0)
    with pytest.raises(gns.ResidualError):
        gns.commutant_dim(space, [bad])


# ---------------------------------------------------------------------------
# guard rails

def test_build_requires_identity_first():
    st = states.make_state("heisenberg_loc_p", k=1.0)
    with pytest.raises(ValueError):
        gns.build(st, [groups.heisenberg(0.0, 1.0, 0.0),
                       groups.heisenberg(0.0, 0.0, 0.0)])


def test_build_rejects_non_state():
    bad = states.make_state(
        "custom", family="heisenberg",
        evaluator=lambda g: 1.0 if abs(g.data[1]) < 1e-9 else -1.0)
    samples = [groups.heisenberg(0, 0, 0), groups.heisenberg(0, 1, 0),
               groups.heisenberg(0, 2, 0)]
    with pytest.raises(gns.NotAStateError):
        gns.build(bad, samples)


def test_closed_sample_set_unsupported_kind():
    st = states.make_state("euclid_spherical", k=1.0)
    with pytest.raises(ValueError):
        gns.closed_sample_set(st)
