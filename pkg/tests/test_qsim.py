from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgprop import instances as inst
from hgprop.groups import (all_subgroups, irrep_table, normal_subgroups, orthogonal,
                           parse_group_spec, subgroup_close, trivial_subgroup, whole_group)
from hgprop.qsim import (FunctionOracle, PairOracle, SamplingDistribution, coset_distribution,
                         fourier_sampling_distribution, fourier_sampling_distribution_general,
                         fourier_sampling_distribution_pair, fourier_samples, function_distance,
                         in_perp, indicator, pair_defect, perp_coset_state, qft_coset_state,
                         qft_matrix, sample, state_defect, state_distance_sq)

import oracles

A, B, C = 0, 1, 2


def F(G, table):
    return FunctionOracle(G, table)


# -- oracle accounting -------------------------------------------------------


def test_query_accounting():
    G = parse_group_spec("Z4")
    f = F(G, [3, 1, 3, 2])
    assert f.query(2) == 3 and f((1,)) == 1
    f.query_many([0, 1, 2])
    assert f.query_count == 5
    f.superposition_query()
    assert f.query_count == 6 and f.simulation_reads == 4
    f.read_table()
    assert f.query_count == 6 and f.simulation_reads == 8
    assert f.fresh().query_count == 0


def test_oracle_copies_table():
    G = parse_group_spec("Z4")
    raw = np.array([0, 1, 2, 3])
    f = F(G, raw)
    raw[0] = 9
    assert f.table[0] == 0
    with pytest.raises(ValueError):
        f.table[1] = 5
    with pytest.raises(ValueError):
        F(G, [0, 1, 2])


def test_pair_accounting():
    G = parse_group_spec("Z2")
    p = PairOracle.from_tables(G, [0, 1], [1, 0])
    assert p.query(0, 1) == 1
    p.superposition_query()
    assert p.query_count == 2 and p.simulation_reads == 4
    d = fourier_sampling_distribution_pair(G, p, charge=False)
    assert p.query_count == 2
    fourier_samples(G, p, np.random.default_rng(0), 7)
    assert p.query_count == 9
    assert d.kind == "pair"


# -- distributions: hand-computed examples -------------------------------------


def test_z2_examples():
    G = parse_group_spec("Z2")
    d = fourier_sampling_distribution(G, F(G, [A, A]))
    assert d[(0,)] == pytest.approx(1) and d[(1,)] == pytest.approx(0, abs=1e-15)
    d = fourier_sampling_distribution(G, F(G, [A, B]))
    assert np.allclose(d.probabilities, [0.5, 0.5], atol=1e-15)


def test_z4_periodic_support():
    G = parse_group_spec("Z4")
    d = fourier_sampling_distribution(G, F(G, [A, B, A, B]))
    assert d.support() == [(0,), (2,)]


def test_d4_examples():
    G = parse_group_spec("D4")
    d = fourier_sampling_distribution_general(G, F(G, [A] * 8))
    assert d.support() == [irrep_table(G)[0].label]
    d = fourier_sampling_distribution_general(G, inst.injective_function(G))
    dims = {rho.label: rho.dim for rho in irrep_table(G)}
    assert sorted(d.probabilities) == pytest.approx([1 / 8] * 4 + [1 / 2], abs=1e-12)
    for o, p in zip(d.outcomes, d.probabilities):
        assert p == pytest.approx(dims[o] ** 2 / 8, abs=1e-12)


@pytest.mark.parametrize("text", ["D4", "S3", "Q8", "D5"])
def test_injective_gives_plancherel(text):
    G = parse_group_spec(text)
    d = fourier_sampling_distribution_general(G, inst.injective_function(G, 3))
    for rho in irrep_table(G):
        assert d[rho.label] == pytest.approx(rho.dim ** 2 / G.order, abs=1e-12)


def test_pair_examples():
    G = parse_group_spec("Z2")
    f = F(G, [A, B])
    d = fourier_sampling_distribution_pair(G, PairOracle(f, f.fresh()))
    assert d.mass(lambda o: o[1] == 1) == pytest.approx(0, abs=1e-15)

    d = fourier_sampling_distribution_pair(G, PairOracle.from_tables(G, [A, B], [B, A]))
    assert d[((0,), 1)] == pytest.approx(0, abs=1e-15)
    assert d[((1,), 1)] == pytest.approx(0.5)

    d = fourier_sampling_distribution_pair(G, PairOracle.from_tables(G, [A, A], [B, B]))
    assert d[((0,), 1)] == pytest.approx(0.5)
    assert d.outcomes == [((0,), 0), ((0,), 1), ((1,), 0), ((1,), 1)]


# -- distributions against the statevector oracle ----------------------------------


@pytest.mark.parametrize("text", ["Z1", "Z2", "Z4", "Z6", "Z2xZ2", "Z3xZ4", "Z2xZ2xZ2"])
@pytest.mark.parametrize("method", ["fft", "naive"])
def test_abelian_distribution_matches_statevector(text, method):
    G = parse_group_spec(text)
    rng = np.random.default_rng(11)
    for s in (1, 2, 3, G.order):
        table = rng.integers(0, s, size=G.order)
        d = fourier_sampling_distribution(G, F(G, table), method=method)
        ref = oracles.statevector_distribution(G, table.tolist())
        assert np.max(np.abs(d.probabilities - ref)) <= 1e-12


@pytest.mark.parametrize("text", ["Z2", "Z4", "Z2xZ2", "Z6"])
def test_pair_distribution_matches_statevector(text):
    G = parse_group_spec(text)
    rng = np.random.default_rng(5)
    for s in (1, 2, 4):
        t0, t1 = rng.integers(0, s, size=(2, G.order))
        d = fourier_sampling_distribution_pair(G, PairOracle.from_tables(G, t0, t1, s))
        ref = oracles.statevector_distribution(G, t0.tolist(), t1.tolist())
        assert np.max(np.abs(d.probabilities - ref)) <= 1e-12


@pytest.mark.parametrize("text", ["D3", "D4", "S3", "Q8", "Z6"])
def test_general_distribution_matches_statevector(text):
    G = parse_group_spec(text)
    rng = np.random.default_rng(2)
    for s in (1, 2, 3, G.order):
        table = rng.integers(0, s, size=G.order)
        d = fourier_sampling_distribution_general(G, F(G, table))
        ref = oracles.general_statevector_distribution(G, irrep_table(G), table.tolist())
        assert np.max(np.abs(d.probabilities - ref)) <= 1e-12


@pytest.mark.parametrize("text", ["D4", "Q8"])
def test_pair_irrep_distribution_matches_block_statevector(text):
    # G x Z2 transform: irreps of G tensored with the two characters of Z2
    G = parse_group_spec(text)
    rng = np.random.default_rng(9)
    t0, t1 = rng.integers(0, 3, size=(2, G.order))
    d = fourier_sampling_distribution_pair(G, PairOracle.from_tables(G, t0, t1, 3))
    irr = irrep_table(G)
    for b in (0, 1):
        # amplitude for (rho, b) is proportional to the QFT of (|f0> + (-1)^b |f1>)
        vals = sorted(set(t0) | set(t1))
        total = np.zeros(len(irr))
        for s in vals:
            w = (t0 == s).astype(float) + (-1) ** b * (t1 == s).astype(float)
            for r, rho in enumerate(irr):
                amp = np.einsum("x,xij->ij", w, rho.matrices)
                total[r] += rho.dim * np.sum(np.abs(amp) ** 2)
        total /= (2 * G.order) ** 2
        for r, rho in enumerate(irr):
            assert d[(rho.label, b)] == pytest.approx(total[r], abs=1e-12)


@pytest.mark.parametrize("text", ["Z1", "Z5", "Z12", "Z2xZ6"])
def test_abelian_and_general_routes_agree(text):
    G = parse_group_spec(text)
    f = inst.random_function(G, 4, 0)
    a = fourier_sampling_distribution(G, f)
    g = fourier_sampling_distribution_general(G, f)
    assert [tuple(o) for o in g.outcomes] == a.outcomes
    assert np.max(np.abs(a.probabilities - g.probabilities)) <= 1e-12


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["Z8", "Z2xZ4", "D4", "Q8", "S3", "D6"]),
       st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_normalization_and_periodic_support(text, s, seed):
    G = parse_group_spec(text)
    rng = np.random.default_rng(seed)
    f = inst.random_function(G, s, rng)
    general = not G.is_abelian
    dist = fourier_sampling_distribution_general if general else fourier_sampling_distribution
    assert abs(dist(G, f).probabilities.sum() - 1) <= 1e-9
    pair = PairOracle(f, inst.random_function(G, s, rng))
    assert abs(fourier_sampling_distribution_pair(G, pair).probabilities.sum() - 1) <= 1e-9
    for H in normal_subgroups(G):
        per = inst.random_periodic(G, H, s, rng)
        d = dist(G, per)
        assert d.mass(lambda o: not in_perp(G, o, H)) <= 1e-12


def test_distribution_validation():
    with pytest.raises(ValueError):
        SamplingDistribution("abelian", [(0,), (1,)], np.array([0.5, 0.6]))
    d = SamplingDistribution("abelian", [(0,), (1,)], np.array([1.0, 0.0]))
    assert d.to_json() == [{"outcome": [0], "probability": 1.0},
                           {"outcome": [1], "probability": 0.0}]


# -- sampling ---------------------------------------------------------------------


def test_sample_point_mass_and_empty():
    d = SamplingDistribution("abelian", [(0,), (1,), (2,)], np.array([0.0, 1.0, 0.0]))
    assert sample(d, np.random.default_rng(0), 0) == []
    assert sample(d, np.random.default_rng(0), 50) == [(1,)] * 50


def test_sample_frequencies_within_three_sigma():
    G = parse_group_spec("Z4")
    d = fourier_sampling_distribution(G, F(G, [A, B, A, C]))
    n = 10**4
    got = sample(d, np.random.default_rng(7), n)
    for o, p in zip(d.outcomes, d.probabilities):
        freq = sum(1 for g in got if g == o) / n
        assert abs(freq - p) <= 3 * np.sqrt(p * (1 - p) / n) + 1e-12


def test_sample_never_leaves_support():
    G = parse_group_spec("Z12")
    H = subgroup_close(G, [(3,)])
    f = inst.random_periodic(G, H, 5, 1)
    d = fourier_sampling_distribution(G, f)
    got = sample(d, np.random.default_rng(1), 5000)
    assert set(got) <= set(orthogonal(G, H).elements)


def test_sample_deterministic():
    G = parse_group_spec("D4")
    f = inst.random_function(G, 3, 0)
    a = fourier_samples(G, f, np.random.default_rng(4), 30, general=True)
    b = fourier_samples(G, f.fresh(), np.random.default_rng(4), 30, general=True)
    assert a == b


# -- superposition distances -------------------------------------------------------


def test_state_defect_examples():
    G = parse_group_spec("Z2")
    assert state_defect(G, F(G, [A, B]), whole_group(G)) == Fraction(1, 2)
    Z12 = parse_group_spec("Z12")
    H = subgroup_close(Z12, [(4,)])
    per = inst.random_periodic(Z12, H, 5, 0)
    assert state_defect(Z12, per, H) == 0


def test_pair_defect_examples():
    G = parse_group_spec("Z2")
    p = PairOracle.from_tables(G, [A, A], [B, B])
    assert pair_defect(G, p, whole_group(G)) == 1
    Z8 = parse_group_spec("Z8")
    similar = inst.hidden_translation_pair(Z8, 4, 0, s_count=5)
    assert pair_defect(Z8, similar, subgroup_close(Z8, [(4,)])) == 0


def test_coset_distribution_weights():
    G = parse_group_spec("Z4")
    mu = coset_distribution(F(G, [A, B, A, C]), subgroup_close(G, [(2,)]))
    assert mu.mu(0) == {A: 1}
    assert mu.mu(1) == {B: Fraction(1, 2), C: Fraction(1, 2)}
    assert mu.mu(3) == mu.mu(1)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 12), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_prop_distance_identity(n, s, seed):
    G = parse_group_spec(f"Z{n}")
    rng = np.random.default_rng(seed)
    f, g = inst.random_function(G, s, rng), inst.random_function(G, s, rng)
    lhs = function_distance(f, g)
    assert lhs == state_distance_sq(indicator(f), indicator(g)) / 2
    assert lhs == Fraction(int(np.sum(f.table != g.table)), n)


def test_prop_distance_identity_z10():
    G = parse_group_spec("Z10")
    rng = np.random.default_rng(0)
    for _ in range(50):
        f, g = inst.random_function(G, 4, rng), inst.random_function(G, 4, rng)
        assert function_distance(f, g) == state_distance_sq(indicator(f), indicator(g)) / 2


def _brute_state_defect(G, table, H):
    # explicit vectors over G x S, both scaled by 1/sqrt|G|: |f> is 0/1, |mu> carries mu_x(s)
    vals = sorted(set(table))
    cos = {x: c for c in oracles.cosets(G, H.elements) for x in c}
    els = G.elements()
    f = np.zeros((len(els), len(vals)))
    mu = np.zeros_like(f)
    for i, x in enumerate(els):
        f[i, vals.index(table[i])] = 1
        for y in cos[x]:
            mu[i, vals.index(table[els.index(y)])] += 1 / H.order
    diff = f - mu
    return (diff ** 2).sum() / len(els)


@pytest.mark.parametrize("text", ["Z6", "Z2xZ2", "D3", "Q8"])
def test_state_defect_matches_explicit_vectors(text):
    G = parse_group_spec(text)
    rng = np.random.default_rng(1)
    for H in normal_subgroups(G):
        for _ in range(5):
            f = inst.random_function(G, 3, rng)
            assert float(state_defect(G, f, H)) == pytest.approx(
                _brute_state_defect(G, f.table.tolist(), H), abs=1e-12)


@pytest.mark.parametrize("text", ["Z12", "Z2xZ6", "Z10"])
def test_defect_identity_abelian(text):
    G = parse_group_spec(text)
    rng = np.random.default_rng(3)
    for _ in range(10):
        f = inst.random_function(G, 5, rng)
        d = fourier_sampling_distribution(G, f)
        for H in all_subgroups(G):
            outside = d.mass(lambda y: not in_perp(G, y, H))
            assert abs(float(state_defect(G, f, H)) - outside) <= 1e-9


@pytest.mark.parametrize("text", ["D4", "D5", "Q8", "S3"])
def test_defect_identity_general(text):
    G = parse_group_spec(text)
    rng = np.random.default_rng(4)
    for _ in range(10):
        f = inst.random_function(G, 4, rng)
        d = fourier_sampling_distribution_general(G, f)
        for H in normal_subgroups(G):
            outside = d.mass(lambda r: not in_perp(G, r, H))
            assert abs(float(state_defect(G, f, H)) - outside) <= 1e-9


@pytest.mark.parametrize("text", ["Z8", "D4"])
def test_pair_defect_identity(text):
    G = parse_group_spec(text)
    rng = np.random.default_rng(6)
    for _ in range(20):
        p = PairOracle(inst.random_function(G, 3, rng), inst.random_function(G, 3, rng))
        d = fourier_sampling_distribution_pair(G, p)
        for H in normal_subgroups(G):
            flagged = d.mass(lambda o: o[1] == 1 and in_perp(G, o[0], H))
            assert abs(float(pair_defect(G, p, H)) - 2 * flagged) <= 1e-9


# -- coset states ---------------------------------------------------------------------


def test_qft_of_basis_state_is_uniform():
    G = parse_group_spec("Z6")
    v = qft_coset_state(G, 0, trivial_subgroup(G))
    assert np.allclose(v, np.full(6, 1 / np.sqrt(6)), atol=1e-12)


def test_qft_coset_z4():
    G = parse_group_spec("Z4")
    v = qft_coset_state(G, 0, subgroup_close(G, [(2,)]))
    assert np.allclose(v, [1 / np.sqrt(2), 0, 1 / np.sqrt(2), 0], atol=1e-12)


def test_qft_coset_d4_center():
    G = parse_group_spec("D4")
    Z = subgroup_close(G, [(2, 0)])
    rows, _ = qft_matrix(G)
    trivial = {rho.label for rho in irrep_table(G) if rho.trivial_on(Z)}
    assert trivial == {rho.label for rho in irrep_table(G) if rho.dim == 1}
    for x in range(G.order):
        v = qft_coset_state(G, x, Z)
        support = {rows[i][0] for i in np.flatnonzero(np.abs(v) > 1e-12)}
        assert support == trivial


@pytest.mark.parametrize("text", ["Z12", "Z2xZ4", "D4", "Q8", "S3", "D6"])
def test_qft_coset_equals_perp_state(text):
    G = parse_group_spec(text)
    subs = all_subgroups(G) if G.is_abelian else normal_subgroups(G)
    for H in subs:
        for x in range(G.order):
            diff = qft_coset_state(G, x, H) - perp_coset_state(G, x, H)
            assert np.max(np.abs(diff)) <= 1e-9


def test_qft_matrix_is_unitary_and_matches_characters():
    for text in ["Z6", "Z2xZ3", "D4", "Q8", "S3"]:
        G = parse_group_spec(text)
        _, Fm = qft_matrix(G)
        assert np.allclose(Fm @ Fm.conj().T, np.eye(G.order), atol=1e-12)
        if G.is_abelian:
            assert np.allclose(Fm, oracles.qft_columns(G), atol=1e-12)
