"""Quantum testers for LARGER-PERIOD(K) and CCR(k, t).

Each tester draws its Fourier samples from the exact observation law and
then evaluates the acceptance predicate. The predicates are exposed on
their own so they can be run on synthetic transcripts, and on the support
of a distribution: every predicate here is monotone (fewer samples can only
help acceptance), so if it holds on the whole support the tester accepts
with probability exactly 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .groups import (DEFAULT_TUPLE_BUDGET, GroupSpec, Subgroup, character_trivial_on,
                     irrep_table, kernel_intersection, orthogonal, subgroup_close,
                     t_generated_normal_subgroups, trivial_subgroup)
from .qsim import SamplingDistribution, jsonable, fourier_samples


@dataclass
class TesterParams:
    delta: float
    K: Subgroup | None = None
    k: int | None = None
    t: int | None = None

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.K is not None and not self.K.is_normal:
            raise ValueError("K must be a normal subgroup")
        if self.k is not None or self.t is not None:
            if self.k is None or self.t is None:
                raise ValueError("CCR needs both k and t")
            if self.k < 1 or self.t < 1:
                raise ValueError("need k >= 1 and t >= 1")
            # t <= log2 k, except that k = 1 still admits t = 1 (only H = {1})
            if self.k >= 2 and self.t > math.log2(self.k) + 1e-12:
                raise ValueError(f"t = {self.t} exceeds log2(k) = {math.log2(self.k):.3f}")


@dataclass
class Verdict:
    accepted: bool
    samples: list
    N: int
    queries_used: int
    seed: int | None
    witness: Subgroup | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"accepted": self.accepted, "N": self.N, "queries_used": self.queries_used,
                "seed": self.seed, "samples": [jsonable(s) for s in self.samples],
                "witness": None if self.witness is None else self.witness.serialize()}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _ceil(x: float) -> int:
    # absorb float noise such as 16 / 0.1 = 159.99999999999997
    r = round(x)
    return int(r) if abs(x - r) < 1e-9 * max(1.0, abs(x)) else math.ceil(x)


def period_sample_count(G: GroupSpec, delta: float) -> int:
    return _ceil(4 * math.log2(G.order) / delta)


def ccr_sample_count(G: GroupSpec, k: int, t: int, delta: float) -> int:
    return _ceil(2 * k * t * math.log2(G.order) / delta)


def _generator(rng) -> tuple[np.random.Generator, int | None]:
    if isinstance(rng, np.random.Generator):
        return rng, None
    return np.random.default_rng(rng), (None if rng is None else int(rng))


# -- acceptance predicates ---------------------------------------------------


def accept_check_period(G: GroupSpec, samples, K: Subgroup) -> tuple[bool, Subgroup | None]:
    """Accept iff <y_1..y_N> is a strict subgroup of K^perp (abelian G).

    The witness is <y_i>^perp, the largest H whose orthogonal holds every sample.
    """
    Y = subgroup_close(G, [tuple(y) for y in samples])
    Kp = orthogonal(G, K)
    if Y < Kp:
        return True, orthogonal(G, Y)
    return False, None


def accept_check_period_general(G: GroupSpec, samples, K: Subgroup) -> tuple[bool, Subgroup | None]:
    """Accept iff the sampled kernels intersect in a subgroup strictly above K."""
    by_label = {rho.label: rho for rho in irrep_table(G)}
    inter = kernel_intersection(G, [by_label[_label(s)] for s in set(map(_label, samples))])
    if K < inter:
        return True, inter
    return False, None


def _label(s):
    return tuple(s) if isinstance(s, list) else s


def accept_check_ccr(G: GroupSpec, samples, k: int, t: int,
                     budget: int = DEFAULT_TUPLE_BUDGET) -> tuple[bool, Subgroup | None]:
    """Accept iff some admissible H has rho_i outside H^perp for every b_i = 1.

    Admissible H: normal, |H| <= k, normal closure of <= t elements. The witness
    is the first such H in canonical order.
    """
    flagged = {_label(rho) for rho, b in samples if b == 1}
    if G.is_abelian and all(isinstance(r, tuple) for r in flagged):
        idx = [G.index(r) for r in flagged]

        def in_perp(i, H):
            return character_trivial_on(G, i, H)
    else:
        by_label = {rho.label: rho for rho in irrep_table(G)}
        idx = [by_label[r] for r in flagged]

        def in_perp(rho, H):
            return rho.trivial_on(H)
    for H in t_generated_normal_subgroups(G, k, t, budget=budget):
        if not any(in_perp(r, H) for r in idx):
            return True, H
    return False, None


# -- testers -------------------------------------------------------------------


def _degenerate(K: Subgroup, G: GroupSpec) -> bool:
    # LARGER-PERIOD(K) is empty when K = G
    return K.order == G.order


def test_larger_period(G: GroupSpec, params: TesterParams, f, rng) -> Verdict:
    """Fourier-sample N = ceil(4 log2|G| / delta) times; accept iff <y_i> < K^perp."""
    if not G.is_abelian:
        raise ValueError("abelian tester; use test_larger_period_general")
    gen, seed = _generator(rng)
    K = params.K if params.K is not None else trivial_subgroup(G)
    if _degenerate(K, G):
        return Verdict(False, [], 0, 0, seed)
    N = period_sample_count(G, params.delta)
    samples = fourier_samples(G, f, gen, N)
    ok, witness = accept_check_period(G, samples, K)
    return Verdict(ok, samples, N, N, seed, witness)


def test_larger_period_general(G: GroupSpec, params: TesterParams, f, rng) -> Verdict:
    """Same sample count; accept iff the sampled irrep kernels meet strictly above K."""
    gen, seed = _generator(rng)
    K = params.K if params.K is not None else trivial_subgroup(G)
    if _degenerate(K, G):
        return Verdict(False, [], 0, 0, seed)
    N = period_sample_count(G, params.delta)
    samples = fourier_samples(G, f, gen, N, general=True)
    ok, witness = accept_check_period_general(G, samples, K)
    return Verdict(ok, samples, N, N, seed, witness)


def test_common_coset_range(G: GroupSpec, params: TesterParams, f, rng,
                            budget: int = DEFAULT_TUPLE_BUDGET) -> Verdict:
    """Sample (rho_i, b_i) over G x Z2 N = ceil(2kt log2|G| / delta) times."""
    if params.k is None or params.t is None:
        raise ValueError("CCR tester needs k and t")
    gen, seed = _generator(rng)
    N = ccr_sample_count(G, params.k, params.t, params.delta)
    # fail fast on an oversized search before spending queries
    t_generated_normal_subgroups(G, params.k, params.t, budget=budget)
    samples = fourier_samples(G, f, gen, N)
    ok, witness = accept_check_ccr(G, samples, params.k, params.t, budget=budget)
    return Verdict(ok, samples, N, N, seed, witness)


# keep pytest from collecting the testers as tests
for _fn in (TesterParams, test_larger_period, test_larger_period_general, test_common_coset_range):
    _fn.__test__ = False


# -- exact completeness certificates -----------------------------------------------


def certify_period(G: GroupSpec, d: SamplingDistribution, K: Subgroup) -> bool:
    """Whether the predicate holds on the whole support, which forces Pr[accept] = 1."""
    if _degenerate(K, G):
        return False
    if d.kind == "abelian":
        return accept_check_period(G, d.support(), K)[0]
    return accept_check_period_general(G, d.support(), K)[0]


def certify_ccr(G: GroupSpec, d: SamplingDistribution, k: int, t: int,
                budget: int = DEFAULT_TUPLE_BUDGET) -> bool:
    return accept_check_ccr(G, d.support(), k, t, budget=budget)[0]
