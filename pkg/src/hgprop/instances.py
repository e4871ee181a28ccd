"""Instance generators and exact distance-to-property oracles."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .groups import (GroupSpec, Subgroup, coset_labels, minimal_overgroups, normal_closure,
                     parse_group_spec, parse_subgroup, subgroup_close,
                     t_generated_normal_subgroups, whole_group)
from .qsim import FunctionOracle, PairOracle

INFINITE_DISTANCE = math.inf


def _rng(rng) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


def _coset_histograms(G: GroupSpec, H: Subgroup, tables):
    """Per-coset value counts for each table, over a shared value axis."""
    _, coset_of = np.unique(coset_labels(G, H), return_inverse=True)
    values, inv = np.unique(np.concatenate(tables), return_inverse=True)
    n = G.order
    out = []
    for i in range(len(tables)):
        m = np.zeros((coset_of.max() + 1, len(values)), dtype=np.int64)
        np.add.at(m, (coset_of, inv[i * n:(i + 1) * n]), 1)
        out.append(m)
    return values, coset_of, out


# -- periodicity ----------------------------------------------------------


def majority_correction(f: FunctionOracle, H: Subgroup) -> FunctionOracle:
    """g(x) = plurality value of f on xH; ties go to the lowest value id."""
    values, coset_of, (m,) = _coset_histograms(f.group, H, [f.table])
    winner = values[np.argmax(m, axis=1)]
    return FunctionOracle(f.group, winner[coset_of], f.value_universe_size)


def dist_to_per(f: FunctionOracle, H: Subgroup) -> Fraction:
    """dist(f, Per(H)), attained by the majority correction."""
    if not f.group.is_abelian and not H.is_normal:
        raise ValueError("H must be normal")
    _, _, (m,) = _coset_histograms(f.group, H, [f.table])
    changed = int(m.sum() - m.max(axis=1).sum())
    return Fraction(changed, f.group.order)


def dist_to_larger_period(f: FunctionOracle, K: Subgroup):
    """min over H > K of dist(f, Per(H)); ``inf`` when K = G."""
    best = INFINITE_DISTANCE
    for H in minimal_overgroups(f.group, K):
        d = dist_to_per(f, H)
        if d < best:
            best = d
            if d == 0:
                break
    return best


# -- common coset range ----------------------------------------------------


def dist_to_range(f: PairOracle, H: Subgroup) -> Fraction:
    """Fraction of G x Z2 to change so that f0 and f1 become H-similar."""
    if not H.is_normal:
        raise ValueError("H must be normal")
    _, _, (m0, m1) = _coset_histograms(f.group, H, [f.f0.table, f.f1.table])
    return Fraction(int(np.abs(m0 - m1).sum()), 4 * f.group.order)


def dist_to_ccr(f: PairOracle, k: int, t: int, budget: int | None = None) -> Fraction:
    kw = {} if budget is None else {"budget": budget}
    return min(dist_to_range(f, H) for H in t_generated_normal_subgroups(f.group, k, t, **kw))


# -- generators ------------------------------------------------------------


def random_function(G: GroupSpec, s_count: int, rng) -> FunctionOracle:
    return FunctionOracle(G, _rng(rng).integers(0, s_count, size=G.order), s_count)


def injective_function(G: GroupSpec, rng=None) -> FunctionOracle:
    """A bijection G -> {0..|G|-1}; the identity labelling when rng is None."""
    table = np.arange(G.order) if rng is None else _rng(rng).permutation(G.order)
    return FunctionOracle(G, table, G.order)


def random_periodic(G: GroupSpec, H: Subgroup, s_count: int, rng) -> FunctionOracle:
    """Uniformly random value per coset of H."""
    if not H.is_normal:
        raise ValueError("H must be normal")
    _, coset_of = np.unique(coset_labels(G, H), return_inverse=True)
    vals = _rng(rng).integers(0, s_count, size=coset_of.max() + 1)
    return FunctionOracle(G, vals[coset_of], s_count)


def perturb_to_distance(f: FunctionOracle, d: float, rng) -> FunctionOracle:
    """Overwrite exactly floor(d |G|) points with fresh, distinct values."""
    if not 0 <= d <= 1:
        raise ValueError("target distance must lie in [0, 1]")
    n = f.group.order
    count = math.floor(d * n)
    pts = _rng(rng).choice(n, size=count, replace=False)
    base = max(f.value_universe_size, int(f.table.max()) + 1)
    table = f.table.copy()
    table[pts] = base + np.arange(count)
    return FunctionOracle(f.group, table, base + count)


def _translation(G: GroupSpec, u) -> np.ndarray:
    """perm[x] = index of x*u."""
    if not isinstance(u, (int, np.integer)):
        u = G.index(tuple(u))
    return G.mul_indices(np.arange(G.order), u)


def _label_space(G: GroupSpec) -> int:
    return min(G.order ** 3, 2**63 - 1)


def hidden_translation_pair(G: GroupSpec, u, rng, s_count: int | None = None) -> PairOracle:
    """Random f1 and f0(x) = f1(x u)."""
    s_count = _label_space(G) if s_count is None else s_count
    f1 = _rng(rng).integers(0, s_count, size=G.order)
    f0 = f1[_translation(G, u)]
    return PairOracle.from_tables(G, f0, f1, s_count)


def disjoint_range_pair(G: GroupSpec, rng=None) -> PairOracle:
    """Two injective functions with disjoint ranges."""
    n = G.order
    if rng is None:
        t0, t1 = np.arange(n), np.arange(n, 2 * n)
    else:
        r = _rng(rng)
        t0, t1 = r.permutation(n), n + r.permutation(n)
    return PairOracle.from_tables(G, t0, t1, 2 * n)


def sample_D1(G: GroupSpec, rng) -> tuple[PairOracle, int]:
    """Positive distribution: uniform f1 into a label space of size >= |G|^3, uniform u."""
    if not G.is_abelian:
        raise ValueError("the lower-bound distributions are defined on abelian groups")
    r = _rng(rng)
    f1 = r.integers(0, _label_space(G), size=G.order)
    u = int(r.integers(0, G.order))
    f0 = f1[_translation(G, u)]
    return PairOracle.from_tables(G, f0, f1, _label_space(G)), u


def sample_D2(G: GroupSpec, rng) -> PairOracle:
    """Negative distribution: two independent uniform functions."""
    if not G.is_abelian:
        raise ValueError("the lower-bound distributions are defined on abelian groups")
    r = _rng(rng)
    s = _label_space(G)
    return PairOracle.from_tables(G, r.integers(0, s, size=G.order),
                                  r.integers(0, s, size=G.order), s)


def collision_bound(G: GroupSpec) -> float:
    """Probability bound that a D2 sample is non-injective or has overlapping ranges."""
    n = G.order
    return min(1.0, math.comb(2 * n, 2) / _label_space(G))


# -- serializable instances ------------------------------------------------


PERIOD_KINDS = ("periodic", "injective", "random", "perturbed", "far-from-LP", "custom-table")
PAIR_KINDS = ("hidden-translation", "disjoint-range", "equal-pair", "D1", "D2", "custom-table")


class InstanceCheckFailed(AssertionError):
    pass


@dataclass
class Instance:
    group: GroupSpec
    kind: str
    params: dict
    seed: int | None
    oracle: object = field(repr=False)

    @property
    def is_pair(self) -> bool:
        return isinstance(self.oracle, PairOracle)

    def to_json(self) -> dict:
        if self.is_pair:
            table = [self.oracle.f0.table.tolist(), self.oracle.f1.table.tolist()]
        else:
            table = self.oracle.table.tolist()
        return {"group": self.group.name, "kind": self.kind, "params": self.params,
                "seed": self.seed, "table": table}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> Instance:
        G = parse_group_spec(data["group"])
        table = data["table"]
        if table and isinstance(table[0], list):
            oracle = PairOracle.from_tables(G, table[0], table[1])
        else:
            oracle = FunctionOracle(G, table)
        return cls(G, data["kind"], dict(data.get("params", {})), data.get("seed"), oracle)


def _subgroup_arg(G: GroupSpec, value, default: Subgroup) -> Subgroup:
    if value is None:
        return default
    if isinstance(value, Subgroup):
        return value
    return parse_subgroup(G, value)


def make_instance(G: GroupSpec, kind: str, seed: int | None = None, **params) -> Instance:
    """Build an instance of ``kind`` and post-check it with the distance oracles.

    Period kinds take ``K`` (the known subgroup), and optionally ``H``,
    ``s_count``, ``distance`` or ``delta``. Pair kinds take ``u``.
    """
    rng = np.random.default_rng(seed)
    triv = subgroup_close(G, [])
    K = _subgroup_arg(G, params.get("K"), triv)
    s_count = int(params.get("s_count") or max(2, G.order))
    rec = {k: (v.serialize() if isinstance(v, Subgroup) else v) for k, v in params.items()
           if v is not None}

    if kind == "periodic":
        H = params.get("H")
        if H is None:
            over = list(minimal_overgroups(G, K))
            if not over:
                raise InstanceCheckFailed("K = G: no function has a larger period")
            H = over[int(rng.integers(len(over)))]
        H = _subgroup_arg(G, H, triv)
        oracle = random_periodic(G, H, s_count, rng)
        rec["H"] = H.serialize()
        if not (K < H) or dist_to_per(oracle, H) != 0:
            raise InstanceCheckFailed("periodic instance is not in LARGER-PERIOD(K)")
    elif kind == "injective":
        oracle = injective_function(G, rng)
    elif kind == "random":
        oracle = random_function(G, s_count, rng)
    elif kind == "perturbed":
        base = make_instance(G, "periodic", seed=seed, K=K, H=params.get("H"), s_count=s_count)
        oracle = perturb_to_distance(base.oracle, float(params.get("distance", 0.25)), rng)
        rec["H"] = base.params["H"]
    elif kind == "far-from-LP":
        delta = float(params.get("delta", 0.3))
        oracle = injective_function(G, rng)
        if not dist_to_larger_period(oracle, K) > delta:
            raise InstanceCheckFailed(f"no injective function on {G} is {delta}-far from LP(K)")
    elif kind == "hidden-translation":
        u = params.get("u")
        u = int(rng.integers(G.order)) if u is None else _element_index(G, u)
        oracle = hidden_translation_pair(G, u, rng)
        rec["u"] = list(G.element(u))
        H = normal_closure(G, [u])
        if dist_to_range(oracle, H) != 0:
            raise InstanceCheckFailed("hidden translation pair is not <u>-similar")
    elif kind == "disjoint-range":
        oracle = disjoint_range_pair(G, rng)
        if dist_to_range(oracle, whole_group(G)) != Fraction(1, 2):
            raise InstanceCheckFailed("disjoint-range pair is not 1/2-far")
    elif kind == "equal-pair":
        f = random_function(G, s_count, rng)
        oracle = PairOracle(f, f.fresh())
    elif kind == "D1":
        oracle, u = sample_D1(G, rng)
        rec["u"] = list(G.element(u))
    elif kind == "D2":
        oracle = sample_D2(G, rng)
    else:
        raise ValueError(f"unknown instance kind {kind!r}")
    return Instance(G, kind, rec, seed, oracle)


def _element_index(G: GroupSpec, u) -> int:
    if isinstance(u, (int, np.integer)):
        return int(u)
    if isinstance(u, str):
        return G.index(G.parse_element(u))
    return G.index(tuple(u))

