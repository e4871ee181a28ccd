"""Exact Fourier-sampling distributions and state-space quantities.

Nothing here runs a statevector. The observation law of the Fourier
sampling circuit is computed in closed form from the function table:

    Pr[rho] = d_rho / |G|^2 * sum_s sum_ij |sum_{x in f^-1(s)} rho(x)_ij|^2

which for abelian groups reduces to one multidimensional FFT per value
class. Distances between uniform superpositions are computed in exact
rational arithmetic.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .groups import (GroupSpec, Subgroup, UnsupportedGroup, character_trivial_on,
                     character_values, coset_labels, irrep_table, orthogonal)

SUPPORT_TOL = 1e-12
NORM_TOL = 1e-9


class FunctionOracle:
    """Table-backed f: G -> S with query accounting.

    Values are integer labels. ``query_count`` is charged once per point
    query and once per superposition query; full-table reads done by the
    simulator are counted separately in ``simulation_reads``.
    """

    def __init__(self, group: GroupSpec, table, value_universe_size: int | None = None):
        table = np.array(table, dtype=np.int64)
        if table.shape != (group.order,):
            raise ValueError(f"table must have {group.order} entries, got {table.shape}")
        self.group = group
        self.table = table
        self.table.setflags(write=False)
        self.value_universe_size = (int(table.max()) + 1 if value_universe_size is None
                                    else int(value_universe_size))
        self.query_count = 0
        self.simulation_reads = 0
        self._lock = threading.Lock()

    def _charge(self, queries: int, reads: int = 0):
        with self._lock:
            self.query_count += queries
            self.simulation_reads += reads

    def __call__(self, x) -> int:
        return self.query(x)

    def query(self, x) -> int:
        if not isinstance(x, (int, np.integer)):
            x = self.group.index(tuple(x))
        self._charge(1)
        return int(self.table[x])

    def charge_queries(self, n: int):
        self._charge(n)

    def query_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        self._charge(xs.size)
        return self.table[xs]

    def superposition_query(self, reads: bool = True) -> np.ndarray:
        """One oracle call on a superposition; the simulator reads the whole table."""
        self._charge(1, self.group.order if reads else 0)
        return self.table

    def read_table(self) -> np.ndarray:
        """Table access for exact bookkeeping; not a query."""
        self._charge(0, self.group.order)
        return self.table

    def fresh(self) -> FunctionOracle:
        return FunctionOracle(self.group, self.table, self.value_universe_size)

    def is_injective(self) -> bool:
        return len(np.unique(self.table)) == self.group.order


class PairOracle:
    """A pair (f0, f1), equivalently f(x, b) = f_b(x) on G x Z2."""

    def __init__(self, f0: FunctionOracle, f1: FunctionOracle):
        if f0.group != f1.group:
            raise ValueError("f0 and f1 must share a domain")
        self.f0, self.f1 = f0, f1
        self.group = f0.group
        self.query_count = 0
        self.simulation_reads = 0
        self._lock = threading.Lock()

    @classmethod
    def from_tables(cls, G: GroupSpec, t0, t1, value_universe_size: int | None = None):
        t0, t1 = np.asarray(t0, dtype=np.int64), np.asarray(t1, dtype=np.int64)
        if value_universe_size is None:
            value_universe_size = int(max(t0.max(), t1.max())) + 1
        return cls(FunctionOracle(G, t0, value_universe_size),
                   FunctionOracle(G, t1, value_universe_size))

    @property
    def value_universe_size(self) -> int:
        return max(self.f0.value_universe_size, self.f1.value_universe_size)

    def query(self, x, b: int) -> int:
        with self._lock:
            self.query_count += 1
        return (self.f1 if b else self.f0).query(x)

    def charge_queries(self, n: int):
        with self._lock:
            self.query_count += n

    def superposition_query(self, reads: bool = True) -> tuple[np.ndarray, np.ndarray]:
        with self._lock:
            self.query_count += 1
            if reads:
                self.simulation_reads += 2 * self.group.order
        return self.f0.table, self.f1.table

    def fresh(self) -> PairOracle:
        return PairOracle(self.f0.fresh(), self.f1.fresh())


# ---------------------------------------------------------------------------
# probabilistic functions and superposition distances


@dataclass(frozen=True)
class ProbFunction:
    """x -> distribution over value ids, as integer weights over ``denominator``.

    ``weights[x, j]`` is the weight of ``values[j]`` at element x.
    """

    weights: np.ndarray
    values: np.ndarray
    denominator: int

    def mu(self, x: int) -> dict[int, Fraction]:
        row = self.weights[x]
        return {int(self.values[j]): Fraction(int(row[j]), self.denominator)
                for j in np.flatnonzero(row)}


def _value_matrix(tables: list[np.ndarray]):
    values, inv = np.unique(np.concatenate(tables), return_inverse=True)
    n = len(tables[0])
    return values, [inv[i * n:(i + 1) * n] for i in range(len(tables))]


def _coset_counts(G: GroupSpec, codes: np.ndarray, n_values: int, H: Subgroup) -> np.ndarray:
    """m[x, s] = |f^-1(s) cap xH| as integers."""
    labels = coset_labels(G, H)
    reps, coset_of = np.unique(labels, return_inverse=True)
    per_coset = np.zeros((len(reps), n_values), dtype=np.int64)
    np.add.at(per_coset, (coset_of, codes), 1)
    return per_coset[coset_of]


def indicator(f: FunctionOracle) -> ProbFunction:
    """delta^f: the point mass at f(x)."""
    values, (codes,) = _value_matrix([f.table])
    w = np.zeros((len(codes), len(values)), dtype=np.int64)
    w[np.arange(len(codes)), codes] = 1
    return ProbFunction(w, values, 1)


def coset_distribution(f: FunctionOracle, H: Subgroup, values: np.ndarray | None = None) -> ProbFunction:
    """mu^{f,H}: at x, the empirical distribution of f over the coset xH."""
    if values is None:
        values = np.unique(f.table)
    codes = np.searchsorted(values, f.table)
    return ProbFunction(_coset_counts(f.group, codes, len(values), H), values, H.order)


def _aligned(mu: ProbFunction, values: np.ndarray) -> np.ndarray:
    out = np.zeros((mu.weights.shape[0], len(values)), dtype=object)
    cols = np.searchsorted(values, mu.values)
    out[:, cols] = mu.weights.astype(object)
    return out


def state_distance_sq(mu: ProbFunction, nu: ProbFunction) -> Fraction:
    """|| |mu> - |nu> ||^2 = (1/|G|) sum_x sum_s (mu_x(s) - nu_x(s))^2, exactly."""
    values = np.union1d(mu.values, nu.values)
    a, b = _aligned(mu, values), _aligned(nu, values)
    num = a * nu.denominator - b * mu.denominator
    total = int((num * num).sum())
    n = mu.weights.shape[0]
    return Fraction(total, n * (mu.denominator * nu.denominator) ** 2)


def function_distance(f: FunctionOracle, g: FunctionOracle) -> Fraction:
    return Fraction(int(np.count_nonzero(f.table != g.table)), f.group.order)


def state_defect(G: GroupSpec, f: FunctionOracle, H: Subgroup) -> Fraction:
    """|| |f> - |mu^{f,H}> ||^2."""
    if not G.is_abelian and not H.is_normal:
        raise ValueError("H must be normal in a non-abelian group")
    return state_distance_sq(indicator(f), coset_distribution(f, H))


def pair_defect(G: GroupSpec, f: PairOracle, H: Subgroup) -> Fraction:
    """|| |f,H> ||^2 with |f,H> = (|mu^{f0,H}> - |mu^{f1,H}>) / sqrt(2)."""
    if not H.is_normal:
        raise ValueError("H must be normal")
    values = np.union1d(f.f0.table, f.f1.table)
    m0 = coset_distribution(f.f0, H, values)
    m1 = coset_distribution(f.f1, H, values)
    return state_distance_sq(m0, m1) / 2


# ---------------------------------------------------------------------------
# sampling distributions


@dataclass
class SamplingDistribution:
    kind: str  # "abelian", "irrep", "pair", "pair-irrep"
    outcomes: list
    probabilities: np.ndarray
    tol: float = SUPPORT_TOL
    _index: dict = field(default=None, repr=False)

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if np.any(p < -NORM_TOL) or abs(p.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"not a probability vector (sum={p.sum()!r})")
        self.probabilities = np.clip(p, 0.0, None)

    def __getitem__(self, outcome) -> float:
        if self._index is None:
            self._index = {o: i for i, o in enumerate(self.outcomes)}
        return float(self.probabilities[self._index[outcome]])

    def support(self) -> list:
        return [o for o, p in zip(self.outcomes, self.probabilities) if p > self.tol]

    def mass(self, predicate) -> float:
        return float(sum(p for o, p in zip(self.outcomes, self.probabilities) if predicate(o)))

    def to_json(self) -> list[dict]:
        return [{"outcome": jsonable(o), "probability": float(p)}
                for o, p in zip(self.outcomes, self.probabilities)]

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def jsonable(o):
    if isinstance(o, tuple):
        return [jsonable(v) for v in o]
    if isinstance(o, np.integer):
        return int(o)
    return o


def _indicators(codes: np.ndarray, n_values: int) -> np.ndarray:
    ind = np.zeros((len(codes), n_values))
    ind[np.arange(len(codes)), codes] = 1.0
    return ind


def _abelian_coefficients(G: GroupSpec, ind: np.ndarray, method: str) -> np.ndarray:
    """A[y, s] = sum_{x in f^-1(s)} chi_y(x), up to complex conjugation."""
    if method == "naive":
        return character_values(G) @ ind
    if method != "fft":
        raise ValueError(f"unknown method {method!r}")
    shaped = ind.reshape(*G.factors, ind.shape[1])
    axes = tuple(range(len(G.factors)))
    return np.fft.fftn(shaped, axes=axes).reshape(G.order, ind.shape[1])


def _abelian_probs(G: GroupSpec, tables: list[np.ndarray], method: str,
                   chunk: int = 1 << 22) -> list[np.ndarray]:
    """For each sign pattern, sum_s |sum_c sign_c A_c(y, s)|^2 / (|G| len)^2."""
    values, codes = _value_matrix(tables)
    n = G.order
    signs = [(1,)] if len(tables) == 1 else [(1, 1), (1, -1)]
    out = [np.zeros(n) for _ in signs]
    step = max(1, chunk // max(n, 1))
    for lo in range(0, len(values), step):
        hi = min(len(values), lo + step)
        coeffs = []
        for c in codes:
            sel = (c >= lo) & (c < hi)
            ind = np.zeros((n, hi - lo))
            ind[np.flatnonzero(sel), c[sel] - lo] = 1.0
            coeffs.append(_abelian_coefficients(G, ind, method))
        for k, sg in enumerate(signs):
            amp = sum(s * a for s, a in zip(sg, coeffs))
            out[k] += (np.abs(amp) ** 2).sum(axis=1)
    norm = (n * len(tables)) ** 2
    return [o / norm for o in out]


def _irrep_probs(G: GroupSpec, tables: list[np.ndarray]) -> tuple[list, list[np.ndarray]]:
    values, codes = _value_matrix(tables)
    inds = [_indicators(c, len(values)) for c in codes]
    signs = [(1,)] if len(tables) == 1 else [(1, 1), (1, -1)]
    irreps = irrep_table(G)
    norm = (G.order * len(tables)) ** 2
    out = [np.zeros(len(irreps)) for _ in signs]
    for r, rho in enumerate(irreps):
        coeffs = [np.einsum("xs,xij->sij", ind, rho.matrices) for ind in inds]
        for k, sg in enumerate(signs):
            amp = sum(s * a for s, a in zip(sg, coeffs))
            out[k][r] = rho.dim * (np.abs(amp) ** 2).sum() / norm
    return [rho.label for rho in irreps], out


def _read(f, charge: bool):
    if charge:
        return f.superposition_query()
    if isinstance(f, PairOracle):
        return f.f0.read_table(), f.f1.read_table()
    return f.read_table()


def fourier_sampling_distribution(G: GroupSpec, f: FunctionOracle, method: str = "fft",
                                  charge: bool = True) -> SamplingDistribution:
    """Exact law of the character y observed by one Fourier-sampling run."""
    if not G.is_abelian:
        raise UnsupportedGroup("use fourier_sampling_distribution_general")
    table = _read(f, charge)
    (p,) = _abelian_probs(G, [table], method)
    return SamplingDistribution("abelian", G.elements(), p)


def fourier_sampling_distribution_general(G: GroupSpec, f: FunctionOracle,
                                          charge: bool = True) -> SamplingDistribution:
    """Exact law of the irrep label rho; row and column indices are marginalized."""
    table = _read(f, charge)
    labels, (p,) = _irrep_probs(G, [table])
    return SamplingDistribution("irrep", labels, p)


def fourier_sampling_distribution_pair(G: GroupSpec, f: PairOracle, general: bool | None = None,
                                       method: str = "fft", charge: bool = True) -> SamplingDistribution:
    """Exact law of (y, b) (or (rho, b)) from Fourier sampling over G x Z2."""
    if general is None:
        general = not G.is_abelian
    t0, t1 = _read(f, charge)
    if general:
        labels, (p0, p1) = _irrep_probs(G, [t0, t1])
        kind = "pair-irrep"
    else:
        p0, p1 = _abelian_probs(G, [t0, t1], method)
        labels = G.elements()
        kind = "pair"
    outcomes = [(lab, b) for lab in labels for b in (0, 1)]
    probs = np.column_stack([p0, p1]).reshape(-1)
    return SamplingDistribution(kind, outcomes, probs)


def sample(d: SamplingDistribution, rng: np.random.Generator, n: int) -> list:
    """n i.i.d. draws by inverse CDF over the canonical outcome order."""
    if n == 0:
        return []
    p = np.where(d.probabilities > d.tol, d.probabilities, 0.0)
    cdf = np.cumsum(p / p.sum())
    u = rng.random(n)
    idx = np.searchsorted(cdf, u, side="right")
    last = int(np.flatnonzero(p)[-1])
    idx = np.minimum(idx, last)
    return [d.outcomes[i] for i in idx]


def fourier_samples(G: GroupSpec, f, rng: np.random.Generator, n: int,
                    general: bool = False) -> list:
    """Outcomes of n independent Fourier-sampling runs, charging n queries."""
    if isinstance(f, PairOracle):
        d = fourier_sampling_distribution_pair(G, f, general=general or not G.is_abelian,
                                               charge=False)
    elif general:
        d = fourier_sampling_distribution_general(G, f, charge=False)
    else:
        d = fourier_sampling_distribution(G, f, charge=False)
    f.charge_queries(n)
    return sample(d, rng, n)


# ---------------------------------------------------------------------------
# QFT on coset states


def qft_matrix(G: GroupSpec) -> tuple[list, np.ndarray]:
    """Column x is QFT_G|x>. Rows are labelled y (abelian) or (rho, i, j)."""
    n = G.order
    if G.is_abelian:
        return G.elements(), character_values(G) / np.sqrt(n)
    rows, blocks = [], []
    for rho in irrep_table(G):
        d = rho.dim
        for i in range(d):
            for j in range(d):
                rows.append((rho.label, i, j))
                blocks.append(np.sqrt(d) * rho.matrices[:, i, j])
    return rows, np.array(blocks) / np.sqrt(n)


def coset_state(G: GroupSpec, x: int, H: Subgroup) -> np.ndarray:
    v = np.zeros(G.order, dtype=complex)
    v[G.mul_indices(x, np.array(H.indices))] = 1.0 / np.sqrt(H.order)
    return v


def qft_coset_state(G: GroupSpec, x, H: Subgroup) -> np.ndarray:
    """QFT_G |xH> by explicit matrix application."""
    if not isinstance(x, (int, np.integer)):
        x = G.index(tuple(x))
    if not G.is_abelian and not H.is_normal:
        raise ValueError("H must be normal in a non-abelian group")
    _, F = qft_matrix(G)
    return F @ coset_state(G, x, H)


def perp_coset_state(G: GroupSpec, x, H: Subgroup) -> np.ndarray:
    """|H^perp(x)> built directly from characters / irreps trivial on H."""
    if not isinstance(x, (int, np.integer)):
        x = G.index(tuple(x))
    scale = np.sqrt(H.order / G.order)
    if G.is_abelian:
        chi = character_values(G, xs=[x])[:, 0]
        return scale * np.where(orthogonal(G, H).mask, chi, 0.0)
    out = []
    for rho in irrep_table(G):
        block = np.sqrt(rho.dim) * rho.matrices[x].reshape(-1)
        out.append(block if rho.trivial_on(H) else np.zeros_like(block))
    return scale * np.concatenate(out)


def in_perp(G: GroupSpec, label, H: Subgroup) -> bool:
    """Is the character/irrep ``label`` trivial on H?"""
    if isinstance(label, tuple) and G.is_abelian:
        return character_trivial_on(G, G.index(label), H)
    for rho in irrep_table(G):
        if rho.label == label:
            return rho.trivial_on(H)
    raise KeyError(label)

