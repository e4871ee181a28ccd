"""Finite groups, subgroups and irreducible representation tables.

Groups are small enough to enumerate. Every element has a canonical
integer index (lexicographic order on coordinate tuples), and most of the
subgroup machinery works on index arrays so that right multiplication by a
fixed element can be vectorized with numpy.

Supported kinds:

* ``abelian`` -- a product Z_n1 x ... x Z_nm, elements are residue tuples.
* ``dihedral`` -- D_n of order 2n, elements ``(k, e)`` stand for r^k s^e.
* ``symmetric3`` -- S3, elements are permutation tuples ``p`` with
  ``(p*q)[i] = p[q[i]]``.
* ``quaternion8`` -- Q8, elements ``(a, b)`` stand for (-1)^b * u_a with
  u = (1, i, j, k).
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

Element = tuple

MAX_ORDER = 2**24
DEFAULT_TUPLE_BUDGET = 10**7


class GroupSpecError(ValueError):
    """Malformed group-spec text or element syntax."""


class GroupOrderOverflow(GroupSpecError):
    pass


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its configured work cap."""


class UnsupportedGroup(ValueError):
    pass


# Q8 multiplication of unit indices: u_a * u_b = (-1)^sign * u_c
_Q8_UNIT = {
    (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
    (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
    (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
    (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1),
}


@dataclass(frozen=True)
class GroupSpec:
    kind: str
    factors: tuple[int, ...] = ()
    n: int = 0  # dihedral parameter

    def __post_init__(self):
        if self.kind == "abelian":
            if not self.factors or any(m < 1 for m in self.factors):
                raise GroupSpecError(f"bad factors {self.factors}")
        elif self.kind == "dihedral":
            if self.n < 1:
                raise GroupSpecError("dihedral group needs n >= 1")
        elif self.kind not in ("symmetric3", "quaternion8"):
            raise GroupSpecError(f"unknown group kind {self.kind!r}")

    # -- basic invariants -------------------------------------------------

    @property
    def name(self) -> str:
        if self.kind == "abelian":
            return "x".join(f"Z{m}" for m in self.factors)
        if self.kind == "dihedral":
            return f"D{self.n}"
        return {"symmetric3": "S3", "quaternion8": "Q8"}[self.kind]

    def __str__(self):
        return self.name

    @property
    def is_abelian(self) -> bool:
        return self.kind == "abelian"

    @property
    def order(self) -> int:
        if self.kind == "abelian":
            return math.prod(self.factors)
        if self.kind == "dihedral":
            return 2 * self.n
        return 6 if self.kind == "symmetric3" else 8

    @property
    def exponent(self) -> int:
        if self.kind == "abelian":
            return math.lcm(*self.factors)
        if self.kind == "dihedral":
            return math.lcm(self.n, 2)
        return 6 if self.kind == "symmetric3" else 4

    # -- element <-> index ------------------------------------------------

    @cached_property
    def _small_table(self) -> np.ndarray | None:
        if self.kind not in ("symmetric3", "quaternion8"):
            return None
        els = self.elements()
        idx = {e: i for i, e in enumerate(els)}
        return np.array([[idx[self.op(a, b)] for b in els] for a in els], dtype=np.int64)

    def elements(self) -> list[Element]:
        return list(self._elements)

    @cached_property
    def _elements(self) -> tuple[Element, ...]:
        if self.kind == "abelian":
            return tuple(itertools.product(*(range(m) for m in self.factors)))
        if self.kind == "dihedral":
            return tuple(itertools.product(range(self.n), range(2)))
        if self.kind == "symmetric3":
            return tuple(itertools.permutations(range(3)))
        return tuple(itertools.product(range(4), range(2)))

    def index(self, e: Element) -> int:
        self.check(e)
        if self.kind == "abelian":
            return int(np.ravel_multi_index(e, self.factors)) if e else 0
        if self.kind == "dihedral":
            return e[0] * 2 + e[1]
        if self.kind == "symmetric3":
            return self._elements.index(tuple(e))
        return e[0] * 2 + e[1]

    def element(self, i: int) -> Element:
        if not 0 <= i < self.order:
            raise IndexError(f"element index {i} out of range for {self}")
        if self.kind == "abelian":
            return tuple(int(c) for c in np.unravel_index(i, self.factors))
        if self.kind == "dihedral":
            return (i // 2, i % 2)
        return self._elements[i]

    def check(self, e: Element) -> None:
        e = tuple(e)
        if self.kind == "abelian":
            ok = len(e) == len(self.factors) and all(
                0 <= c < m for c, m in zip(e, self.factors))
        elif self.kind == "dihedral":
            ok = len(e) == 2 and 0 <= e[0] < self.n and e[1] in (0, 1)
        elif self.kind == "symmetric3":
            ok = sorted(e) == [0, 1, 2]
        else:
            ok = len(e) == 2 and 0 <= e[0] < 4 and e[1] in (0, 1)
        if not ok:
            raise ValueError(f"{e!r} is not an element of {self}")

    # -- arithmetic on element tuples -------------------------------------

    def identity(self) -> Element:
        if self.kind == "abelian":
            return (0,) * len(self.factors)
        if self.kind == "symmetric3":
            return (0, 1, 2)
        return (0, 0)

    def op(self, a: Element, b: Element) -> Element:
        self.check(a)
        self.check(b)
        if self.kind == "abelian":
            return tuple((x + y) % m for x, y, m in zip(a, b, self.factors))
        if self.kind == "dihedral":
            sign = -1 if a[1] else 1
            return ((a[0] + sign * b[0]) % self.n, a[1] ^ b[1])
        if self.kind == "symmetric3":
            return tuple(a[b[i]] for i in range(3))
        c, sign = _Q8_UNIT[(a[0], b[0])]
        return (c, a[1] ^ b[1] ^ sign)

    def inverse(self, a: Element) -> Element:
        self.check(a)
        if self.kind == "abelian":
            return tuple((-x) % m for x, m in zip(a, self.factors))
        if self.kind == "dihedral":
            return a if a[1] else ((-a[0]) % self.n, 0)
        if self.kind == "symmetric3":
            inv = [0, 0, 0]
            for i, p in enumerate(a):
                inv[p] = i
            return tuple(inv)
        return a if a[0] == 0 else (a[0], a[1] ^ 1)

    def element_order(self, a: Element) -> int:
        self.check(a)
        if self.kind == "abelian":
            return math.lcm(*(m // math.gcd(x, m) for x, m in zip(a, self.factors)))
        if self.kind == "dihedral":
            return 2 if a[1] else self.n // math.gcd(a[0], self.n)
        e, x, k = self.identity(), a, 1
        while x != e:
            x, k = self.op(x, a), k + 1
        return k

    # -- vectorized index arithmetic --------------------------------------

    def mul_indices(self, a, b) -> np.ndarray:
        """Index of a*b for broadcastable index arrays ``a`` and ``b``."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.kind == "abelian":
            ca = np.unravel_index(a, self.factors)
            cb = np.unravel_index(b, self.factors)
            cs = tuple((x + y) % m for x, y, m in zip(ca, cb, self.factors))
            return np.ravel_multi_index(cs, self.factors).astype(np.int64)
        if self.kind == "dihedral":
            ka, ea = a // 2, a % 2
            kb, eb = b // 2, b % 2
            k = (ka + (1 - 2 * ea) * kb) % self.n
            return k * 2 + (ea ^ eb)
        return self._small_table[a, b]

    def inv_indices(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.kind == "abelian":
            ca = np.unravel_index(a, self.factors)
            cs = tuple((-x) % m for x, m in zip(ca, self.factors))
            return np.ravel_multi_index(cs, self.factors).astype(np.int64)
        if self.kind == "dihedral":
            k, e = a // 2, a % 2
            return np.where(e == 1, a, ((-k) % self.n) * 2)
        table = self._small_table
        e = self.index(self.identity())
        inv = np.argmax(table == e, axis=1)
        return inv[a]

    @cached_property
    def element_orders(self) -> np.ndarray:
        """Order of every element, indexed canonically."""
        idx = np.arange(self.order)
        if self.kind == "abelian":
            out = np.ones(self.order, dtype=np.int64)
            for c, m in zip(np.unravel_index(idx, self.factors), self.factors):
                out = np.lcm(out, m // np.gcd(c, m))
            return out
        if self.kind == "dihedral":
            k, e = idx // 2, idx % 2
            return np.where(e == 1, 2, self.n // np.gcd(k, self.n)).astype(np.int64)
        return np.array([self.element_order(x) for x in self._elements], dtype=np.int64)

    @property
    def generators(self) -> list[int]:
        """Indices of a generating set of the whole group."""
        if self.kind == "abelian":
            gens = []
            for j, m in enumerate(self.factors):
                if m > 1:
                    e = [0] * len(self.factors)
                    e[j] = 1
                    gens.append(self.index(tuple(e)))
            return gens
        if self.kind == "dihedral":
            return [self.index((1 % self.n, 0)), self.index((0, 1))]
        if self.kind == "symmetric3":
            return [self.index((1, 0, 2)), self.index((1, 2, 0))]
        return [self.index((1, 0)), self.index((2, 0))]

    def parse_element(self, text: str) -> Element:
        text = text.strip()
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
        try:
            e = tuple(int(c) for c in text.split(",") if c.strip() != "")
        except ValueError:
            raise GroupSpecError(f"bad element syntax {text!r}") from None
        try:
            self.check(e)
        except ValueError as exc:
            raise GroupSpecError(str(exc)) from None
        return e


_ABELIAN_RE = re.compile(r"^Z(\d+)(?:xZ(\d+))*$")


def parse_group_spec(text: str, max_order: int = MAX_ORDER) -> GroupSpec:
    """Parse ``Z<n>(xZ<n>)*``, ``D<n>``, ``S3`` or ``Q8``."""
    text = text.strip()
    if text == "S3":
        return GroupSpec("symmetric3")
    if text == "Q8":
        return GroupSpec("quaternion8")
    m = re.fullmatch(r"D(\d+)", text)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise GroupSpecError(f"bad dihedral parameter in {text!r}")
        if 2 * n > max_order:
            raise GroupOrderOverflow(f"|{text}| = {2 * n} exceeds {max_order}")
        return GroupSpec("dihedral", n=n)
    if _ABELIAN_RE.fullmatch(text):
        factors = tuple(int(p) for p in text[1:].split("xZ"))
        if any(f < 1 for f in factors):
            raise GroupSpecError(f"cyclic factors must be >= 1 in {text!r}")
        if math.prod(factors) > max_order:
            raise GroupOrderOverflow(f"|{text}| = {math.prod(factors)} exceeds {max_order}")
        return GroupSpec("abelian", factors=factors)
    raise GroupSpecError(f"cannot parse group spec {text!r}")


# ---------------------------------------------------------------------------
# Subgroups


@dataclass(frozen=True, eq=False)
class Subgroup:
    """A subgroup held both by generators and by its sorted element indices."""

    group: GroupSpec
    generators: tuple[int, ...]
    indices: tuple[int, ...]
    _mask: np.ndarray = field(repr=False, compare=False, default=None)

    def __eq__(self, other):
        return (isinstance(other, Subgroup) and self.group == other.group
                and self.indices == other.indices)

    def __hash__(self):
        return hash((self.group, self.indices))

    def __len__(self):
        return len(self.indices)

    def __contains__(self, x) -> bool:
        if not isinstance(x, (int, np.integer)):
            x = self.group.index(tuple(x))
        return bool(self.mask[x])

    @property
    def order(self) -> int:
        return len(self.indices)

    @property
    def elements(self) -> list[Element]:
        return [self.group.element(i) for i in self.indices]

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.group.order, dtype=bool)
            m[list(self.indices)] = True
            object.__setattr__(self, "_mask", m)
        return self._mask

    def issubset(self, other: Subgroup) -> bool:
        return bool(np.all(other.mask[list(self.indices)]))

    def __le__(self, other):
        return self.issubset(other)

    def __lt__(self, other):
        return self.order < other.order and self.issubset(other)

    def __ge__(self, other):
        return other.issubset(self)

    def __gt__(self, other):
        return other < self

    @cached_property
    def is_normal(self) -> bool:
        G = self.group
        if G.is_abelian:
            return True
        h = np.array(self.indices)
        for g in G.generators:
            conj = G.mul_indices(G.mul_indices(G.inv_indices(g), h), g)
            if not np.all(self.mask[conj]):
                return False
        return True

    def sort_key(self):
        return (self.order, self.indices)

    def serialize(self) -> str:
        """``gens=...`` listing a short generating set; parse_subgroup reads it back."""
        G = self.group
        short = _minimal_generators(G, np.array(self.generators, dtype=np.int64), self.mask)
        gens = sorted(G.element(i) for i in short)
        return "gens=" + ";".join("(" + ",".join(map(str, g)) + ")" for g in gens)

    def __repr__(self):
        return f"Subgroup({self.group}, order={self.order}, {self.serialize()})"


def _to_indices(G: GroupSpec, gens) -> list[int]:
    out = []
    for g in gens:
        if isinstance(g, (int, np.integer)):
            if not 0 <= g < G.order:
                raise ValueError(f"element index {g} out of range for {G}")
            out.append(int(g))
        else:
            out.append(G.index(tuple(g)))
    return out


def _closure_mask(G: GroupSpec, gens: Sequence[int], start: np.ndarray | None = None) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool) if start is None else start.copy()
    e = G.index(G.identity())
    mask[e] = True
    frontier = np.flatnonzero(mask)
    gens = list(dict.fromkeys(gens))
    while frontier.size:
        new = []
        for g in gens:
            nxt = G.mul_indices(frontier, g)
            fresh = np.unique(nxt[~mask[nxt]])
            if fresh.size:
                mask[fresh] = True
                new.append(fresh)
        frontier = np.concatenate(new) if new else np.empty(0, dtype=np.int64)
    return mask


def _make(G: GroupSpec, gens: Sequence[int], mask: np.ndarray) -> Subgroup:
    return Subgroup(G, tuple(gens), tuple(int(i) for i in np.flatnonzero(mask)), mask)


def subgroup_close(G: GroupSpec, gens) -> Subgroup:
    """Smallest subgroup containing ``gens`` (elements or indices)."""
    gi = _to_indices(G, gens)
    return _make(G, gi, _closure_mask(G, gi))


def trivial_subgroup(G: GroupSpec) -> Subgroup:
    return subgroup_close(G, [])


def whole_group(G: GroupSpec) -> Subgroup:
    return subgroup_close(G, G.generators)


def _normal_closure_mask(G: GroupSpec, gens: Sequence[int]) -> tuple[np.ndarray, list[int]]:
    """Mask of the normal closure, plus a list that generates it as a plain subgroup."""
    gens = list(dict.fromkeys(gens))
    mask = _closure_mask(G, gens)
    if G.is_abelian:
        return mask, gens
    ggens = G.generators
    while True:
        h = np.flatnonzero(mask)
        extra = []
        for g in ggens:
            conj = G.mul_indices(G.mul_indices(G.inv_indices(g), h), g)
            extra.extend(int(c) for c in conj[~mask[conj]])
        if not extra:
            return mask, gens
        gens = list(dict.fromkeys(gens + extra))
        mask = _closure_mask(G, gens)


def normal_closure(G: GroupSpec, gens) -> Subgroup:
    """Smallest normal subgroup containing ``gens``."""
    mask, gi = _normal_closure_mask(G, _to_indices(G, gens))
    return _make(G, gi, mask)


def join(G: GroupSpec, H: Subgroup, extra, normal: bool = False) -> Subgroup:
    gi = list(H.generators) + _to_indices(G, extra)
    if normal:
        mask, gi = _normal_closure_mask(G, gi)
    else:
        mask = _closure_mask(G, gi)
    return _make(G, gi, mask)


def coset_labels(G: GroupSpec, H: Subgroup) -> np.ndarray:
    """For every element x, the smallest index in its coset xH."""
    x = np.arange(G.order)
    label = x.copy()
    for h in H.indices:
        np.minimum(label, G.mul_indices(x, h), out=label)
    return label


def coset_representatives(G: GroupSpec, H: Subgroup) -> np.ndarray:
    return np.unique(coset_labels(G, H))


def all_subgroups(G: GroupSpec) -> list[Subgroup]:
    """Every subgroup, by saturating cyclic joins. Meant for small groups."""
    found = {trivial_subgroup(G)}
    frontier = list(found)
    while frontier:
        nxt = []
        for H in frontier:
            for x in coset_representatives(G, H):
                if H.mask[x]:
                    continue
                J = join(G, H, [int(x)])
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted(found, key=Subgroup.sort_key)


def normal_subgroups(G: GroupSpec) -> list[Subgroup]:
    return [H for H in all_subgroups(G) if H.is_normal]


# -- characters of abelian groups ------------------------------------------


def _character_phase_matrix(G: GroupSpec, ys: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """Integer phases p with chi_y(x) = exp(2 pi i p / L), L = exponent."""
    L = G.exponent
    cy = np.unravel_index(np.asarray(ys), G.factors)
    cx = np.unravel_index(np.asarray(xs), G.factors)
    p = np.zeros((len(ys), len(xs)), dtype=np.int64)
    for yj, xj, m in zip(cy, cx, G.factors):
        p = (p + np.outer(yj, xj) * (L // m)) % L
    return p


def character_values(G: GroupSpec, ys=None, xs=None) -> np.ndarray:
    """Matrix chi_y(x) = exp(2 pi i sum_j x_j y_j / n_j) over canonical indices."""
    if not G.is_abelian:
        raise UnsupportedGroup("characters indexed by elements need an abelian group")
    ys = np.arange(G.order) if ys is None else np.asarray(ys)
    xs = np.arange(G.order) if xs is None else np.asarray(xs)
    p = _character_phase_matrix(G, ys, xs)
    return np.exp(2j * np.pi * p / G.exponent)


def character_trivial_on(G: GroupSpec, y: int, H: Subgroup) -> bool:
    if not H.generators:
        return True
    p = _character_phase_matrix(G, np.array([y]), np.array(H.generators))
    return bool(np.all(p == 0))


def orthogonal(G: GroupSpec, H: Subgroup) -> Subgroup:
    """H^perp: characters trivial on H, as a subgroup of G."""
    if not G.is_abelian:
        raise UnsupportedGroup("orthogonal subgroups of non-abelian groups: use irrep kernels")
    if H.generators:
        p = _character_phase_matrix(G, np.arange(G.order), np.array(H.generators))
        mask = np.all(p == 0, axis=1)
    else:
        mask = np.ones(G.order, dtype=bool)
    # generators of H^perp are not tracked explicitly; every element generates it
    ys = np.flatnonzero(mask)
    gens = _minimal_generators(G, ys, mask)
    return _make(G, gens, mask)


def _minimal_generators(G: GroupSpec, candidates: np.ndarray, target: np.ndarray) -> list[int]:
    gens: list[int] = []
    cur = _closure_mask(G, gens)
    # largest-order elements first keeps generating sets short
    order = np.argsort(-G.element_orders[candidates], kind="stable")
    for c in candidates[order]:
        if np.array_equal(cur, target):
            break
        if not cur[c]:
            gens.append(int(c))
            cur = _closure_mask(G, gens)
    return gens


# -- overgroups and t-generated normal subgroups ---------------------------


def minimal_overgroups(G: GroupSpec, K: Subgroup) -> Iterator[Subgroup]:
    """Yield the distinct subgroups <K, x> (normal closure if non-abelian), x not in K.

    Every subgroup strictly containing K contains one of them. Iterating over
    coset representatives suffices since <K, x> = <K, xk> for k in K.
    """
    if not K.is_normal:
        raise ValueError("K must be normal in G")
    seen = set()
    for x in coset_representatives(G, K):
        if K.mask[x]:
            continue
        H = join(G, K, [int(x)], normal=not G.is_abelian)
        if H not in seen:
            seen.add(H)
            yield H


def t_generated_normal_subgroups(G: GroupSpec, k: int, t: int,
                                 budget: int = DEFAULT_TUPLE_BUDGET) -> list[Subgroup]:
    """Normal subgroups of order <= k that are normal closures of <= t elements.

    Built level by level: NC(u_1..u_j) = NC(NC(u_1..u_{j-1}) u {u_j}), and
    levels whose closure already exceeds k are pruned. ``budget`` caps the
    number of closure computations. Returned in canonical order (order, elements).
    """
    if k < 1 or t < 1:
        raise ValueError("need k >= 1 and t >= 1")
    cand_mask = G.element_orders <= k
    triv = trivial_subgroup(G)
    found = {triv}
    level = [triv]
    work = 0
    for _ in range(t):
        nxt = []
        for H in level:
            reps = coset_representatives(G, H)
            reps = reps[cand_mask[reps] & ~H.mask[reps]]
            work += len(reps)
            if work > budget:
                raise BudgetExceeded(
                    f"t-generated subgroup search on {G} exceeds {budget} closures")
            for u in reps:
                J = join(G, H, [int(u)], normal=True)
                if J.order <= k and J not in found:
                    found.add(J)
                    nxt.append(J)
        level = nxt
        if not level:
            break
    return sorted(found, key=Subgroup.sort_key)


def parse_subgroup(G: GroupSpec, text: str) -> Subgroup:
    """Parse ``gens=(4,0);(0,1)``; an empty list gives the trivial subgroup."""
    text = text.strip()
    if text.startswith("gens="):
        text = text[len("gens="):]
    parts = [p for p in text.split(";") if p.strip()]
    return subgroup_close(G, [G.parse_element(p) for p in parts])


# ---------------------------------------------------------------------------
# Irreducible representations


@dataclass(frozen=True, eq=False)
class Irrep:
    label: object
    dim: int
    matrices: np.ndarray  # shape (|G|, dim, dim), canonical element order
    kernel: Subgroup

    def __call__(self, x: int) -> np.ndarray:
        return self.matrices[x]

    def trivial_on(self, H: Subgroup) -> bool:
        return H.issubset(self.kernel)


def _kernel(G: GroupSpec, mats: np.ndarray, tol: float = 1e-9) -> Subgroup:
    eye = np.eye(mats.shape[1])
    ker = np.all(np.abs(mats - eye).reshape(len(mats), -1) < tol, axis=1)
    gens = _minimal_generators(G, np.flatnonzero(ker), ker)
    return _make(G, gens, ker)


def _abelian_irreps(G: GroupSpec) -> list[Irrep]:
    chi = character_values(G)
    return [Irrep(G.element(y), 1, chi[y].reshape(-1, 1, 1), _kernel(G, chi[y].reshape(-1, 1, 1)))
            for y in range(G.order)]


def _rot(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def _dihedral_irreps(G: GroupSpec) -> list[Irrep]:
    n = G.n
    els = G.elements()
    reps = []

    def one_dim(label, a, b):
        m = np.array([[[complex(a ** k * b ** e)]] for k, e in els])
        reps.append((label, 1, m))

    one_dim("A1", 1, 1)
    one_dim("A2", 1, -1)
    if n % 2 == 0:
        one_dim("B1", -1, 1)
        one_dim("B2", -1, -1)
    refl = np.diag([1.0, -1.0])
    for h in range(1, (n - 1) // 2 + 1):
        m = np.array([_rot(2 * np.pi * h * k / n) @ (refl if e else np.eye(2)) for k, e in els])
        reps.append((f"E{h}", 2, m.astype(complex)))
    return [Irrep(lab, d, m, _kernel(G, m)) for lab, d, m in reps]


def _s3_irreps(G: GroupSpec) -> list[Irrep]:
    els = G.elements()
    # orthonormal basis of the sum-zero plane in C^3
    basis = np.array([[1, -1, 0], [1, 1, -2]], dtype=float).T
    basis /= np.linalg.norm(basis, axis=0)
    triv, sign, std = [], [], []
    for p in els:
        P = np.zeros((3, 3))
        for i, pi in enumerate(p):
            P[pi, i] = 1.0
        triv.append([[1.0]])
        sign.append([[np.linalg.det(P)]])
        std.append(basis.T @ P @ basis)
    out = []
    for lab, m in (("A1", triv), ("A2", sign), ("E", std)):
        m = np.round(np.array(m, dtype=complex), 15)
        out.append(Irrep(lab, m.shape[1], m, _kernel(G, m)))
    return out


def _q8_irreps(G: GroupSpec) -> list[Irrep]:
    units = [np.eye(2, dtype=complex),
             np.array([[1j, 0], [0, -1j]]),
             np.array([[0, 1], [-1, 0]], dtype=complex),
             np.array([[0, 1j], [1j, 0]])]
    els = G.elements()
    # 1-dim: the three order-4 cyclic subgroups <i>, <j>, <k> as kernels
    sign_table = {"A1": (1, 1, 1, 1), "Ai": (1, 1, -1, -1),
                  "Aj": (1, -1, 1, -1), "Ak": (1, -1, -1, 1)}
    out = []
    for lab, vals in sign_table.items():
        m = np.array([[[complex(vals[a])]] for a, _ in els])
        out.append(Irrep(lab, 1, m, _kernel(G, m)))
    m = np.array([(-1) ** b * units[a] for a, b in els])
    out.append(Irrep("E", 2, m, _kernel(G, m)))
    return out


_IRREP_CACHE: dict[GroupSpec, list[Irrep]] = {}


def irrep_table(G: GroupSpec) -> list[Irrep]:
    """Complete set of inequivalent unitary irreps of G."""
    if G in _IRREP_CACHE:
        return _IRREP_CACHE[G]
    builder = {"abelian": _abelian_irreps, "dihedral": _dihedral_irreps,
               "symmetric3": _s3_irreps, "quaternion8": _q8_irreps}.get(G.kind)
    if builder is None:
        raise UnsupportedGroup(G.kind)
    table = builder(G)
    total = sum(r.dim ** 2 for r in table)
    if total != G.order:
        raise AssertionError(f"irrep dimensions of {G} sum to {total}, not {G.order}")
    _IRREP_CACHE[G] = table
    return table


def kernel_intersection(G: GroupSpec, irreps: Sequence[Irrep]) -> Subgroup:
    mask = np.ones(G.order, dtype=bool)
    for r in irreps:
        mask &= r.kernel.mask
    gens = _minimal_generators(G, np.flatnonzero(mask), mask)
    return _make(G, gens, mask)
