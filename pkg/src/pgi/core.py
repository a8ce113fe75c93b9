"""Concrete finite groups stored as Cayley tables.

Every group is built by breadth-first closure from a generating set: the
identity gets id 0 and new elements are numbered in the order they are first
reached by right multiplication with the generators.  Only ``n * len(gens)``
concrete products are evaluated; the rest of the table is filled column by
column from the BFS tree.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import SizeLimitError, SpecError

DEFAULT_ORDER_CAP = 2048


def default_order_cap() -> int:
    env = os.environ.get("PGI_ORDER_CAP")
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise SpecError(f"PGI_ORDER_CAP must be an integer, got {env!r}") from None
        if cap <= 0:
            raise SpecError("PGI_ORDER_CAP must be positive")
        return cap
    return DEFAULT_ORDER_CAP


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``n == p**e`` and ``e >= 1``, else None."""
    ps = prime_factors(n)
    if len(ps) != 1:
        return None
    p = ps[0]
    e = 0
    while n > 1:
        n //= p
        e += 1
    return p, e


class Group:
    """Immutable finite group given by its multiplication table.

    ``mul[x, y]`` is the id of ``x*y``.  Conjugation follows the right-action
    convention ``h^g = g^-1 h g`` and commutators are ``[x, y] = x^-1 y^-1 x y``.
    """

    def __init__(
        self,
        mul: np.ndarray,
        labels: Sequence[str] | None = None,
        gens: Sequence[int] = (),
        name: str = "",
        elements: Sequence[Hashable] | None = None,
        marks: dict | None = None,
    ):
        mul = np.ascontiguousarray(mul, dtype=np.int32)
        n = mul.shape[0]
        if mul.shape != (n, n) or n == 0:
            raise SpecError("multiplication table must be a non-empty square array")
        if not np.array_equal(mul[0], np.arange(n)) or not np.array_equal(mul[:, 0], np.arange(n)):
            raise SpecError("element 0 must be the identity")
        mul.setflags(write=False)
        self.mul = mul
        self.order = n
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(n))
        self.gens = tuple(int(g) for g in gens)
        self.name = name
        self.elements = tuple(elements) if elements is not None else None
        # structural landmarks recorded by constructors (A, b, basis, ...)
        self.marks = dict(marks or {})
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"<Group {self.name or '?'} of order {self.order}>"

    def __len__(self) -> int:
        return self.order

    @cached_property
    def inv(self) -> np.ndarray:
        inv = np.argmax(self.mul == 0, axis=1).astype(np.int32)
        inv.setflags(write=False)
        return inv

    @cached_property
    def elem_order(self) -> np.ndarray:
        n = self.order
        idx = np.arange(n)
        cur = idx.copy()
        order = np.zeros(n, dtype=np.int64)
        k = 1
        while True:
            hit = (cur == 0) & (order == 0)
            order[hit] = k
            if order.all():
                break
            cur = self.mul[cur, idx]
            k += 1
        order.setflags(write=False)
        return order

    @cached_property
    def conj(self) -> np.ndarray:
        """``conj[g, h] = h^g = g^-1 h g``."""
        left = self.mul[self.inv, :]
        out = self.mul[left, np.arange(self.order)[:, None]]
        out.setflags(write=False)
        return out

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.elem_order))

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    @cached_property
    def prime(self) -> int | None:
        """The prime p when this is a non-trivial p-group, else None."""
        pp = prime_power(self.order)
        return pp[0] if pp else None

    @cached_property
    def index(self) -> dict:
        if self.elements is None:
            raise AttributeError("group carries no concrete element representation")
        return {e: i for i, e in enumerate(self.elements)}

    def power(self, x: int, k: int) -> int:
        k %= int(self.elem_order[x])
        r, base = 0, int(x)
        while k:
            if k & 1:
                r = int(self.mul[r, base])
            base = int(self.mul[base, base])
            k >>= 1
        return r

    def power_table(self, k: int) -> np.ndarray:
        """Array whose entry x is x**k; negative k is allowed."""
        k %= self.exponent
        key = ("pow", k)
        if key not in self._cache:
            idx = np.arange(self.order)
            result = np.zeros(self.order, dtype=np.int32)
            base = idx.astype(np.int32)
            e = k
            while e:
                if e & 1:
                    result = self.mul[result, base]
                base = self.mul[base, base]
                e >>= 1
            result.setflags(write=False)
            self._cache[key] = result
        return self._cache[key]

    def commutator(self, x: int, y: int) -> int:
        m, inv = self.mul, self.inv
        return int(m[m[inv[x], inv[y]], m[x, y]])

    def check_axioms(self, sample: int | None = None) -> bool:
        """Associativity, identity and inverses.  Exhaustive unless ``sample`` is given."""
        m = self.mul
        n = self.order
        if not np.array_equal(m[np.arange(n), self.inv], np.zeros(n)):
            return False
        if sample is None:
            for x in range(n):
                # (x*y)*z == x*(y*z) for all y, z
                if not np.array_equal(m[m[x]], m[x][m]):
                    return False
            return True
        rng = np.random.default_rng(0)
        x, y, z = rng.integers(0, n, size=(3, sample))
        return bool(np.array_equal(m[m[x, y], z], m[x, m[y, z]]))

    def to_json(self) -> str:
        return json.dumps(
            {"order": self.order, "name": self.name, "labels": list(self.labels),
             "gens": list(self.gens), "mul": self.mul.tolist()},
            separators=(",", ":"),
        )


def _word_label(word: list[int], names: Sequence[str]) -> str:
    if not word:
        return "1"
    parts = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        run = j - i
        parts.append(names[word[i]] if run == 1 else f"{names[word[i]]}^{run}")
        i = j
    return "".join(parts) if all(len(names[w]) == 1 for w in word) else "*".join(parts)


def closure_group(
    identity: Hashable,
    gens: Sequence[Hashable],
    op: Callable[[Hashable, Hashable], Hashable],
    *,
    cap: int | None = None,
    gen_names: Sequence[str] | None = None,
    name: str = "",
    label_fn: Callable[[Hashable], str] | None = None,
    marks: dict | None = None,
) -> Group:
    """Build the group generated by ``gens`` under ``op`` by BFS closure."""
    cap = default_order_cap() if cap is None else cap
    gens = list(gens)
    names = list(gen_names) if gen_names is not None else [f"g{i + 1}" for i in range(len(gens))]
    elements = [identity]
    index = {identity: 0}
    parent: list[tuple[int, int]] = [(-1, -1)]
    right = [[] for _ in gens]
    pos = 0
    while pos < len(elements):
        x = elements[pos]
        for gi, g in enumerate(gens):
            y = op(x, g)
            j = index.get(y)
            if j is None:
                j = len(elements)
                if j >= cap:
                    raise SizeLimitError(f"closure exceeds order cap {cap}")
                index[y] = j
                elements.append(y)
                parent.append((pos, gi))
            right[gi].append(j)
        pos += 1
    n = len(elements)
    rt = np.array(right, dtype=np.int32).reshape(len(gens), n)
    mul = np.empty((n, n), dtype=np.int32)
    mul[:, 0] = np.arange(n)
    words: list[list[int]] = [[]]
    for j in range(1, n):
        pj, gi = parent[j]
        mul[:, j] = rt[gi][mul[:, pj]]
        words.append(words[pj] + [gi])
    if label_fn is not None:
        labels = [label_fn(e) for e in elements]
    else:
        labels = [_word_label(w, names) for w in words]
    gen_ids = [index[g] for g in gens]
    return Group(mul, labels=labels, gens=gen_ids, name=name, elements=elements, marks=marks)


def group_from_table(mul: Sequence[Sequence[int]], name: str = "") -> Group:
    """Wrap an explicit table (identity must be element 0); axioms are checked."""
    G = Group(np.asarray(mul), name=name)
    n = G.order
    m = G.mul
    if m.min() < 0 or m.max() >= n:
        raise SpecError("table entries out of range")
    if not all(len(set(row)) == n for row in m.tolist()) or not all(len(set(col)) == n for col in m.T.tolist()):
        raise SpecError("table is not a Latin square")
    if not G.check_axioms():
        raise SpecError("table is not associative")
    return G


@dataclass(frozen=True)
class Permutation:
    """Bijection of {0, ..., d-1}; products compose left to right (``p*q`` applies p first)."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise SpecError(f"not a permutation: {imgs}")
        object.__setattr__(self, "images", imgs)

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        images = list(range(degree))
        for cyc in cycles:
            cyc = list(cyc)
            for i, a in enumerate(cyc):
                if not 0 <= a < degree:
                    raise SpecError(f"point {a} outside degree {degree}")
                images[a] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(images))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(tuple(other.images[i] for i in self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen, out = set(), []
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cyc = [start]
            seen.add(start)
            nxt = self.images[start]
            while nxt != start:
                cyc.append(nxt)
                seen.add(nxt)
                nxt = self.images[nxt]
            out.append(tuple(cyc))
        return out

    def __str__(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"


def group_from_permutations(
    gens: Sequence[Permutation], *, cap: int | None = None, name: str = ""
) -> Group:
    gens = [g if isinstance(g, Permutation) else Permutation(tuple(g)) for g in gens]
    if not gens:
        raise SpecError("at least one generator is required")
    degrees = {g.degree for g in gens}
    if len(degrees) != 1:
        raise SpecError(f"generators have different degrees: {sorted(degrees)}")
    ident = Permutation.identity(degrees.pop())
    return closure_group(
        ident, gens, Permutation.__mul__, cap=cap, name=name, label_fn=str,
        gen_names=[str(g) for g in gens],
    )


def direct_product(G: Group, H: Group, *, cap: int | None = None, name: str = "") -> Group:
    cap = default_order_cap() if cap is None else cap
    if G.order * H.order > cap:
        raise SizeLimitError(f"|G||H| = {G.order * H.order} exceeds order cap {cap}")
    mg, mh = G.mul, H.mul

    def op(x, y):
        return (int(mg[x[0], y[0]]), int(mh[x[1], y[1]]))

    gens = [(g, 0) for g in (G.gens or range(1, G.order))] + [(0, h) for h in (H.gens or range(1, H.order))]

    def label(e):
        return f"({G.labels[e[0]]},{H.labels[e[1]]})"

    return closure_group(
        (0, 0), gens, op, cap=cap, label_fn=label,
        name=name or f"{G.name or '?'} x {H.name or '?'}",
    )


def quotient(G: Group, normal_members: np.ndarray, name: str = "") -> Group:
    """Quotient by a normal subgroup given as a boolean mask.

    Cosets are represented by their minimal element id, and quotient ids are
    assigned in increasing order of representative.
    """
    nel = np.flatnonzero(normal_members)
    reps = G.mul[:, nel].min(axis=1)
    uniq = np.unique(reps)
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[uniq] = np.arange(len(uniq))
    qmul = pos[reps[G.mul[np.ix_(uniq, uniq)]]]
    labels = [G.labels[r] + "N" if r else "N" for r in uniq]
    return Group(qmul, labels=labels, name=name or f"{G.name or '?'}/N")
