"""Abelian presentations, their automorphisms, and cyclic extensions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Group, SizeLimitError, closure_group, default_order_cap
from .errors import ExtensionError, SpecError

Vector = tuple[int, ...]


@dataclass(frozen=True)
class AbelianPresentation:
    """Direct product of cyclic groups ``C_{m1} x ... x C_{mr}`` with basis a1..ar."""

    factor_orders: tuple[int, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        orders = tuple(int(m) for m in self.factor_orders)
        if any(m < 2 for m in orders):
            raise SpecError(f"factor orders must be >= 2, got {orders}")
        object.__setattr__(self, "factor_orders", orders)
        labels = tuple(self.labels)
        if not labels:
            labels = ("a",) if len(orders) == 1 else tuple(f"a{i + 1}" for i in range(len(orders)))
        if len(labels) != len(orders):
            raise SpecError("one label per factor is required")
        object.__setattr__(self, "labels", labels)

    @property
    def rank(self) -> int:
        return len(self.factor_orders)

    @property
    def order(self) -> int:
        return int(np.prod(self.factor_orders, dtype=object)) if self.factor_orders else 1

    @property
    def zero(self) -> Vector:
        return (0,) * self.rank

    def reduce(self, v: Sequence[int]) -> Vector:
        if len(v) != self.rank:
            raise SpecError(f"vector {tuple(v)} has wrong length for rank {self.rank}")
        return tuple(int(x) % m for x, m in zip(v, self.factor_orders))

    def add(self, u: Vector, v: Vector) -> Vector:
        return tuple((a + b) % m for a, b, m in zip(u, v, self.factor_orders))

    def scale(self, v: Vector, k: int) -> Vector:
        return tuple((a * k) % m for a, m in zip(v, self.factor_orders))

    def basis(self, i: int) -> Vector:
        return tuple(1 if j == i else 0 for j in range(self.rank))

    def vectors(self):
        return itertools.product(*(range(m) for m in self.factor_orders))

    def omega1_vector(self, coeffs: Sequence[int]) -> Vector:
        """Element of the canonical Omega_1 basis ``{a_i^(m_i/2)}`` picked by a 0/1 vector."""
        if len(coeffs) != self.rank or any(c not in (0, 1) for c in coeffs):
            raise SpecError(f"expected a 0/1 vector of length {self.rank}, got {list(coeffs)}")
        if any(m % 2 for m in self.factor_orders):
            raise SpecError("Omega_1 basis vectors need even factor orders")
        return tuple(c * (m // 2) for c, m in zip(coeffs, self.factor_orders))

    def vector_order(self, v: Vector) -> int:
        o = 1
        for a, m in zip(v, self.factor_orders):
            o = np.lcm(o, m // np.gcd(a, m))
        return int(o)


def abelian_group(pres: AbelianPresentation, *, cap: int | None = None, name: str = "") -> Group:
    cap = default_order_cap() if cap is None else cap
    if pres.order > cap:
        raise SizeLimitError(f"order {pres.order} exceeds order cap {cap}")
    gens = [pres.basis(i) for i in range(pres.rank)]
    return closure_group(
        pres.zero, gens, pres.add, cap=cap, gen_names=list(pres.labels),
        name=name or " x ".join(f"C{m}" for m in pres.factor_orders) or "1",
        label_fn=lambda v: _vector_label(v, pres), marks={"presentation": pres},
    )


def _vector_label(v: Vector, pres: AbelianPresentation) -> str:
    parts = [lab if e == 1 else f"{lab}^{e}" for lab, e in zip(pres.labels, v) if e]
    sep = "" if all(len(l) == 1 for l in pres.labels) else "*"
    return sep.join(parts) or "1"


@dataclass(frozen=True)
class AbelianAutomorphism:
    """Endomorphism of a presented abelian group fixed by the images of the basis."""

    parent: AbelianPresentation
    images: tuple[Vector, ...]

    def __post_init__(self):
        pres = self.parent
        if len(self.images) != pres.rank:
            raise SpecError("one image per basis element is required")
        imgs = tuple(pres.reduce(v) for v in self.images)
        object.__setattr__(self, "images", imgs)

    @classmethod
    def power_map(cls, pres: AbelianPresentation, s: int) -> "AbelianAutomorphism":
        return cls(pres, tuple(pres.scale(pres.basis(i), s) for i in range(pres.rank)))

    @classmethod
    def identity(cls, pres: AbelianPresentation) -> "AbelianAutomorphism":
        return cls.power_map(pres, 1)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.images, dtype=np.int64).reshape(self.parent.rank, self.parent.rank)

    def __call__(self, v: Sequence[int]) -> Vector:
        pres = self.parent
        out = [0] * pres.rank
        for coef, img in zip(v, self.images):
            if coef:
                for j, x in enumerate(img):
                    out[j] += coef * x
        return pres.reduce(out)

    def compose(self, other: "AbelianAutomorphism") -> "AbelianAutomorphism":
        """``self o other`` (apply other first)."""
        return AbelianAutomorphism(self.parent, tuple(self(img) for img in other.images))

    def __pow__(self, k: int) -> "AbelianAutomorphism":
        if k < 0:
            raise SpecError("negative powers are not supported")
        out = AbelianAutomorphism.identity(self.parent)
        for _ in range(k):
            out = self.compose(out)
        return out

    def is_identity(self) -> bool:
        return self == AbelianAutomorphism.identity(self.parent)

    def is_homomorphism(self) -> bool:
        pres = self.parent
        return all(pres.scale(img, m) == pres.zero for img, m in zip(self.images, pres.factor_orders))

    def is_bijective(self) -> bool:
        pres = self.parent
        seen = set()
        for v in pres.vectors():
            seen.add(self(v))
        return len(seen) == pres.order


def check_automorphism(alpha: AbelianAutomorphism) -> None:
    if not alpha.is_homomorphism():
        raise ExtensionError("map does not respect the factor orders")
    if not alpha.is_bijective():
        raise ExtensionError("map is not bijective")


def cyclic_extension(
    pres: AbelianPresentation,
    alpha: AbelianAutomorphism,
    m: int,
    a0: Sequence[int],
    *,
    cap: int | None = None,
    name: str = "",
    b_label: str = "b",
) -> Group:
    """Extension ``G = <A, b>`` with ``a^b = alpha(a)``, ``b^m = a0`` and ``G/A`` cyclic of order m.

    Elements are pairs ``(j, a)`` standing for ``b^j a``.
    """
    cap = default_order_cap() if cap is None else cap
    if m < 1:
        raise ExtensionError("m must be positive")
    if alpha.parent != pres:
        raise ExtensionError("automorphism belongs to a different presentation")
    a0 = pres.reduce(a0)
    if m * pres.order > cap:
        raise SizeLimitError(f"order {m * pres.order} exceeds order cap {cap}")
    check_automorphism(alpha)
    if not (alpha ** m).is_identity():
        raise ExtensionError(f"alpha^{m} is not the identity")
    if alpha(a0) != a0:
        raise ExtensionError("alpha does not fix b^m")

    powers = [alpha ** j for j in range(m)]

    def op(x, y):
        i, u = x
        j, v = y
        w = pres.add(powers[j](u), v)
        k = i + j
        if k >= m:
            k -= m
            w = pres.add(w, a0)
        return (k, w)

    gens = [(0, pres.basis(i)) for i in range(pres.rank)]
    names = list(pres.labels)
    if m > 1:
        gens.append((1, pres.zero))
        names.append(b_label)

    def label(e):
        j, v = e
        head = "" if j == 0 else (b_label if j == 1 else f"{b_label}^{j}")
        tail = _vector_label(v, pres) if any(v) else ""
        if not head and not tail:
            return "1"
        return head + tail if len(b_label) == 1 and all(len(l) == 1 for l in pres.labels) else "*".join(
            x for x in (head, tail) if x)

    G = closure_group((0, pres.zero), gens, op, cap=cap, gen_names=names, name=name, label_fn=label)
    if G.order != m * pres.order:
        raise ExtensionError(f"closure has order {G.order}, expected {m * pres.order}")
    idx = G.index
    G.marks.update(
        presentation=pres,
        alpha=alpha,
        m=m,
        a0=a0,
        A=tuple(sorted(i for e, i in idx.items() if e[0] == 0)),
        basis=tuple(idx[(0, pres.basis(i))] for i in range(pres.rank)),
        b=idx[(1 % m, pres.zero)],
    )
    return G


def element_of(G: Group, v: Sequence[int], j: int = 0) -> int:
    """Id of ``b^j a_v`` in a group built by :func:`cyclic_extension` or :func:`abelian_group`."""
    pres: AbelianPresentation = G.marks["presentation"]
    v = pres.reduce(v)
    if "m" in G.marks:
        return G.index[(j % G.marks["m"], v)]
    return G.index[v]
