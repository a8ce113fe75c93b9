"""Subgroups as bitsets, the full subgroup lattice, and structural operators.

A subgroup's ``members`` is a Python int whose bit ``i`` is set when element
``i`` belongs to it.  Vectorised work goes through boolean masks instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Union

import numpy as np

from .core import Group, prime_factors, prime_power
from .errors import DedekindError, LatticeTooLargeError, SpecError, VerificationError

DEFAULT_SUBGROUP_CAP = 200_000


def mask_to_bits(mask: np.ndarray) -> int:
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def bits_to_mask(bits: int, n: int) -> np.ndarray:
    raw = bits.to_bytes((n + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:n].astype(bool)


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: Group
    members: int
    gens: tuple[int, ...] = field(default=())

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and other.parent is self.parent and other.members == self.members

    def __hash__(self) -> int:
        return hash((id(self.parent), self.members))

    def __repr__(self) -> str:
        return f"<Subgroup of order {self.order} in {self.parent.name or '?'}>"

    def __contains__(self, x: int) -> bool:
        return bool((self.members >> int(x)) & 1)

    def __le__(self, other: "Subgroup") -> bool:
        return self.members & ~other.members == 0

    @cached_property
    def order(self) -> int:
        return self.members.bit_count()

    @cached_property
    def mask(self) -> np.ndarray:
        m = bits_to_mask(self.members, self.parent.order)
        m.setflags(write=False)
        return m

    @cached_property
    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A small generating set (the stored one, or a greedy one)."""
        if self.gens:
            return self.gens
        out: list[int] = []
        cur = 1
        G = self.parent
        for x in self.elements[np.argsort(-G.elem_order[self.elements], kind="stable")]:
            if not (cur >> int(x)) & 1:
                out.append(int(x))
                cur = generated_subgroup(G, out).members
                if cur == self.members:
                    break
        return tuple(out)

    @cached_property
    def is_abelian(self) -> bool:
        el = self.elements
        m = self.parent.mul
        return bool(np.array_equal(m[np.ix_(el, el)], m[np.ix_(el, el)].T))

    def describe(self) -> str:
        labels = self.parent.labels
        return "<" + ",".join(labels[g] for g in self.generators) + f">|{self.order}"


GroupOrSub = Union[Group, Subgroup]


def _as_sub(X: GroupOrSub) -> Subgroup:
    if isinstance(X, Subgroup):
        return X
    return whole(X)


def whole(G: Group) -> Subgroup:
    if "whole" not in G._cache:
        G._cache["whole"] = Subgroup(G, (1 << G.order) - 1, G.gens)
    return G._cache["whole"]


def trivial(G: Group) -> Subgroup:
    return Subgroup(G, 1, ())


def from_mask(G: Group, mask: np.ndarray, gens: Iterable[int] = ()) -> Subgroup:
    return Subgroup(G, mask_to_bits(mask), tuple(int(g) for g in gens))


def from_elements(G: Group, elems: Iterable[int], gens: Iterable[int] = ()) -> Subgroup:
    bits = 0
    for e in elems:
        bits |= 1 << int(e)
    return Subgroup(G, bits, tuple(int(g) for g in gens))


def closure_mask(G: Group, seed: Iterable[int]) -> np.ndarray:
    gens = np.unique(np.fromiter((int(s) for s in seed), dtype=np.int64))
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    frontier = np.array([0])
    while frontier.size and gens.size:
        prod = np.unique(G.mul[np.ix_(frontier, gens)].ravel())
        new = prod[~mask[prod]]
        mask[new] = True
        frontier = new
    return mask


def generated_subgroup(G: Group, seed: Iterable[int]) -> Subgroup:
    seed = [int(s) for s in seed]
    if any(not 0 <= s < G.order for s in seed):
        raise SpecError("seed element outside the group")
    return from_mask(G, closure_mask(G, seed), [s for s in dict.fromkeys(seed) if s != 0])


def join(H: Subgroup, K: Subgroup) -> Subgroup:
    return generated_subgroup(H.parent, H.generators + K.generators)


def intersection(H: Subgroup, K: Subgroup) -> Subgroup:
    return Subgroup(H.parent, H.members & K.members)


def is_subgroup_mask(G: Group, mask: np.ndarray) -> bool:
    el = np.flatnonzero(mask)
    if not mask[0] or el.size == 0:
        return False
    return bool(mask[G.mul[np.ix_(el, el)]].all())


# -- normality, normalizers, centralizers ------------------------------------


def normalizer_mask(G: Group, H: Subgroup) -> np.ndarray:
    conj = G.conj
    hm = H.mask
    N = np.ones(G.order, dtype=bool)
    for h in H.generators:
        N &= hm[conj[:, h]]
    return N


def is_normal(H: Subgroup) -> bool:
    return bool(normalizer_mask(H.parent, H).all())


def normalizer(H: Subgroup) -> Subgroup:
    return from_mask(H.parent, normalizer_mask(H.parent, H))


def centralizer_of_element(G: Group, g: int) -> Subgroup:
    return from_mask(G, G.mul[:, g] == G.mul[g, :])


def centralizer(G: Group, H: GroupOrSub) -> Subgroup:
    H = _as_sub(H)
    mask = np.ones(G.order, dtype=bool)
    for h in H.generators:
        mask &= G.mul[:, h] == G.mul[h, :]
    return from_mask(G, mask)


def center(G: Group) -> Subgroup:
    if "center" not in G._cache:
        G._cache["center"] = from_mask(G, (G.mul == G.mul.T).all(axis=1))
    return G._cache["center"]


def normal_closure(G: Group, H: GroupOrSub) -> Subgroup:
    H = _as_sub(H)
    conj = G.conj
    seed = np.unique(conj[:, list(H.generators)].ravel()) if H.generators else np.array([0])
    return generated_subgroup(G, seed.tolist())


def commutator_subgroup(G: Group, H: GroupOrSub, K: GroupOrSub | None = None) -> Subgroup:
    """``[H, K]`` (``[H, H]`` when K is omitted)."""
    H = _as_sub(H)
    K = H if K is None else _as_sub(K)
    m, inv = G.mul, G.inv
    x = H.elements[:, None]
    y = K.elements[None, :]
    comms = m[m[inv[x], inv[y]], m[x, y]]
    return generated_subgroup(G, np.unique(comms).tolist())


def derived_subgroup(X: GroupOrSub) -> Subgroup:
    H = _as_sub(X)
    return commutator_subgroup(H.parent, H)


def is_solvable(G: Group) -> bool:
    H = whole(G)
    while H.order > 1:
        D = derived_subgroup(H)
        if D.order == H.order:
            return False
        H = D
    return True


def _require_p_group(H: Subgroup, p: int) -> None:
    if H.order == 1:
        return
    pp = prime_power(H.order)
    if pp is None or pp[0] != p:
        raise SpecError(f"subgroup of order {H.order} is not a {p}-group")


def omega(X: GroupOrSub, p: int, i: int) -> Subgroup:
    """Subgroup generated by the elements of order at most p^i (trivial for i <= 0)."""
    H = _as_sub(X)
    _require_p_group(H, p)
    G = H.parent
    if i <= 0:
        return trivial(G)
    el = H.elements
    return generated_subgroup(G, el[G.elem_order[el] <= p ** i].tolist())


def agemo(X: GroupOrSub, p: int, i: int) -> Subgroup:
    """Subgroup generated by the p^i-th powers (the whole subgroup for i <= 0)."""
    H = _as_sub(X)
    _require_p_group(H, p)
    if i <= 0:
        return H
    G = H.parent
    return generated_subgroup(G, np.unique(G.power_table(p ** i)[H.elements]).tolist())


def frattini(X: GroupOrSub) -> Subgroup:
    H = _as_sub(X)
    p = prime_power(H.order)[0] if H.order > 1 else 2
    return join(agemo(H, p, 1), derived_subgroup(H))


def abelian_invariants(X: GroupOrSub) -> list[int]:
    """Invariant factors, largest first (so the first entry is the exponent)."""
    H = _as_sub(X)
    if not H.is_abelian:
        raise SpecError("abelian_invariants needs an abelian subgroup")
    G = H.parent
    n = H.order
    if n == 1:
        return []
    ords = G.elem_order[H.elements]
    per_prime: list[list[int]] = []
    for p in prime_factors(n):
        # |{x : x^(p^j) = 1}| = p^(sum_i min(e_i, j)); take successive differences
        logs = [0]
        j = 0
        while True:
            j += 1
            cnt = int(np.count_nonzero((p ** j) % ords == 0))
            pp = prime_power(cnt)
            logs.append(pp[1] if pp else 0)
            if logs[-1] == logs[-2]:
                break
        ge = [logs[k] - logs[k - 1] for k in range(1, len(logs))]  # factors of order >= p^k
        exps = []
        for k in range(len(ge)):
            nxt = ge[k + 1] if k + 1 < len(ge) else 0
            exps += [k + 1] * (ge[k] - nxt)
        per_prime.append(sorted((p ** e for e in exps), reverse=True))
    width = max(len(x) for x in per_prime)
    out = []
    for i in range(width):
        f = 1
        for x in per_prime:
            if i < len(x):
                f *= x[i]
        out.append(f)
    return out


# -- cyclic subgroups ----------------------------------------------------------


class CyclicData:
    """Per-element data about cyclic subgroups, computed with whole-table numpy ops.

    ``member[g]`` is the boolean mask of ``<g>``; ``normal[g]`` says whether
    ``<g>`` is normal; ``norm_order[g]`` is ``|N_G(<g>)|``; ``cent_order[g]`` is
    ``|C_G(g)|``.  ``reps`` lists one generator (the smallest id) per distinct
    cyclic subgroup, in order of first appearance.
    """

    def __init__(self, G: Group):
        n = G.order
        idx = np.arange(n)
        member = np.zeros((n, n), dtype=bool)
        cur = idx.copy()
        for _ in range(G.exponent):
            member[idx, cur] = True
            cur = G.mul[cur, idx]
        self.member = member
        hits = member[idx[None, :], G.conj]  # hits[x, g]: g^x in <g>
        self.normal = hits.all(axis=0)
        self.norm_order = hits.sum(axis=0)
        self.cent_order = (G.mul == G.mul.T).sum(axis=0)
        keys = np.packbits(member, axis=1, bitorder="little")
        seen: dict[bytes, int] = {}
        cid = np.empty(n, dtype=np.int64)
        reps: list[int] = []
        for g in range(n):
            k = keys[g].tobytes()
            c = seen.get(k)
            if c is None:
                c = seen[k] = len(reps)
                reps.append(g)
            cid[g] = c
        self.cyclic_id = cid
        self.reps = reps
        self.bits = [mask_to_bits(member[g]) for g in reps]


def cyclic_data(G: Group) -> CyclicData:
    if "cyclic" not in G._cache:
        G._cache["cyclic"] = CyclicData(G)
    return G._cache["cyclic"]


def cyclic_subgroup(G: Group, g: int) -> Subgroup:
    cd = cyclic_data(G)
    return Subgroup(G, cd.bits[cd.cyclic_id[g]], (int(g),) if g else ())


def cyclic_subgroups(G: Group) -> list[Subgroup]:
    cd = cyclic_data(G)
    return [Subgroup(G, b, (g,) if g else ()) for g, b in zip(cd.reps, cd.bits)]


def is_dedekind(G: Group) -> bool:
    """True iff every cyclic subgroup is normal (equivalently, every subgroup is)."""
    return bool(cyclic_data(G).normal.all())


# -- the lattice ---------------------------------------------------------------


class SubgroupLattice:
    """All subgroups of a group, sorted by (order, bitset).

    ``masks[i]`` is the boolean membership row of subgroup i, ``normal[i]``
    its normality flag and ``norm_order[i]`` the order of its normalizer.
    """

    def __init__(self, G: Group, masks: np.ndarray, gens: list[tuple[int, ...]], norm_masks: np.ndarray):
        self.group = G
        orders = masks.sum(axis=1)
        bits = [mask_to_bits(m) for m in masks]
        perm = sorted(range(len(bits)), key=lambda i: (int(orders[i]), bits[i]))
        self.masks = masks[perm]
        self.masks.setflags(write=False)
        self.orders = orders[perm]
        self.norm_masks = norm_masks[perm]
        self.norm_order = self.norm_masks.sum(axis=1)
        self.normal = self.norm_order == G.order
        self.subgroups = [Subgroup(G, bits[i], gens[i]) for i in perm]

    def __len__(self) -> int:
        return len(self.subgroups)

    def __iter__(self):
        return iter(self.subgroups)

    def index_of(self, H: Subgroup) -> int:
        if not hasattr(self, "_pos"):
            self._pos = {S.members: i for i, S in enumerate(self.subgroups)}
        return self._pos[H.members]

    def normal_subgroups(self) -> list[Subgroup]:
        return [S for S, f in zip(self.subgroups, self.normal) if f]

    def contained_in(self, H: Subgroup) -> list[int]:
        """Indices of lattice members contained in H."""
        inside = ~(self.masks & ~H.mask).any(axis=1)
        return np.flatnonzero(inside).tolist()

    def to_json(self) -> dict:
        return {
            "order": self.group.order,
            "subgroups": [S.elements.tolist() for S in self.subgroups],
            "normal": [bool(f) for f in self.normal],
        }


def _solvable_enumeration(G: Group, cap: int):
    """Every subgroup K > 1 of a solvable group has a normal subgroup H of prime
    index p, and then K = H<x> for any x in K \\ H.  So grow from the trivial
    subgroup by adjoining elements x of N(H) \\ H with x^p in H."""
    n = G.order
    primes = prime_factors(n)
    powtabs = {p: G.power_table(p) for p in primes}
    conj = G.conj
    mul = G.mul
    start = np.zeros(n, dtype=bool)
    start[0] = True
    masks = [start]
    gens: list[tuple[int, ...]] = [()]
    norms: list[np.ndarray] = []
    seen = {np.packbits(start).tobytes()}
    i = 0
    while i < len(masks):
        hm = masks[i]
        N = np.ones(n, dtype=bool)
        for h in gens[i]:
            N &= hm[conj[:, h]]
        norms.append(N)
        order = int(hm.sum())
        outside = N & ~hm
        hel = np.flatnonzero(hm)
        for p in primes:
            if n % (order * p):
                continue
            cand = outside & hm[powtabs[p]]
            while cand.any():
                x = int(np.argmax(cand))
                km = hm.copy()
                cur = hel
                for _ in range(p - 1):
                    cur = mul[cur, x]
                    km[cur] = True
                cand &= ~km
                key = np.packbits(km).tobytes()
                if key not in seen:
                    seen.add(key)
                    masks.append(km)
                    gens.append(gens[i] + (x,))
                    if len(masks) > cap:
                        raise LatticeTooLargeError(f"more than {cap} subgroups")
        i += 1
    return np.array(masks), gens, np.array(norms)


def _join_enumeration(G: Group, cap: int):
    """Cyclic subgroups, then joins with cyclic subgroups until nothing new appears."""
    n = G.order
    cyc = cyclic_subgroups(G)
    masks = [trivial(G).mask.copy()]
    gens: list[tuple[int, ...]] = [()]
    seen = {np.packbits(masks[0]).tobytes()}
    i = 0
    while i < len(masks):
        hm = masks[i]
        for C in cyc:
            g = C.gens[0] if C.gens else 0
            if hm[g]:
                continue
            km = closure_mask(G, gens[i] + (g,))
            key = np.packbits(km).tobytes()
            if key not in seen:
                seen.add(key)
                masks.append(km)
                gens.append(gens[i] + (g,))
                if len(masks) > cap:
                    raise LatticeTooLargeError(f"more than {cap} subgroups")
        i += 1
    norms = []
    for hm, gs in zip(masks, gens):
        N = np.ones(n, dtype=bool)
        for h in gs:
            N &= hm[G.conj[:, h]]
        norms.append(N)
    return np.array(masks), gens, np.array(norms)


def all_subgroups(G: Group, cap: int = DEFAULT_SUBGROUP_CAP, method: str = "auto") -> SubgroupLattice:
    """Complete subgroup lattice (cached per group).

    ``method`` is ``"extension"`` (solvable groups only), ``"join"``, or
    ``"auto"``, which picks the former whenever the group is solvable.
    """
    key = ("lattice", method)
    if key in G._cache:
        return G._cache[key]
    if method == "auto":
        method = "extension" if is_solvable(G) else "join"
    if method == "extension":
        if not is_solvable(G):
            raise SpecError("extension enumeration needs a solvable group")
        masks, gens, norms = _solvable_enumeration(G, cap)
    elif method == "join":
        masks, gens, norms = _join_enumeration(G, cap)
    else:
        raise SpecError(f"unknown lattice method {method!r}")
    lat = SubgroupLattice(G, masks, gens, norms)
    G._cache[key] = lat
    return lat


def r_of_g(G: Group, lattice: SubgroupLattice | None = None) -> Subgroup:
    """Intersection of all non-normal subgroups; cross-checked against the cyclic-only version."""
    cd = cyclic_data(G)
    if cd.normal.all():
        raise DedekindError("R(G) is undefined for a Dedekind group")
    cyc_bits = (1 << G.order) - 1
    for g, b in zip(cd.reps, cd.bits):
        if not cd.normal[g]:
            cyc_bits &= b
    lat = lattice if lattice is not None else all_subgroups(G)
    full = np.logical_and.reduce(lat.masks[~lat.normal], axis=0)
    full_bits = mask_to_bits(full)
    if full_bits != cyc_bits:
        raise VerificationError("R(G) differs from the intersection of non-normal cyclic subgroups")
    return Subgroup(G, full_bits)


def r_of_g_cyclic(G: Group) -> Subgroup:
    """Intersection of the non-normal cyclic subgroups only (no lattice needed)."""
    cd = cyclic_data(G)
    if cd.normal.all():
        raise DedekindError("R(G) is undefined for a Dedekind group")
    bits = (1 << G.order) - 1
    for g, b in zip(cd.reps, cd.bits):
        if not cd.normal[g]:
            bits &= b
    return Subgroup(G, bits)
