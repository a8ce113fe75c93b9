"""Structure recognition and the constructive search lemmas.

Everything here works on explicit tables: candidate subgroups come from the
subgroup lattice (scanned in lattice order, first witness wins), so results
are deterministic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .abelian import AbelianAutomorphism, AbelianPresentation
from .core import Group, group_from_table, prime_power
from .errors import HypothesisError, SpecError, VerificationError
from .lattice import (
    Subgroup,
    abelian_invariants,
    agemo,
    all_subgroups,
    cyclic_data,
    cyclic_subgroup,
    is_dedekind,
    is_normal,
    r_of_g,
    whole,
)
from .report import VerificationReport


def _log(p: int, n: int) -> int:
    e = 0
    while n > 1:
        if n % p:
            raise SpecError(f"{n} is not a power of {p}")
        n //= p
        e += 1
    return e


def _exponent(H: Subgroup) -> int:
    return int(np.lcm.reduce(H.parent.elem_order[H.elements]))


def _index_two_abelian(G: Group) -> list[Subgroup]:
    if G.order % 2:
        return []
    lat = all_subgroups(G)
    out = []
    for i in np.flatnonzero(lat.orders == G.order // 2):
        H = lat.subgroups[int(i)]
        if H.is_abelian:
            out.append(H)
    return out


def _first_outside(H: Subgroup) -> int:
    return int(np.flatnonzero(~H.mask)[0])


# -- quaternion-like groups --------------------------------------------------------


def is_generalized_quaternion(G: Group) -> int | None:
    """n with G of order 2^n >= 8 generalised quaternion, else None.

    Fingerprint: non-abelian, a unique involution, and a cyclic subgroup of
    index 2 inverted by some element outside it.
    """
    pp = prime_power(G.order)
    if pp is None or pp[0] != 2 or pp[1] < 3 or G.is_abelian:
        return None
    if int((G.elem_order == 2).sum()) != 1:
        return None
    big = np.flatnonzero(G.elem_order == G.order // 2)
    if len(big) == 0:
        return None
    a = int(big[0])
    C = cyclic_subgroup(G, a)
    outside = np.flatnonzero(~C.mask)
    if not (G.conj[outside, a] == G.inv[a]).any():
        return None
    return pp[1]


@dataclass(frozen=True)
class QGroupWitness:
    A: Subgroup
    b: int

    def describe(self) -> str:
        G = self.A.parent
        return f"A={self.A.describe()} b={G.labels[self.b]}"


def is_q_group(G: Group) -> QGroupWitness | None:
    """``G = <A, b>`` with A abelian of exponent > 2, b inverting A and b^2 of order 2."""
    for A in _index_two_abelian(G):
        if _exponent(A) <= 2:
            continue
        b = _first_outside(A)
        els = A.elements
        if not np.array_equal(G.conj[b, els], G.inv[els]):
            continue
        if G.elem_order[G.mul[b, b]] == 2:
            return QGroupWitness(A, b)
    return None


def _is_q8(H: Subgroup) -> bool:
    if H.order != 8 or H.is_abelian:
        return False
    return int((H.parent.elem_order[H.elements] == 2).sum()) == 1


def _normal_complements(G: Group, N: Subgroup, within: np.ndarray | None = None) -> list[Subgroup]:
    """Normal subgroups H with N x H internal, optionally inside a given mask."""
    lat = all_subgroups(G)
    target = (within.sum() if within is not None else G.order) // N.order
    rows = np.flatnonzero(lat.normal & (lat.orders == target))
    out = []
    for i in rows:
        m = lat.masks[i]
        if (m & N.mask).sum() != 1:
            continue
        if within is not None and (m & ~within).any():
            continue
        out.append(lat.subgroups[int(i)])
    return out


def _normal_q8s(G: Group) -> list[Subgroup]:
    lat = all_subgroups(G)
    return [lat.subgroups[int(i)] for i in np.flatnonzero(lat.normal & (lat.orders == 8))
            if _is_q8(lat.subgroups[int(i)])]


def _is_elementary(H: Subgroup) -> bool:
    return H.is_abelian and _exponent(H) <= 2


def blackburn_type(G: Group) -> tuple[str, str] | None:
    """("R1"|"R2"|"R3", evidence) for G matching one of the three types, else None.

    R1 and R2 are found as internal direct decompositions built from normal
    Q8 subgroups; R3 is a non-Dedekind Q-group.
    """
    pp = prime_power(G.order)
    if pp is None or pp[0] != 2:
        return None
    q8s = _normal_q8s(G)
    for Q in q8s:
        for H in _normal_complements(G, Q):
            if H.is_abelian:
                inv = abelian_invariants(H)
                if inv and inv[0] == 4 and all(x == 2 for x in inv[1:]):
                    return "R1", f"Q8={Q.describe()} x {H.describe()} invariants {inv}"
            else:
                for Q2 in q8s:
                    if Q2 == Q or (Q2.mask & ~H.mask).any():
                        continue
                    for E in _normal_complements(G, Q2, within=H.mask):
                        if _is_elementary(E):
                            return "R2", f"Q8={Q.describe()} x Q8={Q2.describe()} x E={E.describe()}"
    if not is_dedekind(G):
        w = is_q_group(G)
        if w is not None:
            return "R3", f"Q-group {w.describe()}"
    return None


def blackburn_check(G: Group, group_id: str = "-") -> VerificationReport:
    """If R(G) != 1 then p = 2, |R(G)| = 2 and G is of type R1, R2 or R3."""
    rep = VerificationReport()
    pp = prime_power(G.order)
    if pp is None:
        rep.skip(group_id, "blackburn_r_order", "not a p-group")
        return rep
    if is_dedekind(G):
        rep.skip(group_id, "blackburn_r_order", "Dedekind group")
        return rep
    try:
        R = r_of_g(G)
    except VerificationError as exc:
        rep.add(group_id, "r_cyclic_agrees", "intersection over cyclic = over all", str(exc), False)
        return rep
    rep.add(group_id, "r_cyclic_agrees", "intersection over cyclic = over all", f"|R|={R.order}", True)
    if R.order == 1:
        rep.add(group_id, "blackburn_r_order", "R(G)=1 or (p=2, |R(G)|=2)", "R(G)=1", True)
        return rep
    ok = pp[0] == 2 and R.order == 2
    rep.add(group_id, "blackburn_r_order", "p=2 and |R(G)|=2", f"p={pp[0]} |R(G)|={R.order}", ok,
            f"R={R.describe()}")
    found = blackburn_type(G)
    rep.add(group_id, "blackburn_type", "R1|R2|R3", found[0] if found else "none", found is not None,
            found[1] if found else f"R={R.describe()}")
    return rep


# -- the two families ------------------------------------------------------------


@dataclass(frozen=True)
class F1Params:
    A: Subgroup
    b: int
    n: int
    s: int
    s_kind: str
    invariants: tuple[int, ...]
    bsq_in_a2: bool
    outside_involution: bool

    @property
    def rank(self) -> int:
        return len(self.invariants)

    def expected(self) -> dict[str, int]:
        """Closed-form mni, mni*, mci* for a non-Dedekind member."""
        r = self.rank
        mn = 2 ** r if self.bsq_in_a2 else 2 ** (r - 1)
        mc = 2 ** r if self.outside_involution else 2 ** (r - 1)
        return {"mni": mn, "mni_star": mn, "mci_star": mc}

    def describe(self) -> str:
        G = self.A.parent
        return (f"A={list(self.invariants)} s={self.s_kind} b={G.labels[self.b]} "
                f"b2={G.labels[G.mul[self.b, self.b]]}")


@dataclass(frozen=True)
class F2Params:
    A: Subgroup
    b: int
    a1: int
    z: int
    astar: Subgroup
    n: int
    s: int
    s_kind: str
    astar_elementary: bool
    bsq_or_bsqz_in_a2: bool
    outside_involution: bool

    @property
    def m(self) -> int:
        return _log(2, self.astar.order)

    def expected(self) -> dict[str, int | None]:
        """Closed forms; the normalizer values only apply for n >= 3 (None otherwise)."""
        m = self.m
        mc = 2 ** (m + 1) if self.astar_elementary and self.outside_involution else 2 ** m
        mn = 2 ** (m + 1) if self.astar_elementary and self.bsq_or_bsqz_in_a2 else 2 ** m
        if self.n < 3:
            mn = None
        return {"mni": mn, "mni_star": mn, "mci_star": mc}

    def describe(self) -> str:
        G = self.A.parent
        return (f"A*={abelian_invariants(self.astar)} n={self.n} s={self.s_kind} "
                f"a1={G.labels[self.a1]} z={G.labels[self.z]} b={G.labels[self.b]}")


def _s_candidates(n: int) -> list[tuple[str, int]]:
    out = [("neg_one", -1)]
    if n >= 3:
        out.append(("neg_one_plus", -1 + 2 ** (n - 1)))
    return out


def _outside_involution(G: Group, A: Subgroup) -> bool:
    return bool((G.elem_order[~A.mask] == 2).any())


def _in_omega1(G: Group, x: int) -> bool:
    return G.elem_order[x] <= 2


def is_in_f1(G: Group) -> F1Params | None:
    """Recover (A, b, s) with ``a^b = a^s`` on all of A and ``b^2`` in Omega_1(A)."""
    pp = prime_power(G.order)
    if pp is None or pp[0] != 2 or G.order < 2:
        return None
    for A in _index_two_abelian(G):
        els = A.elements
        e = _exponent(A)
        n = _log(2, e)
        b = _first_outside(A)
        bsq = int(G.mul[b, b])
        if not _in_omega1(G, bsq):
            continue
        for kind, s in _s_candidates(n):
            if np.array_equal(G.conj[b, els], G.power_table(s % e)[els]):
                a2 = agemo(A, 2, 1)
                return F1Params(A, b, n, s, kind, tuple(abelian_invariants(A)), bool(a2.mask[bsq]),
                                _outside_involution(G, A))
    return None


def is_in_f2(G: Group) -> F2Params | None:
    """Recover ``A = <a1> x A*`` with ``a1^b = a1^s z`` and ``(a*)^b = (a*)^s``."""
    pp = prime_power(G.order)
    if pp is None or pp[0] != 2 or G.order < 8:
        return None
    lat = all_subgroups(G)
    for A in _index_two_abelian(G):
        els = A.elements
        e = _exponent(A)
        N = _log(2, e)
        b = _first_outside(A)
        bsq = int(G.mul[b, b])
        if not _in_omega1(G, bsq):
            continue
        image_b = G.conj[b]
        for kind, s in _s_candidates(N):
            # delta(a) = a^b a^(-s) is a homomorphism A -> A
            delta = G.mul[image_b, G.power_table((-s) % e)]
            dv = delta[els]
            img = np.unique(dv)
            if len(img) != 2:
                continue
            z = int(img[img != 0][0])
            if G.elem_order[z] != 2:
                continue
            kernel = np.zeros(G.order, dtype=bool)
            kernel[els[dv == 0]] = True
            found = _split_off_a1(G, lat, A, kernel, delta, z, kind, e)
            if found is None:
                continue
            a1, astar = found
            n = _log(2, int(G.elem_order[a1]))
            a2 = agemo(A, 2, 1).mask
            return F2Params(
                A, b, a1, z, astar, n, s, kind,
                _is_elementary(astar),
                bool(a2[bsq] or a2[G.mul[bsq, z]]),
                _outside_involution(G, A),
            )
    return None


def _split_off_a1(G, lat, A, kernel, delta, z, kind, e):
    cd = cyclic_data(G)
    candidates = [g for g in cd.reps if A.mask[g] and not kernel[g]]
    inside_kernel = ~(lat.masks & ~kernel).any(axis=1)
    has_z = lat.masks[:, z]
    for a1 in candidates:
        o = int(G.elem_order[a1])
        if kind == "neg_one" and o < 4:
            continue
        if kind == "neg_one_plus" and o != e:
            continue
        if delta[a1] != z:
            continue
        inv = int(np.flatnonzero(cd.member[a1] & (G.elem_order == 2))[0])
        ok = inside_kernel & has_z & (lat.orders == A.order // o) & ~lat.masks[:, inv]
        rows = np.flatnonzero(ok)
        if len(rows):
            return a1, lat.subgroups[int(rows[0])]
    return None


# -- splitting elements -----------------------------------------------------------


def find_splitting_element(G: Group, K: Subgroup, g: int, t: int) -> int:
    """Some ``h`` in ``gK`` with ``h^(p^t) = 1`` and ``<h> & K = 1``.

    Preconditions (odd p, K normal cyclic of order p^s, 1 <= t <= s and
    ``g^(p^t)`` in ``K^(p^t)``) raise :class:`HypothesisError` when violated.
    A failed scan under valid hypotheses raises :class:`VerificationError`.
    """
    pp = prime_power(G.order)
    if pp is None:
        raise HypothesisError("G is not a p-group")
    p = pp[0]
    if p == 2:
        raise HypothesisError("the prime must be odd")
    if not is_normal(K):
        raise HypothesisError("K is not normal")
    if not (G.elem_order[K.elements] == K.order).any():
        raise HypothesisError("K is not cyclic")
    s = _log(p, K.order)
    if t < 1:
        raise HypothesisError("t must be positive")
    if t > s:
        raise HypothesisError(f"t={t} exceeds s={s}; the restriction t <= s is required")
    q = p ** t
    if not agemo(K, p, t).mask[G.power(g, q)]:
        raise HypothesisError(f"g^{q} is not in K^{q}")
    cd = cyclic_data(G)
    for k in K.elements:
        h = int(G.mul[g, k])
        if G.power(h, q) == 0 and int((cd.member[h] & K.mask).sum()) == 1:
            return h
    raise VerificationError(f"no splitting element in the coset of g={G.labels[g]}")


# -- automorphisms of C_{p^n} x (C_p)^m ------------------------------------------


def _aut_order(alpha: AbelianAutomorphism, limit: int) -> int:
    cur = alpha
    for k in range(1, limit + 1):
        if cur.is_identity():
            return k
        cur = alpha.compose(cur)
    raise VerificationError("automorphism order exceeds the group order bound")


def _is_p_power(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def verify_aut_b_lemma(p: int, n: int, m: int, *, cap: int = 625) -> VerificationReport:
    """Brute-force the p-automorphisms of ``B = C_{p^n} x (C_p)^m`` fixing the second factor.

    Checks that they form an abelian subgroup Q with invariants
    ``[p^(n-1)] + [p]*m`` that splits as ``<phi1> x Q*``, where
    ``phi1: b1 -> b1^(1+p)`` and Q* (trivial on B/B*) is isomorphic to B*.
    """
    gid = f"autB(p={p},n={n},m={m})"
    claim = "aut_b_structure"
    if p == 2 or prime_power(p) != (p, 1):
        raise SpecError("p must be an odd prime")
    if n < 2 or m < 1:
        raise SpecError("need n >= 2 and m >= 1")
    pres = AbelianPresentation((p ** n,) + (p,) * m)
    if pres.order > cap:
        raise SpecError(f"|B| = {pres.order} exceeds the enumeration cap {cap}")
    rep = VerificationReport()
    vecs = list(pres.vectors())
    top = [v for v in vecs if pres.vector_order(v) == p ** n]
    low = [v for v in vecs if pres.vector_order(v) == p]
    auts = []
    for imgs in itertools.product(top, *([low] * m)):
        alpha = AbelianAutomorphism(pres, imgs)
        if alpha.is_homomorphism() and alpha.is_bijective():
            auts.append(alpha)
    rep.add(gid, claim, "Aut(B) enumerated", f"|Aut(B)|={len(auts)}", len(auts) > 0)
    fixed = tuple(pres.basis(i) for i in range(1, m + 1))
    S = [a for a in auts if a.images[1:] == fixed]
    Q = [a for a in S if _is_p_power(_aut_order(a, len(auts)), p)]
    Q = sorted(Q, key=lambda a: a.images)
    index = {a.images: i for i, a in enumerate(Q)}
    closed = all(a.compose(b).images in index for a in Q for b in Q)
    rep.add(gid, claim, "Q closed under composition", f"|Q|={len(Q)} closed={closed}", closed)
    if not closed:
        return rep
    table = [[index[Q[j].compose(Q[i]).images] for j in range(len(Q))] for i in range(len(Q))]
    # table[i][j] = "apply i then j", the same left-to-right convention as permutations
    ident = index[AbelianAutomorphism.identity(pres).images]
    perm = [ident] + [i for i in range(len(Q)) if i != ident]
    pos = {old: new for new, old in enumerate(perm)}
    QG = group_from_table([[pos[table[perm[i]][perm[j]]] for j in range(len(Q))] for i in range(len(Q))])
    rep.add(gid, claim, "Q abelian", f"abelian={QG.is_abelian}", QG.is_abelian)
    want = sorted([p ** (n - 1)] + [p] * m, reverse=True)
    got = abelian_invariants(whole(QG)) if QG.is_abelian else []
    rep.add(gid, claim, f"invariants {want}", f"invariants {got}", got == want)
    phi1 = AbelianAutomorphism(pres, (pres.scale(pres.basis(0), 1 + p),) + fixed)
    in_q = phi1.images in index
    o1 = _aut_order(phi1, len(auts))
    rep.add(gid, claim, f"phi1 in Q of order {p ** (n - 1)}", f"in_Q={in_q} order={o1}",
            in_q and o1 == p ** (n - 1))
    qstar = [a for a in Q if a.images[0][0] % p ** n == 1]
    qs_orders = {_aut_order(a, len(auts)) for a in qstar}
    iso = len(qstar) == p ** m and qs_orders <= {1, p}
    rep.add(gid, claim, f"Q* elementary abelian of order {p ** m}",
            f"|Q*|={len(qstar)} orders={sorted(qs_orders)}", iso)
    powers = {(phi1 ** k).images for k in range(o1)}
    meet = powers & {a.images for a in qstar}
    commute = all(phi1.compose(a) == a.compose(phi1) for a in qstar)
    direct = meet == {AbelianAutomorphism.identity(pres).images} and o1 * len(qstar) == len(Q) and commute
    rep.add(gid, claim, "Q = <phi1> x Q*", f"meet={len(meet)} product={o1 * len(qstar)} |Q|={len(Q)}",
            direct)
    return rep


# -- binomial valuations --------------------------------------------------------------


def _digit_sum(n: int, p: int) -> int:
    s = 0
    while n:
        n, d = divmod(n, p)
        s += d
    return s


def factorial_valuation(n: int, p: int) -> int:
    """Legendre: v_p(n!) = (n - digit sum of n in base p) / (p - 1)."""
    return (n - _digit_sum(n, p)) // (p - 1)


def carry_count(p: int, a: int, b: int) -> int:
    """Number of carries when adding a and b in base p."""
    carries = carry = 0
    while a or b or carry:
        a, da = divmod(a, p)
        b, db = divmod(b, p)
        carry = 1 if da + db + carry >= p else 0
        carries += carry
    return carries


def valuation(p: int, x: int) -> int:
    if x == 0:
        raise SpecError("valuation of 0 is undefined")
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def kummer_valuation(p: int, m: int, i: int) -> int:
    """v_p of binomial(p^m, i) via Legendre's formula, with the two divisibility bounds asserted."""
    if prime_power(p) != (p, 1):
        raise SpecError(f"p={p} is not prime")
    N = p ** m
    if not 1 <= i <= N:
        raise SpecError(f"i={i} outside [1, {N}]")
    v = factorial_valuation(N, p) - factorial_valuation(i, p) - factorial_valuation(N - i, p)
    ell = valuation(p, i)
    if v < m - ell:
        raise VerificationError(f"v={v} < m - l = {m - ell} for p={p}, m={m}, i={i}")
    if p > 2 and 2 <= i <= m + 1 and v < m - i + 2:
        raise VerificationError(f"v={v} < m - i + 2 = {m - i + 2} for p={p}, m={m}, i={i}")
    return v


# -- tags ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StructureTag:
    tag: str
    params: dict = field(default_factory=dict)
    evidence: str = ""

    def __str__(self) -> str:
        if not self.params:
            return self.tag
        inner = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.tag}({inner})"


def structure_tags(G: Group) -> list[StructureTag]:
    tags: list[StructureTag] = []
    ded = is_dedekind(G)
    if ded:
        tags.append(StructureTag("dedekind", evidence="every cyclic subgroup is normal"))
        if not G.is_abelian:
            tags.append(StructureTag("hamiltonian", evidence="non-abelian Dedekind"))
    n = is_generalized_quaternion(G)
    if n is not None:
        tags.append(StructureTag("generalized_quaternion", {"n": n}, "unique involution, inverted index-2 cycle"))
    w = is_q_group(G)
    if w is not None:
        tags.append(StructureTag("q_group", evidence=w.describe()))
    pp = prime_power(G.order)
    if pp and pp[0] == 2 and not ded:
        bt = blackburn_type(G)
        if bt is not None and r_of_g(G).order == 2:
            tags.append(StructureTag(f"blackburn_{bt[0].lower()}", evidence=bt[1]))
    if pp and pp[0] == 2:
        f1 = is_in_f1(G)
        if f1 is not None:
            tags.append(StructureTag("f1_member", {"A": list(f1.invariants), "s": f1.s_kind}, f1.describe()))
        f2 = is_in_f2(G)
        if f2 is not None:
            tags.append(StructureTag("f2_member", {"n": f2.n, "m": f2.m, "s": f2.s_kind}, f2.describe()))
    return tags or [StructureTag("none")]

