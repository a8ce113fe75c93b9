"""Declarative group specs and the constructors behind them.

A :class:`FamilySpec` is a small JSON-able record; :func:`build_group` turns
it into a :class:`~pgi.core.Group`.  Identical specs give bit-identical
Cayley tables.
"""

from __future__ import annotations

import hashlib
import json
import re
from typing import Any, Mapping

from .abelian import AbelianAutomorphism, AbelianPresentation, abelian_group, cyclic_extension
from .core import Group, Permutation, direct_product, group_from_permutations, is_prime
from .errors import ExtensionError, SpecError

SCHEMA_VERSION = 1
KINDS = ("f1", "f2", "sharpness_example", "cyclic", "direct_product", "perm_group", "cyclic_extension")
S_VALUES = ("neg_one", "neg_one_plus")


def s_exponent(s: str, n: int) -> int:
    """The integer s acting as ``a -> a^s``: -1 or -1 + 2^(n-1)."""
    if s == "neg_one":
        return -1
    if s == "neg_one_plus":
        return -1 + 2 ** (n - 1)
    raise SpecError(f"s must be one of {S_VALUES}, got {s!r}")


def parse_s(text: str) -> str:
    t = str(text).replace(" ", "").lower()
    if t in ("neg_one", "-1"):
        return "neg_one"
    if t in ("neg_one_plus", "-1+2^(n-1)", "-1+2^{n-1}", "-1+2**(n-1)"):
        return "neg_one_plus"
    raise SpecError(f"cannot parse s={text!r}; use neg_one or neg_one_plus")


def _int(d: Mapping, key: str, lo: int | None = None) -> int:
    if key not in d:
        raise SpecError(f"missing field {key!r}")
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise SpecError(f"field {key!r} must be an integer, got {v!r}")
    if lo is not None and v < lo:
        raise SpecError(f"field {key!r} must be >= {lo}, got {v}")
    return v


def _int_list(d: Mapping, key: str, lo: int | None = None, default=None) -> list[int]:
    if key not in d:
        if default is not None:
            return list(default)
        raise SpecError(f"missing field {key!r}")
    v = d[key]
    if not isinstance(v, list) or any(isinstance(x, bool) or not isinstance(x, int) for x in v):
        raise SpecError(f"field {key!r} must be a list of integers, got {v!r}")
    if lo is not None and any(x < lo for x in v):
        raise SpecError(f"entries of {key!r} must be >= {lo}, got {v}")
    return list(v)


def _bits(d: Mapping, key: str, length: int) -> list[int]:
    v = _int_list(d, key)
    if len(v) != length or any(x not in (0, 1) for x in v):
        raise SpecError(f"field {key!r} must be a 0/1 vector of length {length}, got {v}")
    return v


_ALLOWED = {
    "f1": {"n", "extra_factors", "s", "bsq"},
    "f2": {"n", "astar_factors", "s", "z", "bsq"},
    "sharpness_example": {"p", "k"},
    "cyclic": {"orders"},
    "direct_product": {"factors"},
    "perm_group": {"generators"},
    "cyclic_extension": {"orders", "alpha", "m", "a0"},
}


class FamilySpec:
    """Validated, canonical group description.  Compare/hash by canonical JSON."""

    def __init__(self, kind: str, **params: Any):
        if kind not in KINDS:
            raise SpecError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
        extra = set(params) - _ALLOWED[kind]
        if extra:
            raise SpecError(f"unexpected field(s) for {kind}: {', '.join(sorted(extra))}")
        self.kind = kind
        self.params = self._validate(kind, dict(params))

    @staticmethod
    def _validate(kind: str, d: dict) -> dict:
        if kind == "f1":
            n = _int(d, "n", 1)
            extra = _int_list(d, "extra_factors", 1, default=[])
            if any(f > n for f in extra):
                raise SpecError(f"extra factor exponents must be <= n={n}, got {extra}")
            if extra != sorted(extra, reverse=True):
                raise SpecError("extra_factors must be non-increasing")
            s = parse_s(d.get("s", "neg_one"))
            if s == "neg_one_plus" and n < 3:
                raise SpecError(f"s=neg_one_plus needs n >= 3, got n={n}")
            bsq = _bits(d, "bsq", 1 + len(extra))
            return {"n": n, "extra_factors": extra, "s": s, "bsq": bsq}
        if kind == "f2":
            n = _int(d, "n", 1)
            astar = _int_list(d, "astar_factors", 1)
            if not astar:
                raise SpecError("astar_factors must be non-empty")
            s = parse_s(d.get("s", "neg_one"))
            if s == "neg_one" and n < 2:
                raise SpecError(f"s=neg_one needs n >= 2 in f2, got n={n}")
            if s == "neg_one_plus" and n < 3:
                raise SpecError(f"s=neg_one_plus needs n >= 3, got n={n}")
            z = _bits(d, "z", len(astar))
            if not any(z):
                raise SpecError("z must not be the identity")
            bsq = _bits(d, "bsq", 1 + len(astar))
            return {"n": n, "astar_factors": astar, "s": s, "z": z, "bsq": bsq}
        if kind == "sharpness_example":
            p = _int(d, "p", 2)
            if not is_prime(p):
                raise SpecError(f"p must be prime, got {p}")
            return {"p": p, "k": _int(d, "k", 1)}
        if kind == "cyclic":
            orders = _int_list(d, "orders", 2)
            if not orders:
                raise SpecError("orders must be non-empty")
            return {"orders": orders}
        if kind == "direct_product":
            facs = d.get("factors")
            if not isinstance(facs, list) or len(facs) < 2:
                raise SpecError("factors must be a list of at least two specs")
            return {"factors": [FamilySpec.from_dict(f).to_dict() if not isinstance(f, FamilySpec)
                                else f.to_dict() for f in facs]}
        if kind == "perm_group":
            gens = d.get("generators")
            if not isinstance(gens, list) or not gens:
                raise SpecError("generators must be a non-empty list of image lists")
            out = []
            for g in gens:
                if not isinstance(g, list):
                    raise SpecError(f"generator {g!r} is not a list")
                Permutation(tuple(g))
                out.append([int(x) for x in g])
            return {"generators": out}
        if kind == "cyclic_extension":
            orders = _int_list(d, "orders", 2)
            r = len(orders)
            alpha = d.get("alpha")
            if not isinstance(alpha, list) or len(alpha) != r:
                raise SpecError(f"alpha must list {r} image vectors")
            for row in alpha:
                if not isinstance(row, list) or len(row) != r or any(not isinstance(x, int) for x in row):
                    raise SpecError(f"alpha row {row!r} must be {r} integers")
            m = _int(d, "m", 1)
            a0 = _int_list(d, "a0", default=[0] * r)
            if len(a0) != r:
                raise SpecError(f"a0 must have length {r}")
            return {"orders": orders, "alpha": [list(map(int, row)) for row in alpha], "m": m, "a0": a0}
        raise AssertionError(kind)

    def to_dict(self) -> dict:
        return {"v": SCHEMA_VERSION, "kind": self.kind, **self.params}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_dict(cls, d: Mapping) -> "FamilySpec":
        if not isinstance(d, Mapping):
            raise SpecError("spec must be a JSON object")
        d = dict(d)
        v = d.pop("v", SCHEMA_VERSION)
        if v != SCHEMA_VERSION:
            raise SpecError(f"unsupported schema version {v!r}")
        if "kind" not in d:
            raise SpecError("missing field 'kind'")
        kind = d.pop("kind")
        return cls(kind, **d)

    @classmethod
    def from_json(cls, text: str) -> "FamilySpec":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
        return cls.from_dict(d)

    @property
    def group_id(self) -> str:
        digest = hashlib.sha256(self.to_json().encode()).hexdigest()[:10]
        return f"{self.kind}-{digest}"

    def __eq__(self, other) -> bool:
        return isinstance(other, FamilySpec) and self.to_json() == other.to_json()

    def __hash__(self) -> int:
        return hash(self.to_json())

    def __repr__(self) -> str:
        return f"FamilySpec({self.to_json()})"


# -- constructors --------------------------------------------------------------


def _f1_parts(spec: FamilySpec):
    p = spec.params
    n = p["n"]
    exps = [n] + p["extra_factors"]
    pres = AbelianPresentation(tuple(2 ** e for e in exps))
    s = s_exponent(p["s"], n)
    return pres, s, pres.omega1_vector(p["bsq"])


def construct_f1(spec: FamilySpec, *, cap: int | None = None) -> Group:
    """``G = <A, b>`` with A of exponent 2^n, ``a^b = a^s`` on all of A, ``b^2`` in Omega_1(A)."""
    if spec.kind != "f1":
        raise SpecError("construct_f1 needs an f1 spec")
    pres, s, bsq = _f1_parts(spec)
    alpha = AbelianAutomorphism.power_map(pres, s)
    G = cyclic_extension(pres, alpha, 2, bsq, cap=cap, name=describe(spec))
    G.marks.update(family="f1", n=spec.params["n"], s=s, spec=spec)
    return G


def construct_f2(spec: FamilySpec, *, cap: int | None = None) -> Group:
    """``A = <a1> x A*`` with ``a1^b = a1^s z`` and ``(a*)^b = (a*)^s``.

    The induced map must be an automorphism of order dividing 2; that is
    checked directly rather than through a parameter inequality.
    """
    if spec.kind != "f2":
        raise SpecError("construct_f2 needs an f2 spec")
    p = spec.params
    n = p["n"]
    exps = [n] + p["astar_factors"]
    pres = AbelianPresentation(tuple(2 ** e for e in exps))
    s = s_exponent(p["s"], n)
    zvec = (0,) + AbelianPresentation(tuple(2 ** e for e in p["astar_factors"])).omega1_vector(p["z"])
    images = [pres.add(pres.scale(pres.basis(0), s), zvec)]
    images += [pres.scale(pres.basis(i), s) for i in range(1, pres.rank)]
    alpha = AbelianAutomorphism(pres, tuple(images))
    if not alpha.is_homomorphism() or not alpha.is_bijective():
        raise ExtensionError("the action on A is not an automorphism")
    if not (alpha ** 2).is_identity():
        raise ExtensionError("the action on A does not square to the identity")
    bsq = pres.omega1_vector(p["bsq"])
    G = cyclic_extension(pres, alpha, 2, bsq, cap=cap, name=describe(spec))
    G.marks.update(family="f2", n=n, s=s, spec=spec, z=G.index[(0, zvec)])
    return G


def construct_sharpness_example(p: int, k: int, *, cap: int | None = None) -> Group:
    """``<a, b | a^(p^(k+1)) = b^(p^(k+1)) = 1, a^b = a^(1+p^k)>`` of order p^(2k+2)."""
    if not is_prime(p) or k < 1:
        raise SpecError(f"need a prime p and k >= 1, got p={p}, k={k}")
    q = p ** (k + 1)
    pres = AbelianPresentation((q,))
    alpha = AbelianAutomorphism.power_map(pres, 1 + p ** k)
    G = cyclic_extension(pres, alpha, q, (0,), cap=cap, name=f"M({p},{k})")
    G.marks.update(family="sharpness_example", p=p, k=k)
    return G


def build_group(spec: FamilySpec, *, cap: int | None = None) -> Group:
    kind, p = spec.kind, spec.params
    if kind == "f1":
        return construct_f1(spec, cap=cap)
    if kind == "f2":
        return construct_f2(spec, cap=cap)
    if kind == "sharpness_example":
        return construct_sharpness_example(p["p"], p["k"], cap=cap)
    if kind == "cyclic":
        return abelian_group(AbelianPresentation(tuple(p["orders"])), cap=cap)
    if kind == "direct_product":
        facs = [build_group(FamilySpec.from_dict(f), cap=cap) for f in p["factors"]]
        G = facs[0]
        for H in facs[1:]:
            G = direct_product(G, H, cap=cap)
        G.name = describe(spec)
        return G
    if kind == "perm_group":
        return group_from_permutations([Permutation(tuple(g)) for g in p["generators"]], cap=cap,
                                       name=describe(spec))
    if kind == "cyclic_extension":
        pres = AbelianPresentation(tuple(p["orders"]))
        alpha = AbelianAutomorphism(pres, tuple(tuple(r) for r in p["alpha"]))
        return cyclic_extension(pres, alpha, p["m"], p["a0"], cap=cap, name=describe(spec))
    raise AssertionError(kind)


def expected_order(spec: FamilySpec) -> int:
    """Order of the group a spec describes, without building it."""
    kind, p = spec.kind, spec.params
    if kind == "f1":
        return 2 * 2 ** (p["n"] + sum(p["extra_factors"]))
    if kind == "f2":
        return 2 * 2 ** (p["n"] + sum(p["astar_factors"]))
    if kind == "sharpness_example":
        return p["p"] ** (2 * p["k"] + 2)
    if kind == "cyclic":
        out = 1
        for m in p["orders"]:
            out *= m
        return out
    if kind == "direct_product":
        out = 1
        for f in p["factors"]:
            out *= expected_order(FamilySpec.from_dict(f))
        return out
    if kind == "cyclic_extension":
        out = p["m"]
        for m in p["orders"]:
            out *= m
        return out
    raise SpecError("order of a permutation group is only known after closure")


def describe(spec: FamilySpec) -> str:
    kind, p = spec.kind, spec.params
    bits = lambda v: "".join(map(str, v))
    if kind == "f1":
        return f"F1(n={p['n']},extra={p['extra_factors']},s={p['s']},bsq={bits(p['bsq'])})"
    if kind == "f2":
        return (f"F2(n={p['n']},astar={p['astar_factors']},s={p['s']},z={bits(p['z'])},"
                f"bsq={bits(p['bsq'])})")
    if kind == "sharpness_example":
        return f"M({p['p']},{p['k']})"
    if kind == "cyclic":
        return " x ".join(f"C{m}" for m in p["orders"])
    if kind == "direct_product":
        return " x ".join(describe(FamilySpec.from_dict(f)) for f in p["factors"])
    if kind == "perm_group":
        return "Perm(" + ";".join(str(Permutation(tuple(g))) for g in p["generators"]) + ")"
    return f"Ext(A={p['orders']},alpha={p['alpha']},m={p['m']},a0={p['a0']})"


# -- named groups ----------------------------------------------------------------


def metacyclic_spec(p: int, ea: int, eb: int, r: int, b_power: int = 0) -> FamilySpec:
    """``<a, b | a^(p^ea) = 1, b^(p^eb) = a^b_power, a^b = a^r>``."""
    q = p ** ea
    return FamilySpec("cyclic_extension", orders=[q], alpha=[[r % q]], m=p ** eb, a0=[b_power % q])


def dihedral_spec(n: int) -> FamilySpec:
    """Dihedral group of order 2^n (n >= 2)."""
    q = 2 ** (n - 1)
    return FamilySpec("cyclic_extension", orders=[q], alpha=[[q - 1]], m=2, a0=[0])


def semidihedral_spec(n: int) -> FamilySpec:
    """Semidihedral group of order 2^n (n >= 4)."""
    if n < 4:
        raise SpecError("semidihedral groups need n >= 4")
    q = 2 ** (n - 1)
    return FamilySpec("cyclic_extension", orders=[q], alpha=[[q // 2 - 1]], m=2, a0=[0])


def quaternion_spec(n: int) -> FamilySpec:
    """Generalised quaternion group of order 2^n (n >= 3)."""
    if n < 3:
        raise SpecError("generalised quaternion groups need n >= 3")
    q = 2 ** (n - 1)
    return FamilySpec("cyclic_extension", orders=[q], alpha=[[q - 1]], m=2, a0=[q // 2])


def k1_family_spec(n: int, twisted: bool = False) -> FamilySpec:
    """``<a, b | a^(2^(n-2)) = b^4 = 1, a^b = a^s>`` with s = -1, or s = -1 + 2^(n-3) when twisted."""
    if n < (5 if twisted else 4):
        raise SpecError("n too small for this family")
    q = 2 ** (n - 2)
    s = -1 + 2 ** (n - 3) if twisted else -1
    return FamilySpec("cyclic_extension", orders=[q], alpha=[[s % q]], m=4, a0=[0])


def heisenberg_spec(p: int) -> FamilySpec:
    """Non-abelian group of order p^3 and exponent p (odd p): ``y^b = y x`` on ``<x> x <y>``."""
    return FamilySpec("cyclic_extension", orders=[p, p], alpha=[[1, 0], [1, 1]], m=p, a0=[0, 0])


def alternating_spec(degree: int) -> FamilySpec:
    if degree == 4:
        gens = [Permutation.from_cycles([(0, 1, 2)], 4), Permutation.from_cycles([(1, 2, 3)], 4)]
    elif degree == 5:
        gens = [Permutation.from_cycles([(0, 1, 2, 3, 4)], 5), Permutation.from_cycles([(0, 1, 2)], 5)]
    else:
        raise SpecError("only A4 and A5 are provided")
    return FamilySpec("perm_group", generators=[list(g.images) for g in gens])


def cyclic_spec(*orders: int) -> FamilySpec:
    return FamilySpec("cyclic", orders=list(orders))


def product_spec(*specs: FamilySpec) -> FamilySpec:
    return FamilySpec("direct_product", factors=[s.to_dict() for s in specs])


_NAMED = re.compile(r"^(SD|D|Q|C|A|E)(\d+)$", re.IGNORECASE)


def named_spec(name: str) -> FamilySpec:
    """Specs for names like ``D16``, ``SD32``, ``Q8``, ``C4``, ``A5``, ``E8``, and products ``Q8xC4``."""
    parts = [x for x in re.split(r"\s*[x×*]\s*", name.strip()) if x]
    if len(parts) > 1:
        return product_spec(*(named_spec(x) for x in parts))
    m = _NAMED.match(name.strip())
    if not m:
        raise SpecError(f"unknown group name {name!r}")
    fam, order = m.group(1).upper(), int(m.group(2))
    if fam == "A":
        return alternating_spec(order)
    if fam == "C":
        return cyclic_spec(order)
    if fam == "E":
        pp = _log2(order)
        return cyclic_spec(*([2] * pp))
    n = _log2(order)
    return {"D": dihedral_spec, "SD": semidihedral_spec, "Q": quaternion_spec}[fam](n)


def _log2(order: int) -> int:
    n = order.bit_length() - 1
    if order < 2 or 2 ** n != order:
        raise SpecError(f"{order} is not a power of 2")
    return n

