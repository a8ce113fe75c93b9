"""The normalizer/centralizer index invariants mni, mni* and mci*.

All three are maxima over non-normal subgroups, so they are undefined for
Dedekind groups; asking for them raises :class:`DedekindError`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Group, prime_power, quotient
from .errors import DedekindError
from .lattice import (
    Subgroup,
    SubgroupLattice,
    all_subgroups,
    cyclic_data,
    cyclic_subgroup,
    is_dedekind,
    is_normal,
)
from .report import VerificationReport

MNI, MNI_STAR, MCI_STAR = "mni", "mni_star", "mci_star"


@dataclass(frozen=True)
class InvariantValue:
    kind: str
    value: int
    witness: Subgroup
    element: int | None = None

    @property
    def exponent(self) -> int | None:
        """k with value == p^k for the group's prime p (None if not a prime power)."""
        if self.value == 1:
            return 0
        pp = prime_power(self.value)
        return pp[1] if pp else None

    def describe(self) -> str:
        G = self.witness.parent
        w = self.witness.describe() if self.element is None else f"g={G.labels[self.element]} {self.witness.describe()}"
        return f"{self.kind}={self.value} witness {w}"


def _require_non_dedekind(G: Group) -> None:
    if is_dedekind(G):
        raise DedekindError(f"{G.name or 'group'} is Dedekind; the invariant is undefined")


def mni(G: Group, lattice: SubgroupLattice | None = None) -> InvariantValue:
    """max |N_G(H):H| over the non-normal subgroups H."""
    _require_non_dedekind(G)
    lat = lattice if lattice is not None else all_subgroups(G)
    idx = np.flatnonzero(~lat.normal)
    ratios = lat.norm_order[idx] // lat.orders[idx]
    # lattice order is (order, bitset), so argmax picks the smallest tied witness
    best = int(idx[int(np.argmax(ratios))])
    return InvariantValue(MNI, int(ratios.max()), lat.subgroups[best])


def _cyclic_best(G: Group, values: np.ndarray, kind: str) -> InvariantValue:
    cd = cyclic_data(G)
    candidates = np.flatnonzero(~cd.normal)
    vals = values[candidates]
    top = int(vals.max())
    tied = candidates[vals == top]
    key = lambda g: (int(G.elem_order[g]), cd.bits[cd.cyclic_id[g]], int(g))
    g = min((int(x) for x in tied), key=key)
    return InvariantValue(kind, top, cyclic_subgroup(G, g), g)


def mni_star(G: Group) -> InvariantValue:
    """max |N_G(<g>):<g>| over the non-normal cyclic subgroups."""
    _require_non_dedekind(G)
    cd = cyclic_data(G)
    return _cyclic_best(G, cd.norm_order // G.elem_order, MNI_STAR)


def mci_star(G: Group) -> InvariantValue:
    """max |C_G(g):<g>| over g generating a non-normal cyclic subgroup."""
    _require_non_dedekind(G)
    cd = cyclic_data(G)
    return _cyclic_best(G, cd.cent_order // G.elem_order, MCI_STAR)


def invariants(G: Group) -> dict[str, InvariantValue]:
    return {MNI: mni(G), MNI_STAR: mni_star(G), MCI_STAR: mci_star(G)}


def check_relation_chain(G: Group, group_id: str = "-") -> VerificationReport:
    """mci*(G) <= mni*(G) <= mni(G)."""
    rep = VerificationReport()
    if is_dedekind(G):
        raise DedekindError("relation chain is undefined for a Dedekind group")
    a, b, c = mci_star(G).value, mni_star(G).value, mni(G).value
    rep.add(group_id, "invariant_chain", "mci* <= mni*", f"{a} <= {b}", a <= b)
    rep.add(group_id, "invariant_chain", "mni* <= mni", f"{b} <= {c}", b <= c)
    return rep


def check_quotient_lemma(G: Group, N: Subgroup, group_id: str = "-") -> VerificationReport:
    """mci*(G/N) <= |N| mci*(G), with skips when either side is undefined."""
    rep = VerificationReport()
    claim = "mci_star_quotient"
    wit = f"N={N.describe()}"
    if is_dedekind(G):
        rep.skip(group_id, claim, f"G is Dedekind; {wit}")
        return rep
    if not is_normal(N):
        rep.skip(group_id, claim, f"N not normal; {wit}")
        return rep
    Q = quotient(G, N.mask)
    if is_dedekind(Q):
        rep.skip(group_id, claim, f"G/N is Dedekind; {wit}")
        return rep
    lhs, base = mci_star(Q).value, mci_star(G).value
    rhs = N.order * base
    rep.add(group_id, claim, "mci*(G/N) <= |N| mci*(G)", f"{lhs} <= {N.order}*{base}", lhs <= rhs, wit)
    if lhs > base:
        rep.add(group_id, "mci_star_quotient_not_monotone", "mci*(G/N) > mci*(G) allowed",
                f"{lhs} > {base}", True, wit)
    return rep
