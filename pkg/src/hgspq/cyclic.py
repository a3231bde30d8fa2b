"""Cyclic-type classification: transitive subgroups of Hol(C_pq).

The transitive subgroups fall into two families:

  type 1:  N x| < alpha^(q^(e0-c)), X_1, ..., X_m >   with X_i any
           subgroup of <alpha_i, beta_i>,
  type 2:  J_{t,c} x| < alpha_i^(ell_i^(e_i - c_i)) >  with J_{t,c} the
           subgroup <sigma, [tau, alpha^(t q^(e0-c))]> meeting the
           translations only in <sigma>.

Type-1 groups are pairwise non-isomorphic; type-2 groups merge exactly
over t.  Subgroup enumeration of <alpha_i, beta_i> is lattice-exhaustive
(every subgroup of C_{ell^e} x C_{ell^f} materialized exactly once via
divisor bases); the closed-form counts are evaluated separately and
diffed, never trusted.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .arith import (
    PqParams,
    ResourceLimitError,
    divisors,
    euler_phi,
    geometric_sum,
    sigma0,
)
from .holomorph import CyclicModel, HolElement, NElement
from .permgrp import PermGroup, abstract_isomorphic, closure, is_transitive

ELL_ENUM_CAP = 4096
REALIZE_CAP = 10**4


@dataclass(frozen=True)
class EllSubgroupDescriptor:
    """One subgroup of <alpha_i, beta_i> = C_{ell^e} x C_{ell^f}.

    elements are (x, y) exponent pairs (alpha_i^x beta_i^y); kind records
    which of the three parametrized shapes matched first, with its
    parameters: I -> (s, r2), II -> (s, r1, n), III -> (s, r1, r2, n).
    """

    ell: int
    e: int
    f: int
    kind: str
    params: tuple[int, ...]
    generators: tuple[tuple[int, int], ...]
    elements: frozenset

    @property
    def order(self) -> int:
        return len(self.elements)

    def short(self) -> str:
        return f"{self.kind}{self.params}"


def _subgroup_elements(m: int, n: int, a: int, b: int, s: int) -> frozenset:
    """Element set of <(a, 0), (s, b)> inside Z_m x Z_n."""
    out = set()
    for j in range(n // b if b else 1):
        base_x, base_y = j * s % m, j * b % n
        for i in range(m // a if a else 1):
            out.add(((base_x + i * a) % m, base_y))
    return frozenset(out)


def _all_subgroups_rank2(m: int, n: int) -> list[frozenset]:
    """Every subgroup of Z_m x Z_n exactly once, via divisor bases."""
    from math import gcd

    seen = {}
    for a in divisors(m):
        for b in divisors(n):
            g = gcd(a, n // b)
            for t in range(g):
                s = t * a // g
                elems = _subgroup_elements(m, n, a, b, s)
                seen.setdefault(elems, (a, b, s))
    # the parametrization is duplicate-free; the dict is belt and braces
    expected = sum(gcd(a, n // b) for a in divisors(m) for b in divisors(n))
    if len(seen) != expected:
        raise AssertionError("rank-2 subgroup enumeration miscounted")
    return sorted(seen, key=lambda h: (len(h), sorted(h)))


def _paper_descriptor_streams(e: int, f: int, ell: int):
    """Yield (kind, params, generators) in matching priority order I, II, III."""
    me, mf = ell**e, ell**f
    for s in range(e + 1):
        for r2 in range(f + 1):
            gens = ((ell ** (e - s) % me if s else 0, 0), (0, ell ** (f - r2) % mf if r2 else 0))
            yield "I", (s, r2), gens
    for s in range(1, e + 1):
        for r1 in range(1, f + 1):
            for n in range(1, ell ** min(s, r1)):
                if n % ell == 0:
                    continue
                yield "II", (s, r1, n), ((n * ell ** (e - s) % me, ell ** (f - r1) % mf),)
    for s in range(2, e + 1):
        for r1 in range(2, f + 1):
            for r2 in range(1, r1):
                if not (0 < r1 - r2 < s):
                    continue
                for n in range(1, ell ** min(s, r1)):
                    if n % ell == 0:
                        continue
                    yield "III", (s, r1, r2, n), (
                        (n * ell ** (e - s) % me, ell ** (f - r1) % mf),
                        (0, ell ** (f - r2) % mf),
                    )


def enumerate_ell_subgroups(
    e: int, f: int, ell: int, cap: int = ELL_ENUM_CAP
) -> list[EllSubgroupDescriptor]:
    """All subgroups of C_{ell^e} x C_{ell^f}, each carrying the first
    parametrized shape that realizes it.

    The authoritative object is the element-set list; the parametrized
    shapes can collide (the type-(iii) n-range over-counts), so at most
    one descriptor is attached per subgroup.
    """
    if ell ** (e + f) > cap:
        raise ResourceLimitError(f"ell^(e+f) = {ell ** (e + f)} exceeds cap {cap}")
    m, n = ell**e, ell**f
    subgroups = _all_subgroups_rank2(m, n)
    attached: dict[frozenset, EllSubgroupDescriptor] = {}
    for kind, params, gens in _paper_descriptor_streams(e, f, ell):
        elems = _close_rank2(m, n, gens)
        if elems not in attached:
            attached[elems] = EllSubgroupDescriptor(
                ell=ell, e=e, f=f, kind=kind, params=params, generators=gens, elements=elems
            )
    missing = [h for h in subgroups if h not in attached]
    if missing:
        raise AssertionError(
            f"paper parametrization missed {len(missing)} subgroups of "
            f"C_{m} x C_{n}"
        )
    return [attached[h] for h in subgroups]


def _close_rank2(m: int, n: int, gens) -> frozenset:
    out = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        nxt = []
        for x, y in frontier:
            for gx, gy in gens:
                z = ((x + gx) % m, (y + gy) % n)
                if z not in out:
                    out.add(z)
                    nxt.append(z)
        frontier = nxt
    return frozenset(out)


def parametrized_counts(e: int, f: int, ell: int) -> dict[str, int]:
    """Raw counts of parameter tuples per kind (before dedup), used to
    report the type-(iii) over-parametrization."""
    counts = {"I": 0, "II": 0, "III": 0}
    for kind, _, _ in _paper_descriptor_streams(e, f, ell):
        counts[kind] += 1
    return counts


def sigma1(e: int, f: int, ell: int) -> tuple[int, int]:
    """Type-(ii) subgroup count: (closed form, explicit double sum).

    The two can disagree for min(e, f) >= 2; both are reported, neither
    silently reconciled.
    """
    M = min(e, f)
    if M == 0:
        return 0, 0
    closed = (
        (ell ** (M - 1) - 1) * (2 * M + 1)
        + 2 * geometric_sum(ell, M - 1)
        - 2 * (M - 1) * ell ** (M - 1)
        + (abs(f - e) + 1) * (ell**M - 1)
    )
    direct = sum(
        euler_phi(ell ** min(s, r1)) for r1 in range(1, f + 1) for s in range(1, e + 1)
    )
    return closed, direct


def sigma2(e: int, f: int, ell: int) -> tuple[int, int]:
    """Type-(iii) subgroup count: (closed form, explicit triple sum)."""
    M = min(e, f)
    if M == 0:
        return 0, 0
    closed = (abs(f - e) + 2) * ((M - 1) * ell**M - ell * geometric_sum(ell, M - 1))
    direct = sum(
        euler_phi(ell ** min(s, r1))
        for s in range(2, e + 1)
        for a in range(1, s)
        for r1 in range(1 + a, f + 1)
    )
    return closed, direct


@dataclass(frozen=True)
class CyclicFamilyDescriptor:
    """One transitive subgroup of Hol(C_pq) in symbolic form."""

    family: str  # "N" (type 1) or "J" (type 2)
    c: int
    x: tuple[EllSubgroupDescriptor, ...] = ()  # type 1 only
    t: int = 0  # type 2 only
    c_i: tuple[int, ...] = ()  # type 2 only
    group: PermGroup | None = None

    def predicted_order(self, params: PqParams) -> int:
        if self.family == "N":
            a = params.q**self.c
            for xd in self.x:
                a *= xd.order
            return params.p * params.q * a
        d = 1
        for ell, ci in zip(params.ell, self.c_i):
            d *= ell**ci
        return params.p * params.q**self.c * d

    def class_key(self) -> tuple:
        """Iso-class key: type-2 groups merge over t."""
        if self.family == "N":
            return (0, self.c, tuple(tuple(sorted(xd.elements)) for xd in self.x))
        return (1, self.c, self.c_i)

    def family_label(self) -> str:
        if self.family == "N":
            return f"N⋊[c={self.c};X=({','.join(xd.short() for xd in self.x)})]"
        return f"J[c={self.c};A=({','.join(str(x) for x in self.c_i)})]"


def _realize_type1(model: CyclicModel, desc: CyclicFamilyDescriptor) -> PermGroup:
    params = model.params
    gens = [model.to_perm(model.sigma()), model.to_perm(model.tau())]
    if desc.c > 0:
        gens.append(model.to_perm(model.alpha(params.q ** (params.e0 - desc.c))))
    for i, xd in enumerate(desc.x):
        for gx, gy in xd.generators:
            if gx or gy:
                h = model.automorphism(
                    model.aut_vector(
                        alpha_i=tuple(gx if k == i else 0 for k in range(params.m)),
                        beta_i=tuple(gy if k == i else 0 for k in range(params.m)),
                    )
                )
                gens.append(model.to_perm(h))
    return closure(gens, model.degree)


def _realize_type2(model: CyclicModel, desc: CyclicFamilyDescriptor) -> PermGroup:
    params = model.params
    twist = model.aut_vector(alpha=desc.t * params.q ** (params.e0 - desc.c))
    j_gen = model.to_perm(HolElement(NElement(0, 1), twist))
    gens = [model.to_perm(model.sigma()), j_gen]
    for i, ci in enumerate(desc.c_i):
        if ci > 0:
            gens.append(model.to_perm(model.alpha_i(i, params.ell[i] ** (params.e[i] - ci))))
    return closure(gens, model.degree)


def enumerate_transitive_cyclic(
    params: PqParams,
    model: CyclicModel | None = None,
    realize_cap: int = REALIZE_CAP,
) -> list[CyclicFamilyDescriptor]:
    """Every transitive subgroup of Hol(C_pq), as descriptors.

    Groups are realized as permutation groups when their order fits under
    realize_cap (always true at the verified tiers); above the cap the
    descriptor stays symbolic.
    """
    if model is None:
        model = CyclicModel(params)
    per_ell = [
        enumerate_ell_subgroups(params.e[i], params.f[i], params.ell[i])
        for i in range(params.m)
    ]
    out: list[CyclicFamilyDescriptor] = []
    for c in range(params.e0 + 1):
        for combo in _product_choices(per_ell):
            desc = CyclicFamilyDescriptor(family="N", c=c, x=tuple(combo))
            out.append(_maybe_realize(model, desc, realize_cap))
    for c in range(1, params.e0 + 1):
        for t in range(1, params.q**c):
            if t % params.q == 0:
                continue
            for combo in _product_choices([range(e + 1) for e in params.e]):
                desc = CyclicFamilyDescriptor(family="J", c=c, t=t, c_i=tuple(combo))
                out.append(_maybe_realize(model, desc, realize_cap))
    _assert_distinct(out)
    return out


def _product_choices(pools):
    if not pools:
        yield ()
        return
    head, *tail = pools
    for x in head:
        for rest in _product_choices(tail):
            yield (x,) + rest


def _maybe_realize(model, desc: CyclicFamilyDescriptor, cap: int) -> CyclicFamilyDescriptor:
    if desc.predicted_order(model.params) > cap:
        return desc
    if desc.family == "N":
        group = _realize_type1(model, desc)
    else:
        group = _realize_type2(model, desc)
    if group.order != desc.predicted_order(model.params):
        raise AssertionError(
            f"{desc.family_label()}: realized order {group.order} != "
            f"predicted {desc.predicted_order(model.params)}"
        )
    if not is_transitive(group):
        raise AssertionError(f"{desc.family_label()} is not transitive")
    return replace(desc, group=group)


def _assert_distinct(descriptors) -> None:
    realized = [d for d in descriptors if d.group is not None]
    sets = {d.group.element_set() for d in realized}
    if len(sets) != len(realized):
        raise AssertionError("duplicate transitive subgroups in cyclic enumeration")


@dataclass
class CyclicClassInfo:
    """One permutation-isomorphism class of cyclic-type transitive groups."""

    key: tuple
    family: str
    c: int
    members: list[CyclicFamilyDescriptor]
    structure_label: str = ""
    family_label: str = ""
    n_groups: int = 0
    rel_aut_order: int = 0
    n_hgs: int = 0
    acg: bool = True

    @property
    def representative(self) -> PermGroup | None:
        groups = [d.group for d in self.members if d.group is not None]
        return min(groups, key=lambda g: g.sort_key()) if groups else None

    @property
    def a_trivial(self) -> bool:
        return self.family == "J" and all(ci == 0 for ci in self.members[0].c_i)


def _type1_label(params: PqParams, desc: CyclicFamilyDescriptor) -> str:
    p, q = params.p, params.q
    d1 = q**desc.c
    d2 = 1
    d = 1
    for xd in desc.x:
        d *= xd.order
        d1 *= sum(1 for (x, y) in xd.elements if y == 0)
        d2 *= sum(1 for (x, y) in xd.elements if x == 0)
    d3 = (d * q**desc.c) // (d1 * d2)
    if d1 > 1 and d2 > 1:
        core = f"(C_{p} ⋊ C_{d1}) × (C_{q} ⋊ C_{d2})"
    elif d1 > 1:
        core = f"(C_{p} ⋊ C_{d1}) × C_{q}"
    elif d2 > 1:
        core = f"C_{p} × (C_{q} ⋊ C_{d2})"
    else:
        core = f"C_{p * q}"
    if d3 == 1:
        return core
    return f"{core} ⋊ C_{d3}" if core == f"C_{p * q}" else f"({core}) ⋊ C_{d3}"


def _type2_label(params: PqParams, desc: CyclicFamilyDescriptor) -> str:
    k = params.q**desc.c
    for ell, ci in zip(params.ell, desc.c_i):
        k *= ell**ci
    return f"C_{params.p} ⋊ C_{k}"


def cyclic_iso_classes(
    descriptors: list[CyclicFamilyDescriptor],
    params: PqParams,
    certify: bool = True,
) -> list[CyclicClassInfo]:
    """Merge descriptors into permutation-isomorphism classes.

    Type-1 groups are singletons; type-2 groups merge exactly over t.
    With certify=True (requires realized groups) every merge is backed by
    an isomorphism witness and every non-merge by exhaustive
    non-existence within matching fingerprints.
    """
    by_key: dict[tuple, CyclicClassInfo] = {}
    for desc in descriptors:
        key = desc.class_key()
        info = by_key.get(key)
        if info is None:
            info = CyclicClassInfo(key=key, family=desc.family, c=desc.c, members=[])
            by_key[key] = info
        info.members.append(desc)
    classes = sorted(by_key.values(), key=lambda ci: ci.key)
    for info in classes:
        rep = info.members[0]
        info.n_groups = len(info.members)
        info.family_label = rep.family_label()
        info.structure_label = (
            _type1_label(params, rep) if rep.family == "N" else _type2_label(params, rep)
        )
        expected = 1 if rep.family == "N" else euler_phi(params.q**rep.c)
        if info.n_groups != expected:
            raise AssertionError(
                f"class {info.family_label} has {info.n_groups} members, expected {expected}"
            )
    if certify:
        _certify_classes(classes)
    return classes


def _certify_classes(classes: list[CyclicClassInfo]) -> None:
    for info in classes:
        groups = [d.group for d in info.members]
        if any(g is None for g in groups):
            raise ValueError("certification requires realized groups")
        rep = info.representative
        for g in groups:
            if abstract_isomorphic(rep, g, preserve_stabilizer=True) is None:
                raise AssertionError(f"members of {info.family_label} fail to merge")
    for i, a in enumerate(classes):
        for b in classes[i + 1 :]:
            if a.representative.order != b.representative.order:
                continue
            w = abstract_isomorphic(a.representative, b.representative, preserve_stabilizer=True)
            if w is not None:
                raise AssertionError(
                    f"classes {a.family_label} and {b.family_label} unexpectedly merge"
                )


def cyclic_hgs_counts(classes: list[CyclicClassInfo], params: PqParams) -> list[CyclicClassInfo]:
    """Fill rel-aut orders, Hopf-Galois counts and the almost-classically-
    Galois flags (Byott quotient, checked integral)."""
    from .report import byott_count

    aut_n = (params.p - 1) * (params.q - 1)
    for info in classes:
        if info.family == "N":
            info.rel_aut_order = aut_n
            info.acg = True
        elif info.c == 1 and info.a_trivial:
            info.rel_aut_order = params.p * (params.p - 1)
            info.acg = True
        else:
            info.rel_aut_order = params.p - 1
            info.acg = info.c == 1
        info.n_hgs = byott_count(info.n_groups, info.rel_aut_order, aut_n)
    return classes


@dataclass
class CyclicTotals:
    enumerated: int
    formula: int
    match: bool
    non_acg: int
    non_acg_formula: int
    sophie_germain: int | None
    discrepancies: list = field(default_factory=list)


def cyclic_theorem_totals(
    params: PqParams, classes: list[CyclicClassInfo] | None = None
) -> CyclicTotals:
    """Enumerated class totals next to the closed-form values."""
    type2_classes = params.e0
    for e in params.e:
        type2_classes *= e + 1
    type1 = params.e0 + 1
    formula_type1 = params.e0 + 1
    for i in range(params.m):
        ni = len(enumerate_ell_subgroups(params.e[i], params.f[i], params.ell[i]))
        type1 *= ni
        s1c, _ = sigma1(params.e[i], params.f[i], params.ell[i])
        s2c, _ = sigma2(params.e[i], params.f[i], params.ell[i])
        formula_type1 *= (params.e[i] + 1) * (params.f[i] + 1) + s1c + s2c
    enumerated = type1 + type2_classes
    formula = formula_type1 + type2_classes
    if classes is not None and len(classes) != enumerated:
        raise AssertionError(
            f"class list has {len(classes)} entries, enumeration says {enumerated}"
        )
    non_acg = (params.e0 - 1) * (type2_classes // params.e0)
    discrepancies = []
    if formula != enumerated:
        discrepancies.append(
            {
                "site": "cyclic_theorem.total",
                "paper_value": str(formula),
                "computed_value": str(enumerated),
            }
        )
    for i in range(params.m):
        e, f, ell = params.e[i], params.f[i], params.ell[i]
        brute = len(enumerate_ell_subgroups(e, f, ell))
        s1c, s1d = sigma1(e, f, ell)
        s2c, s2d = sigma2(e, f, ell)
        closed = (e + 1) * (f + 1) + s1c + s2c
        direct = (e + 1) * (f + 1) + s1d + s2d
        if not (brute == closed == direct):
            discrepancies.append(
                {
                    "site": f"sigma_count.ell={ell},e={e},f={f}",
                    "paper_value": f"closed={closed},direct={direct}",
                    "computed_value": str(brute),
                }
            )
    sophie = None
    if params.p == 2 * params.q + 1:
        r = params.f[params.ell.index(2)]
        s_rem = (params.q - 1) // 2**r
        sophie = (6 * r + 4) * sigma0(s_rem)
        if sophie != enumerated:
            discrepancies.append(
                {
                    "site": "cyclic_theorem.sophie_germain_remark",
                    "paper_value": str(sophie),
                    "computed_value": str(enumerated),
                }
            )
    return CyclicTotals(
        enumerated=enumerated,
        formula=formula,
        match=formula == enumerated,
        non_acg=non_acg,
        non_acg_formula=non_acg,
        sophie_germain=sophie,
        discrepancies=discrepancies,
    )


__all__ = [
    "CyclicClassInfo",
    "CyclicFamilyDescriptor",
    "CyclicTotals",
    "EllSubgroupDescriptor",
    "cyclic_hgs_counts",
    "cyclic_iso_classes",
    "cyclic_theorem_totals",
    "enumerate_ell_subgroups",
    "enumerate_transitive_cyclic",
    "parametrized_counts",
    "sigma1",
    "sigma2",
]
