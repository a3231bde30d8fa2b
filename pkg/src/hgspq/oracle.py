"""Exhaustive ground truth: the full subgroup lattice of a small group.

Enumeration is by cyclic extension: layer by layer, every known subgroup
H is extended by one element g with g^ell in H for some prime ell (such
chains reach every subgroup), deduplicating by element set.  Candidates
are taken one per coset Hg since <H, hg> = <H, g>.  Everything runs on an
indexed view of the ambient group with numpy-vectorized closures, so the
order-6084 holomorphs of the extended tier stay within a desk budget.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .arith import ResourceLimitError, factorize
from .permgrp import (
    REL_AUT_CAP,
    PermGroup,
    partition_by_permutation_iso,
    rel_aut_order,
    stabilizer,
)

SUBGROUP_CAP = 10**4


class SubgroupLattice:
    """Every subgroup of the ambient group, exactly once.

    Subgroups are kept as sorted index arrays into the ambient element
    list (materialize with as_permgroup); edges records the discovery
    relation (parent, child) of the cyclic-extension search.
    """

    def __init__(self, ambient: PermGroup, members, gens, edges):
        self.ambient = ambient
        self._ctx = ambient.indexed()
        self._members = members
        self._gens = gens
        self.edges = edges

    def __len__(self) -> int:
        return len(self._members)

    def order(self, i: int) -> int:
        return len(self._members[i])

    def elements(self, i: int) -> np.ndarray:
        return self._members[i]

    def as_permgroup(self, i: int) -> PermGroup:
        perms = self._ctx.perms
        elems = tuple(perms[j] for j in self._members[i])
        gens = tuple(perms[j] for j in self._gens[i]) or (elems[0],)
        return PermGroup(gens, elems, self.ambient.degree)

    def is_transitive(self, i: int) -> bool:
        perms = self._ctx.perms
        gens = [perms[j].image for j in self._gens[i]]
        if not gens:
            return self.ambient.degree == 1
        seen = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for img in gens:
                    y = img[x]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return len(seen) == self.ambient.degree

    def transitive_indices(self) -> list[int]:
        return [i for i in range(len(self)) if self.is_transitive(i)]

    def subgroups_within(self, elements: frozenset) -> list[int]:
        """Indices of subgroups contained in the given element set."""
        idx = self._ctx.index
        want = {idx[p.image] for p in elements}
        return [
            i
            for i in range(len(self))
            if set(map(int, self._members[i])) <= want
        ]

    def inclusion_edges(self) -> list[tuple[int, int]]:
        """All strict containments H_i < H_j (small lattices only)."""
        sets = [frozenset(map(int, m)) for m in self._members]
        out = []
        for i, si in enumerate(sets):
            for j, sj in enumerate(sets):
                if i != j and len(si) < len(sj) and len(sj) % len(si) == 0 and si < sj:
                    out.append((i, j))
        return out


def _power_index(ctx, x: int, k: int) -> int:
    out = ctx.e_idx
    base = x
    while k:
        if k & 1:
            out = int(ctx.rows[out][base])
        base = int(ctx.rows[base][base])
        k >>= 1
    return out


def _extend(ctx, members_mask: np.ndarray, count: int, hgens: list[int], g: int, seed: np.ndarray):
    """Closure of <H, g> given H's mask; returns (mask, count) or the
    full group early once past half the ambient order."""
    n = ctx.n
    rows = ctx.rows
    gens = np.array(hgens + [g], dtype=np.intp)
    members = members_mask.copy()
    members[g] = True
    count += 1
    frontier = np.append(seed, np.int32(g)).astype(np.intp)
    half = n // 2
    scratch = np.zeros(n, dtype=bool)
    while frontier.size:
        prods = rows[frontier[:, None], gens].ravel()
        new = prods[~members[prods]]
        if new.size == 0:
            break
        scratch[new] = True
        frontier = np.nonzero(scratch)[0]
        scratch[frontier] = False
        members[frontier] = True
        count += frontier.size
        if count > half:
            return np.ones(n, dtype=bool), n
    return members, count


def all_subgroups(G: PermGroup, cap: int = SUBGROUP_CAP) -> SubgroupLattice:
    """The complete subgroup lattice of G (|G| <= cap)."""
    if G.order > cap:
        raise ResourceLimitError(
            f"subgroup enumeration capped at order {cap}, group has {G.order}"
        )
    ctx = G.indexed()
    n = ctx.n
    primes = [p for p, _ in factorize(n)] if n > 1 else []
    pw = {}
    for ell in primes:
        pw[ell] = np.array([_power_index(ctx, x, ell) for x in range(n)], dtype=np.int32)

    trivial = np.array([ctx.e_idx], dtype=np.int32)
    members: list[np.ndarray] = [trivial]
    gens: list[list[int]] = [[]]
    index = {trivial.tobytes(): 0}
    edges: list[tuple[int, int]] = []
    queue = deque([0])
    while queue:
        i = queue.popleft()
        H = members[i]
        mask = np.zeros(n, dtype=bool)
        mask[H] = True
        cand = ~mask
        if primes:
            ok = np.zeros(n, dtype=bool)
            for ell in primes:
                ok |= mask[pw[ell]]
            cand &= ok
        seen = mask.copy()
        for g in map(int, np.nonzero(cand)[0]):
            if seen[g]:
                continue
            seen[ctx.rows[H, g]] = True
            kmask, _ = _extend(ctx, mask, len(H), gens[i], g, H)
            K = np.nonzero(kmask)[0].astype(np.int32)
            key = K.tobytes()
            j = index.get(key)
            if j is None:
                j = len(members)
                members.append(K)
                gens.append(gens[i] + [g])
                index[key] = j
                queue.append(j)
            edges.append((i, j))

    # canonical ordering: (order, element indices)
    perm_order = sorted(range(len(members)), key=lambda k: (len(members[k]), members[k].tobytes()))
    remap = {old: new for new, old in enumerate(perm_order)}
    members = [members[k] for k in perm_order]
    gens = [gens[k] for k in perm_order]
    edges = sorted({(remap[a], remap[b]) for a, b in edges})
    return SubgroupLattice(G, members, gens, edges)


@dataclass
class TransitiveClass:
    """One permutation-isomorphism class of transitive subgroups."""

    representative: PermGroup
    member_count: int
    member_sets: list[frozenset]
    stabilizer: PermGroup
    rel_aut_order: int | None

    @property
    def order(self) -> int:
        return self.representative.order


def transitive_classes(
    lattice: SubgroupLattice, rel_aut_cap: int = REL_AUT_CAP
) -> list[TransitiveClass]:
    """Partition the transitive subgroups under permutation isomorphism.

    rel_aut_order is computed per class representative when its order
    fits under rel_aut_cap, else left as None.
    """
    idxs = lattice.transitive_indices()
    groups = [lattice.as_permgroup(i) for i in idxs]
    parts = partition_by_permutation_iso(groups)
    out = []
    for part in parts:
        part_groups = [groups[k] for k in part]
        rep = min(part_groups, key=lambda g: g.sort_key())
        stab = stabilizer(rep, 0)
        ra = rel_aut_order(rep, stab, cap=rel_aut_cap) if rep.order <= rel_aut_cap else None
        out.append(
            TransitiveClass(
                representative=rep,
                member_count=len(part),
                member_sets=[g.element_set() for g in part_groups],
                stabilizer=stab,
                rel_aut_order=ra,
            )
        )
    out.sort(key=lambda c: c.representative.sort_key())
    return out


def direct_hgs_count(cls: TransitiveClass, aut_n: int) -> int:
    """e(G, N) = member_count * |Aut(M, M')| / |Aut(N)|, checked integral."""
    from .report import byott_count

    if cls.rel_aut_order is None:
        raise ResourceLimitError("class representative exceeds the rel-aut cap")
    return byott_count(cls.member_count, cls.rel_aut_order, aut_n)


__all__ = [
    "SUBGROUP_CAP",
    "SubgroupLattice",
    "TransitiveClass",
    "all_subgroups",
    "direct_hgs_count",
    "transitive_classes",
]
