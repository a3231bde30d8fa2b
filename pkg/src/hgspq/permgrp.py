"""Permutation groups on pq points: generation, stabilizers, isomorphism.

Groups are stored as explicit sorted element lists (orders stay below
~10^4 for the supported range).  Heavy operations (isomorphism testing,
automorphism counting) run on an indexed view with a full multiplication
table, built once per group via a Cayley-graph BFS over its generators.

Isomorphism search is exhaustive generator-image backtracking over
order/class-size-compatible targets, so a None answer is a proof of
non-isomorphism.  Permutation isomorphism of transitive groups is the
same search with a stabilizer-preservation constraint.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd

import numpy as np

from .arith import ResourceLimitError, factorize

CLOSURE_CAP = 10**6
REL_AUT_CAP = 2000


class Perm:
    """A permutation of {0..n-1}, stored as its image tuple."""

    __slots__ = ("image",)

    def __init__(self, image):
        self.image = tuple(image)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(range(degree))

    @property
    def degree(self) -> int:
        return len(self.image)

    def __mul__(self, other: "Perm") -> "Perm":
        # (self * other)(x) = self(other(x)): apply other first
        im = self.image
        return Perm(im[j] for j in other.image)

    def inverse(self) -> "Perm":
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return Perm(inv)

    def __pow__(self, k: int) -> "Perm":
        if k < 0:
            return self.inverse() ** (-k)
        result = Perm.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, point: int) -> int:
        return self.image[point]

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.image))

    def cycle_lengths(self) -> tuple[int, ...]:
        seen = [False] * len(self.image)
        out = []
        for i in range(len(self.image)):
            if seen[i]:
                continue
            n, j = 0, i
            while not seen[j]:
                seen[j] = True
                j = self.image[j]
                n += 1
            out.append(n)
        return tuple(sorted(out))

    def order(self) -> int:
        return reduce(lambda a, b: a * b // gcd(a, b), self.cycle_lengths(), 1)

    def __eq__(self, other) -> bool:
        return isinstance(other, Perm) and self.image == other.image

    def __hash__(self) -> int:
        return hash(self.image)

    def __lt__(self, other: "Perm") -> bool:
        return self.image < other.image

    def __repr__(self) -> str:
        cycles = []
        seen = [False] * len(self.image)
        for i in range(len(self.image)):
            if seen[i] or self.image[i] == i:
                seen[i] = True
                continue
            cyc, j = [], i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.image[j]
            cycles.append("(" + " ".join(map(str, cyc)) + ")")
        return "Perm:" + ("".join(cycles) or "()")


class PermGroup:
    """A finite permutation group with its complete, sorted element list."""

    __slots__ = ("generators", "elements", "degree", "_element_set", "_ctx")

    def __init__(self, generators, elements, degree):
        self.generators = tuple(generators)
        self.elements = tuple(elements)
        self.degree = degree
        self._element_set = frozenset(elements)
        self._ctx = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, perm: Perm) -> bool:
        return perm in self._element_set

    def __le__(self, other: "PermGroup") -> bool:
        return self._element_set <= other._element_set

    def __eq__(self, other) -> bool:
        return isinstance(other, PermGroup) and self._element_set == other._element_set

    def __hash__(self) -> int:
        return hash(self._element_set)

    def __repr__(self) -> str:
        return f"PermGroup(order={self.order}, degree={self.degree})"

    def element_set(self) -> frozenset:
        return self._element_set

    def image_sets(self) -> frozenset:
        """The group as a frozenset of raw image tuples (cross-model comparable)."""
        return frozenset(p.image for p in self.elements)

    def sort_key(self) -> tuple:
        """Canonical (order, sorted element list) tie-break key."""
        return (self.order, tuple(p.image for p in self.elements))

    def is_abelian(self) -> bool:
        gens = self.generators or self.elements
        return all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1 :])

    def orbit(self, point: int) -> frozenset:
        gens = self.generators or self.elements
        seen = {point}
        frontier = [point]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = g.image[x]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def subgroup(self, elements) -> "PermGroup":
        """Wrap an already-closed subset as a PermGroup (trusted)."""
        elems = tuple(sorted(elements))
        return PermGroup(elems, elems, self.degree)

    def indexed(self) -> "_GroupCtx":
        if self._ctx is None:
            self._ctx = _GroupCtx(self)
        return self._ctx


def closure(gens, degree: int, cap: int = CLOSURE_CAP) -> PermGroup:
    """Smallest group containing gens, with deterministic element ordering."""
    gens = [g for g in gens if not g.is_identity()]
    for g in gens:
        if g.degree != degree:
            raise ValueError(f"generator degree {g.degree} != {degree}")
    identity = Perm.identity(degree)
    elements = {identity}
    elements.update(gens)
    frontier = list(elements)
    while frontier:
        nxt = []
        for b in frontier:
            for a in gens:
                c = a * b
                if c not in elements:
                    elements.add(c)
                    nxt.append(c)
                    if len(elements) > cap:
                        raise ResourceLimitError(
                            f"closure exceeded cap of {cap} elements"
                        )
        frontier = nxt
    return PermGroup(sorted(set(gens)) or (identity,), sorted(elements), degree)


def is_transitive(G: PermGroup) -> bool:
    return G.order > 0 and len(G.orbit(0)) == G.degree


def is_regular(G: PermGroup) -> bool:
    return is_transitive(G) and G.order == G.degree


def stabilizer(G: PermGroup, point: int) -> PermGroup:
    if point >= G.degree:
        raise ValueError(f"point {point} out of range for degree {G.degree}")
    return G.subgroup(p for p in G.elements if p.image[point] == point)


def normalizer(G: PermGroup, H: PermGroup) -> PermGroup:
    """{g in G : g H g^-1 = H}; H must be a subgroup of G."""
    if not H <= G:
        raise ValueError("H must be contained in G")
    hset = H._element_set
    hgens = H.generators or H.elements
    out = []
    for g in G.elements:
        ginv = g.inverse()
        if all((g * h) * ginv in hset for h in hgens):
            out.append(g)
    return G.subgroup(out)


@dataclass(frozen=True)
class IsoWitness:
    """Generator images extending to an isomorphism (stabilizer-compatible
    when one was requested)."""

    generator_images: dict

    def full_map(self, G: PermGroup) -> dict:
        """Extend the generator images to the whole of G (for validation)."""
        mapping = {Perm.identity(G.degree): Perm.identity(G.degree)}
        pairs = list(self.generator_images.items())
        frontier = [Perm.identity(G.degree)]
        while frontier:
            nxt = []
            for x in frontier:
                for g, h in pairs:
                    y = x * g
                    if y not in mapping:
                        mapping[y] = mapping[x] * h
                        nxt.append(y)
            frontier = nxt
        return mapping


class _GroupCtx:
    """Indexed view of a PermGroup: full multiplication table plus the
    per-element invariants used to prune isomorphism backtracking."""

    def __init__(self, G: PermGroup):
        self.group = G
        self.perms = list(G.elements)
        self.n = len(self.perms)
        self.index = {p.image: i for i, p in enumerate(self.perms)}
        self.e_idx = self.index[tuple(range(G.degree))]
        self.rows = self._build_rows(G)
        self.inv = np.array(
            [self.index[p.inverse().image] for p in self.perms], dtype=self.rows.dtype
        )
        self.orders = np.array([p.order() for p in self.perms], dtype=np.int32)
        self.class_size = self._conj_class_sizes()
        self.stab0 = np.array([p.image[0] == 0 for p in self.perms], dtype=bool)

    def _generator_indices(self) -> list[int]:
        """A small generating sequence, reduced greedily from the declared
        generators (falling back to the whole element list)."""
        declared = sorted(
            {self.index[g.image] for g in self.group.generators if not g.is_identity()}
        )
        pool = declared if declared else list(range(self.n))
        pool = sorted(pool, key=lambda i: (-self.perms[i].order(), i))
        if declared:
            pool = pool + list(range(self.n))
        perms, index = self.perms, self.index
        chosen: list[int] = []
        span = {self.e_idx}
        for i in pool:
            if len(span) == self.n:
                break
            if i in span:
                continue
            chosen.append(i)
            frontier = list(span)
            while frontier:
                nxt = []
                for b in frontier:
                    for a in chosen:
                        c = index[(perms[a] * perms[b]).image]
                        if c not in span:
                            span.add(c)
                            nxt.append(c)
                frontier = nxt
        if len(span) != self.n:
            raise ValueError("element list is not closed under composition")
        return chosen

    def _build_rows(self, G: PermGroup) -> np.ndarray:
        dtype = np.int16 if self.n < (1 << 15) else np.int32
        rows = np.full((self.n, self.n), -1, dtype=dtype)
        gen_idx = self._generator_indices()
        perms = self.perms
        index = self.index
        # identity row, then one row per generator by direct composition
        rows[self.e_idx] = np.arange(self.n, dtype=dtype)
        for g in gen_idx:
            pg = perms[g]
            rows[g] = [index[(pg * pb).image] for pb in perms]
        # remaining rows via left-multiplication BFS: row(g*c) = row_g[row_c]
        done = np.zeros(self.n, dtype=bool)
        done[self.e_idx] = True
        for g in gen_idx:
            done[g] = True
        frontier = [self.e_idx] + list(gen_idx)
        while frontier:
            nxt = []
            for c in frontier:
                for g in gen_idx:
                    a = int(rows[g][c])
                    if not done[a]:
                        rows[a] = rows[g][rows[c]]
                        done[a] = True
                        nxt.append(a)
            frontier = nxt
        self.gen_idx = gen_idx
        return rows

    def mul(self, a: int, b: int) -> int:
        return int(self.rows[a][b])

    def power_map(self, k: int) -> np.ndarray:
        """Array sending each element index to the index of its k-th power."""
        cache = getattr(self, "_pow_cache", None)
        if cache is None:
            cache = {}
            self._pow_cache = cache
        arr = cache.get(k)
        if arr is None:
            arr = np.empty(self.n, dtype=np.int32)
            for x in range(self.n):
                out = self.e_idx
                base, kk = x, k
                while kk:
                    if kk & 1:
                        out = int(self.rows[out][base])
                    base = int(self.rows[base][base])
                    kk >>= 1
                arr[x] = out
            cache[k] = arr
        return arr

    def _conj_class_sizes(self) -> np.ndarray:
        size = np.zeros(self.n, dtype=np.int32)
        visited = np.zeros(self.n, dtype=bool)
        gens = self.gen_idx or [self.e_idx]
        for x0 in range(self.n):
            if visited[x0]:
                continue
            orbit = [x0]
            visited[x0] = True
            i = 0
            while i < len(orbit):
                x = orbit[i]
                i += 1
                for g in gens:
                    y = int(self.rows[g][int(self.rows[x][int(self.inv[g])])])
                    if not visited[y]:
                        visited[y] = True
                        orbit.append(y)
            for x in orbit:
                size[x] = len(orbit)
        return size

def _refined_labels(
    ctx_g: _GroupCtx,
    ctx_h: _GroupCtx,
    constraint_g: np.ndarray | None,
    constraint_h: np.ndarray | None,
) -> tuple[np.ndarray, np.ndarray]:
    """Joint invariant labels on both element sets.

    Start from (order, conjugacy-class size, constraint membership) and
    refine by the labels of prime-power maps until stable.  Any
    isomorphism respecting the constraint sets preserves the labels, so
    label-compatible images are the only candidates worth exploring.
    """
    ng, nh = ctx_g.n, ctx_h.n
    base = [
        (
            int(o),
            int(cs),
            bool(c[i]) if c is not None else False,
        )
        for ctx, c in ((ctx_g, constraint_g), (ctx_h, constraint_h))
        for i, (o, cs) in enumerate(zip(ctx.orders, ctx.class_size))
    ]
    table: dict = {}
    labels = np.array([table.setdefault(k, len(table)) for k in base], dtype=np.int32)
    primes = sorted(
        {p for o in set(map(int, ctx_g.orders)) | set(map(int, ctx_h.orders)) for p, _ in factorize(o)}
    )
    pmaps = [
        np.concatenate([ctx_g.power_map(p), ctx_h.power_map(p) + ng]) for p in primes
    ]
    while True:
        table = {}
        keys = [
            (int(labels[i]),) + tuple(int(labels[pm[i]]) for pm in pmaps)
            for i in range(ng + nh)
        ]
        new = np.array([table.setdefault(k, len(table)) for k in keys], dtype=np.int32)
        if len(table) == len(set(map(int, labels))):
            break
        labels = new
    return labels[:ng], labels[ng:]


def _greedy_generators(ctx: _GroupCtx, labels: np.ndarray, counts: dict) -> list[int]:
    """Generating sequence choosing, at each step, the element with the
    fewest candidate images (ties: higher order, lower index)."""
    chosen: list[int] = []
    span = {ctx.e_idx}
    while len(span) < ctx.n:
        best = None
        for i in range(ctx.n):
            if i in span:
                continue
            rank = (counts.get(int(labels[i]), 0), -int(ctx.orders[i]), i)
            if best is None or rank < best[0]:
                best = (rank, i)
        i = best[1]
        chosen.append(i)
        frontier = list(span)
        while frontier:
            nxt = []
            for b in frontier:
                for a in chosen:
                    c = ctx.mul(a, b)
                    if c not in span:
                        span.add(c)
                        nxt.append(c)
            frontier = nxt
    return chosen


def _iso_backtrack(
    ctx_g: _GroupCtx,
    ctx_h: _GroupCtx,
    constraint_g: np.ndarray | None,
    constraint_h: np.ndarray | None,
    count_all: bool,
):
    """Exhaustive generator-image search.

    Returns (count, first_witness_pairs).  With count_all=False the search
    stops at the first completion; either way exhaustion of the tree makes
    a zero count a proof of non-existence.
    """
    lab_g, lab_h = _refined_labels(ctx_g, ctx_h, constraint_g, constraint_h)
    h_by_label: dict[int, list[int]] = {}
    for j in range(ctx_h.n):
        h_by_label.setdefault(int(lab_h[j]), []).append(j)
    counts = {k: len(v) for k, v in h_by_label.items()}
    gens = _greedy_generators(ctx_g, lab_g, counts)

    n = ctx_g.n
    fwd = np.full(n, -1, dtype=np.int32)
    bwd = np.full(ctx_h.n, -1, dtype=np.int32)
    fwd[ctx_g.e_idx] = ctx_h.e_idx
    bwd[ctx_h.e_idx] = ctx_g.e_idx
    mapped = [ctx_g.e_idx]

    rows_g, rows_h = ctx_g.rows, ctx_h.rows
    found = [0]
    witness: list = []

    def _undo(mark: int) -> None:
        while len(mapped) > mark:
            y = mapped.pop()
            bwd[fwd[y]] = -1
            fwd[y] = -1

    def extend(depth: int) -> bool:
        """Close the partial map under the first `depth` generators;
        label-incompatible or colliding images kill the branch."""
        trail_mark = len(mapped)
        i = 0
        gen_pairs = [(g, int(fwd[g])) for g in gens[:depth]]
        while i < len(mapped):
            x = mapped[i]
            fx = int(fwd[x])
            i += 1
            for g, hg in gen_pairs:
                y = int(rows_g[x][g])
                fy = int(rows_h[fx][hg])
                cur = fwd[y]
                if cur == -1:
                    if bwd[fy] != -1 or lab_g[y] != lab_h[fy]:
                        _undo(trail_mark)
                        return False
                    fwd[y] = fy
                    bwd[fy] = y
                    mapped.append(y)
                elif cur != fy:
                    _undo(trail_mark)
                    return False
        return True

    def rec(depth: int) -> bool:
        if depth == len(gens):
            if len(mapped) == n:
                found[0] += 1
                if not witness:
                    witness.extend((g, int(fwd[g])) for g in gens)
                return not count_all
            return False
        g = gens[depth]
        for h in h_by_label.get(int(lab_g[g]), ()):
            if bwd[h] != -1:
                continue
            mark = len(mapped)
            fwd[g] = h
            bwd[h] = g
            mapped.append(g)
            ok = extend(depth + 1)
            if ok and rec(depth + 1):
                return True
            _undo(mark)
        return False

    rec(0)
    return found[0], witness


def _quick_mismatch(G: PermGroup, H: PermGroup, preserve_stabilizer: bool) -> bool:
    if G.order != H.order:
        return True
    if sorted(p.order() for p in G.elements) != sorted(p.order() for p in H.elements):
        return True
    if preserve_stabilizer:
        sg = [p.order() for p in G.elements if p.image[0] == 0]
        sh = [p.order() for p in H.elements if p.image[0] == 0]
        if sorted(sg) != sorted(sh):
            return True
        # a point relabeling preserves cycle types
        if sorted(p.cycle_lengths() for p in G.elements) != sorted(
            p.cycle_lengths() for p in H.elements
        ):
            return True
    return False


def abstract_isomorphic(
    G: PermGroup, H: PermGroup, preserve_stabilizer: bool = False
) -> IsoWitness | None:
    """Search for an isomorphism G -> H; exhaustive, so None is a proof.

    With preserve_stabilizer=True (both groups transitive of equal degree)
    the isomorphism must carry the stabilizer of point 0 in G onto the
    stabilizer of point 0 in H, i.e. it decides permutation isomorphism.
    """
    if preserve_stabilizer:
        if G.degree != H.degree:
            raise ValueError("stabilizer preservation needs equal degrees")
        if not (is_transitive(G) and is_transitive(H)):
            raise ValueError("stabilizer preservation needs transitive groups")
    if _quick_mismatch(G, H, preserve_stabilizer):
        return None
    ctx_g, ctx_h = G.indexed(), H.indexed()
    cg = ctx_g.stab0 if preserve_stabilizer else None
    ch = ctx_h.stab0 if preserve_stabilizer else None
    count, witness = _iso_backtrack(ctx_g, ctx_h, cg, ch, count_all=False)
    if count == 0:
        return None
    images = {
        ctx_g.perms[g]: ctx_h.perms[h] for g, h in witness
    }
    return IsoWitness(generator_images=images)


def has_regular_normal_subgroup(G: PermGroup) -> bool:
    """True iff the transitive degree-pq group G contains a regular
    normal subgroup (the almost-classically-Galois criterion).

    Any candidate has order pq, hence is generated by an order-p subgroup
    together with a normalizing element of order q.
    """
    n = G.degree
    primes = sorted({pr for pr, _ in factorize(n)})
    if len(primes) != 2:
        raise ValueError("expects degree pq with p, q distinct primes")
    q, p = primes
    gens = G.generators or G.elements
    lines: dict[frozenset, Perm] = {}
    for x in G.elements:
        if x.order() == p:
            line = frozenset(x**k for k in range(p))
            lines.setdefault(line, x)
    q_elems = [y for y in G.elements if y.order() == q]
    for line, x in lines.items():
        for y in q_elems:
            if (y * x) * y.inverse() not in line:
                continue
            j_elems = {l * y**k for l in line for k in range(q)}
            if len(j_elems) != n:
                continue
            J = G.subgroup(j_elems)
            if not is_transitive(J):
                continue
            if all(
                (g * z) * g.inverse() in j_elems for g in gens for z in (x, y)
            ):
                return True
    return False


def perm_iso_fingerprint(G: PermGroup) -> tuple:
    """Cheap invariant of the permutation-isomorphism class: order plus
    the cycle-type multisets of the group and of the point-0 stabilizer."""
    all_ct = sorted(p.cycle_lengths() for p in G.elements)
    stab_ct = sorted(p.cycle_lengths() for p in G.elements if p.image[0] == 0)
    return (G.order, tuple(all_ct), tuple(stab_ct))


def partition_by_permutation_iso(groups: list[PermGroup]) -> list[list[int]]:
    """Partition indices of `groups` into permutation-isomorphism classes.

    Fingerprints prune; within a fingerprint bucket every group is tested
    against each class representative by exhaustive witness search.
    """
    classes: list[list[int]] = []
    reps_by_fp: dict[tuple, list[int]] = {}
    for i, g in enumerate(groups):
        fp = perm_iso_fingerprint(g)
        placed = False
        for ci in reps_by_fp.get(fp, []):
            rep = groups[classes[ci][0]]
            if abstract_isomorphic(rep, g, preserve_stabilizer=True) is not None:
                classes[ci].append(i)
                placed = True
                break
        if not placed:
            reps_by_fp.setdefault(fp, []).append(len(classes))
            classes.append([i])
    return classes


def rel_aut_order(M: PermGroup, Mprime: PermGroup, cap: int = REL_AUT_CAP) -> int:
    """|{theta in Aut(M) : theta(Mprime) = Mprime}| by exhaustive backtracking."""
    if not Mprime <= M:
        raise ValueError("Mprime must be a subgroup of M")
    if M.order > cap:
        raise ResourceLimitError(
            f"automorphism search capped at order {cap}, group has {M.order}"
        )
    ctx = M.indexed()
    mask = np.array([p in Mprime._element_set for p in ctx.perms], dtype=bool)
    count, _ = _iso_backtrack(ctx, ctx, mask, mask, count_all=True)
    return count


__all__ = [
    "CLOSURE_CAP",
    "REL_AUT_CAP",
    "IsoWitness",
    "Perm",
    "PermGroup",
    "abstract_isomorphic",
    "closure",
    "has_regular_normal_subgroup",
    "is_regular",
    "is_transitive",
    "normalizer",
    "partition_by_permutation_iso",
    "perm_iso_fingerprint",
    "rel_aut_order",
    "stabilizer",
]
