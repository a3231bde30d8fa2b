import pytest

from hgspq.arith import ResourceLimitError
from hgspq.holomorph import lambda_n
from hgspq.permgrp import (
    Perm,
    abstract_isomorphic,
    closure,
    has_regular_normal_subgroup,
    is_regular,
    is_transitive,
    normalizer,
    perm_iso_fingerprint,
    rel_aut_order,
    stabilizer,
)


def cyc(n, shift=1):
    return Perm([(i + shift) % n for i in range(n)])


def test_perm_basics():
    p = cyc(5)
    assert p.order() == 5
    assert (p * p.inverse()).is_identity()
    assert (p**5).is_identity()
    assert p**-1 == p.inverse()
    assert p.cycle_lengths() == (5,)


def test_closure_trivial_and_cycle():
    t = closure([], 4)
    assert t.order == 1
    g = closure([Perm([1, 2, 0])], 3)
    assert g.order == 3


def test_closure_holomorph_c21(cyc73):
    group, _ = cyc73
    assert group.order == 252


def test_closure_cap():
    with pytest.raises(ResourceLimitError):
        closure([cyc(9), Perm([1, 0] + list(range(2, 9)))], 9, cap=10)


def test_transitivity(cyc73):
    group, model = cyc73
    assert is_transitive(group)
    sigma_only = closure([model.to_perm(model.sigma())], model.degree)
    assert not is_transitive(sigma_only)
    assert not is_transitive(closure([], model.degree))


def test_stabilizer_orders(cyc73):
    group, model = cyc73
    stab = stabilizer(group, 0)
    assert stab.order == 12
    assert stab.is_abelian()
    lam = lambda_n(model)
    assert stabilizer(lam, 0).order == 1
    # |J_{t,c}| = p q^c with orbit pq, so J_{1,1} is regular
    j11 = next(d for d in _type2(model) if (d.t, d.c) == (1, 1))
    assert stabilizer(j11.group, 0).order == 1


def _type2(model):
    from hgspq.cyclic import enumerate_transitive_cyclic

    return [
        d
        for d in enumerate_transitive_cyclic(model.params, model)
        if d.family == "J"
    ]


def test_is_regular(cyc73):
    group, model = cyc73
    assert is_regular(lambda_n(model))
    assert not is_regular(group)
    assert not is_regular(closure([model.to_perm(model.sigma())], model.degree))


def test_lagrange(cyc73):
    group, _ = cyc73
    for point in (0, 5, 20):
        assert stabilizer(group, point).order * len(group.orbit(point)) == group.order


def test_iso_identity(cyc73):
    group, _ = cyc73
    for flag in (False, True):
        w = abstract_isomorphic(group, group, preserve_stabilizer=flag)
        assert w is not None


def test_iso_j_groups_merge(cyc73):
    _, model = cyc73
    descs = {(d.t, d.c, d.c_i): d.group for d in _type2(model)}
    j1 = descs[(1, 1, (0,))]
    j2 = descs[(2, 1, (0,))]
    w = abstract_isomorphic(j1, j2, preserve_stabilizer=True)
    assert w is not None
    # the witness really extends to a stabilizer-compatible isomorphism
    full = w.full_map(j1)
    assert len(full) == j1.order
    assert len(set(full.values())) == j1.order
    for a in j1.elements:
        for b in j1.generators:
            assert full[a * b] == full[a] * full[b]


def test_iso_none_is_proof(cyc73, params73):
    _, model = cyc73
    from hgspq.cyclic import enumerate_transitive_cyclic

    descs = enumerate_transitive_cyclic(params73, model)
    n_alpha = next(
        d for d in descs if d.family == "N" and d.c == 1 and all(x.order == 1 for x in d.x)
    )
    j_ext = next(d for d in descs if d.family == "J" and d.t == 1 and d.c_i == (1,))
    assert abstract_isomorphic(n_alpha.group, j_ext.group) is None
    # same order 42, but only the N-side contains an abelian subgroup of
    # order pq: no isomorphism even abstractly
    n_42 = next(
        d
        for d in descs
        if d.family == "N" and d.c == 0 and d.group.order == j_ext.group.order
    )
    assert abstract_isomorphic(n_42.group, j_ext.group) is None


def test_perm_iso_implies_abstract_iso(oracle_cyc73):
    for cls in oracle_cyc73:
        rep = cls.representative
        assert abstract_isomorphic(rep, rep, preserve_stabilizer=True) is not None
        assert abstract_isomorphic(rep, rep) is not None


def test_rel_aut_examples(cyc73, met73):
    cgroup, cmodel = cyc73
    lam = lambda_n(cmodel)
    assert rel_aut_order(lam, stabilizer(lam, 0)) == 12
    mgroup, mmodel = met73
    p_t = closure(
        [mmodel.to_perm(mmodel.e1()), mmodel.to_perm(mmodel.e2()), mmodel.to_perm(mmodel.tau())],
        mmodel.degree,
    )
    assert p_t.order == 147
    assert rel_aut_order(p_t, stabilizer(p_t, 0)) == 42  # p(p-1)
    e1_t_a = closure(
        [
            mmodel.to_perm(mmodel.e1()),
            mmodel.to_perm(mmodel.tau()),
            mmodel.to_perm(mmodel.alpha()),
        ],
        mmodel.degree,
    )
    assert rel_aut_order(e1_t_a, stabilizer(e1_t_a, 0)) == 12  # (p-1)(q-1)


def test_rel_aut_cap(cyc73):
    group, _ = cyc73
    with pytest.raises(ResourceLimitError):
        rel_aut_order(group, stabilizer(group, 0), cap=100)


def test_normalizer(cyc73):
    group, model = cyc73
    assert normalizer(group, group) == group
    lam = lambda_n(model)
    assert normalizer(group, lam) == group
    j11 = next(d for d in _type2(model) if (d.t, d.c) == (1, 1)).group
    norm = normalizer(group, j11)
    # contains J itself extended by all of Aut(<sigma>), order >= 21 * 6
    assert norm.order % j11.order == 0
    assert norm.order >= 21 * 6


def test_fingerprint_separates(oracle_cyc73):
    reps = [c.representative for c in oracle_cyc73]
    fps = [perm_iso_fingerprint(r) for r in reps]
    # classes with equal fingerprints must still be non-isomorphic
    for i, a in enumerate(reps):
        for j in range(i + 1, len(reps)):
            if fps[i] == fps[j]:
                assert abstract_isomorphic(a, reps[j], preserve_stabilizer=True) is None


def test_has_regular_normal_subgroup(cyc73):
    group, model = cyc73
    lam = lambda_n(model)
    assert has_regular_normal_subgroup(lam)
    assert has_regular_normal_subgroup(group)  # contains lambda(N)


def test_iso_rejects_mixed_degrees():
    a = closure([cyc(6)], 6)
    b = closure([cyc(8)], 8)
    with pytest.raises(ValueError):
        abstract_isomorphic(a, b, preserve_stabilizer=True)
