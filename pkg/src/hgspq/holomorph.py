"""Holomorphs of the two groups of order pq as permutation groups.

Points are the pq elements of N, written in the normal form sigma^i tau^j
and labeled i*q + j (fixed once; golden outputs depend on it).  An element
[eta, phi] of Hol(N) acts by x -> eta * phi(x).

The cyclic model keeps Aut(N) additively as exponent vectors over the
named generators alpha, alpha_i, beta_i; the metabelian model keeps
Aut(N) as pairs (a, b) meaning sigma -> sigma^a, tau -> sigma^b tau, and
carries the F_p^2 matrix picture (basis e1 <-> sigma, e2 <-> sigma
eps^(g-1); tau, alpha, beta act as the diagonal matrices T, A, B).
"""

from __future__ import annotations

from typing import NamedTuple

from .arith import PqParams, element_of_order
from .permgrp import Perm, PermGroup, closure


class NElement(NamedTuple):
    """sigma^i tau^j in normal form (0 <= i < p, 0 <= j < q)."""

    i: int
    j: int


class HolElement(NamedTuple):
    """[eta, aut] with the product [eta,a][mu,b] = [eta*a(mu), ab]."""

    eta: NElement
    aut: tuple


class _BaseModel:
    """Shared plumbing: point labeling, holomorph product, perm realization."""

    def __init__(self, params: PqParams):
        self.params = params
        self.p = params.p
        self.q = params.q
        self.degree = params.p * params.q

    def point(self, n: NElement) -> int:
        return n.i * self.q + n.j

    def n_element(self, point: int) -> NElement:
        return NElement(point // self.q, point % self.q)

    # model-specific: mul_n, apply_aut, mul_aut, aut_identity

    def identity(self) -> HolElement:
        return HolElement(NElement(0, 0), self.aut_identity())

    def mul_hol(self, x: HolElement, y: HolElement) -> HolElement:
        return HolElement(
            self.mul_n(x.eta, self.apply_aut(x.aut, y.eta)),
            self.mul_aut(x.aut, y.aut),
        )

    def hol_power(self, x: HolElement, k: int) -> HolElement:
        out = self.identity()
        for _ in range(k):
            out = self.mul_hol(out, x)
        return out

    def to_perm(self, h: HolElement) -> Perm:
        image = [0] * self.degree
        for pt in range(self.degree):
            moved = self.mul_n(h.eta, self.apply_aut(h.aut, self.n_element(pt)))
            image[pt] = self.point(moved)
        return Perm(image)

    def translation(self, n: NElement) -> HolElement:
        return HolElement(n, self.aut_identity())

    def automorphism(self, aut) -> HolElement:
        return HolElement(NElement(0, 0), aut)


class CyclicModel(_BaseModel):
    """N = C_pq = <sigma, tau | sigma^p = tau^q = 1, sigma tau = tau sigma>.

    Aut(N) = Aut(<sigma>) x Aut(<tau>); an automorphism is an exponent
    vector (c0, c1..cm, d1..dm) over (alpha, alpha_i, beta_i), reduced mod
    the generator orders (q^e0, ell_i^e_i, ell_i^f_i).
    """

    def __init__(self, params: PqParams, a_alpha: int | None = None):
        super().__init__(params)
        p, q = params.p, params.q
        self.a_alpha = a_alpha if a_alpha is not None else element_of_order(q**params.e0, p)
        self.a_ell = tuple(
            element_of_order(ell**e, p) if e > 0 else 1
            for ell, e in zip(params.ell, params.e)
        )
        self.b_ell = tuple(
            element_of_order(ell**f, q) if f > 0 else 1
            for ell, f in zip(params.ell, params.f)
        )
        self.orders = (q**params.e0,) + tuple(
            ell**e for ell, e in zip(params.ell, params.e)
        ) + tuple(ell**f for ell, f in zip(params.ell, params.f))

    def aut_identity(self) -> tuple:
        return (0,) * len(self.orders)

    def aut_vector(self, alpha: int = 0, alpha_i=None, beta_i=None) -> tuple:
        m = self.params.m
        alpha_i = alpha_i or (0,) * m
        beta_i = beta_i or (0,) * m
        vec = (alpha,) + tuple(alpha_i) + tuple(beta_i)
        return tuple(v % o for v, o in zip(vec, self.orders))

    def mul_aut(self, a: tuple, b: tuple) -> tuple:
        return tuple((x + y) % o for x, y, o in zip(a, b, self.orders))

    def _aut_action(self, aut: tuple) -> tuple[int, int]:
        """(a, b): sigma -> sigma^a, tau -> tau^b."""
        m = self.params.m
        a = pow(self.a_alpha, aut[0], self.p)
        for x, base in zip(aut[1 : 1 + m], self.a_ell):
            a = a * pow(base, x, self.p) % self.p
        b = 1
        for y, base in zip(aut[1 + m :], self.b_ell):
            b = b * pow(base, y, self.q) % self.q
        return a, b

    def apply_aut(self, aut: tuple, n: NElement) -> NElement:
        a, b = self._aut_action(aut)
        return NElement(n.i * a % self.p, n.j * b % self.q)

    def mul_n(self, x: NElement, y: NElement) -> NElement:
        return NElement((x.i + y.i) % self.p, (x.j + y.j) % self.q)

    # named generators
    def sigma(self) -> HolElement:
        return self.translation(NElement(1, 0))

    def tau(self) -> HolElement:
        return self.translation(NElement(0, 1))

    def alpha(self, power: int = 1) -> HolElement:
        return self.automorphism(self.aut_vector(alpha=power))

    def alpha_i(self, i: int, power: int = 1) -> HolElement:
        vec = [0] * self.params.m
        vec[i] = power
        return self.automorphism(self.aut_vector(alpha_i=tuple(vec)))

    def beta_i(self, i: int, power: int = 1) -> HolElement:
        vec = [0] * self.params.m
        vec[i] = power
        return self.automorphism(self.aut_vector(beta_i=tuple(vec)))

    def named_generators(self) -> dict[str, HolElement]:
        gens = {"sigma": self.sigma(), "tau": self.tau(), "alpha": self.alpha()}
        for i in range(self.params.m):
            if self.params.e[i] > 0:
                gens[f"alpha_{i + 1}"] = self.alpha_i(i)
            if self.params.f[i] > 0:
                gens[f"beta_{i + 1}"] = self.beta_i(i)
        return gens


class MetabModel(_BaseModel):
    """N = <sigma, tau | sigma^p = tau^q = 1, tau sigma = sigma^g tau>.

    Aut(N) = {(a, b): sigma -> sigma^a, tau -> sigma^b tau}, of order
    p(p-1), with composition (a1,b1)(a2,b2) = (a1 a2, a1 b2 + b1).
    """

    def __init__(self, params: PqParams, a_alpha: int | None = None):
        super().__init__(params)
        p, q = params.p, params.q
        self.a_alpha = a_alpha if a_alpha is not None else element_of_order(q**params.e0, p)
        self.a_beta = element_of_order(params.s, p)
        # the paper's normalization: g is the canonical power of a_alpha
        self.g = pow(self.a_alpha, q ** (params.e0 - 1), p)
        # geometric sums S_j = 1 + g + ... + g^(j-1) drive the normal form
        self._gsum = [0] * (q + 1)
        for j in range(1, q + 1):
            self._gsum[j] = (self._gsum[j - 1] * self.g + 1) % p
        # diagonal matrices of the R-generators acting on (e1, e2)
        self.T_mat = (self.g, 1)
        self.A_mat = (self.a_alpha, self.a_alpha)
        self.B_mat = (self.a_beta, self.a_beta)

    def aut_identity(self) -> tuple:
        return (1, 0)

    def mul_aut(self, x: tuple, y: tuple) -> tuple:
        a1, b1 = x
        a2, b2 = y
        return (a1 * a2 % self.p, (a1 * b2 + b1) % self.p)

    def apply_aut(self, aut: tuple, n: NElement) -> NElement:
        a, b = aut
        return NElement((a * n.i + b * self._gsum[n.j]) % self.p, n.j)

    def mul_n(self, x: NElement, y: NElement) -> NElement:
        # tau^j sigma^i = sigma^(i g^j) tau^j
        return NElement((x.i + y.i * pow(self.g, x.j, self.p)) % self.p, (x.j + y.j) % self.q)

    # named generators
    def sigma(self) -> HolElement:
        return self.translation(NElement(1, 0))

    def tau(self) -> HolElement:
        return self.translation(NElement(0, 1))

    def alpha(self) -> HolElement:
        return self.automorphism((self.a_alpha, 0))

    def beta(self) -> HolElement:
        return self.automorphism((self.a_beta, 0))

    def epsilon(self) -> HolElement:
        return self.automorphism((1, 1))

    # F_p^2 picture: e1 = sigma, e2 = sigma * eps^(g-1), f = e1 - e2
    def pvec(self, v1: int, v2: int) -> HolElement:
        """The element v1*e1 + v2*e2 of P = <sigma, epsilon>."""
        return HolElement(
            NElement((v1 + v2) % self.p, 0), (1, v2 * (self.g - 1) % self.p)
        )

    def e1(self) -> HolElement:
        return self.pvec(1, 0)

    def e2(self) -> HolElement:
        return self.pvec(0, 1)

    def f_vec(self) -> HolElement:
        return self.pvec(1, -1)

    def r_element(self, t: int = 0, a: int = 0, b: int = 0) -> HolElement:
        """tau^t alpha^a beta^b in R = <tau, alpha, beta>."""
        act = pow(self.a_alpha, a, self.p) * pow(self.a_beta, b, self.p) % self.p
        return HolElement(NElement(0, t % self.q), (act, 0))

    def coset_element(self, v: tuple[int, int], t: int = 0, a: int = 0, b: int = 0) -> HolElement:
        """[v, U] with v in F_p^2 and U = tau^t alpha^a beta^b."""
        return self.mul_hol(self.pvec(*v), self.r_element(t, a, b))

    def r_matrix(self, t: int = 0, a: int = 0, b: int = 0) -> tuple[int, int]:
        """Diagonal of T^t A^a B^b acting on (e1, e2)."""
        d1 = pow(self.g, t, self.p) * pow(self.a_alpha, a, self.p) * pow(self.a_beta, b, self.p)
        d2 = pow(self.a_alpha, a, self.p) * pow(self.a_beta, b, self.p)
        return (d1 % self.p, d2 % self.p)

    def p_subgroup(self) -> PermGroup:
        return closure([self.to_perm(self.e1()), self.to_perm(self.e2())], self.degree)

    def r_subgroup(self) -> PermGroup:
        gens = [self.tau(), self.alpha(), self.beta()]
        return closure([self.to_perm(h) for h in gens], self.degree)

    def named_generators(self) -> dict[str, HolElement]:
        return {
            "sigma": self.sigma(),
            "tau": self.tau(),
            "alpha": self.alpha(),
            "beta": self.beta(),
            "epsilon": self.epsilon(),
        }


def hol_to_perm(model: _BaseModel, h: HolElement) -> Perm:
    """The permutation of N induced by x -> eta * aut(x)."""
    return model.to_perm(h)


def build_cyclic_holomorph(
    params: PqParams, a_alpha: int | None = None
) -> tuple[PermGroup, CyclicModel]:
    """Hol(C_pq) of order pq(p-1)(q-1) with its named-generator model."""
    model = CyclicModel(params, a_alpha=a_alpha)
    gens = [model.to_perm(h) for h in model.named_generators().values()]
    group = closure(gens, model.degree)
    return group, model


def build_metab_holomorph(
    params: PqParams, a_alpha: int | None = None
) -> tuple[PermGroup, MetabModel]:
    """Hol(C_p x| C_q) of order s p^2 q^(1+e0) with its matrix model."""
    model = MetabModel(params, a_alpha=a_alpha)
    gens = [model.to_perm(h) for h in model.named_generators().values()]
    group = closure(gens, model.degree)
    return group, model


def unique_hall_pq_subgroup(model: CyclicModel) -> PermGroup:
    """The unique Hall {p,q}-subgroup <sigma, tau, alpha> of Hol(C_pq)."""
    gens = [model.sigma(), model.tau(), model.alpha()]
    return closure([model.to_perm(h) for h in gens], model.degree)


def lambda_n(model: _BaseModel) -> PermGroup:
    """The regular image of N (left translations) inside Hol(N)."""
    gens = [model.to_perm(model.sigma()), model.to_perm(model.tau())]
    return closure(gens, model.degree)


__all__ = [
    "CyclicModel",
    "HolElement",
    "MetabModel",
    "NElement",
    "build_cyclic_holomorph",
    "build_metab_holomorph",
    "hol_to_perm",
    "lambda_n",
    "unique_hall_pq_subgroup",
]
