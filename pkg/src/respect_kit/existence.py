"""Existence of open respectful decompositions: conditions, certificates, search.

Verdicts are three-valued.  EXISTS always carries a witness that has been
re-verified in exact arithmetic; NOT_EXISTS always carries a certificate
that :func:`replay_certificate` can check from scratch.  Everything else is
UNKNOWN.
"""

from __future__ import annotations

import enum
import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import decomp as dc
from . import exactlin as el
from . import liealg as la
from . import modp
from . import sympoly as sp
from .decomp import Decomposition, PreconditionError
from .exactlin import Subspace
from .liealg import LieAlgebra

DEFAULT_SEED = 1729
SEED_ENV = "RESPECT_KIT_SEED"
DEFAULT_BUDGET = 100_000
_BATCH = 8192


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return DEFAULT_SEED if raw in (None, "") else int(raw)


class UnsupportedField(ValueError):
    pass


def check_field(name: str) -> None:
    """Only the real field is supported.

    Verdicts do not transfer to C: over C the algebras L6_22(-1) and
    L6_24(-1) become isomorphic to L6_22(1) and L6_24(1), which do admit
    decompositions with dim V = 2.
    """
    if name.upper() not in ("R", "REAL", "REALS"):
        raise UnsupportedField(
            f"ground field {name!r} is not supported: existence is sensitive to the ground field "
            "(over C, L6_22(-1) and L6_24(-1) are isomorphic to L6_22(1) and L6_24(1)); "
            "only R is implemented"
        )


class Status(str, enum.Enum):
    EXISTS = "EXISTS"
    NOT_EXISTS = "NOT_EXISTS"
    UNKNOWN = "UNKNOWN"


CERT_KINDS = ("DERIVED_DIM_LE_1", "CODIM1_ABELIAN_IDEAL", "PENCIL_ALL_RADICALS_ABELIAN", "TMAIN_CONDITION_FAIL")


@dataclass(frozen=True)
class Certificate:
    kind: str
    data: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.kind not in CERT_KINDS:
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    @property
    def label(self) -> str:
        if self.kind == "TMAIN_CONDITION_FAIL":
            return f"TMAIN_CONDITION_FAIL({self.data['which']})"
        return self.kind


@dataclass(frozen=True)
class Verdict:
    status: Status
    witness: Decomposition | None = None
    certificate: Certificate | None = None
    trials: int = 0
    note: str = ""

    def __post_init__(self):
        if self.status is Status.EXISTS:
            assert self.witness is not None and self.certificate is None
        elif self.status is Status.NOT_EXISTS:
            assert self.certificate is not None and self.witness is None
        else:
            assert self.witness is None and self.certificate is None


# conditions for dim V = 2


def _require_nilpotent(g: LieAlgebra) -> None:
    if not la.is_nilpotent(g):
        raise la.NotNilpotent(f"{g.name or 'algebra'} is not nilpotent")


def bracket_with_all(g: LieAlgebra, V: Subspace) -> Subspace:
    """[V, g]."""
    return la.subspace_bracket(g, V, la.whole(g))


@dataclass(frozen=True)
class V2Conditions:
    c1: bool
    c2: bool
    c3: bool

    def __iter__(self):
        return iter((self.c1, self.c2, self.c3))

    def all(self) -> bool:
        return self.c1 and self.c2 and self.c3


def v2_conditions(g: LieAlgebra, V: Subspace) -> V2Conditions:
    """(1) [V,V] != 0, (2) V meets [V,g] trivially, (3) [V,g] != [g,g]."""
    _require_nilpotent(g)
    if V.dim != 2:
        raise PreconditionError(f"V must be 2-dimensional, got {V.dim}")
    v1, v2 = V.basis
    K = bracket_with_all(g, V)
    return V2Conditions(
        c1=not el.is_zero(g.bracket(v1, v2)),
        c2=(V & K).is_zero(),
        c3=K != la.derived_algebra(g),
    )


def _valid_H(g: LieAlgebra, V: Subspace, K: Subspace, D: Subspace, H: Subspace) -> bool:
    if H.dim + V.dim != g.dim or not (H + V).is_full():
        return False
    if not K <= H or D <= H:
        return False
    return Decomposition(g, H, V).analysis.open_flag


def construct_H_from_V(g: LieAlgebra, V: Subspace) -> Subspace:
    """A complement H of V containing [V,g] but not [g,g].

    Greedy extension of [V,g] by standard basis vectors; if that swallows
    [g,g], the added generators are perturbed in a fixed order; as a last
    resort an explicit complement is built that provably avoids [g,g].
    """
    if not v2_conditions(g, V).all():
        raise PreconditionError("V does not satisfy the three conditions")
    n = g.dim
    K = bracket_with_all(g, V)
    D = la.derived_algebra(g)
    gens: list[el.Vector] = []
    H = K
    for i in range(n):
        e = el.unit_vector(n, i)
        if not el.contains(H + V, e):
            gens.append(e)
            H = H + el.span([e], n)
    if _valid_H(g, V, K, D, H):
        return H
    for pos in reversed(range(len(gens))):
        others = gens[:pos] + gens[pos + 1:]
        for i in range(n):
            w = el.unit_vector(n, i)
            if el.contains(H, w):
                continue
            for c in (1, -1, 2, -2):
                cand = K + el.span(others + [el.add(gens[pos], el.scale(c, w))], n)
                if _valid_H(g, V, K, D, cand):
                    return cand
    H = _explicit_H(g, V, K, D)
    if not _valid_H(g, V, K, D, H):
        raise AssertionError("explicit complement failed verification")
    return H


def _explicit_H(g: LieAlgebra, V: Subspace, K: Subspace, D: Subspace) -> Subspace:
    n = g.dim
    VK = V + K
    if D <= VK:
        # H meets V + K exactly in K, and D is not inside K
        return K + el.complement(VK)
    d0 = next(b for b in D.basis if not el.contains(VK, b))
    rest = el.complement(VK + el.span([d0], n))
    return K + rest + el.span([el.add(V.basis[0], d0)], n)


def derna_witness(g: LieAlgebra, height: int = 2) -> Subspace | None:
    """V inside [g,g] with [V,V] != 0 and V independent modulo [g,[g,g]].

    Returns None unless [g,g] is non-abelian and
    dim [g,g] - dim [g,[g,g]] >= 2.
    """
    _require_nilpotent(g)
    n = g.dim
    D = la.derived_algebra(g)
    D2 = la.lower_central_term(g, 3)
    if D.dim - D2.dim < 2 or la.is_abelian_subspace(g, D):
        return None
    vecs = [el.combine(c, D.basis, n) for c in _coefficient_vectors(D.dim, height)]
    for v1, v2 in itertools.combinations(vecs, 2):
        if el.is_zero(g.bracket(v1, v2)):
            continue
        V = el.span([v1, v2], n)
        if V.dim != 2 or not (V & D2).is_zero():
            continue
        if v2_conditions(g, V).all():
            return V
    return None


def _coefficient_vectors(k: int, height: int) -> list[tuple[int, ...]]:
    """Nonzero integer vectors of height <= ``height``, lowest height first."""
    out = []
    for h in range(1, height + 1):
        for c in itertools.product(range(-h, h + 1), repeat=k):
            if max(map(abs, c)) == h:
                out.append(c)
    return out


# codimension-1 abelian ideals


@dataclass(frozen=True)
class HyperplaneAnswer:
    found: bool
    functional: el.Vector | None
    hyperplane: Subspace | None
    record: dict

    def __bool__(self) -> bool:
        return self.found


def coordinate_forms(g: LieAlgebra) -> tuple[tuple[int, ...], list[el.Matrix]]:
    """Pivots p_k of [g,g] and the alternating forms B_k(x, y) = [x, y]_{p_k}."""
    D = la.derived_algebra(g)
    n = g.dim
    forms = []
    for p in D.pivots:
        forms.append(tuple(tuple(g.table[i][j][p] for j in range(n)) for i in range(n)))
    return D.pivots, forms


def abelian_hyperplane(g: LieAlgebra) -> HyperplaneAnswer:
    """Decide whether g has an abelian ideal of codimension one.

    A hyperplane ker(phi) containing [g,g] is automatically an ideal.  It is
    abelian iff every B_k vanishes on it, i.e. B_k = 0, or rank B_k = 2 and
    phi lies in the row space of B_k.
    """
    n = g.dim
    D = la.derived_algebra(g)
    if D.is_full():
        raise PreconditionError("g is perfect, so no hyperplane contains [g,g]")
    pivots, forms = coordinate_forms(g)
    S = el.annihilator(D)
    ranks = []
    for p, B in zip(pivots, forms):
        r = el.rank(B)
        ranks.append(r)
        if r >= 4:
            return HyperplaneAnswer(False, None, None, {"reason": "rank>=4", "pivot": p, "rank": r})
        if r == 2:
            S = S & el.span(B, n)
    if S.is_zero():
        return HyperplaneAnswer(False, None, None, {"reason": "empty intersection", "ranks": ranks})
    phi = S.basis[0]
    A = el.kernel([phi], n)
    if not (D <= A and la.is_abelian_subspace(g, A)):
        raise AssertionError("hyperplane decision produced a non-abelian kernel")
    return HyperplaneAnswer(True, phi, A, {"ranks": ranks})


# pencil of alternating forms


def pencil_matrix(g: LieAlgebra, T: Sequence[Sequence] | None = None) -> sp.SymMatrix:
    """M(t)_ij = sum_k a_k [e_i, e_j]_{p_k} with a = sum_l t_l T_l.

    ``T`` lists basis vectors of a subspace of functional coordinates; the
    default is the standard basis, so the variables are the coordinates of
    the functional on [g,g] directly.
    """
    pivots, forms = coordinate_forms(g)
    m = len(pivots)
    if T is None:
        T = el.identity(m)
    d = len(T)
    variables = tuple(f"t{i + 1}" for i in range(d))
    n = g.dim
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            coeffs = [sum((Fraction(b[k]) * forms[k][i][j] for k in range(m)), Fraction(0)) for b in T]
            row.append(sp.Poly.linear(variables, coeffs))
        rows.append(row)
    return sp.SymMatrix(rows, antisymmetric=True)


def _principal_pfaffians(M: sp.SymMatrix) -> dict[tuple[int, ...], sp.Poly]:
    n = M.size
    out = {}
    for size in range(2, n + 1, 2):
        for I in itertools.combinations(range(n), size):
            out[I] = sp.pfaffian(M.principal(I))
    return out


def _zero_set(q: sp.Poly) -> tuple[str, Subspace | None, int]:
    """Classify the real zero set of a homogeneous Pfaffian as a subspace, if it is one."""
    d = len(q.variables)
    deg = q.degree()
    if deg == 0:
        return "none", el.zero(d), 0
    if deg == 1:
        return "hyperplane", el.kernel([q.linear_coefficients()], d), 0
    if deg == 2:
        sign = sp.semidefinite_sign(q)
        if sign:
            return "semidefinite", el.kernel(sp.quadratic_form_matrix(q), d), sign
    return "unsupported", None, 0


def _radical_vectors(M: sp.SymMatrix, I: Sequence[int], pf: sp.Poly) -> list[list[sp.Poly]]:
    """Kernel vectors of M valid wherever Pf_I != 0, by Cramer's rule on the I-block."""
    n = M.size
    r = len(I)
    variables = M.variables
    J = [j for j in range(n) if j not in I]
    det = pf * pf
    adj = [[None] * r for _ in range(r)]
    for a in range(r):
        for b in range(r):
            rows = [I[x] for x in range(r) if x != b]
            cols = [I[y] for y in range(r) if y != a]
            minor = sp.determinant(sp.SymMatrix([[M[i, j] for j in cols] for i in rows])) if r > 1 \
                else sp.Poly.const(variables, 1)
            adj[a][b] = minor if (a + b) % 2 == 0 else -minor
    out = []
    for j in J:
        k = [sp.Poly(variables) for _ in range(n)]
        k[j] = det
        for a in range(r):
            s = sp.Poly(variables)
            for b in range(r):
                s = s + adj[a][b] * M[I[b], j]
            k[I[a]] = -s
        out.append(k)
    return out


def _poly_mat_vec(M: sp.SymMatrix, k: Sequence[sp.Poly]) -> list[sp.Poly]:
    n = M.size
    out = []
    for i in range(n):
        s = sp.Poly(M.variables)
        for c in range(n):
            if not M[i, c].is_zero() and not k[c].is_zero():
                s = s + M[i, c] * k[c]
        out.append(s)
    return out


def _poly_bracket(g: LieAlgebra, u: Sequence[sp.Poly], v: Sequence[sp.Poly], variables) -> list[sp.Poly]:
    n = g.dim
    out = [sp.Poly(variables) for _ in range(n)]
    for (i, j), vec in g.constants.items():
        coef = u[i] * v[j] - u[j] * v[i]
        if coef.is_zero():
            continue
        for c, x in enumerate(vec):
            if x:
                out[c] = out[c] + coef * x
    return out


def _small_points(d: int, max_height: int = 6) -> Iterator[tuple[int, ...]]:
    for h in range(1, max_height + 1):
        for c in itertools.product(range(-h, h + 1), repeat=d):
            if max(map(abs, c)) == h:
                yield c


def _vec_json(v) -> list[str]:
    return [str(Fraction(x)) for x in v]


def _mat_json(m) -> list[list[str]]:
    return [_vec_json(r) for r in m]


@dataclass(frozen=True)
class PencilResult:
    status: str  # OBSTRUCTED | NOT_OBSTRUCTED | UNKNOWN
    certificate: Certificate | None = None
    witness: dict | None = None
    reason: str = ""


def pencil_obstruction(g: LieAlgebra) -> PencilResult:
    """Try to prove that rad(B_psi) is abelian for every real psi != 0 on [g,g].

    If so, no 2-dimensional V satisfies conditions (1) and (3) together,
    since (3) holds exactly when V lies in such a radical.  The functional
    space is cut into strata: on each linear stratum a nonvanishing
    principal Pfaffian of maximal size gives polynomial radical vectors,
    and the Pfaffian's zero set is recursed into when it is a subspace
    (a hyperplane or the kernel of a semidefinite quadratic).
    """
    _require_nilpotent(g)
    D = la.derived_algebra(g)
    if D.dim < 1:
        raise PreconditionError("pencil analysis needs dim [g,g] >= 1")
    strata = []
    T: list[el.Vector] = list(el.identity(D.dim))
    while T:
        M = pencil_matrix(g, T)
        d = len(T)
        variables = M.variables
        pfs = _principal_pfaffians(M)
        nonzero = {I: q for I, q in pfs.items() if not q.is_zero()}
        if not nonzero:
            # B_psi = 0 on the whole stratum, so the radical is all of g
            t0 = (1,) + (0,) * (d - 1)
            u, v = next((g.basis_vector(i), g.basis_vector(j)) for (i, j) in g.constants)
            return PencilResult("NOT_OBSTRUCTED", witness=_pencil_witness(T, t0, u, v))
        r = max(len(I) for I in nonzero)
        options = []
        for I, q in nonzero.items():
            if len(I) != r:
                continue
            kind, Z, sign = _zero_set(q)
            if Z is not None:
                options.append((Z.dim if kind != "none" else -1, I, kind, Z, sign))
        if not options:
            return PencilResult("UNKNOWN", reason=f"rank-drop locus on a {d}-dimensional stratum is not a subspace")
        _, I, kind, Z, sign = min(options, key=lambda o: (o[0], o[1]))
        pf = nonzero[I]
        radical = _radical_vectors(M, I, pf)
        for k in radical:
            if any(not x.is_zero() for x in _poly_mat_vec(M, k)):
                raise AssertionError("Cramer kernel vector is not in the kernel")
        for (a, ka), (b, kb) in itertools.combinations(enumerate(radical), 2):
            br = _poly_bracket(g, ka, kb, variables)
            if any(not x.is_zero() for x in br):
                for t0 in _small_points(d):
                    if pf.evaluate(t0) and any(x.evaluate(t0) for x in br):
                        u = tuple(x.evaluate(t0) for x in ka)
                        v = tuple(x.evaluate(t0) for x in kb)
                        return PencilResult("NOT_OBSTRUCTED", witness=_pencil_witness(T, t0, u, v))
                raise AssertionError("no sample point found for a nonzero polynomial")
        strata.append({
            "basis": _mat_json(T),
            "generic_rank": r,
            "index": list(I),
            "pfaffian": pf.to_json(),
            "zero_set": {"kind": kind, "basis": _mat_json(Z.basis), "sign": sign},
            "radical": [[x.to_json() for x in k] for k in radical],
        })
        T = [el.combine(z, T, D.dim) for z in Z.basis] if kind != "none" else []
    cert = Certificate("PENCIL_ALL_RADICALS_ABELIAN", {"derived_pivots": list(D.pivots), "strata": strata})
    return PencilResult("OBSTRUCTED", certificate=cert)


def _pencil_witness(T, t0, u, v) -> dict:
    psi = el.combine(t0, T, len(T[0]))
    return {"psi": _vec_json(psi), "v1": _vec_json(u), "v2": _vec_json(v)}


# verdict pipelines


def _int_matrix(rows) -> np.ndarray:
    return np.array([[int(x) for x in r] for r in rows], dtype=np.int64)


class _Screen:
    """Mod-p screening of batches of candidate subspaces.

    Brackets are exact integers when the structure constants are integers
    (candidates have small entries, so nothing overflows); ranks are taken
    modulo P.  Conditions are applied in stages so the expensive ones only
    see survivors.
    """

    def __init__(self, g: LieAlgebra):
        self.g = g
        self.n = g.dim
        self.c_int = modp.integer_tensor(g.table)
        self.c = modp.structure_tensor(g.table)

    def brackets(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.c_int is not None:
            return modp.exact_brackets(a, b, self.c_int) % modp.P
        return modp.batched_brackets(a % modp.P, b % modp.P, self.c)

    def rank(self, *parts: np.ndarray) -> np.ndarray:
        return modp.batched_rank(np.concatenate(parts, axis=1))

    def v2(self, V: np.ndarray, dim_derived: int) -> np.ndarray:
        ok = self.brackets(V[:, :1], V[:, 1:2]).any(axis=(1, 2))
        sel = np.flatnonzero(ok)
        V = V[sel]
        eye = np.broadcast_to(np.eye(self.n, dtype=np.int64), (len(V), self.n, self.n))
        K = self.brackets(V, eye)
        rk = modp.batched_rank(K)
        rvk = self.rank(V % modp.P, K)
        ok[sel] = (rvk == rk + 2) & (rk < dim_derived)
        return ok

    def decomposition(self, Hs: np.ndarray, Vs: np.ndarray, mutual: bool, v_subalgebra: bool) -> np.ndarray:
        a, b = Hs.shape[1], Vs.shape[1]
        ok = np.ones(len(Hs), dtype=bool)

        def stage(test):
            sel = np.flatnonzero(ok)
            if len(sel):
                ok[sel] = test(Hs[sel], Vs[sel])

        if not v_subalgebra:
            # necessary for openness and free of any rank computation
            stage(lambda H, V: self.brackets(V, V).any(axis=(1, 2)))
            stage(lambda H, V: self.brackets(H, H).any(axis=(1, 2)))
        stage(lambda H, V: self.rank(H % modp.P, self.brackets(V, H)) == a)
        stage(lambda H, V: self.rank(H % modp.P, V % modp.P) == self.n)
        v_closed = lambda H, V: self.rank(V % modp.P, self.brackets(V, V)) == b
        if v_subalgebra:
            stage(v_closed)
        else:
            stage(lambda H, V: ~v_closed(H, V))
            stage(lambda H, V: self.rank(H % modp.P, self.brackets(H, H)) > a)
        if mutual:
            stage(lambda H, V: self.rank(V % modp.P, self.brackets(V, H)) == b)
        return ok


def _rref_planes(coords: Sequence[int], n: int, height: int) -> Iterator[np.ndarray]:
    """Batches of 2-planes in span(e_i : i in coords), in reduced row echelon form."""
    coords = sorted(coords)
    values = range(-height, height + 1)
    for a, b in itertools.combinations(range(len(coords)), 2):
        p1, p2 = coords[a], coords[b]
        free1 = [coords[x] for x in range(a + 1, len(coords)) if x != b]
        free2 = [coords[x] for x in range(b + 1, len(coords))]
        nfree = len(free1) + len(free2)
        rows = list(itertools.product(values, repeat=nfree))
        grid = np.array(rows, dtype=np.int64).reshape(len(rows), nfree)
        for start in range(0, len(grid), _BATCH):
            chunk = grid[start:start + _BATCH]
            V = np.zeros((len(chunk), 2, n), dtype=np.int64)
            V[:, 0, p1] = 1
            V[:, 1, p2] = 1
            for col, pos in enumerate(free1):
                V[:, 0, pos] = chunk[:, col]
            for col, pos in enumerate(free2):
                V[:, 1, pos] = chunk[:, len(free1) + col]
            yield V


def _v2_candidate_batches(g: LieAlgebra, seed: int, random_budget: int) -> Iterator[tuple[str, np.ndarray]]:
    n = g.dim
    Z = la.center(g)
    noncentral = [i for i in range(n) if not el.contains(Z, g.basis_vector(i))]
    for h in (1, 2):
        for V in _rref_planes(noncentral, n, h):
            yield "noncentral", V
    for V in _rref_planes(range(n), n, 1):
        yield "full", V
    rng = np.random.default_rng([seed, n, 2])
    left = random_budget
    while left > 0:
        size = min(left, _BATCH)
        left -= size
        yield "random", rng.integers(-3, 4, size=(size, 2, n))


def search_v2(g: LieAlgebra, seed: int | None = None, random_budget: int = 2000) -> tuple[Subspace | None, int]:
    """First 2-plane (by candidate index) that passes the three conditions exactly."""
    seed = default_seed() if seed is None else seed
    screen = _Screen(g)
    dim_d = la.derived_algebra(g).dim
    trials = 0
    if dim_d < 2:
        return None, 0
    for _, V in _v2_candidate_batches(g, seed, random_budget):
        mask = screen.v2(V, dim_d)
        for idx in np.flatnonzero(mask):
            cand = el.span([tuple(Fraction(int(x)) for x in row) for row in V[idx]], g.dim)
            if cand.dim == 2 and v2_conditions(g, cand).all():
                return cand, trials + int(idx) + 1
        trials += len(V)
    return None, trials


def v2_decide(g: LieAlgebra, seed: int | None = None, random_budget: int = 2000,
              cross_check: bool = False) -> Verdict:
    """Does g have an open respectful decomposition with dim V = 2?"""
    _require_nilpotent(g)
    V, trials = search_v2(g, seed, random_budget)
    if V is not None:
        d = Decomposition(g, construct_H_from_V(g, V), V)
        if not d.analysis.open_flag:
            raise AssertionError("constructed decomposition is not open respectful")
        if cross_check:
            cert = v2_obstruction(g)
            if isinstance(cert, Certificate):
                raise AssertionError(f"witness found but {cert.kind} also fires")
        return Verdict(Status.EXISTS, witness=d, trials=trials)
    cert = v2_obstruction(g)
    if isinstance(cert, Certificate):
        return Verdict(Status.NOT_EXISTS, certificate=cert, trials=trials)
    return Verdict(Status.UNKNOWN, trials=trials, note=cert)


def v2_obstruction(g: LieAlgebra) -> Certificate | str:
    """First applicable obstruction certificate, or a reason string when none applies."""
    D = la.derived_algebra(g)
    if D.dim <= 1:
        return Certificate("DERIVED_DIM_LE_1", {"derived_basis": _mat_json(D.basis), "dim": D.dim})
    hyp = abelian_hyperplane(g)
    if hyp.found:
        return Certificate("CODIM1_ABELIAN_IDEAL", {
            "functional": _vec_json(hyp.functional), "hyperplane": _mat_json(hyp.hyperplane.basis)})
    pen = pencil_obstruction(g)
    if pen.status == "OBSTRUCTED":
        return pen.certificate
    if pen.status == "NOT_OBSTRUCTED":
        return "pencil has a non-abelian radical and the search found no witness"
    return pen.reason


# dim H = 3 in dimension six


@dataclass(frozen=True)
class TmainConditions:
    a: bool
    b: bool
    c: bool
    d: bool

    def as_dict(self) -> dict[str, bool]:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d}

    def all(self) -> bool:
        return self.a and self.b and self.c and self.d

    def failed(self) -> list[str]:
        return [k for k, v in self.as_dict().items() if not v]


def tmain_conditions(g: LieAlgebra) -> TmainConditions:
    """The four necessary conditions for a 6-dimensional nilpotent g with dim H = 3.

    (a) no abelian ideal of codimension one, (b) dim Z <= 2,
    (c) dim([g,g] + Z) <= 3, (d) dim Z = 1 and dim [g,g] = 3 force
    [g,[g,[g,g]]] != 0.
    """
    if g.dim != 6:
        raise PreconditionError("conditions are stated for 6-dimensional algebras")
    _require_nilpotent(g)
    Z = la.center(g)
    D = la.derived_algebra(g)
    d = not (Z.dim == 1 and D.dim == 3) or not la.lower_central_term(g, 4).is_zero()
    return TmainConditions(
        a=not abelian_hyperplane(g).found,
        b=Z.dim <= 2,
        c=(D + Z).dim <= 3,
        d=d,
    )


def h3_decide(g: LieAlgebra, seed: int | None = None, budget: int = DEFAULT_BUDGET) -> Verdict:
    conds = tmain_conditions(g)
    if not conds.all():
        failed = conds.failed()
        return Verdict(Status.NOT_EXISTS, certificate=Certificate(
            "TMAIN_CONDITION_FAIL", {"which": ",".join(failed), "failed": failed, "conditions": conds.as_dict()}))
    res = witness_search(g, 3, 3, seed=seed, budget=budget)
    if res.decomposition is not None:
        return Verdict(Status.EXISTS, witness=res.decomposition, trials=res.trials)
    return Verdict(Status.UNKNOWN, trials=res.trials, note="conditions hold but no witness was found")


# witness search


@dataclass(frozen=True)
class SearchResult:
    decomposition: Decomposition | None
    trials: int
    phase: str | None
    seed: int


def _perturbations(S_H: Sequence[int], S_V: Sequence[int]) -> list[tuple[int, int, int]]:
    ops = []
    for i in list(S_H) + list(S_V):
        others = S_V if i in S_H else S_H
        for j in others:
            for c in (1, -1, 2, -2):
                ops.append((i, j, c))
    return ops


def _structured_batches(n: int, dimH: int, dimV: int) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Coordinate splits with up to two moves e_i -> e_i + c e_j across the split."""
    for S_V in itertools.combinations(range(n), dimV):
        S_H = tuple(i for i in range(n) if i not in S_V)
        order = list(S_H) + list(S_V)
        row_of = {i: r for r, i in enumerate(order)}
        ops = _perturbations(S_H, S_V)
        combos: list[tuple] = [()] + [(o,) for o in ops]
        combos += [(p, q) for p, q in itertools.combinations(ops, 2) if p[:2] != q[:2]]
        base = np.zeros((n, n), dtype=np.int64)
        for r, i in enumerate(order):
            base[r, i] = 1
        for start in range(0, len(combos), _BATCH):
            chunk = combos[start:start + _BATCH]
            B = np.repeat(base[None], len(chunk), axis=0)
            for idx, moves in enumerate(chunk):
                for i, j, c in moves:
                    B[idx, row_of[i], j] += c
            yield B[:, :dimH], B[:, dimH:]


def witness_search(g: LieAlgebra, dimH: int, dimV: int, mutual: bool = False, v_subalgebra: bool = False,
                   budget: int = DEFAULT_BUDGET, seed: int | None = None, structured: bool = True) -> SearchResult:
    """Search for an open respectful decomposition with the given dimensions.

    With ``v_subalgebra`` the target is a respectful pair whose V is a
    subalgebra (openness is dropped since the two are incompatible).
    Candidates are screened modulo a prime and every hit is re-verified
    exactly; the first verified candidate in enumeration order wins.  A
    miss proves nothing.
    """
    n = g.dim
    if dimH + dimV != n or dimH < 0 or dimV < 0:
        raise el.DimensionError(f"dim H + dim V = {dimH + dimV} but dim g = {n}")
    seed = default_seed() if seed is None else seed
    screen = _Screen(g)
    trials = 0

    def batches():
        if structured:
            for Hs, Vs in _structured_batches(n, dimH, dimV):
                yield "structured", Hs, Vs
        rng = np.random.default_rng([seed, n, dimH, dimV, int(mutual), int(v_subalgebra)])
        left = budget
        while left > 0:
            size = min(left, _BATCH)
            left -= size
            M = rng.integers(-3, 4, size=(size, n, n))
            yield "random", M[:, :dimH], M[:, dimH:]

    if dimH == 0 or dimV == 0:
        return SearchResult(None, 0, None, seed)
    for phase, Hs, Vs in batches():
        mask = screen.decomposition(Hs, Vs, mutual, v_subalgebra)
        for idx in np.flatnonzero(mask):
            d = _exact_candidate(g, Hs[idx], Vs[idx], mutual, v_subalgebra)
            if d is not None:
                bad = [k for k, ok in dc.consequence_checks(d).items() if not ok]
                if bad:
                    raise AssertionError(f"witness violates {bad}: {d}")
                return SearchResult(d, trials + int(idx) + 1, phase, seed)
        trials += len(Hs)
    return SearchResult(None, trials, None, seed)


def _exact_candidate(g, H_rows, V_rows, mutual, v_subalgebra) -> Decomposition | None:
    n = g.dim
    H = el.span([tuple(Fraction(int(x)) for x in r) for r in H_rows], n)
    V = el.span([tuple(Fraction(int(x)) for x in r) for r in V_rows], n)
    if H.dim != len(H_rows) or V.dim != len(V_rows) or not (H + V).is_full():
        return None
    d = Decomposition(g, H, V)
    a = d.analysis
    if v_subalgebra:
        ok = a.respects and a.v_is_subalgebra
    else:
        ok = a.open_flag
    if mutual:
        ok = ok and a.mutual
    return d if ok else None


# certificate replay


def _parse_vec(xs) -> el.Vector:
    return tuple(Fraction(x) for x in xs)


def replay_certificate(g: LieAlgebra, cert: Certificate) -> bool:
    """Re-check a certificate from scratch with exact linear algebra and polynomials."""
    D = la.derived_algebra(g)
    if cert.kind == "DERIVED_DIM_LE_1":
        return D.dim <= 1
    if cert.kind == "CODIM1_ABELIAN_IDEAL":
        phi = _parse_vec(cert.data["functional"])
        if el.is_zero(phi) or any(el.dot(phi, b) for b in D.basis):
            return False
        return la.is_abelian_subspace(g, el.kernel([phi], g.dim))
    if cert.kind == "TMAIN_CONDITION_FAIL":
        conds = tmain_conditions(g).as_dict()
        failed = cert.data["failed"]
        return bool(failed) and all(not conds[k] for k in failed) and cert.data["which"] == ",".join(failed)
    if cert.kind == "PENCIL_ALL_RADICALS_ABELIAN":
        return _replay_pencil(g, cert.data)
    return False


def _replay_pencil(g: LieAlgebra, data: dict) -> bool:
    if not la.is_nilpotent(g):
        return False
    D = la.derived_algebra(g)
    if D.dim < 1 or list(D.pivots) != data["derived_pivots"]:
        return False
    expected_T = [list(r) for r in el.identity(D.dim)]
    strata = data["strata"]
    if not strata:
        return False
    for pos, s in enumerate(strata):
        T = [_parse_vec(r) for r in s["basis"]]
        if [list(r) for r in T] != expected_T:
            return False
        M = pencil_matrix(g, T)
        variables = M.variables
        r = s["generic_rank"]
        I = tuple(s["index"])
        pf = sp.Poly.from_json(variables, s["pfaffian"])
        if len(I) != r or pf.is_zero() or sp.pfaffian(M.principal(I)) != pf:
            return False
        for size in range(r + 2, g.dim + 1, 2):
            for J in itertools.combinations(range(g.dim), size):
                if not sp.pfaffian(M.principal(J)).is_zero():
                    return False
        radical = [[sp.Poly.from_json(variables, x) for x in k] for k in s["radical"]]
        outside = [j for j in range(g.dim) if j not in I]
        if len(radical) != len(outside):
            return False
        det = pf * pf
        for j, k in zip(outside, radical):
            if any(not x.is_zero() for x in _poly_mat_vec(M, k)):
                return False
            if any(k[c] != (det if c == j else sp.Poly(variables)) for c in outside):
                return False
        for ka, kb in itertools.combinations(radical, 2):
            if any(not x.is_zero() for x in _poly_bracket(g, ka, kb, variables)):
                return False
        zs = s["zero_set"]
        Z = el.span([_parse_vec(z) for z in zs["basis"]], len(T))
        kind = zs["kind"]
        if kind == "none":
            if pf.degree() != 0:
                return False
        elif kind == "hyperplane":
            if pf.degree() != 1 or Z != el.kernel([pf.linear_coefficients()], len(T)):
                return False
        elif kind == "semidefinite":
            if pf.degree() != 2 or sp.semidefinite_sign(pf) != zs["sign"] or zs["sign"] == 0:
                return False
            if Z != el.kernel(sp.quadratic_form_matrix(pf), len(T)):
                return False
        else:
            return False
        nxt = [el.combine(z, T, D.dim) for z in Z.basis] if kind != "none" else []
        last = pos == len(strata) - 1
        if last and nxt:
            return False
        expected_T = [list(r) for r in nxt]
    return True
