"""Respectful decompositions g = H + V and the subspaces attached to them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import exactlin as el
from . import liealg as la
from .exactlin import Subspace
from .liealg import LieAlgebra


class PreconditionError(ValueError):
    pass


class Decomposition:
    """Ordered pair (H, V) of complementary subspaces of ``algebra``."""

    def __init__(self, algebra: LieAlgebra, H: Subspace, V: Subspace):
        n = algebra.dim
        if H.ambient_dim != n or V.ambient_dim != n:
            raise el.DimensionError("subspaces do not live in the algebra")
        if H.dim + V.dim != n or not (H + V).is_full():
            raise PreconditionError("H and V are not complementary")
        self.algebra = algebra
        self.H = H
        self.V = V

    @classmethod
    def from_vectors(cls, algebra: LieAlgebra, hs, vs) -> "Decomposition":
        n = algebra.dim
        return cls(algebra, el.span(hs, n), el.span(vs, n))

    def __repr__(self) -> str:
        g = self.algebra
        h = ", ".join(g.format_vector(v) for v in self.H.basis)
        v = ", ".join(g.format_vector(x) for x in self.V.basis)
        return f"Decomposition({g.name}: H=<{h}>, V=<{v}>)"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Decomposition) and self.algebra == other.algebra
                and self.H == other.H and self.V == other.V)

    def __hash__(self) -> int:
        return hash((self.algebra, self.H, self.V))

    @cached_property
    def _dual(self) -> el.Matrix:
        # columns of inv(B)^T give coordinates in the merged basis (H first)
        return el.transpose(el.inverse(self.H.basis + self.V.basis))

    def split(self, x) -> tuple[el.Vector, el.Vector]:
        """(pi_H x, pi_V x) relative to the direct sum itself."""
        c = el.mat_vec(self._dual, x)
        k = self.H.dim
        n = self.algebra.dim
        return el.combine(c[:k], self.H.basis, n), el.combine(c[k:], self.V.basis, n)

    def pi_H(self, x) -> el.Vector:
        return self.split(x)[0]

    def pi_V(self, x) -> el.Vector:
        return self.split(x)[1]

    @cached_property
    def analysis(self) -> "DecompAnalysis":
        return analyze(self)


@dataclass(frozen=True)
class DecompAnalysis:
    respects: bool
    h_is_subalgebra: bool
    v_is_subalgebra: bool
    open_flag: bool
    mutual: bool
    H_V: Subspace
    V_H: Subspace
    K_H: Subspace
    Vbar: Subspace
    Hbar: Subspace
    induced_V: LieAlgebra | None
    induced_V_abelian: bool | None

    def summary(self) -> dict:
        return {
            "respects": self.respects,
            "h_is_subalgebra": self.h_is_subalgebra,
            "v_is_subalgebra": self.v_is_subalgebra,
            "open": self.open_flag,
            "mutual": self.mutual,
            "dim_H_V": self.H_V.dim,
            "dim_V_H": self.V_H.dim,
            "dim_K_H": self.K_H.dim,
            "induced_V_abelian": self.induced_V_abelian,
        }


def induced_algebra(d: Decomposition) -> LieAlgebra:
    """V with the bracket pi_V[., .], on V's canonical basis."""
    g, V = d.algebra, d.V
    brackets = {}
    for i, j in itertools.combinations(range(V.dim), 2):
        brackets[(i, j)] = V.coordinates(d.pi_V(g.bracket(V.basis[i], V.basis[j])))
    return LieAlgebra([f"v{k + 1}" for k in range(V.dim)], brackets, name=f"induced({g.name})")


def analyze(d: Decomposition) -> DecompAnalysis:
    g, H, V = d.algebra, d.H, d.V
    n = g.dim
    br = g.bracket
    VH_br = [br(v, h) for v in V.basis for h in H.basis]
    HH_br = {(i, j): br(H.basis[i], H.basis[j]) for i in range(H.dim) for j in range(H.dim)}
    VV_br = [br(u, v) for u, v in itertools.combinations(V.basis, 2)]

    respects = all(el.contains(H, x) for x in VH_br)
    h_sub = all(el.contains(H, x) for x in HH_br.values())
    v_sub = all(el.contains(V, x) for x in VV_br)
    mutual = respects and all(el.contains(V, x) for x in VH_br)

    H_V = el.span((d.pi_H(x) for x in VV_br), n)
    pv = {ij: d.pi_V(x) for ij, x in HH_br.items()}
    V_H = el.span(pv.values(), n)
    # K_H: coefficients a with sum_i a_i pi_V[h_i, h_j] = 0 for every j
    k = H.dim
    rows = [tuple(pv[(i, j)][c] for i in range(k)) for j in range(k) for c in range(n)]
    coeffs = el.kernel(rows, k) if rows else el.full(k)
    K_H = el.span((el.combine(a, H.basis, n) for a in coeffs.basis), n)

    induced = induced_algebra(d) if respects else None
    return DecompAnalysis(
        respects=respects,
        h_is_subalgebra=h_sub,
        v_is_subalgebra=v_sub,
        open_flag=respects and not h_sub and not v_sub,
        mutual=mutual,
        H_V=H_V,
        V_H=V_H,
        K_H=K_H,
        Vbar=V + H_V,
        Hbar=H + V_H,
        induced_V=induced,
        induced_V_abelian=None if induced is None else induced.is_abelian(),
    )


def is_open_respectful(d: Decomposition, mutual: bool = False) -> bool:
    a = d.analysis
    return a.open_flag and (a.mutual or not mutual)


def check_lji(d: Decomposition) -> dict[str, bool]:
    """Concrete checks of the structural facts forced by Jacobi when V respects H."""
    a = d.analysis
    if not a.respects:
        raise PreconditionError("V does not respect H")
    g = d.algebra
    K = a.K_H
    report = {
        "a": la.is_subalgebra(g, K),
        "b": la.subspace_bracket(g, d.V, K) <= K,
        "c": a.H_V <= K,
        "d": all(
            el.contains(a.V_H, d.pi_V(g.bracket(v, w))) for v in d.V.basis for w in a.V_H.basis
        ),
        "e": la.is_ideal(g, a.Hbar),
        "f": (not a.open_flag) or d.H.dim >= 3,
        "g": (not a.open_flag) or d.H.dim != 3 or (a.H_V == K and a.H_V.dim == 1),
    }
    return report


def _check_open_nilpotent_h3(d: Decomposition) -> None:
    a = d.analysis
    if not a.open_flag:
        raise PreconditionError("decomposition is not open respectful")
    if d.H.dim != 3:
        raise PreconditionError("dim H must be 3")
    if not la.is_nilpotent(d.algebra):
        raise PreconditionError("algebra is not nilpotent")


def adapted_basis(d: Decomposition) -> tuple[el.Vector, el.Vector, el.Vector]:
    """Basis (h1, h2, h3) of H with h3 spanning H_V and Vbar acting triangularly.

    [z, h1] in Sp(h2, h3), [z, h2] in Sp(h3), [z, h3] = 0 for z in Vbar, and
    also [h2, h3] = 0 and pi_V[h1, h2] != 0.
    """
    _check_open_nilpotent_h3(d)
    g, H = d.algebra, d.H
    n = g.dim
    a = d.analysis
    h3 = a.H_V.basis[0]
    line = el.span([h3], n)
    # W = {h in H : [z, h] in Sp(h3) for all z in Vbar}; contains h3, and is larger by Engel
    q = el.quotient_map(line)
    W = H
    for z in a.Vbar.basis:
        cols = [el.mat_vec(q, g.bracket(z, w)) for w in W.basis]
        coeffs = el.kernel(el.transpose(cols), W.dim)
        W = el.span((el.combine(c, W.basis, n) for c in coeffs.basis), n)
    if W.dim < 2:
        raise AssertionError("no invariant flag found; Engel's theorem would be contradicted")
    h2 = el.complement(line, W).basis[0]
    h1 = el.complement(el.span([h2, h3], n), H).basis[0]
    checks = (
        not any(g.bracket(h2, h3)),
        any(d.pi_V(g.bracket(h1, h2))),
        all(el.contains(el.span([h2, h3], n), g.bracket(z, h1)) for z in a.Vbar.basis),
        all(el.contains(line, g.bracket(z, h2)) for z in a.Vbar.basis),
        all(not any(g.bracket(z, h3)) for z in a.Vbar.basis),
    )
    if not all(checks):
        raise AssertionError(f"adapted basis failed its own checks: {checks}")
    return h1, h2, h3


def hbar_type(d: Decomposition) -> str | None:
    g = d.algebra
    a = d.analysis
    if not la.is_subalgebra(g, a.Hbar):
        return None
    return la.small_nilpotent_type(la.restrict(g, a.Hbar))


def induced_type(d: Decomposition) -> str | None:
    a = d.analysis
    if a.induced_V is None:
        return None
    return la.small_nilpotent_type(a.induced_V)


def structural_conditions_dim6(d: Decomposition) -> dict[str, bool]:
    """Conclusions forced on an open respectful (H, V), dim g = 6, dim H = 3, g nilpotent."""
    _check_open_nilpotent_h3(d)
    g = d.algebra
    if g.dim != 6:
        raise PreconditionError("algebra must be 6-dimensional")
    n = g.dim
    a = d.analysis
    h1, h2, h3 = adapted_basis(d)
    v3 = d.pi_V(g.bracket(h1, h2))
    Z = la.center(g)
    Vbar, Hbar = a.Vbar, a.Hbar
    span_h3v3 = el.span([h3, v3], n)
    m = el.span([h2, h3, v3], n)
    derived = la.derived_algebra(g)

    vbar_sub = la.is_subalgebra(g, Vbar)
    vbar_alg = la.restrict(g, Vbar) if vbar_sub else None
    z_vbar = la.centralizer(g, Vbar) & Vbar
    hbar_sub = la.is_subalgebra(g, Hbar)
    z_hbar = la.centralizer(g, Hbar) & Hbar
    hb_type = la.small_nilpotent_type(la.restrict(g, Hbar)) if hbar_sub else None
    v_abelian = bool(a.induced_V_abelian)

    rep = {
        "V_commutes_with_H_V": la.subspace_bracket(g, d.V, a.H_V).is_zero(),
        "Vbar_subalgebra_H_V_central": vbar_sub and a.H_V <= z_vbar,
        "Vbar_is_R+h3": vbar_alg is not None and la.small_nilpotent_type(vbar_alg) == "R+h3",
        "V_H_in_center_of_Vbar": a.V_H <= z_vbar,
        "center_in_Sp(h3,v3)": Z <= span_h3v3,
        "center_of_Hbar_equals_center": hbar_sub and z_hbar == Z,
        "derived_in_Sp(h2,h3,v3)": derived <= m,
        "dim_derived_le_3": derived.dim <= 3,
        "V_abelian_implies_h3_central": (not v_abelian) or el.contains(Z, h3),
        "Hbar_R+h3_iff_dimZ_2": (hb_type == "R+h3") == (Z.dim == 2),
        "dimZ_2_iff_Z_is_Sp(h3,v3)": (Z.dim == 2) == (Z == span_h3v3),
        "dimZ_1_implies_[g,m]_not_in_Z": Z.dim != 1 or not (la.subspace_bracket(g, la.whole(g), m) <= Z),
    }
    return rep


def consequence_checks(d: Decomposition) -> dict[str, bool]:
    """Necessary facts about any respectful witness; each entry is vacuously true when it does not apply."""
    g = d.algebra
    a = d.analysis
    nilpotent = la.is_nilpotent(g)
    dim_derived = la.derived_algebra(g).dim
    out = {
        "open_implies_dimH_ge_3": not a.open_flag or d.H.dim >= 3,
        "open_implies_dimV_ge_2": not a.open_flag or d.V.dim >= 2,
        "open_dimV_2_implies_derived_ge_2": not (a.open_flag and d.V.dim == 2) or dim_derived >= 2,
        "open_dim5_unimodular_derived_3_or_4": not (a.open_flag and g.dim == 5 and la.is_unimodular(g))
        or dim_derived in (3, 4),
        "filiform_V_subalgebra_bound": not (a.respects and a.v_is_subalgebra and nilpotent and la.is_filiform(g))
        or d.V.dim <= g.dim // 2,
        "open_nilpotent_dim_ge_6": not (a.open_flag and nilpotent) or g.dim >= 6,
    }
    if a.respects and nilpotent:
        out["induced_V_nilpotent"] = la.is_nilpotent(a.induced_V)
    return out
