"""Clebsch-Gordan tables, noble squares, noble correspondence and the wild counterexamples."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from .algebra import make_truncated_algebra
from .automorphism import AugAutomorphism, make_automorphism
from .decomp import Decomposition, decompose, is_isomorphic, jordan_type, label_key, sorted_counts
from .field import make_field
from .geometry import aut_on_point, noble_points, point_element
from .hopf import HopfStructure, catalog, twist_hopf
from .modules import (
    Module,
    direct_sum,
    generator_inclusion,
    induce_along,
    induce_trivial,
    jordan_module,
    kronecker_module,
    restrict_module,
    trivial_module,
    twist_module,
    tensor_module,
)
from .points import ProjPoint, sort_key


class GreenError(RuntimeError):
    pass


def green_formula(p: int, i: int, j: int) -> dict[str, int]:
    """Closed-form coefficients of J_i (x) J_j over k[x]/x^p for i <= j <= p."""
    if not 1 <= i <= j <= p:
        raise ValueError(f"need 1 <= i <= j <= p, got i={i}, j={j}, p={p}")
    out: dict[str, int] = {}
    if p < i + j:
        out[f"J{p}"] = i + j - p
        ells = [j - i + 1 + 2 * m for m in range(p - j)]
    else:
        ells = [j - i + 1 + 2 * m for m in range(i)]
    for ell in ells:
        out[f"J{ell}"] = out.get(f"J{ell}", 0) + 1
    return sorted_counts(out)


def _jordan(A, i: int) -> Module:
    return trivial_module(A) if i == 1 else jordan_module(A, i)


@dataclass
class GreenTable:
    label: str
    bound: int
    cells: dict[tuple[int, int], dict[str, int]]

    def labels(self) -> list[str]:
        seen = {k for c in self.cells.values() for k in c}
        return sorted(seen, key=label_key)

    def to_json(self) -> dict:
        return {
            "structure": self.label,
            "bound": self.bound,
            "cells": [{"i": i, "j": j, "summands": c} for (i, j), c in sorted(self.cells.items())],
        }

    def to_csv(self) -> str:
        cols = [f"J{k}" for k in range(1, self.bound + 1)]
        extra = [lab for lab in self.labels() if lab not in cols]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["structure", "i", "j"] + cols + extra)
        for (i, j), c in sorted(self.cells.items()):
            w.writerow([self.label, i, j] + [c.get(k, 0) for k in cols + extra])
        return buf.getvalue()

    def __eq__(self, other) -> bool:
        return isinstance(other, GreenTable) and self.bound == other.bound and self.cells == other.cells


def cg_table(H: HopfStructure, bound: int | None = None, seed: int = 0) -> GreenTable:
    """Decompose J_i (x)_H J_j for all i <= j <= bound."""
    A = H.algebra
    if not A.is_cyclic:
        raise GreenError("Clebsch-Gordan tables need a single-generator algebra")
    bound = A.dim if bound is None else bound
    if not 1 <= bound <= A.dim:
        raise GreenError(f"bound must lie in 1..{A.dim}")
    mods = {i: _jordan(A, i) for i in range(1, bound + 1)}
    cells = {}
    for i in range(1, bound + 1):
        for j in range(i, bound + 1):
            dec = decompose(tensor_module(H, mods[i], mods[j]), seed=seed)
            if not dec.certified:
                raise GreenError(f"uncertified decomposition of J{i} (x) J{j}")
            dims = sum(int(lab[1:]) * c for lab, c in dec.summands.items())
            if dims != i * j:
                raise GreenError(f"dimension bookkeeping fails for J{i} (x) J{j}")
            cells[(i, j)] = dec.summands
    return GreenTable(H.label, bound, cells)


def table_equal(H1: HopfStructure, H2: HopfStructure, bound: int | None = None, seed: int = 0) -> bool:
    return cg_table(H1, bound, seed).cells == cg_table(H2, bound, seed).cells


# --- Kronecker products ---------------------------------------------------------------

def projective_count_ok(dec: Decomposition, n: int, m: int) -> bool:
    """Projective multiplicity mn - n and non-projective dimension 4n."""
    proj = dec.summands.get("P", 0)
    return proj == m * n - n and dec.dim - 4 * proj == 4 * n


def kronecker_product_decomp(H: HopfStructure, n: int, m: int, pt: ProjPoint, seed: int = 0) -> Decomposition:
    """Certified decomposition of V_2n(pt) (x)_H V_2m(pt), n <= m."""
    A = H.algebra
    if not A.is_kronecker:
        raise GreenError("needs the Kronecker algebra")
    if n > m:
        raise GreenError("need n <= m")
    M = tensor_module(H, kronecker_module(A, n, pt), kronecker_module(A, m, pt))
    dec = decompose(M, seed=seed)
    if not dec.certified:
        raise GreenError(f"uncertified decomposition of V{2 * n} (x) V{2 * m} at {pt}")
    if not projective_count_ok(dec, n, m):
        dec.notes.append(f"projective multiplicity differs from {m * n - n}")
    return dec


@dataclass
class NSetResult:
    structure: str
    point: str
    nmax: int
    members: list[int]
    squares: dict[int, dict[str, int]]
    no_two_consecutive: bool
    shape_violations: list[int]

    @property
    def ok(self) -> bool:
        return self.no_two_consecutive and not self.shape_violations

    def to_json(self) -> dict:
        return {
            "structure": self.structure,
            "point": self.point,
            "nmax": self.nmax,
            "members": self.members,
            "squares": {str(n): s for n, s in self.squares.items()},
            "no_two_consecutive": self.no_two_consecutive,
            "shape_violations": self.shape_violations,
        }


def n_set(H: HopfStructure, pt: ProjPoint, nmax: int = 6, seed: int = 0) -> NSetResult:
    """n with V_2n (x) V_2n = V_2(n-1) + V_2(n+1) + projectives (instead of 2 V_2n + ...)."""
    members, squares, bad = [], {}, []
    for n in range(1, nmax + 1):
        dec = kronecker_product_decomp(H, n, n, pt, seed=seed)
        squares[n] = dec.summands
        nonproj = {k: v for k, v in dec.summands.items() if k != "P"}
        if nonproj == {f"V{2 * n}@{pt}": 2}:
            continue
        other = {f"V{2 * (n + 1)}@{pt}": 1}
        if n > 1:
            other[f"V{2 * (n - 1)}@{pt}"] = 1
        if nonproj == other and dec.summands.get("P", 0) == n * n - n:
            members.append(n)
        else:
            bad.append(n)
    consecutive = all(b - a != 1 for a, b in zip(members, members[1:]))
    return NSetResult(H.label, str(pt), nmax, members, squares, consecutive, bad)


# --- noble correspondence -------------------------------------------------------------------

@dataclass
class CorrespondenceReport:
    structures: tuple[str, str]
    common_points: list[str]
    cells: list[dict] = field(default_factory=list)
    bounds: dict = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(c["verdict"] == "agree" for c in self.cells)

    def to_json(self) -> dict:
        return {
            "structures": list(self.structures),
            "common_noble_points": self.common_points,
            "bounds": self.bounds,
            "cells": self.cells,
            "overall": self.overall,
            "verdict": "in noble correspondence" if self.overall else "NOT in noble correspondence",
        }


def _point_module(A, pt: ProjPoint) -> Module:
    """J1 induced from the order-p subalgebra of a point."""
    if sum(1 for c in pt.coords if c) == 1:
        return induce_trivial(A, pt.coords.index(1))
    return induce_along(A, point_element(A, pt), label=f"ind({pt})")


def noble_correspondence_check(H1: HopfStructure, H2: HopfStructure, nmax: int = 6, seed: int = 0) -> CorrespondenceReport:
    """Compare tensor products of modules supported at common noble points."""
    if H1.algebra != H2.algebra:
        raise GreenError("structures on different algebras")
    A = H1.algebra
    common = sorted(set(noble_points(H1)) & set(noble_points(H2)), key=sort_key)
    rep = CorrespondenceReport((H1.label, H2.label), [str(p) for p in common])
    if A.is_cyclic:
        rep.bounds = {"table_bound": A.dim}
        if common:
            t1, t2 = cg_table(H1, seed=seed), cg_table(H2, seed=seed)
            for key in sorted(t1.cells):
                same = t1.cells[key] == t2.cells[key]
                rep.cells.append({"point": str(common[0]), "i": key[0], "j": key[1],
                                  "left": t1.cells[key], "right": t2.cells[key],
                                  "verdict": "agree" if same else "differ"})
        return rep
    if A.is_kronecker:
        rep.bounds = {"nmax": nmax}
        for pt in common:
            for n in range(1, nmax + 1):
                for m in range(n, nmax + 1):
                    d1 = kronecker_product_decomp(H1, n, m, pt, seed=seed)
                    d2 = kronecker_product_decomp(H2, n, m, pt, seed=seed)
                    verdict = "agree" if d1.summands == d2.summands else "differ"
                    rep.cells.append({"point": str(pt), "n": n, "m": m,
                                      "left": d1.summands, "right": d2.summands, "verdict": verdict})
        return rep
    rep.bounds = {"modules": "J1 induced from each noble point"}
    for pt in common:
        V = _point_module(A, pt)
        res = is_isomorphic(tensor_module(H1, V, V), tensor_module(H2, V, V), seed=seed)
        verdict = {True: "agree", False: "differ", None: "inconclusive"}[res.verdict]
        rep.cells.append({"point": str(pt), "module": V.label, "verdict": verdict, "reason": res.reason})
    return rep


# --- wild counterexamples ---------------------------------------------------------------------

PA_CASES = ("n1n1n1", "n_n_m")


@dataclass
class PAReport:
    case: str
    p: int
    orders: list[int]
    phi: dict
    phi_source: str
    printed_phi: dict
    printed_phi_checks: dict
    isotropy: bool
    base_tensor_ok: dict
    twisted_restriction: dict
    twisted_tensor_differs: dict
    character_condition: str = "vacuous: all algebras here are local, so the character groups are trivial"

    @property
    def inconclusive(self) -> bool:
        return self.base_tensor_ok.get("verdict") is None or self.twisted_tensor_differs.get("verdict") is None

    @property
    def confirmed(self) -> bool:
        return (self.isotropy and self.base_tensor_ok["verdict"] is True
                and self.twisted_restriction["not_homogeneous"] and self.twisted_tensor_differs["verdict"] is True)

    def to_json(self) -> dict:
        if self.inconclusive:
            verdict = "inconclusive"
        elif self.confirmed:
            verdict = "NOT in noble correspondence"
        else:
            verdict = "counterexample not confirmed"
        return {
            "case": self.case,
            "p": self.p,
            "orders": self.orders,
            "phi": self.phi,
            "phi_source": self.phi_source,
            "printed_phi": self.printed_phi,
            "printed_phi_checks": self.printed_phi_checks,
            "isotropy": self.isotropy,
            "certificates": {
                "a_base_square": self.base_tensor_ok,
                "b_twisted_restriction": self.twisted_restriction,
                "c_twisted_square": self.twisted_tensor_differs,
            },
            "character_condition": self.character_condition,
            "verdict": verdict,
            "property_pa": "fails" if self.confirmed else "undetermined",
        }


def is_homogeneous_type(jt: dict[int, int], p: int) -> bool:
    """True for n J_(p^s)."""
    if len(jt) != 1:
        return len(jt) == 0
    size = next(iter(jt))
    while size % p == 0:
        size //= p
    return size == 1


def _phi_checks(A, phi: AugAutomorphism, V: Module) -> dict:
    x_pt = _x_point(A)
    iso = aut_on_point(phi, x_pt) == x_pt
    restricted = restrict_module(generator_inclusion(A, 0), twist_module(phi.inverse(), V))
    jt = jordan_type(restricted)
    return {"isotropy": iso, "restriction_type": {f"J{k}": v for k, v in jt.items()},
            "not_homogeneous": not is_homogeneous_type(jt, A.p)}


def _x_point(A) -> ProjPoint:
    return ProjPoint(A.field, [1] + [0] * (A.rank - 1))


def _case_setup(case: str, p: int, n: int, m: int):
    if case == "n1n1n1":
        if p != 2:
            raise GreenError("the n1^3 case is wild only at p = 2")
        A = make_truncated_algebra(make_field(p), [1, 1, 1])
        printed = ["x + y*z", "y", "z"]
        return A, printed, printed
    if case == "n_n_m":
        if m < n or n < 1:
            raise GreenError("need m >= n >= 1")
        if p == 2 and n == m == 1:
            raise GreenError("n1 + n1 at p = 2 is the tame Kronecker case")
        A = make_truncated_algebra(make_field(p), [n, m])
        if p == 2 and m == n:
            printed = [f"x + y**{p ** (n - 1) - 1}", "y"]
        else:
            printed = ["x + y**2", "y"]
        corrected = [f"x + y**{p ** m - 1}", "y"]
        return A, printed, corrected
    raise GreenError(f"unknown case {case!r}; expected one of {PA_CASES}")


def _try_phi(A, images):
    try:
        return make_automorphism(A, images)
    except Exception as exc:  # invalid printed automorphism is reported, not raised
        return exc


def pa_counterexample(case: str, p: int = 2, n: int = 1, m: int = 2, seed: int = 0) -> PAReport:
    """Build V = J1 induced from <x> and the isotropy phi, then certify (a), (b), (c)."""
    A, printed, corrected = _case_setup(case, p, n, m)
    V = induce_trivial(A, 0)
    index = V.dim
    printed_phi = _try_phi(A, printed)
    if isinstance(printed_phi, AugAutomorphism):
        printed_checks = _phi_checks(A, printed_phi, V)
        printed_checks["valid"] = True
    else:
        printed_checks = {"valid": False, "error": str(printed_phi)}
    usable = printed_checks.get("valid") and printed_checks["isotropy"] and printed_checks["not_homogeneous"]
    if usable:
        phi, source = printed_phi, "printed"
    else:
        phi, source = make_automorphism(A, corrected), "corrected"
    checks = _phi_checks(A, phi, V)
    H = catalog(A)[0]
    multiple = direct_sum([V] * index)
    base = is_isomorphic(tensor_module(H, V, V), multiple, seed=seed)
    a = {"verdict": base.verdict, "reason": base.reason, "index": index}
    # (c): restriction along t -> x separates first, full search second
    Ht = twist_hopf(H, phi)
    tw = tensor_module(Ht, V, V)
    inc = generator_inclusion(A, 0)
    jt_tw = jordan_type(restrict_module(inc, tw))
    jt_mult = jordan_type(restrict_module(inc, multiple))
    if jt_tw != jt_mult:
        c = {"verdict": True, "method": "restriction Jordan type",
             "restriction_twisted": {f"J{k}": v for k, v in jt_tw.items()},
             "restriction_multiple": {f"J{k}": v for k, v in jt_mult.items()}}
    else:
        res = is_isomorphic(tw, multiple, seed=seed)
        c = {"verdict": None if res.verdict is None else not res.verdict, "method": "Hom search",
             "reason": res.reason}
    return PAReport(
        case=case,
        p=p,
        orders=list(A.orders),
        phi={k: v for k, v in zip(A.names, (repr(img) for img in phi.images))},
        phi_source=source,
        printed_phi={k: v for k, v in zip(A.names, printed)},
        printed_phi_checks=printed_checks,
        isotropy=checks["isotropy"],
        base_tensor_ok=a,
        twisted_restriction=checks,
        twisted_tensor_differs=c,
    )

