"""Pushforwards of O(d) from projective bundles, checked through EN_d.

The derived pushforward of O(d) is modeled by the complex EN_d; the independent
oracle is the classical presentation of S^d(coker σ) by the relations
W ⊗ S^{d-1} V -> S^d V. All comparisons are graded dimension tables inside a
finite window, so verdicts read "consistent within bound".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional

from .errors import PreconditionError
from .homalg import (GradedFreeModule, GradedMap, HomologyTable, PresentedModule, brutal_truncation,
                     euler_characteristic_check, homology_dims)
from .koszul import TwoTermData, eagon_northcott, koszul_S, _dual_part
from .criteria import degeneracy_profile, has_nonzero_maximal_minor, predict_sym_classical
from .multilinear import sym_basis


@dataclass
class PushforwardAnswer:
    case: str                  # "sym", "zero", "shifted-dual-sym" or "fiber-sequence"
    r: int
    d: int
    e: Optional[int] = None    # the auxiliary degree -d-r where relevant
    rank: Optional[int] = None
    homological_degree: Optional[int] = None
    description: str = ""

    def to_json(self) -> dict:
        return {"case": self.case, "r": self.r, "d": self.d, "e": self.e, "rank": self.rank,
                "homological_degree": self.homological_degree, "description": self.description}


def pushforward_case(r: int, d: int) -> PushforwardAnswer:
    """Case split for any rank r (symbolic, no ranks of F assumed)."""
    e = -d - r
    if d >= 0 and e < 0:
        return PushforwardAnswer("sym", r, d, None, None, 0, f"S^{d} F")
    if d >= 0 and e >= 0:
        return PushforwardAnswer("fiber-sequence", r, d, e, None, None,
                                 f"S^{d} F -> pr_* O({d}) -> Σ^{1 - r}(S^{e} F ⊗ det F)^∨")
    if e < 0:
        return PushforwardAnswer("zero", r, d, None, 0, None, "0")
    return PushforwardAnswer("shifted-dual-sym", r, d, e, None, 1 - r, f"Σ^{1 - r}(S^{e} F ⊗ det F)^∨")


def serre_bundle_pushforward(r: int, d: int) -> PushforwardAnswer:
    """pr_* O(d) for the projective bundle of a free module F of rank r >= 1."""
    if r < 1:
        raise PreconditionError("a vector bundle projectivization needs rank r >= 1")
    ans = pushforward_case(r, d)
    if ans.case == "sym":
        ans.rank = math.comb(d + r - 1, d)
    elif ans.case == "shifted-dual-sym":
        ans.rank = math.comb(ans.e + r - 1, ans.e)
    return ans


def euler_rank_check(sigma_or_r) -> dict:
    """Rank bookkeeping of the Euler sequence: rk of the relative cotangent = r - 1."""
    if isinstance(sigma_or_r, int):
        r = sigma_or_r
    else:
        s = sigma_or_r.sigma if isinstance(sigma_or_r, TwoTermData) else sigma_or_r
        r = s.target.rank - s.source.rank
    rank_F = r
    rank_L = rank_F - 1
    return {"r": r, "relative_virtual_dimension": r - 1, "rank_L": rank_L, "ok": rank_L == r - 1}


def duality_pairing_ranks(r: int, d: int) -> dict:
    """Ranks of pr_* O(d) and pr_* O(-d-r); exactly one side is nonzero off the middle range."""
    a = serre_bundle_pushforward(r, d)
    b = serre_bundle_pushforward(r, -d - r)
    return {"d": d, "rank_d": a.rank, "rank_dual": b.rank, "dual_ranks_agree": a.rank == b.rank,
            "degrees_pair": (a.homological_degree or 0) + (b.homological_degree or 0) == 1 - r
            if a.rank else True}


# ---------------------------------------------------------------------------
# classical oracle

def classical_sym_presentation(sigma: GradedMap, d: int) -> PresentedModule:
    """S^d(coker σ) presented by W ⊗ S^{d-1} V -> S^d V, w ⊗ y ↦ σ(w) y."""
    if d < 0:
        raise PreconditionError("d must be nonnegative")
    R = sigma.ring
    W, V = sigma.source, sigma.target
    gens_labels = sym_basis(V.rank, d)
    gens = GradedFreeModule(R, [sum(V.degrees[a] for a in g) for g in gens_labels], gens_labels)
    rel_labels = [(w, y) for w in range(W.rank) for y in sym_basis(V.rank, d - 1)] if d >= 1 else []
    rels = GradedFreeModule(R, [W.degrees[w] + sum(V.degrees[a] for a in y) for w, y in rel_labels], rel_labels)
    gidx = {g: k for k, g in enumerate(gens_labels)}
    ents = [[R.zero] * rels.rank for _ in range(gens.rank)]
    for col, (w, y) in enumerate(rel_labels):
        # σ(w)·y^μ, expanded directly in S^d V
        for t in range(V.rank):
            a = sigma.entries[t][w]
            if a:
                key = tuple(sorted(y + (t,)))
                ents[gidx[key]][col] = ents[gidx[key]][col] + a
    return PresentedModule(GradedMap(rels, gens, ents))


# ---------------------------------------------------------------------------
# the check itself

@dataclass
class Verdict:
    name: str
    passed: Optional[bool]      # None = observation only
    bidegrees: List[List[int]] = dc_field(default_factory=list)
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "bidegrees": self.bidegrees, "detail": self.detail}


@dataclass
class SerreCheckRecord:
    sigma: GradedMap
    d: int
    e_max: int
    case: PushforwardAnswer
    table: HomologyTable
    oracle: Dict[str, object]
    verdicts: List[Verdict]

    @property
    def passed(self) -> bool:
        return all(v.passed is not False for v in self.verdicts)

    def to_json(self) -> dict:
        return {
            "sigma": self.sigma.to_strings(),
            "d": self.d,
            "e_max": self.e_max,
            "case": self.case.to_json(),
            "EN_homology": self.table.to_json(),
            "oracle": self.oracle,
            "verdicts": [v.to_json() for v in self.verdicts],
            "passed": self.passed,
            "status": "consistent within bound" if self.passed else "mismatch",
        }


def _compare(name: str, got: Dict[int, int], want: Dict[int, int], n: int) -> Verdict:
    bad = [[n, e] for e in sorted(set(got) | set(want)) if got.get(e, 0) != want.get(e, 0)]
    checked = [[n, e] for e in sorted(set(got) | set(want))]
    return Verdict(name, not bad, bad or checked, "mismatch at listed bidegrees" if bad else "")


def _zero_above(name: str, H: HomologyTable, above: int) -> Verdict:
    bad = [[n, e] for (n, e), v in sorted(H.entries.items()) if n > above and v]
    return Verdict(name, not bad, bad, "nonzero homology at listed bidegrees" if bad else "")


def generalized_serre_check(sigma: GradedMap, d: int, e_max: int = 8) -> SerreCheckRecord:
    """Build EN_d and compare its homology with the classical oracle for the (r, d) case."""
    if not has_nonzero_maximal_minor(sigma):
        raise PreconditionError("σ is not generically injective: every maximal minor vanishes")
    if not sigma.is_homogeneous():
        raise PreconditionError("σ must be homogeneous")
    data = TwoTermData(sigma)
    r = data.r
    C = eagon_northcott(data, d)
    e_min = min(C.min_generator_degree(), 0)
    H = homology_dims(C, e_max, e_min)
    case = pushforward_case(r, d)
    verdicts: List[Verdict] = []
    oracle: Dict[str, object] = {}
    verdicts.append(Verdict("euler characteristic", euler_characteristic_check(C, H)))

    if case.case == "sym":
        pres = classical_sym_presentation(sigma, d)
        want = pres.graded_dims(e_max, e_min)
        oracle["H0_classical"] = {str(e): v for e, v in sorted(want.items())}
        verdicts.append(_compare("H0 equals classical S^d(coker)", {e: H.dim(0, e) for e in want}, want, 0))
        prof = degeneracy_profile(sigma)
        side = "F" if not prof.transposed else "dual"
        predicted, why = predict_sym_classical(prof, d, side)
        oracle["predicted_classical"] = predicted
        if predicted:
            verdicts.append(_zero_above("higher homology vanishes", H, 0))
        else:
            verdicts.append(Verdict("higher homology vanishes", None, [], f"not predicted ({why})"))
    elif case.case == "zero":
        verdicts.append(_zero_above("EN_d is acyclic", H, -10 ** 9))
    elif case.case == "shifted-dual-sym":
        e = case.e
        pres = classical_sym_presentation(sigma, e)
        # Hom(S^e coker, R) ⊗ (det F)^∨ sits in homological degree 1 - r
        raw = pres.dual_kernel_dims(e_max + data.det_degree, e_min + data.det_degree)
        want = {k - data.det_degree: v for k, v in raw.items()}
        oracle["top_homology_dual_of_classical"] = {str(k): v for k, v in sorted(want.items())}
        verdicts.append(_compare("top homology equals twisted dual of S^e(coker)",
                                 {k: H.dim(1 - r, k) for k in want}, want, 1 - r))
        others = {f"{n},{k}": v for (n, k), v in sorted(H.entries.items()) if n != 1 - r and v}
        verdicts.append(Verdict("lower homology (observation only)", None,
                                [[int(x) for x in key.split(",")] for key in others], str(others)))
    else:  # fiber sequence
        e = case.e
        T = brutal_truncation(C, d)
        les = T.les_exactness(e_max, e_min)
        verdicts.append(Verdict("truncation long exact sequence", les.exact,
                                [[0, k] for k, ok in sorted(les.per_degree.items()) if not ok], "; ".join(les.failures)))
        verdicts.append(Verdict("sub-complex equals S^d", T.sub == koszul_S(data, d)))
        expect_q = _dual_part(data, e)
        same = T.quotient.support == expect_q.support and all(
            T.quotient.terms[k].degrees == expect_q.terms[k].degrees for k in expect_q.support) and all(
            T.quotient.diff(k) == expect_q.diff(k) for k in expect_q.diffs)
        verdicts.append(Verdict("quotient equals shifted twisted dual of S^e", same))
        oracle["sub_homology"] = homology_dims(T.sub, e_max, e_min).to_json()
        oracle["quotient_homology"] = homology_dims(T.quotient, e_max, e_min).to_json()
    return SerreCheckRecord(sigma, d, e_max, case, H, oracle, verdicts)


__all__ = [
    "PushforwardAnswer", "SerreCheckRecord", "Verdict", "serre_bundle_pushforward", "pushforward_case",
    "classical_sym_presentation", "generalized_serre_check", "euler_rank_check", "duality_pairing_ranks",
]
