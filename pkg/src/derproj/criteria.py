"""Degeneracy loci of σ: W -> V and the codimension criteria for classicality.

With m = rk W <= rk V = n and r = n - m, let c_i = codim X_i where X_i is cut
out by the (m+1-i)-minors of σ. The conditions are

    (a)  c_i >= i                (a') c_i >= i + 1          (only for r >= 1)
    (b)  c_i >= r + i            (b') c_1 = r + 1, c_i >= r + i + 1 for i >= 2
    (c)  c_i >= r + 2i - 1       (c') c_1 = r + 1, c_i >= r + 2i for i >= 2

The equalities "c_1 = r + 1" are evaluated as "c_1 >= r + 1": for a nonempty X_1
the Macaulay bound c_1 <= r + 1 makes the two agree, and for an empty X_1
(c_1 = ∞) the condition is vacuous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional

from .errors import InternalConsistencyError, PreconditionError
from .groebner import ideal_codim, minors, minors_ideal
from .homalg import GradedMap, HomologyTable, homology_dims
from .koszul import TwoTermData, koszul_S


def _codim_json(c):
    return "inf" if c == math.inf else int(c)


@dataclass
class DegeneracyProfile:
    sigma: GradedMap          # oriented so that rank source <= rank target
    transposed: bool
    codims: List[object]      # c_1..c_m, ints or math.inf

    @property
    def m(self) -> int:
        return self.sigma.source.rank

    @property
    def n(self) -> int:
        return self.sigma.target.rank

    @property
    def r(self) -> int:
        return self.n - self.m

    def c(self, i: int):
        return self.codims[i - 1]

    def is_monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.codims, self.codims[1:]))

    def within_expected(self) -> bool:
        """c_i <= (r + i) i whenever finite."""
        return all(c == math.inf or c <= (self.r + i) * i for i, c in enumerate(self.codims, 1))

    def to_json(self) -> dict:
        return {"codims": [_codim_json(c) for c in self.codims], "transposed": self.transposed,
                "m": self.m, "n": self.n, "r": self.r}


def degeneracy_profile(sigma: GradedMap) -> DegeneracyProfile:
    """Codimensions c_1..c_m of the degeneracy loci (transposing when rk W > rk V)."""
    transposed = sigma.source.rank > sigma.target.rank
    s = sigma.transpose() if transposed else sigma
    m = s.source.rank
    codims = [ideal_codim(minors_ideal(s, m + 1 - i)) for i in range(1, m + 1)]
    return DegeneracyProfile(s, transposed, codims)


def _all(profile: DegeneracyProfile, bound) -> bool:
    return all(profile.c(i) >= bound(i) for i in range(1, profile.m + 1))


def evaluate_conditions(p: DegeneracyProfile) -> Dict[str, Optional[bool]]:
    r = p.r
    c1_ok = p.m == 0 or p.c(1) >= r + 1
    return {
        "a": _all(p, lambda i: i),
        "a_prime": _all(p, lambda i: i + 1) if r >= 1 else None,
        "b": _all(p, lambda i: r + i),
        "b_prime": c1_ok and all(p.c(i) >= r + i + 1 for i in range(2, p.m + 1)),
        "c": _all(p, lambda i: r + 2 * i - 1),
        "c_prime": c1_ok and all(p.c(i) >= r + 2 * i for i in range(2, p.m + 1)),
    }


@dataclass
class CriteriaReport:
    profile: DegeneracyProfile
    conditions: Dict[str, Optional[bool]]
    predictions: Dict[str, Optional[bool]]
    assumptions: Dict[str, bool] = dc_field(default_factory=lambda: {"CM": True, "integral": True})

    @property
    def r(self) -> int:
        return self.profile.r

    def implication_chain_holds(self) -> bool:
        c = self.conditions

        def imp(x, y):
            return (not x) or y

        if self.r >= 1:
            order = ["c_prime", "c", "b_prime", "b", "a_prime", "a"]
            return all(imp(c[a], c[b]) for a, b in zip(order, order[1:]))
        return (c["a"] == c["b"] and imp(c["c_prime"], c["c"]) and imp(c["c"], c["b_prime"])
                and imp(c["b_prime"], c["b"]))

    def to_json(self) -> dict:
        return {
            "codims": [_codim_json(x) for x in self.profile.codims],
            "transposed": self.profile.transposed,
            "rank": self.r,
            "conditions": {k: ("not applicable" if v is None else v) for k, v in self.conditions.items()},
            "predictions": {k: ("not applicable" if v is None else v) for k, v in self.predictions.items()},
            "assumptions": dict(self.assumptions),
        }


def has_nonzero_maximal_minor(sigma: GradedMap) -> bool:
    k = min(sigma.source.rank, sigma.target.rank)
    if k == 0:
        return True
    return any(minors(sigma.entries, sigma.ring, k))


def classicality_report(sigma: GradedMap, cm: bool = True, integral: bool = True) -> CriteriaReport:
    """Evaluate (a)–(c') and the classicality predictions they imply.

    ``cm``/``integral`` record the user's assertion about the base; they are not verified.
    """
    if not has_nonzero_maximal_minor(sigma):
        raise PreconditionError("σ is not generically injective: every maximal minor vanishes")
    p = degeneracy_profile(sigma)
    cond = evaluate_conditions(p)
    pred = {
        "P(F) classical": cond["a"],
        # for r = 0, ΣF^∨ is presented by σ^T, whose minors agree with those of σ
        "P(F) classical irreducible": cond["a_prime"] if p.r >= 1 else cond["b_prime"],
        "P(sigma F dual) classical": cond["b"],
        "P(sigma F dual) classical irreducible": cond["b_prime"],
        "Z classical": cond["c"],
        "Z classical irreducible": cond["c_prime"],
    }
    rep = CriteriaReport(p, cond, pred, {"CM": bool(cm), "integral": bool(integral)})
    if not rep.implication_chain_holds():
        raise InternalConsistencyError(f"implication chain violated: {cond}")
    return rep


# ---------------------------------------------------------------------------
# classicality of derived symmetric powers

@dataclass
class SymClassicality:
    side: str                   # "F" or "dual"
    d: int
    predicted_classical: bool
    observed_vanishing: bool    # H_{>0} = 0 within the bound
    e_max: int
    table: HomologyTable
    reason: str

    @property
    def consistent(self) -> bool:
        return self.predicted_classical == self.observed_vanishing

    def to_json(self) -> dict:
        return {"side": self.side, "d": self.d, "predicted_classical": self.predicted_classical,
                "observed_vanishing_within_bound": self.observed_vanishing, "e_max": self.e_max,
                "verdict": "consistent" if self.consistent else "inconsistent", "reason": self.reason,
                "homology": self.table.to_json()}


def predict_sym_classical(p: DegeneracyProfile, d: int, side: str):
    """Codimension prediction for Sym^d of F = cofib(σ) (side "F") or of ΣF^∨ (side "dual")."""
    m, r = p.m, p.r
    k = min(m, d)
    if side == "F":
        return all(p.c(i) >= i for i in range(1, k + 1)), f"c_i >= i for i <= {k}"
    if side == "dual":
        if d == 0:
            return True, "degree 0 is always classical"
        if d <= r:
            return False, f"1 <= d <= r = {r}: Sym^d of ΣF^∨ has nonzero top homotopy"
        return all(p.c(i) >= r + i for i in range(1, k + 1)), f"c_i >= r + i for i <= {k}"
    raise ValueError("side must be 'F' or 'dual'")


def sym_classicality(sigma: GradedMap, d: int, side: str, e_max: int = 8) -> SymClassicality:
    """Predict classicality of Sym^d on the chosen side and compare with H_{>0} of 𝕊^d."""
    if d < 0:
        raise PreconditionError("d must be nonnegative")
    p = degeneracy_profile(sigma)
    # with rk W > rk V the F side of σ is the dual side of σ^T, and vice versa
    eff_side = side if not p.transposed else {"F": "dual", "dual": "F"}[side]
    predicted, reason = predict_sym_classical(p, d, eff_side)
    tt = TwoTermData(sigma) if side == "F" else TwoTermData(sigma.transpose())
    H = homology_dims(koszul_S(tt, d), e_max)
    observed = all(v == 0 for (n, _), v in H.entries.items() if n > 0)
    return SymClassicality(side, d, predicted, observed, e_max, H, reason)


__all__ = [
    "DegeneracyProfile", "CriteriaReport", "SymClassicality", "degeneracy_profile", "classicality_report",
    "evaluate_conditions", "sym_classicality", "predict_sym_classical", "has_nonzero_maximal_minor",
]
