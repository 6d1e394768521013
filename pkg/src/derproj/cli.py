"""``derproj`` command-line front end.

Problem files are JSON documents::

    {"field": "q", "variables": ["x", "y"], "matrix": [["x"], ["y"]],
     "source_degrees": [1], "target_degrees": [0], "cosection": ["x", "y"],
     "params": {"d": 2}}

Only ``variables`` and one of ``matrix``/``cosection`` are required. Missing
generator degrees are inferred (first target generator of each connected block
anchored at degree 0). Exit codes: 0 all verdicts pass, 1 a verdict failed,
2 the input was rejected.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Sequence

from .arith import Field, PolynomialRing
from .criteria import classicality_report, sym_classicality
from .errors import ContextError, InternalConsistencyError, ParseError, PreconditionError
from .groebner import det_polys
from .homalg import GradedFreeModule, GradedMap, check_complex, dumps, homology_dims
from .koszul import (TwoTermData, cosection, cosection_koszul, eagon_northcott, en_duality_check, koszul_S,
                     koszul_wedge)
from .serre import generalized_serre_check, serre_bundle_pushforward
from .simplicial import (SimplicialDegreeWindow, dold_kan, homotopy_dims, normalize, simplicial_koszul,
                         simplicial_sym)

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT = 0, 1, 2
DEFAULT_BOUND = 8
DEFAULT_LEVEL = 3


class InputError(ValueError):
    """Problem file or command line rejected."""


# ---------------------------------------------------------------------------
# problem files

@dataclass
class ProblemSpec:
    field: Field
    ring: PolynomialRing
    matrix: Optional[List[list]]
    source_degrees: Optional[List[int]]
    target_degrees: Optional[List[int]]
    cosection: Optional[list]
    params: Dict[str, object] = dc_field(default_factory=dict)

    def sigma(self) -> GradedMap:
        if self.matrix is None:
            raise InputError("this command needs a 'matrix'")
        R = self.ring
        tgt = GradedFreeModule(R, self.target_degrees)
        src = GradedFreeModule(R, self.source_degrees)
        return GradedMap(src, tgt, self.matrix)

    def data(self) -> TwoTermData:
        return TwoTermData(self.sigma())

    def cosection_elements(self) -> list:
        if self.cosection is not None:
            return self.cosection
        if self.matrix is not None:
            if len(self.matrix) == 1:
                return list(self.matrix[0])
            if all(len(r) == 1 for r in self.matrix):
                return [r[0] for r in self.matrix]
        raise InputError("this command needs a 'cosection' (or a one-row/one-column matrix)")


def infer_degrees(entries: Sequence[Sequence], source_degrees=None, target_degrees=None):
    """Generator degrees making every nonzero entry homogeneous of degree src_j - tgt_i.

    Given degrees are kept; the rest is propagated along nonzero entries, each
    connected block anchored at its first target generator (degree 0).
    """
    n = len(entries)
    m = len(entries[0]) if n else 0
    deg = {}
    for i, e in enumerate(entries):
        for j, a in enumerate(e):
            if a:
                h = a.homogeneous_degree()
                if h is None:
                    raise InputError(f"matrix entry [{i}][{j}] = {a} is not homogeneous")
                deg[(i, j)] = h
    val: Dict[tuple, int] = {}
    if target_degrees is not None:
        val.update({("t", i): int(v) for i, v in enumerate(target_degrees)})
    if source_degrees is not None:
        val.update({("s", j): int(v) for j, v in enumerate(source_degrees)})
    order = [("t", i) for i in range(n)] + [("s", j) for j in range(m)]
    seen = set()

    def nbrs(node):
        kind, k = node
        if kind == "t":
            return [(("s", j), deg[(k, j)]) for j in range(m) if (k, j) in deg]
        return [(("t", i), -deg[(i, k)]) for i in range(n) if (i, k) in deg]

    # seeded blocks first, so fixed degrees win over anchors
    for start in [v for v in order if v in val] + order:
        if start in seen:
            continue
        val.setdefault(start, 0)
        seen.add(start)
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v, w in nbrs(u):
                want = val[u] + w
                if v in val and val[v] != want:
                    raise InputError(f"no homogeneous grading: generator {v[0]}{v[1]} needs degrees "
                                     f"{val[v]} and {want}")
                val[v] = want
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
    return [val[("s", j)] for j in range(m)], [val[("t", i)] for i in range(n)]


def _parse_entry(R: PolynomialRing, s, where: str):
    if isinstance(s, (int,)) and not isinstance(s, bool):
        return R.constant(s)
    if not isinstance(s, str):
        raise InputError(f"{where}: expected a polynomial string, got {type(s).__name__}")
    try:
        return R.parse(s)
    except ParseError as e:
        raise InputError(f"{where}: {e}") from None
    except ContextError as e:
        raise InputError(f"{where}: {e}") from None


def problem_from_dict(doc: dict, field_override: Optional[str] = None) -> ProblemSpec:
    if not isinstance(doc, dict):
        raise InputError("problem must be a JSON object")
    try:
        F = Field.from_spec(field_override or doc.get("field", "q"))
    except ValueError as e:
        raise InputError(str(e)) from None
    names = doc.get("variables")
    if not isinstance(names, list) or not all(isinstance(v, str) for v in names):
        raise InputError("'variables' must be a list of names")
    R = PolynomialRing(F, names, doc.get("order", "grevlex"))
    mat = None
    sdeg, tdeg = doc.get("source_degrees"), doc.get("target_degrees")
    if "matrix" in doc:
        raw = doc["matrix"]
        if not isinstance(raw, list) or not raw or not all(isinstance(r, list) for r in raw):
            raise InputError("'matrix' must be a nonempty list of rows")
        width = len(raw[0])
        if any(len(r) != width for r in raw):
            raise InputError("'matrix' rows have different lengths")
        mat = [[_parse_entry(R, a, f"matrix[{i}][{j}]") for j, a in enumerate(r)] for i, r in enumerate(raw)]
        sdeg, tdeg = infer_degrees(mat, sdeg, tdeg)
    cos = None
    if "cosection" in doc:
        cos = [_parse_entry(R, a, f"cosection[{k}]") for k, a in enumerate(doc["cosection"])]
    if mat is None and cos is None:
        raise InputError("problem needs a 'matrix' or a 'cosection'")
    return ProblemSpec(F, R, mat, sdeg, tdeg, cos, dict(doc.get("params", {})))


def load_problem(path: str, field_override: Optional[str] = None) -> ProblemSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: {e.msg} (line {e.lineno}, column {e.colno})") from None
    return problem_from_dict(doc, field_override)


# ---------------------------------------------------------------------------
# markdown rendering

def _md_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(_md_value(x) for x in v) + ")"
    return str(v)


def _md_grid(table_json: dict) -> str:
    from .homalg import HomologyTable
    return HomologyTable.from_json(table_json).to_markdown()


def render_markdown(report: dict) -> str:
    """Human-readable rendering; homology grids become tables."""
    lines = [f"# {report.get('command', 'report')}", ""]

    def head(text):
        if lines[-1] != "":
            lines.append("")
        lines.extend([text, ""])

    for k, v in report.items():
        if k == "command":
            continue
        if isinstance(v, dict) and "H" in v and "e_max" in v:
            head(f"## {k}")
            lines += [_md_grid(v), ""]
        elif isinstance(v, dict):
            head(f"## {k}")
            for kk, vv in v.items():
                if isinstance(vv, dict) and "H" in vv and "e_max" in vv:
                    head(f"### {kk}")
                    lines += [_md_grid(vv), ""]
                else:
                    lines.append(f"- {kk}: {_md_value(vv) if not isinstance(vv, dict) else json.dumps(vv, sort_keys=True)}")
            lines.append("")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            head(f"## {k}")
            cols = sorted({c for row in v for c in row if not isinstance(row.get(c), dict)})
            lines.append("| " + " | ".join(cols) + " |")
            lines.append("|" + "---|" * len(cols))
            for row in v:
                lines.append("| " + " | ".join(_md_value(row.get(c, "")) for c in cols) + " |")
            lines.append("")
        else:
            lines.append(f"- {k}: {_md_value(v)}")
    return "\n".join(lines).rstrip() + "\n"


def emit(report: dict, args, stem: str) -> None:
    fmt = args.format
    js, md = dumps(report) + "\n", render_markdown(report)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        if fmt in ("json", "both"):
            (out / f"{stem}.json").write_text(js, encoding="utf-8")
        if fmt in ("md", "both"):
            (out / f"{stem}.md").write_text(md, encoding="utf-8")
    sys.stdout.write(js if fmt == "json" else md)


# ---------------------------------------------------------------------------
# commands (each returns (report, ok))

def _warn_small_prime(F: Field) -> None:
    if 0 < F.p < 100:
        print(f"warning: characteristic {F.p} < 100; codimensions of integer examples may differ "
              f"from characteristic zero", file=sys.stderr)


def run_analyze(spec: ProblemSpec, e_max: int, sym_degree: Optional[int], cm=True, integral=True):
    sigma = spec.sigma()
    rep = classicality_report(sigma, cm=cm, integral=integral)
    out = {"command": "analyze", "field": spec.field.spec, "sigma": sigma.to_strings()}
    out.update(rep.to_json())
    ok = True
    if sym_degree is not None:
        rows = []
        for side in ("F", "dual"):
            for d in range(sym_degree + 1):
                s = sym_classicality(sigma, d, side, e_max)
                rows.append({"side": side, "d": d, "predicted_classical": s.predicted_classical,
                             "observed_vanishing": s.observed_vanishing,
                             "verdict": "consistent" if s.consistent else "inconsistent"})
                ok &= s.consistent
        out["sym_classicality"] = rows
    return out, ok


def run_complex(spec: ProblemSpec, kind: str, n: int, e_max: int, duality: bool):
    if kind == "S":
        C = koszul_S(spec.data(), n)
    elif kind == "wedge":
        C = koszul_wedge(spec.data(), n)
    elif kind == "EN":
        C = eagon_northcott(spec.data(), n)
    elif kind == "cosection":
        C = cosection_koszul(cosection(spec.ring, spec.cosection_elements()))
    else:
        raise InputError(f"unknown complex kind {kind!r}")
    chk = check_complex(C)
    e_min = min(C.min_generator_degree(), 0) if C.terms else 0
    H = homology_dims(C, e_max, e_min)
    out = {"command": "complex", "kind": kind, "n": n, "field": spec.field.spec,
           "complex": C.to_json(), "d_squared_zero": bool(chk), "homology": H.to_json()}
    ok = bool(chk)
    if duality:
        if kind != "EN":
            raise InputError("--duality applies to EN complexes only")
        rep = en_duality_check(spec.data(), n)
        out["duality"] = rep.to_json()
        ok &= rep.ok
    return out, ok


def run_serre(spec: Optional[ProblemSpec], d: int, e_max: int, bundle_rank: Optional[int]):
    if bundle_rank is not None:
        ans = serre_bundle_pushforward(bundle_rank, d)
        return {"command": "serre", "bundle_rank": bundle_rank, "answer": ans.to_json()}, True
    rec = generalized_serre_check(spec.sigma(), d, e_max)
    out = {"command": "serre", "field": spec.field.spec}
    out.update(rec.to_json())
    return out, rec.passed


def run_simplicial(spec: ProblemSpec, kind: str, level: int, e_max: int, n: int, window_D: Optional[int]):
    out = {"command": "simplicial", "kind": kind, "level": level, "field": spec.field.spec}
    if kind == "dk":
        P = koszul_S(spec.data(), n) if spec.matrix is not None else \
            cosection_koszul(cosection(spec.ring, spec.cosection_elements()))
        if P.support and P.support[-1] > level:
            raise InputError(f"complex reaches degree {P.support[-1]}; raise --level")
        S = dold_kan(P, level)
        ident = S.check_identities()
        back = normalize(S)
        same = back == P
        out.update({"level_ranks": S.level_ranks(), "identities_ok": ident.ok,
                    "roundtrip": "roundtrip ok" if same else "roundtrip mismatch"})
        return out, ident.ok and same
    if kind == "sym":
        S = simplicial_sym(spec.data(), n, level)
        H = homotopy_dims(S, e_max)
        oracle = homology_dims(koszul_S(spec.data(), n), e_max, H.e_min).restrict(S.valid_up_to)
    elif kind == "koszul":
        D = window_D if window_D is not None else level
        W = SimplicialDegreeWindow(D, e_max, level)
        elems = spec.cosection_elements()
        S = simplicial_koszul(spec.ring, elems, W)
        H = homotopy_dims(S, e_max, 0)
        oracle = homology_dims(cosection_koszul(cosection(spec.ring, elems)), e_max, 0).restrict(S.valid_up_to)
        out["window"] = {"D": D, "E": e_max, "N": level}
    else:
        raise InputError(f"unknown simplicial kind {kind!r}")
    ident = S.check_identities()
    agree = all(H.dim(k, e) == oracle.dim(k, e) for k in range(0, S.valid_up_to + 1)
                for e in range(H.e_min, e_max + 1))
    higher = {f"{k},{e}": v for (k, e), v in sorted(H.entries.items()) if k > 0 and v}
    out.update({"level_ranks": S.level_ranks(), "identities_ok": ident.ok, "valid_up_to": S.valid_up_to,
                "homotopy": H.to_json(), "chain_oracle": oracle.to_json(),
                "matches_chain_oracle": agree, "higher_homotopy_nonzero": higher})
    return out, ident.ok and agree


# ---------------------------------------------------------------------------
# corpus

def corpus_path() -> Path:
    return Path(str(resources.files("derproj").joinpath("data/corpus.json")))


def load_corpus(path: Optional[str] = None) -> List[dict]:
    p = Path(path) if path else corpus_path()
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except OSError as e:
        raise InputError(f"corpus file {p} unreadable: {e.strerror}") from None
    entries = doc.get("entries", [])
    for ent in entries:
        for ex in ent.get("expect", []):
            if ex.get("tag") not in ("[PAPER]", "[TRIVIAL]", "[DERIVED]"):
                raise InputError(f"corpus entry {ent.get('name')}: expectation without provenance tag")
    return entries


def _codims_json(cs):
    return ["inf" if c == math.inf else int(c) for c in cs]


def run_entry(entry: dict, e_max: int = DEFAULT_BOUND) -> dict:
    """Run one corpus entry; each expectation becomes one result row."""
    spec = problem_from_dict(entry["problem"])
    sigma = spec.sigma()
    report = classicality_report(sigma)
    rj = report.to_json()
    results = []
    for ex in entry.get("expect", []):
        check = ex["check"]
        row = {"check": check, "tag": ex["tag"], "source": ex["source"], "expected": ex["expect"]}
        if check == "codims":
            got = rj["codims"]
        elif check == "condition":
            row["key"] = ex["key"]
            got = rj["conditions"][ex["key"]]
        elif check == "prediction":
            row["key"] = ex["key"]
            got = rj["predictions"][ex["key"]]
        elif check == "determinant":
            det = det_polys(sigma.entries, spec.ring)
            want = spec.ring.parse(ex["expect"])
            got = str(det)
            row["expected"] = str(want)
        elif check == "sym_classicality":
            s = sym_classicality(sigma, ex["d"], ex["side"], e_max)
            row.update({"side": ex["side"], "d": ex["d"]})
            got = s.predicted_classical if s.consistent else f"inconsistent (observed {s.observed_vanishing})"
        elif check == "serre":
            rec = generalized_serre_check(sigma, ex["d"], e_max)
            row["d"] = ex["d"]
            got = "pass" if rec.passed and rec.case.case == ex.get("case", rec.case.case) else \
                f"fail ({rec.case.case})"
        elif check == "en_duality":
            data = TwoTermData(sigma)
            oks = [en_duality_check(data, d).ok for d in range(ex["d_min"], ex["d_max"] + 1)]
            got = all(oks)
        else:
            raise InputError(f"unknown check {check!r}")
        row["observed"] = got
        row["pass"] = got == row["expected"]
        results.append(row)
    return {"name": entry["name"], "field": spec.field.spec, "results": results,
            "pass": all(r["pass"] for r in results)}


def _threads() -> int:
    raw = os.environ.get("DERPROJ_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise InputError("DERPROJ_THREADS must be a positive integer") from None
    return os.cpu_count() or 1


def run_examples(name: str, e_max: int = DEFAULT_BOUND, corpus: Optional[str] = None):
    entries = load_corpus(corpus)
    if name != "all":
        entries = [e for e in entries if e["name"] == name]
        if not entries:
            raise InputError(f"unknown example {name!r}")
    workers = min(_threads(), len(entries))
    if workers <= 1:
        runs = [run_entry(e, e_max) for e in entries]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(run_entry, entries, [e_max] * len(entries)))
    ok = all(r["pass"] for r in runs)
    summary = [{"name": r["name"], "checks": len(r["results"]), "failed": sum(not x["pass"] for x in r["results"]),
                "pass": r["pass"]} for r in runs]
    return {"command": "examples", "selection": name, "degree_bound": e_max, "summary": summary,
            "entries": runs, "pass": ok}, ok


# ---------------------------------------------------------------------------
# argument parsing

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="coefficient field: q or fp:<p> (overrides the problem file)")
    common.add_argument("--degree-bound", type=int, default=DEFAULT_BOUND, metavar="E",
                        help="largest internal degree examined (default %(default)s)")
    common.add_argument("--level", type=int, default=DEFAULT_LEVEL, metavar="N",
                        help="simplicial level bound (default %(default)s)")
    common.add_argument("--out", metavar="DIR", help="also write reports into DIR")
    common.add_argument("--format", choices=("json", "md", "both"), default="both",
                        help="report format; 'both' prints markdown and writes both files under --out")

    p = argparse.ArgumentParser(prog="derproj", description="Exact chain-level checks for two-term complexes.")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="degeneracy codimensions and classicality criteria")
    a.add_argument("problem")
    a.add_argument("--sym-degree", type=int, help="also compare Sym^d predictions for d <= this")
    a.add_argument("--not-cm", action="store_true", help="record that the base is not asserted Cohen-Macaulay")
    a.add_argument("--not-integral", action="store_true", help="record that the base is not asserted integral")

    c = sub.add_parser("complex", parents=[common], help="build a complex and its homology grid")
    c.add_argument("problem")
    c.add_argument("--kind", choices=("S", "wedge", "EN", "cosection"), required=True)
    c.add_argument("-n", "--n", type=int, default=None, help="power or twist (default: params.n or 1)")
    c.add_argument("--duality", action="store_true", help="also check the EN duality")

    s = sub.add_parser("serre", parents=[common], help="pushforward of O(d) via EN_d")
    s.add_argument("problem", nargs="?")
    s.add_argument("-d", type=int, default=None, help="twist d (default: params.d or 0)")
    s.add_argument("--bundle-rank", type=int, help="answer the vector-bundle table for this rank instead")

    m = sub.add_parser("simplicial", parents=[common], help="simplicial modules and their homotopy")
    m.add_argument("problem")
    m.add_argument("--kind", choices=("dk", "sym", "koszul"), required=True)
    m.add_argument("-n", "--n", type=int, default=None, help="symmetric power (dk/sym)")
    m.add_argument("--sym-bound", type=int, default=None, metavar="D",
                   help="symmetric-degree cut of the Koszul window (default: --level)")

    x = sub.add_parser("examples", parents=[common], help="run the stored example corpus")
    x.add_argument("name", nargs="?", default="all")
    x.add_argument("--corpus", help=f"corpus file (default: the packaged data/corpus.json)")
    return p


def _param(spec: Optional[ProblemSpec], value, key, default):
    if value is not None:
        return value
    if spec is not None and key in spec.params:
        return int(spec.params[key])
    return default


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = None
        if args.field:
            _warn_small_prime(Field.from_spec(args.field))
        if getattr(args, "problem", None):
            spec = load_problem(args.problem, args.field)
            if not args.field:
                _warn_small_prime(spec.field)
        cmd = args.command
        if cmd == "analyze":
            report, ok = run_analyze(spec, args.degree_bound, args.sym_degree,
                                     cm=not args.not_cm, integral=not args.not_integral)
            stem = "analyze"
        elif cmd == "complex":
            n = _param(spec, args.n, "n", 1)
            report, ok = run_complex(spec, args.kind, n, args.degree_bound, args.duality)
            stem = f"complex-{args.kind}-{n}"
        elif cmd == "serre":
            if spec is None and args.bundle_rank is None:
                raise InputError("serre needs a problem file or --bundle-rank")
            d = _param(spec, args.d, "d", 0)
            report, ok = run_serre(spec, d, args.degree_bound, args.bundle_rank)
            stem = f"serre-{d}"
        elif cmd == "simplicial":
            n = _param(spec, args.n, "n", 1)
            report, ok = run_simplicial(spec, args.kind, args.level, args.degree_bound, n, args.sym_bound)
            stem = f"simplicial-{args.kind}"
        else:
            report, ok = run_examples(args.name, args.degree_bound, args.corpus)
            stem = f"examples-{args.name}"
    except (InputError, ParseError, PreconditionError, ContextError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InternalConsistencyError as e:
        print(f"internal consistency failure: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    emit(report, args, stem)
    return EXIT_OK if ok else EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
