"""Experiment runner: parse ring/module specs, execute named operations and
theorem checks, emit deterministic JSON reports.

Spec grammar (INI-like; see README for the full description):

    [ring]            p, vars, weights (optional), defining (optional)
    [ideal NAME]      gens = comma-separated polynomial literals
    [module NAME]     ambient, shifts, gens, rels (columns split by ';')
    [K]               kind = trivial | canonical | explicit, name = ...
    [options]         bound = B, window = lo..hi
    [ops]             one operation per line: VERB ARG...

Exit codes: 0 ok, 1 some verdict failed, 2 usage/parse error, 3 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import cohomology, colinkage, groebner, homalg, linkage, modules, verdict
from .errors import (
    InternalConsistencyError,
    LiaisonError,
    NonCMForCanonical,
    SpecSyntaxError,
    UnknownGallery,
    UnknownName,
)
from .modules import (
    annihilator,
    cyclic_module,
    free_module,
    invariants,
    subquotient,
)
from .ring import DEFAULT_CHARACTERISTIC, make_ring, parse_poly, render_poly


# ---------------------------------------------------------------------------
# experiment specs


@dataclass
class ExperimentSpec:
    ring: object
    ideals: dict
    modules: dict
    k_kind: str
    k_name: str
    bound: int
    window: tuple
    ops: list = field(default_factory=list)
    source: str = ""

    def resolve_K(self):
        if self.k_kind == "trivial":
            return free_module(self.ring, 1)
        if self.k_kind == "canonical":
            return linkage.canonical_module(self.ring)
        return self.modules[self.k_name]


def _split_sections(text):
    sections = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        if line.strip().startswith("["):
            name = line.strip()
            if not name.endswith("]"):
                raise SpecSyntaxError("unterminated section header", lineno)
            sections.append((name[1:-1].strip(), lineno, []))
            current = sections[-1][2]
        else:
            if current is None:
                raise SpecSyntaxError("content before any section", lineno)
            current.append((lineno, line.strip()))
    return sections


def _kv(entries):
    out = {}
    for lineno, line in entries:
        if "=" not in line:
            raise SpecSyntaxError(f"expected key = value, got {line!r}", lineno)
        key, val = line.split("=", 1)
        out[key.strip()] = (val.strip(), lineno)
    return out


# operations: name -> list of argument kinds ("name" or "int")
OPS = {
    "invariants": ["name"],
    "groebner": ["name"],
    "hilbert": ["name"],
    "betti": ["name", "int"],
    "colon": ["name", "name"],
    "annihilator": ["name"],
    "cyclic_link": ["name", "name"],
    "link": ["name", "name"],
    "double_link": ["name", "name"],
    "is_linked": ["name", "name"],
    "walk": ["name", "name", "int"],
    "semidualizing": [],
    "canonical_info": [],
    "bass_numbers": ["int"],
    "local_cohomology": ["name", "int"],
    "schenzel": ["name", "name", "int"],
    "duality": ["name", "name", "int"],
    "depth_formula": ["name", "name"],
    "self_link_sum": ["name"],
    "foxby_roundtrip": ["name"],
    "adjoint_transfer": ["name", "name"],
    "colink": ["name", "name"],
    "pk_dimension": ["name"],
    "gk_perfect": ["name"],
    "horizontal": ["name"],
    "regular_sequence": ["name", "int"],
}


def parse_spec(text):
    """Validated ExperimentSpec, or a SpecSyntaxError with a line number."""
    sections = _split_sections(text)
    ring_ctx = None
    ideals, mods = {}, {}
    k_kind, k_name = "trivial", None
    bound, window = None, (-6, 6)
    ops = []
    for name, header_line, entries in sections:
        if name == "ring":
            kv = _kv(entries)
            try:
                var_names = [v.strip() for v in kv["vars"][0].split(",") if v.strip()]
            except KeyError as missing:
                raise SpecSyntaxError(f"[ring] needs {missing}", header_line)
            p = int(kv["p"][0]) if "p" in kv else DEFAULT_CHARACTERISTIC
            weights = None
            if "weights" in kv:
                weights = [int(w) for w in kv["weights"][0].split(",") if w.strip()]
            defining = []
            if "defining" in kv and kv["defining"][0]:
                defining = [s.strip() for s in kv["defining"][0].split(",") if s.strip()]
            try:
                ring_ctx = make_ring(p, var_names, defining, weights)
            except LiaisonError as exc:
                bad_line = kv["p"][1] if "p" in kv else header_line
                raise SpecSyntaxError(str(exc), bad_line)
        elif name.startswith("ideal "):
            ident = name.split(None, 1)[1]
            kv = _kv(entries)
            if ring_ctx is None:
                raise SpecSyntaxError("[ring] must come first", header_line)
            gens_text, lineno = kv.get("gens", ("", header_line))
            try:
                ideals[ident] = [
                    parse_poly(ring_ctx, s) for s in gens_text.split(",") if s.strip()
                ]
            except ValueError as exc:
                raise SpecSyntaxError(str(exc), lineno)
        elif name.startswith("module "):
            ident = name.split(None, 1)[1]
            if ring_ctx is None:
                raise SpecSyntaxError("[ring] must come first", header_line)
            kv = _kv(entries)
            rank = int(kv.get("ambient", ("1", 0))[0])
            shifts = [int(s) for s in kv.get("shifts", ("0", 0))[0].split(",")]
            if len(shifts) == 1:
                shifts = shifts * rank

            def columns(txt):
                cols = []
                for col in txt.split(";"):
                    entries_ = [e.strip() for e in col.split(",")]
                    if len(entries_) != rank:
                        raise SpecSyntaxError(
                            f"column needs {rank} entries", header_line
                        )
                    cols.append(tuple(parse_poly(ring_ctx, e) for e in entries_))
                return cols

            gens = columns(kv["gens"][0]) if kv.get("gens", ("", 0))[0] else []
            rels = columns(kv["rels"][0]) if kv.get("rels", ("", 0))[0] else []
            mods[ident] = subquotient(ring_ctx, gens, rels, shifts, rank)
        elif name == "K":
            kv = _kv(entries)
            k_kind = kv.get("kind", ("trivial", 0))[0]
            if k_kind not in ("trivial", "canonical", "explicit"):
                raise SpecSyntaxError(f"unknown K kind {k_kind!r}", header_line)
            k_name = kv.get("name", (None, 0))[0]
        elif name == "options":
            kv = _kv(entries)
            if "bound" in kv:
                bound = int(kv["bound"][0])
            if "window" in kv:
                lo, hi = kv["window"][0].split("..")
                window = (int(lo), int(hi))
        elif name == "ops":
            for lineno, line in entries:
                parts = line.split()
                if parts[0] not in OPS:
                    raise SpecSyntaxError(f"unknown operation {parts[0]!r}", lineno)
                kinds = OPS[parts[0]]
                if len(parts) - 1 != len(kinds):
                    raise SpecSyntaxError(
                        f"{parts[0]} expects {len(kinds)} arguments", lineno
                    )
                args = []
                for kind, tok in zip(kinds, parts[1:]):
                    if kind == "int":
                        try:
                            args.append(int(tok))
                        except ValueError:
                            raise SpecSyntaxError(f"integer expected, got {tok!r}", lineno)
                    else:
                        args.append(tok)
                ops.append((parts[0], args, lineno))
        else:
            raise SpecSyntaxError(f"unknown section [{name}]", header_line)
    if ring_ctx is None:
        raise SpecSyntaxError("spec has no [ring] section", 1)
    names = set(ideals) | set(mods)
    if len(names) != len(ideals) + len(mods):
        raise SpecSyntaxError("ideal/module names must be unique", 1)
    for op, args, lineno in ops:
        for kind, arg in zip(OPS[op], args):
            if kind == "name" and arg not in names:
                raise UnknownName(f"line {lineno}: undefined name {arg!r}")
    if k_kind == "explicit" and k_name not in mods:
        raise UnknownName(f"K refers to undefined module {k_name!r}")
    if k_kind == "canonical":
        if ring_ctx.defining and not modules.ring_is_cm(ring_ctx):
            raise NonCMForCanonical(
                f"dim {modules.ring_dim(ring_ctx)} != depth {modules.ring_depth(ring_ctx)}"
            )
    if bound is None:
        bound = linkage.default_bound(ring_ctx)
    return ExperimentSpec(
        ring_ctx, ideals, mods, k_kind, k_name, bound, window, ops, text
    )


# ---------------------------------------------------------------------------
# op handlers


def _as_module(spec, name):
    if name in spec.modules:
        return spec.modules[name]
    return cyclic_module(spec.ring, spec.ideals[name])


def _as_ideal(spec, name):
    if name in spec.ideals:
        return spec.ideals[name]
    raise UnknownName(f"{name!r} is not an ideal")


def _ideal_strings(gens):
    return [render_poly(g) for g in gens]


def _inv_data(rep):
    return {
        "dim": rep.dim,
        "depth": rep.depth,
        "grade": linkage._num(rep.grade),
        "pd": linkage._num(rep.pd),
        "cod": rep.cod,
    }


def op_invariants(spec, name):
    return _inv_data(invariants(_as_module(spec, name)))


def op_groebner(spec, name):
    gb = groebner.reduced_ideal_gb(spec.ring, _as_ideal(spec, name))
    return {"reduced_gb": _ideal_strings(gb)}


def op_hilbert(spec, name):
    M = _as_module(spec, name)
    data = M.hilbert()
    lo, hi = spec.window
    return {
        "dim": data.dim,
        "degree": str(data.degree),
        "hf": [{"degree": d, "value": M.hf(d)} for d in range(lo, hi + 1)],
    }


def op_betti(spec, name, length):
    res = homalg.free_resolution(_as_module(spec, name), length)
    return {
        "betti_numbers": res.betti_numbers(),
        "complete": res.complete,
        "table": homalg.betti_table_text(res),
    }


def op_colon(spec, a, b):
    got = groebner.colon(_as_ideal(spec, a), _as_ideal(spec, b), spec.ring)
    return {"colon": _ideal_strings(got)}


def op_annihilator(spec, name):
    return {"annihilator": _ideal_strings(annihilator(_as_module(spec, name)))}


def op_cyclic_link(spec, iname, cname):
    K = spec.resolve_K()
    linked = linkage.cyclic_link(
        spec.ring, _as_ideal(spec, iname), _as_ideal(spec, cname), K
    )
    return {"annihilator": _ideal_strings(annihilator(linked))}


def _cyclic_epi(spec, iname, cname):
    K = spec.resolve_K()
    phi = linkage.natural_cyclic_epi(
        spec.ring, _as_ideal(spec, iname), _as_ideal(spec, cname)
    )
    return linkage.reflexive_epi(phi, K, "Pn", spec.bound)


def op_link(spec, iname, cname):
    res = linkage.link_operator(_cyclic_epi(spec, iname, cname))
    return res.to_json()


def op_double_link(spec, iname, cname):
    v = linkage.double_link_check(_cyclic_epi(spec, iname, cname))
    return {"verdict": v.to_json()}


def op_is_linked(spec, iname, cname):
    return {"linked": linkage.is_linked_by(_cyclic_epi(spec, iname, cname))}


def op_walk(spec, iname, cname, steps):
    K = spec.resolve_K()
    epis = linkage.build_cyclic_walk(
        spec.ring, _as_ideal(spec, iname), _as_ideal(spec, cname), K, steps,
        bound=spec.bound,
    )
    return linkage.liaison_walk(epis, spec.window)


def op_semidualizing(spec):
    K = spec.resolve_K()
    cert = linkage.is_semidualizing(K, spec.bound)
    return {
        "verdict": cert.verdict.to_json(),
        "homothety_iso": cert.homothety_iso,
        "ext_vanishing": [list(x) for x in cert.ext_vanishing],
    }


def op_canonical_info(spec):
    om = linkage.canonical_module(spec.ring)
    from .modules import minimize

    omin, _, _ = minimize(om)
    return {
        "min_generators": len(omin.gens),
        "annihilator": _ideal_strings(annihilator(om)),
        "presentation": omin.to_json(),
    }


def op_bass_numbers(spec, upto):
    mu = cohomology.bass_numbers(free_module(spec.ring, 1), upto)
    return {"bass_numbers": mu, "type": mu[modules.ring_depth(spec.ring)]}


def op_local_cohomology(spec, name, i):
    data = cohomology.local_cohomology_hf(_as_module(spec, name), i, spec.window)
    return data.to_json()


def op_schenzel(spec, iname, cname, t):
    K = spec.resolve_K()
    I = _as_ideal(spec, iname)
    c = _as_ideal(spec, cname)
    M = cyclic_module(spec.ring, I)
    linked = linkage.cyclic_link(spec.ring, I, c, K)
    N = cyclic_module(spec.ring, annihilator(linked))
    n = linkage.grade_of_ideal(spec.ring, I)
    v = cohomology.schenzel_check(M, N, K, n, c, t)
    return {"verdict": v.to_json(), "t": t}


def op_duality(spec, iname, cname, i):
    K = spec.resolve_K()
    I = _as_ideal(spec, iname)
    c = _as_ideal(spec, cname)
    M = cyclic_module(spec.ring, I)
    linked = linkage.cyclic_link(spec.ring, I, c, K)
    N = cyclic_module(spec.ring, annihilator(linked))
    v = cohomology.duality_check(M, N, [i], spec.window)
    return {"verdict": v.to_json(), "index": i}


def op_depth_formula(spec, iname, cname):
    v = linkage.depth_formula_check(_cyclic_epi(spec, iname, cname))
    return {"verdict": v.to_json()}


def op_self_link_sum(spec, name):
    K = spec.resolve_K()
    M = _as_module(spec, name)
    n = modules.grade(M)
    E = homalg.ext(n, M, K)
    S, _, projections = modules.direct_sum(M, E)
    e = linkage.reflexive_epi(projections[0], K, "Pn", spec.bound)
    res = linkage.link_operator(e)
    lo, hi = spec.window
    return {
        "linked_annihilator": _ideal_strings(annihilator(res.linked_module)),
        "self_link_hf_match": all(
            res.linked_module.hf(d) == M.hf(d) for d in range(lo, hi + 1)
        ),
        "is_linked": linkage.is_linked_by(e),
    }


def op_foxby_roundtrip(spec, name):
    K = spec.resolve_K()
    M = _as_module(spec, name)
    T, mu = colinkage.foxby_transform("tensorK", M, K)
    H, nu = colinkage.foxby_transform("homK", T, K)
    lo, hi = spec.window
    return {
        "mu_iso": modules.is_iso(mu),
        "roundtrip_hf_match": all(M.hf(d) == H.hf(d) for d in range(lo, hi + 1)),
        "auslander": colinkage.class_member("Auslander", M, K, spec.bound).to_json(),
        "bass_of_transform": colinkage.class_member("Bass", T, K, spec.bound).to_json(),
    }


def op_colink(spec, iname, cname):
    """Colink through the adjoint transfer and emit the full transcript."""
    K = spec.resolve_K()
    e = _cyclic_epi(spec, iname, cname)
    ce = colinkage.adjoint_transfer_forward(e, spec.bound)
    col, _ = colinkage.colink_operator(ce)
    lo, hi = spec.window
    return {
        "colinked_presentation": col.to_json(),
        "annihilator_gb": _ideal_strings(annihilator(col)),
        "hf": [{"degree": d, "value": col.hf(d)} for d in range(lo, hi + 1)],
        "bass_certificate": colinkage.class_member(
            "Bass", ce.phi.source, K, spec.bound
        ).to_json(),
    }


def op_adjoint_transfer(spec, iname, cname):
    K = spec.resolve_K()
    e = _cyclic_epi(spec, iname, cname)
    ce = colinkage.adjoint_transfer_forward(e, spec.bound)
    back = colinkage.adjoint_transfer_backward(ce, spec.bound)
    lo, hi = spec.window
    M = e.phi.target
    col, _ = colinkage.colink_operator(ce)
    closed = linkage.cyclic_link(
        spec.ring, _as_ideal(spec, iname), _as_ideal(spec, cname), K
    )
    return {
        "forward_tag": ce.category_tag,
        "is_colinked": colinkage.is_colinked_by(ce),
        "colink_matches_closed_form": _ideal_strings(annihilator(col))
        == _ideal_strings(annihilator(closed)),
        "roundtrip_hf_match": all(
            back.phi.target.hf(d) == M.hf(d) for d in range(lo, hi + 1)
        ),
        "mu_iso": colinkage.roundtrip_is_identity(M, K),
    }


def op_pk_dimension(spec, name):
    K = spec.resolve_K()
    v, val = colinkage.pk_dimension(_as_module(spec, name), K, spec.bound)
    return {"verdict": v.to_json(), "value": val}


def op_gk_perfect(spec, name):
    K = spec.resolve_K()
    v = linkage.is_gk_perfect(_as_module(spec, name), K, spec.bound)
    return {"verdict": v.to_json()}


def op_horizontal(spec, name):
    M = _as_module(spec, name)
    lam = linkage.horizontal_link(M)
    return {
        "is_horizontally_linked": linkage.is_horizontally_linked(M),
        "lambda_annihilator": _ideal_strings(annihilator(lam)),
    }


def op_regular_sequence(spec, name, n):
    seq = linkage.regular_sequence_in(spec.ring, _as_ideal(spec, name), n)
    return {"sequence": [render_poly(f) for f in seq]}


HANDLERS = {
    "invariants": op_invariants,
    "groebner": op_groebner,
    "hilbert": op_hilbert,
    "betti": op_betti,
    "colon": op_colon,
    "annihilator": op_annihilator,
    "cyclic_link": op_cyclic_link,
    "link": op_link,
    "double_link": op_double_link,
    "is_linked": op_is_linked,
    "walk": op_walk,
    "semidualizing": op_semidualizing,
    "canonical_info": op_canonical_info,
    "bass_numbers": op_bass_numbers,
    "local_cohomology": op_local_cohomology,
    "schenzel": op_schenzel,
    "duality": op_duality,
    "depth_formula": op_depth_formula,
    "self_link_sum": op_self_link_sum,
    "foxby_roundtrip": op_foxby_roundtrip,
    "adjoint_transfer": op_adjoint_transfer,
    "colink": op_colink,
    "pk_dimension": op_pk_dimension,
    "gk_perfect": op_gk_perfect,
    "horizontal": op_horizontal,
    "regular_sequence": op_regular_sequence,
}


def _contains_failed_verdict(data):
    if isinstance(data, dict):
        if data.get("status") == verdict.FAILS:
            return True
        return any(_contains_failed_verdict(v) for v in data.values())
    if isinstance(data, list):
        return any(_contains_failed_verdict(v) for v in data)
    return False


def run(spec):
    """Execute the operations in order; per-op errors do not abort the rest.

    Returns (report dict, exit code).
    """
    results = []
    exit_code = 0
    for op, args, lineno in spec.ops:
        entry = {
            "op": op,
            "args": [str(a) for a in args],
            "provenance": {"bound": spec.bound, "window": list(spec.window)},
        }
        try:
            data = HANDLERS[op](spec, *args)
            entry["ok"] = True
            entry["data"] = data
            if _contains_failed_verdict(data):
                exit_code = max(exit_code, 1)
        except InternalConsistencyError as exc:
            entry["ok"] = False
            entry["error"] = f"internal consistency: {exc}"
            exit_code = 3
        except LiaisonError as exc:
            entry["ok"] = False
            entry["error"] = str(exc)
            exit_code = max(exit_code, 1)
        results.append(entry)
    report = {
        "ring": repr(spec.ring),
        "K": spec.k_kind,
        "bound": spec.bound,
        "window": list(spec.window),
        "results": results,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "exit_code": exit_code,
    }
    return report, exit_code


# ---------------------------------------------------------------------------
# the gallery


GALLERIES = {
    "univariate-link": """
[ring]
p = 101
vars = x

[ideal I]
gens = x

[ideal c]
gens = x^3

[ops]
groebner I
cyclic_link I c
link I c
double_link I c
is_linked I c
invariants I
""",
    "twisted-cubic": """
[ring]
p = 101
vars = x, y, z, w

[ideal I]
gens = x*z - y^2, y*w - z^2, x*w - y*z

[ideal c]
gens = x*z - y^2, y*w - z^2

[ops]
groebner I
betti I 3
colon c I
cyclic_link I c
double_link I c
regular_sequence I 2
invariants I
""",
    "mixed-ideal-negative": """
[ring]
p = 101
vars = x, y

[ideal I]
gens = x^2, x*y

[ideal c]
gens = x^2

[ops]
invariants I
is_linked I c
double_link I c
""",
    "semigroup-345": """
[ring]
p = 101
vars = x, y, z
weights = 3, 4, 5
defining = y^2 - x*z, z^2 - x^2*y, x^3 - y*z

[K]
kind = canonical

[ideal I]
gens = x

[options]
bound = 5

[ops]
canonical_info
semidualizing
bass_numbers 2
invariants I
""",
    "direct-sum-self-link": """
[ring]
p = 101
vars = x, y

[ideal I]
gens = x

[ops]
self_link_sum I
""",
    "foxby-roundtrip": """
[ring]
p = 101
vars = x, y, z
weights = 3, 4, 5
defining = y^2 - x*z, z^2 - x^2*y, x^3 - y*z

[K]
kind = canonical

[ideal I]
gens = x

[options]
bound = 4

[ops]
foxby_roundtrip I
""",
    "adjoint-transfer": """
[ring]
p = 101
vars = x, y, z
weights = 3, 4, 5
defining = y^2 - x*z, z^2 - x^2*y, x^3 - y*z

[K]
kind = canonical

[ideal I]
gens = x

[ideal c]
gens = x^2

[options]
bound = 4

[ops]
adjoint_transfer I c
colink I c
pk_dimension I
""",
    "depth-formula": """
[ring]
p = 101
vars = x, y, z, w

[ideal I]
gens = x*z, x*w, y*z, y*w

[ideal c]
gens = x*z, y*w

[ops]
invariants I
depth_formula I c
""",
    "schenzel": """
[ring]
p = 101
vars = x, y, z, w

[ideal I]
gens = x*z - y^2, y*w - z^2, x*w - y*z

[ideal c]
gens = x*z - y^2, y*w - z^2

[ops]
schenzel I c 1
schenzel I c 2
duality I c 1
""",
    "even-liaison-ext": """
[ring]
p = 101
vars = x, y, z, w

[ideal I]
gens = x*z, x*w, y*z, y*w

[ideal c]
gens = x*z, y*w

[ops]
walk I c 2
local_cohomology I 1
""",
}


def gallery(name):
    if name not in GALLERIES:
        raise UnknownGallery(f"no gallery named {name!r}")
    return parse_spec(GALLERIES[name])


# ---------------------------------------------------------------------------
# entry point


def _apply_overrides(text, args):
    spec = parse_spec(text)
    if args.bound is not None:
        spec.bound = args.bound
    if args.window is not None:
        lo, hi = args.window.split("..")
        spec.window = (int(lo), int(hi))
    if args.char is not None:
        # rebuild the whole spec at the new characteristic
        new_text = []
        for line in text.splitlines():
            if line.strip().startswith("p") and "=" in line:
                key = line.split("=", 1)[0]
                if key.strip() == "p":
                    line = f"p = {args.char}"
            new_text.append(line)
        spec = parse_spec("\n".join(new_text))
        if args.bound is not None:
            spec.bound = args.bound
        if args.window is not None:
            lo, hi = args.window.split("..")
            spec.window = (int(lo), int(hi))
    return spec


def main(argv=None):
    flags = argparse.ArgumentParser(add_help=False)
    flags.add_argument("--bound", type=int, default=None)
    flags.add_argument("--window", type=str, default=None)
    flags.add_argument("--char", type=int, default=None)
    flags.add_argument("--json-out", type=str, default=None)
    parser = argparse.ArgumentParser(
        prog="liaison",
        description="module linkage experiment runner",
        parents=[flags],
    )
    sub = parser.add_subparsers(dest="command")
    run_p = sub.add_parser("run", help="run an experiment spec file", parents=[flags])
    run_p.add_argument("file")
    gal_p = sub.add_parser("gallery", help="run a built-in gallery", parents=[flags])
    gal_p.add_argument("name")
    sub.add_parser("list-galleries", help="list built-in galleries", parents=[flags])
    args = parser.parse_args(argv)

    if args.command == "list-galleries":
        for name in sorted(GALLERIES):
            print(name)
        return 0
    if args.command == "run":
        try:
            with open(args.file) as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    elif args.command == "gallery":
        if args.name not in GALLERIES:
            print(f"error: no gallery named {args.name!r}", file=sys.stderr)
            return 2
        text = GALLERIES[args.name]
    else:
        parser.print_help()
        return 2

    try:
        spec = _apply_overrides(text, args)
    except (SpecSyntaxError, UnknownName, NonCMForCanonical, LiaisonError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    report, code = run(spec)
    payload = json.dumps(report, indent=2, sort_keys=True)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(payload + "\n")
    else:
        print(payload)
    return code


if __name__ == "__main__":
    sys.exit(main())
