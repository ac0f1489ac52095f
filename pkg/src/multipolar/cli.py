"""Batch driver: parse a session file, run its tasks, print one report line per task.

Session grammar (one declaration per line, ``#`` starts a comment)::

    format 1
    ring R space x,y,z params t over QQ order local
    quotient [x^2+y^2+z^2] dim 2
    option seed=7 nmax=4 output=json
    assume complete_intersection
    poly f = x*y^2 + z^2
    ideal I = [y, z]
    module M = [[x^2, 0], [0, y^3]]      # rows of the generator matrix
    vector w = [x, 2*y, 3*z]
    germ F = (u, v^2, u*v) from u,v
    family Fam M=J N=I points=[(0,0,0)]
    task j_invariant f I

Exit codes: 0 all tasks ok and every identity verdict holds, 1 some task
raised, 2 an identity check failed, 3 the session did not parse.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field

from . import germs as G
from . import mult
from . import polar as P
from .gb import (
    INFINITE,
    Submodule,
    colength,
    eliminate,
    ideal_quotient,
    minors,
    reduced_ideal_basis,
    saturate,
)
from .gb import ops as gb_ops
from .symcore import (
    Field,
    GenericScalarStream,
    ParseError,
    Polynomial,
    RingContext,
    parse_poly,
)

FORMAT_VERSION = "1"
EXIT_OK, EXIT_TASK_ERROR, EXIT_IDENTITY, EXIT_PARSE = 0, 1, 2, 3


class SessionError(ValueError):
    """Parse or name-resolution error carrying the offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


# ---------------------------------------------------------------------------
# session model
# ---------------------------------------------------------------------------


@dataclass
class Decl:
    kind: str          # poly | ideal | module | vector | germ | family
    name: str
    value: object
    canonical: str     # right-hand side in canonical form
    line: int


@dataclass
class Task:
    op: str
    args: list
    kwargs: dict
    line: int
    text_args: list = field(default_factory=list)


@dataclass
class Session:
    ring_name: str = ""
    ctx: RingContext | None = None
    decls: dict = field(default_factory=dict)
    tasks: list = field(default_factory=list)
    seed: int = 0
    nmax: int | None = None
    output: str = "text"
    assumptions: list = field(default_factory=list)

    @property
    def base_ctx(self) -> RingContext:
        """The declared ring without quotient equations."""
        return self.ctx.free()

    def serialize(self) -> str:
        c = self.ctx
        lines = [f"format {FORMAT_VERSION}"]
        ring = f"ring {self.ring_name} space {','.join(c.space_vars)}"
        if c.param_vars:
            ring += f" params {','.join(c.param_vars)}"
        ring += f" over {c.field.tag} order {'local' if c.order.is_local else 'global'}"
        lines.append(ring)
        if c.quotient:
            lines.append(f"quotient [{', '.join(q.to_str() for q in c.quotient)}] dim {c.dim_d}")
        opts = [f"seed={self.seed}"]
        if self.nmax is not None:
            opts.append(f"nmax={self.nmax}")
        if self.output != "text":
            opts.append(f"output={self.output}")
        lines.append("option " + " ".join(opts))
        for a in self.assumptions:
            lines.append(f"assume {a}")
        for d in self.decls.values():
            if d.kind == "germ":
                lines.append(f"germ {d.name} = {d.canonical}")
            elif d.kind == "family":
                lines.append(f"family {d.name} {d.canonical}")
            else:
                lines.append(f"{d.kind} {d.name} = {d.canonical}")
        for t in self.tasks:
            lines.append(" ".join(["task", t.op] + t.text_args))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def split_top(text: str, sep: str = ",") -> list[str]:
    """Split on ``sep`` outside parentheses and brackets."""
    out, depth, cur = [], 0, []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ValueError("unbalanced brackets")
        if ch == sep and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if depth:
        raise ValueError("unbalanced brackets")
    tail = "".join(cur).strip()
    if tail or out:
        out.append(tail)
    return out


def _unwrap(text: str, open_: str, close: str) -> str:
    text = text.strip()
    if not (text.startswith(open_) and text.endswith(close)):
        raise ValueError(f"expected {open_}...{close}, got {text!r}")
    return text[1:-1]


def _kv(tokens: list[str]) -> tuple[list[str], dict]:
    pos, kw = [], {}
    for t in tokens:
        if "=" in t:
            k, v = t.split("=", 1)
            kw[k] = v
        else:
            pos.append(t)
    return pos, kw


def _tokens(rest: str) -> list[str]:
    """Whitespace tokens, keeping bracketed groups together."""
    out, depth, cur = [], 0, []
    for ch in rest:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch.isspace() and depth == 0:
            if cur:
                out.append("".join(cur))
                cur = []
        else:
            cur.append(ch)
    if cur:
        out.append("".join(cur))
    return out


# argument kinds per task: positional kinds, keyword kinds
# kinds: poly ideal module (ideal or module) germ family vector | int str vars point points
TASKS: dict[str, tuple[list[str], dict[str, str]]] = {
    "colength": (["module"], {"order": "str"}),
    "standard_basis": (["module"], {"order": "str"}),
    "samuel": (["ideal"], {}),
    "buchsbaum_rim": (["module"], {}),
    "pair": (["module", "module"], {"method": "str"}),
    "reduction_check": (["module", "module"], {}),
    "perturbation_count": (["module"], {}),
    "saturate": (["ideal", "ideal"], {}),
    "ideal_quotient": (["ideal", "ideal"], {}),
    "eliminate": (["ideal"], {"vars": "vars"}),
    "minors": (["module"], {"t": "int"}),
    "jacobian": (["poly"], {"F": "ideal", "relative": "str"}),
    "polar": (["module"], {"k": "int"}),
    "multiplicity_polar_check": (["family"], {"method": "str"}),
    "j_invariant": (["poly", "ideal"], {}),
    "classify": (["poly", "ideal"], {"point": "point"}),
    "pellikaan": (["poly", "ideal", "poly", "ideal"], {"points": "points", "method": "str"}),
    "pushforward": (["germ"], {}),
    "disentanglement": (["germ"], {"stabilization": "germ", "method": "str"}),
    "milnor_icis": (["ideal"], {}),
    "one_form_index": (["ideal"], {"omega": "vector", "L": "poly"}),
    "wf_invariant": (["poly", "poly"], {"F": "ideal"}),
    "triple_point": ([], {}),
}

_NAME_KINDS = {"poly", "ideal", "module", "germ", "family", "vector"}


def _parse_field(tag: str) -> Field:
    try:
        return Field.from_tag(tag)
    except Exception as exc:
        raise ValueError(f"bad field {tag!r}: {exc}") from None


def parse_session(text: str, *, field_override: str | None = None) -> Session:
    """Parse session text; raises SessionError with the line number on any problem."""
    s = Session()
    saw_format = False
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            _parse_line(s, line, lineno, saw_format, field_override)
        except SessionError:
            raise
        except ParseError as exc:
            raise SessionError(lineno, str(exc)) from None
        except (ValueError, KeyError) as exc:
            msg = exc.args[0] if exc.args else str(exc)
            raise SessionError(lineno, str(msg)) from None
        if line.split()[0] == "format":
            saw_format = True
    if not saw_format:
        raise SessionError(1, "missing 'format 1' header")
    if s.ctx is None:
        raise SessionError(len(lines), "no ring declared")
    return s


def _names(s: Session) -> dict:
    return {k: d.value for k, d in s.decls.items() if d.kind == "poly"}


def _poly(s: Session, text: str, lineno: int) -> Polynomial:
    return parse_poly(s.base_ctx, text, _names(s))


def _declare(s: Session, kind: str, name: str, value, canonical: str, lineno: int):
    if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", name):
        raise SessionError(lineno, f"bad name {name!r}")
    if name in s.decls:
        raise SessionError(lineno, f"name {name} already declared")
    if s.ctx is not None and name in s.ctx.vars:
        raise SessionError(lineno, f"name {name} clashes with a ring variable")
    s.decls[name] = Decl(kind, name, value, canonical, lineno)


def _parse_line(s: Session, line: str, lineno: int, saw_format: bool, field_override):
    head, _, rest = line.partition(" ")
    rest = rest.strip()
    if head == "format":
        if rest != FORMAT_VERSION:
            raise SessionError(lineno, f"unsupported format {rest!r}")
        return
    if not saw_format:
        raise SessionError(lineno, "the first line must be 'format 1'")
    if head == "ring":
        if s.ctx is not None:
            raise SessionError(lineno, "only one ring per session")
        toks = rest.split()
        if not toks:
            raise SessionError(lineno, "ring needs a name")
        s.ring_name = toks[0]
        opts = dict(zip(toks[1::2], toks[2::2]))
        if len(toks[1:]) % 2:
            raise SessionError(lineno, "ring: expected keyword/value pairs")
        unknown = set(opts) - {"space", "params", "over", "order"}
        if unknown:
            raise SessionError(lineno, f"ring: unknown keyword {sorted(unknown)[0]}")
        if "space" not in opts:
            raise SessionError(lineno, "ring: 'space' variables required")
        space = [v for v in opts["space"].split(",") if v]
        params = [v for v in opts.get("params", "").split(",") if v]
        fld = _parse_field(field_override or opts.get("over", "QQ"))
        order = opts.get("order", "local")
        if order not in ("local", "global"):
            raise SessionError(lineno, "order must be local or global")
        s.ctx = RingContext(space, params, fld, "local_degrevlex" if order == "local" else "global_degrevlex")
        return
    if s.ctx is None and head not in ("option", "assume"):
        raise SessionError(lineno, f"'{head}' before the ring declaration")
    if head == "quotient":
        m = re.fullmatch(r"(\[.*\])(?:\s+dim\s+(\d+))?", rest)
        if not m:
            raise SessionError(lineno, "quotient: expected [f1, ...] [dim d]")
        base = s.base_ctx
        eqs = [parse_poly(base, t) for t in split_top(_unwrap(m.group(1), "[", "]"))]
        dim = int(m.group(2)) if m.group(2) else len(base.space_vars) - len(eqs)
        if not m.group(2):
            s.assumptions.append("complete_intersection (quotient dim inferred)")
        s.ctx = s.ctx.with_quotient(eqs, dim_d=dim)
        return
    if head == "option":
        for tok in rest.split():
            k, _, v = tok.partition("=")
            if k == "seed":
                s.seed = int(v)
                if not 0 <= s.seed < 2 ** 64:
                    raise SessionError(lineno, "seed must be an unsigned 64-bit integer")
            elif k == "nmax":
                s.nmax = int(v)
            elif k == "output":
                if v not in ("text", "json"):
                    raise SessionError(lineno, "output must be text or json")
                s.output = v
            else:
                raise SessionError(lineno, f"unknown option {k}")
        return
    if head == "assume":
        if not rest:
            raise SessionError(lineno, "assume needs a flag")
        s.assumptions.append(rest)
        return
    if head in ("poly", "ideal", "module", "vector", "germ"):
        name, eq, rhs = rest.partition("=")
        name = name.strip()
        if not eq:
            raise SessionError(lineno, f"{head}: expected '{head} <name> = ...'")
        rhs = rhs.strip()
        if head == "poly":
            f = _poly(s, rhs, lineno)
            _declare(s, "poly", name, f, f.to_str(), lineno)
        elif head in ("ideal", "vector"):
            items = split_top(_unwrap(rhs, "[", "]"))
            polys = [_poly(s, t, lineno) for t in items if t]
            if head == "ideal":
                val = Submodule.ideal(s.ctx, polys) if polys else Submodule(s.ctx, [], rank=1)
            else:
                val = polys
            _declare(s, head, name, val, "[" + ", ".join(p.to_str() for p in polys) + "]", lineno)
        elif head == "module":
            rows = [[_poly(s, t, lineno) for t in split_top(_unwrap(r, "[", "]"))]
                    for r in split_top(_unwrap(rhs, "[", "]"))]
            if not rows or len({len(r) for r in rows}) != 1:
                raise SessionError(lineno, "module rows must be nonempty and of equal length")
            M = Submodule.from_matrix(s.ctx, rows)
            canon = "[" + ", ".join("[" + ", ".join(p.to_str() for p in r) + "]" for r in rows) + "]"
            _declare(s, "module", name, M, canon, lineno)
        else:
            m = re.fullmatch(r"(\(.*\))\s+from\s+([A-Za-z_0-9,]+)", rhs)
            if not m:
                raise SessionError(lineno, "germ: expected (c1, c2, ...) from u,v")
            src_vars = [v for v in m.group(2).split(",") if v]
            src = RingContext(src_vars, s.ctx.param_vars, s.ctx.field)
            comps = [parse_poly(src, t) for t in split_top(_unwrap(m.group(1), "(", ")"))]
            tgt = RingContext(s.ctx.space_vars, s.ctx.param_vars, s.ctx.field)
            germ = G.MapGerm(src, tgt, comps)
            canon = "(" + ", ".join(c.to_str() for c in germ.components) + ") from " + ",".join(src_vars)
            _declare(s, "germ", name, germ, canon, lineno)
        return
    if head == "family":
        toks = _tokens(rest)
        if not toks:
            raise SessionError(lineno, "family needs a name")
        name, (pos, kw) = toks[0], _kv(toks[1:])
        if pos or not {"M", "N"} <= set(kw) or set(kw) - {"M", "N", "points"}:
            raise SessionError(lineno, "family: expected M=<id> N=<id> [points=[...]]")
        Mv = _lookup(s, kw["M"], "module", lineno)
        Nv = _lookup(s, kw["N"], "module", lineno)
        pts = _parse_points(s, kw.get("points", "[]"), lineno)
        fam = P.FamilySpec(s.base_ctx, Mv.with_context(s.base_ctx), Nv.with_context(s.base_ctx), pts,
                           list(s.assumptions))
        canon = f"M={kw['M']} N={kw['N']} points={_points_text(pts)}"
        _declare(s, "family", name, fam, canon, lineno)
        return
    if head == "task":
        toks = _tokens(rest)
        if not toks:
            raise SessionError(lineno, "task needs an operation")
        op = toks[0]
        if op not in TASKS:
            raise SessionError(lineno, f"unknown task {op}")
        pkinds, kkinds = TASKS[op]
        pos, kw = _kv(toks[1:])
        if len(pos) != len(pkinds):
            raise SessionError(lineno, f"task {op} expects {len(pkinds)} arguments, got {len(pos)}")
        args = []
        for tok, kind in zip(pos, pkinds):
            if op == "one_form_index" and tok == "none":
                args.append(None)
            else:
                args.append(_lookup(s, tok, kind, lineno))
        kwargs = {}
        for k, v in kw.items():
            if k not in kkinds:
                raise SessionError(lineno, f"task {op}: unknown argument {k}")
            kwargs[k] = _convert(s, v, kkinds[k], lineno)
        s.tasks.append(Task(op, args, kwargs, lineno, toks[1:]))
        return
    raise SessionError(lineno, f"unknown declaration '{head}'")


def _lookup(s: Session, name: str, kind: str, lineno: int):
    d = s.decls.get(name)
    if d is None:
        raise SessionError(lineno, f"undefined name {name}")
    ok = d.kind == kind or (kind == "module" and d.kind == "ideal")
    if not ok:
        raise SessionError(lineno, f"{name} is a {d.kind}, expected {kind}")
    return d.value


def _parse_points(s: Session, text: str, lineno: int) -> list:
    out = []
    for item in split_top(_unwrap(text, "[", "]")):
        if not item:
            continue
        coords = [_poly(s, t, lineno) for t in split_top(_unwrap(item, "(", ")"))]
        if len(coords) != len(s.ctx.space_vars):
            raise SessionError(lineno, f"point {item} needs {len(s.ctx.space_vars)} coordinates")
        out.append(dict(zip(s.ctx.space_vars, coords)))
    return out


def _points_text(pts) -> str:
    return "[" + ",".join("(" + ",".join(c.to_str().replace(" ", "") for c in p.values()) + ")"
                          for p in pts) + "]"


def _convert(s: Session, v: str, kind: str, lineno: int):
    if kind in _NAME_KINDS:
        return _lookup(s, v, kind, lineno)
    if kind == "int":
        try:
            return int(v)
        except ValueError:
            raise SessionError(lineno, f"expected an integer, got {v!r}") from None
    if kind == "vars":
        vs = [x for x in v.split(",") if x]
        for x in vs:
            if x not in s.ctx.vars:
                raise SessionError(lineno, f"undefined name {x}")
        return vs
    if kind == "point":
        return _parse_points(s, f"[{v}]", lineno)[0]
    if kind == "points":
        return _parse_points(s, v, lineno)
    return v


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------


@dataclass
class TaskResult:
    op: str
    name: str
    line: int
    status: str = "ok"
    payload: dict = field(default_factory=dict)
    error_kind: str | None = None
    message: str | None = None
    assumption_log: list = field(default_factory=list)
    draw_log: list = field(default_factory=list)
    identity: str | None = None     # "holds" / "equal" / "fails" / "unequal" for identity checks

    @property
    def identity_failed(self) -> bool:
        return self.identity in ("fails", "unequal")

    def as_dict(self) -> dict:
        d = {"task": self.op, "name": self.name, "line": self.line, "status": self.status,
             "payload": _jsonable(self.payload), "assumption_log": list(self.assumption_log),
             "draw_log": [str(x) for x in self.draw_log]}
        if self.status != "ok":
            d["error"] = {"kind": self.error_kind, "message": self.message}
        return d

    def to_line(self) -> str:
        parts = [f"task={self.op}", f"name={self.name}"]
        for k, v in self.payload.items():
            parts.append(f"{k}={_fmt(v)}")
        parts.append(f"status={self.status}")
        if self.status != "ok":
            parts.append(f"kind={self.error_kind}")
            parts.append(f"message={json.dumps(self.message)}")
        return " ".join(parts)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "n/a"
    if isinstance(v, Polynomial):
        return v.to_str().replace(" ", "")
    if isinstance(v, float) and v == INFINITE:
        return "inf"
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_fmt(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ",".join(f"{k}:{_fmt(x)}" for k, x in v.items()) + "}"
    return str(v).replace(" + ", "+").replace(" - ", "-").replace(" ", "_")


def _jsonable(v):
    if v is None or isinstance(v, (bool, int)):
        return v
    if isinstance(v, Polynomial):
        return v.to_str()
    if isinstance(v, float) and v == INFINITE:
        return "inf"
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return str(v)


def _gens(S: Submodule) -> list[str]:
    if S.rank == 1:
        return sorted(p.to_str() for p in reduced_ideal_basis(S)) if S.generators else []
    return sorted(g.to_str() for g in S.generators)


def _mres(r: mult.MultiplicityResult) -> dict:
    return {"value": r.value, "lambda": [r.lambdas[n] for n in sorted(r.lambdas)]}


def _run_task(s: Session, t: Task, stream: GenericScalarStream, res: TaskResult):
    a, kw = t.args, t.kwargs
    nmax = s.nmax
    nm = {} if nmax is None else {"n_max": nmax}
    op = t.op
    out = res.payload
    if op == "colength":
        S = a[0]
        order = kw.get("order")
        if order:
            ctx = S.ctx.local() if order == "local" else S.ctx.global_()
            S = S.with_context(ctx)
        out["value"] = colength(S)
    elif op == "standard_basis":
        S = a[0]
        order = kw.get("order")
        if order:
            S = S.with_context(S.ctx.local() if order == "local" else S.ctx.global_())
        B = S.basis()
        out["flavor"] = B.flavor
        out["generators"] = sorted(e.to_str() for e in B.elements)
    elif op == "samuel":
        out.update(_mres(mult.samuel_multiplicity(a[0], **nm)))
    elif op == "buchsbaum_rim":
        out.update(_mres(mult.buchsbaum_rim(a[0], **nm)))
    elif op == "pair":
        out.update(_mres(mult.pair_multiplicity(a[0], a[1], method=kw.get("method", "preimage"), **nm)))
    elif op == "reduction_check":
        out["value"] = mult.reduction_check(a[0], a[1], **nm)
    elif op == "perturbation_count":
        pc = mult.generic_perturbation_count(a[0], stream)
        br = mult.buchsbaum_rim(a[0], **nm).value
        out["lhs"] = pc.count
        out["rhs"] = br
        out["verdict"] = "equal" if pc.count == br else "unequal"
        out["transverse"] = pc.transverse
        out["attempts"] = pc.attempts
        res.identity = out["verdict"]
    elif op == "saturate":
        g = a[0].ctx.global_()
        out["generators"] = _gens(saturate(a[0].with_context(g), a[1].with_context(g)))
    elif op == "ideal_quotient":
        g = a[0].ctx.global_()
        out["generators"] = _gens(ideal_quotient(a[0].with_context(g), a[1].with_context(g)))
    elif op == "eliminate":
        g = a[0].ctx.global_()
        out["generators"] = _gens(eliminate(a[0].with_context(g), kw.get("vars", [])))
    elif op == "minors":
        S = a[0]
        out["generators"] = _gens(minors(S.matrix(), kw.get("t", S.rank), S.ctx))
    elif op == "jacobian":
        F = kw.get("F")
        M = G.jacobian_module(F.polys() if F is not None else [], a[0], kw.get("relative", "all"), s.base_ctx)
        out["rank"] = M.rank
        out["generators"] = [g.to_str() for g in M.generators]
    elif op == "polar":
        M = a[0]
        base = s.base_ctx
        k = kw.get("k", len(base.space_vars))
        rep = P.polar_ideal(M.with_context(base), k, stream)
        out["k"] = k
        out["empty"] = rep.empty
        out["generators"] = rep.generators()
        if len(base.param_vars) == 1:
            out["mult_over_base"] = P.polar_mult_over_base(rep, None, stream, **nm)
            out["fiber_witness"] = rep.fiber_witness
        if rep.reason:
            out["reason"] = rep.reason
    elif op == "multiplicity_polar_check":
        r = P.multiplicity_polar_check(a[0], stream, method=kw.get("method", "preimage"), **nm)
        out.update({"lhs": r.lhs, "rhs": r.rhs, "verdict": r.verdict, "e_origin": r.e_origin,
                    "e_fiber": [x["e"] for x in r.e_fiber], "y0": r.y0,
                    "polar_M_mult": r.polar_M.mult_over_base, "polar_N_mult": r.polar_N.mult_over_base,
                    "polar_M_empty": r.polar_M.empty, "polar_N_empty": r.polar_N.empty,
                    "global_length": r.global_length})
        res.identity = r.verdict
    elif op == "j_invariant":
        f, I = a
        fib = _fiber(s)
        out["value"] = G.j_invariant(_at_zero(f, fib), _to_fiber(I, fib))
    elif op == "classify":
        f, I = a
        fib = _fiber(s).global_()
        pt = kw.get("point") or {}
        coords = {v: c.constant_coeff() for v, c in pt.items()}
        c = G.classify_singular_point(_at_zero(f, fib), _to_fiber(I, fib), coords)
        out.update({"class": c.cls, "local_j": c.local_j, "hessian_rank": c.hessian_rank})
    elif op == "pellikaan":
        f, I, ft, St = a
        n = nmax if nmax is not None else 4
        r = G.pellikaan_report(f, I.with_context(s.base_ctx), ft, St.with_context(s.base_ctx),
                               kw.get("points", []), stream, n_max=n, method=kw.get("method", "preimage"))
        out.update({"j": r.j, "e": r.e_pair, "A_1": r.counts["A_1"], "D_infinity": r.counts["D_infinity"],
                    "A_infinity": r.counts["A_infinity"], "other": r.counts["other"],
                    "global_length": r.global_length, "t0": r.t0,
                    "verdict": "holds" if r.holds else "fails"})
        res.identity = out["verdict"]
    elif op == "pushforward":
        germ = _plain_germ(a[0])
        pr = G.pushforward_presentation(germ)
        out.update({"m": pr.multiplicity, "matrix": [[_fmt(x) for x in row] for row in pr.matrix],
                    "F0": pr.image_eq, "F1": _gens(pr.F1), "image_agrees": pr.image_agrees})
        res.identity = "holds" if pr.image_agrees else "fails"
    elif op == "disentanglement":
        germ = _plain_germ(a[0])
        n = nmax if nmax is not None else 4
        r = G.disentanglement_report(germ, stream, n_max=n, stabilization=kw.get("stabilization"),
                                     method=kw.get("method", "preimage"))
        out.update({"F0": r.image_eq, "C": _gens(r.conductor), "e_pair": r.e_pair,
                    "dim_C_over_CP": r.dim_C_over_CP, "dim_C_over_Jf": r.dim_C_over_Jf,
                    "dim_C_over_Jf_pullback": r.dim_C_over_Jf_pullback, "mu": r.mu_F})
        if r.oracle:
            out["census"] = {"A_1": r.oracle["A_1"], "D_infinity": r.oracle["D_infinity"]}
        out["checks"] = {k: v for k, v in r.identity_checks.items()}
        ok = all(v is not False for v in r.identity_checks.values())
        out["verdict"] = "holds" if ok else "fails"
        res.identity = out["verdict"]
    elif op == "milnor_icis":
        fib = _fiber(s).global_()
        out["value"] = G.milnor_icis([_at_zero(g, fib) for g in a[0].polys()])
    elif op == "one_form_index":
        X, omega, L = a[0], kw.get("omega"), kw.get("L")
        base = s.base_ctx
        eqs = [] if X is None else X.with_context(base).polys()
        r = G.one_form_index(eqs, omega, L, stream, ctx=base, **nm)
        out.update({"index": r.index, "e_omega": r.e_omega, "e_dL": r.e_dL, "slice_mu": r.slice_mu,
                    "d": r.d, "L": r.L})
        if r.cancellation is not None:
            out["cancellation"] = r.cancellation
            res.identity = "holds" if r.cancellation else "fails"
        res.assumption_log.extend(r.assumptions)
    elif op == "wf_invariant":
        f, l = a
        F = kw.get("F")
        r = G.wf_invariant(F.with_context(s.base_ctx).polys() if F is not None else [], f, l, stream, **nm)
        out["samples"] = [{"y": x["y"], "e_f": x["e_f"], "e_l": x["e_l"], "difference": x["difference"]}
                          for x in r.samples]
        out["independence"] = "independent" if r.independent else "not_independent"
        out["mode"] = "ICIS_free_module"
    elif op == "triple_point":
        x, y, b = G.triple_point_identity()
        out.update({"J": x, "C": y, "verdict": "holds" if b else "fails"})
        res.identity = out["verdict"]
    else:  # pragma: no cover - TASKS and this table are kept in sync
        raise ValueError(f"unknown task {op}")


def _fiber(s: Session) -> RingContext:
    return RingContext(s.ctx.space_vars, (), s.ctx.field, "local_degrevlex")


def _at_zero(f: Polynomial, fib: RingContext) -> Polynomial:
    """Member of the fiber over parameter value 0."""
    return P._drop_params(f.evaluate({p: 0 for p in f.ctx.param_vars}), fib)


def _to_fiber(I: Submodule, fib: RingContext) -> Submodule:
    return Submodule.ideal(fib, [_at_zero(g, fib) for g in I.polys()])


def _plain_germ(germ: G.MapGerm) -> G.MapGerm:
    if any(c.variables() & set(germ.source.param_vars) for c in germ.components):
        raise G.GermError("germ depends on parameters; pass it as stabilization=")
    return germ.specialize({})


def run_session(s: Session) -> tuple[list[TaskResult], int]:
    """Run tasks in order; every task gets its own stream spawned from the session seed."""
    root = GenericScalarStream(s.seed)
    results = []
    for i, t in enumerate(s.tasks):
        name = t.text_args[0] if t.text_args and "=" not in t.text_args[0] else "-"
        res = TaskResult(t.op, name, t.line, assumption_log=list(s.assumptions))
        stream = root.spawn(i + 1)
        try:
            _run_task(s, t, stream, res)
        except Exception as exc:  # every failure is reported, later tasks still run
            res.status = "error"
            res.error_kind = getattr(exc, "kind", type(exc).__name__)
            res.message = str(exc)
            res.payload = {}
            res.identity = None
        res.draw_log = list(stream.draw_log)
        results.append(res)
    if any(r.status != "ok" for r in results):
        code = EXIT_TASK_ERROR
    elif any(r.identity_failed for r in results):
        code = EXIT_IDENTITY
    else:
        code = EXIT_OK
    return results, code


def render(results: list[TaskResult], output: str = "text") -> str:
    if output == "json":
        return "".join(json.dumps(r.as_dict(), sort_keys=True) + "\n" for r in results)
    return "".join(r.to_line() + "\n" for r in results)


def main(argv: list[str] | None = None, *, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = argparse.ArgumentParser(prog="multipolar", description="Run a multiplicity session file.")
    ap.add_argument("session", nargs="?", default="-", help="session file (default: stdin)")
    ap.add_argument("--seed", type=int, help="override the session seed")
    ap.add_argument("--nmax", type=int, help="override n_max for length functions")
    ap.add_argument("--field", help="override the coefficient field (QQ or FP:<p>)")
    ap.add_argument("--json", action="store_true", help="one JSON object per task")
    ap.add_argument("--max-colength", type=int, help="abort a task whose colength exceeds this bound")
    args = ap.parse_args(argv)

    if args.session == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.session, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            print(f"error: {exc}", file=stderr)
            return EXIT_PARSE
    try:
        s = parse_session(text, field_override=args.field)
    except SessionError as exc:
        print(f"parse error: {exc}", file=stderr)
        return EXIT_PARSE
    if args.seed is not None:
        s.seed = args.seed
    if args.nmax is not None:
        s.nmax = args.nmax
    if args.json:
        s.output = "json"
    prev = gb_ops.MAX_COLENGTH
    gb_ops.MAX_COLENGTH = args.max_colength
    try:
        results, code = run_session(s)
    finally:
        gb_ops.MAX_COLENGTH = prev
    stdout.write(render(results, s.output))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
