"""The ``.pnet`` text format, DOT export and JSON reports.

A ``.pnet`` document has one directive per line; ``#`` starts a comment::

    net three-place-alpha1
    places p1 p2 p3
    transitions t1 t2 t3
    pre  t1 p1=1
    post t1 p2=1
    pre  t2 p2=1
    post t2 p1=1
    pre  t3 p2=1 p3=1
    m0 p1=2 p3=1             # omitted places are 0
    explicit t2              # remainder is implicit, in declaration order
    final marking p1=2 p3=1  # repeatable; or: final gmec w1 w2 w3 <= k

``param key=value`` lines carry integer metadata and do not affect the plant.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from .brg import BasisGraph
from .net import (
    U32_MAX,
    BasisPartition,
    ExplicitFinal,
    GmecFinal,
    NetError,
    PetriNet,
    Plant,
    validate_partition,
)
from .oracle import ReachabilityGraph
from .verify import Verdict

SCHEMA_VERSION = 1

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*\Z")
_INT = re.compile(r"[+-]?[0-9]+\Z")
_TOKEN = re.compile(r"\S+")


class ParseError(NetError):
    def __init__(self, line: int, col: int, msg: str):
        self.line, self.col, self.msg = line, col, msg
        super().__init__(f"line {line}, col {col}: {msg}")


@dataclass(frozen=True)
class PlantDocument:
    plant: Plant
    partition: BasisPartition
    name: str | None = None
    params: tuple[tuple[str, int], ...] = field(default=())


@dataclass
class _Tok:
    text: str
    line: int
    col: int

    def fail(self, msg: str) -> ParseError:
        return ParseError(self.line, self.col, msg)


def _ident(tok: _Tok, what: str) -> str:
    if not _IDENT.match(tok.text):
        raise tok.fail(f"invalid {what} identifier {tok.text!r}")
    return tok.text


def _int(tok: _Tok, text: str | None = None, nonneg: bool = False) -> int:
    text = tok.text if text is None else text
    if not _INT.match(text):
        raise tok.fail(f"expected an integer, got {text!r}")
    v = int(text)
    if nonneg and v < 0:
        raise tok.fail("value must be nonnegative")
    if nonneg and v > U32_MAX:
        raise tok.fail(f"value {v} outside the supported u32 range")
    if abs(v) >= 2**63:
        raise tok.fail(f"value {v} outside the 64-bit range")
    return v


def _pairs(toks: list[_Tok], known: dict[str, int], what: str) -> dict[int, tuple[int, _Tok]]:
    out: dict[int, tuple[int, _Tok]] = {}
    for tok in toks:
        if tok.text.count("=") != 1:
            raise tok.fail(f"expected {what}=count, got {tok.text!r}")
        key, val = tok.text.split("=")
        if key not in known:
            raise tok.fail(f"unknown {what} {key!r}")
        if known[key] in out:
            raise tok.fail(f"{what} {key!r} given twice")
        out[known[key]] = (_int(tok, val, nonneg=True), tok)
    return out


def _tokenize(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = [_Tok(mt.group(), lineno, mt.start() + 1) for mt in _TOKEN.finditer(body)]
        if toks:
            yield lineno, toks


def parse_plant(text: str) -> PlantDocument:
    name = None
    params: list[tuple[str, int]] = []
    places = transitions = None
    places_line = trans_line = None
    arcs: list[tuple[str, list[_Tok]]] = []
    m0_toks: list[_Tok] | None = None
    explicit_toks: list[_Tok] | None = None
    final_markings: list[list[_Tok]] = []
    gmec: tuple[list[_Tok], _Tok] | None = None
    last_line = 0

    for lineno, toks in _tokenize(text):
        last_line = lineno
        head, args = toks[0], toks[1:]
        kw = head.text
        if kw == "net":
            if len(args) != 1:
                raise head.fail("'net' takes exactly one name")
            if name is not None:
                raise head.fail("duplicate 'net' directive")
            name = args[0].text
        elif kw == "param":
            if not args:
                raise head.fail("'param' needs at least one key=value pair")
            for tok in args:
                if tok.text.count("=") != 1:
                    raise tok.fail(f"expected key=value, got {tok.text!r}")
                key, val = tok.text.split("=")
                params.append((_ident(_Tok(key, tok.line, tok.col), "parameter"), _int(tok, val)))
        elif kw in ("places", "transitions"):
            if (places if kw == "places" else transitions) is not None:
                raise head.fail(f"duplicate '{kw}' directive")
            what = "place" if kw == "places" else "transition"
            ids = [_ident(t, what) for t in args]
            seen = set()
            for t, i in zip(args, ids):
                if i in seen:
                    raise t.fail(f"duplicate {what} id {i!r}")
                seen.add(i)
            if kw == "places":
                if not ids:
                    raise head.fail("at least one place required")
                places, places_line = ids, head
            else:
                if not ids:
                    raise head.fail("at least one transition required")
                transitions, trans_line = ids, head
        elif kw in ("pre", "post"):
            if not args:
                raise head.fail(f"'{kw}' needs a transition id")
            arcs.append((kw, args))
        elif kw == "m0":
            if m0_toks is not None:
                raise head.fail("duplicate 'm0' directive")
            m0_toks = args
        elif kw == "explicit":
            if explicit_toks is not None:
                raise head.fail("duplicate 'explicit' directive")
            explicit_toks = args
        elif kw == "final":
            if not args or args[0].text not in ("marking", "gmec"):
                raise head.fail("expected 'final marking ...' or 'final gmec ... <= k'")
            if args[0].text == "marking":
                if gmec is not None:
                    raise head.fail("cannot mix 'final marking' with 'final gmec'")
                final_markings.append(args[1:])
            else:
                if gmec is not None:
                    raise head.fail("only one 'final gmec' directive allowed")
                if final_markings:
                    raise head.fail("cannot mix 'final gmec' with 'final marking'")
                rest = args[1:]
                if len(rest) < 2 or rest[-2].text != "<=":
                    raise head.fail("expected 'final gmec w1 ... wm <= k'")
                gmec = (rest[:-2], rest[-1])
        else:
            raise head.fail(f"unknown directive {kw!r}")

    if places is None:
        raise ParseError(last_line + 1, 1, "at least one place required")
    if transitions is None:
        raise ParseError(last_line + 1, 1, "at least one transition required")
    pidx = {p: i for i, p in enumerate(places)}
    tidx = {t: j for j, t in enumerate(transitions)}
    if set(pidx) & set(tidx):
        clash = sorted(set(pidx) & set(tidx))[0]
        raise trans_line.fail(f"id {clash!r} used for both a place and a transition")

    m, n = len(places), len(transitions)
    mats = {"pre": [[0] * n for _ in range(m)], "post": [[0] * n for _ in range(m)]}
    given: set[tuple[str, int, int]] = set()
    for kw, args in arcs:
        t = args[0].text
        if t not in tidx:
            raise args[0].fail(f"unknown transition {t!r}")
        j = tidx[t]
        for i, (w, tok) in _pairs(args[1:], pidx, "place").items():
            if (kw, i, j) in given:
                raise tok.fail(f"{kw} arc {places[i]}/{t} given twice")
            given.add((kw, i, j))
            mats[kw][i][j] = w

    net = PetriNet(places, transitions, mats["pre"], mats["post"])

    m0 = [0] * m
    for i, (c, _) in _pairs(m0_toks or [], pidx, "place").items():
        m0[i] = c

    explicit = []
    for tok in explicit_toks or []:
        if tok.text not in tidx:
            raise tok.fail(f"unknown transition {tok.text!r}")
        if tok.text in explicit:
            raise tok.fail(f"transition {tok.text!r} listed twice")
        explicit.append(tok.text)
    partition = BasisPartition.from_explicit(net, explicit)
    cycle = validate_partition(net, partition)
    if cycle is not None:
        where = explicit_toks[0] if explicit_toks else trans_line
        raise where.fail("implicit sub-net is not acyclic: " + " -> ".join(cycle))

    if gmec is not None:
        wtoks, ktok = gmec
        if len(wtoks) != m:
            at = wtoks[0] if wtoks else ktok
            raise at.fail(f"gmec has {len(wtoks)} weights but the net has {m} places")
        final = GmecFinal(tuple(_int(t) for t in wtoks), _int(ktok))
    elif final_markings:
        fms = set()
        for toks in final_markings:
            mk = [0] * m
            for i, (c, _) in _pairs(toks, pidx, "place").items():
                mk[i] = c
            fms.add(tuple(mk))
        final = ExplicitFinal(frozenset(fms))
    else:
        raise ParseError(last_line + 1, 1, "a 'final marking' or 'final gmec' directive is required")

    return PlantDocument(Plant(net, tuple(m0), final), partition, name, tuple(params))


def _assign(places, counts) -> str:
    return " ".join(f"{p}={c}" for p, c in zip(places, counts) if c)


def serialize_plant(doc: PlantDocument) -> str:
    net = doc.plant.net
    lines = []
    if doc.name is not None:
        lines.append(f"net {doc.name}")
    if doc.params:
        lines.append("param " + " ".join(f"{k}={v}" for k, v in doc.params))
    lines.append("places " + " ".join(net.places))
    lines.append("transitions " + " ".join(net.transitions))
    for j, t in enumerate(net.transitions):
        for kw, mat in (("pre", net.pre), ("post", net.post)):
            col = [row[j] for row in mat]
            if any(col):
                lines.append(f"{kw} {t} {_assign(net.places, col)}")
    lines.append(f"m0 {_assign(net.places, doc.plant.m0)}".rstrip())
    lines.append(" ".join(["explicit", *doc.partition.explicit_ordered(net)]))
    final = doc.plant.final
    if isinstance(final, GmecFinal):
        lines.append("final gmec " + " ".join(map(str, final.w)) + f" <= {final.k}")
    else:
        for mk in sorted(final.markings):
            lines.append(f"final marking {_assign(net.places, mk)}".rstrip())
    return "\n".join(lines) + "\n"


def _vec(v) -> str:
    return "[" + ",".join(map(str, v)) + "]"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(graph: BasisGraph | ReachabilityGraph, name: str = "G") -> str:
    """Graphviz text with nodes in lexicographic marking order."""
    if isinstance(graph, BasisGraph):
        nodes = graph.nodes
        edges = [(s, f"{t},({','.join(map(str, y))})", d) for s, (t, y), d in graph.edges]
    else:
        nodes = graph.markings
        edges = [(s, t, d) for s, t, d in graph.edges]
    order = sorted(range(len(nodes)), key=lambda i: nodes[i])
    rank = {old: new for new, old in enumerate(order)}
    out = [f"digraph {_quote(name)} {{", "  rankdir=LR;"]
    for new, old in enumerate(order):
        shape = "doublecircle" if old == 0 else "circle"
        out.append(f"  n{new} [label={_quote(_vec(nodes[old]))}, shape={shape}];")
    for s, lab, d in sorted((rank[s], lab, rank[d]) for s, lab, d in edges):
        out.append(f"  n{s} -> n{d} [label={_quote(lab)}];")
    out.append("}")
    return "\n".join(out) + "\n"


def _named(places, mk):
    return {p: c for p, c in zip(places, mk)}


def report_dict(verdict: Verdict, places, deterministic: bool = False) -> dict:
    stats = verdict.stats
    phase = stats.get("phase_ms", {})
    keys = ("brg", "deadlock", "ico", "unobstructed")
    return {
        "schema_version": SCHEMA_VERSION,
        "verdict": "NONBLOCKING" if verdict.nonblocking else "BLOCKING",
        "reason": verdict.reason,
        "witness": None if verdict.witness is None else _named(places, verdict.witness),
        "via": None
        if verdict.via is None
        else {"node": _named(places, verdict.via[0]), "y": list(verdict.via[1])},
        "stats": {
            "minimax_nodes": stats.get("minimax_nodes"),
            "minimax_edges": stats.get("minimax_edges"),
            "ico_count": stats.get("ico_count"),
            "phase_ms": {k: 0 if deterministic else round(phase.get(k, 0.0), 3) for k in keys},
        },
        "notes": list(verdict.notes),
    }


def export_report(verdict: Verdict, places, deterministic: bool = False) -> str:
    return json.dumps(report_dict(verdict, places, deterministic), indent=2) + "\n"


def graph_json(graph: BasisGraph | ReachabilityGraph, places) -> str:
    """JSON dump of a graph, nodes in lexicographic marking order."""
    if isinstance(graph, BasisGraph):
        nodes = graph.nodes
        raw = [(s, {"t": t, "y": list(y)}, d) for s, (t, y), d in graph.edges]
        doc = {"kind": graph.kind, "implicit": list(graph.partition.implicit)}
    else:
        nodes = graph.markings
        raw = [(s, {"t": t}, d) for s, t, d in graph.edges]
        doc = {"kind": "reachability"}
    order = sorted(range(len(nodes)), key=lambda i: nodes[i])
    rank = {old: new for new, old in enumerate(order)}
    edges = sorted(
        ({"src": rank[s], **lab, "dst": rank[d]} for s, lab, d in raw),
        key=lambda e: (e["src"], e["t"], e.get("y", []), e["dst"]),
    )
    doc.update(
        places=list(places),
        initial=rank[0],
        nodes=[list(nodes[i]) for i in order],
        edges=edges,
    )
    return json.dumps(doc, indent=2) + "\n"
