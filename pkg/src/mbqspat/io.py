"""Pattern ASCII text and the JSON Lines library format.

Pattern ASCII
-------------
Whitespace-separated tokens::

    N(<node>)
    E(<node>,<node>)
    M(<node>)                      XY measurement at angle 0
    M(<node>,<angle>)
    [M(<node>[,<angle>])]{<list>}  with an s-domain
    X(<node>,{<list>})
    Z(<node>,{<list>})

``<angle>`` follows :func:`mbqspat.angle.parse_angle`.  Inputs are implicit.

Compactified patterns may also contain two extensions that plain library
files never use:

* ``M(<node>,<plane>,<angle>)`` with ``<plane>`` one of XY, YZ, XZ, written
  ``[M(...)]{<s-list>}{<t-list>}`` when either domain is non-empty;
* ``C(<node>,<word>)``, an unconditional Clifford on an output node, the
  word being letters H and S in time order.

Library files
-------------
One JSON object per line.  The first line is a header
(``"Hamiltonian"``, ``"instance"``, ``"n_qubits"``, ``"terms"``,
``"strategy"``, ``"subsets"``, ``"provenance"``, ``"summary"``), followed by
one entry per subset, each carrying ``"Commuting subset"``, ``"meta"`` and
``"pattern_ascii"`` exactly as the bundled subset-32 entry does.  Entries
produced by compactification add ``"compactified": true``.
"""

from __future__ import annotations

import json
import re
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

from .angle import ZERO, AngleParseError, parse_angle
from .pattern import PLANES, C, E, M, N, Pattern, PatternError, X, Z

META_KEYS = (
    "node number",
    "input_nodes",
    "output_nodes",
    "max degree",
    "number Pauli X measurements",
    "number Pauli Y measurements",
    "number layers (causal flow)",
    "max edge layer span",
    "node_layer_list_causal_flow",
)


class PatternSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


class LibraryError(ValueError):
    pass


# -- pattern ASCII ---------------------------------------------------------------

_INT = r"\d+"
_LIST = r"\{\s*(?:\d+(?:\s*,\s*\d+)*)?\s*\}"
_TOKEN = re.compile(
    rf"""
    (?P<N>N\(\s*(?P<n>{_INT})\s*\))
  | (?P<E>E\(\s*(?P<e0>{_INT})\s*,\s*(?P<e1>{_INT})\s*\))
  | (?P<CM>\[\s*M\((?P<cmbody>[^\[\]]*(?:\[\d+\][^\[\]]*)*)\)\s*\]\s*(?P<cms>{_LIST})(?P<cmt>{_LIST})?)
  | (?P<M>M\((?P<mbody>[^()\[\]]*(?:\[\d+\][^()\[\]]*)*)\))
  | (?P<XZ>(?P<xzk>[XZ])\(\s*(?P<xzn>{_INT})\s*,\s*(?P<xzd>{_LIST})\s*\))
  | (?P<C>C\(\s*(?P<cn>{_INT})\s*,\s*(?P<cw>[HS]*)\s*\))
    """,
    re.VERBOSE,
)


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in re.findall(r"\d+", text))


def _measurement(body: str, pos: int) -> tuple[int, str, Any]:
    head, _, rest = body.partition(",")
    head = head.strip()
    if not head.isdigit():
        raise PatternSyntaxError(f"bad measurement node {head!r}", pos)
    node = int(head)
    plane = "XY"
    rest = rest.strip()
    if rest:
        first, sep, tail = rest.partition(",")
        if first.strip() in PLANES:
            plane = first.strip()
            rest = tail.strip() if sep else ""
    try:
        angle = parse_angle(rest) if rest else ZERO
    except AngleParseError as exc:
        raise PatternSyntaxError(str(exc), pos) from None
    return node, plane, angle


def tokenize_pattern_ascii(text: str) -> list[str]:
    """Split pattern text into its raw tokens (used by the round-trip checks)."""
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return tokens
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PatternSyntaxError(f"unexpected text {text[pos:pos + 20]!r}", pos)
        tokens.append(m.group(0))
        pos = m.end()


def parse_pattern_ascii(text: str, input_nodes: Sequence[int], output_nodes: Sequence[int]) -> Pattern:
    cmds = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise PatternSyntaxError(f"unexpected text {text[pos:pos + 20]!r}", pos)
        if m.group("N"):
            cmds.append(N(int(m.group("n"))))
        elif m.group("E"):
            cmds.append(E((int(m.group("e0")), int(m.group("e1")))))
        elif m.group("CM"):
            node, plane, angle = _measurement(m.group("cmbody"), pos)
            t = _int_list(m.group("cmt")) if m.group("cmt") else ()
            cmds.append(M(node, plane, angle, _int_list(m.group("cms")), t))
        elif m.group("M"):
            node, plane, angle = _measurement(m.group("mbody"), pos)
            cmds.append(M(node, plane, angle))
        elif m.group("XZ"):
            kind = X if m.group("xzk") == "X" else Z
            cmds.append(kind(int(m.group("xzn")), _int_list(m.group("xzd"))))
        else:
            cmds.append(C(int(m.group("cn")), m.group("cw")))
        pos = m.end()
    try:
        return Pattern(tuple(input_nodes), tuple(output_nodes), tuple(cmds))
    except PatternError as exc:
        raise PatternSyntaxError(str(exc), pos) from None


def _fmt_list(d: Iterable[int]) -> str:
    return "{" + ",".join(map(str, d)) + "}"


def format_command(cmd) -> str:
    if isinstance(cmd, N):
        return f"N({cmd.node})"
    if isinstance(cmd, E):
        return f"E({cmd.nodes[0]},{cmd.nodes[1]})"
    if isinstance(cmd, M):
        args = [str(cmd.node)]
        if cmd.plane != "XY":
            args += [cmd.plane, str(cmd.angle)]
        elif not cmd.angle.is_zero():
            args.append(str(cmd.angle))
        body = f"M({','.join(args)})"
        if cmd.t_domain:
            return f"[{body}]{_fmt_list(cmd.s_domain)}{_fmt_list(cmd.t_domain)}"
        if cmd.s_domain:
            return f"[{body}]{_fmt_list(cmd.s_domain)}"
        return body
    if isinstance(cmd, (X, Z)):
        return f"{type(cmd).__name__}({cmd.node},{_fmt_list(cmd.domain)})"
    if isinstance(cmd, C):
        return f"C({cmd.node},{cmd.name})"
    raise PatternError(f"{type(cmd).__name__} commands have no ASCII form; shift signals first")


def print_pattern_ascii(p: Pattern) -> str:
    if not p.is_standard():
        raise PatternError("only standard-form patterns can be printed")
    return " ".join(format_command(c) for c in p.commands)


# -- library files ---------------------------------------------------------------


@dataclass
class LibraryEntry:
    index: int
    meta: dict
    pattern_ascii: str
    extra: dict = field(default_factory=dict)

    def pattern(self) -> Pattern:
        return parse_pattern_ascii(self.pattern_ascii, self.meta["input_nodes"], self.meta["output_nodes"])

    def to_json(self) -> dict:
        out = {"Commuting subset": self.index, "meta": self.meta, "pattern_ascii": self.pattern_ascii}
        out.update(self.extra)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> LibraryEntry:
        try:
            index = obj["Commuting subset"]
            meta = obj["meta"]
            text = obj["pattern_ascii"]
        except KeyError as exc:
            raise LibraryError(f"entry is missing key {exc.args[0]!r}") from None
        extra = {k: v for k, v in obj.items() if k not in ("Commuting subset", "meta", "pattern_ascii")}
        return cls(index, meta, text, extra)


@dataclass
class LibraryFile:
    header: dict
    entries: list[LibraryEntry]

    @property
    def subset_indices(self) -> list[int]:
        return [int(k) for k in self.header.get("subsets", {})]


def meta_block(p: Pattern) -> dict:
    """The library meta block, recomputed from the pattern.

    Patterns without causal flow (compactified ones) are layered by signal
    dependencies instead, which is recorded under the extra key
    ``"layering"``.
    """
    from .flow import compute_metrics, dependency_layering, find_causal_flow
    from .pattern import graph_of

    fl = find_causal_flow(graph_of(p))
    layer = fl.layer if fl is not None else dependency_layering(p)
    m = compute_metrics(p, layer)
    meta = {
        "node number": m.n,
        "input_nodes": list(p.input_nodes),
        "output_nodes": list(p.output_nodes),
        "max degree": m.m_d,
        "number Pauli X measurements": m.n_px,
        "number Pauli Y measurements": m.n_py,
        "number layers (causal flow)": m.n_l,
        "max edge layer span": m.m_ld,
        "node_layer_list_causal_flow": {str(v): layer[v] for v in sorted(layer)},
    }
    if fl is None:
        meta["layering"] = "signal dependency"
    return meta


def make_entry(index: int, p: Pattern, **extra) -> LibraryEntry:
    return LibraryEntry(index, meta_block(p), print_pattern_ascii(p), dict(extra))


def check_entry(entry: LibraryEntry) -> list[str]:
    """Mismatches between an entry's stored meta and the recomputed one."""
    fresh = meta_block(entry.pattern())
    problems = []
    for key in META_KEYS:
        if key not in entry.meta:
            problems.append(f"missing meta key {key!r}")
        elif entry.meta[key] != fresh[key]:
            problems.append(f"{key}: stored {entry.meta[key]!r}, recomputed {fresh[key]!r}")
    return problems


def read_jsonl(path: str | Path) -> list[dict]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LibraryError(f"{path}:{lineno}: {exc.msg}") from None
            if not isinstance(obj, dict):
                raise LibraryError(f"{path}:{lineno}: expected a JSON object")
            out.append(obj)
    return out


def read_library(path: str | Path, strict: bool = False) -> LibraryFile:
    """Read a library file and re-check every entry's meta block.

    Mismatches raise :class:`LibraryError` when ``strict``, else they warn.
    Files without a header (bare entries) are accepted with an empty header.
    """
    objs = read_jsonl(path)
    header: dict = {}
    if objs and "Commuting subset" not in objs[0]:
        header = objs.pop(0)
    entries = []
    for obj in objs:
        if "Commuting subset" not in obj:
            continue  # summary blocks
        entry = LibraryEntry.from_json(obj)
        problems = check_entry(entry)
        if problems:
            msg = f"subset {entry.index}: " + "; ".join(problems)
            if strict:
                raise LibraryError(msg)
            warnings.warn(msg, stacklevel=2)
        entries.append(entry)
    lib = LibraryFile(header, entries)
    if header.get("subsets"):
        want = sorted(lib.subset_indices)
        got = sorted(e.index for e in entries)
        if want != got:
            raise LibraryError(f"header lists subsets {want} but file holds {got}")
    return lib


def write_library(path: str | Path, lib: LibraryFile) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        if lib.header:
            fh.write(json.dumps(lib.header) + "\n")
        for entry in lib.entries:
            fh.write(json.dumps(entry.to_json()) + "\n")
