"""
Text formats for instances, formulas, matchings and reduction registries.

Every format is line oriented, 1-based and allows ``#`` comments; parse
errors carry the offending line number.
"""
import logging
import sys
from typing import Dict, List, Mapping, Optional, Set, Tuple

from ..models.errors import FormatError, FormulaError, InstanceError, MatchingError, RestrictionError
from ..models.formula import SatFormula
from ..models.instance import Edge, Instance, Side, Vertex, build_instance
from ..models.matching import Matching
from ..models.restrictions import RestrictedEdgeSets, validate_restrictions

logger = logging.getLogger(__name__)

RESTRICTION_KEYWORDS = ("forbidden", "forced", "free")


def _content_lines(text: str):
    """(line number, content) pairs with comments and blank lines removed."""
    for number, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if content:
            yield number, content


def _int(token: str, line: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise FormatError(f"{what} must be an integer, got {token!r}", line=line) from None
    return value


def _index(token: str, line: int, bound: int, what: str) -> int:
    value = _int(token, line, what)
    if not 1 <= value <= bound:
        raise FormatError(f"{what} {value} is out of range 1..{bound}", line=line)
    return value - 1


def _parse_groups(body: str, line: int, bound: int) -> List[Tuple[int, ...]]:
    groups = []
    if not body.strip():
        return groups
    for chunk in body.split(";"):
        chunk = chunk.strip()
        if chunk.startswith("(") and chunk.endswith(")"):
            tokens = chunk[1:-1].split()
            if not tokens:
                raise FormatError("empty tie-group", line=line)
        elif chunk and not any(c in chunk for c in " ()"):
            tokens = [chunk]
        else:
            raise FormatError(f"malformed tie-group {chunk!r}", line=line)
        groups.append(tuple(_index(t, line, bound, "vertex") for t in tokens))
    return groups


# Instances ------------------------------------------------------------------


def parse_instance(text: str) -> Tuple[Instance, RestrictedEdgeSets]:
    """
    Parse an ``instance`` file into a validated instance and its restricted edge sets.

    The header ``instance <n_men> <n_women>`` comes first. It is followed by
    ``m <i>: ...`` and ``w <j>: ...`` preference lines, where tie-groups are
    separated by ``;`` and tied members are wrapped in parentheses, and by
    ``forbidden``/``forced``/``free <i> <j>`` lines. Vertices without a line
    have an empty list.

    Parameters:
        text: The file contents.

    Returns:
        (Instance, RestrictedEdgeSets).

    Raises:
        FormatError: On any syntax error, non-reciprocal listing or invalid
            restriction. The message starts with the 1-based line number; for
            listing errors this is the list of the offending vertex, and for
            restriction errors the last line naming one of the offending edges.
    """
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty instance file")
    header_line, header = lines[0]
    tokens = header.split()
    if len(tokens) != 3 or tokens[0] != "instance":
        raise FormatError("expected header 'instance <n_men> <n_women>'", line=header_line)
    n_men = _int(tokens[1], header_line, "man count")
    n_women = _int(tokens[2], header_line, "woman count")
    if n_men < 0 or n_women < 0:
        raise FormatError("vertex counts must be non-negative", line=header_line)

    prefs = {Side.MAN: [[] for _ in range(n_men)], Side.WOMAN: [[] for _ in range(n_women)]}
    list_lines: Dict[Vertex, int] = {}
    restricted: Dict[str, List[Edge]] = {k: [] for k in RESTRICTION_KEYWORDS}
    restriction_lines: Dict[Tuple[str, Edge], int] = {}

    for number, content in lines[1:]:
        keyword = content.split(None, 1)[0]
        if keyword in ("m", "w"):
            head, sep, body = content.partition(":")
            if not sep:
                raise FormatError("a preference line needs ':' after the vertex id", line=number)
            head_tokens = head.split()
            if len(head_tokens) != 2:
                raise FormatError(f"malformed preference line head {head!r}", line=number)
            side = Side(keyword)
            own = n_men if side is Side.MAN else n_women
            other = n_women if side is Side.MAN else n_men
            vertex = Vertex(side, _index(head_tokens[1], number, own, "vertex"))
            if vertex in list_lines:
                raise FormatError(f"second preference list for {vertex}", line=number)
            list_lines[vertex] = number
            prefs[side][vertex.index] = _parse_groups(body, number, other)
        elif keyword in RESTRICTION_KEYWORDS:
            parts = content.split()
            if len(parts) != 3:
                raise FormatError(f"expected '{keyword} <i> <j>'", line=number)
            edge = (_index(parts[1], number, n_men, "man"), _index(parts[2], number, n_women, "woman"))
            restricted[keyword].append(edge)
            restriction_lines.setdefault((keyword, edge), number)
        else:
            raise FormatError(f"unknown line type {keyword!r}", line=number)

    try:
        instance = build_instance(prefs[Side.MAN], prefs[Side.WOMAN])
    except InstanceError as e:
        raise FormatError(str(e), line=list_lines.get(e.vertex, header_line)) from e
    sets = RestrictedEdgeSets(**restricted)
    try:
        validate_restrictions(instance, sets)
    except RestrictionError as e:
        located = [n for (k, edge), n in restriction_lines.items() if edge in e.edges]
        raise FormatError(str(e), line=max(located) if located else None) from e
    logger.debug(f"Parsed {instance!r} with {len(sets.restricted_edges())} restricted edges")
    return instance, sets


def _format_group(group: Tuple[int, ...]) -> str:
    members = sorted(k + 1 for k in group)
    if len(members) == 1:
        return str(members[0])
    return "(" + " ".join(str(k) for k in members) + ")"


def serialize_instance(instance: Instance, restricted: Optional[RestrictedEdgeSets] = None) -> str:
    """Canonical text: every list line present, tie-group members ascending, restrictions sorted."""
    restricted = restricted or RestrictedEdgeSets()
    out = [f"instance {instance.n_men} {instance.n_women}"]
    for side in (Side.MAN, Side.WOMAN):
        for k in instance.vertices(side):
            vertex = Vertex(side, k)
            groups = "; ".join(_format_group(g) for g in instance.preference_list(vertex))
            out.append(f"{side.value} {k + 1}: {groups}".rstrip())
    for keyword in RESTRICTION_KEYWORDS:
        for i, j in sorted(getattr(restricted, keyword)):
            out.append(f"{keyword} {i + 1} {j + 1}")
    return "\n".join(out) + "\n"


# Formulas -------------------------------------------------------------------


def parse_formula(text: str) -> SatFormula:
    lines = list(_content_lines(text))
    if not lines:
        raise FormatError("empty formula file")
    header_line, header = lines[0]
    tokens = header.split()
    if len(tokens) != 4 or tokens[:2] != ["p", "1in3"]:
        raise FormatError("expected header 'p 1in3 <nvars> <nclauses>'", line=header_line)
    n_vars = _int(tokens[2], header_line, "variable count")
    n_clauses = _int(tokens[3], header_line, "clause count")
    body = lines[1:]
    if len(body) != n_clauses:
        raise FormatError(f"header announces {n_clauses} clauses, found {len(body)}", line=header_line)
    clauses = []
    for number, content in body:
        parts = content.split()
        if len(parts) != 3:
            raise FormatError(f"a clause needs exactly three variables, got {len(parts)}", line=number)
        clause = tuple(_index(t, number, n_vars, "variable") for t in parts)
        if len(set(clause)) != 3:
            raise FormatError("clause repeats a variable", line=number)
        clauses.append(clause)
    try:
        return SatFormula(n_vars, tuple(clauses))
    except FormulaError as e:
        raise FormatError(str(e)) from e


def serialize_formula(formula: SatFormula) -> str:
    out = [f"p 1in3 {formula.n_vars} {formula.n_clauses}"]
    out.extend(" ".join(str(x + 1) for x in clause) for clause in formula.clauses)
    return "\n".join(out) + "\n"


# Matchings ------------------------------------------------------------------


def parse_matching(text: str, instance: Instance) -> Matching:
    edges: Set[Edge] = set()
    for number, content in _content_lines(text):
        parts = content.split()
        if len(parts) != 2:
            raise FormatError("a matching line needs two integers '<i> <j>'", line=number)
        edge = (_index(parts[0], number, instance.n_men, "man"), _index(parts[1], number, instance.n_women, "woman"))
        if edge in edges:
            raise FormatError(f"edge ({edge[0] + 1}, {edge[1] + 1}) is listed twice", line=number)
        edges.add(edge)
    try:
        return Matching.for_instance(instance, edges)
    except MatchingError as e:
        raise FormatError(str(e)) from e


def serialize_matching(matching: Matching) -> str:
    return "".join(f"{i + 1} {j + 1}\n" for i, j in matching.sorted_edges())


# Registries -----------------------------------------------------------------


def identity_roles(instance: Instance) -> Dict[Vertex, str]:
    roles = {Vertex(Side.MAN, i): f"m{i + 1}" for i in instance.men}
    roles.update({Vertex(Side.WOMAN, j): f"w{j + 1}" for j in instance.women})
    return roles


def format_registry(roles: Mapping[Vertex, str], stages: Mapping[Edge, str]) -> str:
    """``vertex <id> role <name>`` lines, then ``edge <i> <j> stage <tag>`` lines."""
    out = []
    for vertex in sorted(roles, key=lambda v: (v.side is Side.WOMAN, v.index)):
        out.append(f"vertex {vertex} role {roles[vertex]}")
    for i, j in sorted(stages):
        out.append(f"edge {i + 1} {j + 1} stage {stages[(i, j)]}")
    return "\n".join(out) + "\n"


def write_registry(path: str, roles: Mapping[Vertex, str], stages: Mapping[Edge, str]) -> None:
    write_text(path, format_registry(roles, stages))


# Files ----------------------------------------------------------------------


def read_text(path: str) -> str:
    """Read a UTF-8 file; ``-`` reads standard input."""
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, "r", encoding="utf-8-sig") as f:
            return f.read()
    except UnicodeDecodeError as e:
        raise FormatError(f"{path} is not valid UTF-8") from e
    except OSError as e:
        raise FormatError(f"could not open {path}: {e.strerror}") from e


def write_text(path: str, text: str) -> None:
    """Write a UTF-8 file; ``-`` writes standard output."""
    if path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    except OSError as e:
        raise FormatError(f"could not write {path}: {e.strerror}") from e
    logger.info(f"Wrote {path}")
