"""Text formats and the shipped lattice data."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import LatvacError
from .lattice import Lattice, LatticeAutomorphism, is_even, is_self_dual, root_sublattice_det, roots


class ParseError(Exception):
    """Malformed input (exit code 2)."""


def _data_lines(text: str):
    for num, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield num, line


def _int_row(num: int, line: str, width: int | None = None) -> list[int]:
    try:
        row = [int(tok) for tok in line.split()]
    except ValueError:
        raise ParseError(f"line {num}: expected integers, got {line!r}") from None
    if width is not None and len(row) != width:
        raise ParseError(f"line {num}: expected {width} entries, got {len(row)}")
    return row


def parse_matrix(text: str, with_rank: bool) -> list[list[int]]:
    lines = list(_data_lines(text))
    if not lines:
        raise ParseError("empty file")
    if with_rank:
        num, first = lines.pop(0)
        head = _int_row(num, first)
        if len(head) != 1 or head[0] < 0:
            raise ParseError(f"line {num}: expected the rank")
        r = head[0]
    else:
        r = len(lines)
    if len(lines) != r:
        last = lines[-1][0] if lines else 0
        raise ParseError(f"line {last}: expected {r} matrix rows, found {len(lines)}")
    return [_int_row(num, line, r) for num, line in lines]


def resolve_path(path: str | Path) -> Path:
    """The given path, or ``data/<name>`` resolved against the shipped data."""
    p = Path(path)
    if p.exists():
        return p
    if p.parent.name == "data" and len(p.parts) == 2:
        shipped = resources.files("latvac") / "data" / p.name
        if shipped.is_file():
            return Path(str(shipped))
    raise ParseError(f"{path}: no such file")


def _read(path) -> str:
    p = resolve_path(path)
    try:
        return p.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def parse_lattice_file(path) -> Lattice:
    return Lattice.from_rows(parse_matrix(_read(path), with_rank=True))


def parse_automorphism_file(path, lattice: Lattice) -> LatticeAutomorphism:
    m = parse_matrix(_read(path), with_rank=False)
    if len(m) != lattice.rank:
        raise LatvacError(f"automorphism has size {len(m)}, lattice has rank {lattice.rank}")
    return LatticeAutomorphism.of(lattice, m)


def parse_vector(text: str, rank: int | None = None) -> tuple[Fraction, ...]:
    try:
        v = tuple(Fraction(tok.strip()) for tok in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad vector {text!r}: expected comma-separated p/q") from None
    if rank is not None and len(v) != rank:
        raise ParseError(f"vector has {len(v)} entries, expected {rank}")
    return v


def format_matrix(m) -> str:
    return "\n".join(" ".join(str(x) for x in row) for row in m)


def format_lattice(lattice: Lattice, comment: str | None = None) -> str:
    head = f"# {comment}\n" if comment else ""
    return f"{head}{lattice.rank}\n{format_matrix(lattice.gram)}\n"


# -- shipped data -------------------------------------------------------------------------


@dataclass(frozen=True)
class DataEntry:
    name: str
    rank: int
    roots: int
    root_det: int


CATALOG = (
    DataEntry("a1", 1, 2, 2),  # A1 is even but not self dual
    DataEntry("e8", 8, 240, 1),
    DataEntry("e8e8", 16, 480, 1),
    DataEntry("d16plus", 16, 480, 4),
    DataEntry("d24plus", 24, 1104, 4),
    DataEntry("leech", 24, 0, 1),
)


def shipped_path(name: str) -> Path:
    return Path(str(resources.files("latvac") / "data" / name))


def shipped_lattice(name: str) -> Lattice:
    return parse_lattice_file(shipped_path(f"{name}.lat"))


def shipped_negation(rank: int) -> Path:
    return shipped_path(f"neg1_{rank}.aut")


def shipped_data() -> dict[str, Lattice]:
    """All shipped lattices, each checked against its catalog entry."""
    out = {}
    for entry in CATALOG:
        lat = shipped_lattice(entry.name)
        rs = roots(lat)
        unimodular = entry.name != "a1"
        ok = (
            lat.rank == entry.rank
            and is_even(lat)
            and is_self_dual(lat) == unimodular
            and len(rs) == entry.roots
            and root_sublattice_det(lat, rs) == entry.root_det
        )
        if not ok:
            raise LatvacError(f"shipped lattice {entry.name} fails validation")
        out[entry.name] = lat
    return out
