"""Root data of split reductive groups and their Weyl groups.

The Weyl group is realized as a finite group of unimodular integer
matrices acting on the character lattice (exponent vectors of
:class:`~borelk.laurent.LaurentPoly`).
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .laurent import LaurentPoly, Monomial, StructuralError, act, apply_matrix, augment, determinant, format_poly, parse_poly

IntMatrix = tuple[tuple[int, ...], ...]

DEFAULT_WEYL_CAP = 1 << 20


class RootDatumError(ValueError):
    """Validation failure; ``check`` names the violated condition."""

    def __init__(self, check: str, message: str):
        super().__init__(f"{check}: {message}")
        self.check = check


class WeylClosureError(RuntimeError):
    """Group generated by the reflections is not finite within the cap."""


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def _as_matrix(m: Sequence[Sequence[int]]) -> IntMatrix:
    return tuple(tuple(int(v) for v in row) for row in m)


@dataclass(frozen=True)
class RootDatum:
    name: str
    rank: int
    reflections: tuple[IntMatrix, ...]
    simple_roots: tuple[Monomial, ...]
    invariant_generators: tuple[LaurentPoly, ...] = ()
    # indices into invariant_generators whose reduced forms c = g - augment(g)
    # give free coordinates of the completed representation ring
    coordinates: tuple[int, ...] | None = None

    def validate(self) -> RootDatum:
        if self.rank < 1:
            raise RootDatumError("rank", f"rank must be positive, got {self.rank}")
        if len(self.reflections) != len(self.simple_roots):
            raise RootDatumError(
                "lengths", f"{len(self.reflections)} reflections but "
                f"{len(self.simple_roots)} simple roots")
        eye = identity(self.rank)
        for i, (s, alpha) in enumerate(zip(self.reflections, self.simple_roots)):
            if len(s) != self.rank or any(len(row) != self.rank for row in s):
                raise RootDatumError("shape", f"reflection {i} is not {self.rank}x{self.rank}")
            if len(alpha) != self.rank:
                raise RootDatumError("shape", f"simple root {i} has wrong length")
            if determinant(s) not in (1, -1):
                raise RootDatumError("unimodularity", f"reflection {i} has determinant {determinant(s)}")
            if matmul(s, s) != eye:
                raise RootDatumError("involutivity", f"reflection {i} does not square to the identity")
            if apply_matrix(s, alpha) != tuple(-a for a in alpha):
                raise RootDatumError("root-negation", f"reflection {i} does not send its root to its negative")
        for g in self.invariant_generators:
            if g.rank != self.rank:
                raise RootDatumError("generators", f"generator {g} has rank {g.rank}")
        if self.coordinates is not None:
            if any(not 0 <= c < len(self.invariant_generators) for c in self.coordinates):
                raise RootDatumError("coordinates", "coordinate index out of range")
        return self

    def ig_generators(self) -> list[LaurentPoly]:
        """Generators ``g - augment(g)`` of the augmentation ideal of R(G)."""
        return [g - augment(g) for g in self.invariant_generators]

    def coordinate_generators(self) -> list[LaurentPoly]:
        gens = self.ig_generators()
        if self.coordinates is None:
            return gens
        return [gens[i] for i in self.coordinates]

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "rank": self.rank,
            "reflections": [[list(r) for r in s] for s in self.reflections],
            "simple_roots": [list(a) for a in self.simple_roots],
            "invariant_generators": [format_poly(g) for g in self.invariant_generators],
        }
        if self.coordinates is not None:
            out["coordinates"] = list(self.coordinates)
        return out


@dataclass(frozen=True)
class WeylGroup:
    rank: int
    elements: tuple[IntMatrix, ...]
    generator_indices: tuple[int, ...]
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def generators(self) -> list[IntMatrix]:
        return [self.elements[i] for i in self.generator_indices]

    def index(self, m: IntMatrix) -> int:
        if not self._index:
            self._index.update({e: i for i, e in enumerate(self.elements)})
        return self._index[m]


def generate_weyl(rd: RootDatum, cap: int = DEFAULT_WEYL_CAP) -> WeylGroup:
    """Breadth-first closure of the simple reflections under multiplication."""
    eye = identity(rd.rank)
    elements = [eye]
    seen = {eye: 0}
    queue = deque([eye])
    while queue:
        g = queue.popleft()
        for s in rd.reflections:
            h = matmul(g, s)
            if h not in seen:
                if len(elements) >= cap:
                    raise WeylClosureError(
                        f"group generated by {rd.name} reflections is not finite within cap {cap}")
                seen[h] = len(elements)
                elements.append(h)
                queue.append(h)
    gens = tuple(seen[s] for s in rd.reflections)
    return WeylGroup(rank=rd.rank, elements=tuple(elements), generator_indices=gens)


def orbit(m: Sequence[int], W: WeylGroup) -> list[Monomial]:
    m = tuple(m)
    if len(m) != W.rank:
        raise StructuralError(f"monomial rank {len(m)} != {W.rank}")
    return sorted({apply_matrix(w, m) for w in W.elements})


def orbit_sum(m: Sequence[int], W: WeylGroup) -> LaurentPoly:
    return LaurentPoly(W.rank, {mono: 1 for mono in orbit(m, W)})


def is_invariant(p: LaurentPoly, W: WeylGroup) -> bool:
    if p.rank != W.rank:
        raise StructuralError(f"rank mismatch: {p.rank} vs {W.rank}")
    return all(act(p, s) == p for s in W.generators)


def orbit_char_poly(x: LaurentPoly, W: WeylGroup) -> list[LaurentPoly]:
    """Elementary symmetric functions ``[f1, ..., fn]`` of ``{w.x : w in W}``.

    The multiset has one entry per group element, so ``n == |W|`` and ``x``
    is a root of ``t^n - f1 t^(n-1) + ... + (-1)^n fn``.
    """
    if x.rank != W.rank:
        raise StructuralError(f"rank mismatch: {x.rank} vs {W.rank}")
    n = len(W)
    e = [LaurentPoly.one(x.rank)] + [LaurentPoly.zero(x.rank)] * n
    for w in W.elements:
        y = act(x, w)
        for k in range(n, 0, -1):
            e[k] = e[k] + e[k - 1] * y
    return e[1:]


def char_poly_residual(x: LaurentPoly, coeffs: Sequence[LaurentPoly]) -> LaurentPoly:
    """Evaluate ``x^n - f1 x^(n-1) + ... + (-1)^n fn`` (zero when coeffs come from the orbit)."""
    n = len(coeffs)
    total = x ** n
    power = LaurentPoly.one(x.rank)
    for k in range(n, 0, -1):
        # coefficient of x^(n-k) is (-1)^k f_k
        term = coeffs[k - 1] * power
        total = total + term if k % 2 == 0 else total - term
        power = power * x
    return total


# -- preset catalog ------------------------------------------------------------

def _poly(text: str, rank: int) -> LaurentPoly:
    return parse_poly(text, rank)


def torus(r: int) -> RootDatum:
    gens = []
    for i in range(1, r + 1):
        gens += [_poly(f"l{i}", r), _poly(f"l{i}^-1", r)]
    return RootDatum(name=f"Gm^{r}", rank=r, reflections=(), simple_roots=(),
                     invariant_generators=tuple(gens),
                     coordinates=tuple(range(0, 2 * r, 2)))


def _sl2() -> RootDatum:
    return RootDatum(
        name="SL2", rank=1, reflections=(((-1,),),), simple_roots=((2,),),
        invariant_generators=(_poly("l1 + l1^-1", 1),), coordinates=(0,))


def _gl2() -> RootDatum:
    return RootDatum(
        name="GL2", rank=2, reflections=(((0, 1), (1, 0)),), simple_roots=((1, -1),),
        invariant_generators=(_poly("l1 + l2", 2), _poly("l1*l2", 2), _poly("l1^-1*l2^-1", 2)),
        coordinates=(0, 1))


def _sl3() -> RootDatum:
    # character lattice in the basis of fundamental weights
    return RootDatum(
        name="SL3", rank=2,
        reflections=(((-1, 0), (1, 1)), ((1, 1), (0, -1))),
        simple_roots=((2, -1), (-1, 2)),
        invariant_generators=(_poly("l1 + l1^-1*l2 + l2^-1", 2),
                              _poly("l2 + l1*l2^-1 + l1^-1", 2)),
        coordinates=(0, 1))


def _gl3() -> RootDatum:
    return RootDatum(
        name="GL3", rank=3,
        reflections=(((0, 1, 0), (1, 0, 0), (0, 0, 1)),
                     ((1, 0, 0), (0, 0, 1), (0, 1, 0))),
        simple_roots=((1, -1, 0), (0, 1, -1)),
        invariant_generators=(_poly("l1 + l2 + l3", 3),
                              _poly("l1*l2 + l1*l3 + l2*l3", 3),
                              _poly("l1*l2*l3", 3),
                              _poly("l1^-1*l2^-1*l3^-1", 3)),
        coordinates=(0, 1, 2))


PRESETS = {"SL2": _sl2, "GL2": _gl2, "SL3": _sl3, "GL3": _gl3}

_TORUS_RE = re.compile(r"^Gm(?:\^(\d+))?$")


def _embed(p: LaurentPoly, offset: int, rank: int) -> LaurentPoly:
    return LaurentPoly(rank, {(0,) * offset + m + (0,) * (rank - offset - p.rank): c
                              for m, c in p.items()})


def _block(s: IntMatrix, offset: int, rank: int) -> IntMatrix:
    n = len(s)
    rows = []
    for i in range(rank):
        if offset <= i < offset + n:
            rows.append(tuple(s[i - offset][j - offset] if offset <= j < offset + n else 0
                              for j in range(rank)))
        else:
            rows.append(tuple(int(i == j) for j in range(rank)))
    return tuple(rows)


def product(*factors: RootDatum) -> RootDatum:
    """Direct product: block-diagonal reflections, concatenated lattices."""
    rank = sum(f.rank for f in factors)
    reflections, roots, gens, coords = [], [], [], []
    offset = 0
    for f in factors:
        reflections += [_block(s, offset, rank) for s in f.reflections]
        roots += [(0,) * offset + a + (0,) * (rank - offset - f.rank) for a in f.simple_roots]
        base = len(gens)
        gens += [_embed(g, offset, rank) for g in f.invariant_generators]
        idx = f.coordinates if f.coordinates is not None else range(len(f.invariant_generators))
        coords += [base + i for i in idx]
        offset += f.rank
    return RootDatum(name="x".join(f.name for f in factors), rank=rank,
                     reflections=tuple(reflections), simple_roots=tuple(roots),
                     invariant_generators=tuple(gens), coordinates=tuple(coords))


def preset(name: str) -> RootDatum:
    """Look up ``SL2``, ``GL2``, ``SL3``, ``GL3``, ``Gm^r`` or an ``x``-joined product."""
    parts = name.split("x")
    if len(parts) > 1:
        return product(*(preset(p) for p in parts)).validate()
    m = _TORUS_RE.match(name)
    if m:
        r = int(m.group(1) or 1)
        if r < 1:
            raise RootDatumError("preset", f"torus rank must be positive in {name!r}")
        return torus(r).validate()
    if name not in PRESETS:
        raise RootDatumError("preset", f"unknown preset {name!r}; known: "
                             f"{', '.join(sorted(PRESETS))}, Gm^r and products like SL2xGm^1")
    return PRESETS[name]().validate()


def root_datum_from_json(data: dict) -> RootDatum:
    """Build a datum from the JSON schema; a ``preset`` supplies defaults."""
    if not isinstance(data, dict):
        raise RootDatumError("json", "root datum must be a JSON object")
    base = preset(data["preset"]) if data.get("preset") else None
    if base is None and "rank" not in data:
        raise RootDatumError("rank", "missing field 'rank' (or 'preset')")
    try:
        rank = int(data.get("rank", base.rank if base else 0))
        name = str(data.get("name", base.name if base else "custom"))
        if "reflections" in data:
            reflections = tuple(_as_matrix(s) for s in data["reflections"])
        else:
            reflections = base.reflections if base else ()
        if "simple_roots" in data:
            roots = tuple(tuple(int(v) for v in a) for a in data["simple_roots"])
        else:
            roots = base.simple_roots if base else ()
        if "invariant_generators" in data:
            gens = tuple(parse_poly(g, rank) for g in data["invariant_generators"])
            coords = tuple(data["coordinates"]) if "coordinates" in data else None
        else:
            gens = base.invariant_generators if base else ()
            coords = base.coordinates if base else None
    except (TypeError, ValueError, KeyError) as exc:
        if isinstance(exc, RootDatumError):
            raise
        raise RootDatumError("json", f"malformed field: {exc}") from exc
    return RootDatum(name=name, rank=rank, reflections=reflections, simple_roots=roots,
                     invariant_generators=gens, coordinates=coords).validate()


def parse_root_datum(source: str | Path) -> RootDatum:
    """Accept a preset name or a path to a root-datum JSON file."""
    path = Path(source)
    if str(source).endswith(".json") or path.is_file():
        try:
            data = json.loads(path.read_text())
        except FileNotFoundError as exc:
            raise RootDatumError("file", f"no such file: {source}") from exc
        except json.JSONDecodeError as exc:
            raise RootDatumError("json", f"malformed JSON in {source}: {exc}") from exc
        return root_datum_from_json(data)
    return preset(str(source))
