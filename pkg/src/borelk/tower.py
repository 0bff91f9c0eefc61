"""Towers of finitely generated abelian groups and Mittag-Leffler evidence.

A group is presented as ``Z^gens / span(rels)``; a tower carries integer
matrices ``maps[i] : stages[i+1] -> stages[i]`` acting on column vectors.
lim^1 is never computed; we only certify its vanishing through surjective
or stabilizing image chains inside a finite window.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .borel import level_basis, restriction_matrix
from .laurent import StructuralError
from .lattice import hnf, left_kernel, matmul, smith_diagonal, transpose


@dataclass(frozen=True)
class FgAbGroup:
    gens: int
    rels: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        if self.gens < 0:
            raise StructuralError("negative generator count")
        for r in self.rels:
            if len(r) != self.gens:
                raise StructuralError(f"relator {r} has length {len(r)}, expected {self.gens}")

    @classmethod
    def free(cls, n: int) -> FgAbGroup:
        return cls(n)

    @classmethod
    def cyclic(cls, n: int) -> FgAbGroup:
        return cls(1, ((n,),))

    def invariants(self) -> tuple[int, list[int]]:
        """``(free_rank, torsion)`` from the Smith normal form of the relations."""
        diag = smith_diagonal([list(r) for r in self.rels], self.gens) if self.rels else []
        return self.gens - len(diag), [x for x in diag if x > 1]

    def describe(self) -> str:
        free, tors = self.invariants()
        parts = [f"Z/{t}" for t in tors]
        if free:
            parts.append("Z" if free == 1 else f"Z^{free}")
        return " + ".join(parts) or "0"

    def isomorphic(self, other: FgAbGroup) -> bool:
        return self.invariants() == other.invariants()

    def relation_lattice(self):
        return hnf([list(r) for r in self.rels], self.gens)

    def to_json(self) -> dict:
        return {"gens": self.gens, "rels": [list(r) for r in self.rels]}


class Verdict(str, Enum):
    SURJECTIVE = "SURJECTIVE"
    STABILIZED = "STABILIZED"
    UNDETERMINED = "UNDETERMINED"


@dataclass
class Tower:
    stages: list[FgAbGroup]
    maps: list[list[list[int]]]

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if len(self.maps) != len(self.stages) - 1:
            raise StructuralError(f"{len(self.stages)} stages need {len(self.stages) - 1} maps, "
                                  f"got {len(self.maps)}")
        for i, f in enumerate(self.maps):
            lo, hi = self.stages[i], self.stages[i + 1]
            if len(f) != lo.gens or any(len(row) != hi.gens for row in f):
                raise StructuralError(f"map {i} must be a {lo.gens}x{hi.gens} matrix")
            if hi.rels:
                images = transpose(matmul(f, transpose([list(r) for r in hi.rels])))
                target = lo.relation_lattice()
                if any(any(v) and not target.contains(v) for v in images):
                    raise StructuralError(f"map {i} does not send relations into relations")

    @property
    def top(self) -> FgAbGroup:
        return self.stages[-1]

    def composite(self, i: int, s: int) -> list[list[int]]:
        """Matrix of ``stages[i+s] -> stages[i]``."""
        m = self.maps[i]
        for k in range(i + 1, i + s):
            m = matmul(m, self.maps[k])
        return m

    def to_json(self) -> dict:
        return {"stages": [g.to_json() for g in self.stages], "maps": self.maps}

    @classmethod
    def from_json(cls, data: dict) -> Tower:
        try:
            stages = [FgAbGroup(int(s["gens"]), tuple(tuple(int(v) for v in r) for r in s.get("rels", [])))
                      for s in data["stages"]]
            maps = [[[int(v) for v in row] for row in m] for m in data["maps"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise StructuralError(f"malformed tower JSON: {exc}") from exc
        return cls(stages, maps)


def _image_lattice(stage: FgAbGroup, mat: Sequence[Sequence[int]]) -> list[list[int]]:
    """HNF rows of ``im(mat) + rels`` inside ``Z^gens``."""
    rows = transpose(mat) if mat and mat[0] else []
    rows = rows + [list(r) for r in stage.rels]
    if not rows or stage.gens == 0:
        return []
    return hnf(rows, stage.gens).rows


def _full(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


@dataclass
class MLReport:
    verdicts: list[Verdict]
    image_chains: list[list[str]] = field(default_factory=list)

    @property
    def lim1_vanishes(self) -> bool:
        return all(v is not Verdict.UNDETERMINED for v in self.verdicts)

    def to_json(self) -> dict:
        return {"verdicts": [v.value for v in self.verdicts],
                "lim1_evidence": 0 if self.lim1_vanishes else "undetermined"}


def ml_check(t: Tower) -> MLReport:
    """Per-stage Mittag-Leffler evidence over the whole tower as window.

    Stage ``i`` (for every stage with an incoming map) is SURJECTIVE when
    ``maps[i]`` is onto, STABILIZED when two consecutive images
    ``im(stages[i+s] -> stages[i])`` coincide, and UNDETERMINED otherwise.
    """
    t.validate()
    verdicts = []
    chains = []
    for i in range(len(t.maps)):
        stage = t.stages[i]
        full = hnf(_full(stage.gens), stage.gens).rows if stage.gens else []
        prev = _image_lattice(stage, t.maps[i])
        chain = [_describe_quotient(stage, prev)]
        if prev == full:
            verdicts.append(Verdict.SURJECTIVE)
            chains.append(chain)
            continue
        verdict = Verdict.UNDETERMINED
        for s in range(2, len(t.stages) - i):
            cur = _image_lattice(stage, t.composite(i, s))
            chain.append(_describe_quotient(stage, cur))
            if cur == prev:
                verdict = Verdict.STABILIZED
                break
            prev = cur
        verdicts.append(verdict)
        chains.append(chain)
    return MLReport(verdicts, chains)


def _describe_quotient(stage: FgAbGroup, lattice_rows: list[list[int]]) -> str:
    # index of the image inside the stage, as the cokernel group
    return FgAbGroup(stage.gens, tuple(tuple(r) for r in lattice_rows)).describe()


def window_lim(t: Tower) -> FgAbGroup:
    """Group of compatible tuples ``(a_0, ..., a_n)`` with ``a_i = f_i(a_{i+1})``."""
    t.validate()
    sizes = [g.gens for g in t.stages]
    offsets = [sum(sizes[:i]) for i in range(len(sizes))]
    total = sum(sizes)
    # unknowns: tuple coordinates, then multipliers for relations of stages 0..n-1
    rel_rows = []
    for i in range(len(t.maps)):
        for r in t.stages[i].rels:
            rel_rows.append((i, r))
    cond_cols = sum(sizes[:-1])
    rows = []
    for k in range(total):
        row = [0] * cond_cols
        stage = next(i for i in range(len(sizes)) if offsets[i] <= k < offsets[i] + sizes[i])
        local = k - offsets[stage]
        if stage < len(t.maps):
            row[offsets[stage] + local] += 1
        if stage >= 1:
            f = t.maps[stage - 1]
            for r in range(sizes[stage - 1]):
                row[offsets[stage - 1] + r] -= f[r][local]
        rows.append(row)
    for i, r in rel_rows:
        row = [0] * cond_cols
        for a, v in enumerate(r):
            row[offsets[i] + a] = v
        rows.append(row)
    if cond_cols == 0:
        kernel = [[int(i == j) for j in range(total)] for i in range(total)]
    else:
        kernel = [v[:total] for v in left_kernel(rows, cond_cols)]
    k_basis = hnf(kernel, total).rows if kernel and total else []
    if not k_basis:
        return FgAbGroup(0)
    kh = hnf(k_basis, total, transform=True)
    rels = []
    for i, g in enumerate(t.stages):
        for r in g.rels:
            vec = [0] * total
            vec[offsets[i]:offsets[i] + g.gens] = r
            coords = kh.solve(vec)
            if coords is None:
                raise StructuralError("relation outside the compatible subgroup")
            rels.append(tuple(coords))
    return FgAbGroup(len(k_basis), tuple(rels))


def build_bt_tower(j: int, kmax: int) -> Tower:
    """``K_0`` of ``(P^k)^j`` for ``k = 0..kmax`` with level-restriction maps."""
    if j < 1 or kmax < 1:
        raise ValueError("rank and kmax must be >= 1")
    stages = [FgAbGroup((k + 1) ** j) for k in range(kmax + 1)]
    maps = [restriction_matrix(j, k) for k in range(1, kmax + 1)]
    assert all(len(level_basis(j, k)) == stages[k].gens for k in range(kmax + 1))
    return Tower(stages, maps)


def scalar_tower(factor: int, n: int) -> Tower:
    """``Z <-factor- Z <-factor- ...`` with ``n`` stages."""
    return Tower([FgAbGroup(1) for _ in range(n)], [[[factor]] for _ in range(n - 1)])


def cyclic_tower(p: int, n: int) -> Tower:
    """``Z/p <- Z/p^2 <- ... <- Z/p^n`` along reduction maps."""
    return Tower([FgAbGroup.cyclic(p ** (k + 1)) for k in range(n)], [[[1]] for _ in range(n - 1)])


@dataclass
class MilnorReport:
    ml: MLReport
    limit: FgAbGroup

    @property
    def conclusion(self) -> str:
        if self.ml.lim1_vanishes:
            return f"lim1 evidence 0; K = window_lim = {self.limit.describe()}"
        return "undetermined; Milnor sequence inconclusive"

    def to_json(self) -> dict:
        return {"lim1_evidence": self.ml.to_json()["lim1_evidence"],
                "high_verdicts": [v.value for v in self.ml.verdicts],
                "window_lim": self.limit.describe(),
                "window_lim_presentation": self.limit.to_json(),
                "conclusion": self.conclusion}


def milnor_report(t_high: Tower, t_low: Tower) -> MilnorReport:
    """Combine lim^1 evidence for the degree ``n+1`` tower with the window limit in degree ``n``."""
    return MilnorReport(ml_check(t_high), window_lim(t_low))
