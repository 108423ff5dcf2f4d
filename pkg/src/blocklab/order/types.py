"""Order-type expressions: the grammar of generatable presentations.

Atomic types are single blocks (``Fin(k)``, ``Omega``, ``OmegaStar``,
``Zeta``).  Dense families place one block per dyadic key, densely in a
unit interval: ``EtaShuffle`` cycles a finite descriptor list,
``Staircase`` uses the diagonal size sequence 1, 1,2, 1,2,3, ... (every
finite size appears densely, so every interval holds arbitrarily large
blocks), ``OmegaTimesEta`` makes every block a copy of omega, and
``PrimeBlockReplacement`` gives the i-th born block size p_i (the i-th
prime) unless a toggle script flips that position to a zeta block.
``Sum`` concatenates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple


class InvalidExpr(ValueError):
    """Raised for malformed type expressions."""


@dataclass(frozen=True)
class TypeExpr:
    def validate(self) -> None:
        pass


@dataclass(frozen=True)
class Fin(TypeExpr):
    k: int

    def validate(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise InvalidExpr(f"Fin needs a positive size, got {self.k!r}")


@dataclass(frozen=True)
class Omega(TypeExpr):
    pass


@dataclass(frozen=True)
class OmegaStar(TypeExpr):
    pass


@dataclass(frozen=True)
class Zeta(TypeExpr):
    pass


@dataclass(frozen=True)
class Sum(TypeExpr):
    parts: Tuple[TypeExpr, ...]

    def __init__(self, parts: Sequence[TypeExpr]):
        object.__setattr__(self, "parts", tuple(parts))

    def validate(self) -> None:
        if len(self.parts) < 1:
            raise InvalidExpr("Sum needs at least one part")
        for p in self.parts:
            p.validate()


@dataclass(frozen=True)
class EtaShuffle(TypeExpr):
    """Dense mixture of the listed block types over dyadic keys."""

    descriptors: Tuple[TypeExpr, ...]

    def __init__(self, descriptors: Sequence[TypeExpr]):
        object.__setattr__(self, "descriptors", tuple(descriptors))

    def validate(self) -> None:
        if len(self.descriptors) < 1:
            raise InvalidExpr("EtaShuffle needs a nonempty descriptor list")
        for d in self.descriptors:
            if isinstance(d, (Sum, EtaShuffle, Staircase, OmegaTimesEta, PrimeBlockReplacement)):
                raise InvalidExpr("EtaShuffle descriptors must be single-block types")
            d.validate()


@dataclass(frozen=True)
class Staircase(TypeExpr):
    """Dense shuffle of the finite blocks of every size (sizes 1,2,3,... each dense)."""


@dataclass(frozen=True)
class OmegaTimesEta(TypeExpr):
    """Densely many omega blocks: a decidable layout used for left patches."""


@dataclass(frozen=True)
class PrimeBlockReplacement(TypeExpr):
    """i-th born block has prime size p_i while position i is a member.

    ``toggle_script`` entries are ``(stage, position, member)``; the last
    entry for a position is final (default member).  A position whose
    final flag is False realizes a zeta block instead.
    """

    toggle_script: Tuple[Tuple[int, int, bool], ...] = field(default_factory=tuple)

    def __init__(self, toggle_script: Sequence[Tuple[int, int, bool]] = ()):
        object.__setattr__(self, "toggle_script", tuple(tuple(t) for t in toggle_script))

    def validate(self) -> None:
        last = 0
        for entry in self.toggle_script:
            if len(entry) != 3:
                raise InvalidExpr(f"toggle entry must be (stage, position, member): {entry!r}")
            stage, pos, member = entry
            if stage <= last:
                raise InvalidExpr("toggle script stages must be strictly increasing")
            if pos < 1:
                raise InvalidExpr("toggle positions are 1-based birth indices")
            if not isinstance(member, bool):
                raise InvalidExpr("toggle flag must be a bool")
            last = stage

    def final_member(self, position: int) -> bool:
        flag = True
        for _, pos, member in self.toggle_script:
            if pos == position:
                flag = member
        return flag


# ---------------------------------------------------------------------------
# Structural analysis (used by ground truth and by the embedding classifier).

# Block kinds, as realized by the scheduler.
K_FIN = "fin"
K_OMEGA = "omega"
K_OMEGA_STAR = "omega*"
K_ZETA = "zeta"

_ATOM_KIND = {Omega: K_OMEGA, OmegaStar: K_OMEGA_STAR, Zeta: K_ZETA}


def atom_kind(expr: TypeExpr) -> Optional[str]:
    """Block kind of a single-block expression, None for families."""
    if isinstance(expr, Fin):
        return K_FIN
    return _ATOM_KIND.get(type(expr))


def is_single_block(expr: TypeExpr) -> bool:
    return atom_kind(expr) is not None


def _symbol(expr: TypeExpr) -> str:
    """Condensation symbol: '1' for a single block, 'e' for a dense family."""
    if is_single_block(expr):
        return "1"
    if isinstance(expr, (EtaShuffle, Staircase, OmegaTimesEta, PrimeBlockReplacement)):
        return "e"
    raise InvalidExpr(f"no condensation symbol for {expr!r}")


def _symbols(expr: TypeExpr) -> list[str]:
    if isinstance(expr, Sum):
        out: list[str] = []
        for p in expr.parts:
            out.extend(_symbols(p))
        return out
    return [_symbol(expr)]


def condensation_tag(expr: TypeExpr) -> str:
    """One of eta / one_eta / eta_one / one_eta_one / other.

    A symbol sequence condenses to a dense type exactly when, after
    stripping at most one leading and one trailing point, what remains
    alternates dense segments with single points (dense at both ends):
    two adjacent points would survive as an adjacency in the
    condensation.
    """
    syms = _symbols(expr)
    if "e" not in syms:
        return "other"
    left = syms and syms[0] == "1"
    right = syms and syms[-1] == "1"
    core = syms[1 if left else 0 : len(syms) - (1 if right else 0)]
    if not core or core[0] != "e" or core[-1] != "e":
        return "other"
    for a, b in zip(core, core[1:]):
        if a == "1" and b == "1":
            return "other"
    if left and right:
        return "one_eta_one"
    if left:
        return "one_eta"
    if right:
        return "eta_one"
    return "eta"


def leftmost_block_kind(expr: TypeExpr) -> Optional[str]:
    """Kind of the leftmost block, or None if there is no leftmost block."""
    if is_single_block(expr):
        return atom_kind(expr)
    if isinstance(expr, Sum):
        return leftmost_block_kind(expr.parts[0])
    return None  # dense families have no leftmost block


def rightmost_block_kind(expr: TypeExpr) -> Optional[str]:
    if is_single_block(expr):
        return atom_kind(expr)
    if isinstance(expr, Sum):
        return rightmost_block_kind(expr.parts[-1])
    return None


def count_blocks_at_least(expr: TypeExpr, bound: int) -> int:
    """Lower bound on the number of blocks, saturating at ``bound``."""
    if is_single_block(expr):
        return 1
    if isinstance(expr, Sum):
        total = 0
        for p in expr.parts:
            total += count_blocks_at_least(p, bound)
            if total >= bound:
                return bound
        return total
    return bound  # dense families have infinitely many blocks


def has_left_endpoint_block(expr: TypeExpr) -> bool:
    """True when the whole order has a leftmost point."""
    kind = leftmost_block_kind(expr)
    return kind in (K_FIN, K_OMEGA)
