"""The measure of maximal entropy, exactly.

A tile of level n carries mass w/deg^n or b/deg^n by color, where (w, b)
is the stationary left eigenvector of the two-color count matrix. All
masses, counts and correlations are Fractions; floats appear only in
entropy and exponent reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .diagnostics import (
    BadLambda,
    InadmissibleAddress,
    LevelMismatch,
    NonIntegerClosedForm,
    ResourceLimit,
)
from .rules import BLACK, WHITE, SubdivisionRule, TileCounts, other_color
from .subdivision import Address


@dataclass(frozen=True)
class MeasureModel:
    """Counts and stationary weights of a rule.

    counts = (ww, wb, bw, bb) split by (host, color). The level counts
    evolve by the matrix [[ww, bw], [wb, bb]] with eigenvalues deg and
    lambda2 = ww - wb; (w, b) is its normalized left eigenvector.
    """

    rule: SubdivisionRule
    counts: TileCounts
    w: Fraction
    b: Fraction
    deg: int
    lambda1: int
    lambda2: int


def measure_model(rule: SubdivisionRule) -> MeasureModel:
    c = rule.counts()
    total = c.wb + c.bw
    w = Fraction(c.wb, total)
    b = Fraction(c.bw, total)
    lam2 = c.ww - c.wb
    assert w + b == 1 and w > 0 and b > 0
    assert abs(lam2) < c.deg, "subleading eigenvalue must be strictly smaller"
    assert lam2 == c.bb - c.bw, "the two diagonal differences agree"
    return MeasureModel(
        rule=rule, counts=c, w=w, b=b, deg=c.deg, lambda1=c.deg, lambda2=lam2
    )


def _weight(model: MeasureModel, color: str) -> Fraction:
    return model.w if color == WHITE else model.b


def _resolve_address(rule: SubdivisionRule, address) -> Address:
    if isinstance(address, str):
        parts = address.split("/")
        address = Address(parts[0], tuple(parts[1:]))
    if address.c0 not in (WHITE, BLACK):
        raise InadmissibleAddress(f"base color {address.c0!r}")
    prev = address.c0
    for t in address.letters:
        if t not in rule.d1.tiles:
            raise InadmissibleAddress(f"unknown letter {t!r}")
        if rule.tile_host[t] != prev:
            raise InadmissibleAddress(
                f"letter {t!r} is hosted in {rule.tile_host[t]!r}, not {prev!r}"
            )
        prev = rule.tile_color[t]
    return address


def _address_color(rule: SubdivisionRule, address: Address) -> str:
    if not address.letters:
        return address.c0
    return rule.tile_color[address.letters[-1]]


def tile_mass(model: MeasureModel, address) -> Fraction:
    """Mass of the addressed tile: its color weight over deg^level."""
    addr = _resolve_address(model.rule, address)
    color = _address_color(model.rule, addr)
    return _weight(model, color) / Fraction(model.deg) ** addr.level


def closed_form_counts(model: MeasureModel, k: int) -> tuple[int, int, int, int]:
    """(w_k, b_k, w'_k, b'_k): level-k tile counts inside each 0-tile.

    w_k white and b_k black k-tiles in the white 0-tile, primed in the
    black. Closed form from the eigendecomposition; the result must be
    integral and column sums must equal deg^k.
    """
    if k < 0:
        raise ValueError("need k >= 0")
    d, l2, w, b = model.deg, model.lambda2, model.w, model.b
    vals = (
        w * d**k + b * l2**k,
        w * d**k - w * l2**k,
        b * d**k - b * l2**k,
        b * d**k + w * l2**k,
    )
    for v in vals:
        if v.denominator != 1:
            raise NonIntegerClosedForm(f"count {v} for k={k} is not an integer")
    wk, bk, wpk, bpk = (int(v) for v in vals)
    assert wk + wpk == d**k and bk + bpk == d**k
    return wk, bk, wpk, bpk


def _counts_entry(model: MeasureModel, start_color: str, end_color: str, j: int) -> int:
    """Number of admissible words of length j from a tile of start_color
    to a tile colored end_color; equals the matching closed-form count."""
    wk, bk, wpk, bpk = closed_form_counts(model, j)
    table = {
        (WHITE, WHITE): wk,
        (WHITE, BLACK): bk,
        (BLACK, WHITE): wpk,
        (BLACK, BLACK): bpk,
    }
    return table[(start_color, end_color)]


@dataclass(frozen=True)
class EntropyReport:
    rule_name: str
    deg: int
    h_top: float
    w: Fraction
    b: Fraction
    lam: float | None
    q_exponent: float | None

    def partition_entropy(self, k: int) -> float:
        """Entropy of the level-k tile partition under the max measure."""
        wf, bf = float(self.w), float(self.b)
        return k * math.log(self.deg) + wf * math.log(1 / wf) + bf * math.log(1 / bf)


def entropy_report(model: MeasureModel, lam=None) -> EntropyReport:
    q = None
    if lam is not None:
        if not lam > 1:
            raise BadLambda(f"expansion factor must exceed 1, got {lam!r}")
        q = math.log(model.deg) / math.log(lam)
    return EntropyReport(
        rule_name=model.rule.name,
        deg=model.deg,
        h_top=math.log(model.deg),
        w=model.w,
        b=model.b,
        lam=None if lam is None else float(lam),
        q_exponent=q,
    )


def correlation(
    rule: SubdivisionRule,
    x_address,
    y_address,
    m: int,
    max_words: int = 200_000,
    enumerate_check: bool | None = None,
) -> Fraction:
    """Mass of (m-fold preimage of X) intersected with Y.

    X pulls back under m iterations to tiles of level m + level(X); those
    inside Y are counted by an admissible-word count from the color of Y
    to the 0-tile hosting X, giving mass(X) * count / deg^m. When the word
    space fits the budget the same mass is re-derived by brute
    enumeration of suffix words and the two must agree.
    """
    model = measure_model(rule)
    x = _resolve_address(rule, x_address)
    y = _resolve_address(rule, y_address)
    if m < y.level:
        raise LevelMismatch(f"need m >= level(Y) = {y.level}, got {m}")
    j = m - y.level
    y_color = _address_color(rule, y)
    x_anchor = rule.tile_host[x.letters[0]] if x.letters else x.c0
    count = _counts_entry(model, y_color, x_anchor, j)
    mass_x = tile_mass(model, x)
    closed = mass_x * count / Fraction(model.deg) ** m

    space = model.deg**j
    if enumerate_check is None:
        enumerate_check = space <= max_words
    elif enumerate_check and space > max_words:
        raise ResourceLimit(f"{space} suffix words exceed budget {max_words}")
    if enumerate_check:
        x_weight = _weight(model, _address_color(rule, x))
        unit = x_weight / Fraction(model.deg) ** (m + x.level)
        total = Fraction(0)
        hosted = {
            WHITE: [t for t in sorted(rule.d1.tiles) if rule.tile_host[t] == WHITE],
            BLACK: [t for t in sorted(rule.d1.tiles) if rule.tile_host[t] == BLACK],
        }

        def walk(prev_color: str, depth: int):
            nonlocal total
            if depth == j:
                if x.letters:
                    ok = rule.tile_host[x.letters[0]] == prev_color
                else:
                    ok = prev_color == x.c0
                if ok:
                    total += unit
                return
            for t in hosted[prev_color]:
                walk(rule.tile_color[t], depth + 1)

        walk(y_color, 0)
        assert total == closed, "closed form disagrees with enumeration"
    return closed
