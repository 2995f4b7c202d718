"""Symbolic algebra of unnormalized symmetric excitation states.

Z_k(n) denotes the equal-weight sum of every n-qubit basis string with
exactly k ones.  A state is a rational linear combination of tensor
products of such factors, each factor on its own named register.  States
stay unnormalized throughout: coefficients, inner products, and squared
norms are all exact `fractions.Fraction` values, and normalization is
represented by carrying a squared norm next to a state rather than by
dividing amplitudes (which would drag in irrational square roots).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .combinatorics import binom

__all__ = [
    "RegisterId",
    "ZBlock",
    "BlockProduct",
    "BlockSum",
    "block_sum",
    "UNIT",
    "ZERO",
    "z_state",
    "registers_of",
    "scale",
    "add",
    "tensor",
    "inner_product",
    "norm_sq",
    "bit_flip",
    "split_register",
    "merge_registers",
    "project_registers",
    "format_block_sum",
]

CoeffLike = Union[Fraction, int]


@dataclass(frozen=True, order=True)
class RegisterId:
    """A named group of qubits; width is the qubit count."""

    label: str
    width: int

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("register label must be non-empty")
        if self.width < 0:
            raise ValueError(f"register width must be non-negative, got {self.width}")


@dataclass(frozen=True, order=True)
class ZBlock:
    """One Z_k(n) factor on a register of width n."""

    register: RegisterId
    excitations: int

    def __post_init__(self) -> None:
        if not 0 <= self.excitations <= self.register.width:
            raise ValueError(
                f"excitations must lie in 0..{self.register.width}, "
                f"got {self.excitations}")

    def flipped(self) -> "ZBlock":
        return ZBlock(self.register, self.register.width - self.excitations)

    def norm_sq(self) -> int:
        return binom(self.register.width, self.excitations)


@dataclass(frozen=True)
class BlockProduct:
    """Product of Z blocks over pairwise-distinct registers, sorted by label."""

    blocks: tuple[ZBlock, ...]

    @staticmethod
    def of(blocks: Iterable[ZBlock]) -> "BlockProduct":
        ordered = tuple(sorted(blocks, key=lambda b: b.register.label))
        labels = [b.register.label for b in ordered]
        if len(set(labels)) != len(labels):
            raise ValueError("register labels within a product must be distinct")
        return BlockProduct(ordered)

    def registers(self) -> tuple[RegisterId, ...]:
        return tuple(b.register for b in self.blocks)

    def block_for(self, label: str) -> ZBlock:
        for b in self.blocks:
            if b.register.label == label:
                return b
        raise KeyError(label)

    def sort_key(self):
        return tuple(
            (b.register.label, b.register.width, b.excitations) for b in self.blocks)


Term = tuple[Fraction, BlockProduct]


@dataclass(frozen=True)
class BlockSum:
    """Canonical rational combination of block products over one register set.

    Canonical means: like terms merged, zero coefficients dropped, terms
    sorted, and every term over the identical register set.  Use
    :func:`block_sum` to construct one; equality of canonical forms is exact
    symbolic equality.
    """

    terms: tuple[Term, ...]

    def __str__(self) -> str:
        return format_block_sum(self)

    def is_zero(self) -> bool:
        return not self.terms


def block_sum(pairs: Iterable[tuple[CoeffLike, BlockProduct]]) -> BlockSum:
    """Canonicalize (coefficient, product) pairs into a BlockSum."""
    acc: dict[BlockProduct, Fraction] = {}
    for coeff, prod in pairs:
        acc[prod] = acc.get(prod, Fraction(0)) + Fraction(coeff)
    terms = tuple(sorted(
        ((c, p) for p, c in acc.items() if c != 0),
        key=lambda term: term[1].sort_key()))
    if terms:
        regs = terms[0][1].registers()
        for _, prod in terms[1:]:
            if prod.registers() != regs:
                raise ValueError("terms of a sum must share one register set")
    return BlockSum(terms)


UNIT = block_sum([(1, BlockProduct.of(()))])
ZERO = block_sum([])


def z_state(k: int, n: int, reg: Union[RegisterId, str]) -> BlockSum:
    """Single unnormalized Z_k(n) on the given register (squared norm C(n, k))."""
    if isinstance(reg, str):
        reg = RegisterId(reg, n)
    if reg.width != n:
        raise ValueError(f"register width {reg.width} does not match n={n}")
    if not 0 <= k <= n:
        raise ValueError(f"excitation count must lie in 0..{n}, got {k}")
    return block_sum([(1, BlockProduct.of((ZBlock(reg, k),)))])


def registers_of(a: BlockSum) -> tuple[RegisterId, ...]:
    """Register set of the sum, in canonical label order (empty for zero sums)."""
    return a.terms[0][1].registers() if a.terms else ()


def scale(a: BlockSum, c: CoeffLike) -> BlockSum:
    return block_sum([(Fraction(c) * coeff, prod) for coeff, prod in a.terms])


def add(a: BlockSum, b: BlockSum) -> BlockSum:
    return block_sum([*a.terms, *b.terms])


def tensor(a: BlockSum, b: BlockSum) -> BlockSum:
    """Distributive product of sums over disjoint register sets."""
    a_labels = {r.label for r in registers_of(a)}
    b_labels = {r.label for r in registers_of(b)}
    overlap = a_labels & b_labels
    if overlap:
        raise ValueError(f"register labels overlap: {sorted(overlap)}")
    return block_sum([
        (ca * cb, BlockProduct.of(pa.blocks + pb.blocks))
        for ca, pa in a.terms for cb, pb in b.terms])


def inner_product(a: BlockSum, b: BlockSum) -> Fraction:
    """Exact <a|b>, computed factor-wise.

    Factors with different excitation counts on the same register are
    orthogonal; matching factors contribute C(width, k).  Amplitudes are
    real, so no conjugation is involved.
    """
    if a.is_zero() or b.is_zero():
        return Fraction(0)
    if registers_of(a) != registers_of(b):
        raise ValueError("inner product requires matching register sets")
    total = Fraction(0)
    for ca, pa in a.terms:
        for cb, pb in b.terms:
            factor = ca * cb
            for ba, bb in zip(pa.blocks, pb.blocks):
                if ba.excitations != bb.excitations:
                    factor = Fraction(0)
                    break
                factor *= ba.norm_sq()
            total += factor
    return total


def norm_sq(a: BlockSum) -> Fraction:
    return inner_product(a, a)


def bit_flip(a: BlockSum) -> BlockSum:
    """Exchange the roles of 0 and 1: every Z_k(n) factor becomes Z_{n-k}(n)."""
    return block_sum([
        (c, BlockProduct.of(b.flipped() for b in p.blocks)) for c, p in a.terms])


def _resolve_label(a: BlockSum, reg: Union[RegisterId, str]) -> RegisterId:
    label = reg.label if isinstance(reg, RegisterId) else reg
    for r in registers_of(a):
        if r.label == label:
            if isinstance(reg, RegisterId) and reg != r:
                raise ValueError(f"register {label!r} has width {r.width}, "
                                 f"not {reg.width}")
            return r
    raise ValueError(f"unknown register {label!r}")


def split_register(a: BlockSum, reg: Union[RegisterId, str], m: int,
                   new_labels: tuple[str, str]) -> BlockSum:
    """Rewrite every Z_k(N) factor on `reg` as a sum of two-part factorizations.

    Z_k(N) becomes the sum of Z_j(m) Z_{k-j}(N-m) over two fresh registers,
    with j running over the values for which both parts have at least one
    basis string (so out-of-range summands simply never appear).  The dense
    expansion of the sum is preserved exactly.
    """
    old = _resolve_label(a, reg)
    if not 0 <= m <= old.width:
        raise ValueError(f"split point must lie in 0..{old.width}, got {m}")
    label_left, label_right = new_labels
    if label_left == label_right:
        raise ValueError("new labels must be distinct")
    remaining = {r.label for r in registers_of(a)} - {old.label}
    if label_left in remaining or label_right in remaining:
        raise ValueError("new labels collide with existing registers")
    reg_left = RegisterId(label_left, m)
    reg_right = RegisterId(label_right, old.width - m)
    pairs = []
    for coeff, prod in a.terms:
        k = prod.block_for(old.label).excitations
        rest = tuple(b for b in prod.blocks if b.register.label != old.label)
        lo = max(0, k - reg_right.width)
        hi = min(reg_left.width, k)
        for j in range(lo, hi + 1):
            pairs.append((coeff, BlockProduct.of(
                rest + (ZBlock(reg_left, j), ZBlock(reg_right, k - j)))))
    return block_sum(pairs)


def merge_registers(a: BlockSum, reg_left: Union[RegisterId, str],
                    reg_right: Union[RegisterId, str],
                    new_label: str) -> tuple[BlockSum, bool]:
    """Inverse of :func:`split_register`, as an all-or-nothing pattern match.

    The two registers collapse into one of combined width whenever, for every
    group of terms agreeing outside them, the excitation splittings form the
    complete two-part factorization pattern with one common coefficient.
    Otherwise the input is returned unchanged with a False indicator; nothing
    is ever partially collected, so canonical forms stay unique.
    """
    left = _resolve_label(a, reg_left)
    right = _resolve_label(a, reg_right)
    if left.label == right.label:
        raise ValueError("left and right registers must differ")
    others = {r.label for r in registers_of(a)} - {left.label, right.label}
    if new_label in others:
        raise ValueError(f"label {new_label!r} already in use")
    merged = RegisterId(new_label, left.width + right.width)

    groups: dict[tuple[tuple[ZBlock, ...], int], dict[int, Fraction]] = {}
    for coeff, prod in a.terms:
        rest = tuple(b for b in prod.blocks
                     if b.register.label not in (left.label, right.label))
        j = prod.block_for(left.label).excitations
        total = j + prod.block_for(right.label).excitations
        groups.setdefault((rest, total), {})[j] = coeff

    collected = []
    for (rest, total), by_j in groups.items():
        lo = max(0, total - right.width)
        hi = min(left.width, total)
        if set(by_j) != set(range(lo, hi + 1)):
            return a, False
        coeffs = set(by_j.values())
        if len(coeffs) != 1:
            return a, False
        collected.append((coeffs.pop(),
                          BlockProduct.of(rest + (ZBlock(merged, total),))))
    return block_sum(collected), True


def project_registers(a: BlockSum, target: BlockSum) -> BlockSum:
    """Partial inner product: contract `a` with `target` over the target's registers.

    Every register of the target must appear in `a` with the same width; the
    result lives on the remaining registers.
    """
    if target.is_zero():
        raise ValueError("projection target must be nonzero")
    if a.is_zero():
        return ZERO
    a_regs = {r.label: r for r in registers_of(a)}
    target_regs = registers_of(target)
    for r in target_regs:
        if a_regs.get(r.label) != r:
            raise ValueError(
                f"target register {r.label!r} not present with matching width")
    target_labels = {r.label for r in target_regs}
    pairs = []
    for ct, pt in target.terms:
        for ca, pa in a.terms:
            factor = ct * ca
            for bt in pt.blocks:
                if pa.block_for(bt.register.label).excitations != bt.excitations:
                    factor = Fraction(0)
                    break
                factor *= bt.norm_sq()
            if factor:
                rest = tuple(b for b in pa.blocks
                             if b.register.label not in target_labels)
                pairs.append((factor, BlockProduct.of(rest)))
    return block_sum(pairs)


def format_block_sum(a: BlockSum) -> str:
    """One term per line: `coeff * Z_k^label(n) ⊗ ...`; the zero sum prints `0`."""
    if a.is_zero():
        return "0"
    lines = []
    for coeff, prod in a.terms:
        if prod.blocks:
            factors = " ⊗ ".join(
                f"Z_{b.excitations}^{b.register.label}({b.register.width})"
                for b in prod.blocks)
        else:
            factors = "1"
        lines.append(f"{coeff} * {factors}")
    return "\n".join(lines)
