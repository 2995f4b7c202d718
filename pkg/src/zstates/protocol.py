"""Declarative multi-cycle distillation plans with exact accounting.

A plan lists the base states it consumes, the pairwise distillation cycles
to run, and the intended final state.  Execution is purely symbolic and
deterministic.  Cycles act on disjoint fresh states (the dataflow rules
below enforce single consumption), so the probability that an entire plan
succeeds is the product of its per-cycle success probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .blocks import BlockSum, RegisterId, z_state
from .dense import DENSE_CAP
from .distill import DistillationError, distill_step
from .verify import check_distillation_cell

__all__ = [
    "ORIGINS",
    "StateRef",
    "Cycle",
    "ProtocolPlan",
    "CycleResult",
    "ResourceLedger",
    "ExecutionReport",
    "InvalidPlanError",
    "PlanExecutionError",
    "produced_ref",
    "validate_plan",
    "execute_plan",
    "build_ledger",
    "plan_depth",
    "critical_path",
    "gen_exact_plan",
    "gen_incremental_plan",
    "gen_exponential_plan",
]

ORIGINS = ("input", "ancilla", "intermediate")


@dataclass(frozen=True)
class StateRef:
    """Descriptor of one Z_k(n) state appearing in a plan."""

    id: str
    k: int
    n: int
    origin: str


@dataclass(frozen=True)
class Cycle:
    """One distillation cycle: left + right -> produced, consuming 2k qubits."""

    left: StateRef
    right: StateRef
    produced_id: str


@dataclass(frozen=True)
class ProtocolPlan:
    k: int
    inputs: tuple[StateRef, ...]
    ancillas: tuple[StateRef, ...]
    cycles: tuple[Cycle, ...]
    target: tuple[int, int]  # (k, n)


@dataclass(frozen=True)
class CycleResult:
    produced: StateRef
    probability: Fraction
    oracle_checked: bool = False


@dataclass(frozen=True)
class ResourceLedger:
    """Exact qubit accounting: output = input + ancilla - 2k * cycles."""

    input_qubits: int
    ancilla_qubits: int
    consumed_qubits: int
    cycles: int
    output_qubits: int
    depth: int


@dataclass(frozen=True)
class ExecutionReport:
    cycles: tuple[CycleResult, ...]
    cumulative_success: Fraction
    ledger: ResourceLedger
    final: StateRef
    final_state: BlockSum


class InvalidPlanError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class PlanExecutionError(RuntimeError):
    def __init__(self, cycle_index: int, message: str):
        self.cycle_index = cycle_index
        super().__init__(f"cycle {cycle_index}: {message}")


def produced_ref(plan_k: int, cycle: Cycle) -> StateRef:
    return StateRef(cycle.produced_id, plan_k,
                    cycle.left.n + cycle.right.n - 2 * plan_k, "intermediate")


def validate_plan(plan: ProtocolPlan) -> list[str]:
    """Every violation found; an empty list means the plan is executable.

    Checks excitation-count consistency, the n >= 2k operand requirement,
    single consumption, dataflow ordering, id uniqueness, and the target
    arithmetic.
    """
    v: list[str] = []
    k = plan.k
    if k < 1:
        v.append(f"plan k must be >= 1, got {k}")
    if plan.target[0] != k:
        v.append(f"target excitation count {plan.target[0]} != plan k {k}")
    declared: dict[str, StateRef] = {}
    for origin, refs in (("input", plan.inputs), ("ancilla", plan.ancillas)):
        for ref in refs:
            if not ref.id:
                v.append(f"{origin} state with empty id")
            if ref.id in declared:
                v.append(f"duplicate state id {ref.id!r}")
            declared[ref.id] = ref
            if ref.origin != origin:
                v.append(f"state {ref.id!r} declared under {origin} "
                         f"but marked {ref.origin!r}")
            if ref.k != k:
                v.append(f"state {ref.id!r} has k={ref.k}, plan k={k}")
            if ref.n < 1:
                v.append(f"state {ref.id!r} has no qubits")
    seen = set(declared)
    available = dict(declared)
    consumed: set[str] = set()
    last: Optional[StateRef] = None
    for i, cyc in enumerate(plan.cycles):
        for side, ref in (("left", cyc.left), ("right", cyc.right)):
            if ref.k != k:
                v.append(f"cycle {i}: {side} operand has k={ref.k}, plan k={k}")
            if ref.n < 2 * k:
                v.append(f"cycle {i}: {side} operand Z_{ref.k}({ref.n}) has n < 2k")
            if ref.id in consumed:
                v.append(f"cycle {i}: {side} operand {ref.id!r} already consumed")
                continue
            have = available.get(ref.id)
            if have is None:
                v.append(f"cycle {i}: {side} operand {ref.id!r} is not an input, "
                         f"ancilla, or earlier product")
                continue
            if (have.k, have.n, have.origin) != (ref.k, ref.n, ref.origin):
                v.append(f"cycle {i}: {side} operand {ref.id!r} does not match "
                         f"its declaration Z_{have.k}({have.n})")
            consumed.add(ref.id)
            del available[ref.id]
        if not cyc.produced_id:
            v.append(f"cycle {i}: empty produced id")
        if cyc.produced_id in seen:
            v.append(f"cycle {i}: produced id {cyc.produced_id!r} already in use")
        out = produced_ref(k, cyc)
        seen.add(out.id)
        available[out.id] = out
        last = out
    if plan.cycles:
        if last is not None and (last.k, last.n) != plan.target:
            v.append(f"final product Z_{last.k}({last.n}) does not match target "
                     f"Z_{plan.target[0]}({plan.target[1]})")
    elif not any((r.k, r.n) == plan.target for r in plan.inputs):
        v.append("plan with no cycles has no input matching the target")
    return v


def build_ledger(plan: ProtocolPlan) -> ResourceLedger:
    input_qubits = sum(r.n for r in plan.inputs)
    ancilla_qubits = sum(r.n for r in plan.ancillas)
    consumed = 2 * plan.k * len(plan.cycles)
    return ResourceLedger(
        input_qubits=input_qubits,
        ancilla_qubits=ancilla_qubits,
        consumed_qubits=consumed,
        cycles=len(plan.cycles),
        output_qubits=input_qubits + ancilla_qubits - consumed,
        depth=plan_depth(plan),
    )


def plan_depth(plan: ProtocolPlan) -> int:
    """Longest dependency chain of cycles (0 for a plan with none)."""
    depth: dict[str, int] = {r.id: 0 for r in (*plan.inputs, *plan.ancillas)}
    best = 0
    for cyc in plan.cycles:
        d = 1 + max(depth.get(cyc.left.id, 0), depth.get(cyc.right.id, 0))
        depth[cyc.produced_id] = d
        best = max(best, d)
    return best


def critical_path(plan: ProtocolPlan) -> list[int]:
    """Qubit counts along the deepest dependency chain, base state first."""
    if not plan.cycles:
        return [plan.target[1]]
    depth: dict[str, int] = {r.id: 0 for r in (*plan.inputs, *plan.ancillas)}
    by_id: dict[str, Cycle] = {}
    for cyc in plan.cycles:
        depth[cyc.produced_id] = 1 + max(depth[cyc.left.id], depth[cyc.right.id])
        by_id[cyc.produced_id] = cyc
    cur = plan.cycles[-1]
    path = [produced_ref(plan.k, cur).n]
    while True:
        pick = cur.left if depth[cur.left.id] >= depth[cur.right.id] else cur.right
        path.append(pick.n)
        nxt = by_id.get(pick.id)
        if nxt is None:
            break
        cur = nxt
    path.reverse()
    return path


def execute_plan(plan: ProtocolPlan, verify_with_oracle: bool = False,
                 dense_cap: int = DENSE_CAP) -> ExecutionReport:
    """Run every cycle in order, symbolically, with exact probabilities.

    With verify_with_oracle set, each cycle whose operands fit under the
    dense cap is also replayed on the brute-force expansion and the two
    routes must agree.  Errors name the failing cycle index.
    """
    violations = validate_plan(plan)
    if violations:
        raise InvalidPlanError(violations)
    states: dict[str, BlockSum] = {}
    depth: dict[str, int] = {}
    for ref in (*plan.inputs, *plan.ancillas):
        states[ref.id] = z_state(ref.k, ref.n, RegisterId(ref.id, ref.n))
        depth[ref.id] = 0
    results: list[CycleResult] = []
    cumulative = Fraction(1)
    final_ref: Optional[StateRef] = None
    for i, cyc in enumerate(plan.cycles):
        left = states.pop(cyc.left.id)
        right = states.pop(cyc.right.id)
        try:
            outcome = distill_step(left, right, out_label=cyc.produced_id)
        except (ValueError, DistillationError) as exc:
            raise PlanExecutionError(i, str(exc)) from exc
        checked = False
        if verify_with_oracle and cyc.left.n + cyc.right.n <= dense_cap:
            problems = check_distillation_cell(plan.k, cyc.left.n, cyc.right.n,
                                               cap=dense_cap)
            if problems:
                raise PlanExecutionError(
                    i, "oracle disagreement: " + "; ".join(problems))
            checked = True
        out = produced_ref(plan.k, cyc)
        states[out.id] = outcome.post_state
        depth[out.id] = 1 + max(depth[cyc.left.id], depth[cyc.right.id])
        cumulative *= outcome.success_probability
        results.append(CycleResult(out, outcome.success_probability, checked))
        final_ref = out
    if final_ref is None:
        final_ref = next(r for r in plan.inputs if (r.k, r.n) == plan.target)
    return ExecutionReport(tuple(results), cumulative, build_ledger(plan),
                           final_ref, states[final_ref.id])


def _check_generator_domain(k: int, n: int, name: str, minimum: int) -> None:
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n < minimum:
        raise ValueError(f"{name} must be at least {minimum}, got {n}")


def gen_exact_plan(k: int, n1: int, n2: int) -> ProtocolPlan:
    """Lossless two-cycle schedule reaching Z_k(n1 + n2).

    All n1 + n2 input qubits survive; only the 4k qubits of one locally
    generated Z_k(4k) ancilla are consumed, 2k per projection.
    """
    _check_generator_domain(k, n1, "n1", 2 * k)
    _check_generator_domain(k, n2, "n2", 2 * k)
    in1 = StateRef("in1", k, n1, "input")
    in2 = StateRef("in2", k, n2, "input")
    anc = StateRef("anc", k, 4 * k, "ancilla")
    first = Cycle(anc, in1, "mid")
    second = Cycle(produced_ref(k, first), in2, "out")
    return ProtocolPlan(k, (in1, in2), (anc,), (first, second), (k, n1 + n2))


def gen_incremental_plan(k: int, n_target: int) -> ProtocolPlan:
    """Grow one qubit per cycle from a supply of Z_k(2k+1) base states.

    Cycle i distills the current Z_k(2k+i) with a fresh base state into
    Z_k(2k+i+1); n_target - 2k - 1 cycles in total.  The smallest target,
    n_target = 2k+1, is a base state itself and needs no cycles.
    """
    base_n = 2 * k + 1
    _check_generator_domain(k, n_target, "n_target", base_n)
    steps = n_target - base_n
    bases = tuple(StateRef(f"base{i + 1}", k, base_n, "input")
                  for i in range(max(1, steps + 1)))
    cycles: list[Cycle] = []
    current = bases[0]
    for i in range(steps):
        cyc = Cycle(current, bases[i + 1], f"s{i + 1}")
        cycles.append(cyc)
        current = produced_ref(k, cyc)
    return ProtocolPlan(k, bases, (), tuple(cycles), (k, n_target))


def gen_exponential_plan(k: int, n_target: int) -> ProtocolPlan:
    """Double the added-qubit span per layer, then fine-tune by +1 steps.

    Pairing two equal Z_k(2k+s) states yields Z_k(2k+2s), so a balanced
    tree reaches span s = 2**m at dependency depth m using 2**m - 1 cycles.
    The largest power of two not exceeding n_target - 2k is built first
    (doubling has the larger per-cycle yield); any remaining gap is closed
    with incremental cycles, one fresh base state each.  Total cycle count
    is linear in the span; the dependency depth is what stays logarithmic.
    """
    base_n = 2 * k + 1
    _check_generator_domain(k, n_target, "n_target", base_n)
    span = n_target - 2 * k
    bases: list[StateRef] = []
    cycles: list[Cycle] = []
    counter = 0

    def fresh_base() -> StateRef:
        ref = StateRef(f"base{len(bases) + 1}", k, base_n, "input")
        bases.append(ref)
        return ref

    def fresh_id() -> str:
        nonlocal counter
        counter += 1
        return f"s{counter}"

    def build(s: int) -> StateRef:
        if s == 1:
            return fresh_base()
        left = build(s // 2)
        right = build(s // 2)
        cyc = Cycle(left, right, fresh_id())
        cycles.append(cyc)
        return produced_ref(k, cyc)

    top = 1 << (span.bit_length() - 1)
    current = build(top)
    for _ in range(span - top):
        cyc = Cycle(current, fresh_base(), fresh_id())
        cycles.append(cyc)
        current = produced_ref(k, cyc)
    return ProtocolPlan(k, tuple(bases), (), tuple(cycles), (k, n_target))
